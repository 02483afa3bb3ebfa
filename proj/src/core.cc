#include "nerkit/core.h"

#include <sstream>

#include "nerkit/error.h"
#include "nerkit/utf8.h"

namespace nerkit {

namespace {

constexpr std::array<std::string_view, 7> kTypeNames = {
    "Person", "Location", "Organization", "Company", "Product", "POI", "FictionChar",
};

struct Span {
  size_t begin;
  size_t end;  // exclusive
};

// Shared overlap/nesting/bounds logic over half-open spans.
ValidationReport validate_spans(const std::vector<Span>& spans, size_t lower, size_t upper,
                                std::string_view unit) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, size_t a, size_t b, std::string message) {
    report.violations.push_back({kind, a, b, std::move(message)});
  };
  for (size_t i = 0; i < spans.size(); ++i) {
    const Span& s = spans[i];
    std::ostringstream where;
    where << "mention " << i << " [" << s.begin << "," << s.end << ")";
    if (s.begin >= s.end) {
      add(ViolationKind::kEmptySpan, i, i, where.str() + " is empty");
    } else if (s.begin < lower || s.end > upper) {
      std::ostringstream msg;
      msg << where.str() << " exceeds " << unit << " range [" << lower << "," << upper << ")";
      add(ViolationKind::kOutOfBounds, i, i, msg.str());
    }
    if (i > 0 && spans[i - 1].begin > s.begin) {
      add(ViolationKind::kUnsorted, i - 1, i, where.str() + " starts before its predecessor");
    }
  }
  for (size_t i = 0; i < spans.size(); ++i) {
    for (size_t j = i + 1; j < spans.size(); ++j) {
      const Span& a = spans[i];
      const Span& b = spans[j];
      if (a.begin >= a.end || b.begin >= b.end) continue;
      if (a.end <= b.begin || b.end <= a.begin) continue;
      bool a_in_b = b.begin <= a.begin && a.end <= b.end;
      bool b_in_a = a.begin <= b.begin && b.end <= a.end;
      std::ostringstream msg;
      msg << "mentions " << i << " [" << a.begin << "," << a.end << ") and " << j << " ["
          << b.begin << "," << b.end << ")";
      if (a_in_b || b_in_a) {
        add(ViolationKind::kNesting, i, j, msg.str() + " are nested");
      } else {
        add(ViolationKind::kOverlap, i, j, msg.str() + " overlap");
      }
    }
  }
  return report;
}

}  // namespace

std::string_view to_string(NeType type) { return kTypeNames[static_cast<size_t>(type)]; }

std::optional<NeType> try_parse_ne_type(std::string_view name) {
  for (size_t i = 0; i < kTypeNames.size(); ++i) {
    if (kTypeNames[i] == name) return kAllNeTypes[i];
  }
  return std::nullopt;
}

NeType parse_ne_type(std::string_view name) {
  auto type = try_parse_ne_type(name);
  if (!type) throw UnknownTypeError(std::string(name));
  return *type;
}

std::string composite_label(const EntityLabel& label) {
  std::string out(to_string(label.ne_type));
  if (label.sub_type) out += "." + *label.sub_type;
  return out;
}

std::vector<const Token*> Sentence::words() const {
  std::vector<const Token*> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) {
    if (!t.is_multiword_range) out.push_back(&t);
  }
  return out;
}

size_t Sentence::word_count() const {
  size_t n = 0;
  for (const Token& t : tokens) n += !t.is_multiword_range;
  return n;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kOverlap: return "overlap";
    case ViolationKind::kNesting: return "nesting";
    case ViolationKind::kOutOfBounds: return "out_of_bounds";
    case ViolationKind::kEmptySpan: return "empty_span";
    case ViolationKind::kUnsorted: return "unsorted";
  }
  return "?";
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::string out;
  for (const Violation& v : violations) {
    if (!out.empty()) out += "; ";
    out += std::string(nerkit::to_string(v.kind)) + ": " + v.message;
  }
  return out;
}

ValidationReport validate_mentions(const Sentence& sentence) {
  std::vector<Span> spans;
  spans.reserve(sentence.mentions.size());
  for (const Mention& m : sentence.mentions) spans.push_back({m.start, m.end});
  return validate_spans(spans, 0, utf8::length(sentence.raw_text), "text");
}

ValidationReport validate_token_mentions(const std::vector<TokenMention>& mentions,
                                         size_t n_words) {
  std::vector<Span> spans;
  spans.reserve(mentions.size());
  for (const TokenMention& m : mentions) {
    // Map inclusive 1-based word ranges onto half-open spans; reversed
    // ranges collapse to empty.
    size_t begin = m.first_token < 0 ? 0 : static_cast<size_t>(m.first_token);
    size_t end = m.last_token < m.first_token ? begin : static_cast<size_t>(m.last_token) + 1;
    spans.push_back({begin, end});
  }
  return validate_spans(spans, 1, n_words + 1, "word");
}

}  // namespace nerkit
