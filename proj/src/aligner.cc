#include "nerkit/aligner.h"

#include <map>
#include <sstream>

#include "nerkit/error.h"
#include "nerkit/utf8.h"
#include "parallel.h"

namespace nerkit::align {

namespace {

std::string quote(std::u32string_view text) { return "\"" + utf8::encode(text) + "\""; }

AlignmentError make_error(ErrorKind kind, Side side, std::string detail) {
  AlignmentError e;
  e.kind = kind;
  e.side = side;
  e.detail = std::move(detail);
  return e;
}

// Tabs and newlines would break the record format.
std::string flatten(std::string s) {
  for (char& c : s) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUnalignedToken: return "unaligned_token";
    case ErrorKind::kUnalignedMention: return "unaligned_mention";
    case ErrorKind::kTextMismatch: return "text_mismatch";
  }
  return "?";
}

std::string_view to_string(Side side) {
  switch (side) {
    case Side::kRawText: return "raw_text";
    case Side::kTokens: return "tokens";
    case Side::kEither: return "either";
  }
  return "?";
}

std::variant<AlignmentMap, AlignmentError> build_map(const std::string& raw_text,
                                                     const std::vector<Token>& tokens) {
  const std::u32string raw = utf8::decode(raw_text);
  AlignmentMap map;
  size_t pos = 0;
  auto skip_space = [&] {
    while (pos < raw.size() && utf8::is_space(raw[pos])) ++pos;
  };
  int covered_until = 0;
  std::pair<size_t, size_t> range_chars{0, 0};

  for (const Token& token : tokens) {
    if (!token.is_multiword_range && token.index <= covered_until) {
      map.entries.push_back({range_chars.first, range_chars.second, token.index});
      continue;
    }
    const std::u32string form = utf8::decode(token.form);
    std::ostringstream who;
    who << (token.is_multiword_range ? "range token " : "token ") << token.index << " "
        << quote(form);

    bool has_content = false;
    for (char32_t c : form) has_content |= !utf8::is_space(c);
    if (!has_content) {
      return make_error(ErrorKind::kUnalignedToken, Side::kTokens,
                        who.str() + " has no non-space characters");
    }
    skip_space();
    if (pos >= raw.size()) {
      return make_error(ErrorKind::kUnalignedToken, Side::kTokens,
                        who.str() + " has no counterpart, raw text exhausted at char " +
                            std::to_string(pos));
    }
    const size_t start = pos;
    for (size_t k = 0; k < form.size(); ++k) {
      if (utf8::is_space(form[k])) {
        skip_space();
        continue;
      }
      if (pos >= raw.size() || utf8::fold(raw[pos]) != utf8::fold(form[k])) {
        size_t stop = std::min(raw.size(), start + std::max(form.size(), pos - start + 1));
        std::u32string_view fragment = std::u32string_view(raw).substr(start, stop - start);
        std::ostringstream detail;
        detail << "char " << pos << ": raw " << quote(fragment) << " vs " << who.str();
        return make_error(ErrorKind::kTextMismatch, Side::kEither, detail.str());
      }
      ++pos;
    }
    if (token.is_multiword_range && token.range_span) {
      covered_until = token.range_span->second;
      range_chars = {start, pos};
    } else {
      map.entries.push_back({start, pos, token.index});
    }
  }
  skip_space();
  if (pos < raw.size()) {
    return make_error(ErrorKind::kUnalignedToken, Side::kRawText,
                      "raw text " + quote(std::u32string_view(raw).substr(pos)) + " at char " +
                          std::to_string(pos) + " left over after the last token");
  }
  return map;
}

Projection project_mentions(const std::vector<Mention>& mentions, const AlignmentMap& map,
                            std::string_view raw_text) {
  std::map<size_t, int> by_start;
  std::map<size_t, int> by_end;
  for (const MapEntry& e : map.entries) {
    by_start.emplace(e.char_start, e.token_index);  // keeps the first word
    by_end[e.char_end] = e.token_index;             // keeps the last word
  }
  std::u32string raw = utf8::decode(raw_text);
  Projection out;
  for (const Mention& m : mentions) {
    auto first = by_start.find(m.start);
    auto last = by_end.find(m.end);
    if (first != by_start.end() && last != by_end.end() && first->second <= last->second) {
      TokenMention tm;
      static_cast<EntityLabel&>(tm) = m;
      tm.first_token = first->second;
      tm.last_token = last->second;
      out.mentions.push_back(std::move(tm));
      continue;
    }
    std::ostringstream detail;
    detail << "mention [" << m.start << "," << m.end << ") " << composite_label(m);
    if (m.start < m.end && m.end <= raw.size()) {
      detail << " " << quote(std::u32string_view(raw).substr(m.start, m.end - m.start));
    }
    if (first == by_start.end()) {
      detail << " starts inside a token";
    } else if (last == by_end.end()) {
      detail << " ends inside a token";
    } else {
      detail << " has reversed token boundaries";
    }
    out.errors.push_back(make_error(ErrorKind::kUnalignedMention, Side::kRawText, detail.str()));
  }
  return out;
}

std::string ErrorReport::records() const {
  std::string out;
  for (const AlignmentError& e : errors) {
    out += flatten(e.sentence_id) + "\t" + std::string(to_string(e.kind)) + "\t" +
           flatten(e.detail) + "\n";
  }
  return out;
}

std::string ErrorReport::summary() const {
  std::ostringstream out;
  out << "alignment errors: " << errors.size() << "\n";
  for (size_t k = 0; k < kErrorKindCount; ++k) {
    out << "  " << to_string(static_cast<ErrorKind>(k)) << ": " << by_kind[k] << "\n";
  }
  out << "by side:\n";
  for (size_t s = 0; s < kSideCount; ++s) {
    out << "  " << to_string(static_cast<Side>(s)) << ": " << by_side[s] << "\n";
  }
  out << "mentions projected: " << mentions_projected << " / " << mentions_total << "\n";
  for (const AlignmentError& e : errors) {
    out << "sentence " << e.sentence_id << " (#" << e.sentence_index + 1 << ") "
        << to_string(e.kind) << ": " << e.detail << "\n";
  }
  return out.str();
}

AlignmentResult align_corpus(const enamex::Document& doc, std::vector<Sentence> treebank,
                             unsigned threads) {
  if (doc.sentences.size() != treebank.size()) {
    throw Error("sentence count mismatch: " + std::to_string(doc.sentences.size()) +
                " annotated sentences vs " + std::to_string(treebank.size()) +
                " treebank sentences");
  }
  const size_t n = treebank.size();
  std::vector<std::vector<AlignmentError>> errors(n);

  internal::parallel_for(n, threads, [&](size_t i) {
    Sentence& s = treebank[i];
    const Sentence& annotated = doc.sentences[i];
    s.raw_text = annotated.raw_text;
    s.mentions = annotated.mentions;
    s.token_mentions.clear();
    auto built = build_map(s.raw_text, s.tokens);
    if (auto* error = std::get_if<AlignmentError>(&built)) {
      if (!s.mentions.empty()) {
        error->detail += " (" + std::to_string(s.mentions.size()) + " mention(s) not projected)";
      }
      errors[i].push_back(std::move(*error));
    } else {
      Projection p = project_mentions(s.mentions, std::get<AlignmentMap>(built), s.raw_text);
      s.token_mentions = std::move(p.mentions);
      errors[i] = std::move(p.errors);
    }
    for (AlignmentError& e : errors[i]) {
      e.sentence_index = i;
      e.sentence_id = s.sent_id;
    }
  });

  AlignmentResult result;
  for (size_t i = 0; i < n; ++i) {
    result.report.mentions_total += treebank[i].mentions.size();
    result.report.mentions_projected += treebank[i].token_mentions.size();
    for (AlignmentError& e : errors[i]) {
      ++result.report.by_kind[static_cast<size_t>(e.kind)];
      ++result.report.by_side[static_cast<size_t>(e.side)];
      result.report.errors.push_back(std::move(e));
    }
  }
  result.corpus = std::move(treebank);
  return result;
}

}  // namespace nerkit::align
