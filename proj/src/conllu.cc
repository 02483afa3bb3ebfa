#include "nerkit/conllu.h"

#include <istream>
#include <ostream>
#include <sstream>

#include "nerkit/error.h"

namespace nerkit::conllu {

namespace {

enum class Layout { kAuto, kPlain, kExtended };

constexpr size_t kPlainColumns = 10;
constexpr size_t kExtendedColumns = 13;

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  size_t begin = 0;
  for (;;) {
    size_t tab = line.find('\t', begin);
    out.push_back(line.substr(begin, tab - begin));
    if (tab == std::string::npos) break;
    begin = tab + 1;
  }
  return out;
}

bool parse_positive(const std::string& s, int* value) {
  if (s.empty() || s.size() > 9) return false;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  if (v <= 0) return false;
  *value = v;
  return true;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// Value of a "# sent_id = X" comment, if this is one.
std::optional<std::string> sent_id_of(const std::string& comment) {
  std::string body = trim(comment.substr(1));
  if (body.rfind("sent_id", 0) != 0) return std::nullopt;
  std::string rest = trim(body.substr(7));
  if (rest.empty() || rest[0] != '=') return std::nullopt;
  return trim(rest.substr(1));
}

struct NeColumns {
  std::string tag;
  std::string eid;
  std::string name;
  size_t line_no;
};

class Reader {
 public:
  Reader(std::istream& in, Layout layout, bio::DecodeMode mode)
      : in_(in), layout_(layout), mode_(mode) {}

  std::vector<Sentence> read() {
    std::vector<Sentence> out;
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.empty()) {
        if (!started()) fail("empty sentence");
        out.push_back(finish(out.size() + 1));
      } else if (line[0] == '#') {
        if (!current_.tokens.empty()) fail("comment line inside a sentence");
        if (auto id = sent_id_of(line)) sent_id_ = *id;
        current_.comments.push_back(line);
      } else {
        add_token(line);
      }
    }
    if (started()) out.push_back(finish(out.size() + 1));
    return out;
  }

  bool extended() const { return layout_ == Layout::kExtended; }

 private:
  [[noreturn]] void fail(const std::string& message) const { fail_at(message, line_no_); }

  [[noreturn]] void fail_at(const std::string& message, size_t line_no) const {
    throw ParseError("line " + std::to_string(line_no) + ": " + message, line_no);
  }

  bool started() const { return !current_.tokens.empty() || !current_.comments.empty(); }

  void add_token(const std::string& line) {
    std::vector<std::string> cols = split_tabs(line);
    if (layout_ == Layout::kAuto) {
      if (cols.size() == kPlainColumns) {
        layout_ = Layout::kPlain;
      } else if (cols.size() == kExtendedColumns) {
        layout_ = Layout::kExtended;
      }
    }
    size_t expected = layout_ == Layout::kExtended ? kExtendedColumns : kPlainColumns;
    if (cols.size() != expected) {
      fail("expected " + std::to_string(expected) + " columns, found " +
           std::to_string(cols.size()));
    }

    Token token;
    token.form = cols[1];
    if (token.form.empty()) fail("empty FORM");
    if (cols[3] != "_") token.upos = cols[3];
    token.source_line = line;
    if (layout_ == Layout::kExtended) {
      size_t cut = 0;
      for (size_t i = 0; i < kPlainColumns; ++i) cut = line.find('\t', cut) + 1;
      token.source_line.resize(cut - 1);
    }

    const std::string& id = cols[0];
    size_t dash = id.find('-');
    if (id.find('.') != std::string::npos) fail("empty nodes (decimal IDs) are not supported");
    if (dash != std::string::npos) {
      int first = 0, last = 0;
      if (!parse_positive(id.substr(0, dash), &first) ||
          !parse_positive(id.substr(dash + 1), &last) || last <= first) {
        fail("malformed range ID '" + id + "'");
      }
      if (first != next_word_ || range_end_ >= next_word_) {
        fail("range " + id + " does not start at word " + std::to_string(next_word_));
      }
      token.index = first;
      token.is_multiword_range = true;
      token.range_span = std::make_pair(first, last);
      range_end_ = last;
      range_line_ = line_no_;
      if (extended() && (cols[10] != "_" || cols[11] != "_" || cols[12] != "_")) {
        fail("range line must carry '_' in the entity columns");
      }
    } else {
      int index = 0;
      if (!parse_positive(id, &index)) fail("malformed ID '" + id + "'");
      if (index != next_word_) {
        fail("non-contiguous ID " + id + ", expected " + std::to_string(next_word_));
      }
      token.index = index;
      ++next_word_;
      if (extended()) ne_.push_back({cols[10], cols[11], cols[12], line_no_});
    }
    current_.tokens.push_back(std::move(token));
  }

  Sentence finish(size_t ordinal) {
    if (current_.tokens.empty()) fail("sentence without tokens");
    if (range_end_ >= next_word_) {
      fail_at("range does not cover following words", range_line_);
    }
    Sentence s = std::move(current_);
    s.sent_id = sent_id_.empty() ? std::to_string(ordinal) : sent_id_;
    if (extended()) s.token_mentions = decode_entities();

    current_ = Sentence();
    sent_id_.clear();
    ne_.clear();
    next_word_ = 1;
    range_end_ = 0;
    return s;
  }

  std::vector<TokenMention> decode_entities() const {
    std::vector<bio::Tag> tags;
    tags.reserve(ne_.size());
    for (const NeColumns& c : ne_) {
      try {
        tags.push_back(bio::Tag::parse(c.tag));
      } catch (const Error& e) {
        fail_at(e.what(), c.line_no);
      }
    }
    std::vector<TokenMention> mentions;
    try {
      mentions = bio::decode(tags, mode_);
    } catch (const bio::DecodeError& e) {
      fail_at(e.what(), ne_[e.position() - 1].line_no);
    } catch (const UnknownTypeError& e) {
      // Locate the first tag naming the bad type.
      for (const NeColumns& c : ne_) {
        if (c.tag.find(e.value()) != std::string::npos) fail_at(e.what(), c.line_no);
      }
      fail(e.what());
    }
    auto value = [](const std::string& s) {
      return s == "_" ? std::nullopt : std::optional<std::string>(s);
    };
    if (mode_ == bio::DecodeMode::kStrict) {
      for (const NeColumns& c : ne_) {
        if (c.tag == "O" && (c.eid != "_" || c.name != "_")) {
          fail_at("entity id or name on a token outside any mention", c.line_no);
        }
      }
    }
    for (TokenMention& m : mentions) {
      const NeColumns& head = ne_[m.first_token - 1];
      m.eid = value(head.eid);
      m.name = value(head.name);
      if (mode_ != bio::DecodeMode::kStrict) continue;
      for (int i = m.first_token + 1; i <= m.last_token; ++i) {
        const NeColumns& c = ne_[i - 1];
        if (c.eid != head.eid || c.name != head.name) {
          fail_at("entity id or name differs within a mention", c.line_no);
        }
      }
    }
    return mentions;
  }

  std::istream& in_;
  Layout layout_;
  bio::DecodeMode mode_;
  size_t line_no_ = 0;

  Sentence current_;
  std::string sent_id_;
  std::vector<NeColumns> ne_;
  int next_word_ = 1;
  int range_end_ = 0;
  size_t range_line_ = 0;
};

void check_column_value(const std::string& value, const Sentence& s) {
  if (value.empty() || value == "_" || value.find_first_of("\t\n") != std::string::npos) {
    throw ValidationError("sentence " + s.sent_id + ": entity attribute '" + value +
                          "' cannot be written to a column");
  }
}

}  // namespace

std::vector<Sentence> parse(std::istream& in) {
  return Reader(in, Layout::kPlain, bio::DecodeMode::kStrict).read();
}

std::vector<Sentence> parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

std::vector<Sentence> parse_extended(std::istream& in, bio::DecodeMode mode) {
  return Reader(in, Layout::kExtended, mode).read();
}

std::vector<Sentence> parse_extended_string(const std::string& text, bio::DecodeMode mode) {
  std::istringstream in(text);
  return parse_extended(in, mode);
}

std::vector<Sentence> parse_any(std::istream& in, bool* extended) {
  Reader reader(in, Layout::kAuto, bio::DecodeMode::kStrict);
  auto out = reader.read();
  if (extended) *extended = reader.extended();
  return out;
}

std::string token_line(const Token& token) {
  if (!token.source_line.empty()) return token.source_line;
  std::string id = std::to_string(token.index);
  if (token.is_multiword_range && token.range_span) {
    id = std::to_string(token.range_span->first) + "-" + std::to_string(token.range_span->second);
  }
  std::string upos = token.is_multiword_range ? "_" : token.upos.value_or("_");
  return id + "\t" + token.form + "\t_\t" + upos + "\t_\t_\t_\t_\t_\t_";
}

void emit(const std::vector<Sentence>& sentences, std::ostream& out) {
  for (const Sentence& s : sentences) {
    for (const std::string& c : s.comments) out << c << '\n';
    for (const Token& t : s.tokens) out << token_line(t) << '\n';
    out << '\n';
  }
}

void emit_extended(const std::vector<Sentence>& sentences, std::ostream& out) {
  for (const Sentence& s : sentences) {
    size_t n_words = s.word_count();
    std::vector<bio::Tag> tags;
    try {
      tags = bio::encode(s.token_mentions, n_words);
    } catch (const ValidationError& e) {
      throw ValidationError("sentence " + s.sent_id + ": " + e.what());
    }
    for (const Token& t : s.tokens) {
      if (!t.is_multiword_range || !t.range_span) continue;
      auto [a, b] = *t.range_span;
      for (const TokenMention& m : s.token_mentions) {
        if ((m.first_token > a && m.first_token <= b) || (m.last_token >= a && m.last_token < b)) {
          throw ValidationError("sentence " + s.sent_id + ": mention boundary inside range " +
                                std::to_string(a) + "-" + std::to_string(b));
        }
      }
    }
    std::vector<const TokenMention*> owner(n_words, nullptr);
    for (const TokenMention& m : s.token_mentions) {
      if (m.eid) check_column_value(*m.eid, s);
      if (m.name) check_column_value(*m.name, s);
      for (int i = m.first_token; i <= m.last_token; ++i) owner[i - 1] = &m;
    }

    for (const std::string& c : s.comments) out << c << '\n';
    size_t word = 0;
    for (const Token& t : s.tokens) {
      out << token_line(t);
      if (t.is_multiword_range) {
        out << "\t_\t_\t_\n";
        continue;
      }
      const TokenMention* m = owner[word];
      out << '\t' << tags[word].str() << '\t' << (m && m->eid ? *m->eid : "_") << '\t'
          << (m && m->name ? *m->name : "_") << '\n';
      ++word;
    }
    out << '\n';
  }
}

std::string emit_extended_string(const std::vector<Sentence>& sentences) {
  std::ostringstream out;
  emit_extended(sentences, out);
  return out.str();
}

}  // namespace nerkit::conllu
