#include "nerkit/enamex.h"

#include <optional>

#include "nerkit/error.h"
#include "nerkit/utf8.h"

namespace nerkit::enamex {

namespace {

constexpr std::u32string_view kOpenTag = U"<ENAMEX";
constexpr std::u32string_view kCloseTag = U"</ENAMEX>";

bool is_name_char(char32_t c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '-' || c == ':';
}

class LineParser {
 public:
  LineParser(std::u32string_view line, size_t line_no) : line_(line), line_no_(line_no) {}

  Sentence parse() {
    Sentence sentence;
    sentence.sent_id = std::to_string(line_no_);
    std::u32string raw;
    std::optional<Mention> open;
    size_t open_column = 0;

    while (pos_ < line_.size()) {
      char32_t c = line_[pos_];
      if (c == '<') {
        if (line_.substr(pos_, kCloseTag.size()) == kCloseTag) {
          if (!open) fail("closing </ENAMEX> without an open element");
          if (raw.size() == open->start) fail("empty ENAMEX element");
          open->end = raw.size();
          sentence.mentions.push_back(std::move(*open));
          open.reset();
          pos_ += kCloseTag.size();
        } else if (line_.substr(pos_, kOpenTag.size()) == kOpenTag &&
                   pos_ + kOpenTag.size() < line_.size() &&
                   (utf8::is_space(line_[pos_ + kOpenTag.size()]) ||
                    line_[pos_ + kOpenTag.size()] == '>')) {
          if (open) fail("nested ENAMEX element");
          open_column = pos_ + 1;
          pos_ += kOpenTag.size();
          open = parse_attributes();
          open->start = raw.size();
        } else {
          fail("unexpected '<'");
        }
      } else if (c == '&') {
        raw.push_back(parse_reference());
      } else {
        raw.push_back(c);
        ++pos_;
      }
    }
    if (open) {
      throw ParseError("sentence " + std::to_string(line_no_) + ", column " +
                           std::to_string(open_column) + ": unclosed ENAMEX element",
                       line_no_, open_column);
    }
    sentence.raw_text = utf8::encode(raw);
    return sentence;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError("sentence " + std::to_string(line_no_) + ", column " +
                         std::to_string(pos_ + 1) + ": " + message,
                     line_no_, pos_ + 1);
  }

  // At '&'; consumes through ';'.
  char32_t parse_reference() {
    size_t semi = line_.find(';', pos_);
    if (semi == std::u32string_view::npos || semi - pos_ > 12) fail("unhandled '&'");
    std::u32string_view name = line_.substr(pos_ + 1, semi - pos_ - 1);
    char32_t value = 0;
    if (name == U"amp") {
      value = '&';
    } else if (name == U"lt") {
      value = '<';
    } else if (name == U"gt") {
      value = '>';
    } else if (name == U"quot") {
      value = '"';
    } else if (name.size() >= 2 && name[0] == '#') {
      bool hex = name[1] == 'x' || name[1] == 'X';
      std::u32string_view digits = name.substr(hex ? 2 : 1);
      if (digits.empty()) fail("malformed character reference");
      uint32_t code = 0;
      for (char32_t d : digits) {
        uint32_t v;
        if (d >= '0' && d <= '9') {
          v = d - '0';
        } else if (hex && d >= 'a' && d <= 'f') {
          v = d - 'a' + 10;
        } else if (hex && d >= 'A' && d <= 'F') {
          v = d - 'A' + 10;
        } else {
          fail("malformed character reference");
        }
        code = code * (hex ? 16 : 10) + v;
        if (code > 0x10FFFF) fail("character reference out of range");
      }
      if (code == 0 || (code >= 0xD800 && code <= 0xDFFF)) fail("invalid character reference");
      value = static_cast<char32_t>(code);
    } else {
      fail("unhandled '&'");
    }
    pos_ = semi + 1;
    return value;
  }

  void skip_space() {
    while (pos_ < line_.size() && utf8::is_space(line_[pos_])) ++pos_;
  }

  // After "<ENAMEX"; consumes through '>'.
  Mention parse_attributes() {
    Mention m;
    bool have_type = false, have_sub = false, have_eid = false, have_name = false;
    for (;;) {
      skip_space();
      if (pos_ >= line_.size()) fail("unterminated ENAMEX start tag");
      if (line_[pos_] == '>') {
        ++pos_;
        break;
      }
      if (line_[pos_] == '/') fail("self-closing ENAMEX element");
      size_t attr_column = pos_ + 1;
      size_t name_start = pos_;
      while (pos_ < line_.size() && is_name_char(line_[pos_])) ++pos_;
      if (pos_ == name_start) fail("expected attribute name");
      std::string attr = utf8::encode(line_.substr(name_start, pos_ - name_start));
      skip_space();
      if (pos_ >= line_.size() || line_[pos_] != '=') fail("expected '=' after attribute " + attr);
      ++pos_;
      skip_space();
      if (pos_ >= line_.size() || (line_[pos_] != '"' && line_[pos_] != '\'')) {
        fail("expected quoted value for attribute " + attr);
      }
      char32_t quote = line_[pos_++];
      std::u32string value;
      while (pos_ < line_.size() && line_[pos_] != quote) {
        if (line_[pos_] == '<') fail("'<' in attribute value");
        if (line_[pos_] == '&') {
          value.push_back(parse_reference());
        } else {
          value.push_back(line_[pos_++]);
        }
      }
      if (pos_ >= line_.size()) fail("unterminated attribute value");
      ++pos_;
      std::string text = utf8::encode(value);

      auto once = [&](bool& seen) {
        if (seen) fail("duplicate attribute " + attr);
        seen = true;
      };
      if (attr == "type") {
        once(have_type);
        auto type = try_parse_ne_type(text);
        if (!type) {
          throw UnknownTypeError(text, "sentence " + std::to_string(line_no_) + ", column " +
                                           std::to_string(attr_column));
        }
        m.ne_type = *type;
      } else if (attr == "sub_type") {
        once(have_sub);
        m.sub_type = std::move(text);
      } else if (attr == "eid") {
        once(have_eid);
        if (text != "null") m.eid = std::move(text);
      } else if (attr == "name") {
        once(have_name);
        m.name = std::move(text);
      } else {
        fail("unexpected attribute " + attr);
      }
    }
    if (!have_type) fail("ENAMEX element without type attribute");
    return m;
  }

  std::u32string_view line_;
  size_t line_no_;
  size_t pos_ = 0;
};

void append_escaped(std::string& out, std::string_view text) {
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
}

}  // namespace

Document parse(std::string_view text) {
  Document doc;
  size_t line_no = 0;
  size_t begin = 0;
  while (begin < text.size()) {
    size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::u32string line;
    try {
      line = utf8::decode(text.substr(begin, end - begin));
    } catch (const Error& e) {
      throw ParseError("sentence " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
    doc.sentences.push_back(LineParser(line, line_no).parse());
    begin = end + 1;
  }
  return doc;
}

std::string escape(std::string_view text) {
  std::string out;
  append_escaped(out, text);
  return out;
}

std::string serialize(const Document& doc) {
  std::string out;
  for (size_t s = 0; s < doc.sentences.size(); ++s) {
    const Sentence& sentence = doc.sentences[s];
    ValidationReport report = validate_mentions(sentence);
    if (!report.ok()) {
      throw ValidationError("sentence " + std::to_string(s + 1) + ": " + report.to_string());
    }
    if (sentence.raw_text.find('\n') != std::string::npos) {
      throw ValidationError("sentence " + std::to_string(s + 1) + ": raw text contains a newline");
    }
    std::u32string raw = utf8::decode(sentence.raw_text);
    size_t cursor = 0;
    for (const Mention& m : sentence.mentions) {
      append_escaped(out, utf8::encode(std::u32string_view(raw).substr(cursor, m.start - cursor)));
      out += "<ENAMEX type=\"";
      out += to_string(m.ne_type);
      out += '"';
      if (m.sub_type) {
        out += " sub_type=\"";
        append_escaped(out, *m.sub_type);
        out += '"';
      }
      out += " eid=\"";
      append_escaped(out, m.eid ? *m.eid : "null");
      out += '"';
      if (m.name) {
        out += " name=\"";
        append_escaped(out, *m.name);
        out += '"';
      }
      out += '>';
      append_escaped(out, utf8::encode(std::u32string_view(raw).substr(m.start, m.end - m.start)));
      out += "</ENAMEX>";
      cursor = m.end;
    }
    append_escaped(out, utf8::encode(std::u32string_view(raw).substr(cursor)));
    out += '\n';
  }
  return out;
}

}  // namespace nerkit::enamex
