#include "nerkit/bio.h"

namespace nerkit::bio {

Tag Tag::parse(std::string_view text) {
  if (text == "O") return outside();
  if (text.size() > 2 && text[1] == '-' && (text[0] == 'B' || text[0] == 'I')) {
    return {text[0] == 'B' ? Prefix::kB : Prefix::kI, std::string(text.substr(2))};
  }
  throw Error("malformed BIO tag '" + std::string(text) + "'");
}

std::string Tag::str() const {
  switch (prefix) {
    case Prefix::kO: return "O";
    case Prefix::kB: return "B-" + label;
    case Prefix::kI: return "I-" + label;
  }
  return "O";
}

EntityLabel parse_label(std::string_view label) {
  EntityLabel out;
  size_t dot = label.find('.');
  out.ne_type = parse_ne_type(label.substr(0, dot));
  if (dot != std::string_view::npos) out.sub_type = std::string(label.substr(dot + 1));
  return out;
}

std::vector<Tag> encode(const std::vector<TokenMention>& mentions, size_t n_words) {
  ValidationReport report = validate_token_mentions(mentions, n_words);
  if (!report.ok()) throw ValidationError(report.to_string());
  std::vector<Tag> tags(n_words);
  for (const TokenMention& m : mentions) {
    std::string label = composite_label(m);
    tags[m.first_token - 1] = Tag::begin(label);
    for (int i = m.first_token + 1; i <= m.last_token; ++i) tags[i - 1] = Tag::inside(label);
  }
  return tags;
}

std::vector<TokenMention> decode(const std::vector<Tag>& tags, DecodeMode mode) {
  std::vector<TokenMention> out;
  // Label of the mention currently open, if any.
  const std::string* open = nullptr;
  for (size_t i = 0; i < tags.size(); ++i) {
    const Tag& tag = tags[i];
    int position = static_cast<int>(i) + 1;
    if (tag.prefix == Prefix::kO) {
      open = nullptr;
      continue;
    }
    bool continues = tag.prefix == Prefix::kI && open && *open == tag.label;
    if (tag.prefix == Prefix::kI && !continues && mode == DecodeMode::kStrict) {
      std::string previous = i == 0 ? "sequence start" : tags[i - 1].str();
      throw DecodeError("invalid tag " + tag.str() + " at position " + std::to_string(position) +
                            " after " + previous,
                        position);
    }
    if (continues) {
      out.back().last_token = position;
    } else {
      TokenMention m;
      static_cast<EntityLabel&>(m) = parse_label(tag.label);
      m.first_token = m.last_token = position;
      out.push_back(std::move(m));
      open = &tag.label;
    }
  }
  return out;
}

std::vector<std::string> to_strings(const std::vector<Tag>& tags) {
  std::vector<std::string> out;
  out.reserve(tags.size());
  for (const Tag& t : tags) out.push_back(t.str());
  return out;
}

std::vector<Tag> from_strings(const std::vector<std::string>& tags) {
  std::vector<Tag> out;
  out.reserve(tags.size());
  for (const std::string& t : tags) out.push_back(Tag::parse(t));
  return out;
}

}  // namespace nerkit::bio
