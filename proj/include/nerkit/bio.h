#ifndef NERKIT_BIO_H_
#define NERKIT_BIO_H_

#include <string>
#include <string_view>
#include <vector>

#include "nerkit/core.h"
#include "nerkit/error.h"

// BIO2 tags: "O", "B-Type", "I-Type.Subtype". Every mention opens with B.
namespace nerkit::bio {

enum class Prefix { kO, kB, kI };

struct Tag {
  Prefix prefix = Prefix::kO;
  std::string label;  // empty iff prefix is O

  static Tag outside() { return {}; }
  static Tag begin(std::string label) { return {Prefix::kB, std::move(label)}; }
  static Tag inside(std::string label) { return {Prefix::kI, std::move(label)}; }

  // Throws Error on anything but the three surface shapes.
  static Tag parse(std::string_view text);
  std::string str() const;

  bool operator==(const Tag&) const = default;
};

enum class DecodeMode { kStrict, kRepair };

class DecodeError : public Error {
 public:
  DecodeError(const std::string& what, size_t position) : Error(what), position_(position) {}
  // 1-based position of the offending tag.
  size_t position() const { return position_; }

 private:
  size_t position_;
};

// "Type[.Subtype]" to a label with no eid/name. Throws UnknownTypeError.
EntityLabel parse_label(std::string_view label);

// Throws ValidationError on overlapping or out-of-range mentions.
std::vector<Tag> encode(const std::vector<TokenMention>& mentions, size_t n_words);

// Maximal B-I* runs with one label become mentions (eid/name absent).
// Strict mode throws DecodeError on an I after O, at the start, or after a
// different label; repair mode opens a new mention there instead.
std::vector<TokenMention> decode(const std::vector<Tag>& tags, DecodeMode mode);

std::vector<std::string> to_strings(const std::vector<Tag>& tags);
std::vector<Tag> from_strings(const std::vector<std::string>& tags);

}  // namespace nerkit::bio

#endif  // NERKIT_BIO_H_
