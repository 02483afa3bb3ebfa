#ifndef NERKIT_CORE_H_
#define NERKIT_CORE_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nerkit {

enum class NeType {
  kPerson,
  kLocation,
  kOrganization,
  kCompany,
  kProduct,
  kPOI,
  kFictionChar,
};

inline constexpr std::array<NeType, 7> kAllNeTypes = {
    NeType::kPerson,  NeType::kLocation, NeType::kOrganization, NeType::kCompany,
    NeType::kProduct, NeType::kPOI,      NeType::kFictionChar,
};

std::string_view to_string(NeType type);
std::optional<NeType> try_parse_ne_type(std::string_view name);
// Throws UnknownTypeError.
NeType parse_ne_type(std::string_view name);

// Attributes carried by every entity mention, whatever its anchoring.
struct EntityLabel {
  NeType ne_type = NeType::kPerson;
  std::optional<std::string> sub_type;
  std::optional<std::string> eid;
  std::optional<std::string> name;

  bool operator==(const EntityLabel&) const = default;
};

// "Type" or "Type.Subtype".
std::string composite_label(const EntityLabel& label);

// Mention anchored on character offsets of the raw sentence text: [start, end).
struct Mention : EntityLabel {
  size_t start = 0;
  size_t end = 0;

  bool operator==(const Mention&) const = default;
};

// Mention anchored on 1-based word indices, both ends inclusive.
struct TokenMention : EntityLabel {
  int first_token = 0;
  int last_token = 0;

  bool operator==(const TokenMention&) const = default;
};

struct Token {
  // Word ID; for a multiword range line, the first covered word.
  int index = 0;
  std::string form;
  std::optional<std::string> upos;
  bool is_multiword_range = false;
  std::optional<std::pair<int, int>> range_span;
  // The original ten CoNLL-U columns, verbatim. Empty for synthesized tokens.
  std::string source_line;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::string sent_id;
  std::string raw_text;
  std::vector<std::string> comments;
  std::vector<Token> tokens;
  std::vector<Mention> mentions;
  std::vector<TokenMention> token_mentions;

  bool operator==(const Sentence&) const = default;

  // Tokens that are not multiword range lines.
  std::vector<const Token*> words() const;
  size_t word_count() const;
};

enum class ViolationKind { kOverlap, kNesting, kOutOfBounds, kEmptySpan, kUnsorted };

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  // Indices into the mention list; `second` equals `first` for single-mention faults.
  size_t first = 0;
  size_t second = 0;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Checks the character-offset mentions of a sentence against its raw text.
ValidationReport validate_mentions(const Sentence& sentence);

// Same checks for token mentions against a sentence of `n_words` words.
ValidationReport validate_token_mentions(const std::vector<TokenMention>& mentions,
                                         size_t n_words);

}  // namespace nerkit

#endif  // NERKIT_CORE_H_
