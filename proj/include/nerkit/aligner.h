#ifndef NERKIT_ALIGNER_H_
#define NERKIT_ALIGNER_H_

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "nerkit/core.h"
#include "nerkit/enamex.h"

// Projects character-offset mentions of raw sentence text onto an
// independent tokenization of the same text.
namespace nerkit::align {

struct MapEntry {
  size_t char_start = 0;
  size_t char_end = 0;  // exclusive
  int token_index = 0;  // word ID

  bool operator==(const MapEntry&) const = default;
};

// One entry per word, in word order. Words covered by a multiword range all
// carry the span of the range's surface form.
struct AlignmentMap {
  std::vector<MapEntry> entries;

  bool operator==(const AlignmentMap&) const = default;
};

enum class ErrorKind { kUnalignedToken, kUnalignedMention, kTextMismatch };
inline constexpr size_t kErrorKindCount = 3;

// Which layer the fault points at: the raw annotated text, the tokenized
// corpus, or undecidable from the data alone (a character mismatch).
enum class Side { kRawText, kTokens, kEither };
inline constexpr size_t kSideCount = 3;

std::string_view to_string(ErrorKind kind);
std::string_view to_string(Side side);

struct AlignmentError {
  size_t sentence_index = 0;  // 0-based position in the corpus
  std::string sentence_id;
  ErrorKind kind = ErrorKind::kTextMismatch;
  Side side = Side::kEither;
  std::string detail;

  bool operator==(const AlignmentError&) const = default;
};

// Greedy left-to-right scan under simple case folding. Whitespace in the raw
// text is skipped between tokens; whitespace inside a token form is ignored.
std::variant<AlignmentMap, AlignmentError> build_map(const std::string& raw_text,
                                                     const std::vector<Token>& tokens);

struct Projection {
  std::vector<TokenMention> mentions;
  std::vector<AlignmentError> errors;
};

// A mention projects iff its start is some word's char_start and its end some
// word's char_end. Anything else is an unaligned_mention error. `raw_text`
// is only used to quote the offending fragment in error details.
Projection project_mentions(const std::vector<Mention>& mentions, const AlignmentMap& map,
                            std::string_view raw_text = {});

struct ErrorReport {
  std::vector<AlignmentError> errors;  // ordered by sentence index
  std::array<size_t, kErrorKindCount> by_kind{};
  std::array<size_t, kSideCount> by_side{};
  size_t mentions_total = 0;
  size_t mentions_projected = 0;

  bool clean() const { return errors.empty(); }
  // "sentence_id TAB kind TAB detail" per error.
  std::string records() const;
  std::string summary() const;
};

struct AlignmentResult {
  std::vector<Sentence> corpus;
  ErrorReport report;
};

// Aligns sentence k of the annotated text with sentence k of the treebank.
// Output sentences are the treebank sentences with raw_text, mentions and
// token_mentions filled in. Throws Error if the sentence counts differ.
AlignmentResult align_corpus(const enamex::Document& doc, std::vector<Sentence> treebank,
                             unsigned threads = 1);

}  // namespace nerkit::align

#endif  // NERKIT_ALIGNER_H_
