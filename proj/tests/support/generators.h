#ifndef NERKIT_TESTS_SUPPORT_GENERATORS_H_
#define NERKIT_TESTS_SUPPORT_GENERATORS_H_

#include <random>
#include <string>
#include <vector>

#include "nerkit/core.h"
#include "nerkit/enamex.h"

// Random data for property tests. Test randomness only; the library never
// uses <random>.
namespace nerkit::testing {

using Rng = std::mt19937_64;

size_t uniform(Rng& rng, size_t lo, size_t hi);  // inclusive
bool coin(Rng& rng, double p = 0.5);

// Text without newlines, rich in XML-special and non-ASCII characters.
std::string random_text(Rng& rng, size_t min_len, size_t max_len);

// Random non-overlapping mentions over [0, length) sorted by start.
std::vector<Mention> random_mentions(Rng& rng, size_t length, size_t max_mentions);

enamex::Document random_enamex_document(Rng& rng, size_t max_sentences);

// Sorted non-overlapping token mentions over n_words words, labels only.
std::vector<TokenMention> random_token_mentions(Rng& rng, size_t n_words);

// Treebank sentences with multiword ranges, comments and entity layers with
// eid/name; tokens carry their synthesized source lines.
std::vector<Sentence> random_extended_corpus(Rng& rng, size_t n_sentences);

// A tokenized sentence plus the raw text it was detokenized into (random
// whitespace incl. NBSP, random case flips) and mentions in both anchorings.
struct AlignmentCase {
  Sentence annotated;  // raw_text + mentions
  Sentence treebank;   // tokens
  std::vector<TokenMention> expected;
};
AlignmentCase random_alignment_case(Rng& rng, size_t ordinal);

// Replaces one non-space character of the raw text by a character that
// differs from it even after case folding. Returns the code point offset.
size_t corrupt_one_character(Rng& rng, Sentence& annotated);

// Sentences whose every word form determines its BIO tag.
std::vector<Sentence> deterministic_corpus(Rng& rng, size_t n_sentences);

}  // namespace nerkit::testing

#endif  // NERKIT_TESTS_SUPPORT_GENERATORS_H_
