#ifndef NERKIT_CONLLU_H_
#define NERKIT_CONLLU_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "nerkit/bio.h"
#include "nerkit/core.h"

// CoNLL-U reading and writing, plus the extended variant that appends three
// named-entity columns to every token line:
//
//   11  BIO tag     ("O", "B-Location.Country", "I-Person", ...)
//   12  entity id   ("_" when absent)
//   13  entity name ("_" when absent)
//
// Multiword range lines carry "_" in all three. The eid and name are
// repeated on every word of a mention.
namespace nerkit::conllu {

// Throws ParseError with the 1-based line number.
std::vector<Sentence> parse(std::istream& in);
std::vector<Sentence> parse_string(const std::string& text);

// Token lines must have 13 columns. In strict mode an invalid BIO transition
// is a ParseError; repair mode fixes it as bio::decode does.
std::vector<Sentence> parse_extended(std::istream& in,
                                     bio::DecodeMode mode = bio::DecodeMode::kStrict);
std::vector<Sentence> parse_extended_string(const std::string& text,
                                            bio::DecodeMode mode = bio::DecodeMode::kStrict);

// Accepts either layout, decided by the first token line. Plain input yields
// sentences without token mentions.
std::vector<Sentence> parse_any(std::istream& in, bool* extended = nullptr);

// Plain ten-column output. Tokens without a source line are synthesized from
// index, form and upos.
void emit(const std::vector<Sentence>& sentences, std::ostream& out);

// Throws ValidationError if a mention is invalid or a boundary falls inside
// a multiword range.
void emit_extended(const std::vector<Sentence>& sentences, std::ostream& out);
std::string emit_extended_string(const std::vector<Sentence>& sentences);

// The ten standard columns of a token, as written by emit().
std::string token_line(const Token& token);

}  // namespace nerkit::conllu

#endif  // NERKIT_CONLLU_H_
