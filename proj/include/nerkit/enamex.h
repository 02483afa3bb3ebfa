#ifndef NERKIT_ENAMEX_H_
#define NERKIT_ENAMEX_H_

#include <string>
#include <string_view>
#include <vector>

#include "nerkit/core.h"

// Inline <ENAMEX> annotation layer: one sentence per line, raw (untokenized)
// text with non-nested elements such as
//
//   Le <ENAMEX type="Location" sub_type="Country" eid="2000000001861060"
//   name="Japan">Japon</ENAMEX> signe.
//
// Only &amp; &lt; &gt; &quot; and numeric character references are decoded.
namespace nerkit::enamex {

struct Document {
  std::vector<Sentence> sentences;

  bool operator==(const Document&) const = default;
};

// Throws ParseError (line = sentence index, column in code points) or
// UnknownTypeError. Sentence ids are 1-based ordinals.
Document parse(std::string_view text);

// Every sentence is written as one '\n'-terminated line. Attributes come out
// in the order type, sub_type, eid, name; an absent eid is written "null".
// Throws ValidationError if any sentence has overlapping or nested mentions.
std::string serialize(const Document& doc);

std::string escape(std::string_view text);

}  // namespace nerkit::enamex

#endif  // NERKIT_ENAMEX_H_
