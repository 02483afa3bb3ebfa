#ifndef NERKIT_UTF8_H_
#define NERKIT_UTF8_H_

#include <string>
#include <string_view>

// UTF-8 helpers. All character offsets in the library count Unicode scalar
// values, never bytes.
namespace nerkit::utf8 {

// Throws nerkit::Error on ill-formed UTF-8.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);
std::string encode(char32_t c);

size_t length(std::string_view text);

// Simple (one-to-one) Unicode case folding.
char32_t fold(char32_t c);

// Unicode White_Space property; includes U+00A0.
bool is_space(char32_t c);

bool is_digit(char32_t c);

}  // namespace nerkit::utf8

#endif  // NERKIT_UTF8_H_
