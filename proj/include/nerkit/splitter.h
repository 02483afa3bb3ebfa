#ifndef NERKIT_SPLITTER_H_
#define NERKIT_SPLITTER_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "nerkit/core.h"

namespace nerkit::split {

// SplitMix64 (Steele, Lea & Flood 2014):
//   state += 0x9E3779B97F4A7C15
//   z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}
  uint64_t next();
  // Uniform in [0, bound) by rejection of the low remainder band; bound > 0.
  uint64_t below(uint64_t bound);

 private:
  uint64_t state_;
};

// Fisher-Yates from the last slot down: for i = n-1 .. 1, swap(i, below(i+1)).
std::vector<size_t> permutation(size_t n, uint64_t seed);

struct SplitSpec {
  size_t n_train = 0;
  size_t n_dev = 0;
  size_t n_test = 0;
  std::optional<uint64_t> seed;  // absent: chronological
};

struct Partition {
  std::vector<size_t> train;
  std::vector<size_t> dev;
  std::vector<size_t> test;
};

// Sentence indices per part. Throws Error unless the sizes sum to n.
Partition split_indices(size_t n, const SplitSpec& spec);

struct Parts {
  std::vector<Sentence> train;
  std::vector<Sentence> dev;
  std::vector<Sentence> test;
};

Parts split(const std::vector<Sentence>& corpus, const SplitSpec& spec);

}  // namespace nerkit::split

#endif  // NERKIT_SPLITTER_H_
