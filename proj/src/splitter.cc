#include "nerkit/splitter.h"

#include <numeric>

#include "nerkit/error.h"

namespace nerkit::split {

uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

uint64_t SplitMix64::below(uint64_t bound) {
  // 2^64 mod bound; draws under it would bias the modulo.
  const uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

std::vector<size_t> permutation(size_t n, uint64_t seed) {
  std::vector<size_t> p(n);
  std::iota(p.begin(), p.end(), size_t{0});
  SplitMix64 rng(seed);
  for (size_t i = n; i-- > 1;) std::swap(p[i], p[rng.below(i + 1)]);
  return p;
}

Partition split_indices(size_t n, const SplitSpec& spec) {
  if (spec.n_train + spec.n_dev + spec.n_test != n) {
    throw Error("split sizes " + std::to_string(spec.n_train) + "+" + std::to_string(spec.n_dev) +
                "+" + std::to_string(spec.n_test) + " do not sum to corpus size " +
                std::to_string(n));
  }
  std::vector<size_t> order;
  if (spec.seed) {
    order = permutation(n, *spec.seed);
  } else {
    order.resize(n);
    std::iota(order.begin(), order.end(), size_t{0});
  }
  Partition p;
  auto a = order.begin();
  auto b = a + static_cast<std::ptrdiff_t>(spec.n_train);
  auto c = b + static_cast<std::ptrdiff_t>(spec.n_dev);
  p.train.assign(a, b);
  p.dev.assign(b, c);
  p.test.assign(c, order.end());
  return p;
}

Parts split(const std::vector<Sentence>& corpus, const SplitSpec& spec) {
  Partition p = split_indices(corpus.size(), spec);
  Parts out;
  for (size_t i : p.train) out.train.push_back(corpus[i]);
  for (size_t i : p.dev) out.dev.push_back(corpus[i]);
  for (size_t i : p.test) out.test.push_back(corpus[i]);
  return out;
}

}  // namespace nerkit::split
