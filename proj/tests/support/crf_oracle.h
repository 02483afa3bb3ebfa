#ifndef NERKIT_TESTS_SUPPORT_CRF_ORACLE_H_
#define NERKIT_TESTS_SUPPORT_CRF_ORACLE_H_

#include <span>
#include <vector>

#include "nerkit/crf.h"
#include "support/generators.h"

// Exhaustive reference computations for small CRFs: every one of the K^n
// tag sequences is scored by explicit summation. Shares no code with the
// dynamic programs under test.
namespace nerkit::testing {

struct RandomCrf {
  crf::Model model;
  crf::EncodedSequence sequence;
};

// K tags, F features, n positions with 1..3 active features each. With
// `integer_weights` the weights are drawn from {-1, 0, 1}, which makes ties
// between paths common.
RandomCrf random_crf(Rng& rng, size_t n, size_t k, size_t f, bool integer_weights);

// Weights taken as x -> model.weights()[x], indices computed here.
double brute_score(const crf::Model& model, const crf::EncodedSequence& seq,
                   const std::vector<int>& tags);

struct Enumeration {
  double log_z = 0;
  double max_score = 0;
  // Among the maximizing sequences, the one with the smallest last tag, then
  // smallest second-to-last, and so on (the lowest-index tie-break of a
  // backtracking decoder).
  std::vector<int> best;
  std::vector<double> node;  // n * K
  std::vector<double> edge;  // (n - 1) * K * K
};

Enumeration enumerate(const crf::Model& model, const crf::EncodedSequence& seq);

// Sum over the batch of log Z - gold score, plus l2 / 2 * |w|^2.
double objective(const crf::Model& model, std::span<const crf::Example> batch, double l2);

// Central differences of objective() in every weight.
std::vector<double> numeric_gradient(const crf::Model& model, std::span<const crf::Example> batch,
                                     double l2, double h);

}  // namespace nerkit::testing

#endif  // NERKIT_TESTS_SUPPORT_CRF_ORACLE_H_
