#ifndef NERKIT_EVALUATOR_H_
#define NERKIT_EVALUATOR_H_

#include <array>
#include <string>
#include <vector>

#include "nerkit/core.h"

namespace nerkit::eval {

struct Counts {
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;

  Counts& operator+=(const Counts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const Counts&) const = default;

  // Percentages; 0 when the denominator is 0.
  double precision() const;
  double recall() const;
  double f1() const;
};

double f1_score(double precision, double recall);

// Two decimals, half-up.
std::string format_score(double value);

struct Report {
  std::array<Counts, kAllNeTypes.size()> by_type{};
  Counts overall;  // sum of by_type
  double token_accuracy = 0;

  // Aligned table: one row per type, then the overall row.
  std::string table() const;
  // "type TAB tp TAB fp TAB fn TAB P TAB R TAB F1" per type plus "overall".
  std::string records() const;
};

// Exact span and base type match; subtype, eid and name are ignored.
// Throws Error when sentence or word counts differ.
Report evaluate(const std::vector<Sentence>& gold, const std::vector<Sentence>& predicted);

// Percentage of positions whose surface tags agree. Throws Error on a length
// mismatch or empty input.
double token_accuracy(const std::vector<std::string>& gold, const std::vector<std::string>& predicted);

}  // namespace nerkit::eval

#endif  // NERKIT_EVALUATOR_H_
