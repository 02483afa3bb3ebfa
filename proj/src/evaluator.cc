#include "nerkit/evaluator.h"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "nerkit/bio.h"
#include "nerkit/error.h"

namespace nerkit::eval {

namespace {

double ratio(size_t num, size_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double Counts::precision() const { return ratio(tp, tp + fp); }
double Counts::recall() const { return ratio(tp, tp + fn); }
double Counts::f1() const { return f1_score(precision(), recall()); }

double f1_score(double precision, double recall) {
  double sum = precision + recall;
  return sum == 0 ? 0.0 : 2.0 * precision * recall / sum;
}

std::string format_score(double value) {
  // The epsilon absorbs binary representation error, so 83.695 rounds up.
  double hundredths = std::floor(value * 100.0 + 0.5 + 1e-9);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", hundredths / 100.0);
  return buf;
}

std::string Report::table() const {
  std::ostringstream out;
  auto row = [&](std::string_view name, const Counts& c) {
    out << std::left << std::setw(14) << name << std::right << std::setw(7) << c.tp
        << std::setw(7) << c.fp << std::setw(7) << c.fn << std::setw(10)
        << format_score(c.precision()) << std::setw(10) << format_score(c.recall())
        << std::setw(10) << format_score(c.f1()) << "\n";
  };
  out << std::left << std::setw(14) << "type" << std::right << std::setw(7) << "tp"
      << std::setw(7) << "fp" << std::setw(7) << "fn" << std::setw(10) << "P" << std::setw(10)
      << "R" << std::setw(10) << "F1" << "\n";
  for (size_t i = 0; i < kAllNeTypes.size(); ++i) row(to_string(kAllNeTypes[i]), by_type[i]);
  row("overall", overall);
  out << "token accuracy: " << format_score(token_accuracy) << "\n";
  return out.str();
}

std::string Report::records() const {
  std::ostringstream out;
  auto row = [&](std::string_view name, const Counts& c) {
    out << name << '\t' << c.tp << '\t' << c.fp << '\t' << c.fn << '\t'
        << format_score(c.precision()) << '\t' << format_score(c.recall()) << '\t'
        << format_score(c.f1()) << '\n';
  };
  for (size_t i = 0; i < kAllNeTypes.size(); ++i) row(to_string(kAllNeTypes[i]), by_type[i]);
  row("overall", overall);
  return out.str();
}

Report evaluate(const std::vector<Sentence>& gold, const std::vector<Sentence>& predicted) {
  if (gold.size() != predicted.size()) {
    throw Error("corpus mismatch: " + std::to_string(gold.size()) + " gold sentences vs " +
                std::to_string(predicted.size()) + " predicted");
  }
  Report report;
  std::vector<std::string> gold_tags, pred_tags;
  for (size_t s = 0; s < gold.size(); ++s) {
    size_t n = gold[s].word_count();
    if (predicted[s].word_count() != n) {
      throw Error("corpus mismatch in sentence " + gold[s].sent_id + ": " + std::to_string(n) +
                  " gold words vs " + std::to_string(predicted[s].word_count()) + " predicted");
    }
    const auto& g = gold[s].token_mentions;
    const auto& p = predicted[s].token_mentions;
    std::vector<bool> used(g.size(), false);
    for (const TokenMention& pm : p) {
      size_t type = static_cast<size_t>(pm.ne_type);
      bool hit = false;
      for (size_t j = 0; j < g.size() && !hit; ++j) {
        if (!used[j] && g[j].first_token == pm.first_token && g[j].last_token == pm.last_token &&
            g[j].ne_type == pm.ne_type) {
          used[j] = hit = true;
        }
      }
      ++(hit ? report.by_type[type].tp : report.by_type[type].fp);
    }
    for (size_t j = 0; j < g.size(); ++j) {
      if (!used[j]) ++report.by_type[static_cast<size_t>(g[j].ne_type)].fn;
    }
    auto gt = bio::to_strings(bio::encode(g, n));
    auto pt = bio::to_strings(bio::encode(p, n));
    gold_tags.insert(gold_tags.end(), gt.begin(), gt.end());
    pred_tags.insert(pred_tags.end(), pt.begin(), pt.end());
  }
  for (const Counts& c : report.by_type) report.overall += c;
  if (!gold_tags.empty()) report.token_accuracy = token_accuracy(gold_tags, pred_tags);
  return report;
}

double token_accuracy(const std::vector<std::string>& gold,
                      const std::vector<std::string>& predicted) {
  if (gold.size() != predicted.size()) {
    throw Error("tag sequences differ in length: " + std::to_string(gold.size()) + " vs " +
                std::to_string(predicted.size()));
  }
  if (gold.empty()) throw Error("token accuracy of an empty sequence is undefined");
  size_t same = 0;
  for (size_t i = 0; i < gold.size(); ++i) same += gold[i] == predicted[i];
  return 100.0 * static_cast<double>(same) / static_cast<double>(gold.size());
}

}  // namespace nerkit::eval
