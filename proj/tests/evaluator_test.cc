#include <doctest.h>

#include <algorithm>

#include "nerkit/error.h"
#include "nerkit/evaluator.h"
#include "support/generators.h"

using namespace nerkit;

namespace {

TokenMention tok_mention(int a, int b, NeType type) {
  TokenMention m;
  m.ne_type = type;
  m.first_token = a;
  m.last_token = b;
  return m;
}

Sentence words(size_t n, std::vector<TokenMention> mentions = {}) {
  Sentence s;
  for (size_t i = 0; i < n; ++i) {
    Token t;
    t.index = static_cast<int>(i) + 1;
    t.form = "w";
    s.tokens.push_back(t);
  }
  s.token_mentions = std::move(mentions);
  return s;
}

}  // namespace

TEST_CASE("F1 arithmetic") {
  CHECK(eval::format_score(eval::f1_score(87.18, 80.48)) == "83.70");
  CHECK(eval::format_score(eval::f1_score(0, 0)) == "0.00");
  CHECK(eval::format_score(100) == "100.00");
  CHECK(eval::format_score(12.345) == "12.35");
  CHECK(eval::format_score(12.344) == "12.34");
  CHECK(eval::format_score(0.125) == "0.13");
}

TEST_CASE("hand-counted example") {
  std::vector<Sentence> gold = {words(6, {tok_mention(2, 3, NeType::kLocation), tok_mention(5, 5, NeType::kPerson)})};
  std::vector<Sentence> pred = {words(6, {tok_mention(1, 1, NeType::kOrganization), tok_mention(2, 3, NeType::kLocation)})};
  auto r = eval::evaluate(gold, pred);
  CHECK(r.overall == eval::Counts{1, 1, 1});
  CHECK(eval::format_score(r.overall.precision()) == "50.00");
  CHECK(eval::format_score(r.overall.recall()) == "50.00");
  CHECK(eval::format_score(r.overall.f1()) == "50.00");
  CHECK(r.by_type[static_cast<size_t>(NeType::kLocation)] == eval::Counts{1, 0, 0});
  CHECK(r.by_type[static_cast<size_t>(NeType::kPerson)] == eval::Counts{0, 0, 1});
  CHECK(r.records().find("overall\t1\t1\t1\t50.00\t50.00\t50.00") != std::string::npos);
  CHECK(r.table().find("overall") != std::string::npos);

  auto same = eval::evaluate(gold, gold);
  CHECK(eval::format_score(same.overall.f1()) == "100.00");
  CHECK(same.token_accuracy == 100.0);
}

TEST_CASE("subtype and attributes are ignored") {
  TokenMention g = tok_mention(1, 2, NeType::kLocation);
  g.sub_type = "Country";
  g.eid = "1";
  TokenMention p = tok_mention(1, 2, NeType::kLocation);
  auto r = eval::evaluate({words(2, {g})}, {words(2, {p})});
  CHECK(r.overall == eval::Counts{1, 0, 0});
  // Wrong type on the right span is both an fp and an fn.
  auto wrong = eval::evaluate({words(2, {g})}, {words(2, {tok_mention(1, 2, NeType::kPerson)})});
  CHECK(wrong.overall == eval::Counts{0, 1, 1});
}

TEST_CASE("mismatched corpora") {
  CHECK_THROWS_AS(eval::evaluate({words(2)}, {words(2), words(1)}), Error);
  CHECK_THROWS_AS(eval::evaluate({words(2)}, {words(3)}), Error);
}

TEST_CASE("token accuracy") {
  CHECK(eval::token_accuracy({"O", "B-X"}, {"O", "B-X"}) == 100.0);
  CHECK(eval::token_accuracy({"O", "O", "O", "O"}, {"O", "B-Location", "O", "O"}) == 75.0);
  CHECK_THROWS_AS(eval::token_accuracy({}, {}), Error);
  CHECK_THROWS_AS(eval::token_accuracy({"O"}, {"O", "O"}), Error);
}

TEST_CASE("symmetry and monotonicity") {
  testing::Rng rng(61);
  for (int i = 0; i < 300; ++i) {
    std::vector<Sentence> a, b;
    for (int s = 0; s < 3; ++s) {
      size_t n = testing::uniform(rng, 1, 10);
      a.push_back(words(n, testing::random_token_mentions(rng, n)));
      b.push_back(words(n, testing::random_token_mentions(rng, n)));
    }
    auto ab = eval::evaluate(a, b);
    auto ba = eval::evaluate(b, a);
    CHECK(ab.overall.tp == ba.overall.tp);
    CHECK(ab.overall.fp == ba.overall.fn);
    CHECK(ab.overall.fn == ba.overall.fp);
    eval::Counts sum;
    for (const auto& c : ab.by_type) sum += c;
    CHECK(sum == ab.overall);

    // Adding a correct prediction (a missed gold mention) never lowers recall.
    for (size_t s = 0; s < a.size(); ++s) {
      for (const TokenMention& g : a[s].token_mentions) {
        auto& pm = b[s].token_mentions;
        bool overlaps = false;
        for (const auto& p : pm) overlaps |= !(p.last_token < g.first_token || g.last_token < p.first_token);
        if (overlaps) continue;
        pm.push_back(g);
        std::sort(pm.begin(), pm.end(), [](auto& x, auto& y) { return x.first_token < y.first_token; });
        auto better = eval::evaluate(a, b);
        CHECK(better.overall.recall() >= ab.overall.recall());
        s = a.size() - 1;
        break;
      }
    }
  }
}
