// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "nerkit/aligner.h"
#include "nerkit/bio.h"
#include "nerkit/cli.h"
#include "nerkit/conllu.h"
#include "nerkit/crf.h"
#include "nerkit/enamex.h"
#include "nerkit/evaluator.h"
#include "nerkit/features.h"
#include "nerkit/splitter.h"
#include "support/crf_oracle.h"
#include "support/generators.h"

using namespace nerkit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// |a - b| scaled by max(1, |b|): relative for large values, absolute near 0.
double mixed_error(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(3);
  out << x;
  return out.str();
}

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
}

Outcome crf_exactness() {
  auto start = Clock::now();
  Outcome o;
  testing::Rng rng(1001);
  double worst_z = 0, worst_marginal = 0;
  size_t tie_heavy = 0;
  for (int i = 0; i < 200; ++i) {
    size_t n = testing::uniform(rng, 1, 6);
    size_t k = testing::uniform(rng, 1, 5);
    bool integer = i % 4 == 0;
    tie_heavy += integer;
    auto c = testing::random_crf(rng, n, k, 6, integer);
    auto e = testing::enumerate(c.model, c.sequence);

    worst_z = std::max(worst_z, mixed_error(crf::log_partition(c.model, c.sequence), e.log_z));
    auto path = crf::viterbi(c.model, c.sequence);
    if (path.tags != e.best) fail(o, "instance " + std::to_string(i) + ": Viterbi path differs");
    if (path.score != e.max_score) fail(o, "instance " + std::to_string(i) + ": Viterbi score differs");
    auto m = crf::forward_backward(c.model, c.sequence);
    for (size_t j = 0; j < e.node.size(); ++j) {
      worst_marginal = std::max(worst_marginal, std::abs(m.node[j] - e.node[j]));
    }
    for (size_t j = 0; j < e.edge.size(); ++j) {
      worst_marginal = std::max(worst_marginal, std::abs(m.edge[j] - e.edge[j]));
    }
  }
  double t = seconds_since(start);
  if (worst_z > 1e-8) fail(o, "log Z error " + fmt(worst_z));
  if (worst_marginal > 1e-8) fail(o, "marginal error " + fmt(worst_marginal));
  if (t >= 30) fail(o, "took " + fmt(t) + " s");
  if (o.pass) {
    o.detail = "200 models (" + std::to_string(tie_heavy) + " tie-heavy), max log Z err " +
               fmt(worst_z) + ", max marginal err " + fmt(worst_marginal) +
               ", Viterbi exact, " + fmt(t) + " s";
  }
  return o;
}

Outcome gradient_check() {
  auto start = Clock::now();
  Outcome o;
  testing::Rng rng(1002);
  double worst = 0;
  size_t coords = 0;
  for (int i = 0; i < 50; ++i) {
    size_t n = testing::uniform(rng, 1, 5);
    size_t k = testing::uniform(rng, 1, 4);
    auto c = testing::random_crf(rng, n, k, 5, false);
    std::vector<crf::Example> batch;
    size_t sentences = testing::uniform(rng, 1, 3);
    for (size_t s = 0; s < sentences; ++s) {
      auto seq = s == 0 ? c.sequence
                        : testing::random_crf(rng, testing::uniform(rng, 1, 5), k, 5, false).sequence;
      std::vector<int> gold(seq.size());
      for (int& y : gold) y = static_cast<int>(testing::uniform(rng, 0, k - 1));
      batch.push_back({seq, gold});
    }
    double l2 = i % 5 == 0 ? 0.0 : 0.1 * static_cast<double>(testing::uniform(rng, 1, 10));
    auto analytic = crf::gradient(c.model, batch, l2);
    auto numeric = testing::numeric_gradient(c.model, batch, l2, 1e-5);
    for (size_t j = 0; j < numeric.size(); ++j) {
      worst = std::max(worst, mixed_error(analytic.gradient[j], numeric[j]));
    }
    coords += numeric.size();
  }
  double t = seconds_since(start);
  if (worst > 1e-4) fail(o, "gradient error " + fmt(worst));
  if (t >= 60) fail(o, "took " + fmt(t) + " s");
  if (o.pass) {
    o.detail = "50 instances, " + std::to_string(coords) + " coordinates, max err " + fmt(worst) +
               ", " + fmt(t) + " s";
  }
  return o;
}

Outcome learnability() {
  auto start = Clock::now();
  Outcome o;
  testing::Rng rng(1003);
  auto corpus = testing::deterministic_corpus(rng, 2000);
  auto parts = split::split(corpus, {1600, 200, 200, std::nullopt});
  features::Extractor extractor;
  crf::TrainConfig config;
  config.l1 = 0.1;
  config.l2 = 0.1;
  config.max_epochs = 50;
  auto result = crf::train(crf::labeled_sequences(extractor, parts.train, 4),
                           crf::labeled_sequences(extractor, parts.dev, 4), config,
                           extractor.template_hash(), 4);
  auto tagged = crf::tag_corpus(result.model, extractor, parts.test, 4);
  double f1 = eval::evaluate(parts.test, tagged).overall.f1();
  double t = seconds_since(start);
  if (f1 < 99.0) fail(o, "held-out F1 " + eval::format_score(f1));
  if (result.log.size() > 50) fail(o, "ran " + std::to_string(result.log.size()) + " epochs");
  if (t >= 120) fail(o, "took " + fmt(t) + " s");
  if (o.pass) {
    o.detail = "held-out F1 " + eval::format_score(f1) + ", " + std::to_string(result.log.size()) +
               " epochs (best " + std::to_string(result.best_epoch) + "), " + fmt(t) + " s";
  }
  return o;
}

Outcome alignment_fuzz() {
  auto start = Clock::now();
  Outcome o;
  testing::Rng rng(1004);
  enamex::Document doc;
  std::vector<Sentence> treebank;
  std::vector<std::vector<TokenMention>> expected;
  for (size_t i = 0; i < 1000; ++i) {
    auto c = testing::random_alignment_case(rng, i + 1);
    doc.sentences.push_back(c.annotated);
    treebank.push_back(c.treebank);
    expected.push_back(c.expected);
  }
  // Through the file format, as the pipeline sees it.
  doc = enamex::parse(enamex::serialize(doc));
  auto clean = align::align_corpus(doc, treebank, 2);
  if (!clean.report.clean()) fail(o, std::to_string(clean.report.errors.size()) + " errors on clean data");
  if (clean.report.mentions_projected != clean.report.mentions_total) fail(o, "mentions lost");
  for (size_t i = 0; i < expected.size(); ++i) {
    if (clean.corpus[i].token_mentions != expected[i]) {
      fail(o, "sentence " + std::to_string(i + 1) + " projected wrongly");
      break;
    }
  }
  const int trials = 20;
  for (int trial = 0; trial < trials; ++trial) {
    enamex::Document corrupted = doc;
    size_t victim = testing::uniform(rng, 0, corrupted.sentences.size() - 1);
    testing::corrupt_one_character(rng, corrupted.sentences[victim]);
    auto dirty = align::align_corpus(corrupted, treebank, 2);
    if (dirty.report.errors.size() != 1 ||
        dirty.report.errors[0].kind != align::ErrorKind::kTextMismatch ||
        dirty.report.errors[0].sentence_index != victim) {
      fail(o, "corruption trial " + std::to_string(trial) + " gave " +
                  std::to_string(dirty.report.errors.size()) + " errors");
    }
  }
  double t = seconds_since(start);
  if (t >= 10) fail(o, "took " + fmt(t) + " s");
  if (o.pass) {
    o.detail = "1000 sentences, " + std::to_string(clean.report.mentions_total) +
               " mentions projected, 0 errors; " + std::to_string(trials) +
               " single corruptions each gave exactly 1 text_mismatch; " + fmt(t) + " s";
  }
  return o;
}

Outcome round_trips() {
  Outcome o;
  testing::Rng rng(1005);
  size_t enamex_ok = 0, bio_ok = 0, conllu_ok = 0;
  for (int i = 0; i < 1000; ++i) {
    auto doc = testing::random_enamex_document(rng, 8);
    std::string text = enamex::serialize(doc);
    enamex_ok += enamex::parse(text) == doc && enamex::serialize(enamex::parse(text)) == text;

    bool same = true;
    for (int s = 0; s < 5; ++s) {
      size_t n = testing::uniform(rng, 0, 25);
      auto ms = testing::random_token_mentions(rng, n);
      auto tags = bio::encode(ms, n);
      same = same && bio::decode(tags, bio::DecodeMode::kStrict) == ms &&
             bio::from_strings(bio::to_strings(tags)) == tags;
    }
    bio_ok += same;

    auto corpus = testing::random_extended_corpus(rng, testing::uniform(rng, 1, 8));
    std::string ext = conllu::emit_extended_string(corpus);
    conllu_ok += conllu::parse_extended_string(ext) == corpus &&
                 conllu::emit_extended_string(conllu::parse_extended_string(ext)) == ext;
  }
  if (enamex_ok != 1000) fail(o, "ENAMEX " + std::to_string(enamex_ok) + "/1000");
  if (bio_ok != 1000) fail(o, "BIO " + std::to_string(bio_ok) + "/1000");
  if (conllu_ok != 1000) fail(o, "extended CoNLL-U " + std::to_string(conllu_ok) + "/1000");
  if (o.pass) o.detail = "ENAMEX, BIO and extended CoNLL-U: 1000/1000 corpora each";
  return o;
}

Outcome evaluator_arithmetic() {
  Outcome o;
  std::string sem = eval::format_score(eval::f1_score(87.18, 80.48));
  if (sem != "83.70") fail(o, "P=87.18 R=80.48 gave F1 " + sem);

  auto words = [](size_t n, std::vector<TokenMention> ms) {
    Sentence s;
    for (size_t i = 0; i < n; ++i) {
      Token t;
      t.index = static_cast<int>(i) + 1;
      t.form = "w";
      s.tokens.push_back(t);
    }
    s.token_mentions = std::move(ms);
    return s;
  };
  auto tok_mention = [](int a, int b, NeType type) {
    TokenMention m;
    m.ne_type = type;
    m.first_token = a;
    m.last_token = b;
    return m;
  };
  auto r = eval::evaluate(
      {words(6, {tok_mention(2, 3, NeType::kLocation), tok_mention(5, 5, NeType::kPerson)})},
      {words(6, {tok_mention(1, 1, NeType::kOrganization), tok_mention(2, 3, NeType::kLocation)})});
  std::string prf = eval::format_score(r.overall.precision()) + "/" +
                    eval::format_score(r.overall.recall()) + "/" + eval::format_score(r.overall.f1());
  if (!(r.overall == eval::Counts{1, 1, 1}) || prf != "50.00/50.00/50.00") {
    fail(o, "hand-counted example gave " + prf);
  }
  if (o.pass) o.detail = "87.18/80.48 -> " + sem + "; tp=fp=fn=1 -> " + prf;
  return o;
}

struct FrozenPermutation {
  uint64_t seed;
  std::vector<size_t> head;
  std::vector<size_t> tail;
  uint64_t checksum;  // sum of i * p[i] mod 1e9+7
};

Outcome split_protocol() {
  Outcome o;
  const size_t n = 12351;
  const split::SplitSpec sizes{9881, 1235, 1235, std::nullopt};
  std::vector<Sentence> corpus(n);
  for (size_t i = 0; i < n; ++i) corpus[i].sent_id = "s" + std::to_string(i);

  auto is_partition = [&](const split::Partition& p) {
    if (p.train.size() != sizes.n_train || p.dev.size() != sizes.n_dev || p.test.size() != sizes.n_test) {
      return false;
    }
    std::vector<size_t> all = p.train;
    all.insert(all.end(), p.dev.begin(), p.dev.end());
    all.insert(all.end(), p.test.begin(), p.test.end());
    std::sort(all.begin(), all.end());
    for (size_t i = 0; i < n; ++i) {
      if (all[i] != i) return false;
    }
    return true;
  };

  auto chrono = split::split_indices(n, sizes);
  if (!is_partition(chrono) || chrono.train.front() != 0 || chrono.train.back() != 9880 ||
      chrono.dev.front() != 9881 || chrono.test.back() != n - 1) {
    fail(o, "chronological split is wrong");
  }

  // Values frozen from an independent implementation.
  const FrozenPermutation frozen[] = {
      {1, {4788, 8625, 7, 1190, 11983, 10964, 9541, 8550}, {2135, 5731, 1319, 2510}, 948048205},
      {2, {8093, 7858, 1403, 3590, 1708, 9855, 5050, 5361}, {10452, 10504, 1426, 10471}, 10159319},
      {3, {9832, 1429, 10281, 2732, 9096, 8269, 5136, 2646}, {3983, 10341, 5411, 480}, 455662887},
  };
  std::set<std::vector<size_t>> distinct;
  for (const auto& f : frozen) {
    split::SplitSpec spec = sizes;
    spec.seed = f.seed;
    auto p = split::split_indices(n, spec);
    auto perm = split::permutation(n, f.seed);
    uint64_t checksum = 0;
    for (size_t i = 0; i < n; ++i) checksum = (checksum + i * perm[i]) % 1000000007ULL;
    std::string seed = std::to_string(f.seed);
    if (!is_partition(p)) fail(o, "seed " + seed + ": not an exact partition");
    if (!std::equal(f.head.begin(), f.head.end(), perm.begin()) ||
        !std::equal(f.tail.begin(), f.tail.end(), perm.end() - 4) || checksum != f.checksum) {
      fail(o, "seed " + seed + ": permutation differs from the frozen reference");
    }
    if (!std::equal(p.train.begin(), p.train.end(), perm.begin())) fail(o, "seed " + seed + ": train part");
    auto parts = split::split(corpus, spec);
    if (parts.test.front().sent_id != "s" + std::to_string(p.test.front())) {
      fail(o, "seed " + seed + ": sentence split disagrees with indices");
    }
    auto again = split::split_indices(n, spec);
    if (again.train != p.train || again.dev != p.dev || again.test != p.test) {
      fail(o, "seed " + seed + ": not reproducible");
    }
    distinct.insert(p.train);
  }
  if (distinct.size() != 3) fail(o, "seeded splits coincide");
  if (o.pass) {
    o.detail = "12351 sentences as 9881/1235/1235: chronological + seeds 1,2,3 exact, "
               "permutations match frozen values";
  }
  return o;
}

std::string env(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

std::string read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Needs the licensed corpora:
//   NERKIT_FTB_ENAMEX   inline ENAMEX file, one sentence per line
//   NERKIT_FTB_CONLLU   the matching CoNLL-U treebank
//   NERKIT_FTB_SPLIT    standard split sizes "train,dev,test" (enables training)
//   NERKIT_FTB_GAZETTEERS  colon-separated gazetteer files, in priority order
std::optional<Outcome> licensed_corpus() {
  std::string enamex_path = env("NERKIT_FTB_ENAMEX");
  std::string conllu_path = env("NERKIT_FTB_CONLLU");
  if (enamex_path.empty() || conllu_path.empty()) return std::nullopt;
  Outcome o;
  auto result = align::align_corpus(enamex::parse(read(enamex_path)),
                                    conllu::parse_string(read(conllu_path)), 4);
  if (!result.report.clean()) {
    fail(o, std::to_string(result.report.errors.size()) + " alignment errors");
  }
  cli::CorpusStats expected;
  expected.n_sentences = 12351;
  expected.n_tokens = 350931;
  expected.n_sentences_with_mentions = 5890;
  expected.n_mentions = 11636;
  expected.mentions_by_type = {2025, 3761, 2381, 3357, 67, 15, 29};
  auto stats = cli::compute_stats(result.corpus);
  if (!(stats == expected)) fail(o, "corpus counts differ:\n" + cli::render(stats));

  std::string split_sizes = env("NERKIT_FTB_SPLIT");
  std::string f1_text = "training skipped (NERKIT_FTB_SPLIT unset)";
  if (!split_sizes.empty()) {
    size_t a = 0, b = 0, c = 0;
    char comma;
    std::istringstream(split_sizes) >> a >> comma >> b >> comma >> c;
    auto parts = split::split(result.corpus, {a, b, c, std::nullopt});
    std::vector<features::Gazetteer> gazetteers;
    std::istringstream paths(env("NERKIT_FTB_GAZETTEERS"));
    int priority = 0;
    for (std::string p; std::getline(paths, p, ':');) {
      if (!p.empty()) gazetteers.push_back(features::load_gazetteer(p, p, priority++));
    }
    features::Extractor extractor(gazetteers);
    auto model = crf::train(crf::labeled_sequences(extractor, parts.train, 8),
                            crf::labeled_sequences(extractor, parts.dev, 8), crf::TrainConfig{},
                            extractor.template_hash(), 8)
                     .model;
    double f1 = eval::evaluate(parts.test, crf::tag_corpus(model, extractor, parts.test, 8)).overall.f1();
    f1_text = "test F1 " + eval::format_score(f1);
    if (std::abs(f1 - 83.70) > 2.0) fail(o, f1_text + ", outside 83.70 +/- 2.0");
  }
  if (o.pass) o.detail = "clean merge, counts reproduced, " + f1_text;
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const Criterion criteria[] = {
      {1, "CRF exactness", crf_exactness},
      {2, "gradient check", gradient_check},
      {3, "learnability", learnability},
      {4, "alignment fuzz", alignment_fuzz},
      {5, "round trips", round_trips},
      {6, "evaluator arithmetic", evaluator_arithmetic},
      {7, "split protocol", split_protocol},
  };
  bool all = true;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    all = all && o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.name << ": " << o.detail
              << std::endl;
  }
  try {
    auto licensed = licensed_corpus();
    if (!licensed) {
      std::cout << "[SKIP] 8 licensed corpus (optional): set NERKIT_FTB_ENAMEX and "
                   "NERKIT_FTB_CONLLU to run"
                << std::endl;
    } else {
      // Optional: reported, never fails the suite.
      std::cout << (licensed->pass ? "[PASS] " : "[FAIL] ") << "8 licensed corpus (optional): "
                << licensed->detail << std::endl;
    }
  } catch (const std::exception& e) {
    std::cout << "[FAIL] 8 licensed corpus (optional): exception: " << e.what() << std::endl;
  }
  return all ? 0 : 1;
}
