#include "nerkit/crf.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "nerkit/bio.h"
#include "parallel.h"

namespace nerkit::crf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Sentences per parallel block; bounds the memory held by marginals.
constexpr size_t kBlockSize = 256;

double log_sum_exp(const double* v, size_t n) {
  double m = kNegInf;
  for (size_t i = 0; i < n; ++i) m = std::max(m, v[i]);
  if (m == kNegInf) return kNegInf;
  double s = 0;
  for (size_t i = 0; i < n; ++i) s += std::exp(v[i] - m);
  return m + std::log(s);
}

// n x K matrix of per-position emission scores.
std::vector<double> emission_scores(const Model& model, const EncodedSequence& seq) {
  const size_t k = model.num_tags();
  std::vector<double> e(seq.size() * k, 0.0);
  for (size_t t = 0; t < seq.size(); ++t) {
    double* row = &e[t * k];
    for (uint32_t f : seq[t]) {
      for (size_t y = 0; y < k; ++y) row[y] += model.emission(f, static_cast<int>(y));
    }
  }
  return e;
}

// Log-space forward table; returns log Z.
double forward(const Model& model, const std::vector<double>& e, size_t n,
               std::vector<double>& alpha) {
  const size_t k = model.num_tags();
  alpha.assign(n * k, 0.0);
  std::copy(e.begin(), e.begin() + k, alpha.begin());
  std::vector<double> buf(k);
  for (size_t t = 1; t < n; ++t) {
    for (size_t y = 0; y < k; ++y) {
      for (size_t p = 0; p < k; ++p) {
        buf[p] = alpha[(t - 1) * k + p] + model.transition(static_cast<int>(p), static_cast<int>(y));
      }
      alpha[t * k + y] = log_sum_exp(buf.data(), k) + e[t * k + y];
    }
  }
  return log_sum_exp(&alpha[(n - 1) * k], k);
}

void backward(const Model& model, const std::vector<double>& e, size_t n,
              std::vector<double>& beta) {
  const size_t k = model.num_tags();
  beta.assign(n * k, 0.0);
  std::vector<double> buf(k);
  for (size_t t = n - 1; t-- > 0;) {
    for (size_t p = 0; p < k; ++p) {
      for (size_t y = 0; y < k; ++y) {
        buf[y] = model.transition(static_cast<int>(p), static_cast<int>(y)) + e[(t + 1) * k + y] +
                 beta[(t + 1) * k + y];
      }
      beta[t * k + p] = log_sum_exp(buf.data(), k);
    }
  }
}

void require_nonempty(const EncodedSequence& seq) {
  if (seq.empty()) throw Error("empty sequence");
}

std::vector<Example> to_examples(const Model& model, const std::vector<LabeledSequence>& set) {
  std::vector<Example> out;
  out.reserve(set.size());
  for (const LabeledSequence& s : set) {
    if (s.features.empty()) continue;
    Example ex;
    ex.features = encode(model, s.features);
    for (const std::string& tag : s.tags) {
      // Tags unknown to the model can never be predicted; -1 always counts as an error.
      ex.tags.push_back(model.tag_index(tag).value_or(-1));
    }
    out.push_back(std::move(ex));
  }
  return out;
}

double l1_norm(std::span<const double> w) {
  double s = 0;
  for (double x : w) s += std::abs(x);
  return s;
}

double sign(double x) { return (x > 0) - (x < 0); }

}  // namespace

void TrainConfig::validate() const {
  if (!(l1 >= 0) || !(l2 >= 0)) throw Error("penalties must be non-negative");
  if (max_epochs < 1) throw Error("max_epochs must be positive");
  if (patience < 1) throw Error("patience must be positive");
  if (!(rprop.eta_minus > 0 && rprop.eta_minus < 1 && rprop.eta_plus > 1)) {
    throw Error("rprop requires 0 < eta_minus < 1 < eta_plus");
  }
  if (!(rprop.delta_min > 0 && rprop.delta_min <= rprop.delta_init &&
        rprop.delta_init <= rprop.delta_max)) {
    throw Error("rprop requires 0 < delta_min <= delta_init <= delta_max");
  }
}

Model::Model(std::vector<std::string> tags, std::vector<std::string> feature_keys,
             uint64_t template_hash)
    : tags_(std::move(tags)), features_(std::move(feature_keys)), template_hash_(template_hash) {
  if (std::find(tags_.begin(), tags_.end(), "O") == tags_.end()) {
    throw Error("tag set must contain O");
  }
  if (std::set<std::string>(tags_.begin(), tags_.end()).size() != tags_.size()) {
    throw Error("duplicate tag");
  }
  feature_ids_.reserve(features_.size());
  for (size_t i = 0; i < features_.size(); ++i) {
    if (!feature_ids_.emplace(features_[i], static_cast<uint32_t>(i)).second) {
      throw Error("duplicate feature key '" + features_[i] + "'");
    }
  }
  weights_.assign(features_.size() * tags_.size() + tags_.size() * tags_.size(), 0.0);
}

std::optional<uint32_t> Model::feature_index(std::string_view key) const {
  auto it = feature_ids_.find(std::string(key));
  if (it == feature_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Model::tag_index(std::string_view tag) const {
  for (size_t i = 0; i < tags_.size(); ++i) {
    if (tags_[i] == tag) return static_cast<int>(i);
  }
  return std::nullopt;
}

bool Model::operator==(const Model& other) const {
  return tags_ == other.tags_ && features_ == other.features_ &&
         template_hash_ == other.template_hash_ && config_ == other.config_ &&
         weights_.size() == other.weights_.size() &&
         std::memcmp(weights_.data(), other.weights_.data(), weights_.size() * sizeof(double)) == 0;
}

EncodedSequence encode(const Model& model, const std::vector<features::FeatureVector>& sequence) {
  EncodedSequence out(sequence.size());
  for (size_t t = 0; t < sequence.size(); ++t) {
    out[t].reserve(sequence[t].size());
    for (const std::string& key : sequence[t]) {
      if (auto id = model.feature_index(key)) out[t].push_back(*id);
    }
  }
  return out;
}

double score(const Model& model, const EncodedSequence& sequence, const std::vector<int>& tags) {
  if (tags.size() != sequence.size()) throw Error("tag sequence length differs from input length");
  double s = 0;
  for (size_t t = 0; t < sequence.size(); ++t) {
    for (uint32_t f : sequence[t]) s += model.emission(f, tags[t]);
    if (t > 0) s += model.transition(tags[t - 1], tags[t]);
  }
  return s;
}

double score(const Model& model, const std::vector<features::FeatureVector>& sequence,
             const std::vector<int>& tags) {
  return score(model, encode(model, sequence), tags);
}

double log_partition(const Model& model, const EncodedSequence& sequence) {
  require_nonempty(sequence);
  std::vector<double> alpha;
  return forward(model, emission_scores(model, sequence), sequence.size(), alpha);
}

Marginals forward_backward(const Model& model, const EncodedSequence& sequence) {
  require_nonempty(sequence);
  const size_t n = sequence.size();
  const size_t k = model.num_tags();
  std::vector<double> e = emission_scores(model, sequence);
  std::vector<double> alpha, beta;
  Marginals m;
  m.length = n;
  m.num_tags = k;
  m.log_z = forward(model, e, n, alpha);
  backward(model, e, n, beta);
  m.node.resize(n * k);
  for (size_t i = 0; i < n * k; ++i) m.node[i] = std::exp(alpha[i] + beta[i] - m.log_z);
  m.edge.resize((n - 1) * k * k);
  for (size_t t = 1; t < n; ++t) {
    for (size_t p = 0; p < k; ++p) {
      for (size_t y = 0; y < k; ++y) {
        m.edge[((t - 1) * k + p) * k + y] =
            std::exp(alpha[(t - 1) * k + p] +
                     model.transition(static_cast<int>(p), static_cast<int>(y)) + e[t * k + y] +
                     beta[t * k + y] - m.log_z);
      }
    }
  }
  return m;
}

Path viterbi(const Model& model, const EncodedSequence& sequence) {
  require_nonempty(sequence);
  const size_t n = sequence.size();
  const size_t k = model.num_tags();
  std::vector<double> e = emission_scores(model, sequence);
  std::vector<double> best(e.begin(), e.begin() + k);
  std::vector<double> next(k);
  std::vector<int> back(n * k, 0);
  for (size_t t = 1; t < n; ++t) {
    for (size_t y = 0; y < k; ++y) {
      double top = kNegInf;
      int arg = 0;
      for (size_t p = 0; p < k; ++p) {
        double v = best[p] + model.transition(static_cast<int>(p), static_cast<int>(y));
        if (v > top) {
          top = v;
          arg = static_cast<int>(p);
        }
      }
      next[y] = top + e[t * k + y];
      back[t * k + y] = arg;
    }
    best.swap(next);
  }
  Path path;
  int last = static_cast<int>(std::max_element(best.begin(), best.end()) - best.begin());
  path.tags.assign(n, 0);
  path.tags[n - 1] = last;
  for (size_t t = n - 1; t > 0; --t) path.tags[t - 1] = back[t * k + path.tags[t]];
  // Rescored left to right so the value does not depend on the DP's summation order.
  path.score = score(model, sequence, path.tags);
  return path;
}

Objective gradient(const Model& model, std::span<const Example> batch, double l2,
                   unsigned threads) {
  if (batch.empty()) throw Error("empty batch");
  const size_t k = model.num_tags();
  const size_t offset = model.transition_offset();
  std::span<const double> w = model.weights();
  Objective obj;
  obj.gradient.assign(w.size(), 0.0);
  std::vector<double>& g = obj.gradient;

  std::vector<Marginals> block(std::min(kBlockSize, batch.size()));
  for (size_t begin = 0; begin < batch.size(); begin += kBlockSize) {
    size_t count = std::min(kBlockSize, batch.size() - begin);
    internal::parallel_for(count, threads, [&](size_t i) {
      block[i] = forward_backward(model, batch[begin + i].features);
    });
    for (size_t i = 0; i < count; ++i) {
      const Example& ex = batch[begin + i];
      const Marginals& m = block[i];
      if (ex.tags.size() != ex.features.size()) throw Error("gold tags and features differ in length");
      obj.nll += m.log_z - score(model, ex.features, ex.tags);
      for (size_t t = 0; t < ex.features.size(); ++t) {
        const double* p = &m.node[t * k];
        for (uint32_t f : ex.features[t]) {
          double* gf = &g[f * k];
          for (size_t y = 0; y < k; ++y) gf[y] += p[y];
          gf[ex.tags[t]] -= 1.0;
        }
        if (t > 0) {
          const double* pe = &m.edge[(t - 1) * k * k];
          for (size_t j = 0; j < k * k; ++j) g[offset + j] += pe[j];
          g[offset + ex.tags[t - 1] * k + ex.tags[t]] -= 1.0;
        }
      }
    }
  }
  double sq = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    sq += w[i] * w[i];
    g[i] += l2 * w[i];
  }
  obj.l2_term = 0.5 * l2 * sq;
  return obj;
}

double token_error(const Model& model, std::span<const Example> set) {
  size_t total = 0, wrong = 0;
  for (const Example& ex : set) {
    if (ex.features.empty()) continue;
    Path p = viterbi(model, ex.features);
    for (size_t t = 0; t < p.tags.size(); ++t) wrong += p.tags[t] != ex.tags[t];
    total += p.tags.size();
  }
  if (total == 0) throw Error("token error of an empty set");
  return static_cast<double>(wrong) / static_cast<double>(total);
}

std::string TrainResult::log_text() const {
  std::ostringstream out;
  out.precision(17);
  for (const EpochRecord& r : log) {
    out << r.epoch << '\t' << r.objective << '\t' << r.dev_error << '\n';
  }
  return out.str();
}

TrainResult train(const std::vector<LabeledSequence>& train_set,
                  const std::vector<LabeledSequence>& dev_set, const TrainConfig& config,
                  uint64_t template_hash, unsigned threads) {
  config.validate();
  if (train_set.empty()) throw Error("empty training set");
  if (dev_set.empty()) throw Error("empty development set");

  std::set<std::string> tag_set;
  std::set<std::string> keys;
  for (const LabeledSequence& s : train_set) {
    if (s.tags.size() != s.features.size()) throw Error("training sequence with mismatched tags");
    tag_set.insert(s.tags.begin(), s.tags.end());
    for (const auto& fv : s.features) keys.insert(fv.begin(), fv.end());
  }
  tag_set.erase("O");
  std::vector<std::string> tags = {"O"};
  tags.insert(tags.end(), tag_set.begin(), tag_set.end());

  Model model(std::move(tags), std::vector<std::string>(keys.begin(), keys.end()), template_hash);
  model.set_config(config);
  keys.clear();

  const std::vector<Example> train_ex = to_examples(model, train_set);
  const std::vector<Example> dev_ex = to_examples(model, dev_set);

  std::span<double> w = model.weights();
  const size_t dim = w.size();
  const RpropParams& rp = config.rprop;
  std::vector<double> delta(dim, rp.delta_init);
  std::vector<double> prev_grad(dim, 0.0);
  std::vector<double> prev_step(dim, 0.0);

  Objective obj = gradient(model, train_ex, config.l2, threads);
  TrainResult result;
  result.model = model;
  double best_error = std::numeric_limits<double>::infinity();
  int stale = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const std::vector<double>& g = obj.gradient;
    for (size_t i = 0; i < dim; ++i) {
      // L1 pseudo-gradient.
      double pg;
      if (w[i] > 0) {
        pg = g[i] + config.l1;
      } else if (w[i] < 0) {
        pg = g[i] - config.l1;
      } else if (g[i] + config.l1 < 0) {
        pg = g[i] + config.l1;
      } else if (g[i] - config.l1 > 0) {
        pg = g[i] - config.l1;
      } else {
        pg = 0;
      }

      double agreement = pg * prev_grad[i];
      if (agreement < 0) {
        delta[i] = std::max(delta[i] * rp.eta_minus, rp.delta_min);
        w[i] -= prev_step[i];
        prev_step[i] = 0;
        prev_grad[i] = 0;
        continue;
      }
      if (agreement > 0) delta[i] = std::min(delta[i] * rp.eta_plus, rp.delta_max);
      double old = w[i];
      double updated = old - sign(pg) * delta[i];
      if (old != 0 && updated * old < 0) updated = 0;
      w[i] = updated;
      prev_step[i] = updated - old;
      prev_grad[i] = pg;
    }

    obj = gradient(model, train_ex, config.l2, threads);
    double objective = obj.value() + config.l1 * l1_norm(w);
    if (!std::isfinite(objective)) {
      std::ostringstream msg;
      msg << "training diverged at epoch " << epoch << ": objective " << objective
          << " (nll " << obj.nll << ", l2 term " << obj.l2_term << ")";
      throw TrainingError(msg.str());
    }
    double dev_error = token_error(model, dev_ex);
    result.log.push_back({epoch, objective, dev_error});

    if (dev_error < best_error) {
      best_error = dev_error;
      result.model = model;
      result.best_epoch = epoch;
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  return result;
}

std::vector<std::string> predict(const Model& model,
                                 const std::vector<features::FeatureVector>& sequence) {
  std::vector<std::string> out;
  if (sequence.empty()) return out;
  Path p = viterbi(model, encode(model, sequence));
  out.reserve(p.tags.size());
  for (int y : p.tags) out.push_back(model.tags()[y]);
  return out;
}

std::vector<LabeledSequence> labeled_sequences(const features::Extractor& extractor,
                                               const std::vector<Sentence>& corpus,
                                               unsigned threads) {
  std::vector<LabeledSequence> out(corpus.size());
  internal::parallel_for(corpus.size(), threads, [&](size_t i) {
    out[i].features = extractor.extract(corpus[i]);
    out[i].tags = bio::to_strings(bio::encode(corpus[i].token_mentions, corpus[i].word_count()));
  });
  return out;
}

std::vector<Sentence> tag_corpus(const Model& model, const features::Extractor& extractor,
                                 std::vector<Sentence> corpus, unsigned threads) {
  internal::parallel_for(corpus.size(), threads, [&](size_t i) {
    Sentence& s = corpus[i];
    auto tags = bio::from_strings(predict(model, extractor.extract(s)));
    s.token_mentions = bio::decode(tags, bio::DecodeMode::kRepair);
  });
  return corpus;
}

}  // namespace nerkit::crf
