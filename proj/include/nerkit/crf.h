#ifndef NERKIT_CRF_H_
#define NERKIT_CRF_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nerkit/core.h"
#include "nerkit/error.h"
#include "nerkit/features.h"

// First-order linear-chain CRF with emission weights per (feature, tag) and
// transition weights per (tag, tag). There are no start or stop
// transitions; the boundary features of the extractor play that role.
namespace nerkit::crf {

struct RpropParams {
  double eta_plus = 1.2;
  double eta_minus = 0.5;
  double delta_init = 0.1;
  double delta_min = 1e-8;
  double delta_max = 50.0;

  bool operator==(const RpropParams&) const = default;
};

struct TrainConfig {
  double l1 = 0.1;
  double l2 = 0.1;
  int max_epochs = 100;
  // Epochs without a dev-error improvement before stopping.
  int patience = 5;
  RpropParams rprop;
  uint64_t seed = 0;

  bool operator==(const TrainConfig&) const = default;

  // Throws Error when a constraint is violated.
  void validate() const;
};

class Model {
 public:
  Model() = default;
  // `tags` must contain "O"; feature keys must be unique. Weights start at 0.
  Model(std::vector<std::string> tags, std::vector<std::string> feature_keys,
        uint64_t template_hash);

  size_t num_tags() const { return tags_.size(); }
  size_t num_features() const { return features_.size(); }
  const std::vector<std::string>& tags() const { return tags_; }
  const std::vector<std::string>& features() const { return features_; }

  std::optional<uint32_t> feature_index(std::string_view key) const;
  std::optional<int> tag_index(std::string_view tag) const;

  // All weights: F*K emission weights (feature-major) then K*K transitions
  // (previous-tag-major).
  std::span<double> weights() { return weights_; }
  std::span<const double> weights() const { return weights_; }

  double emission(uint32_t feature, int tag) const { return weights_[feature * num_tags() + tag]; }
  double& emission(uint32_t feature, int tag) { return weights_[feature * num_tags() + tag]; }
  double transition(int prev, int cur) const { return weights_[transition_offset() + prev * num_tags() + cur]; }
  double& transition(int prev, int cur) { return weights_[transition_offset() + prev * num_tags() + cur]; }
  size_t transition_offset() const { return features_.size() * tags_.size(); }

  uint64_t template_hash() const { return template_hash_; }
  const TrainConfig& config() const { return config_; }
  void set_config(const TrainConfig& config) { config_ = config; }

  // Bitwise equality, weights included.
  bool operator==(const Model& other) const;

 private:
  std::vector<std::string> tags_;
  std::vector<std::string> features_;
  std::unordered_map<std::string, uint32_t> feature_ids_;
  std::vector<double> weights_;
  uint64_t template_hash_ = 0;
  TrainConfig config_;
};

// Feature ids active at each position.
using EncodedSequence = std::vector<std::vector<uint32_t>>;

// Keys missing from the model dictionary are dropped.
EncodedSequence encode(const Model& model, const std::vector<features::FeatureVector>& sequence);

// Sum of active emission weights of the assigned tags plus the transition
// weights of consecutive tag pairs.
double score(const Model& model, const EncodedSequence& sequence, const std::vector<int>& tags);
double score(const Model& model, const std::vector<features::FeatureVector>& sequence,
             const std::vector<int>& tags);

double log_partition(const Model& model, const EncodedSequence& sequence);

struct Marginals {
  size_t length = 0;
  size_t num_tags = 0;
  double log_z = 0;
  std::vector<double> node;  // length * num_tags
  std::vector<double> edge;  // (length - 1) * num_tags^2

  double node_at(size_t t, int y) const { return node[t * num_tags + y]; }
  // Probability of (prev at t-1, cur at t), t >= 1.
  double edge_at(size_t t, int prev, int cur) const {
    return edge[((t - 1) * num_tags + prev) * num_tags + cur];
  }
};

Marginals forward_backward(const Model& model, const EncodedSequence& sequence);

struct Path {
  std::vector<int> tags;
  double score = 0;
};

// Ties go to the lowest tag index.
Path viterbi(const Model& model, const EncodedSequence& sequence);

struct Example {
  EncodedSequence features;
  std::vector<int> tags;
};

struct Objective {
  double nll = 0;      // sum over the batch of log Z - score(gold)
  double l2_term = 0;  // l2 / 2 * |w|^2
  std::vector<double> gradient;

  double value() const { return nll + l2_term; }
};

// Value and gradient of the L2-regularized negative log-likelihood.
// Forward-backward runs in parallel; accumulation order is fixed, so the
// result does not depend on `threads`.
Objective gradient(const Model& model, std::span<const Example> batch, double l2,
                   unsigned threads = 1);

class TrainingError : public Error {
 public:
  using Error::Error;
};

struct LabeledSequence {
  std::vector<features::FeatureVector> features;
  std::vector<std::string> tags;
};

struct EpochRecord {
  int epoch = 0;
  double objective = 0;  // NLL + L2 + L1 terms after the epoch's update
  double dev_error = 0;  // 1 - token accuracy on the dev set
};

struct TrainResult {
  Model model;  // the best-dev checkpoint
  std::vector<EpochRecord> log;
  int best_epoch = 0;

  // "epoch TAB objective TAB dev_error" lines.
  std::string log_text() const;
};

// Tag order: "O" first, the rest sorted. Feature dictionary: every key seen
// in training, sorted. Full-batch Rprop+ with weight backtracking; L1 enters
// as a pseudo-gradient and weights that would cross zero are clipped to 0.
TrainResult train(const std::vector<LabeledSequence>& train_set,
                  const std::vector<LabeledSequence>& dev_set, const TrainConfig& config,
                  uint64_t template_hash, unsigned threads = 1);

// Token error rate of Viterbi output against gold tags.
double token_error(const Model& model, std::span<const Example> set);

std::vector<std::string> predict(const Model& model,
                                 const std::vector<features::FeatureVector>& sequence);

// Binary model container; see model_io.cc for the layout.
std::string serialize(const Model& model);
// Throws ModelError on corruption, and on a template hash differing from
// `expected_hash` when given.
Model deserialize(std::string_view bytes, std::optional<uint64_t> expected_hash = std::nullopt);
void save(const Model& model, const std::string& path);
Model load(const std::string& path, std::optional<uint64_t> expected_hash = std::nullopt);

// Adds every mention form seen with exactly one label to the O regions where
// it recurs verbatim, scanning left to right and taking the longest form at
// each position. Matches overlapping a mention are skipped. Idempotent.
std::vector<Sentence> broadcast_mentions(std::vector<Sentence> corpus);

// Extracts features and gold BIO tags for training.
std::vector<LabeledSequence> labeled_sequences(const features::Extractor& extractor,
                                               const std::vector<Sentence>& corpus,
                                               unsigned threads = 1);

// Replaces token_mentions with Viterbi predictions (BIO repaired on decode).
std::vector<Sentence> tag_corpus(const Model& model, const features::Extractor& extractor,
                                 std::vector<Sentence> corpus, unsigned threads = 1);

}  // namespace nerkit::crf

#endif  // NERKIT_CRF_H_
