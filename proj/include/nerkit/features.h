#ifndef NERKIT_FEATURES_H_
#define NERKIT_FEATURES_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nerkit/core.h"

namespace nerkit::features {

// Lexicon of token sequences. Lower priority value wins ties.
struct Gazetteer {
  std::string name;
  int priority = 0;
  std::set<std::vector<std::string>> entries;

  size_t max_length() const;
};

// One entry per line, tokens separated by spaces. Blank lines are skipped
// and duplicates collapse. An empty gazetteer appends a message to
// `warnings` (when given). Throws Error if the file cannot be read.
Gazetteer load_gazetteer(const std::string& path, const std::string& name, int priority,
                         std::vector<std::string>* warnings = nullptr);

// Winning gazetteer name per word, or nullopt. Longest match first, then
// lowest priority value, then leftmost; a match is dropped if it overlaps
// one already accepted. Throws Error on duplicate priorities.
std::vector<std::optional<std::string>> apply_gazetteers(const std::vector<std::string>& forms,
                                                         const std::vector<Gazetteer>& gazetteers);

// Sorted, unique feature keys active at one position.
using FeatureVector = std::vector<std::string>;

// Per-word view of a sentence, the only input the templates read.
struct WordInfo {
  std::string form;
  std::string upos;  // "_" when absent
};

// Token-level feature templates over a [-2, 2] window:
//
//   w[d]       form                  p<k>[d]  prefix of length k (1..5)
//   s<k>[d]    suffix of length k    dig[d]   all characters are digits
//   gaz[d]     winning gazetteer     gap[d]   form if in a gazetteer, else POS
//   gap2[d]    gap bigram over (d, d+1), d in [-2, 1]
//   prevN      nearest preceding NOUN form, "<none>" if there is none
//   nextN      nearest following NOUN form
//   bias       always on
//
// Out-of-range offsets produce only w[d] and gap[d], set to <BOS> or <EOS>.
class Extractor {
 public:
  Extractor() = default;
  // Throws Error on duplicate priorities.
  explicit Extractor(std::vector<Gazetteer> gazetteers);

  const std::vector<Gazetteer>& gazetteers() const { return gazetteers_; }

  // Fingerprint of the template inventory and gazetteer contents.
  uint64_t template_hash() const { return hash_; }

  // One vector per word.
  std::vector<FeatureVector> extract(const Sentence& sentence) const;
  std::vector<FeatureVector> extract(const std::vector<WordInfo>& words) const;

  // `position` is the 1-based word index. Throws Error when out of range.
  FeatureVector extract(const Sentence& sentence, int position) const;

  // Bulk extraction, parallel over sentences, output in input order.
  std::vector<std::vector<FeatureVector>> extract_all(const std::vector<Sentence>& corpus,
                                                      unsigned threads = 1) const;

 private:
  FeatureVector at(const std::vector<WordInfo>& words,
                   const std::vector<std::optional<std::string>>& labels, size_t i) const;

  std::vector<Gazetteer> gazetteers_;
  uint64_t hash_ = 0;
};

std::vector<WordInfo> word_infos(const Sentence& sentence);

// Version tag of the template inventory above; part of the hash.
inline constexpr std::string_view kTemplateVersion = "sem-window2-v1";

}  // namespace nerkit::features

#endif  // NERKIT_FEATURES_H_
