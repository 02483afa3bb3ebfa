#include "nerkit/features.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "nerkit/error.h"
#include "nerkit/utf8.h"
#include "parallel.h"

namespace nerkit::features {

namespace {

constexpr int kWindow = 2;
constexpr size_t kAffixMax = 5;
constexpr std::string_view kBos = "<BOS>";
constexpr std::string_view kEos = "<EOS>";
constexpr std::string_view kNone = "<none>";

class Fnv1a {
 public:
  void bytes(std::string_view s) {
    for (unsigned char c : s) {
      h_ ^= c;
      h_ *= 0x100000001b3ULL;
    }
  }
  // Length-prefixed, so concatenations cannot collide.
  void field(std::string_view s) {
    bytes(std::to_string(s.size()));
    bytes(":");
    bytes(s);
  }
  uint64_t value() const { return h_; }

 private:
  uint64_t h_ = 0xcbf29ce484222325ULL;
};

void check_priorities(const std::vector<Gazetteer>& gazetteers) {
  for (size_t i = 0; i < gazetteers.size(); ++i) {
    for (size_t j = i + 1; j < gazetteers.size(); ++j) {
      if (gazetteers[i].priority == gazetteers[j].priority) {
        throw Error("gazetteers '" + gazetteers[i].name + "' and '" + gazetteers[j].name +
                    "' share priority " + std::to_string(gazetteers[i].priority));
      }
    }
  }
}

std::string key(std::string_view name, int offset, std::string_view value) {
  std::string k(name);
  k += '[';
  k += std::to_string(offset);
  k += "]=";
  k += value;
  return k;
}

}  // namespace

size_t Gazetteer::max_length() const {
  size_t n = 0;
  for (const auto& e : entries) n = std::max(n, e.size());
  return n;
}

Gazetteer load_gazetteer(const std::string& path, const std::string& name, int priority,
                         std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read gazetteer file " + path);
  Gazetteer g;
  g.name = name;
  g.priority = priority;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::vector<std::string> entry;
    for (std::string w; words >> w;) entry.push_back(w);
    if (!entry.empty()) g.entries.insert(std::move(entry));
  }
  if (in.bad()) throw Error("error reading gazetteer file " + path);
  if (g.entries.empty() && warnings) {
    warnings->push_back("gazetteer '" + name + "' (" + path + ") has no entries");
  }
  return g;
}

std::vector<std::optional<std::string>> apply_gazetteers(const std::vector<std::string>& forms,
                                                         const std::vector<Gazetteer>& gazetteers) {
  check_priorities(gazetteers);
  struct Match {
    size_t start;
    size_t length;
    int priority;
    const std::string* name;
  };
  std::vector<Match> matches;
  for (const Gazetteer& g : gazetteers) {
    size_t longest = g.max_length();
    for (size_t start = 0; start < forms.size(); ++start) {
      std::vector<std::string> probe;
      for (size_t len = 1; len <= longest && start + len <= forms.size(); ++len) {
        probe.push_back(forms[start + len - 1]);
        if (g.entries.count(probe)) matches.push_back({start, len, g.priority, &g.name});
      }
    }
  }
  std::sort(matches.begin(), matches.end(), [](const Match& a, const Match& b) {
    if (a.length != b.length) return a.length > b.length;
    if (a.priority != b.priority) return a.priority < b.priority;
    return a.start < b.start;
  });
  std::vector<std::optional<std::string>> labels(forms.size());
  std::vector<bool> taken(forms.size(), false);
  for (const Match& m : matches) {
    bool free = std::none_of(taken.begin() + m.start, taken.begin() + m.start + m.length,
                             [](bool t) { return t; });
    if (!free) continue;
    for (size_t i = m.start; i < m.start + m.length; ++i) {
      taken[i] = true;
      labels[i] = *m.name;
    }
  }
  return labels;
}

Extractor::Extractor(std::vector<Gazetteer> gazetteers) : gazetteers_(std::move(gazetteers)) {
  check_priorities(gazetteers_);
  std::sort(gazetteers_.begin(), gazetteers_.end(),
            [](const Gazetteer& a, const Gazetteer& b) { return a.priority < b.priority; });
  Fnv1a h;
  h.field(kTemplateVersion);
  for (const Gazetteer& g : gazetteers_) {
    h.field(g.name);
    h.field(std::to_string(g.priority));
    h.field(std::to_string(g.entries.size()));
    for (const auto& entry : g.entries) {
      h.field(std::to_string(entry.size()));
      for (const auto& w : entry) h.field(w);
    }
  }
  hash_ = h.value();
}

std::vector<WordInfo> word_infos(const Sentence& sentence) {
  std::vector<WordInfo> out;
  for (const Token* t : sentence.words()) out.push_back({t->form, t->upos.value_or("_")});
  return out;
}

FeatureVector Extractor::at(const std::vector<WordInfo>& words,
                            const std::vector<std::optional<std::string>>& labels,
                            size_t i) const {
  const int n = static_cast<int>(words.size());
  const int center = static_cast<int>(i);
  FeatureVector f;
  f.reserve(64);
  f.emplace_back("bias");

  auto gap_value = [&](int j) -> std::string {
    if (j < 0) return std::string(kBos);
    if (j >= n) return std::string(kEos);
    return labels[j] ? words[j].form : words[j].upos;
  };

  for (int d = -kWindow; d <= kWindow; ++d) {
    int j = center + d;
    if (j < 0 || j >= n) {
      std::string_view marker = j < 0 ? kBos : kEos;
      f.push_back(key("w", d, marker));
      f.push_back(key("gap", d, marker));
      continue;
    }
    const std::string& form = words[j].form;
    std::u32string chars = utf8::decode(form);
    f.push_back(key("w", d, form));
    for (size_t k = 1; k <= std::min(kAffixMax, chars.size()); ++k) {
      f.push_back(key("p" + std::to_string(k), d, utf8::encode(chars.substr(0, k))));
      f.push_back(key("s" + std::to_string(k), d, utf8::encode(chars.substr(chars.size() - k))));
    }
    bool digits = !chars.empty() && std::all_of(chars.begin(), chars.end(), utf8::is_digit);
    f.push_back(key("dig", d, digits ? "1" : "0"));
    if (labels[j]) f.push_back(key("gaz", d, *labels[j]));
    f.push_back(key("gap", d, gap_value(j)));
  }
  for (int d = -kWindow; d < kWindow; ++d) {
    f.push_back(key("gap2", d, gap_value(center + d) + "|" + gap_value(center + d + 1)));
  }

  std::string prev(kNone), next(kNone);
  for (int j = center - 1; j >= 0; --j) {
    if (words[j].upos == "NOUN") {
      prev = words[j].form;
      break;
    }
  }
  for (int j = center + 1; j < n; ++j) {
    if (words[j].upos == "NOUN") {
      next = words[j].form;
      break;
    }
  }
  f.push_back("prevN=" + prev);
  f.push_back("nextN=" + next);

  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

std::vector<FeatureVector> Extractor::extract(const std::vector<WordInfo>& words) const {
  std::vector<std::string> forms;
  forms.reserve(words.size());
  for (const WordInfo& w : words) forms.push_back(w.form);
  auto labels = apply_gazetteers(forms, gazetteers_);
  std::vector<FeatureVector> out;
  out.reserve(words.size());
  for (size_t i = 0; i < words.size(); ++i) out.push_back(at(words, labels, i));
  return out;
}

std::vector<FeatureVector> Extractor::extract(const Sentence& sentence) const {
  return extract(word_infos(sentence));
}

FeatureVector Extractor::extract(const Sentence& sentence, int position) const {
  auto words = word_infos(sentence);
  if (position < 1 || position > static_cast<int>(words.size())) {
    throw Error("position " + std::to_string(position) + " outside sentence of " +
                std::to_string(words.size()) + " words");
  }
  std::vector<std::string> forms;
  for (const WordInfo& w : words) forms.push_back(w.form);
  return at(words, apply_gazetteers(forms, gazetteers_), position - 1);
}

std::vector<std::vector<FeatureVector>> Extractor::extract_all(const std::vector<Sentence>& corpus,
                                                               unsigned threads) const {
  std::vector<std::vector<FeatureVector>> out(corpus.size());
  internal::parallel_for(corpus.size(), threads,
                         [&](size_t i) { out[i] = extract(corpus[i]); });
  return out;
}

}  // namespace nerkit::features
