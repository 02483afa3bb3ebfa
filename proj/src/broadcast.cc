#include <algorithm>
#include <map>

#include "nerkit/crf.h"

namespace nerkit::crf {

std::vector<Sentence> broadcast_mentions(std::vector<Sentence> corpus) {
  struct Seen {
    EntityLabel label;
    bool ambiguous = false;
  };
  std::map<std::vector<std::string>, Seen> lexicon;
  size_t longest = 0;

  std::vector<std::vector<std::string>> forms(corpus.size());
  for (size_t s = 0; s < corpus.size(); ++s) {
    for (const Token* t : corpus[s].words()) forms[s].push_back(t->form);
    for (const TokenMention& m : corpus[s].token_mentions) {
      std::vector<std::string> key(forms[s].begin() + (m.first_token - 1),
                                   forms[s].begin() + m.last_token);
      EntityLabel label{m.ne_type, m.sub_type, std::nullopt, std::nullopt};
      auto [it, inserted] = lexicon.try_emplace(key, Seen{label});
      if (!inserted && !(it->second.label == label)) it->second.ambiguous = true;
      longest = std::max(longest, key.size());
    }
  }

  for (size_t s = 0; s < corpus.size(); ++s) {
    const std::vector<std::string>& words = forms[s];
    std::vector<bool> taken(words.size(), false);
    for (const TokenMention& m : corpus[s].token_mentions) {
      for (int i = m.first_token; i <= m.last_token; ++i) taken[i - 1] = true;
    }
    std::vector<TokenMention> added;
    for (size_t start = 0; start < words.size(); ++start) {
      if (taken[start]) continue;
      for (size_t len = std::min(longest, words.size() - start); len >= 1; --len) {
        if (std::any_of(taken.begin() + start, taken.begin() + start + len,
                        [](bool t) { return t; })) {
          continue;
        }
        std::vector<std::string> probe(words.begin() + start, words.begin() + start + len);
        auto it = lexicon.find(probe);
        if (it == lexicon.end() || it->second.ambiguous) continue;
        TokenMention m;
        static_cast<EntityLabel&>(m) = it->second.label;
        m.first_token = static_cast<int>(start) + 1;
        m.last_token = static_cast<int>(start + len);
        std::fill(taken.begin() + start, taken.begin() + start + len, true);
        added.push_back(std::move(m));
        start += len - 1;
        break;
      }
    }
    if (added.empty()) continue;
    auto& mentions = corpus[s].token_mentions;
    mentions.insert(mentions.end(), added.begin(), added.end());
    std::sort(mentions.begin(), mentions.end(), [](const TokenMention& a, const TokenMention& b) {
      return a.first_token < b.first_token;
    });
  }
  return corpus;
}

}  // namespace nerkit::crf
