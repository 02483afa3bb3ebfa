#ifndef NERKIT_CLI_H_
#define NERKIT_CLI_H_

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "nerkit/core.h"

namespace nerkit::cli {

// Exit codes shared by all subcommands.
inline constexpr int kOk = 0;
inline constexpr int kDataErrors = 1;  // ran to completion, but the data had faults
inline constexpr int kFailure = 2;     // usage error or fatal error; nothing written

struct CorpusStats {
  size_t n_sentences = 0;
  size_t n_tokens = 0;
  size_t n_sentences_with_mentions = 0;
  size_t n_mentions = 0;
  std::array<size_t, kAllNeTypes.size()> mentions_by_type{};

  bool operator==(const CorpusStats&) const = default;
};

// Tokens are words; multiword range lines are not counted.
CorpusStats compute_stats(const std::vector<Sentence>& corpus);
std::string render(const CorpusStats& stats);

// Inverse of tokenization for corpora without raw text: words joined by a
// space unless MISC has SpaceAfter=No. Fills raw_text and char-offset
// mentions from the token mentions.
Sentence detokenize(const Sentence& sentence);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace nerkit::cli

#endif  // NERKIT_CLI_H_
