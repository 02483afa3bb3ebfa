#include "nerkit/cli.h"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nerkit/aligner.h"
#include "nerkit/conllu.h"
#include "nerkit/crf.h"
#include "nerkit/enamex.h"
#include "nerkit/evaluator.h"
#include "nerkit/features.h"
#include "nerkit/splitter.h"
#include "nerkit/utf8.h"

namespace nerkit::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// "-" is standard output.
void write_file(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot write " + path);
  file << content;
  if (!file) throw Error("error writing " + path);
}

std::vector<Sentence> read_extended(const std::string& path,
                                    bio::DecodeMode mode = bio::DecodeMode::kStrict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  try {
    return conllu::parse_extended(in, mode);
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
}

std::vector<Sentence> read_any(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  try {
    return conllu::parse_any(in);
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
}

std::vector<features::Gazetteer> load_gazetteers(const std::vector<std::string>& paths,
                                                 std::ostream& err) {
  std::vector<features::Gazetteer> out;
  std::vector<std::string> warnings;
  for (size_t i = 0; i < paths.size(); ++i) {
    std::string name = std::filesystem::path(paths[i]).stem().string();
    out.push_back(features::load_gazetteer(paths[i], name, static_cast<int>(i), &warnings));
  }
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  return out;
}

std::vector<std::string> split_columns(const std::string& line) {
  std::vector<std::string> cols;
  std::istringstream in(line);
  for (std::string c; std::getline(in, c, '\t');) cols.push_back(c);
  return cols;
}

bool space_after(const Token& token) {
  std::string line = conllu::token_line(token);
  auto cols = split_columns(line);
  if (cols.size() < 10) return true;
  std::istringstream misc(cols[9]);
  for (std::string item; std::getline(misc, item, '|');) {
    if (item == "SpaceAfter=No") return false;
  }
  return true;
}

struct Options {
  unsigned threads = 1;
};

}  // namespace

CorpusStats compute_stats(const std::vector<Sentence>& corpus) {
  CorpusStats s;
  s.n_sentences = corpus.size();
  for (const Sentence& sentence : corpus) {
    s.n_tokens += sentence.word_count();
    s.n_mentions += sentence.token_mentions.size();
    s.n_sentences_with_mentions += !sentence.token_mentions.empty();
    for (const TokenMention& m : sentence.token_mentions) {
      ++s.mentions_by_type[static_cast<size_t>(m.ne_type)];
    }
  }
  return s;
}

std::string render(const CorpusStats& stats) {
  std::ostringstream out;
  out << "sentences\t" << stats.n_sentences << "\n"
      << "tokens\t" << stats.n_tokens << "\n"
      << "sentences_with_mentions\t" << stats.n_sentences_with_mentions << "\n"
      << "mentions\t" << stats.n_mentions << "\n";
  for (size_t i = 0; i < kAllNeTypes.size(); ++i) {
    out << to_string(kAllNeTypes[i]) << "\t" << stats.mentions_by_type[i] << "\n";
  }
  return out.str();
}

Sentence detokenize(const Sentence& sentence) {
  Sentence out = sentence;
  std::string text;
  size_t length = 0;
  std::vector<std::pair<size_t, size_t>> spans(sentence.word_count() + 1);
  int covered_until = 0;
  for (const Token& t : sentence.tokens) {
    if (!t.is_multiword_range && t.index <= covered_until) continue;
    size_t start = length;
    text += t.form;
    length += utf8::length(t.form);
    if (t.is_multiword_range && t.range_span) {
      covered_until = t.range_span->second;
      for (int w = t.range_span->first; w <= t.range_span->second; ++w) spans[w] = {start, length};
    } else {
      spans[t.index] = {start, length};
    }
    if (space_after(t)) {
      text += ' ';
      ++length;
    }
  }
  if (!text.empty() && text.back() == ' ') text.pop_back();
  out.raw_text = std::move(text);
  out.mentions.clear();
  for (const TokenMention& tm : sentence.token_mentions) {
    Mention m;
    static_cast<EntityLabel&>(m) = tm;
    m.start = spans[tm.first_token].first;
    m.end = spans[tm.last_token].second;
    out.mentions.push_back(std::move(m));
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Named-entity layer alignment and CRF tagging for CoNLL-U treebanks", "nerkit"};
  app.require_subcommand(1);
  Options opt;
  std::function<int()> action;

  auto threads_flag = [&](CLI::App* cmd) {
    cmd->add_option("--threads", opt.threads, "Worker threads (output does not depend on it)")
        ->check(CLI::PositiveNumber);
  };

  // ingest
  std::string ingest_in, ingest_out, ingest_standoff;
  auto* ingest = app.add_subcommand("ingest", "Parse and validate an inline ENAMEX file");
  ingest->add_option("--in", ingest_in, "ENAMEX file, one sentence per line")
      ->required()
      ->check(CLI::ExistingFile);
  ingest->add_option("--out", ingest_out, "Write the normalized ENAMEX text here");
  ingest->add_option("--standoff", ingest_standoff,
                     "Write stand-off mentions: sentence TAB start TAB end TAB type TAB "
                     "sub_type TAB eid TAB name");
  ingest->callback([&] {
    action = [&] {
      enamex::Document doc = enamex::parse(read_file(ingest_in));
      size_t mentions = 0, invalid = 0;
      std::ostringstream standoff;
      for (const Sentence& s : doc.sentences) {
        mentions += s.mentions.size();
        ValidationReport report = validate_mentions(s);
        if (!report.ok()) {
          ++invalid;
          err << "sentence " << s.sent_id << ": " << report.to_string() << "\n";
        }
        for (const Mention& m : s.mentions) {
          standoff << s.sent_id << '\t' << m.start << '\t' << m.end << '\t' << to_string(m.ne_type)
                   << '\t' << m.sub_type.value_or("_") << '\t' << m.eid.value_or("_") << '\t'
                   << m.name.value_or("_") << '\n';
        }
      }
      err << doc.sentences.size() << " sentences, " << mentions << " mentions\n";
      if (invalid) return kDataErrors;
      if (!ingest_out.empty()) write_file(ingest_out, enamex::serialize(doc), out);
      if (!ingest_standoff.empty()) write_file(ingest_standoff, standoff.str(), out);
      return kOk;
    };
  });

  // align
  std::string align_enamex, align_conllu, align_out, align_errors;
  auto* align_cmd = app.add_subcommand("align", "Project ENAMEX mentions onto a CoNLL-U treebank");
  align_cmd->add_option("--enamex", align_enamex, "ENAMEX file")->required()->check(CLI::ExistingFile);
  align_cmd->add_option("--conllu", align_conllu, "CoNLL-U file")->required()->check(CLI::ExistingFile);
  align_cmd->add_option("--out", align_out, "Extended CoNLL-U output")->required();
  align_cmd->add_option("--errors", align_errors,
                        "Error records: sentence_id TAB kind TAB detail")
      ->required();
  threads_flag(align_cmd);
  align_cmd->callback([&] {
    action = [&] {
      enamex::Document doc = enamex::parse(read_file(align_enamex));
      std::vector<Sentence> treebank = read_any(align_conllu);
      for (Sentence& s : treebank) s.token_mentions.clear();
      align::AlignmentResult result = align::align_corpus(doc, std::move(treebank), opt.threads);
      write_file(align_out, conllu::emit_extended_string(result.corpus), out);
      write_file(align_errors, result.report.records(), out);
      err << result.report.summary();
      return result.report.clean() ? kOk : kDataErrors;
    };
  });

  // convert
  std::string convert_in, convert_out, convert_to = "conllu";
  auto* convert = app.add_subcommand("convert", "Convert an extended CoNLL-U file");
  convert->add_option("--in", convert_in, "Extended CoNLL-U input")->required()->check(CLI::ExistingFile);
  convert->add_option("--out", convert_out, "Output path, '-' for stdout")->required();
  convert->add_option("--to", convert_to,
                      "conllu: drop the entity columns; bio: FORM TAB TAG lines; "
                      "enamex: detokenized inline ENAMEX")
      ->check(CLI::IsMember({"conllu", "bio", "enamex"}));
  convert->callback([&] {
    action = [&] {
      std::vector<Sentence> corpus = read_extended(convert_in);
      std::ostringstream buf;
      if (convert_to == "conllu") {
        conllu::emit(corpus, buf);
      } else if (convert_to == "bio") {
        for (const Sentence& s : corpus) {
          auto tags = bio::encode(s.token_mentions, s.word_count());
          auto words = s.words();
          for (size_t i = 0; i < words.size(); ++i) buf << words[i]->form << '\t' << tags[i].str() << '\n';
          buf << '\n';
        }
      } else {
        enamex::Document doc;
        for (const Sentence& s : corpus) doc.sentences.push_back(detokenize(s));
        buf << enamex::serialize(doc);
      }
      write_file(convert_out, buf.str(), out);
      return kOk;
    };
  });

  // stats
  std::string stats_in;
  auto* stats = app.add_subcommand("stats", "Corpus and mention counts of an extended CoNLL-U file");
  stats->add_option("--in", stats_in, "Extended CoNLL-U input")->required()->check(CLI::ExistingFile);
  stats->callback([&] {
    action = [&] {
      out << render(compute_stats(read_extended(stats_in)));
      return kOk;
    };
  });

  // train
  std::vector<std::string> train_files, dev_files, train_gaz;
  std::string model_out, train_log;
  crf::TrainConfig config;
  auto* train = app.add_subcommand("train", "Train a CRF tagger");
  train->add_option("--train", train_files, "Extended CoNLL-U training data")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--dev", dev_files, "Extended CoNLL-U development data")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--gazetteer", train_gaz, "Gazetteer file; earlier files take priority")
      ->check(CLI::ExistingFile);
  train->add_option("--l1", config.l1, "L1 penalty")->capture_default_str();
  train->add_option("--l2", config.l2, "L2 penalty")->capture_default_str();
  train->add_option("--seed", config.seed, "Seed recorded in the model")->capture_default_str();
  train->add_option("--max-epochs", config.max_epochs)->capture_default_str();
  train->add_option("--patience", config.patience,
                    "Epochs without dev improvement before stopping")
      ->capture_default_str();
  train->add_option("--model-out", model_out, "Model file")->required();
  train->add_option("--log", train_log, "Training log (epoch TAB objective TAB dev_error)");
  threads_flag(train);
  train->callback([&] {
    action = [&] {
      config.validate();
      features::Extractor extractor(load_gazetteers(train_gaz, err));
      std::vector<Sentence> train_corpus, dev_corpus;
      for (const auto& f : train_files) {
        auto part = read_extended(f);
        train_corpus.insert(train_corpus.end(), part.begin(), part.end());
      }
      for (const auto& f : dev_files) {
        auto part = read_extended(f);
        dev_corpus.insert(dev_corpus.end(), part.begin(), part.end());
      }
      auto train_set = crf::labeled_sequences(extractor, train_corpus, opt.threads);
      auto dev_set = crf::labeled_sequences(extractor, dev_corpus, opt.threads);
      crf::TrainResult result =
          crf::train(train_set, dev_set, config, extractor.template_hash(), opt.threads);
      crf::save(result.model, model_out);
      if (!train_log.empty()) {
        write_file(train_log, result.log_text(), out);
      } else {
        err << result.log_text();
      }
      err << "best epoch " << result.best_epoch << ", " << result.model.num_features()
          << " features, " << result.model.num_tags() << " tags\n";
      return kOk;
    };
  });

  // tag
  std::string tag_model, tag_in, tag_out;
  std::vector<std::string> tag_gaz;
  bool tag_broadcast = false;
  auto* tag = app.add_subcommand("tag", "Tag a CoNLL-U file with a trained model");
  tag->add_option("--model", tag_model, "Model file")->required()->check(CLI::ExistingFile);
  tag->add_option("--in", tag_in, "CoNLL-U or extended CoNLL-U input")
      ->required()
      ->check(CLI::ExistingFile);
  tag->add_option("--out", tag_out, "Extended CoNLL-U output, '-' for stdout")->required();
  tag->add_option("--gazetteer", tag_gaz, "The gazetteers used at training time, same order")
      ->check(CLI::ExistingFile);
  tag->add_flag("--broadcast", tag_broadcast, "Apply mention broadcasting after decoding");
  threads_flag(tag);
  tag->callback([&] {
    action = [&] {
      features::Extractor extractor(load_gazetteers(tag_gaz, err));
      crf::Model model = crf::load(tag_model, extractor.template_hash());
      auto corpus = crf::tag_corpus(model, extractor, read_any(tag_in), opt.threads);
      if (tag_broadcast) corpus = crf::broadcast_mentions(std::move(corpus));
      write_file(tag_out, conllu::emit_extended_string(corpus), out);
      return kOk;
    };
  });

  // broadcast
  std::string bc_in, bc_out;
  auto* broadcast = app.add_subcommand("broadcast", "Apply mention broadcasting to a tagged file");
  broadcast->add_option("--in", bc_in, "Extended CoNLL-U input")->required()->check(CLI::ExistingFile);
  broadcast->add_option("--out", bc_out, "Extended CoNLL-U output, '-' for stdout")->required();
  broadcast->callback([&] {
    action = [&] {
      auto corpus = crf::broadcast_mentions(read_extended(bc_in));
      write_file(bc_out, conllu::emit_extended_string(corpus), out);
      return kOk;
    };
  });

  // eval
  std::string eval_gold, eval_pred, eval_records;
  auto* eval_cmd = app.add_subcommand("eval", "Entity-level precision, recall and F1");
  eval_cmd->add_option("--gold", eval_gold, "Gold extended CoNLL-U")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--pred", eval_pred, "Predicted extended CoNLL-U")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--records", eval_records,
                       "Also write type TAB tp TAB fp TAB fn TAB P TAB R TAB F1 records");
  eval_cmd->callback([&] {
    action = [&] {
      eval::Report report = eval::evaluate(read_extended(eval_gold), read_extended(eval_pred));
      out << report.table();
      if (!eval_records.empty()) write_file(eval_records, report.records(), out);
      return kOk;
    };
  });

  // split
  std::string split_in, split_sizes, split_dir;
  std::optional<uint64_t> split_seed;
  auto* split_cmd = app.add_subcommand("split", "Chronological or seeded shuffled train/dev/test split");
  split_cmd->add_option("--in", split_in, "CoNLL-U or extended CoNLL-U corpus")
      ->required()
      ->check(CLI::ExistingFile);
  split_cmd->add_option("--sizes", split_sizes, "train,dev,test sentence counts")->required();
  split_cmd->add_option("--seed", split_seed, "Shuffle with this seed; omit for chronological");
  split_cmd->add_option("--out-dir", split_dir, "Output directory")->required();
  split_cmd->callback([&] {
    action = [&] {
      std::vector<size_t> sizes;
      std::istringstream in(split_sizes);
      for (std::string item; std::getline(in, item, ',');) {
        size_t used = 0;
        unsigned long long v = 0;
        try {
          v = std::stoull(item, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != item.size() || item.empty() || item[0] == '-') {
          throw Error("--sizes: '" + item + "' is not a sentence count");
        }
        sizes.push_back(v);
      }
      if (sizes.size() != 3) throw Error("--sizes needs exactly three counts");
      std::ifstream corpus_in(split_in, std::ios::binary);
      bool extended = false;
      std::vector<Sentence> corpus = conllu::parse_any(corpus_in, &extended);
      split::SplitSpec spec{sizes[0], sizes[1], sizes[2], split_seed};
      split::Partition p = split::split_indices(corpus.size(), spec);

      std::filesystem::create_directories(split_dir);
      const std::pair<const char*, const std::vector<size_t>*> parts[] = {
          {"train", &p.train}, {"dev", &p.dev}, {"test", &p.test}};
      for (const auto& [name, ids] : parts) {
        std::ostringstream manifest, data;
        std::vector<Sentence> subset;
        for (size_t i : *ids) {
          manifest << corpus[i].sent_id << '\n';
          subset.push_back(corpus[i]);
        }
        if (extended) {
          conllu::emit_extended(subset, data);
        } else {
          conllu::emit(subset, data);
        }
        std::filesystem::path dir(split_dir);
        write_file((dir / (std::string(name) + ".ids")).string(), manifest.str(), out);
        write_file((dir / (std::string(name) + ".conllu")).string(), data.str(), out);
      }
      err << "split " << corpus.size() << " sentences into " << p.train.size() << "/"
          << p.dev.size() << "/" << p.test.size()
          << (split_seed ? " (shuffled, seed " + std::to_string(*split_seed) + ")" : " (chronological)")
          << "\n";
      return kOk;
    };
  });

  std::vector<std::string> argv_storage = args;
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFailure;
  }
  try {
    return action();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace nerkit::cli
