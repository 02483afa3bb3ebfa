#include <doctest.h>

#include <sstream>

#include "nerkit/conllu.h"
#include "nerkit/error.h"
#include "support/generators.h"

using namespace nerkit;

namespace {

std::string line(const std::string& id, const std::string& form, const std::string& upos = "_") {
  return id + "\t" + form + "\t_\t" + upos + "\t_\t_\t_\t_\t_\t_";
}

const std::string kJaponTreebank = "# sent_id = ftb-1\n" + line("1", "Le", "DET") + "\n" +
                                   line("2", "Japon", "PROPN") + "\n" +
                                   line("3", "signe", "VERB") + "\n" + line("4", ".", "PUNCT") +
                                   "\n\n";

std::vector<std::string> ne_columns(const std::string& extended) {
  std::vector<std::string> out;
  std::istringstream in(extended);
  for (std::string l; std::getline(in, l);) {
    if (l.empty() || l[0] == '#') continue;
    size_t cut = 0;
    for (int i = 0; i < 10; ++i) cut = l.find('\t', cut) + 1;
    out.push_back(l.substr(cut));
  }
  return out;
}

size_t parse_error_line(const std::string& text, bool extended) {
  try {
    if (extended) {
      conllu::parse_extended_string(text);
    } else {
      conllu::parse_string(text);
    }
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("plain parse") {
  auto corpus = conllu::parse_string(line("1", "Le") + "\n" + line("2", "Japon") + "\n");
  REQUIRE(corpus.size() == 1);  // no blank line at EOF
  REQUIRE(corpus[0].tokens.size() == 2);
  CHECK(corpus[0].tokens[0].form == "Le");
  CHECK(corpus[0].tokens[1].form == "Japon");
  CHECK(corpus[0].sent_id == "1");
  CHECK(corpus[0].tokens[1].source_line == line("2", "Japon"));
}

TEST_CASE("multiword range") {
  auto corpus = conllu::parse_string(line("1", "Il") + "\n" + line("2", "parle") + "\n" +
                                     line("3", "hier") + "\n" + line("4-5", "du") + "\n" +
                                     line("4", "de") + "\n" + line("5", "le") + "\n" +
                                     line("6", "Japon") + "\n\n");
  const Sentence& s = corpus.at(0);
  REQUIRE(s.tokens.size() == 7);
  const Token& r = s.tokens[3];
  CHECK(r.is_multiword_range);
  CHECK(r.form == "du");
  CHECK(r.range_span == std::make_pair(4, 5));
  CHECK(s.word_count() == 6);
}

TEST_CASE("sent_id comment and comments kept") {
  auto corpus = conllu::parse_string(kJaponTreebank + "# text = x\n" + line("1", "Oui") + "\n\n");
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].sent_id == "ftb-1");
  CHECK(corpus[0].comments == std::vector<std::string>{"# sent_id = ftb-1"});
  CHECK(corpus[1].sent_id == "2");
}

TEST_CASE("plain parse errors carry line numbers") {
  CHECK(parse_error_line(line("1", "a") + "\n" + "2\tb\t_\n", false) == 2);
  CHECK(parse_error_line(line("1", "a") + "\n" + line("3", "b") + "\n", false) == 2);
  CHECK(parse_error_line(line("1-2", "du") + "\n" + line("1", "de") + "\n\n", false) == 1);
  CHECK(parse_error_line(line("1", "a") + "\n" + line("1.1", "b") + "\n", false) == 2);
  CHECK(parse_error_line(line("1", "a") + "\n# late\n", false) == 2);
  CHECK(parse_error_line("\n", false) == 1);
}

TEST_CASE("extended output of the Japon example") {
  auto corpus = conllu::parse_string(kJaponTreebank);
  TokenMention m;
  m.ne_type = NeType::kLocation;
  m.sub_type = "Country";
  m.eid = "2000000001861060";
  m.name = "Japan";
  m.first_token = 2;
  m.last_token = 2;
  corpus[0].token_mentions = {m};
  std::string out = conllu::emit_extended_string(corpus);
  CHECK(ne_columns(out) == std::vector<std::string>{"O\t_\t_",
                                                    "B-Location.Country\t2000000001861060\tJapan",
                                                    "O\t_\t_", "O\t_\t_"});
  auto back = conllu::parse_extended_string(out);
  CHECK(back == corpus);
}

TEST_CASE("no mentions gives all O") {
  auto corpus = conllu::parse_string(kJaponTreebank);
  auto cols = ne_columns(conllu::emit_extended_string(corpus));
  CHECK(cols == std::vector<std::string>(4, "O\t_\t_"));
  CHECK(conllu::parse_extended_string(conllu::emit_extended_string(corpus))[0]
            .token_mentions.empty());
}

TEST_CASE("multi-token mention repeats eid and name") {
  auto corpus = conllu::parse_string(kJaponTreebank);
  TokenMention m;
  m.ne_type = NeType::kPerson;
  m.eid = "42";
  m.name = "X Y";
  m.first_token = 2;
  m.last_token = 4;
  corpus[0].token_mentions = {m};
  auto cols = ne_columns(conllu::emit_extended_string(corpus));
  CHECK(cols == std::vector<std::string>{"O\t_\t_", "B-Person\t42\tX Y", "I-Person\t42\tX Y",
                                         "I-Person\t42\tX Y"});
}

TEST_CASE("range lines carry underscores") {
  auto corpus = conllu::parse_string(line("1-2", "du") + "\n" + line("1", "de") + "\n" +
                                     line("2", "le") + "\n" + line("3", "Japon") + "\n\n");
  TokenMention m;
  m.ne_type = NeType::kLocation;
  m.first_token = 1;
  m.last_token = 3;
  corpus[0].token_mentions = {m};
  auto cols = ne_columns(conllu::emit_extended_string(corpus));
  CHECK(cols == std::vector<std::string>{"_\t_\t_", "B-Location\t_\t_", "I-Location\t_\t_",
                                         "I-Location\t_\t_"});

  m.first_token = 2;  // boundary inside the range 1-2
  corpus[0].token_mentions = {m};
  CHECK_THROWS_AS(conllu::emit_extended_string(corpus), ValidationError);
}

TEST_CASE("emit refuses unwritable attributes") {
  auto corpus = conllu::parse_string(kJaponTreebank);
  TokenMention m;
  m.first_token = 2;
  m.last_token = 2;
  m.name = "a\tb";
  corpus[0].token_mentions = {m};
  CHECK_THROWS_AS(conllu::emit_extended_string(corpus), ValidationError);
  m.name = "_";
  corpus[0].token_mentions = {m};
  CHECK_THROWS_AS(conllu::emit_extended_string(corpus), ValidationError);
}

TEST_CASE("extended parse errors") {
  auto ext = [](const std::string& id, const std::string& form, const std::string& ne) {
    return line(id, form) + "\t" + ne;
  };
  // I without B in strict mode: error at that line.
  std::string bad = ext("1", "a", "O\t_\t_") + "\n" + ext("2", "b", "I-Location\t_\t_") + "\n\n";
  CHECK(parse_error_line(bad, true) == 2);
  auto repaired = conllu::parse_extended_string(bad, bio::DecodeMode::kRepair);
  REQUIRE(repaired[0].token_mentions.size() == 1);
  CHECK(repaired[0].token_mentions[0].first_token == 2);

  CHECK(parse_error_line(ext("1", "a", "O\t7\t_") + "\n\n", true) == 1);
  CHECK(parse_error_line(ext("1", "a", "B-Person\t1\t_") + "\n" + ext("2", "b", "I-Person\t2\t_") +
                             "\n\n",
                         true) == 2);
  CHECK(parse_error_line(ext("1", "a", "B-Planet\t_\t_") + "\n\n", true) == 1);
  CHECK(parse_error_line(line("1", "a") + "\n\n", true) == 1);
}

TEST_CASE("parse_any detects the layout") {
  bool extended = true;
  std::istringstream plain(kJaponTreebank);
  conllu::parse_any(plain, &extended);
  CHECK_FALSE(extended);
  std::istringstream ext(conllu::emit_extended_string(conllu::parse_string(kJaponTreebank)));
  auto corpus = conllu::parse_any(ext, &extended);
  CHECK(extended);
  CHECK(corpus.size() == 1);
}

TEST_CASE("plain emit reproduces input") {
  std::string text = kJaponTreebank + line("1-2", "du") + "\n" + line("1", "de") + "\n" +
                     line("2", "le") + "\n\n";
  std::ostringstream out;
  conllu::emit(conllu::parse_string(text), out);
  CHECK(out.str() == text);
}

TEST_CASE("random extended round trip") {
  testing::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    auto corpus = testing::random_extended_corpus(rng, testing::uniform(rng, 1, 6));
    std::string text = conllu::emit_extended_string(corpus);
    CHECK(conllu::parse_extended_string(text) == corpus);
  }
}
