// Copyright 2026 The XLT Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "xlt/common.hpp"
#include "xlt/tasks.hpp"

using namespace xlt::tasks;
namespace corpus = xlt::corpus;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("xlt_tasks_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string conllu_row(int id, const std::string& form,
                       const std::string& lemma, const std::string& upos,
                       const std::string& feats, int head,
                       const std::string& deprel) {
  std::ostringstream out;
  out << id << '\t' << form << '\t' << lemma << '\t' << upos << "\t_\t"
      << feats << '\t' << head << '\t' << deprel << "\t_\t_\n";
  return out.str();
}

}  // namespace

TEST_CASE("load_conllu: field mapping and head list") {
  const auto dir = temp_dir("conllu1");
  const std::string path = (dir / "x.conllu").string();
  xlt::write_file(path,
                  "# sent_id = 1\n" +
                      conllu_row(1, "dogs", "dog", "NOUN",
                                 "Number=Plur", 2, "nsubj") +
                      conllu_row(2, "bark", "bark", "VERB", "_", 0, "root") +
                      "\n");
  const auto sentences = load_conllu(path);
  REQUIRE(sentences.size() == 1);
  const auto& s = sentences[0];
  CHECK(s.tokens == std::vector<std::string>{"dogs", "bark"});
  CHECK(s.lemmas == std::vector<std::string>{"dog", "bark"});
  CHECK(s.upos == std::vector<std::string>{"NOUN", "VERB"});
  CHECK(s.feats == std::vector<std::string>{"Number=Plur", "_"});
  CHECK(s.heads == std::vector<int>{2, 0});
  CHECK(s.deprels == std::vector<std::string>{"nsubj", "root"});
}

TEST_CASE("load_conllu: ranges and empty nodes are dropped") {
  const auto dir = temp_dir("conllu2");
  const std::string path = (dir / "x.conllu").string();
  xlt::write_file(
      path,
      "1-2\tdel\t_\t_\t_\t_\t_\t_\t_\t_\n" +
          conllu_row(1, "de", "de", "ADP", "_", 3, "case") +
          conllu_row(2, "el", "el", "DET", "_", 3, "det") +
          conllu_row(3, "mar", "mar", "NOUN", "_", 0, "root") +
          "3.1\tghost\t_\t_\t_\t_\t_\t_\t_\t_\n" + "\n");
  const auto sentences = load_conllu(path);
  REQUIRE(sentences.size() == 1);
  CHECK(sentences[0].tokens == std::vector<std::string>{"de", "el", "mar"});
  CHECK(sentences[0].heads == std::vector<int>{3, 3, 0});
}

TEST_CASE("load_conllu: errors carry line numbers") {
  const auto dir = temp_dir("conllu3");
  const std::string bad_cols = (dir / "cols.conllu").string();
  xlt::write_file(bad_cols, "1\tword\tlemma\n");
  try {
    load_conllu(bad_cols);
    FAIL("expected error");
  } catch (const xlt::ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 1") != std::string::npos);
    CHECK(msg.find("10 columns") != std::string::npos);
  }

  const std::string bad_head = (dir / "head.conllu").string();
  xlt::write_file(bad_head, "1\ta\ta\tX\t_\t_\tzz\troot\t_\t_\n");
  try {
    load_conllu(bad_head);
    FAIL("expected error");
  } catch (const xlt::ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 1") != std::string::npos);
    CHECK(msg.find("non-integer head") != std::string::npos);
  }

  const std::string bad_range = (dir / "range.conllu").string();
  xlt::write_file(bad_range, conllu_row(1, "a", "a", "X", "_", 5, "root"));
  CHECK_THROWS_AS(load_conllu(bad_range), xlt::ValidationError);
}

TEST_CASE("load_conllu: a 12543-sentence file loads completely") {
  const auto dir = temp_dir("conllu4");
  const std::string path = (dir / "big.conllu").string();
  std::ostringstream out;
  for (int i = 0; i < 12543; ++i) {
    out << conllu_row(1, "w" + std::to_string(i % 97), "w", "X", "_", 0,
                      "root")
        << "\n";
  }
  xlt::write_file(path, out.str());
  CHECK(load_conllu(path).size() == 12543);
}

TEST_CASE("write_conllu round-trips retained fields") {
  const auto dir = temp_dir("conllu5");
  const std::string path = (dir / "rt.conllu").string();
  std::vector<TokenizedSentence> sentences(2);
  sentences[0].tokens = {"a", "b"};
  sentences[0].lemmas = {"a", "b"};
  sentences[0].upos = {"DET", "NOUN"};
  sentences[0].feats = {"_", "Number=Sing"};
  sentences[0].heads = {2, 0};
  sentences[0].deprels = {"det", "root"};
  sentences[1].tokens = {"c"};
  sentences[1].lemmas = {"c"};
  sentences[1].upos = {"VERB"};
  sentences[1].feats = {"_"};
  sentences[1].heads = {0};
  sentences[1].deprels = {"root"};
  write_conllu(path, sentences);
  const auto back = load_conllu(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].tokens == sentences[0].tokens);
  CHECK(back[0].lemmas == sentences[0].lemmas);
  CHECK(back[0].upos == sentences[0].upos);
  CHECK(back[0].feats == sentences[0].feats);
  CHECK(back[0].heads == sentences[0].heads);
  CHECK(back[0].deprels == sentences[0].deprels);
  CHECK(back[1].tokens == sentences[1].tokens);
}

TEST_CASE("load_bio_ner: basic parse and BIO validation") {
  const auto dir = temp_dir("ner1");
  const std::string good = (dir / "good.txt").string();
  xlt::write_file(good,
                  "John\tB-PER\nruns\tO\n\nParis\tB-LOC\ntoday\tO\n");
  const auto sentences = load_bio_ner(good);
  REQUIRE(sentences.size() == 2);
  CHECK(sentences[0].tokens == std::vector<std::string>{"John", "runs"});
  CHECK(sentences[0].ner_tags == std::vector<std::string>{"B-PER", "O"});

  const std::string bad = (dir / "bad.txt").string();
  xlt::write_file(bad, "runs\tO\nSmith\tI-PER\n");
  try {
    load_bio_ner(bad);
    FAIL("expected error");
  } catch (const xlt::ValidationError& e) {
    CHECK(std::string(e.what()).find("I-PER") != std::string::npos);
  }
  // Repair mode rewrites the orphan continuation to B-.
  const auto repaired = load_bio_ner(bad, true);
  REQUIRE(repaired.size() == 1);
  CHECK(repaired[0].ner_tags == std::vector<std::string>{"O", "B-PER"});
}

TEST_CASE("load_bio_ner: I after same-type B or I is legal, type switch not") {
  const auto dir = temp_dir("ner2");
  const std::string ok = (dir / "ok.txt").string();
  xlt::write_file(ok, "New\tB-LOC\nYork\tI-LOC\nCity\tI-LOC\n");
  CHECK_NOTHROW(load_bio_ner(ok));
  const std::string swap = (dir / "swap.txt").string();
  xlt::write_file(swap, "New\tB-LOC\nYork\tI-ORG\n");
  CHECK_THROWS_AS(load_bio_ner(swap), xlt::ValidationError);
}

TEST_CASE("load_bio_ner induces the expected 3-entity label space") {
  const auto dir = temp_dir("ner3");
  const std::string path = (dir / "many.txt").string();
  std::ostringstream out;
  std::mt19937_64 gen(77);
  const std::vector<std::string> entities = {"PER", "ORG", "LOC"};
  for (int s = 0; s < 100; ++s) {
    const int len = 2 + static_cast<int>(gen() % 5);
    for (int t = 0; t < len; ++t) {
      if (gen() % 3 == 0) {
        const auto& e = entities[gen() % 3];
        out << "tok" << t << "\tB-" << e << "\n";
        if (gen() % 2 == 0 && t + 1 < len) {
          out << "tok" << t << "x\tI-" << e << "\n";
          ++t;
        }
      } else {
        out << "tok" << t << "\tO\n";
      }
    }
    out << "\n";
  }
  xlt::write_file(path, out.str());
  const auto sentences = load_bio_ner(path);
  CHECK(sentences.size() == 100);

  std::map<std::string, std::array<std::vector<TokenizedSentence>, 3>> data;
  data["en"] = {sentences, {sentences[0]}, {sentences[1]}};
  const TaskDataset task = make_tagging_task("ner", "ner", data);
  const std::vector<std::string> want = {"B-LOC", "B-ORG", "B-PER", "I-LOC",
                                         "I-ORG", "I-PER", "O"};
  CHECK(task.label_space == want);
}

TEST_CASE("edit scripts: spec anchors") {
  const std::string walking = induce_edit_script("walking", "walk");
  CHECK(apply_edit_script("walking", walking) == "walk");
  // Same suffix transformation, same label.
  CHECK(induce_edit_script("talking", "talk") == walking);
  CHECK(apply_edit_script("talking", walking) == "talk");

  const std::string was = induce_edit_script("was", "be");
  CHECK(xlt::strings::starts_with(was, "repl:"));
  CHECK(apply_edit_script("was", was) == "be");
}

TEST_CASE("edit scripts: round-trip holds on 1000 generated pairs") {
  std::mt19937_64 gen(909);
  auto random_word = [&](size_t lo, size_t hi) {
    const size_t len = lo + gen() % (hi - lo + 1);
    std::string w;
    for (size_t i = 0; i < len; ++i) {
      w += static_cast<char>('a' + gen() % 6);  // small alphabet, many cores
    }
    return w;
  };
  std::set<std::string> space;
  for (int trial = 0; trial < 1000; ++trial) {
    std::string form, lemma;
    switch (gen() % 4) {
      case 0: {  // suffix inflection
        const std::string stem = random_word(3, 6);
        form = stem + random_word(1, 3);
        lemma = stem;
        break;
      }
      case 1: {  // prefix + suffix changes
        const std::string stem = random_word(2, 5);
        form = random_word(1, 2) + stem + random_word(1, 2);
        lemma = random_word(0, 1) + stem;
        break;
      }
      case 2: {  // unrelated strings
        form = random_word(1, 5);
        lemma = random_word(1, 5);
        break;
      }
      default: {  // identity
        form = random_word(1, 7);
        lemma = form;
        break;
      }
    }
    if (lemma.empty()) lemma = "x";
    const std::string label = induce_edit_script(form, lemma);
    CAPTURE(form);
    CAPTURE(lemma);
    CAPTURE(label);
    CHECK(apply_edit_script(form, label) == lemma);
    space.insert(label);
  }
  CHECK(space.size() > 10);
  // Identity pairs collapse to one script regardless of surface form.
  CHECK(induce_edit_script("abc", "abc") ==
        induce_edit_script("zzzz", "zzzz"));
}

TEST_CASE("edit scripts: payload escaping survives structural characters") {
  const std::string label = induce_edit_script("x", "a:b%c");
  CHECK(apply_edit_script("x", label) == "a:b%c");
  const std::string label2 = induce_edit_script("q:r", "q");
  CHECK(apply_edit_script("q:r", label2) == "q");
}

TEST_CASE("load_sentiment: balanced fixture with declared sizes") {
  const auto dir = temp_dir("senti");
  const std::vector<std::string> labels = {"negative", "neutral", "positive"};
  auto write_split = [&](const std::string& name, size_t n) {
    std::ostringstream out;
    out << "id\ttext\tlabel\n";
    for (size_t i = 0; i < n; ++i) {
      out << name << i << "\tsome text " << i << "\t" << labels[i % 3]
          << "\n";
    }
    xlt::write_file((dir / (name + ".tsv")).string(), out.str());
  };
  write_split("train", 1839);
  write_split("dev", 324);
  write_split("test", 870);

  corpus::SplitSizes declared{1839, 324, 870};
  const TaskDataset task = load_sentiment(dir.string(), "en", declared);
  CHECK(task.kind == TaskKind::kSequenceClassification);
  CHECK(task.label_space == labels);
  CHECK(task.split("en", corpus::Split::kTrain).sequences.size() == 1839);
  CHECK(task.split("en", corpus::Split::kDev).sequences.size() == 324);

  // Balanced: each label close to one third of train.
  size_t pos = 0;
  for (const auto& ex : task.split("en", corpus::Split::kTrain).sequences) {
    if (ex.label == "positive") ++pos;
  }
  CHECK(std::abs(static_cast<double>(pos) / 1839.0 - 1.0 / 3.0) < 0.01);

  corpus::SplitSizes wrong{1839, 324, 871};
  CHECK_THROWS_AS(load_sentiment(dir.string(), "en", wrong),
                  xlt::ValidationError);
}

TEST_CASE("load_sentiment: unknown label is an error") {
  const auto dir = temp_dir("senti2");
  xlt::write_file((dir / "train.tsv").string(),
                  "id\ttext\tlabel\n1\tgrr\tangry\n");
  xlt::write_file((dir / "dev.tsv").string(), "id\ttext\tlabel\n");
  xlt::write_file((dir / "test.tsv").string(), "id\ttext\tlabel\n");
  CHECK_THROWS_AS(load_sentiment(dir.string(), "en"), xlt::ValidationError);
}

TEST_CASE("build_ud_bundle produces four aligned tasks") {
  TokenizedSentence s1;
  s1.tokens = {"dogs", "bark"};
  s1.lemmas = {"dog", "bark"};
  s1.upos = {"NOUN", "VERB"};
  s1.feats = {"Number=Plur", "_"};
  s1.heads = {2, 0};
  s1.deprels = {"nsubj", "root"};
  TokenizedSentence s2;
  s2.tokens = {"sleep"};
  s2.lemmas = {"sleep"};
  s2.upos = {"VERB"};
  s2.feats = {"_"};
  s2.heads = {0};
  s2.deprels = {"root"};

  std::map<std::string, std::array<std::vector<TokenizedSentence>, 3>> data;
  data["en"] = {std::vector<TokenizedSentence>{s1, s2},
                std::vector<TokenizedSentence>{s1},
                std::vector<TokenizedSentence>{s2}};

  const auto bundle = build_ud_bundle("ud", data);
  REQUIRE(bundle.size() == 4);
  CHECK(bundle[0].name == "ud-upos");
  CHECK(bundle[0].kind == TaskKind::kTokenTagging);
  CHECK(bundle[0].label_space == std::vector<std::string>{"NOUN", "VERB"});
  CHECK(bundle[1].name == "ud-feats");
  CHECK(bundle[1].label_space ==
        std::vector<std::string>{"Number=Plur", "_"});
  CHECK(bundle[2].name == "ud-lemma");
  CHECK(bundle[2].kind == TaskKind::kLemmatization);
  for (const auto& label : bundle[2].label_space) {
    // Every induced script round-trips on at least one training token.
    bool works = false;
    for (const auto& sent : {s1, s2}) {
      for (size_t i = 0; i < sent.tokens.size(); ++i) {
        try {
          if (apply_edit_script(sent.tokens[i], label) == sent.lemmas[i]) {
            works = true;
          }
        } catch (const xlt::ValidationError&) {
        }
      }
    }
    CHECK(works);
  }
  CHECK(bundle[3].name == "ud-deps");
  CHECK(bundle[3].kind == TaskKind::kDependencyParsing);
  CHECK(bundle[3].label_space == std::vector<std::string>{"nsubj", "root"});
}

TEST_CASE("TaskDataset: merge_language and validation") {
  corpus::Corpus en, es;
  en.name = "hate-en";
  en.language = "en";
  en.domain = "immigrants";
  es.name = "hate-es";
  es.language = "es";
  es.domain = "immigrants";
  corpus::LabeledExample ex;
  ex.id = "1";
  ex.text = "x";
  ex.label = std::string(corpus::kHateful);
  ex.language = "en";
  ex.domain = "immigrants";
  en.split(corpus::Split::kTrain).push_back(ex);
  ex.language = "es";
  ex.id = "2";
  es.split(corpus::Split::kTrain).push_back(ex);

  TaskDataset task = make_hate_task({en});
  TaskDataset other = make_hate_task({es});
  task.merge_language(other);
  CHECK(task.languages() == std::set<std::string>{"en", "es"});
  CHECK_THROWS_AS(task.merge_language(other), xlt::ValidationError);

  // Out-of-space label fails validation.
  task.split("en", corpus::Split::kTrain).sequences[0].label = "weird";
  CHECK_THROWS_AS(task.validate(), xlt::ValidationError);
}

TEST_CASE("TokenizedSentence::validate requires aligned layers") {
  TokenizedSentence s;
  s.tokens = {"a", "b"};
  s.upos = {"X"};
  CHECK_THROWS_AS(s.validate(), xlt::ValidationError);
  s.upos = {"X", "Y"};
  CHECK_NOTHROW(s.validate());
  s.heads = {3, 0};
  CHECK_THROWS_AS(s.validate(), xlt::ValidationError);
}

TEST_CASE("induce_label_space is sorted and unique") {
  CHECK(induce_label_space({"b", "a", "b", "c", "a"}) ==
        std::vector<std::string>{"a", "b", "c"});
}
