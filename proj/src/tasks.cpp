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

#include "xlt/tasks.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "xlt/common.hpp"

namespace xlt::tasks {

const char* task_kind_name(TaskKind k) {
  switch (k) {
    case TaskKind::kSequenceClassification: return "sequence_classification";
    case TaskKind::kTokenTagging: return "token_tagging";
    case TaskKind::kLemmatization: return "lemmatization";
    case TaskKind::kDependencyParsing: return "dependency_parsing";
    case TaskKind::kMaskedLm: return "masked_lm";
  }
  return "?";
}

TaskKind task_kind_from_name(const std::string& name) {
  for (TaskKind k :
       {TaskKind::kSequenceClassification, TaskKind::kTokenTagging,
        TaskKind::kLemmatization, TaskKind::kDependencyParsing,
        TaskKind::kMaskedLm}) {
    if (name == task_kind_name(k)) return k;
  }
  throw ValidationError("unknown task kind: " + name);
}

void TokenizedSentence::validate() const {
  if (tokens.empty()) throw ValidationError("sentence with no tokens");
  auto check_len = [&](size_t n, const char* what) {
    if (n != 0 && n != tokens.size()) {
      throw ValidationError(std::string("annotation length mismatch for ") +
                            what);
    }
  };
  check_len(upos.size(), "upos");
  check_len(feats.size(), "feats");
  check_len(lemmas.size(), "lemma");
  check_len(heads.size(), "head");
  check_len(deprels.size(), "deprel");
  check_len(ner_tags.size(), "ner");
  for (int h : heads) {
    if (h < 0 || h > static_cast<int>(tokens.size())) {
      throw ValidationError("head index " + std::to_string(h) +
                            " outside [0, " + std::to_string(tokens.size()) +
                            "]");
    }
  }
}

namespace {

bool is_integer(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

std::vector<TokenizedSentence> load_conllu(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open conllu file: " + path);

  std::vector<TokenizedSentence> out;
  TokenizedSentence current;
  std::string line;
  size_t lineno = 0;
  size_t sentence_start_line = 0;

  auto flush = [&]() {
    if (current.tokens.empty()) return;
    try {
      current.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(path + " sentence at line " +
                            std::to_string(sentence_start_line) + ": " +
                            e.what());
    }
    out.push_back(std::move(current));
    current = TokenizedSentence{};
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') continue;
    const auto cols = strings::split(line, '\t');
    if (cols.size() != 10) {
      throw ValidationError(path + " line " + std::to_string(lineno) +
                            ": expected 10 columns, got " +
                            std::to_string(cols.size()));
    }
    const std::string& id = cols[0];
    // Multi-word ranges ("3-4") and empty nodes ("5.1") are dropped; their
    // constituent integer-id rows carry the annotations we keep.
    if (id.find('-') != std::string::npos ||
        id.find('.') != std::string::npos) {
      continue;
    }
    if (!is_integer(id)) {
      throw ValidationError(path + " line " + std::to_string(lineno) +
                            ": malformed token id '" + id + "'");
    }
    if (current.tokens.empty()) sentence_start_line = lineno;
    if (!is_integer(cols[6])) {
      throw ValidationError(path + " line " + std::to_string(lineno) +
                            ": non-integer head '" + cols[6] + "'");
    }
    current.tokens.push_back(cols[1]);
    current.lemmas.push_back(cols[2]);
    current.upos.push_back(cols[3]);
    current.feats.push_back(cols[5]);
    current.heads.push_back(std::stoi(cols[6]));
    current.deprels.push_back(cols[7]);
  }
  flush();
  return out;
}

void write_conllu(const std::string& path,
                  const std::vector<TokenizedSentence>& sentences) {
  std::ostringstream out;
  for (const auto& s : sentences) {
    s.validate();
    for (size_t i = 0; i < s.tokens.size(); ++i) {
      out << (i + 1) << '\t' << s.tokens[i] << '\t'
          << (s.lemmas.empty() ? "_" : s.lemmas[i]) << '\t'
          << (s.upos.empty() ? "_" : s.upos[i]) << '\t' << '_' << '\t'
          << (s.feats.empty() ? "_" : s.feats[i]) << '\t'
          << (s.heads.empty() ? std::string("0")
                              : std::to_string(s.heads[i]))
          << '\t' << (s.deprels.empty() ? "_" : s.deprels[i]) << '\t' << '_'
          << '\t' << '_' << '\n';
    }
    out << '\n';
  }
  write_file(path, out.str());
}

std::vector<TokenizedSentence> load_bio_ner(const std::string& path,
                                            bool repair_bio) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open ner file: " + path);

  std::vector<TokenizedSentence> out;
  TokenizedSentence current;
  std::string line;
  size_t lineno = 0;

  auto flush = [&]() {
    if (current.tokens.empty()) return;
    out.push_back(std::move(current));
    current = TokenizedSentence{};
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (strings::trim(line).empty()) {
      flush();
      continue;
    }
    const auto cols = strings::split_ws(line);
    if (cols.size() != 2) {
      throw ValidationError(path + " line " + std::to_string(lineno) +
                            ": expected token and tag, got " +
                            std::to_string(cols.size()) + " fields");
    }
    std::string tag = cols[1];
    const bool is_o = tag == "O";
    const bool is_b = strings::starts_with(tag, "B-") && tag.size() > 2;
    const bool is_i = strings::starts_with(tag, "I-") && tag.size() > 2;
    if (!is_o && !is_b && !is_i) {
      throw ValidationError(path + " line " + std::to_string(lineno) +
                            ": tag '" + tag + "' is not O/B-X/I-X");
    }
    if (is_i) {
      const std::string entity = tag.substr(2);
      const bool continues =
          !current.ner_tags.empty() &&
          (current.ner_tags.back() == "B-" + entity ||
           current.ner_tags.back() == "I-" + entity);
      if (!continues) {
        if (repair_bio) {
          tag = "B-" + entity;
        } else {
          throw ValidationError(path + " line " + std::to_string(lineno) +
                                ": '" + tag +
                                "' does not continue a B-/I- chunk");
        }
      }
    }
    current.tokens.push_back(cols[0]);
    current.ner_tags.push_back(tag);
  }
  flush();
  return out;
}

namespace {

// ':' and '%' are structural in edit-script labels; escape them in payloads.
std::string escape_payload(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '%') {
      out += "%25";
    } else if (c == ':') {
      out += "%3A";
    } else {
      out += c;
    }
  }
  return out;
}

std::string unescape_payload(const std::string& s) {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      const std::string code = s.substr(i + 1, 2);
      if (code == "25") {
        out += '%';
        i += 2;
        continue;
      }
      if (code == "3A") {
        out += ':';
        i += 2;
        continue;
      }
    }
    out += s[i];
  }
  return out;
}

struct CommonCore {
  size_t form_pos = 0;
  size_t lemma_pos = 0;
  size_t length = 0;
};

// Longest common substring; ties resolved toward the earliest position in
// the form, then in the lemma, so labels are deterministic.
CommonCore longest_common_substring(const std::string& form,
                                    const std::string& lemma) {
  CommonCore best;
  std::vector<std::vector<size_t>> dp(form.size() + 1,
                                      std::vector<size_t>(lemma.size() + 1, 0));
  for (size_t i = 1; i <= form.size(); ++i) {
    for (size_t j = 1; j <= lemma.size(); ++j) {
      if (form[i - 1] != lemma[j - 1]) continue;
      dp[i][j] = dp[i - 1][j - 1] + 1;
      const size_t len = dp[i][j];
      const size_t fpos = i - len;
      const size_t lpos = j - len;
      const bool better =
          len > best.length ||
          (len == best.length && len > 0 &&
           (fpos < best.form_pos ||
            (fpos == best.form_pos && lpos < best.lemma_pos)));
      if (better) {
        best = {fpos, lpos, len};
      }
    }
  }
  return best;
}

}  // namespace

std::string induce_edit_script(const std::string& form,
                               const std::string& lemma) {
  if (form.empty() || lemma.empty()) {
    throw ValidationError("induce_edit_script: empty form or lemma");
  }
  const CommonCore core = longest_common_substring(form, lemma);
  if (core.length == 0) {
    return "repl:" + escape_payload(lemma);
  }
  const size_t cut_front = core.form_pos;
  const size_t cut_back = form.size() - core.form_pos - core.length;
  const std::string add_front = lemma.substr(0, core.lemma_pos);
  const std::string add_back = lemma.substr(core.lemma_pos + core.length);
  return "edit:" + std::to_string(cut_front) + ":" +
         std::to_string(cut_back) + ":" + escape_payload(add_front) + ":" +
         escape_payload(add_back);
}

std::string apply_edit_script(const std::string& form,
                              const std::string& label) {
  const auto parts = strings::split(label, ':');
  if (parts.size() == 2 && parts[0] == "repl") {
    return unescape_payload(parts[1]);
  }
  if (parts.size() == 5 && parts[0] == "edit") {
    if (!is_integer(parts[1]) || !is_integer(parts[2])) {
      throw ValidationError("malformed edit script: " + label);
    }
    const size_t cut_front = static_cast<size_t>(std::stoul(parts[1]));
    const size_t cut_back = static_cast<size_t>(std::stoul(parts[2]));
    if (cut_front + cut_back > form.size()) {
      throw ValidationError("edit script '" + label +
                            "' cuts more than the form '" + form + "' has");
    }
    return unescape_payload(parts[3]) +
           form.substr(cut_front, form.size() - cut_front - cut_back) +
           unescape_payload(parts[4]);
  }
  throw ValidationError("malformed edit script: " + label);
}

size_t TaskSplit::size() const {
  return sequences.empty() ? sentences.size() : sequences.size();
}

std::set<std::string> TaskDataset::languages() const {
  std::set<std::string> out;
  for (const auto& [lang, _] : by_language) out.insert(lang);
  return out;
}

const TaskSplit& TaskDataset::split(const std::string& language,
                                    corpus::Split s) const {
  const auto it = by_language.find(language);
  if (it == by_language.end()) {
    throw ValidationError("task " + name + ": no data for language " +
                          language);
  }
  return it->second[static_cast<size_t>(s)];
}

TaskSplit& TaskDataset::split(const std::string& language, corpus::Split s) {
  return by_language[language][static_cast<size_t>(s)];
}

size_t TaskDataset::total_size(corpus::Split s) const {
  size_t n = 0;
  for (const auto& [_, splits] : by_language) {
    n += splits[static_cast<size_t>(s)].size();
  }
  return n;
}

const std::vector<std::string>& annotation_tags(const TokenizedSentence& s,
                                                const std::string& annotation) {
  if (annotation == "upos") return s.upos;
  if (annotation == "feats") return s.feats;
  if (annotation == "ner") return s.ner_tags;
  throw ValidationError("unknown annotation layer: " + annotation);
}

void TaskDataset::validate() const {
  const std::set<std::string> space(label_space.begin(), label_space.end());
  auto check_label = [&](const std::string& label, const std::string& where) {
    if (!space.count(label)) {
      throw ValidationError("task " + name + ": label '" + label +
                            "' outside the label space (" + where + ")");
    }
  };

  for (const auto& [lang, splits] : by_language) {
    for (corpus::Split s : corpus::kAllSplits) {
      const auto& split_data = splits[static_cast<size_t>(s)];
      const std::string where = lang + "/" + corpus::split_name(s);
      switch (kind) {
        case TaskKind::kSequenceClassification:
          for (const auto& ex : split_data.sequences) {
            check_label(ex.label, where);
          }
          break;
        case TaskKind::kTokenTagging:
          for (const auto& sent : split_data.sentences) {
            sent.validate();
            for (const auto& tag : annotation_tags(sent, annotation)) {
              check_label(tag, where);
            }
          }
          break;
        case TaskKind::kLemmatization:
          for (const auto& sent : split_data.sentences) {
            sent.validate();
            if (sent.lemmas.size() != sent.tokens.size()) {
              throw ValidationError("task " + name + ": missing lemmas (" +
                                    where + ")");
            }
            for (size_t i = 0; i < sent.tokens.size(); ++i) {
              check_label(induce_edit_script(sent.tokens[i], sent.lemmas[i]),
                          where);
            }
          }
          break;
        case TaskKind::kDependencyParsing:
          for (const auto& sent : split_data.sentences) {
            sent.validate();
            if (sent.heads.size() != sent.tokens.size() ||
                sent.deprels.size() != sent.tokens.size()) {
              throw ValidationError("task " + name +
                                    ": missing heads/deprels (" + where + ")");
            }
            for (const auto& rel : sent.deprels) check_label(rel, where);
          }
          break;
        case TaskKind::kMaskedLm:
          for (const auto& sent : split_data.sentences) {
            if (sent.tokens.empty()) {
              throw ValidationError("task " + name + ": empty sentence (" +
                                    where + ")");
            }
          }
          break;
      }
    }
  }
}

void TaskDataset::merge_language(const TaskDataset& other) {
  if (other.name != name || other.kind != kind ||
      other.annotation != annotation) {
    throw ValidationError("merge_language: incompatible task datasets (" +
                          name + " vs " + other.name + ")");
  }
  for (const auto& [lang, splits] : other.by_language) {
    if (by_language.count(lang)) {
      throw ValidationError("merge_language: language " + lang +
                            " already present in task " + name);
    }
    by_language[lang] = splits;
  }
  std::vector<std::string> merged = label_space;
  merged.insert(merged.end(), other.label_space.begin(),
                other.label_space.end());
  label_space = induce_label_space(merged);
}

std::vector<std::string> induce_label_space(
    const std::vector<std::string>& occurrences) {
  std::set<std::string> unique(occurrences.begin(), occurrences.end());
  return std::vector<std::string>(unique.begin(), unique.end());
}

TaskDataset make_hate_task(const std::vector<corpus::Corpus>& corpora) {
  if (corpora.empty()) throw ValidationError("make_hate_task: no corpora");
  TaskDataset task;
  task.name = "hate";
  task.kind = TaskKind::kSequenceClassification;
  task.label_space = {std::string(corpus::kHateful),
                      std::string(corpus::kNonHateful)};
  for (const auto& c : corpora) {
    if (task.by_language.count(c.language)) {
      throw ValidationError("make_hate_task: duplicate language " +
                            c.language);
    }
    auto& splits = task.by_language[c.language];
    for (corpus::Split s : corpus::kAllSplits) {
      splits[static_cast<size_t>(s)].sequences = c.split(s);
    }
  }
  task.validate();
  return task;
}

TaskDataset load_sentiment(const std::string& dir, const std::string& language,
                           const std::optional<corpus::SplitSizes>& expected) {
  const corpus::Corpus c =
      corpus::read_corpus_dir(dir, "sentiment", language, "sentiment");
  TaskDataset task;
  task.name = "sentiment";
  task.kind = TaskKind::kSequenceClassification;
  task.label_space = {"negative", "neutral", "positive"};
  auto& splits = task.by_language[language];
  for (corpus::Split s : corpus::kAllSplits) {
    if (expected && c.split(s).size() != expected->of(s)) {
      throw ValidationError(
          "load_sentiment: declared " + std::string(corpus::split_name(s)) +
          " size " + std::to_string(expected->of(s)) + " but file has " +
          std::to_string(c.split(s).size()));
    }
    splits[static_cast<size_t>(s)].sequences = c.split(s);
  }
  task.validate();
  return task;
}

TaskDataset make_tagging_task(
    const std::string& name, const std::string& annotation,
    const std::map<std::string, std::array<std::vector<TokenizedSentence>, 3>>&
        sentences) {
  TaskDataset task;
  task.name = name;
  task.kind = TaskKind::kTokenTagging;
  task.annotation = annotation;
  std::vector<std::string> tags;
  for (const auto& [lang, splits] : sentences) {
    auto& dest = task.by_language[lang];
    for (size_t s = 0; s < 3; ++s) {
      dest[s].sentences = splits[s];
      for (const auto& sent : splits[s]) {
        const auto& layer = annotation_tags(sent, annotation);
        tags.insert(tags.end(), layer.begin(), layer.end());
      }
    }
  }
  task.label_space = induce_label_space(tags);
  task.validate();
  return task;
}

std::vector<TaskDataset> build_ud_bundle(
    const std::string& prefix,
    const std::map<std::string, std::array<std::vector<TokenizedSentence>, 3>>&
        sentences) {
  std::vector<TaskDataset> bundle;

  bundle.push_back(make_tagging_task(prefix + "-upos", "upos", sentences));
  bundle.push_back(make_tagging_task(prefix + "-feats", "feats", sentences));

  TaskDataset lemma;
  lemma.name = prefix + "-lemma";
  lemma.kind = TaskKind::kLemmatization;
  std::vector<std::string> scripts;
  for (const auto& [lang, splits] : sentences) {
    auto& dest = lemma.by_language[lang];
    for (size_t s = 0; s < 3; ++s) {
      dest[s].sentences = splits[s];
      for (const auto& sent : splits[s]) {
        for (size_t i = 0; i < sent.tokens.size(); ++i) {
          scripts.push_back(
              induce_edit_script(sent.tokens[i], sent.lemmas[i]));
        }
      }
    }
  }
  lemma.label_space = induce_label_space(scripts);
  lemma.validate();
  bundle.push_back(std::move(lemma));

  TaskDataset deps;
  deps.name = prefix + "-deps";
  deps.kind = TaskKind::kDependencyParsing;
  std::vector<std::string> rels;
  for (const auto& [lang, splits] : sentences) {
    auto& dest = deps.by_language[lang];
    for (size_t s = 0; s < 3; ++s) {
      dest[s].sentences = splits[s];
      for (const auto& sent : splits[s]) {
        rels.insert(rels.end(), sent.deprels.begin(), sent.deprels.end());
      }
    }
  }
  deps.label_space = induce_label_space(rels);
  deps.validate();
  bundle.push_back(std::move(deps));

  return bundle;
}

TaskDataset make_mlm_task(
    const std::string& name,
    const std::map<std::string, std::array<std::vector<TokenizedSentence>, 3>>&
        sentences) {
  TaskDataset task;
  task.name = name;
  task.kind = TaskKind::kMaskedLm;
  for (const auto& [lang, splits] : sentences) {
    auto& dest = task.by_language[lang];
    for (size_t s = 0; s < 3; ++s) dest[s].sentences = splits[s];
  }
  task.validate();
  return task;
}

}  // namespace xlt::tasks
