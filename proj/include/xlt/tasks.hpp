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

#ifndef XLT_TASKS_HPP
#define XLT_TASKS_HPP

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xlt/corpus.hpp"

namespace xlt::tasks {

enum class TaskKind {
  kSequenceClassification,
  kTokenTagging,
  kLemmatization,
  kDependencyParsing,
  kMaskedLm,
};
const char* task_kind_name(TaskKind k);
TaskKind task_kind_from_name(const std::string& name);

// One sentence with whichever token-level annotation layers its source
// provides; absent layers stay empty, present ones are length-aligned.
struct TokenizedSentence {
  std::vector<std::string> tokens;
  std::vector<std::string> upos;
  std::vector<std::string> feats;
  std::vector<std::string> lemmas;
  std::vector<int> heads;  // 0 = root, else 1-based token position
  std::vector<std::string> deprels;
  std::vector<std::string> ner_tags;

  void validate() const;
};

// CoNLL-U with multi-word ranges and empty nodes dropped; keeps FORM, LEMMA,
// UPOS, FEATS, HEAD, DEPREL. Errors carry 1-based line numbers.
std::vector<TokenizedSentence> load_conllu(const std::string& path);
void write_conllu(const std::string& path,
                  const std::vector<TokenizedSentence>& sentences);

// Two-column token/tag files with blank-line sentence breaks. I-X after
// neither B-X nor I-X is an error, or silently rewritten to B-X when
// repair_bio is set.
std::vector<TokenizedSentence> load_bio_ner(const std::string& path,
                                            bool repair_bio = false);

// Deterministic label describing how to turn `form` into `lemma`: a
// prefix/suffix cut-and-add script, or full replacement when the strings
// share no substring. apply_edit_script inverts it for the inducing pair.
std::string induce_edit_script(const std::string& form,
                               const std::string& lemma);
std::string apply_edit_script(const std::string& form,
                              const std::string& label);

struct TaskSplit {
  std::vector<corpus::LabeledExample> sequences;  // sequence classification
  std::vector<TokenizedSentence> sentences;       // token-level kinds, MLM
  size_t size() const;
};

// A task as the trainer sees it: one kind, one decoder, instances bucketed
// by language and split. `annotation` selects the token layer for tagging
// kinds ("upos", "feats" or "ner").
struct TaskDataset {
  std::string name;
  TaskKind kind = TaskKind::kSequenceClassification;
  std::string annotation;
  std::vector<std::string> label_space;
  std::map<std::string, std::array<TaskSplit, 3>> by_language;

  std::set<std::string> languages() const;
  const TaskSplit& split(const std::string& language, corpus::Split s) const;
  TaskSplit& split(const std::string& language, corpus::Split s);
  size_t total_size(corpus::Split s) const;

  // Label-space coverage, annotation alignment, head validity.
  void validate() const;

  // Adds another language's splits of the same task; label spaces merge
  // sorted. Throws on name/kind mismatch or language collision.
  void merge_language(const TaskDataset& other);
};

// Tag sequence of `sentence` for a tagging task's annotation field.
const std::vector<std::string>& annotation_tags(const TokenizedSentence& s,
                                                const std::string& annotation);

// Sorted unique labels; the deterministic induction order used everywhere.
std::vector<std::string> induce_label_space(
    const std::vector<std::string>& occurrences);

// Builders ------------------------------------------------------------------

// Hate detection task from per-language corpora; space {hateful, non-hateful}.
TaskDataset make_hate_task(const std::vector<corpus::Corpus>& corpora);

// 3-class sentiment from <dir>/{train,dev,test}.tsv; labels must be
// negative/neutral/positive. Declared sizes are enforced when present.
TaskDataset load_sentiment(const std::string& dir, const std::string& language,
                           const std::optional<corpus::SplitSizes>& expected =
                               std::nullopt);

// Token tagging over one annotation layer with an induced space.
TaskDataset make_tagging_task(
    const std::string& name, const std::string& annotation,
    const std::map<std::string, std::array<std::vector<TokenizedSentence>, 3>>&
        sentences);

// The four UD objectives over shared sentences: <prefix>-upos, -feats,
// -lemma (edit scripts), -deps. Lemma labels are induced from train+dev+test
// pairs so every gold script is reachable.
std::vector<TaskDataset> build_ud_bundle(
    const std::string& prefix,
    const std::map<std::string, std::array<std::vector<TokenizedSentence>, 3>>&
        sentences);

// Self-supervised MLM over raw sentences; empty label space (vocabulary is
// the model's own).
TaskDataset make_mlm_task(
    const std::string& name,
    const std::map<std::string, std::array<std::vector<TokenizedSentence>, 3>>&
        sentences);

}  // namespace xlt::tasks

#endif  // XLT_TASKS_HPP
