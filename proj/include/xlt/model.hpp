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
//
// Shared encoder + per-task decoder heads. The encoder is a small pre-LN
// transformer over an induced subword vocabulary; pretrained identifiers are
// accepted in the spec but error at first use since no external backend ships
// with this repo.

#ifndef XLT_MODEL_HPP
#define XLT_MODEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xlt/nn.hpp"
#include "xlt/tasks.hpp"

namespace xlt::model {

// Greedy longest-match segmentation over a vocabulary induced from training
// text: special markers, every byte seen, then whole words by frequency until
// the cap. Unseen bytes map to [UNK].
class SubwordTokenizer {
 public:
  static constexpr int kPadId = 0;
  static constexpr int kUnkId = 1;
  static constexpr int kClsId = 2;
  static constexpr int kMaskId = 3;
  static constexpr size_t kNumSpecials = 4;

  static SubwordTokenizer induce(const std::vector<std::string>& texts,
                                 size_t max_vocab);
  static SubwordTokenizer from_pieces(std::vector<std::string> pieces);

  std::vector<int> encode_word(const std::string& word) const;
  const std::string& piece(int id) const;
  const std::vector<std::string>& pieces() const { return pieces_; }
  size_t size() const { return pieces_.size(); }
  bool empty() const { return pieces_.empty(); }

 private:
  std::vector<std::string> pieces_;
  std::map<std::string, int> index_;
  size_t max_piece_len_ = 1;
};

enum class Pooling { kFirstToken, kMean };
const char* pooling_name(Pooling p);
Pooling pooling_from_name(const std::string& name);

struct EncoderSpec {
  std::string pretrained;  // non-empty selects an external encoder
  size_t layers = 2;
  size_t hidden = 32;
  size_t attention_heads = 4;
  size_t vocab_size = 512;
  size_t max_len = 48;
  Pooling pooling = Pooling::kFirstToken;

  bool is_toy() const { return pretrained.empty(); }
  void validate() const;
};

// One sequence after tokenization: ids include the leading [CLS]; words that
// did not fit under max_len were dropped (truncated flag set).
struct TokenizedInput {
  std::vector<int> ids;
  std::vector<int> word_to_subword;  // word position -> row in `ids`
  bool truncated = false;
};

struct EncodedSequence {
  nn::Node* subwords = nullptr;  // (subword count) x hidden, row 0 = [CLS]
  nn::Node* pooled = nullptr;    // 1 x hidden
  std::vector<int> word_to_subword;
  std::vector<int> ids;
  bool truncated = false;
};

struct DepPrediction {
  std::vector<int> heads;  // 0 = root, else 1-based token position
  std::vector<std::string> deprels;
};

// Output of one head over one encoded sequence. `loss` is set only when gold
// annotations were supplied.
struct HeadOutput {
  nn::Node* logits = nullptr;      // rows x label-space (or vocab for MLM)
  nn::Node* arc_scores = nullptr;  // dependency only: tokens x (tokens + 1)
  nn::Node* loss = nullptr;
};

// Either kind of training instance; exactly one pointer is set, matching the
// task kind.
struct InstanceRef {
  const corpus::LabeledExample* sequence = nullptr;
  const tasks::TokenizedSentence* sentence = nullptr;
};

class MultiTaskModel {
 public:
  MultiTaskModel(EncoderSpec spec, uint64_t seed);

  // Builds the subword vocabulary; must run before attaching tasks.
  void induce_vocabulary(const std::vector<std::string>& texts);
  void set_tokenizer(SubwordTokenizer tokenizer);

  // Creates the head for `task` (fresh deterministic init). The dataset is
  // only consulted for name, kind, annotation and label space.
  void attach_task(const tasks::TaskDataset& task);
  void attach_head(const std::string& name, tasks::TaskKind kind,
                   const std::string& annotation,
                   const std::vector<std::string>& label_space);
  bool has_task(const std::string& name) const;
  std::vector<std::string> task_names() const;
  const std::vector<std::string>& label_space(const std::string& task) const;

  TokenizedInput tokenize(const std::vector<std::string>& tokens) const;
  EncodedSequence encode(nn::Graph& g,
                         const std::vector<std::string>& tokens) const;
  std::vector<EncodedSequence> encode_batch(
      nn::Graph& g,
      const std::vector<std::vector<std::string>>& batch) const;

  // Single-sequence head pass; gold shapes are checked against the sequence.
  // MLM requires an rng for mask sampling and ignores `gold_*`.
  HeadOutput head_forward(nn::Graph& g, const std::string& task,
                          const EncodedSequence& enc,
                          const tasks::TokenizedSentence* gold_sentence,
                          const std::string* gold_label, Rng* mlm_rng) const;

  // Mean loss over a batch of instances of the task's kind (1x1 node).
  nn::Node* batch_loss(nn::Graph& g, const std::string& task,
                       const std::vector<InstanceRef>& batch,
                       Rng* mlm_rng = nullptr) const;

  // Inference wrappers (fresh graph per call, deterministic).
  std::string predict_sequence_label(const std::string& task,
                                     const std::string& raw_text) const;
  std::vector<std::string> predict_sequence_labels(
      const std::string& task, const std::vector<std::string>& raw_texts) const;
  std::vector<std::string> predict_token_labels(
      const std::string& task, const std::vector<std::string>& tokens) const;
  DepPrediction predict_dependencies(const std::string& task,
                                     const std::vector<std::string>& tokens)
      const;

  // Parameter access (name-sorted) for optimizers and tests.
  std::vector<nn::Parameter*> parameters();
  std::vector<nn::Parameter*> parameters_with_prefix(const std::string& prefix);
  nn::Parameter* find_parameter(const std::string& name);

  // Full value snapshot (used for best-epoch restore).
  std::map<std::string, nn::Matrix> state() const;
  void set_state(const std::map<std::string, nn::Matrix>& state);

  // Checkpoint directory: encoder weights, per-head weights, vocabulary and
  // a manifest naming tasks, label spaces and the encoder spec.
  void save(const std::string& dir) const;
  static MultiTaskModel load(const std::string& dir);

  const EncoderSpec& spec() const { return spec_; }
  const SubwordTokenizer& tokenizer() const { return tokenizer_; }

 private:
  struct AttachedTask {
    tasks::TaskKind kind;
    std::string annotation;
    std::vector<std::string> labels;
    std::map<std::string, int> label_index;
  };

  void require_toy() const;
  nn::Parameter& add_param(const std::string& name, nn::Matrix value);
  // Const because inference paths bind parameter leaves too (params_ is
  // mutable for exactly this reason).
  nn::Parameter& get_param(const std::string& name) const;
  nn::Node* run_encoder(nn::Graph& g, const std::vector<int>& ids) const;
  const AttachedTask& task_info(const std::string& task) const;
  int gold_index(const AttachedTask& info, const std::string& task,
                 const std::string& label) const;

  EncoderSpec spec_;
  SubwordTokenizer tokenizer_;
  std::map<std::string, AttachedTask> tasks_;
  // mutable: graphs bind parameter leaves through non-const references even
  // on inference-only paths.
  mutable std::map<std::string, nn::Parameter> params_;
  Rng init_rng_;
};

// Lowest-index argmax over one row.
int argmax_row(const nn::Matrix& row);

}  // namespace xlt::model

#endif  // XLT_MODEL_HPP
