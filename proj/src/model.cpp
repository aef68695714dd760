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

#include "xlt/model.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "xlt/text.hpp"

namespace xlt::model {

namespace fs = std::filesystem;
using nn::Matrix;
using nn::Node;
using tasks::TaskKind;

namespace {

constexpr double kMlmMaskFraction = 0.15;
constexpr const char* kManifestName = "manifest.txt";
constexpr const char* kVocabName = "vocab.txt";
constexpr const char* kEncoderWeights = "encoder.tsv";

const std::array<std::string, SubwordTokenizer::kNumSpecials> kSpecials = {
    "[PAD]", "[UNK]", "[CLS]", "[MASK]"};

std::string head_weight_file(const std::string& task) {
  std::string safe = task;
  for (char& c : safe) {
    if (c == '/' || c == '\\') {
      c = '_';
    }
  }
  return "head." + safe + ".tsv";
}

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

// SubwordTokenizer -----------------------------------------------------------

SubwordTokenizer SubwordTokenizer::induce(const std::vector<std::string>& texts,
                                          size_t max_vocab) {
  if (max_vocab < kNumSpecials + 1) {
    throw ValidationError("tokenizer: vocabulary cap " +
                          std::to_string(max_vocab) + " leaves no room below " +
                          std::to_string(kNumSpecials + 1));
  }
  std::map<std::string, size_t> word_freq;
  std::set<std::string> bytes_seen;
  for (const std::string& t : texts) {
    for (const std::string& w : strings::split_ws(t)) {
      ++word_freq[w];
      for (char c : w) {
        bytes_seen.insert(std::string(1, c));
      }
    }
  }
  if (word_freq.empty()) {
    throw ValidationError(
        "tokenizer: no training text to induce a vocabulary from");
  }
  std::vector<std::string> pieces(kSpecials.begin(), kSpecials.end());
  for (const std::string& b : bytes_seen) {
    if (pieces.size() >= max_vocab) {
      break;
    }
    pieces.push_back(b);
  }
  // Whole words by descending frequency, ties lexicographic, until the cap.
  std::vector<std::pair<std::string, size_t>> words(word_freq.begin(),
                                                    word_freq.end());
  std::sort(words.begin(), words.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) {
      return a.second > b.second;
    }
    return a.first < b.first;
  });
  std::set<std::string> have(pieces.begin(), pieces.end());
  for (const auto& [word, freq] : words) {
    if (pieces.size() >= max_vocab) {
      break;
    }
    if (have.insert(word).second) {
      pieces.push_back(word);
    }
  }
  return from_pieces(std::move(pieces));
}

SubwordTokenizer SubwordTokenizer::from_pieces(
    std::vector<std::string> pieces) {
  if (pieces.size() < kNumSpecials) {
    throw ValidationError("tokenizer: fewer pieces than special markers");
  }
  for (size_t i = 0; i < kNumSpecials; ++i) {
    if (pieces[i] != kSpecials[i]) {
      throw ValidationError("tokenizer: piece " + std::to_string(i) +
                            " must be " + kSpecials[i] + ", got '" + pieces[i] +
                            "'");
    }
  }
  SubwordTokenizer t;
  t.pieces_ = std::move(pieces);
  for (size_t i = 0; i < t.pieces_.size(); ++i) {
    if (!t.index_.emplace(t.pieces_[i], static_cast<int>(i)).second) {
      throw ValidationError("tokenizer: duplicate piece '" + t.pieces_[i] +
                            "'");
    }
    if (i >= kNumSpecials) {
      t.max_piece_len_ = std::max(t.max_piece_len_, t.pieces_[i].size());
    }
  }
  return t;
}

std::vector<int> SubwordTokenizer::encode_word(const std::string& word) const {
  std::vector<int> out;
  size_t at = 0;
  while (at < word.size()) {
    size_t len = std::min(max_piece_len_, word.size() - at);
    int id = kUnkId;
    for (; len >= 1; --len) {
      auto it = index_.find(word.substr(at, len));
      // Specials never match raw text.
      if (it != index_.end() && it->second >= static_cast<int>(kNumSpecials)) {
        id = it->second;
        break;
      }
    }
    out.push_back(id);
    at += (id == kUnkId) ? 1 : len;
  }
  if (out.empty()) {
    out.push_back(kUnkId);
  }
  return out;
}

const std::string& SubwordTokenizer::piece(int id) const {
  if (id < 0 || id >= static_cast<int>(pieces_.size())) {
    throw RuntimeFailure("tokenizer: piece id " + std::to_string(id) +
                         " out of range");
  }
  return pieces_[static_cast<size_t>(id)];
}

// EncoderSpec ----------------------------------------------------------------

const char* pooling_name(Pooling p) {
  return p == Pooling::kFirstToken ? "first-token" : "mean";
}

Pooling pooling_from_name(const std::string& name) {
  if (name == "first-token") {
    return Pooling::kFirstToken;
  }
  if (name == "mean") {
    return Pooling::kMean;
  }
  throw ValidationError("unknown pooling '" + name + "'");
}

void EncoderSpec::validate() const {
  if (!is_toy()) {
    return;  // deferred to first use of the backend
  }
  if (layers == 0 || hidden == 0 || attention_heads == 0 || max_len < 2) {
    throw ValidationError("toy encoder: layers/hidden/heads must be positive "
                          "and max length at least 2");
  }
  if (hidden % attention_heads != 0) {
    throw ValidationError("toy encoder: hidden size " +
                          std::to_string(hidden) + " not divisible by " +
                          std::to_string(attention_heads) +
                          " attention heads");
  }
  if (vocab_size < SubwordTokenizer::kNumSpecials + 1) {
    throw ValidationError("toy encoder: subword vocab size too small");
  }
}

// MultiTaskModel -------------------------------------------------------------

MultiTaskModel::MultiTaskModel(EncoderSpec spec, uint64_t seed)
    : spec_(std::move(spec)), init_rng_(seed) {
  spec_.validate();
}

void MultiTaskModel::require_toy() const {
  if (!spec_.is_toy()) {
    throw RuntimeFailure(
        "pretrained encoder '" + spec_.pretrained +
        "' requires an external model backend that is not part of this "
        "build; use the toy encoder");
  }
}

nn::Parameter& MultiTaskModel::add_param(const std::string& name,
                                         Matrix value) {
  auto [it, inserted] = params_.emplace(
      std::piecewise_construct, std::forward_as_tuple(name),
      std::forward_as_tuple(name, std::move(value)));
  if (!inserted) {
    throw RuntimeFailure("parameter '" + name + "' already exists");
  }
  return it->second;
}

nn::Parameter& MultiTaskModel::get_param(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) {
    throw RuntimeFailure("parameter '" + name + "' not found");
  }
  return it->second;
}

void MultiTaskModel::induce_vocabulary(const std::vector<std::string>& texts) {
  require_toy();
  set_tokenizer(SubwordTokenizer::induce(texts, spec_.vocab_size));
}

void MultiTaskModel::set_tokenizer(SubwordTokenizer tokenizer) {
  require_toy();
  if (!tokenizer_.empty()) {
    throw RuntimeFailure("model already holds a vocabulary");
  }
  tokenizer_ = std::move(tokenizer);
  const auto h = spec_.hidden;
  add_param("encoder/embed",
            nn::glorot_init(tokenizer_.size(), h, init_rng_));
  add_param("encoder/pos", nn::glorot_init(spec_.max_len, h, init_rng_));
  const size_t dk = h / spec_.attention_heads;
  for (size_t l = 0; l < spec_.layers; ++l) {
    const std::string base = "encoder/l" + std::to_string(l) + "/";
    add_param(base + "ln1/gain", Matrix::Ones(1, h));
    add_param(base + "ln1/bias", Matrix::Zero(1, h));
    for (size_t j = 0; j < spec_.attention_heads; ++j) {
      const std::string hb = base + "attn/h" + std::to_string(j) + "/";
      add_param(hb + "wq", nn::glorot_init(h, dk, init_rng_));
      add_param(hb + "wk", nn::glorot_init(h, dk, init_rng_));
      add_param(hb + "wv", nn::glorot_init(h, dk, init_rng_));
    }
    add_param(base + "attn/wo", nn::glorot_init(h, h, init_rng_));
    add_param(base + "attn/bo", Matrix::Zero(1, h));
    add_param(base + "ln2/gain", Matrix::Ones(1, h));
    add_param(base + "ln2/bias", Matrix::Zero(1, h));
    add_param(base + "ffn/w1", nn::glorot_init(h, 4 * h, init_rng_));
    add_param(base + "ffn/b1", Matrix::Zero(1, 4 * h));
    add_param(base + "ffn/w2", nn::glorot_init(4 * h, h, init_rng_));
    add_param(base + "ffn/b2", Matrix::Zero(1, h));
  }
  add_param("encoder/ln_f/gain", Matrix::Ones(1, h));
  add_param("encoder/ln_f/bias", Matrix::Zero(1, h));
}

void MultiTaskModel::attach_task(const tasks::TaskDataset& task) {
  attach_head(task.name, task.kind, task.annotation, task.label_space);
}

void MultiTaskModel::attach_head(const std::string& name, TaskKind kind,
                                 const std::string& annotation,
                                 const std::vector<std::string>& label_space) {
  require_toy();
  if (tokenizer_.empty()) {
    throw RuntimeFailure(
        "attach_head: induce or load a vocabulary before attaching tasks");
  }
  if (tasks_.count(name)) {
    throw ValidationError("task '" + name + "' already attached");
  }
  size_t out_dim = label_space.size();
  if (kind == TaskKind::kMaskedLm) {
    out_dim = tokenizer_.size();
  } else if (out_dim == 0) {
    throw ValidationError("task '" + name + "' has an empty label space");
  }
  AttachedTask info;
  info.kind = kind;
  info.annotation = annotation;
  info.labels = label_space;
  for (size_t i = 0; i < label_space.size(); ++i) {
    info.label_index[label_space[i]] = static_cast<int>(i);
  }
  const auto h = spec_.hidden;
  const std::string base = "head/" + name + "/";
  switch (kind) {
    case TaskKind::kSequenceClassification:
    case TaskKind::kTokenTagging:
    case TaskKind::kLemmatization:
    case TaskKind::kMaskedLm:
      add_param(base + "w", nn::glorot_init(h, out_dim, init_rng_));
      add_param(base + "b", Matrix::Zero(1, out_dim));
      break;
    case TaskKind::kDependencyParsing:
      add_param(base + "root", nn::glorot_init(1, h, init_rng_));
      add_param(base + "dep_w", nn::glorot_init(h, h, init_rng_));
      add_param(base + "dep_b", Matrix::Zero(1, h));
      add_param(base + "head_w", nn::glorot_init(h, h, init_rng_));
      add_param(base + "head_b", Matrix::Zero(1, h));
      add_param(base + "arc_u", nn::glorot_init(1, h, init_rng_));
      add_param(base + "rel_w", nn::glorot_init(h, out_dim, init_rng_));
      add_param(base + "rel_b", Matrix::Zero(1, out_dim));
      break;
  }
  tasks_.emplace(name, std::move(info));
}

bool MultiTaskModel::has_task(const std::string& name) const {
  return tasks_.count(name) > 0;
}

std::vector<std::string> MultiTaskModel::task_names() const {
  std::vector<std::string> out;
  for (const auto& [name, info] : tasks_) {
    out.push_back(name);
  }
  return out;
}

const std::vector<std::string>& MultiTaskModel::label_space(
    const std::string& task) const {
  return task_info(task).labels;
}

const MultiTaskModel::AttachedTask& MultiTaskModel::task_info(
    const std::string& task) const {
  auto it = tasks_.find(task);
  if (it == tasks_.end()) {
    throw RuntimeFailure("task '" + task + "' is not attached to this model");
  }
  return it->second;
}

int MultiTaskModel::gold_index(const AttachedTask& info,
                               const std::string& task,
                               const std::string& label) const {
  auto it = info.label_index.find(label);
  if (it == info.label_index.end()) {
    throw RuntimeFailure("gold label '" + label + "' is outside task '" +
                         task + "' label space");
  }
  return it->second;
}

TokenizedInput MultiTaskModel::tokenize(
    const std::vector<std::string>& tokens) const {
  require_toy();
  if (tokenizer_.empty()) {
    throw RuntimeFailure("tokenize: model has no vocabulary yet");
  }
  TokenizedInput out;
  out.ids.push_back(SubwordTokenizer::kClsId);
  for (const std::string& word : tokens) {
    std::vector<int> pieces = tokenizer_.encode_word(word);
    if (out.ids.size() + pieces.size() > spec_.max_len) {
      out.truncated = true;
      std::cerr << "warning: sequence truncated to " << out.word_to_subword.size()
                << " of " << tokens.size() << " words (max length "
                << spec_.max_len << ")\n";
      break;
    }
    out.word_to_subword.push_back(static_cast<int>(out.ids.size()));
    out.ids.insert(out.ids.end(), pieces.begin(), pieces.end());
  }
  return out;
}

Node* MultiTaskModel::run_encoder(nn::Graph& g,
                                  const std::vector<int>& ids) const {
  std::vector<int> positions(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) {
    positions[i] = static_cast<int>(i);
  }
  Node* x = g.rows(g.param(get_param("encoder/embed")), ids);
  x = g.add(x, g.rows(g.param(get_param("encoder/pos")), positions));
  const double inv_sqrt_dk =
      1.0 / std::sqrt(static_cast<double>(spec_.hidden / spec_.attention_heads));
  for (size_t l = 0; l < spec_.layers; ++l) {
    const std::string base = "encoder/l" + std::to_string(l) + "/";
    Node* ln1 = g.layer_norm_rows(x, g.param(get_param(base + "ln1/gain")),
                                  g.param(get_param(base + "ln1/bias")));
    std::vector<Node*> contexts;
    for (size_t j = 0; j < spec_.attention_heads; ++j) {
      const std::string hb = base + "attn/h" + std::to_string(j) + "/";
      Node* q = g.matmul(ln1, g.param(get_param(hb + "wq")));
      Node* k = g.matmul(ln1, g.param(get_param(hb + "wk")));
      Node* v = g.matmul(ln1, g.param(get_param(hb + "wv")));
      Node* attn = g.softmax_rows(g.scale(g.matmul_nt(q, k), inv_sqrt_dk));
      contexts.push_back(g.matmul(attn, v));
    }
    Node* merged = g.add_row_broadcast(
        g.matmul(g.concat_cols(contexts), g.param(get_param(base + "attn/wo"))),
        g.param(get_param(base + "attn/bo")));
    x = g.add(x, merged);
    Node* ln2 = g.layer_norm_rows(x, g.param(get_param(base + "ln2/gain")),
                                  g.param(get_param(base + "ln2/bias")));
    Node* inner = g.gelu(
        g.add_row_broadcast(g.matmul(ln2, g.param(get_param(base + "ffn/w1"))),
                            g.param(get_param(base + "ffn/b1"))));
    Node* ffn = g.add_row_broadcast(
        g.matmul(inner, g.param(get_param(base + "ffn/w2"))),
        g.param(get_param(base + "ffn/b2")));
    x = g.add(x, ffn);
  }
  return g.layer_norm_rows(x, g.param(get_param("encoder/ln_f/gain")),
                           g.param(get_param("encoder/ln_f/bias")));
}

EncodedSequence MultiTaskModel::encode(
    nn::Graph& g, const std::vector<std::string>& tokens) const {
  TokenizedInput in = tokenize(tokens);
  EncodedSequence out;
  out.subwords = run_encoder(g, in.ids);
  out.pooled = spec_.pooling == Pooling::kFirstToken
                   ? g.rows(out.subwords, {0})
                   : g.mean_rows(out.subwords);
  out.word_to_subword = std::move(in.word_to_subword);
  out.ids = std::move(in.ids);
  out.truncated = in.truncated;
  return out;
}

std::vector<EncodedSequence> MultiTaskModel::encode_batch(
    nn::Graph& g, const std::vector<std::vector<std::string>>& batch) const {
  if (batch.empty()) {
    throw ValidationError("encode_batch: empty batch");
  }
  std::vector<EncodedSequence> out;
  out.reserve(batch.size());
  for (const auto& tokens : batch) {
    out.push_back(encode(g, tokens));
  }
  return out;
}

HeadOutput MultiTaskModel::head_forward(nn::Graph& g, const std::string& task,
                                        const EncodedSequence& enc,
                                        const tasks::TokenizedSentence* gold,
                                        const std::string* gold_label,
                                        Rng* mlm_rng) const {
  const AttachedTask& info = task_info(task);
  const std::string base = "head/" + task + "/";
  HeadOutput out;
  const size_t n_words = enc.word_to_subword.size();
  switch (info.kind) {
    case TaskKind::kSequenceClassification: {
      out.logits = g.add_row_broadcast(
          g.matmul(enc.pooled, g.param(get_param(base + "w"))),
          g.param(get_param(base + "b")));
      if (gold_label != nullptr) {
        out.loss =
            g.cross_entropy(out.logits, {gold_index(info, task, *gold_label)});
      }
      break;
    }
    case TaskKind::kTokenTagging:
    case TaskKind::kLemmatization: {
      if (n_words == 0) {
        throw RuntimeFailure("head_forward: no words survive tokenization");
      }
      Node* words = g.rows(enc.subwords, enc.word_to_subword);
      out.logits =
          g.add_row_broadcast(g.matmul(words, g.param(get_param(base + "w"))),
                              g.param(get_param(base + "b")));
      if (gold != nullptr) {
        std::vector<int> idx;
        for (size_t i = 0; i < n_words; ++i) {
          const std::string label =
              info.kind == TaskKind::kTokenTagging
                  ? tasks::annotation_tags(*gold, info.annotation)[i]
                  : tasks::induce_edit_script(gold->tokens[i],
                                              gold->lemmas[i]);
          idx.push_back(gold_index(info, task, label));
        }
        out.loss = g.cross_entropy(out.logits, idx);
      }
      break;
    }
    case TaskKind::kDependencyParsing: {
      if (n_words == 0) {
        throw RuntimeFailure("head_forward: no words survive tokenization");
      }
      Node* words = g.rows(enc.subwords, enc.word_to_subword);
      Node* candidates =
          g.concat_rows({g.param(get_param(base + "root")), words});
      Node* dep = g.gelu(g.add_row_broadcast(
          g.matmul(words, g.param(get_param(base + "dep_w"))),
          g.param(get_param(base + "dep_b"))));
      Node* head_rep = g.gelu(g.add_row_broadcast(
          g.matmul(candidates, g.param(get_param(base + "head_w"))),
          g.param(get_param(base + "head_b"))));
      Node* arc = g.add_row_broadcast(
          g.matmul_nt(dep, head_rep),
          g.matmul_nt(g.param(get_param(base + "arc_u")), head_rep));
      out.arc_scores = arc;
      // Relation logits use the gold head when supervised, else the greedy
      // argmax head.
      std::vector<int> head_cols;
      if (gold != nullptr) {
        if (gold->heads.size() < n_words) {
          throw RuntimeFailure("head_forward: sentence lacks head annotation");
        }
        for (size_t i = 0; i < n_words; ++i) {
          head_cols.push_back(gold->heads[i]);
        }
      } else {
        for (size_t i = 0; i < n_words; ++i) {
          head_cols.push_back(
              argmax_row(arc->value.row(static_cast<Eigen::Index>(i))));
        }
      }
      Node* rel_in = g.add(dep, g.rows(head_rep, head_cols));
      out.logits = g.add_row_broadcast(
          g.matmul(rel_in, g.param(get_param(base + "rel_w"))),
          g.param(get_param(base + "rel_b")));
      if (gold != nullptr) {
        std::vector<int> rel_idx;
        for (size_t i = 0; i < n_words; ++i) {
          rel_idx.push_back(gold_index(info, task, gold->deprels[i]));
        }
        out.loss = g.add(g.cross_entropy(arc, head_cols),
                         g.cross_entropy(out.logits, rel_idx));
      }
      break;
    }
    case TaskKind::kMaskedLm: {
      if (mlm_rng == nullptr) {
        throw RuntimeFailure("head_forward: masked LM requires an rng");
      }
      if (enc.ids.size() < 2) {
        throw RuntimeFailure("head_forward: nothing to mask");
      }
      // Re-encode with corrupted ids; the gold is the original id at each
      // masked position.
      std::vector<int> corrupted = enc.ids;
      const size_t real = enc.ids.size() - 1;  // excluding [CLS]
      size_t n_mask = std::max<size_t>(
          1, static_cast<size_t>(std::floor(kMlmMaskFraction *
                                            static_cast<double>(real) + 0.5)));
      std::vector<size_t> order(real);
      for (size_t i = 0; i < real; ++i) {
        order[i] = i + 1;
      }
      mlm_rng->shuffle(order);
      std::vector<int> masked_rows;
      for (size_t i = 0; i < n_mask; ++i) {
        const size_t pos = order[i];
        masked_rows.push_back(static_cast<int>(pos));
        const double u = mlm_rng->uniform();
        if (u < 0.8) {
          corrupted[pos] = SubwordTokenizer::kMaskId;
        } else if (u < 0.9) {
          corrupted[pos] = static_cast<int>(
              SubwordTokenizer::kNumSpecials +
              mlm_rng->below(tokenizer_.size() -
                             SubwordTokenizer::kNumSpecials));
        }  // else keep the original id
      }
      std::sort(masked_rows.begin(), masked_rows.end());
      std::vector<int> gold_ids;
      for (int row : masked_rows) {
        gold_ids.push_back(enc.ids[static_cast<size_t>(row)]);
      }
      Node* x = run_encoder(g, corrupted);
      Node* at_masked = g.rows(x, masked_rows);
      out.logits = g.add_row_broadcast(
          g.matmul(at_masked, g.param(get_param(base + "w"))),
          g.param(get_param(base + "b")));
      out.loss = g.cross_entropy(out.logits, gold_ids);
      break;
    }
  }
  return out;
}

nn::Node* MultiTaskModel::batch_loss(nn::Graph& g, const std::string& task,
                                     const std::vector<InstanceRef>& batch,
                                     Rng* mlm_rng) const {
  const AttachedTask& info = task_info(task);
  if (batch.empty()) {
    throw RuntimeFailure("batch_loss: empty batch for task '" + task + "'");
  }
  std::vector<Node*> losses;
  std::vector<double> weights;
  double denom = 0.0;
  for (const InstanceRef& inst : batch) {
    if (info.kind == TaskKind::kSequenceClassification) {
      if (inst.sequence == nullptr) {
        throw RuntimeFailure("batch_loss: sequence task got a sentence");
      }
      const std::vector<std::string> tokens =
          strings::split_ws(text::normalize_tweet(inst.sequence->text));
      EncodedSequence enc = encode(g, tokens);
      HeadOutput h =
          head_forward(g, task, enc, nullptr, &inst.sequence->label, nullptr);
      losses.push_back(h.loss);
      weights.push_back(1.0);
      denom += 1.0;
      continue;
    }
    if (inst.sentence == nullptr) {
      throw RuntimeFailure("batch_loss: token task got a raw sequence");
    }
    EncodedSequence enc = encode(g, inst.sentence->tokens);
    if (info.kind != TaskKind::kMaskedLm && enc.word_to_subword.empty()) {
      continue;  // nothing supervisable survived truncation
    }
    if (info.kind == TaskKind::kDependencyParsing && enc.truncated) {
      continue;  // gold heads may point at dropped words
    }
    HeadOutput h = head_forward(g, task, enc, inst.sentence, nullptr, mlm_rng);
    // Token-level losses are means over that sentence's rows; weight by row
    // count so the batch loss is the mean over all rows.
    const double rows =
        info.kind == TaskKind::kMaskedLm
            ? static_cast<double>(h.logits->value.rows())
            : static_cast<double>(enc.word_to_subword.size());
    losses.push_back(h.loss);
    weights.push_back(rows);
    denom += rows;
  }
  if (losses.empty() || denom <= 0.0) {
    throw RuntimeFailure("batch_loss: no supervisable instances for task '" +
                         task + "'");
  }
  for (double& w : weights) {
    w /= denom;
  }
  return g.weighted_sum_scalars(losses, weights);
}

int argmax_row(const Matrix& row) {
  int best = 0;
  for (Eigen::Index c = 1; c < row.cols(); ++c) {
    if (row(0, c) > row(0, best)) {
      best = static_cast<int>(c);
    }
  }
  return best;
}

std::string MultiTaskModel::predict_sequence_label(
    const std::string& task, const std::string& raw_text) const {
  const AttachedTask& info = task_info(task);
  if (info.kind != TaskKind::kSequenceClassification) {
    throw RuntimeFailure("predict_sequence_label: task '" + task +
                         "' is not sequence classification");
  }
  nn::Graph g;
  EncodedSequence enc =
      encode(g, strings::split_ws(text::normalize_tweet(raw_text)));
  HeadOutput h = head_forward(g, task, enc, nullptr, nullptr, nullptr);
  return info.labels[static_cast<size_t>(argmax_row(h.logits->value.row(0)))];
}

std::vector<std::string> MultiTaskModel::predict_sequence_labels(
    const std::string& task, const std::vector<std::string>& raw_texts) const {
  std::vector<std::string> out;
  out.reserve(raw_texts.size());
  for (const std::string& t : raw_texts) {
    out.push_back(predict_sequence_label(task, t));
  }
  return out;
}

std::vector<std::string> MultiTaskModel::predict_token_labels(
    const std::string& task, const std::vector<std::string>& tokens) const {
  const AttachedTask& info = task_info(task);
  if (info.kind != TaskKind::kTokenTagging &&
      info.kind != TaskKind::kLemmatization) {
    throw RuntimeFailure("predict_token_labels: task '" + task +
                         "' is not token-level classification");
  }
  nn::Graph g;
  EncodedSequence enc = encode(g, tokens);
  if (enc.word_to_subword.empty()) {
    return {};
  }
  HeadOutput h = head_forward(g, task, enc, nullptr, nullptr, nullptr);
  std::vector<std::string> out;
  for (Eigen::Index r = 0; r < h.logits->value.rows(); ++r) {
    out.push_back(
        info.labels[static_cast<size_t>(argmax_row(h.logits->value.row(r)))]);
  }
  return out;
}

DepPrediction MultiTaskModel::predict_dependencies(
    const std::string& task, const std::vector<std::string>& tokens) const {
  const AttachedTask& info = task_info(task);
  if (info.kind != TaskKind::kDependencyParsing) {
    throw RuntimeFailure("predict_dependencies: task '" + task +
                         "' is not dependency parsing");
  }
  nn::Graph g;
  EncodedSequence enc = encode(g, tokens);
  DepPrediction out;
  if (enc.word_to_subword.empty()) {
    return out;
  }
  HeadOutput h = head_forward(g, task, enc, nullptr, nullptr, nullptr);
  for (Eigen::Index r = 0; r < h.arc_scores->value.rows(); ++r) {
    out.heads.push_back(argmax_row(h.arc_scores->value.row(r)));
    out.deprels.push_back(
        info.labels[static_cast<size_t>(argmax_row(h.logits->value.row(r)))]);
  }
  return out;
}

std::vector<nn::Parameter*> MultiTaskModel::parameters() {
  std::vector<nn::Parameter*> out;
  for (auto& [name, p] : params_) {
    out.push_back(&p);
  }
  return out;
}

std::vector<nn::Parameter*> MultiTaskModel::parameters_with_prefix(
    const std::string& prefix) {
  std::vector<nn::Parameter*> out;
  for (auto& [name, p] : params_) {
    if (strings::starts_with(name, prefix)) {
      out.push_back(&p);
    }
  }
  return out;
}

nn::Parameter* MultiTaskModel::find_parameter(const std::string& name) {
  auto it = params_.find(name);
  return it == params_.end() ? nullptr : &it->second;
}

std::map<std::string, Matrix> MultiTaskModel::state() const {
  std::map<std::string, Matrix> out;
  for (const auto& [name, p] : params_) {
    out.emplace(name, p.value);
  }
  return out;
}

void MultiTaskModel::set_state(const std::map<std::string, Matrix>& state) {
  if (state.size() != params_.size()) {
    throw RuntimeFailure("set_state: parameter set mismatch");
  }
  for (auto& [name, p] : params_) {
    auto it = state.find(name);
    if (it == state.end()) {
      throw RuntimeFailure("set_state: missing parameter '" + name + "'");
    }
    if (it->second.rows() != p.value.rows() ||
        it->second.cols() != p.value.cols()) {
      throw RuntimeFailure("set_state: shape mismatch for '" + name + "'");
    }
    p.value = it->second;
  }
}

// Checkpointing --------------------------------------------------------------

namespace {

void write_params_file(const std::string& path,
                       const std::vector<const nn::Parameter*>& params) {
  std::ostringstream out;
  for (const nn::Parameter* p : params) {
    out << p->name << '\t' << p->value.rows() << '\t' << p->value.cols();
    for (Eigen::Index r = 0; r < p->value.rows(); ++r) {
      for (Eigen::Index c = 0; c < p->value.cols(); ++c) {
        out << (r == 0 && c == 0 ? '\t' : ' ') << full_precision(p->value(r, c));
      }
    }
    out << '\n';
  }
  write_file(path, out.str());
}

void read_params_file(const std::string& path,
                      std::map<std::string, nn::Parameter>& params,
                      const std::string& expected_prefix) {
  std::istringstream in(read_file(path));
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields = strings::split(line, '\t');
    if (fields.size() != 4) {
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": expected name, rows, cols, values");
    }
    const std::string& name = fields[0];
    if (!strings::starts_with(name, expected_prefix)) {
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": unexpected parameter '" + name + "'");
    }
    auto it = params.find(name);
    if (it == params.end()) {
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": parameter '" + name +
                            "' not declared by the manifest");
    }
    const long rows = std::stol(fields[1]);
    const long cols = std::stol(fields[2]);
    if (rows != it->second.value.rows() || cols != it->second.value.cols()) {
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": shape mismatch for '" + name + "'");
    }
    std::vector<std::string> values = strings::split_ws(fields[3]);
    if (static_cast<long>(values.size()) != rows * cols) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": " +
                            std::to_string(values.size()) + " values for a " +
                            std::to_string(rows) + "x" + std::to_string(cols) +
                            " parameter");
    }
    size_t at = 0;
    for (long r = 0; r < rows; ++r) {
      for (long c = 0; c < cols; ++c) {
        it->second.value(r, c) = std::stod(values[at++]);
      }
    }
  }
}

}  // namespace

void MultiTaskModel::save(const std::string& dir) const {
  require_toy();
  fs::create_directories(dir);
  std::ostringstream manifest;
  manifest << "format = xlt-checkpoint-v1\n";
  manifest << "encoder.variant = toy\n";
  manifest << "encoder.layers = " << spec_.layers << "\n";
  manifest << "encoder.hidden = " << spec_.hidden << "\n";
  manifest << "encoder.attention_heads = " << spec_.attention_heads << "\n";
  manifest << "encoder.vocab_size = " << spec_.vocab_size << "\n";
  manifest << "encoder.max_len = " << spec_.max_len << "\n";
  manifest << "encoder.pooling = " << pooling_name(spec_.pooling) << "\n";
  for (const auto& [name, info] : tasks_) {
    manifest << "task." << name << ".kind = " << tasks::task_kind_name(info.kind)
             << "\n";
    manifest << "task." << name << ".annotation = " << info.annotation << "\n";
    manifest << "task." << name
             << ".labels = " << strings::join(info.labels, "\t") << "\n";
  }
  write_file((fs::path(dir) / kManifestName).string(), manifest.str());

  std::ostringstream vocab;
  for (const std::string& p : tokenizer_.pieces()) {
    vocab << p << "\n";
  }
  write_file((fs::path(dir) / kVocabName).string(), vocab.str());

  std::vector<const nn::Parameter*> encoder_params;
  std::map<std::string, std::vector<const nn::Parameter*>> head_params;
  for (const auto& [name, p] : params_) {
    if (strings::starts_with(name, "encoder/")) {
      encoder_params.push_back(&p);
    } else {
      // head/<task>/<leaf>
      const std::string rest = name.substr(5);
      head_params[rest.substr(0, rest.rfind('/'))].push_back(&p);
    }
  }
  write_params_file((fs::path(dir) / kEncoderWeights).string(), encoder_params);
  for (const auto& [task, list] : head_params) {
    write_params_file((fs::path(dir) / head_weight_file(task)).string(), list);
  }
}

MultiTaskModel MultiTaskModel::load(const std::string& dir) {
  const std::string manifest_path = (fs::path(dir) / kManifestName).string();
  if (!fs::exists(manifest_path)) {
    throw ValidationError("checkpoint manifest not found: " + manifest_path);
  }
  std::map<std::string, std::string> kv;
  std::vector<std::string> task_order;
  {
    std::istringstream in(read_file(manifest_path));
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (strings::trim(line).empty()) {
        continue;
      }
      const size_t eq = line.find(" = ");
      if (eq == std::string::npos) {
        throw ValidationError(manifest_path + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
      }
      const std::string key = line.substr(0, eq);
      kv[key] = line.substr(eq + 3);
      if (strings::starts_with(key, "task.") &&
          key.size() > 10 && key.substr(key.size() - 5) == ".kind") {
        task_order.push_back(key.substr(5, key.size() - 10));
      }
    }
  }
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) {
      throw ValidationError(manifest_path + ": missing key '" + key + "'");
    }
    return it->second;
  };
  if (need("format") != "xlt-checkpoint-v1") {
    throw ValidationError("unsupported checkpoint format '" + kv["format"] +
                          "'");
  }
  if (need("encoder.variant") != "toy") {
    throw RuntimeFailure(
        "checkpoint uses encoder variant '" + kv["encoder.variant"] +
        "', which requires an external backend not part of this build");
  }
  EncoderSpec spec;
  spec.layers = std::stoul(need("encoder.layers"));
  spec.hidden = std::stoul(need("encoder.hidden"));
  spec.attention_heads = std::stoul(need("encoder.attention_heads"));
  spec.vocab_size = std::stoul(need("encoder.vocab_size"));
  spec.max_len = std::stoul(need("encoder.max_len"));
  spec.pooling = pooling_from_name(need("encoder.pooling"));

  MultiTaskModel model(spec, /*seed=*/0);
  std::vector<std::string> pieces;
  {
    std::istringstream in(read_file((fs::path(dir) / kVocabName).string()));
    std::string line;
    while (std::getline(in, line)) {
      pieces.push_back(line);
    }
  }
  model.set_tokenizer(SubwordTokenizer::from_pieces(std::move(pieces)));
  for (const std::string& task : task_order) {
    const std::string labels_joined = need("task." + task + ".labels");
    std::vector<std::string> labels;
    if (!labels_joined.empty()) {
      labels = strings::split(labels_joined, '\t');
    }
    model.attach_head(task,
                      tasks::task_kind_from_name(need("task." + task + ".kind")),
                      need("task." + task + ".annotation"), labels);
  }
  read_params_file((fs::path(dir) / kEncoderWeights).string(), model.params_,
                   "encoder/");
  for (const std::string& task : task_order) {
    read_params_file((fs::path(dir) / head_weight_file(task)).string(),
                     model.params_, "head/" + task + "/");
  }
  return model;
}

}  // namespace xlt::model
