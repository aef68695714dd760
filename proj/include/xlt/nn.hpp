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
// Minimal reverse-mode autodiff over Eigen matrices. A Graph is built per
// forward pass and backward()-ed once; trainable state lives in Parameter
// objects that outlive graphs.

#ifndef XLT_NN_HPP
#define XLT_NN_HPP

#include <Eigen/Dense>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "xlt/common.hpp"

namespace xlt::nn {

using Matrix = Eigen::MatrixXd;

struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
  Matrix adam_m;
  Matrix adam_v;
  bool touched = false;  // saw a gradient since the last optimizer step

  Parameter(std::string param_name, Matrix v);
  void reset_grad();
};

struct Node {
  Matrix value;
  Matrix grad;  // empty until the node appears on a backward path
  std::vector<Node*> parents;
  std::function<void(Node&)> back;

  void add_grad(const Matrix& g);
  bool has_grad() const { return grad.size() > 0; }
};

// Records nodes in creation order; backward() walks them in reverse.
class Graph {
 public:
  Node* constant(Matrix v);
  Node* param(Parameter& p);

  Node* add(Node* a, Node* b);
  Node* sub(Node* a, Node* b);
  Node* mul(Node* a, Node* b);  // elementwise
  Node* scale(Node* a, double c);
  Node* matmul(Node* a, Node* b);
  Node* matmul_nt(Node* a, Node* b);  // a * b^T
  Node* add_row_broadcast(Node* a, Node* row);
  Node* gelu(Node* a);
  Node* layer_norm_rows(Node* a, Node* gain, Node* bias);
  Node* softmax_rows(Node* a);
  Node* rows(Node* a, const std::vector<int>& indices);
  Node* mean_rows(Node* a);
  Node* concat_rows(const std::vector<Node*>& parts);
  Node* concat_cols(const std::vector<Node*>& parts);

  // Mean negative log-likelihood over rows of `logits` at the gold column
  // indices; 1x1 output.
  Node* cross_entropy(Node* logits, const std::vector<int>& gold);

  // 1x1 combination sum_i w_i * x_i of 1x1 nodes.
  Node* weighted_sum_scalars(const std::vector<Node*>& xs,
                             const std::vector<double>& weights);

  // Seeds d(root)/d(root) = 1 and accumulates into every touched Parameter.
  // One shot per graph.
  void backward(Node* root);

  size_t size() const { return nodes_.size(); }

 private:
  Node* make(Matrix value, std::vector<Node*> parents,
             std::function<void(Node&)> back);
  std::deque<Node> nodes_;
  bool backward_done_ = false;
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adaptive-moment optimizer over an external parameter set. Only parameters
// touched since the last step are updated, so heads of untrained tasks stay
// bit-identical.
class Adam {
 public:
  explicit Adam(AdamConfig config) : config_(config) {}

  // lr_scale multiplies the base rate (warmup/decay schedules).
  void step(const std::vector<Parameter*>& params, double lr_scale = 1.0);
  size_t steps_taken() const { return step_; }

 private:
  AdamConfig config_;
  size_t step_ = 0;
};

// Linear warmup to 1 over `warmup` steps, then linear decay to 0 at `total`.
double warmup_decay_scale(size_t step, size_t warmup, size_t total);

// Xavier/Glorot-style uniform init in [-limit, limit], limit =
// sqrt(6/(fan_in+fan_out)); deterministic under the given rng.
Matrix glorot_init(size_t rows, size_t cols, Rng& rng);

}  // namespace xlt::nn

#endif  // XLT_NN_HPP
