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

#include "xlt/nn.hpp"

#include <cmath>

namespace xlt::nn {

namespace {

constexpr double kSqrt2OverPi = 0.7978845608028654;
constexpr double kGeluCubic = 0.044715;
constexpr double kLayerNormEps = 1e-5;

void require_same_shape(const Node* a, const Node* b, const char* op) {
  if (a->value.rows() != b->value.rows() ||
      a->value.cols() != b->value.cols()) {
    throw RuntimeFailure(std::string(op) + ": shape mismatch " +
                         std::to_string(a->value.rows()) + "x" +
                         std::to_string(a->value.cols()) + " vs " +
                         std::to_string(b->value.rows()) + "x" +
                         std::to_string(b->value.cols()));
  }
}

}  // namespace

Parameter::Parameter(std::string param_name, Matrix v)
    : name(std::move(param_name)), value(std::move(v)) {
  grad = Matrix::Zero(value.rows(), value.cols());
  adam_m = Matrix::Zero(value.rows(), value.cols());
  adam_v = Matrix::Zero(value.rows(), value.cols());
}

void Parameter::reset_grad() {
  grad.setZero();
  touched = false;
}

void Node::add_grad(const Matrix& g) {
  if (!has_grad()) {
    grad = Matrix::Zero(value.rows(), value.cols());
  }
  grad += g;
}

Node* Graph::make(Matrix value, std::vector<Node*> parents,
                  std::function<void(Node&)> back) {
  nodes_.emplace_back();
  Node& node = nodes_.back();
  node.value = std::move(value);
  node.parents = std::move(parents);
  node.back = std::move(back);
  return &node;
}

Node* Graph::constant(Matrix v) { return make(std::move(v), {}, nullptr); }

Node* Graph::param(Parameter& p) {
  return make(p.value, {}, [&p](Node& n) {
    p.grad += n.grad;
    p.touched = true;
  });
}

Node* Graph::add(Node* a, Node* b) {
  require_same_shape(a, b, "add");
  return make(a->value + b->value, {a, b}, [](Node& n) {
    n.parents[0]->add_grad(n.grad);
    n.parents[1]->add_grad(n.grad);
  });
}

Node* Graph::sub(Node* a, Node* b) {
  require_same_shape(a, b, "sub");
  return make(a->value - b->value, {a, b}, [](Node& n) {
    n.parents[0]->add_grad(n.grad);
    n.parents[1]->add_grad(-n.grad);
  });
}

Node* Graph::mul(Node* a, Node* b) {
  require_same_shape(a, b, "mul");
  return make((a->value.array() * b->value.array()).matrix(), {a, b},
              [](Node& n) {
                n.parents[0]->add_grad(
                    (n.grad.array() * n.parents[1]->value.array()).matrix());
                n.parents[1]->add_grad(
                    (n.grad.array() * n.parents[0]->value.array()).matrix());
              });
}

Node* Graph::scale(Node* a, double c) {
  return make(c * a->value, {a},
              [c](Node& n) { n.parents[0]->add_grad(c * n.grad); });
}

Node* Graph::matmul(Node* a, Node* b) {
  if (a->value.cols() != b->value.rows()) {
    throw RuntimeFailure("matmul: inner dimensions disagree: " +
                         std::to_string(a->value.cols()) + " vs " +
                         std::to_string(b->value.rows()));
  }
  return make(a->value * b->value, {a, b}, [](Node& n) {
    n.parents[0]->add_grad(n.grad * n.parents[1]->value.transpose());
    n.parents[1]->add_grad(n.parents[0]->value.transpose() * n.grad);
  });
}

Node* Graph::matmul_nt(Node* a, Node* b) {
  if (a->value.cols() != b->value.cols()) {
    throw RuntimeFailure("matmul_nt: inner dimensions disagree: " +
                         std::to_string(a->value.cols()) + " vs " +
                         std::to_string(b->value.cols()));
  }
  return make(a->value * b->value.transpose(), {a, b}, [](Node& n) {
    n.parents[0]->add_grad(n.grad * n.parents[1]->value);
    n.parents[1]->add_grad(n.grad.transpose() * n.parents[0]->value);
  });
}

Node* Graph::add_row_broadcast(Node* a, Node* row) {
  if (row->value.rows() != 1 || row->value.cols() != a->value.cols()) {
    throw RuntimeFailure("add_row_broadcast: bias must be 1x" +
                         std::to_string(a->value.cols()));
  }
  Matrix out = a->value;
  out.rowwise() += row->value.row(0);
  return make(std::move(out), {a, row}, [](Node& n) {
    n.parents[0]->add_grad(n.grad);
    n.parents[1]->add_grad(n.grad.colwise().sum());
  });
}

Node* Graph::gelu(Node* a) {
  const Matrix& x = a->value;
  Matrix inner =
      kSqrt2OverPi * (x.array() + kGeluCubic * x.array().cube()).matrix();
  Matrix t = inner.array().tanh().matrix();
  Matrix out = (0.5 * x.array() * (1.0 + t.array())).matrix();
  return make(std::move(out), {a}, [x, t](Node& n) {
    // d/dx [0.5 x (1+tanh(u))], u = c(x + k x^3).
    Eigen::ArrayXXd du =
        kSqrt2OverPi * (1.0 + 3.0 * kGeluCubic * x.array().square());
    Eigen::ArrayXXd dfdx = 0.5 * (1.0 + t.array()) +
                           0.5 * x.array() * (1.0 - t.array().square()) * du;
    n.parents[0]->add_grad((n.grad.array() * dfdx).matrix());
  });
}

Node* Graph::layer_norm_rows(Node* a, Node* gain, Node* bias) {
  const auto cols = a->value.cols();
  if (gain->value.rows() != 1 || gain->value.cols() != cols ||
      bias->value.rows() != 1 || bias->value.cols() != cols) {
    throw RuntimeFailure("layer_norm_rows: gain/bias must be 1x" +
                         std::to_string(cols));
  }
  const Matrix& x = a->value;
  Eigen::VectorXd mean = x.rowwise().mean();
  Matrix centered = x.colwise() - mean;
  Eigen::VectorXd inv_std =
      ((centered.array().square().rowwise().mean() + kLayerNormEps).sqrt())
          .inverse()
          .matrix();
  Matrix xhat = centered.array().colwise() * inv_std.array();
  Matrix out = (xhat.array().rowwise() * gain->value.row(0).array()).matrix();
  out.rowwise() += bias->value.row(0);
  return make(std::move(out), {a, gain, bias}, [xhat, inv_std](Node& n) {
    const Matrix& dy = n.grad;
    const Matrix& g_row = n.parents[1]->value;
    Matrix g = (dy.array().rowwise() * g_row.row(0).array()).matrix();
    Eigen::VectorXd g_mean = g.rowwise().mean();
    Eigen::VectorXd gx_mean = (g.array() * xhat.array()).rowwise().mean();
    Matrix dx = g;
    dx.colwise() -= g_mean;
    dx -= (xhat.array().colwise() * gx_mean.array()).matrix();
    dx = (dx.array().colwise() * inv_std.array()).matrix();
    n.parents[0]->add_grad(dx);
    n.parents[1]->add_grad((dy.array() * xhat.array()).colwise().sum().matrix());
    n.parents[2]->add_grad(dy.colwise().sum());
  });
}

Node* Graph::softmax_rows(Node* a) {
  Matrix shifted =
      a->value.array().colwise() - a->value.rowwise().maxCoeff().array();
  Matrix e = shifted.array().exp().matrix();
  Matrix out = (e.array().colwise() / e.rowwise().sum().array()).matrix();
  return make(std::move(out), {a}, [](Node& n) {
    const Matrix& y = n.value;
    Eigen::VectorXd dot = (n.grad.array() * y.array()).rowwise().sum();
    Matrix dx = (y.array() * (n.grad.array().colwise() - dot.array())).matrix();
    n.parents[0]->add_grad(dx);
  });
}

Node* Graph::rows(Node* a, const std::vector<int>& indices) {
  Matrix out(static_cast<Eigen::Index>(indices.size()), a->value.cols());
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= a->value.rows()) {
      throw RuntimeFailure("rows: index " + std::to_string(indices[i]) +
                           " out of range for " +
                           std::to_string(a->value.rows()) + " rows");
    }
    out.row(static_cast<Eigen::Index>(i)) = a->value.row(indices[i]);
  }
  return make(std::move(out), {a}, [indices](Node& n) {
    Matrix dx = Matrix::Zero(n.parents[0]->value.rows(),
                             n.parents[0]->value.cols());
    for (size_t i = 0; i < indices.size(); ++i) {
      dx.row(indices[i]) += n.grad.row(static_cast<Eigen::Index>(i));
    }
    n.parents[0]->add_grad(dx);
  });
}

Node* Graph::mean_rows(Node* a) {
  const double n_rows = static_cast<double>(a->value.rows());
  return make(a->value.colwise().mean(), {a}, [n_rows](Node& n) {
    n.parents[0]->add_grad((n.grad / n_rows)
                               .replicate(n.parents[0]->value.rows(), 1));
  });
}

Node* Graph::concat_rows(const std::vector<Node*>& parts) {
  if (parts.empty()) {
    throw RuntimeFailure("concat_rows: empty part list");
  }
  Eigen::Index total = 0;
  for (const Node* p : parts) {
    if (p->value.cols() != parts[0]->value.cols()) {
      throw RuntimeFailure("concat_rows: column counts disagree");
    }
    total += p->value.rows();
  }
  Matrix out(total, parts[0]->value.cols());
  Eigen::Index at = 0;
  for (const Node* p : parts) {
    out.middleRows(at, p->value.rows()) = p->value;
    at += p->value.rows();
  }
  return make(std::move(out), parts, [](Node& n) {
    Eigen::Index at = 0;
    for (Node* p : n.parents) {
      p->add_grad(n.grad.middleRows(at, p->value.rows()));
      at += p->value.rows();
    }
  });
}

Node* Graph::concat_cols(const std::vector<Node*>& parts) {
  if (parts.empty()) {
    throw RuntimeFailure("concat_cols: empty part list");
  }
  Eigen::Index total = 0;
  for (const Node* p : parts) {
    if (p->value.rows() != parts[0]->value.rows()) {
      throw RuntimeFailure("concat_cols: row counts disagree");
    }
    total += p->value.cols();
  }
  Matrix out(parts[0]->value.rows(), total);
  Eigen::Index at = 0;
  for (const Node* p : parts) {
    out.middleCols(at, p->value.cols()) = p->value;
    at += p->value.cols();
  }
  return make(std::move(out), parts, [](Node& n) {
    Eigen::Index at = 0;
    for (Node* p : n.parents) {
      p->add_grad(n.grad.middleCols(at, p->value.cols()));
      at += p->value.cols();
    }
  });
}

Node* Graph::cross_entropy(Node* logits, const std::vector<int>& gold) {
  if (gold.empty()) {
    throw RuntimeFailure("cross_entropy: no gold rows");
  }
  if (static_cast<Eigen::Index>(gold.size()) != logits->value.rows()) {
    throw RuntimeFailure("cross_entropy: got " + std::to_string(gold.size()) +
                         " gold labels for " +
                         std::to_string(logits->value.rows()) + " rows");
  }
  Matrix shifted = logits->value.array().colwise() -
                   logits->value.rowwise().maxCoeff().array();
  Matrix e = shifted.array().exp().matrix();
  Eigen::VectorXd z = e.rowwise().sum();
  Matrix probs = (e.array().colwise() / z.array()).matrix();
  double total = 0.0;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || gold[i] >= logits->value.cols()) {
      throw RuntimeFailure("cross_entropy: gold index " +
                           std::to_string(gold[i]) + " out of range for " +
                           std::to_string(logits->value.cols()) + " classes");
    }
    const auto r = static_cast<Eigen::Index>(i);
    total += std::log(z(r)) - shifted(r, gold[i]);
  }
  Matrix out(1, 1);
  out(0, 0) = total / static_cast<double>(gold.size());
  return make(std::move(out), {logits}, [probs, gold](Node& n) {
    Matrix d = probs * (n.grad(0, 0) / static_cast<double>(gold.size()));
    for (size_t i = 0; i < gold.size(); ++i) {
      d(static_cast<Eigen::Index>(i), gold[i]) -=
          n.grad(0, 0) / static_cast<double>(gold.size());
    }
    n.parents[0]->add_grad(d);
  });
}

Node* Graph::weighted_sum_scalars(const std::vector<Node*>& xs,
                                  const std::vector<double>& weights) {
  if (xs.empty() || xs.size() != weights.size()) {
    throw RuntimeFailure("weighted_sum_scalars: need matching non-empty lists");
  }
  double total = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (xs[i]->value.rows() != 1 || xs[i]->value.cols() != 1) {
      throw RuntimeFailure("weighted_sum_scalars: inputs must be 1x1");
    }
    total += weights[i] * xs[i]->value(0, 0);
  }
  Matrix out(1, 1);
  out(0, 0) = total;
  return make(std::move(out), xs, [weights](Node& n) {
    for (size_t i = 0; i < n.parents.size(); ++i) {
      n.parents[i]->add_grad(weights[i] * n.grad);
    }
  });
}

void Graph::backward(Node* root) {
  if (backward_done_) {
    throw RuntimeFailure("backward: graph already consumed");
  }
  if (root->value.rows() != 1 || root->value.cols() != 1) {
    throw RuntimeFailure("backward: root must be 1x1");
  }
  backward_done_ = true;
  root->add_grad(Matrix::Ones(1, 1));
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    if (it->has_grad() && it->back) {
      it->back(*it);
    }
  }
}

void Adam::step(const std::vector<Parameter*>& params, double lr_scale) {
  ++step_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
  const double rate = config_.lr * lr_scale;
  for (Parameter* p : params) {
    if (!p->touched) {
      continue;
    }
    p->adam_m = config_.beta1 * p->adam_m + (1.0 - config_.beta1) * p->grad;
    p->adam_v = config_.beta2 * p->adam_v +
                (1.0 - config_.beta2) * p->grad.array().square().matrix();
    Matrix m_hat = p->adam_m / bc1;
    Matrix v_hat = p->adam_v / bc2;
    p->value -=
        rate * (m_hat.array() / (v_hat.array().sqrt() + config_.eps)).matrix();
    p->reset_grad();
  }
}

double warmup_decay_scale(size_t step, size_t warmup, size_t total) {
  if (total == 0) {
    return 1.0;
  }
  if (warmup > 0 && step < warmup) {
    return static_cast<double>(step + 1) / static_cast<double>(warmup);
  }
  if (step >= total) {
    return 0.0;
  }
  if (total <= warmup) {
    return 1.0;
  }
  return static_cast<double>(total - step) /
         static_cast<double>(total - warmup);
}

Matrix glorot_init(size_t rows, size_t cols, Rng& rng) {
  const double limit =
      std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
      out(r, c) = (2.0 * rng.uniform() - 1.0) * limit;
    }
  }
  return out;
}

}  // namespace xlt::nn
