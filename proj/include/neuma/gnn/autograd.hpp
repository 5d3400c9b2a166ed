/*
 * Copyright 2026 The neuma-eeg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "neuma/types.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace neuma::gnn {

/// Trainable tensor with its gradient and AdamW moment buffers.
struct Parameter {
  std::string name;
  MatrixXd value;
  MatrixXd grad;
  MatrixXd m;
  MatrixXd v;

  Parameter(std::string name, MatrixXd init);
  void zero_grad() { grad.setZero(); }
  Eigen::Index size() const { return value.size(); }
};

class Tape;

/// Handle to a value recorded on a tape.
struct Var {
  Tape* tape = nullptr;
  int id = -1;

  const MatrixXd& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
};

/// Records a forward computation and replays it backwards. A tape is used
/// for one forward/backward pass and then discarded.
class Tape {
 public:
  using Backward = std::function<void(Tape&, const MatrixXd& grad)>;

  Var constant(MatrixXd value);
  Var parameter(Parameter& p);
  /// Appends an op result; `backward` receives the output gradient.
  Var record(MatrixXd value, std::vector<int> parents, Backward backward);

  const MatrixXd& value(int id) const { return nodes_[static_cast<std::size_t>(id)].value; }
  bool needs_grad(int id) const { return nodes_[static_cast<std::size_t>(id)].needs_grad; }
  void accumulate(int id, const MatrixXd& grad);

  /// Seeds d(loss)/d(loss) = 1 and adds gradients into every reached Parameter.
  void backward(Var loss);

  /// Mixes a piecewise-branch decision (ReLU masks, max-pool winners) into a
  /// digest, so callers can detect when a perturbation crosses a kink.
  void note_branch(std::uint64_t value);
  std::uint64_t branch_digest() const { return branch_digest_; }

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    MatrixXd value;
    MatrixXd grad;
    bool needs_grad = false;
    Parameter* param = nullptr;
    Backward backward;
  };
  std::vector<Node> nodes_;
  std::uint64_t branch_digest_ = 1469598103934665603ULL;
};

/// Row offsets of each graph inside a stacked node matrix; size = graphs + 1.
using Offsets = std::vector<Eigen::Index>;
/// One dense square block per graph.
using BlockList = std::shared_ptr<const std::vector<MatrixXd>>;

Var matmul(Var a, Var b);
Var add(Var a, Var b);
/// a (n x d) + broadcast row b (1 x d).
Var add_row(Var a, Var b);
Var scale(Var a, double s);
Var relu(Var a);
Var leaky_relu(Var a, double slope);
Var elu(Var a);
Var tanh(Var a);
/// Inverted dropout; identity when `rng` is null or p == 0.
Var dropout(Var a, double p, std::mt19937_64* rng);
Var concat_cols(const std::vector<Var>& parts);

/// Per graph g: rows(g) <- blocks[g] * rows(g).
Var block_left(const BlockList& blocks, const Offsets& offsets, Var a);

/// Multi-head attention over every graph's fully connected node set,
/// self included. wh is n x (heads*f); a_src, a_dst are heads x f.
/// Logit e_ij = LeakyReLU_0.2(a_src.wh_i + a_dst.wh_j + edge_bias * w_ij), with
/// w the graph's edge weights (only read when edge_bias != 0). Output is
/// n x (heads*f), heads side by side.
Var graph_attention(Var wh, Var a_src, Var a_dst, int heads, const Offsets& offsets,
                    const BlockList& edge_weights, double edge_bias);

struct BatchNormState {
  RowVectorXd running_mean;
  RowVectorXd running_var;
  double momentum = 0.1;
  double eps = 1e-5;
};

/// Column statistics over all rows in training mode (running statistics are
/// updated with the unbiased variance), running statistics otherwise.
Var batch_norm(Var x, Var gamma, Var beta, BatchNormState& state, bool training);
/// Per-row normalisation over the columns.
Var layer_norm(Var x, Var gamma, Var beta, double eps = 1e-5);

Var mean_pool(Var x, const Offsets& offsets);
/// Column-wise max per graph; ties, up to rounding, go to the lowest row.
Var max_pool(Var x, const Offsets& offsets);
/// out_g = sum_i softmax_g(scores)_i * x_i, scores n x 1.
Var softmax_pool(Var x, Var scores, const Offsets& offsets);

/// -(1 / sum_b w_{y_b}) sum_b w_{y_b} log softmax(logits_b)[y_b]; 1 x 1.
Var weighted_cross_entropy(Var logits, const Labels& labels, const std::vector<double>& class_weights);

/// Row-wise softmax of a B x 2 logit matrix; column 1 is P(class 1).
MatrixXd softmax_rows(const MatrixXd& logits);

}  // namespace neuma::gnn
