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

#include "neuma/gnn/autograd.hpp"
#include "neuma/graph.hpp"

#include <random>
#include <string>
#include <vector>

namespace neuma::gnn {

/// D^-1/2 (A + I) D^-1/2 with D the degree matrix of A + I.
MatrixXd normalized_adjacency(const MatrixXd& adjacency);

/// Averaging operator over all other nodes: (J - I) / (n - 1); zero for n = 1.
MatrixXd neighbour_mean_operator(Eigen::Index n);

/// Several graphs stacked row-wise; graph g owns rows [offsets[g], offsets[g+1]).
struct GraphBatch {
  MatrixXd x;
  Offsets offsets;
  BlockList a_hat;
  BlockList neighbour_mean;
  BlockList edge_weights;
  Labels y;

  std::size_t n_graphs() const { return offsets.size() - 1; }
};

GraphBatch make_batch(const std::vector<const graph::BrainGraph*>& graphs);
GraphBatch make_batch(const std::vector<graph::BrainGraph>& graphs, const std::vector<int>& indices);

// Plain forward passes for a single graph, used as references.

MatrixXd gcn_forward(const MatrixXd& h, const MatrixXd& a_hat, const MatrixXd& w, const RowVectorXd& bias);

/// One attention head; `alpha` receives the n x n attention matrix when non-null.
MatrixXd gat_head_forward(const MatrixXd& h, const MatrixXd& w, const RowVectorXd& a_src,
                          const RowVectorXd& a_dst, MatrixXd* alpha = nullptr);

MatrixXd sage_forward(const MatrixXd& h, const MatrixXd& w_self, const MatrixXd& w_neigh,
                      const RowVectorXd& bias);

enum class PoolKind { Mean, Max, Attention };

/// Attention pooling reads v (d x d) and u (d x 1): score_i = u . tanh(V^T h_i).
RowVectorXd pool_forward(const MatrixXd& h, PoolKind kind, const MatrixXd& v = {}, const VectorXd& u = {},
                         VectorXd* weights = nullptr);

/// Per-call switches shared by every layer of a forward pass.
struct ForwardContext {
  bool training = false;
  std::mt19937_64* rng = nullptr;  // dropout masks; null disables dropout
  double dropout = 0.0;
  double edge_bias = 0.0;          // GAT logit bias per unit edge weight
};

/// Owns parameters and normalisation buffers of one model.
class ParameterStore {
 public:
  explicit ParameterStore(std::uint64_t seed) : rng_(seed) {}

  Parameter& glorot(const std::string& name, Eigen::Index rows, Eigen::Index cols);
  Parameter& constant(const std::string& name, Eigen::Index rows, Eigen::Index cols, double value);
  BatchNormState& batch_norm_state();

  std::vector<Parameter*> parameters() const;
  const std::vector<std::unique_ptr<BatchNormState>>& buffers() const { return buffers_; }
  Eigen::Index parameter_count() const;

 private:
  std::mt19937_64 rng_;
  std::vector<std::unique_ptr<Parameter>> params_;
  std::vector<std::unique_ptr<BatchNormState>> buffers_;
};

class Linear {
 public:
  Linear(ParameterStore& store, const std::string& name, Eigen::Index in, Eigen::Index out);
  Var operator()(Tape& tape, Var x) const;
  Eigen::Index out_dim() const { return w_->value.cols(); }

 private:
  Parameter* w_;
  Parameter* b_;
};

class GcnConv {
 public:
  GcnConv(ParameterStore& store, const std::string& name, Eigen::Index in, Eigen::Index out);
  Var operator()(Tape& tape, const GraphBatch& batch, Var x) const;

 private:
  Parameter* w_;
  Parameter* b_;
};

/// Multi-head attention; heads are concatenated or averaged.
class GatConv {
 public:
  GatConv(ParameterStore& store, const std::string& name, Eigen::Index in, Eigen::Index per_head, int heads,
          bool concat);
  Var operator()(Tape& tape, const GraphBatch& batch, Var x, const ForwardContext& ctx) const;
  Eigen::Index out_dim() const { return concat_ ? per_head_ * heads_ : per_head_; }

 private:
  Eigen::Index per_head_;
  int heads_;
  bool concat_;
  Parameter* w_;
  Parameter* a_src_;
  Parameter* a_dst_;
  Parameter* b_;
};

/// Mean aggregator over every other node.
class SageConv {
 public:
  SageConv(ParameterStore& store, const std::string& name, Eigen::Index in, Eigen::Index out);
  Var operator()(Tape& tape, const GraphBatch& batch, Var x) const;

 private:
  Parameter* w_self_;
  Parameter* w_neigh_;
  Parameter* b_;
};

class BatchNorm {
 public:
  BatchNorm(ParameterStore& store, const std::string& name, Eigen::Index dim);
  Var operator()(Tape& tape, Var x, const ForwardContext& ctx) const;

 private:
  Parameter* gamma_;
  Parameter* beta_;
  BatchNormState* state_;
};

class LayerNorm {
 public:
  LayerNorm(ParameterStore& store, const std::string& name, Eigen::Index dim);
  Var operator()(Tape& tape, Var x) const;

 private:
  Parameter* gamma_;
  Parameter* beta_;
};

class AttentionPool {
 public:
  AttentionPool(ParameterStore& store, const std::string& name, Eigen::Index dim);
  Var operator()(Tape& tape, const GraphBatch& batch, Var x) const;

 private:
  Parameter* v_;
  Parameter* u_;
};

Var pool(Tape& tape, const GraphBatch& batch, Var x, PoolKind kind);
Var apply_dropout(Var x, const ForwardContext& ctx);

}  // namespace neuma::gnn
