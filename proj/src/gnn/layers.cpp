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

#include "neuma/gnn/layers.hpp"

#include <cmath>

namespace neuma::gnn {

MatrixXd normalized_adjacency(const MatrixXd& adjacency) {
  if (adjacency.rows() != adjacency.cols()) throw Error("normalized_adjacency: matrix must be square");
  const MatrixXd a = adjacency + MatrixXd::Identity(adjacency.rows(), adjacency.cols());
  const VectorXd degree = a.rowwise().sum();
  if ((degree.array() <= 0.0).any()) throw Error("normalized_adjacency: non-positive degree");
  const VectorXd inv_sqrt = degree.array().rsqrt().matrix();
  return inv_sqrt.asDiagonal() * a * inv_sqrt.asDiagonal();
}

MatrixXd neighbour_mean_operator(Eigen::Index n) {
  if (n < 2) return MatrixXd::Zero(n, n);
  return (MatrixXd::Ones(n, n) - MatrixXd::Identity(n, n)) / static_cast<double>(n - 1);
}

GraphBatch make_batch(const std::vector<const graph::BrainGraph*>& graphs) {
  if (graphs.empty()) throw Error("make_batch: no graphs");
  GraphBatch batch;
  auto a_hat = std::make_shared<std::vector<MatrixXd>>();
  auto mean_op = std::make_shared<std::vector<MatrixXd>>();
  auto weights = std::make_shared<std::vector<MatrixXd>>();
  Eigen::Index rows = 0;
  const Eigen::Index d = graphs.front()->n_features();
  batch.offsets.push_back(0);
  for (const auto* g : graphs) {
    if (g->n_features() != d) throw Error("make_batch: node feature width differs between graphs");
    if (g->adjacency.rows() != g->node_features.rows()) throw Error("make_batch: adjacency/node count mismatch");
    rows += g->n_nodes();
    batch.offsets.push_back(rows);
    a_hat->push_back(normalized_adjacency(g->adjacency));
    mean_op->push_back(neighbour_mean_operator(g->n_nodes()));
    weights->push_back(g->adjacency);
    batch.y.push_back(g->label);
  }
  batch.x.resize(rows, d);
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    batch.x.middleRows(batch.offsets[i], graphs[i]->n_nodes()) = graphs[i]->node_features;
  }
  batch.a_hat = std::move(a_hat);
  batch.neighbour_mean = std::move(mean_op);
  batch.edge_weights = std::move(weights);
  return batch;
}

GraphBatch make_batch(const std::vector<graph::BrainGraph>& graphs, const std::vector<int>& indices) {
  std::vector<const graph::BrainGraph*> ptrs;
  ptrs.reserve(indices.size());
  for (int i : indices) ptrs.push_back(&graphs.at(static_cast<std::size_t>(i)));
  return make_batch(ptrs);
}

MatrixXd gcn_forward(const MatrixXd& h, const MatrixXd& a_hat, const MatrixXd& w, const RowVectorXd& bias) {
  if (a_hat.cols() != h.rows() || h.cols() != w.rows() || bias.size() != w.cols()) {
    throw Error("gcn_forward: dimension mismatch");
  }
  return (a_hat * h * w).rowwise() + bias;
}

MatrixXd gat_head_forward(const MatrixXd& h, const MatrixXd& w, const RowVectorXd& a_src,
                          const RowVectorXd& a_dst, MatrixXd* alpha) {
  if (h.cols() != w.rows() || a_src.size() != w.cols() || a_dst.size() != w.cols()) {
    throw Error("gat_head_forward: dimension mismatch");
  }
  const MatrixXd wh = h * w;
  const Eigen::Index n = h.rows();
  MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double e = a_src.dot(wh.row(i)) + a_dst.dot(wh.row(j));
      a(i, j) = e > 0 ? e : 0.2 * e;
    }
    const double m = a.row(i).maxCoeff();
    a.row(i) = (a.row(i).array() - m).exp().matrix();
    a.row(i) /= a.row(i).sum();
  }
  if (alpha) *alpha = a;
  return a * wh;
}

MatrixXd sage_forward(const MatrixXd& h, const MatrixXd& w_self, const MatrixXd& w_neigh, const RowVectorXd& bias) {
  return ((h * w_self + neighbour_mean_operator(h.rows()) * h * w_neigh).rowwise() + bias);
}

RowVectorXd pool_forward(const MatrixXd& h, PoolKind kind, const MatrixXd& v, const VectorXd& u, VectorXd* weights) {
  if (h.rows() < 1) throw Error("pool_forward: empty graph");
  switch (kind) {
    case PoolKind::Mean: return h.colwise().mean();
    case PoolKind::Max: return h.colwise().maxCoeff();
    case PoolKind::Attention: {
      const VectorXd s = (h * v).array().tanh().matrix() * u;
      VectorXd w = (s.array() - s.maxCoeff()).exp().matrix();
      w /= w.sum();
      if (weights) *weights = w;
      return w.transpose() * h;
    }
  }
  throw Error("pool_forward: unknown pooling");
}

Parameter& ParameterStore::glorot(const std::string& name, Eigen::Index rows, Eigen::Index cols) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-limit, limit);
  MatrixXd init(rows, cols);
  for (Eigen::Index i = 0; i < init.size(); ++i) init.data()[i] = dist(rng_);
  params_.push_back(std::make_unique<Parameter>(name, std::move(init)));
  return *params_.back();
}

Parameter& ParameterStore::constant(const std::string& name, Eigen::Index rows, Eigen::Index cols, double value) {
  params_.push_back(std::make_unique<Parameter>(name, MatrixXd::Constant(rows, cols, value)));
  return *params_.back();
}

BatchNormState& ParameterStore::batch_norm_state() {
  buffers_.push_back(std::make_unique<BatchNormState>());
  return *buffers_.back();
}

std::vector<Parameter*> ParameterStore::parameters() const {
  std::vector<Parameter*> out;
  for (const auto& p : params_) out.push_back(p.get());
  return out;
}

Eigen::Index ParameterStore::parameter_count() const {
  Eigen::Index n = 0;
  for (const auto& p : params_) n += p->size();
  return n;
}

Linear::Linear(ParameterStore& store, const std::string& name, Eigen::Index in, Eigen::Index out)
    : w_(&store.glorot(name + ".weight", in, out)), b_(&store.constant(name + ".bias", 1, out, 0.0)) {}

Var Linear::operator()(Tape& tape, Var x) const {
  return add_row(matmul(x, tape.parameter(*w_)), tape.parameter(*b_));
}

GcnConv::GcnConv(ParameterStore& store, const std::string& name, Eigen::Index in, Eigen::Index out)
    : w_(&store.glorot(name + ".weight", in, out)), b_(&store.constant(name + ".bias", 1, out, 0.0)) {}

Var GcnConv::operator()(Tape& tape, const GraphBatch& batch, Var x) const {
  return add_row(block_left(batch.a_hat, batch.offsets, matmul(x, tape.parameter(*w_))), tape.parameter(*b_));
}

GatConv::GatConv(ParameterStore& store, const std::string& name, Eigen::Index in, Eigen::Index per_head, int heads,
                 bool concat)
    : per_head_(per_head),
      heads_(heads),
      concat_(concat),
      w_(&store.glorot(name + ".weight", in, per_head * heads)),
      a_src_(&store.glorot(name + ".att_src", heads, per_head)),
      a_dst_(&store.glorot(name + ".att_dst", heads, per_head)),
      b_(&store.constant(name + ".bias", 1, concat ? per_head * heads : per_head, 0.0)) {
  if (heads < 1) throw Error("GAT layer needs at least one head");
}

Var GatConv::operator()(Tape& tape, const GraphBatch& batch, Var x, const ForwardContext& ctx) const {
  Var wh = matmul(x, tape.parameter(*w_));
  Var att = graph_attention(wh, tape.parameter(*a_src_), tape.parameter(*a_dst_), heads_, batch.offsets,
                            batch.edge_weights, ctx.edge_bias);
  if (!concat_ && heads_ > 1) {
    MatrixXd average(per_head_ * heads_, per_head_);
    for (int k = 0; k < heads_; ++k) {
      average.middleRows(k * per_head_, per_head_) = MatrixXd::Identity(per_head_, per_head_) / heads_;
    }
    att = matmul(att, tape.constant(std::move(average)));
  }
  return add_row(att, tape.parameter(*b_));
}

SageConv::SageConv(ParameterStore& store, const std::string& name, Eigen::Index in, Eigen::Index out)
    : w_self_(&store.glorot(name + ".weight_self", in, out)),
      w_neigh_(&store.glorot(name + ".weight_neigh", in, out)),
      b_(&store.constant(name + ".bias", 1, out, 0.0)) {}

Var SageConv::operator()(Tape& tape, const GraphBatch& batch, Var x) const {
  Var self = matmul(x, tape.parameter(*w_self_));
  Var neigh = matmul(block_left(batch.neighbour_mean, batch.offsets, x), tape.parameter(*w_neigh_));
  return add_row(add(self, neigh), tape.parameter(*b_));
}

BatchNorm::BatchNorm(ParameterStore& store, const std::string& name, Eigen::Index dim)
    : gamma_(&store.constant(name + ".gamma", 1, dim, 1.0)),
      beta_(&store.constant(name + ".beta", 1, dim, 0.0)),
      state_(&store.batch_norm_state()) {}

Var BatchNorm::operator()(Tape& tape, Var x, const ForwardContext& ctx) const {
  return batch_norm(x, tape.parameter(*gamma_), tape.parameter(*beta_), *state_, ctx.training);
}

LayerNorm::LayerNorm(ParameterStore& store, const std::string& name, Eigen::Index dim)
    : gamma_(&store.constant(name + ".gamma", 1, dim, 1.0)), beta_(&store.constant(name + ".beta", 1, dim, 0.0)) {}

Var LayerNorm::operator()(Tape& tape, Var x) const {
  return layer_norm(x, tape.parameter(*gamma_), tape.parameter(*beta_));
}

AttentionPool::AttentionPool(ParameterStore& store, const std::string& name, Eigen::Index dim)
    : v_(&store.glorot(name + ".v", dim, dim)), u_(&store.glorot(name + ".u", dim, 1)) {}

Var AttentionPool::operator()(Tape& tape, const GraphBatch& batch, Var x) const {
  Var scores = matmul(tanh(matmul(x, tape.parameter(*v_))), tape.parameter(*u_));
  return softmax_pool(x, scores, batch.offsets);
}

Var pool(Tape&, const GraphBatch& batch, Var x, PoolKind kind) {
  switch (kind) {
    case PoolKind::Mean: return mean_pool(x, batch.offsets);
    case PoolKind::Max: return max_pool(x, batch.offsets);
    case PoolKind::Attention: break;
  }
  throw Error("pool: attention pooling needs an AttentionPool layer");
}

Var apply_dropout(Var x, const ForwardContext& ctx) {
  return dropout(x, ctx.dropout, ctx.training ? ctx.rng : nullptr);
}

}  // namespace neuma::gnn
