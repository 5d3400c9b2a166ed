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

#include "neuma/gnn/training.hpp"

#include "neuma/text_io.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace neuma::gnn {

std::string to_string(ClassWeightMode mode) { return mode == ClassWeightMode::None ? "none" : "inverse"; }

ClassWeightMode class_weight_mode_from_string(const std::string& name) {
  if (name == "none") return ClassWeightMode::None;
  if (name == "inverse") return ClassWeightMode::Inverse;
  throw Error("unknown class weight mode: " + name);
}

std::vector<double> class_weights(const Labels& labels, ClassWeightMode mode) {
  if (mode == ClassWeightMode::None) return {1.0, 1.0};
  double counts[2] = {0, 0};
  for (int y : labels) {
    if (y != 0 && y != 1) throw Error("class_weights: labels must be 0 or 1");
    counts[y] += 1;
  }
  if (counts[0] == 0 || counts[1] == 0) throw Error("class_weights: both classes must be present");
  const double w0 = 1.0 / counts[0];
  const double w1 = 1.0 / counts[1];
  const double mean = 0.5 * (w0 + w1);
  return {w0 / mean, w1 / mean};
}

NodeScaler NodeScaler::identity(Eigen::Index dim) {
  return {RowVectorXd::Zero(dim), RowVectorXd::Ones(dim)};
}

NodeScaler NodeScaler::fit(const std::vector<graph::BrainGraph>& graphs, const std::vector<int>& indices) {
  if (indices.empty()) throw Error("node scaler: no training graphs");
  const auto d = graphs.at(static_cast<std::size_t>(indices.front())).n_features();
  RowVectorXd sum = RowVectorXd::Zero(d);
  double n = 0;
  for (int i : indices) {
    const auto& g = graphs.at(static_cast<std::size_t>(i));
    sum += g.node_features.colwise().sum();
    n += static_cast<double>(g.n_nodes());
  }
  NodeScaler s;
  s.mean = sum / n;
  RowVectorXd sq = RowVectorXd::Zero(d);
  for (int i : indices) {
    const auto& g = graphs[static_cast<std::size_t>(i)];
    sq += (g.node_features.rowwise() - s.mean).array().square().colwise().sum().matrix();
  }
  s.scale = (sq / n).cwiseSqrt();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (s.scale[j] < 1e-12) s.scale[j] = 1.0;
  }
  return s;
}

graph::BrainGraph NodeScaler::apply(const graph::BrainGraph& g) const {
  auto out = g;
  out.node_features = ((g.node_features.rowwise() - mean).array().rowwise() / scale.array()).matrix();
  return out;
}

std::string training_log_csv(const std::vector<EpochLog>& log) {
  std::string out = "epoch,train_loss,val_loss,val_acc,lr\n";
  for (const auto& e : log) {
    out += std::to_string(e.epoch) + "," + text::format_double(e.train_loss) + "," +
           text::format_double(e.val_loss) + "," + text::format_double(e.val_acc) + "," +
           text::format_double(e.lr) + "\n";
  }
  return out;
}

namespace {

std::vector<graph::BrainGraph> scaled_copies(const std::vector<graph::BrainGraph>& graphs,
                                             const std::vector<int>& indices, const NodeScaler& scaler) {
  std::vector<graph::BrainGraph> out;
  out.reserve(indices.size());
  for (int i : indices) out.push_back(scaler.apply(graphs.at(static_cast<std::size_t>(i))));
  return out;
}

std::vector<int> iota_indices(std::size_t n) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

}  // namespace

TrainedModel train_gnn(const std::vector<graph::BrainGraph>& graphs, const std::vector<int>& train,
                       const std::vector<int>& val, const ArchitectureSpec& arch, const TrainConfig& config) {
  if (train.empty() || val.empty()) throw Error("train_gnn: training and validation sets must be non-empty");
  if (config.batch_size < 1 || config.max_epochs < 1) throw Error("train_gnn: batch size and epochs must be >= 1");
  if (config.lr < 0.0 || config.weight_decay < 0.0) throw Error("train_gnn: negative learning rate or decay");

  TrainedModel result;
  const auto d = graphs.at(static_cast<std::size_t>(train.front())).n_features();
  result.scaler = config.scale_node_features ? NodeScaler::fit(graphs, train) : NodeScaler::identity(d);
  const auto train_graphs = scaled_copies(graphs, train, result.scaler);
  const auto val_graphs = scaled_copies(graphs, val, result.scaler);

  Labels train_labels;
  for (const auto& g : train_graphs) train_labels.push_back(g.label);
  const auto weights = class_weights(train_labels, config.class_weights);

  result.model = build_architecture(arch, config.seed);
  Model& model = *result.model;
  AdamWOptions adam;
  adam.weight_decay = config.weight_decay;
  AdamW optimizer(model.parameters(), adam);
  PlateauScheduler scheduler(config.lr, config.plateau_factor, config.plateau_patience, config.min_lr);
  EarlyStopping stopper(config.early_stop_patience);

  std::mt19937_64 shuffle_rng(config.seed);
  std::mt19937_64 dropout_rng(config.seed ^ 0x5bd1e995ULL);
  const GraphBatch val_batch = make_batch(val_graphs, iota_indices(val_graphs.size()));
  auto order = iota_indices(train_graphs.size());
  ModelState best = model.state();

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const double lr = scheduler.lr();
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    double weight_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const auto stop = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      const std::vector<int> members(order.begin() + static_cast<long>(start), order.begin() + static_cast<long>(stop));
      const GraphBatch batch = make_batch(train_graphs, members);
      optimizer.zero_grad();
      Tape tape;
      Var loss = weighted_cross_entropy(model.forward(tape, batch, true, &dropout_rng), batch.y, weights);
      tape.backward(loss);
      optimizer.step(lr);
      double w = 0.0;
      for (int y : batch.y) w += weights[static_cast<std::size_t>(y)];
      loss_sum += loss.value()(0, 0) * w;
      weight_sum += w;
    }

    Tape tape;
    Var val_logits = model.forward(tape, val_batch, false, nullptr);
    const double val_loss = weighted_cross_entropy(val_logits, val_batch.y, weights).value()(0, 0);
    const MatrixXd& z = val_logits.value();
    double correct = 0;
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      const int pred = z(i, 1) > z(i, 0) ? 1 : 0;
      correct += pred == val_batch.y[static_cast<std::size_t>(i)] ? 1 : 0;
    }
    const double val_acc = correct / static_cast<double>(z.rows());
    result.log.push_back({epoch, loss_sum / weight_sum, val_loss, val_acc, lr});

    scheduler.update(val_acc);
    if (stopper.update(epoch, val_loss)) best = model.state();
    if (stopper.should_stop()) {
      result.stopped_early = true;
      break;
    }
  }
  model.load_state(best);
  result.best_epoch = stopper.best_epoch();
  return result;
}

VectorXd predict_proba(const TrainedModel& trained, const std::vector<graph::BrainGraph>& graphs,
                       const std::vector<int>& indices) {
  const auto scaled = scaled_copies(graphs, indices, trained.scaler);
  const MatrixXd logits = trained.model->logits(make_batch(scaled, iota_indices(scaled.size())));
  return softmax_rows(logits).col(1);
}

Labels predict(const TrainedModel& trained, const std::vector<graph::BrainGraph>& graphs,
               const std::vector<int>& indices) {
  const auto scaled = scaled_copies(graphs, indices, trained.scaler);
  const MatrixXd z = trained.model->logits(make_batch(scaled, iota_indices(scaled.size())));
  Labels out;
  for (Eigen::Index i = 0; i < z.rows(); ++i) out.push_back(z(i, 1) > z(i, 0) ? 1 : 0);
  return out;
}

}  // namespace neuma::gnn
