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

#include "neuma/gnn/architectures.hpp"
#include "neuma/gnn/optim.hpp"
#include "neuma/graph.hpp"

#include <memory>
#include <string>
#include <vector>

namespace neuma::gnn {

enum class ClassWeightMode { None, Inverse };

std::string to_string(ClassWeightMode mode);
ClassWeightMode class_weight_mode_from_string(const std::string& name);

struct TrainConfig {
  double lr = 0.001;
  double weight_decay = 0.01;
  int batch_size = 32;
  int max_epochs = 100;
  double plateau_factor = 0.5;
  int plateau_patience = 5;
  double min_lr = 1e-6;
  int early_stop_patience = 15;
  ClassWeightMode class_weights = ClassWeightMode::Inverse;
  bool scale_node_features = true;
  std::uint64_t seed = 0;
};

/// Inverse class frequency normalised to mean 1; {1, 1} for ClassWeightMode::None.
std::vector<double> class_weights(const Labels& labels, ClassWeightMode mode);

/// Per-column z-scoring of node features, fitted on the nodes of training graphs.
struct NodeScaler {
  RowVectorXd mean;
  RowVectorXd scale;

  static NodeScaler identity(Eigen::Index dim);
  static NodeScaler fit(const std::vector<graph::BrainGraph>& graphs, const std::vector<int>& indices);
  graph::BrainGraph apply(const graph::BrainGraph& g) const;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_acc = 0.0;
  double lr = 0.0;
};

std::string training_log_csv(const std::vector<EpochLog>& log);

struct TrainedModel {
  std::unique_ptr<Model> model;
  NodeScaler scaler;
  std::vector<EpochLog> log;
  int best_epoch = 0;
  bool stopped_early = false;
};

/// Mini-batch training with AdamW, the accuracy plateau scheduler and early
/// stopping on validation loss; the best-validation-loss snapshot is restored.
TrainedModel train_gnn(const std::vector<graph::BrainGraph>& graphs, const std::vector<int>& train,
                       const std::vector<int>& val, const ArchitectureSpec& arch, const TrainConfig& config);

/// Evaluation-mode class-1 probabilities for the selected graphs.
VectorXd predict_proba(const TrainedModel& trained, const std::vector<graph::BrainGraph>& graphs,
                       const std::vector<int>& indices);
Labels predict(const TrainedModel& trained, const std::vector<graph::BrainGraph>& graphs,
               const std::vector<int>& indices);

}  // namespace neuma::gnn
