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

#include "neuma/gnn/layers.hpp"

#include <memory>
#include <string>
#include <vector>

namespace neuma::gnn {

struct ArchitectureSpec {
  std::string name = "BaselineGCN";
  Eigen::Index input_dim = 40;
  Eigen::Index hidden = 64;
  int heads = 4;  // first BaselineGAT layer; the second uses one head
  double dropout = 0.3;
  double edge_bias = 0.0;
};

/// The eleven architecture names in table order.
const std::vector<std::string>& architecture_names();
bool is_architecture(const std::string& name);

/// Parameter values plus normalisation running statistics.
struct ModelState {
  std::vector<MatrixXd> values;
  std::vector<RowVectorXd> running_mean;
  std::vector<RowVectorXd> running_var;
};

class Model {
 public:
  Model(ArchitectureSpec spec, std::uint64_t seed) : spec_(std::move(spec)), store_(seed) {}
  virtual ~Model() = default;
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;

  const ArchitectureSpec& spec() const { return spec_; }
  std::vector<Parameter*> parameters() const { return store_.parameters(); }
  Eigen::Index parameter_count() const { return store_.parameter_count(); }

  /// Graph logits, B x 2. Dropout is active only when ctx.training and ctx.rng are set.
  Var forward(Tape& tape, const GraphBatch& batch, bool training, std::mt19937_64* rng) const;
  /// Evaluation-mode logits.
  MatrixXd logits(const GraphBatch& batch) const;

  /// Human-readable layer list.
  virtual std::vector<std::string> layers() const = 0;

  ModelState state() const;
  void load_state(const ModelState& state);
  /// Text dump: one block per parameter, `name rows cols` followed by the rows.
  std::string dump() const;

 protected:
  virtual Var run(Tape& tape, const GraphBatch& batch, Var x, const ForwardContext& ctx) const = 0;

  ArchitectureSpec spec_;
  ParameterStore store_;
};

/// Throws naming the offender when the architecture is unknown.
std::unique_ptr<Model> build_architecture(const ArchitectureSpec& spec, std::uint64_t seed);

}  // namespace neuma::gnn
