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

#include "neuma/config.hpp"
#include "neuma/eval.hpp"
#include "neuma/features.hpp"
#include "neuma/graph.hpp"

#include <filesystem>
#include <vector>

namespace neuma::experiment {

/// Stratified hold-out split of the configured size, seeded by the run seed.
eval::Split holdout_split(const Labels& labels, const RunConfig& config);

/// Every configured pipeline x classical model (plus stacking): hyperparameters
/// are chosen by grid search on the training split, then one refit predicts
/// the test split. Artifacts (per-row reports, CV tables, fitted pipelines) go
/// under `out` when it is non-empty.
std::vector<eval::EvalReport> run_classical(const features::FeatureMatrix& features, const RunConfig& config,
                                            const std::filesystem::path& out = {});

/// Every configured architecture: one model per stratified fold of the
/// training split, majority vote on the test split. Training logs and model
/// dumps go under `out` when it is non-empty.
std::vector<eval::EvalReport> run_gnn(const std::vector<graph::BrainGraph>& graphs, const RunConfig& config,
                                      const std::filesystem::path& out = {});

/// Graph dataset built from node features with the configured edge transform.
std::vector<graph::BrainGraph> build_graphs(const std::vector<features::NodeFeatureMatrix>& nodes,
                                            const RunConfig& config);

}  // namespace neuma::experiment
