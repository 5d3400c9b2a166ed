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

#include "neuma/classical.hpp"
#include "neuma/dimred.hpp"
#include "neuma/features.hpp"
#include "neuma/gnn/architectures.hpp"
#include "neuma/gnn/training.hpp"
#include "neuma/graph.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace neuma {

/// Raised for an unknown model or architecture name; the CLI exits with 2.
class UnknownNameError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::filesystem::path store;
  std::filesystem::path out = "out";
  std::uint64_t seed = 42;
  int jobs = 1;

  features::FeatureConfig features;
  graph::EdgeTransform edge_transform = graph::EdgeTransform::Abs;

  std::vector<dimred::PipelineKind> pipelines = {dimred::PipelineKind::A, dimred::PipelineKind::B,
                                                 dimred::PipelineKind::C};
  std::vector<classical::Family> models = {classical::Family::LogReg, classical::Family::Knn,
                                           classical::Family::GaussianNb, classical::Family::RandomForest,
                                           classical::Family::Gbt};
  bool stacking = true;
  bool grid_search = true;
  int cv_folds = 5;

  std::vector<std::string> architectures = gnn::architecture_names();
  gnn::ArchitectureSpec arch;  // name is overwritten per architecture
  gnn::TrainConfig train;
  int gnn_folds = 5;
  double val_fraction = 0.2;
  double test_fraction = 0.2;
};

struct ConfigKey {
  std::string section;
  std::string key;
  std::string help;
};

/// Every recognised `[section] key`, with a one-line description.
const std::vector<ConfigKey>& config_keys();

/// `key = value` lines under `[section]` headers; `#` starts a comment; arrays are
/// comma separated. Errors carry `origin:line`.
RunConfig parse_config(const std::string& text, const std::string& origin = "config");
RunConfig load_config(const std::filesystem::path& path);

/// Canonical `section.key=value` listing of every setting, one per line.
std::string canonical_config(const RunConfig& config);
/// FNV-1a 64 of the canonical listing, hex.
std::string config_digest(const RunConfig& config);

}  // namespace neuma
