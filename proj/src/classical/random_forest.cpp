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

#include "neuma/classical.hpp"

#include <cmath>
#include <numeric>

namespace neuma::classical {

void RandomForest::fit(const MatrixXd& x, const Labels& y) {
  check_training_set(x, y);
  if (options_.n_trees < 1) throw Error("random_forest: n_trees must be >= 1");
  TreeOptions tree_options;
  tree_options.max_depth = options_.max_depth;
  tree_options.min_leaf = options_.min_leaf;
  tree_options.max_features = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(x.cols()))));

  std::mt19937_64 rng(options_.seed);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(x.rows()) - 1);
  trees_.clear();
  trees_.reserve(static_cast<std::size_t>(options_.n_trees));
  for (int t = 0; t < options_.n_trees; ++t) {
    std::vector<int> rows(static_cast<std::size_t>(x.rows()));
    if (options_.bootstrap) {
      for (auto& r : rows) r = pick(rng);
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    trees_.push_back(fit_gini_tree(x, y, rows, tree_options, rng));
  }
}

VectorXd RandomForest::predict_proba(const MatrixXd& x) const {
  if (trees_.empty()) throw Error("random_forest: not fitted");
  VectorXd votes = VectorXd::Zero(x.rows());
  for (const auto& tree : trees_) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) votes[i] += tree.predict(x.row(i)) > 0.5 ? 1.0 : 0.0;
  }
  return votes / static_cast<double>(trees_.size());
}

std::string RandomForest::summary() const {
  int depth = 0;
  for (const auto& t : trees_) depth = std::max(depth, t.depth());
  return "random_forest trees=" + std::to_string(trees_.size()) + " max_depth_seen=" + std::to_string(depth) +
         " seed=" + std::to_string(options_.seed);
}

}  // namespace neuma::classical
