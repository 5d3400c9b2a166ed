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

#include "neuma/classical/tree_internal.hpp"
#include "neuma/text_io.hpp"

#include <cmath>
#include <numeric>

namespace neuma::classical {

namespace {

double mean_log_loss(const VectorXd& score, const Labels& y) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < score.size(); ++i) {
    const double z = score[i];
    const double sp = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    loss += sp - y[static_cast<std::size_t>(i)] * z;
  }
  return loss / static_cast<double>(score.size());
}

}  // namespace

void GradientBoostedTrees::fit(const MatrixXd& x, const Labels& y) {
  check_training_set(x, y);
  if (options_.n_rounds < 0) throw Error("gbt: n_rounds must be >= 0");
  const auto n = static_cast<double>(y.size());
  const double ones = std::accumulate(y.begin(), y.end(), 0.0);
  base_score_ = std::log(ones / (n - ones));

  TreeOptions tree_options;
  tree_options.max_depth = options_.max_depth;
  tree_options.l2 = options_.l2;
  tree_options.min_hessian = options_.min_hessian;

  const auto sorted = presort_columns(x);
  std::vector<int> rows(y.size());
  std::iota(rows.begin(), rows.end(), 0);

  VectorXd score = VectorXd::Constant(x.rows(), base_score_);
  VectorXd grad(x.rows());
  VectorXd hess(x.rows());
  trees_.clear();
  training_loss_ = {mean_log_loss(score, y)};
  for (int round = 0; round < options_.n_rounds; ++round) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double p = sigmoid(score[i]);
      grad[i] = p - y[static_cast<std::size_t>(i)];
      hess[i] = p * (1.0 - p);
    }
    Tree tree = fit_newton_tree_presorted(x, grad, hess, rows, tree_options, sorted);
    for (auto& node : tree.nodes) node.value *= options_.learning_rate;
    for (Eigen::Index i = 0; i < x.rows(); ++i) score[i] += tree.predict(x.row(i));
    trees_.push_back(std::move(tree));
    training_loss_.push_back(mean_log_loss(score, y));
  }
}

VectorXd GradientBoostedTrees::raw_score(const MatrixXd& x) const {
  VectorXd score = VectorXd::Constant(x.rows(), base_score_);
  for (const auto& tree : trees_) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) score[i] += tree.predict(x.row(i));
  }
  return score;
}

VectorXd GradientBoostedTrees::predict_proba(const MatrixXd& x) const {
  return raw_score(x).unaryExpr([](double z) { return sigmoid(z); });
}

std::string GradientBoostedTrees::summary() const {
  return "gbt (stand-in) rounds=" + std::to_string(trees_.size()) + " depth=" +
         std::to_string(options_.max_depth) + " lr=" + text::format_double(options_.learning_rate, 6) +
         " base_score=" + text::format_double(base_score_, 6);
}

}  // namespace neuma::classical
