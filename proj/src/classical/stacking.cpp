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

#include "neuma/eval.hpp"

namespace neuma::classical {

namespace {

MatrixXd take_rows(const MatrixXd& x, const std::vector<int>& rows) {
  MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  return out;
}

Labels take(const Labels& y, const std::vector<int>& rows) {
  Labels out;
  out.reserve(rows.size());
  for (int r : rows) out.push_back(y[static_cast<std::size_t>(r)]);
  return out;
}

}  // namespace

std::vector<std::unique_ptr<Classifier>> Stacking::make_base_learners(std::uint64_t seed) {
  std::vector<std::unique_ptr<Classifier>> base;
  base.push_back(std::make_unique<GaussianNb>());
  base.push_back(std::make_unique<LogisticRegression>());
  base.push_back(std::make_unique<Knn>(5));
  GbtOptions gbt;
  gbt.seed = seed;
  base.push_back(std::make_unique<GradientBoostedTrees>(gbt));
  return base;
}

void Stacking::fit(const MatrixXd& x, const Labels& y) {
  check_training_set(x, y);
  const auto folds = eval::stratified_kfold(y, n_folds_, seed_);
  meta_ = MatrixXd::Zero(x.rows(), 4);
  meta_fold_ = folds;
  fold_train_rows_.assign(static_cast<std::size_t>(n_folds_), {});
  for (int f = 0; f < n_folds_; ++f) {
    const auto train_rows = eval::fold_complement(folds, f);
    const auto held_rows = eval::fold_members(folds, f);
    fold_train_rows_[static_cast<std::size_t>(f)] = train_rows;
    const MatrixXd x_train = take_rows(x, train_rows);
    const Labels y_train = take(y, train_rows);
    const MatrixXd x_held = take_rows(x, held_rows);
    auto learners = make_base_learners(seed_);
    for (std::size_t b = 0; b < learners.size(); ++b) {
      learners[b]->fit(x_train, y_train);
      const VectorXd p = learners[b]->predict_proba(x_held);
      for (std::size_t i = 0; i < held_rows.size(); ++i) {
        meta_(held_rows[i], static_cast<Eigen::Index>(b)) = p[static_cast<Eigen::Index>(i)];
      }
    }
  }
  base_ = make_base_learners(seed_);
  for (auto& learner : base_) learner->fit(x, y);
  GbtOptions meta_options;
  meta_options.seed = seed_;
  meta_model_ = std::make_unique<GradientBoostedTrees>(meta_options);
  meta_model_->fit(meta_, y);
}

MatrixXd Stacking::base_probabilities(const MatrixXd& x) const {
  if (base_.empty()) throw Error("stacking: not fitted");
  MatrixXd out(x.rows(), static_cast<Eigen::Index>(base_.size()));
  for (std::size_t b = 0; b < base_.size(); ++b) out.col(static_cast<Eigen::Index>(b)) = base_[b]->predict_proba(x);
  return out;
}

VectorXd Stacking::predict_proba(const MatrixXd& x) const {
  return meta_model_->predict_proba(base_probabilities(x));
}

std::string Stacking::summary() const {
  return "stacking base=[gaussian_nb,logreg,knn,gbt (stand-in)] meta=gbt (stand-in) folds=" +
         std::to_string(n_folds_) + " seed=" + std::to_string(seed_);
}

}  // namespace neuma::classical
