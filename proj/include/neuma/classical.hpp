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

#include "neuma/dimred.hpp"
#include "neuma/types.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace neuma::classical {

enum class Family { LogReg, Knn, GaussianNb, RandomForest, Gbt, Stacking };

std::string to_string(Family family);
Family family_from_string(const std::string& name);
/// Row label used in reports ("LR", "KNN", "gbt (stand-in)", ...).
std::string display_name(Family family);

using Hyperparameters = std::map<std::string, double>;

std::string format_hyperparameters(const Hyperparameters& params);

struct ClassifierSpec {
  Family family = Family::LogReg;
  Hyperparameters params;
  std::uint64_t seed = 0;

  double get(const std::string& name, double fallback) const;
};

/// Fitted binary classifier. Probabilities are for class 1; labels are
/// 1 only when that probability is strictly above 0.5.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual Family family() const = 0;
  virtual void fit(const MatrixXd& x, const Labels& y) = 0;
  virtual VectorXd predict_proba(const MatrixXd& x) const = 0;
  virtual std::string summary() const = 0;

  Labels predict(const MatrixXd& x) const;
  /// n x 2 matrix of [P(class 0), P(class 1)].
  MatrixXd predict_proba_pairs(const MatrixXd& x) const;
};

/// Validates a training set: matching sizes, labels in {0,1}, both classes present.
void check_training_set(const MatrixXd& x, const Labels& y);

double sigmoid(double z);

// ---------------------------------------------------------------- logistic regression

struct LogRegOptions {
  double l2_lambda = 0.01;
  int max_iters = 2000;
  double learning_rate = 1.0;
  double grad_tol = 1e-6;
};

struct LossAndGradient {
  double loss = 0.0;
  VectorXd grad_w;
  double grad_b = 0.0;
};

/// Mean logistic loss + lambda * ||w||^2 / 2 (bias not penalised).
LossAndGradient logistic_loss(const MatrixXd& x, const Labels& y, const VectorXd& w, double b,
                              double l2_lambda);

class LogisticRegression final : public Classifier {
 public:
  explicit LogisticRegression(LogRegOptions options = {}) : options_(options) {}

  Family family() const override { return Family::LogReg; }
  void fit(const MatrixXd& x, const Labels& y) override;
  VectorXd predict_proba(const MatrixXd& x) const override;
  VectorXd decision_function(const MatrixXd& x) const;
  std::string summary() const override;

  const VectorXd& weights() const { return w_; }
  double bias() const { return b_; }
  int iterations() const { return iterations_; }

 private:
  LogRegOptions options_;
  VectorXd w_;
  double b_ = 0.0;
  int iterations_ = 0;
};

// ---------------------------------------------------------------- k nearest neighbours

class Knn final : public Classifier {
 public:
  explicit Knn(int k = 5) : k_(k) {}

  Family family() const override { return Family::Knn; }
  void fit(const MatrixXd& x, const Labels& y) override;
  VectorXd predict_proba(const MatrixXd& x) const override;
  std::string summary() const override;

  /// Training indices of the k nearest points, ordered by (distance, index).
  std::vector<int> neighbours(const Eigen::Ref<const RowVectorXd>& query) const;

 private:
  int k_;
  MatrixXd x_;
  Labels y_;
};

// ---------------------------------------------------------------- gaussian naive bayes

class GaussianNb final : public Classifier {
 public:
  Family family() const override { return Family::GaussianNb; }
  void fit(const MatrixXd& x, const Labels& y) override;
  VectorXd predict_proba(const MatrixXd& x) const override;
  std::string summary() const override;

  /// Per-row log P(class) + sum log N(x_j; mu_cj, var_cj), n x 2.
  MatrixXd joint_log_likelihood(const MatrixXd& x) const;

 private:
  MatrixXd mean_;      // 2 x d
  MatrixXd var_;       // 2 x d
  double log_prior_[2] = {0, 0};
};

// ---------------------------------------------------------------- trees

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct Tree {
  std::vector<TreeNode> nodes;

  double predict(const Eigen::Ref<const RowVectorXd>& row) const;
  int depth() const;
  int leaves() const;
};

struct TreeOptions {
  int max_depth = -1;       // < 0: unlimited
  int min_leaf = 1;
  int max_features = 0;     // features tried per node; 0 = all
  double l2 = 1.0;          // Newton trees only
  double min_hessian = 1.0; // Newton trees only
};

/// CART on Gini impurity; leaf value = fraction of class 1. `rows` may repeat (bootstrap).
Tree fit_gini_tree(const MatrixXd& x, const Labels& y, const std::vector<int>& rows,
                   const TreeOptions& options, std::mt19937_64& rng);

/// Second-order regression tree: gain from G^2/(H+l2), leaf value -G/(H+l2).
/// `rows` must be unique.
Tree fit_newton_tree(const MatrixXd& x, const VectorXd& grad, const VectorXd& hess,
                     const std::vector<int>& rows, const TreeOptions& options);

struct ForestOptions {
  int n_trees = 100;
  int max_depth = -1;
  int min_leaf = 1;
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

class RandomForest final : public Classifier {
 public:
  explicit RandomForest(ForestOptions options = {}) : options_(options) {}

  Family family() const override { return Family::RandomForest; }
  void fit(const MatrixXd& x, const Labels& y) override;
  /// Fraction of trees voting class 1.
  VectorXd predict_proba(const MatrixXd& x) const override;
  std::string summary() const override;

  const std::vector<Tree>& trees() const { return trees_; }

 private:
  ForestOptions options_;
  std::vector<Tree> trees_;
};

struct GbtOptions {
  int n_rounds = 100;
  int max_depth = 3;
  double learning_rate = 0.1;
  double l2 = 1.0;
  double min_hessian = 1.0;
  std::uint64_t seed = 0;
};

class GradientBoostedTrees final : public Classifier {
 public:
  explicit GradientBoostedTrees(GbtOptions options = {}) : options_(options) {}

  Family family() const override { return Family::Gbt; }
  void fit(const MatrixXd& x, const Labels& y) override;
  VectorXd predict_proba(const MatrixXd& x) const override;
  VectorXd raw_score(const MatrixXd& x) const;
  std::string summary() const override;

  double base_score() const { return base_score_; }
  /// Mean training log-loss after each round (index 0 = prior only).
  const std::vector<double>& training_loss() const { return training_loss_; }

 private:
  GbtOptions options_;
  double base_score_ = 0.0;
  std::vector<Tree> trees_;
  std::vector<double> training_loss_;
};

// ---------------------------------------------------------------- stacking

class Stacking final : public Classifier {
 public:
  explicit Stacking(std::uint64_t seed = 0, int n_folds = 5) : seed_(seed), n_folds_(n_folds) {}

  Family family() const override { return Family::Stacking; }
  void fit(const MatrixXd& x, const Labels& y) override;
  VectorXd predict_proba(const MatrixXd& x) const override;
  std::string summary() const override;

  /// Out-of-fold class-1 probabilities of the base learners, n x 4
  /// (gaussian_nb, logreg, knn, gbt).
  const MatrixXd& meta_features() const { return meta_; }
  /// Fold that produced each meta row; the producing models never saw that row.
  const std::vector<int>& meta_fold() const { return meta_fold_; }
  /// Training rows of each fold's base models.
  const std::vector<std::vector<int>>& fold_training_rows() const { return fold_train_rows_; }

  MatrixXd base_probabilities(const MatrixXd& x) const;
  static std::vector<std::unique_ptr<Classifier>> make_base_learners(std::uint64_t seed);

 private:
  std::uint64_t seed_;
  int n_folds_;
  std::vector<std::unique_ptr<Classifier>> base_;
  std::unique_ptr<GradientBoostedTrees> meta_model_;
  MatrixXd meta_;
  std::vector<int> meta_fold_;
  std::vector<std::vector<int>> fold_train_rows_;
};

// ---------------------------------------------------------------- factory and search

/// Builds an unfitted classifier; unknown hyperparameters are rejected.
std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec);

std::unique_ptr<Classifier> train(const ClassifierSpec& spec, const MatrixXd& x, const Labels& y);

/// Cartesian products of the documented default grids, in declaration order.
std::vector<Hyperparameters> default_grid(Family family);

/// Training and held-out rows of one CV fold, already passed through the
/// fold's own pipeline fit when one is used.
struct CvFold {
  MatrixXd x_train;
  Labels y_train;
  MatrixXd x_held;
  Labels y_held;
};

std::vector<CvFold> make_cv_folds(const MatrixXd& x, const Labels& y, int n_folds, std::uint64_t seed,
                                  std::optional<dimred::PipelineKind> pipeline = std::nullopt);

struct CvRow {
  Hyperparameters params;
  std::vector<double> fold_scores;
  double mean_score = 0.0;
};

struct GridSearchResult {
  ClassifierSpec best;
  std::size_t best_index = 0;
  std::vector<CvRow> table;
};

/// Stratified n-fold CV over the grid with weighted F1 as the objective. When
/// `pipeline` is set it is refitted inside every training fold.
GridSearchResult grid_search(Family family, const std::vector<Hyperparameters>& grid,
                             const MatrixXd& x, const Labels& y, int n_folds, std::uint64_t seed,
                             std::optional<dimred::PipelineKind> pipeline = std::nullopt);

/// Same search over prepared folds, so several families can share one set of pipeline fits.
GridSearchResult grid_search(Family family, const std::vector<Hyperparameters>& grid,
                             const std::vector<CvFold>& folds, std::uint64_t seed);

std::string cv_table_csv(const GridSearchResult& result, std::uint64_t seed);

}  // namespace neuma::classical
