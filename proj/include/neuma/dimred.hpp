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

#include "neuma/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace neuma::dimred {

enum class TransformKind { Prune, Scale, Pca, TtestSelect, ReduceStub };

std::string to_string(TransformKind kind);
TransformKind transform_kind_from_string(const std::string& name);

/// State learned on training rows. `apply` is pure.
struct FittedTransform {
  TransformKind kind = TransformKind::Scale;
  int input_dim = 0;
  int output_dim = 0;

  std::vector<int> indices;   // Prune: kept columns; TtestSelect: selected columns by rank
  RowVectorXd mean;           // Scale / Pca / ReduceStub
  RowVectorXd scale;          // Scale
  MatrixXd components;        // Pca / ReduceStub: input_dim x output_dim, orthonormal columns
  VectorXd explained_ratio;   // Pca / ReduceStub: every eigenvalue's share, non-increasing
  VectorXd statistics;        // TtestSelect: |t| of every input column
  VectorXd p_values;          // TtestSelect

  MatrixXd apply(const MatrixXd& x) const;
};

struct EigenDecomposition {
  VectorXd values;   // descending
  MatrixXd vectors;  // columns
  int sweeps = 0;
};

/// Cyclic Jacobi rotations on a symmetric matrix until the off-diagonal
/// Frobenius norm drops below tol * max(1, ||A||_F).
EigenDecomposition jacobi_eigen(const MatrixXd& symmetric, double tol = 1e-10, int max_sweeps = 100);

/// Pearson correlation of two columns; 0 when either has zero variance.
double column_correlation(const Eigen::Ref<const VectorXd>& a, const Eigen::Ref<const VectorXd>& b);

/// Scans pairs (i < j) in index order and drops j when |r_ij| > threshold and i is still kept.
FittedTransform correlation_prune_fit(const MatrixXd& x, double threshold = 0.9);

/// Per-column z-score; columns with std < 1e-12 are only centred.
FittedTransform standard_scale_fit(const MatrixXd& x);

/// Keeps the fewest components whose cumulative explained variance reaches the threshold.
FittedTransform pca_fit(const MatrixXd& x, double variance_threshold);

/// Exactly min(n_components, rank) components; this is the stand-in for Pipeline B's reducer.
FittedTransform pca_fit_components(const MatrixXd& x, int n_components);

struct TtestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

/// Welch's unequal-variance t-test of class 1 against class 0.
TtestResult welch_ttest(const Eigen::Ref<const VectorXd>& column, const Labels& y);

/// Columns with p < alpha ranked by |t| (ties: lower index), truncated to top_k.
FittedTransform ttest_select_fit(const MatrixXd& x, const Labels& y, int top_k = 100,
                                 double alpha = 0.05);

enum class PipelineKind { A, B, C };

std::string to_string(PipelineKind kind);
PipelineKind pipeline_kind_from_string(const std::string& name);
/// Report label, e.g. "B (stand-in reducer)".
std::string pipeline_label(PipelineKind kind);

struct StepSpec {
  TransformKind kind;
  double threshold = 0.0;  // prune |r| or PCA variance
  int count = 0;           // ttest top_k or reducer target dim
  double alpha = 0.05;
};

/// Fits the reducer slot: training matrix and target dimension in, transform out.
using ReducerFn = std::function<FittedTransform(const MatrixXd&, int)>;

class Pipeline {
 public:
  Pipeline(PipelineKind kind, std::vector<StepSpec> steps);

  PipelineKind kind() const { return kind_; }
  const std::vector<StepSpec>& steps() const { return steps_; }
  const std::vector<FittedTransform>& fitted() const { return fitted_; }

  void set_reducer(ReducerFn reducer) { reducer_ = std::move(reducer); }

  /// Fits every step in order on the training rows only.
  void fit(const MatrixXd& x, const Labels& y);
  MatrixXd apply(const MatrixXd& x) const;
  MatrixXd fit_apply(const MatrixXd& x, const Labels& y);

  int output_dim() const;

  std::string serialize() const;
  static Pipeline deserialize(const std::string& text);

 private:
  PipelineKind kind_;
  std::vector<StepSpec> steps_;
  std::vector<FittedTransform> fitted_;
  ReducerFn reducer_;
};

/// A = prune(0.9) -> scale -> pca(0.90); B = prune(0.9) -> scale -> reducer(50);
/// C = ttest(100, 0.05) -> scale -> pca(0.95).
Pipeline build_pipeline(PipelineKind kind);

}  // namespace neuma::dimred
