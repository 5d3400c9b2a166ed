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

#include "neuma/text_io.hpp"

#include <cmath>
#include <numbers>

namespace neuma::classical {

void GaussianNb::fit(const MatrixXd& x, const Labels& y) {
  check_training_set(x, y);
  const Eigen::Index d = x.cols();
  mean_ = MatrixXd::Zero(2, d);
  var_ = MatrixXd::Zero(2, d);
  double count[2] = {0, 0};
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int c = y[static_cast<std::size_t>(i)];
    mean_.row(c) += x.row(i);
    count[c] += 1;
  }
  for (int c = 0; c < 2; ++c) mean_.row(c) /= count[c];
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int c = y[static_cast<std::size_t>(i)];
    var_.row(c) += (x.row(i) - mean_.row(c)).array().square().matrix();
  }
  for (int c = 0; c < 2; ++c) var_.row(c) /= count[c];

  const RowVectorXd overall = (x.rowwise() - x.colwise().mean()).array().square().colwise().mean();
  const double max_var = d > 0 ? overall.maxCoeff() : 0.0;
  const double floor = max_var > 0.0 ? 1e-9 * max_var : 1e-9;
  var_ = var_.cwiseMax(floor);

  const double n = count[0] + count[1];
  log_prior_[0] = std::log(count[0] / n);
  log_prior_[1] = std::log(count[1] / n);
}

MatrixXd GaussianNb::joint_log_likelihood(const MatrixXd& x) const {
  if (x.cols() != mean_.cols()) throw Error("gaussian_nb: feature count mismatch");
  MatrixXd out(x.rows(), 2);
  for (int c = 0; c < 2; ++c) {
    const double log_norm = -0.5 * (2.0 * std::numbers::pi * var_.row(c).array()).log().sum();
    const MatrixXd diff = x.rowwise() - mean_.row(c);
    const VectorXd quad = (diff.array().square().rowwise() / var_.row(c).array()).rowwise().sum();
    out.col(c) = (log_prior_[c] + log_norm - 0.5 * quad.array()).matrix();
  }
  return out;
}

VectorXd GaussianNb::predict_proba(const MatrixXd& x) const {
  const MatrixXd jll = joint_log_likelihood(x);
  // P(1) = sigmoid(jll1 - jll0)
  VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out[i] = sigmoid(jll(i, 1) - jll(i, 0));
  return out;
}

std::string GaussianNb::summary() const {
  return "gaussian_nb prior1=" + text::format_double(std::exp(log_prior_[1]), 6);
}

}  // namespace neuma::classical
