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

namespace neuma::classical {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Labels Classifier::predict(const MatrixXd& x) const {
  const VectorXd p = predict_proba(x);
  Labels out(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(i)] = p[i] > 0.5 ? 1 : 0;
  return out;
}

MatrixXd Classifier::predict_proba_pairs(const MatrixXd& x) const {
  const VectorXd p = predict_proba(x);
  MatrixXd out(p.size(), 2);
  out.col(0) = (1.0 - p.array()).matrix();
  out.col(1) = p;
  return out;
}

void check_training_set(const MatrixXd& x, const Labels& y) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw Error("training set: row/label count mismatch");
  if (y.empty()) throw Error("training set: empty");
  bool seen[2] = {false, false};
  for (int v : y) {
    if (v != 0 && v != 1) throw Error("training set: labels must be 0 or 1");
    seen[v] = true;
  }
  if (!seen[0] || !seen[1]) throw Error("degenerate labels: both classes must be present");
  if (!x.allFinite()) throw Error("training set: non-finite features");
}

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

LossAndGradient logistic_loss(const MatrixXd& x, const Labels& y, const VectorXd& w, double b,
                              double l2_lambda) {
  const auto n = static_cast<double>(x.rows());
  const VectorXd z = (x * w).array() + b;
  VectorXd residual(z.size());
  double loss = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const int yi = y[static_cast<std::size_t>(i)];
    // -[y log s(z) + (1-y) log(1-s(z))] = softplus(z) - y z
    loss += softplus(z[i]) - yi * z[i];
    residual[i] = sigmoid(z[i]) - yi;
  }
  LossAndGradient out;
  out.loss = loss / n + 0.5 * l2_lambda * w.squaredNorm();
  out.grad_w = x.transpose() * residual / n + l2_lambda * w;
  out.grad_b = residual.sum() / n;
  return out;
}

void LogisticRegression::fit(const MatrixXd& x, const Labels& y) {
  check_training_set(x, y);
  w_ = VectorXd::Zero(x.cols());
  b_ = 0.0;
  auto current = logistic_loss(x, y, w_, b_, options_.l2_lambda);
  iterations_ = 0;
  for (; iterations_ < options_.max_iters; ++iterations_) {
    if (!std::isfinite(current.loss)) throw Error("logreg: non-finite loss (check feature scaling)");
    const double gmax = std::max(current.grad_w.cwiseAbs().maxCoeff(), std::fabs(current.grad_b));
    if (gmax < options_.grad_tol) break;
    const double gnorm2 = current.grad_w.squaredNorm() + current.grad_b * current.grad_b;
    double step = options_.learning_rate;
    // Backtracking: halve until the Armijo condition holds.
    while (true) {
      const VectorXd w_new = w_ - step * current.grad_w;
      const double b_new = b_ - step * current.grad_b;
      auto next = logistic_loss(x, y, w_new, b_new, options_.l2_lambda);
      if (next.loss <= current.loss - 1e-4 * step * gnorm2 || step < 1e-12) {
        w_ = w_new;
        b_ = b_new;
        current = std::move(next);
        break;
      }
      step *= 0.5;
    }
  }
  if (!std::isfinite(current.loss)) throw Error("logreg: non-finite loss (check feature scaling)");
}

VectorXd LogisticRegression::decision_function(const MatrixXd& x) const {
  if (x.cols() != w_.size()) throw Error("logreg: feature count mismatch");
  return (x * w_).array() + b_;
}

VectorXd LogisticRegression::predict_proba(const MatrixXd& x) const {
  return decision_function(x).unaryExpr([](double z) { return sigmoid(z); });
}

std::string LogisticRegression::summary() const {
  return "logreg lambda=" + text::format_double(options_.l2_lambda, 6) +
         " iters=" + std::to_string(iterations_) + " bias=" + text::format_double(b_, 6);
}

}  // namespace neuma::classical
