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

#include "neuma/eval.hpp"
#include "neuma/gnn/architectures.hpp"
#include "neuma/graph.hpp"
#include "neuma/types.hpp"

#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace neuma::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

MatrixXd random_normal(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);
VectorXd sine(double freq_hz, double fs, Eigen::Index n, double amplitude = 1.0, double phase = 0.0);
Labels random_labels(std::size_t n, double p1, std::uint64_t seed);

// ------------------------------------------------------------------ oracles

/// Direct O(n^2) DFT summation.
Eigen::VectorXcd direct_dft(const VectorXd& x);

/// Magnitude of the analog Butterworth bandpass at the bilinear pre-warped
/// frequency: |H|^2 = 1 / (1 + ((W^2 - W0^2) / (W B))^(2N)).
double analog_bandpass_gain(int order, double low_hz, double high_hz, double fs, double freq_hz);

/// H(e^{jw}) as a ratio of polynomials in z^-1, summed term by term.
std::complex<double> polynomial_response(const VectorXd& b, const VectorXd& a, double freq_hz, double fs);

/// Lag (in samples) maximising the cross-correlation of y against x, searched in [-max_lag, max_lag].
int xcorr_peak_lag(const VectorXd& x, const VectorXd& y, int max_lag);

struct PlainMoments {
  double mean, std, skewness, kurtosis;
};
/// Two-pass moments with separate loops per power.
PlainMoments two_pass_moments(const VectorXd& v);

/// Double loop over r_ij = sum_k (x_ik - mean_i)(x_jk - mean_j) / sqrt(...).
MatrixXd brute_force_pearson(const MatrixXd& x);

/// Two-sided Student-t tail probability by adaptive Simpson quadrature of the density.
double t_tail_quadrature(double t, double df);

/// Confusion counts tallied with an explicit if/else ladder.
struct Tally {
  long tp = 0, tn = 0, fp = 0, fn = 0;
};
Tally tally(const Labels& y_true, const Labels& y_pred);

// ------------------------------------------------------------------ counter traces

/// Epoch numbers (1-based) at which a plateau scheduler with the given
/// patience halves the rate, replayed with a hand-written counter.
std::vector<int> plateau_reference(const std::vector<double>& accuracy, int patience);

struct EarlyStopReference {
  int stop_epoch = -1;  // -1: never stopped
  int best_epoch = 0;
};
EarlyStopReference early_stop_reference(const std::vector<double>& loss, int patience);

// ------------------------------------------------------------------ graphs and gradients

/// Random graph with 19 nodes: Gaussian node features and |Pearson| adjacency.
graph::BrainGraph random_graph(Eigen::Index dim, int label, std::uint64_t seed);

/// Same graph with node i moved to position perm[i].
graph::BrainGraph permute_graph(const graph::BrainGraph& g, const std::vector<int>& perm);

struct GradientCheck {
  double max_rel_error = 0.0;
  std::string worst;     // parameter name and entry of the worst error
  long entries = 0;
  long one_sided = 0;    // entries where one perturbation crossed a kink
  long skipped = 0;      // entries where both perturbations crossed a kink
};

/// Compares backpropagated gradients of the weighted cross-entropy with
/// central differences for every parameter entry. Dropout masks are replayed
/// from `dropout_seed` on every evaluation. Relative error is
/// |g - fd| / max(|g|, |fd|, floor).
GradientCheck check_gradients(const gnn::Model& model, const gnn::GraphBatch& batch,
                              const std::vector<double>& class_weights, double step, std::uint64_t dropout_seed,
                              double floor = 1e-6);

/// Central-difference gradient of a scalar function of a matrix.
MatrixXd numeric_gradient(const std::function<double(const MatrixXd&)>& f, MatrixXd x, double step);

/// Worst entrywise |a - b| / max(|a|, |b|, floor).
double max_relative_error(const MatrixXd& a, const MatrixXd& b, double floor = 1e-8);

}  // namespace neuma::testing
