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

#include "support.hpp"

#include "neuma/gnn/autograd.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace neuma::testing {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  std::random_device rd;
  std::ostringstream name;
  name << "neuma_" << tag << "_" << rd() << "_" << counter++;
  path_ = fs::temp_directory_path() / name.str();
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

MatrixXd random_normal(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

VectorXd sine(double freq_hz, double fs, Eigen::Index n, double amplitude, double phase) {
  VectorXd x(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    x[t] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(t) / fs + phase);
  }
  return x;
}

Labels random_labels(std::size_t n, double p1, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p1);
  Labels y(n);
  for (auto& v : y) v = coin(rng) ? 1 : 0;
  return y;
}

Eigen::VectorXcd direct_dft(const VectorXd& x) {
  const auto n = x.size();
  Eigen::VectorXcd out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

double analog_bandpass_gain(int order, double low_hz, double high_hz, double fs, double freq_hz) {
  auto warp = [fs](double f) { return 2.0 * fs * std::tan(std::numbers::pi * f / fs); };
  const double wl = warp(low_hz), wh = warp(high_hz), w = warp(freq_hz);
  const double w0sq = wl * wh, bw = wh - wl;
  if (w == 0.0) return 0.0;
  const double ratio = (w * w - w0sq) / (bw * w);
  return 1.0 / std::sqrt(1.0 + std::pow(ratio * ratio, order));
}

std::complex<double> polynomial_response(const VectorXd& b, const VectorXd& a, double freq_hz, double fs) {
  const double w = 2.0 * std::numbers::pi * freq_hz / fs;
  std::complex<double> num = 0.0, den = 0.0;
  for (Eigen::Index k = 0; k < b.size(); ++k) num += b[k] * std::polar(1.0, -w * static_cast<double>(k));
  for (Eigen::Index k = 0; k < a.size(); ++k) den += a[k] * std::polar(1.0, -w * static_cast<double>(k));
  return num / den;
}

int xcorr_peak_lag(const VectorXd& x, const VectorXd& y, int max_lag) {
  const auto n = x.size();
  int best_lag = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
      const Eigen::Index s = t + lag;
      if (s >= 0 && s < n) acc += x[t] * y[s];
    }
    if (acc > best) {
      best = acc;
      best_lag = lag;
    }
  }
  return best_lag;
}

PlainMoments two_pass_moments(const VectorXd& v) {
  const auto n = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : v) m2 += (x - mean) * (x - mean);
  for (double x : v) m3 += (x - mean) * (x - mean) * (x - mean);
  for (double x : v) m4 += (x - mean) * (x - mean) * (x - mean) * (x - mean);
  m2 /= n;
  m3 /= n;
  m4 /= n;
  return {mean, std::sqrt(m2), m3 / std::pow(m2, 1.5), m4 / (m2 * m2)};
}

MatrixXd brute_force_pearson(const MatrixXd& x) {
  const auto n = x.rows(), d = x.cols();
  MatrixXd r(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double mi = 0.0, mj = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) {
        mi += x(i, k);
        mj += x(j, k);
      }
      mi /= static_cast<double>(d);
      mj /= static_cast<double>(d);
      double num = 0.0, si = 0.0, sj = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) {
        num += (x(i, k) - mi) * (x(j, k) - mj);
        si += (x(i, k) - mi) * (x(i, k) - mi);
        sj += (x(j, k) - mj) * (x(j, k) - mj);
      }
      r(i, j) = num / std::sqrt(si * sj);
    }
  }
  return r;
}

namespace {

double t_density(double x, double df) {
  const double log_c = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) - 0.5 * std::log(df * std::numbers::pi);
  return std::exp(log_c - 0.5 * (df + 1.0) * std::log1p(x * x / df));
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double t_tail_quadrature(double t, double df) {
  const double t0 = std::abs(t);
  // x = t0 + u / (1 - u) maps [0, 1) onto [t0, inf).
  auto g = [&](double u) {
    if (u >= 1.0) return 0.0;
    const double x = t0 + u / (1.0 - u);
    return t_density(x, df) / ((1.0 - u) * (1.0 - u));
  };
  const double a = 0.0, b = 1.0;
  const double fa = g(a), fm = g(0.5), fb = g(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return 2.0 * simpson(g, a, b, fa, fm, fb, whole, 1e-12, 50);
}

Tally tally(const Labels& y_true, const Labels& y_pred) {
  Tally t;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] == 1 && y_pred[i] == 1) {
      ++t.tp;
    } else if (y_true[i] == 0 && y_pred[i] == 0) {
      ++t.tn;
    } else if (y_true[i] == 0) {
      ++t.fp;
    } else {
      ++t.fn;
    }
  }
  return t;
}

std::vector<int> plateau_reference(const std::vector<double>& accuracy, int patience) {
  std::vector<int> halvings;
  double best = -1e300;
  int waited = 0;
  for (std::size_t e = 0; e < accuracy.size(); ++e) {
    if (accuracy[e] > best) {
      best = accuracy[e];
      waited = 0;
      continue;
    }
    waited += 1;
    if (waited == patience) {
      halvings.push_back(static_cast<int>(e) + 1);
      waited = 0;
    }
  }
  return halvings;
}

EarlyStopReference early_stop_reference(const std::vector<double>& loss, int patience) {
  EarlyStopReference ref;
  double best = 1e300;
  int waited = 0;
  for (std::size_t e = 0; e < loss.size(); ++e) {
    const int epoch = static_cast<int>(e) + 1;
    if (loss[e] < best) {
      best = loss[e];
      ref.best_epoch = epoch;
      waited = 0;
    } else {
      waited += 1;
    }
    if (waited == patience) {
      ref.stop_epoch = epoch;
      return ref;
    }
  }
  return ref;
}

graph::BrainGraph random_graph(Eigen::Index dim, int label, std::uint64_t seed) {
  graph::BrainGraph g;
  g.segment_id = "g" + std::to_string(seed);
  g.label = label;
  g.node_features = random_normal(kNumChannels, dim, seed);
  g.adjacency = graph::apply_edge_transform(graph::pearson_adjacency(g.node_features), graph::EdgeTransform::Abs);
  return g;
}

graph::BrainGraph permute_graph(const graph::BrainGraph& g, const std::vector<int>& perm) {
  const auto n = g.n_nodes();
  graph::BrainGraph out = g;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto pi = perm[static_cast<std::size_t>(i)];
    out.node_features.row(pi) = g.node_features.row(i);
    for (Eigen::Index j = 0; j < n; ++j) out.adjacency(pi, perm[static_cast<std::size_t>(j)]) = g.adjacency(i, j);
  }
  return out;
}

namespace {

struct LossSample {
  double loss;
  std::uint64_t digest;
};

LossSample evaluate(const gnn::Model& model, const gnn::GraphBatch& batch, const std::vector<double>& weights,
                    std::uint64_t dropout_seed) {
  gnn::Tape tape;
  std::mt19937_64 rng(dropout_seed);
  const gnn::Var logits = model.forward(tape, batch, true, &rng);
  const gnn::Var loss = gnn::weighted_cross_entropy(logits, batch.y, weights);
  return {loss.value()(0, 0), tape.branch_digest()};
}

}  // namespace

GradientCheck check_gradients(const gnn::Model& model, const gnn::GraphBatch& batch,
                              const std::vector<double>& class_weights, double step, std::uint64_t dropout_seed,
                              double floor) {
  const auto params = model.parameters();
  for (auto* p : params) p->zero_grad();
  std::uint64_t base_digest = 0;
  double base_loss = 0.0;
  {
    gnn::Tape tape;
    std::mt19937_64 rng(dropout_seed);
    const gnn::Var logits = model.forward(tape, batch, true, &rng);
    const gnn::Var loss = gnn::weighted_cross_entropy(logits, batch.y, class_weights);
    base_loss = loss.value()(0, 0);
    base_digest = tape.branch_digest();
    tape.backward(loss);
  }
  GradientCheck out;
  for (auto* p : params) {
    for (Eigen::Index k = 0; k < p->value.size(); ++k) {
      double& w = p->value.data()[k];
      const double w0 = w;
      w = w0 + step;
      const LossSample plus = evaluate(model, batch, class_weights, dropout_seed);
      w = w0 - step;
      const LossSample minus = evaluate(model, batch, class_weights, dropout_seed);
      double numeric = 0.0;
      if (plus.digest == base_digest && minus.digest == base_digest) {
        numeric = (plus.loss - minus.loss) / (2.0 * step);
      } else if (plus.digest == base_digest || minus.digest == base_digest) {
        // Second-order one-sided difference on the side that stays on the base branch.
        const double sign = plus.digest == base_digest ? 1.0 : -1.0;
        const LossSample far = sign > 0 ? plus : minus;
        w = w0 + sign * 0.5 * step;
        const LossSample mid = evaluate(model, batch, class_weights, dropout_seed);
        if (mid.digest != base_digest) {
          w = w0;
          ++out.skipped;
          continue;
        }
        numeric = sign * (-3.0 * base_loss + 4.0 * mid.loss - far.loss) / step;
        ++out.one_sided;
      } else {
        w = w0;
        ++out.skipped;
        continue;
      }
      w = w0;
      const double analytic = p->grad.data()[k];
      const double rel =
          std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
      ++out.entries;
      if (rel > out.max_rel_error) {
        out.max_rel_error = rel;
        std::ostringstream where;
        where << p->name << "[" << k << "] analytic=" << analytic << " numeric=" << numeric;
        out.worst = where.str();
      }
    }
  }
  return out;
}

MatrixXd numeric_gradient(const std::function<double(const MatrixXd&)>& f, MatrixXd x, double step) {
  MatrixXd g(x.rows(), x.cols());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double x0 = x.data()[k];
    x.data()[k] = x0 + step;
    const double up = f(x);
    x.data()[k] = x0 - step;
    const double down = f(x);
    x.data()[k] = x0;
    g.data()[k] = (up - down) / (2.0 * step);
  }
  return g;
}

double max_relative_error(const MatrixXd& a, const MatrixXd& b, double floor) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double x = a.data()[k], y = b.data()[k];
    worst = std::max(worst, std::abs(x - y) / std::max({std::abs(x), std::abs(y), floor}));
  }
  return worst;
}

}  // namespace neuma::testing
