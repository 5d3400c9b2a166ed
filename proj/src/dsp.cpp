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

#include "neuma/dsp.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include <numbers>

namespace neuma::dsp {

using cd = std::complex<double>;

const std::vector<FrequencyBand>& standard_bands() {
  static const std::vector<FrequencyBand> bands = {
      {"delta", 0.5, 4.0}, {"theta", 4.0, 8.0}, {"alpha", 8.0, 13.0},
      {"beta", 13.0, 30.0}, {"gamma", 30.0, 45.0}};
  return bands;
}

namespace {

// Expands prod_i (z - r_i) into descending-power coefficients.
VectorXd poly_from_roots(const std::vector<cd>& roots) {
  std::vector<cd> c{1.0};
  for (const auto& r : roots) {
    std::vector<cd> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= r * c[i];
    }
    c = std::move(next);
  }
  VectorXd out(static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) out[static_cast<Eigen::Index>(i)] = c[i].real();
  return out;
}

}  // namespace

IirFilter design_butterworth_bandpass(int order, double low_hz, double high_hz, double fs) {
  if (order < 1) throw Error("butterworth: order must be >= 1");
  if (!(fs > 0.0) || !(low_hz > 0.0) || !(low_hz < high_hz) || !(high_hz < fs / 2.0)) {
    throw Error("butterworth: band edges out of range (need 0 < low < high < fs/2)");
  }
  const double pi = std::numbers::pi;

  // Analog lowpass prototype, unit cutoff.
  std::vector<cd> proto;
  for (int m = -order + 1; m < order; m += 2) {
    proto.push_back(-std::exp(cd(0.0, pi * m / (2.0 * order))));
  }

  const double fs2 = 2.0 * fs;
  const double wl = fs2 * std::tan(pi * low_hz / fs);
  const double wh = fs2 * std::tan(pi * high_hz / fs);
  const double bw = wh - wl;
  const double w0 = std::sqrt(wl * wh);

  // Lowpass -> bandpass: each pole splits in two, `order` zeros land at s = 0.
  std::vector<cd> analog_poles;
  for (const auto& p : proto) {
    const cd scaled = p * bw / 2.0;
    const cd disc = std::sqrt(scaled * scaled - w0 * w0);
    analog_poles.push_back(scaled + disc);
    analog_poles.push_back(scaled - disc);
  }
  double gain = std::pow(bw, order);

  // Bilinear transform.
  std::vector<cd> zeros;
  std::vector<cd> poles_z;
  cd num = 1.0;
  cd den = 1.0;
  for (int i = 0; i < order; ++i) {
    zeros.emplace_back(1.0, 0.0);  // s = 0
    num *= fs2;
  }
  for (int i = 0; i < order; ++i) zeros.emplace_back(-1.0, 0.0);  // s = infinity
  for (const auto& p : analog_poles) {
    poles_z.push_back((fs2 + p) / (fs2 - p));
    den *= (fs2 - p);
  }
  gain *= (num / den).real();

  IirFilter f;
  f.b = poly_from_roots(zeros) * gain;
  f.a = poly_from_roots(poles_z);
  f.low_hz = low_hz;
  f.high_hz = high_hz;
  f.fs = fs;
  return f;
}

std::complex<double> frequency_response(const IirFilter& filter, double freq_hz) {
  const double w = 2.0 * std::numbers::pi * freq_hz / filter.fs;
  const cd zinv = std::exp(cd(0.0, -w));
  cd num = 0.0;
  cd den = 0.0;
  cd zk = 1.0;
  for (Eigen::Index k = 0; k < std::max(filter.b.size(), filter.a.size()); ++k) {
    if (k < filter.b.size()) num += filter.b[k] * zk;
    if (k < filter.a.size()) den += filter.a[k] * zk;
    zk *= zinv;
  }
  return num / den;
}

Eigen::VectorXcd poles(const IirFilter& filter) {
  const int n = filter.order();
  if (n < 1) return {};
  MatrixXd companion = MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) companion(0, j) = -filter.a[j + 1] / filter.a[0];
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<MatrixXd> solver(companion, false);
  return solver.eigenvalues();
}

VectorXd lfilter(const IirFilter& filter, const Eigen::Ref<const VectorXd>& x,
                 const Eigen::Ref<const VectorXd>& zi) {
  const Eigen::Index n_state = filter.a.size() - 1;
  VectorXd b = VectorXd::Zero(n_state + 1);
  b.head(filter.b.size()) = filter.b / filter.a[0];
  const VectorXd a = filter.a / filter.a[0];
  VectorXd z = zi;
  VectorXd y(x.size());
  for (Eigen::Index t = 0; t < x.size(); ++t) {
    const double xt = x[t];
    const double yt = b[0] * xt + (n_state > 0 ? z[0] : 0.0);
    for (Eigen::Index i = 0; i + 1 < n_state; ++i) z[i] = b[i + 1] * xt - a[i + 1] * yt + z[i + 1];
    if (n_state > 0) z[n_state - 1] = b[n_state] * xt - a[n_state] * yt;
    y[t] = yt;
  }
  return y;
}

VectorXd lfilter_zi(const IirFilter& filter) {
  const Eigen::Index n = filter.a.size() - 1;
  VectorXd b = VectorXd::Zero(n + 1);
  b.head(filter.b.size()) = filter.b / filter.a[0];
  const VectorXd a = filter.a / filter.a[0];
  // (I - C^T) zi = b[1:] - a[1:] * b[0], C the companion matrix of a.
  MatrixXd companion_t = MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) companion_t(j, 0) = -a[j + 1];
  for (Eigen::Index i = 1; i < n; ++i) companion_t(i - 1, i) = 1.0;
  const MatrixXd lhs = MatrixXd::Identity(n, n) - companion_t;
  const VectorXd rhs = b.tail(n) - a.tail(n) * b[0];
  return lhs.partialPivLu().solve(rhs);
}

VectorXd filtfilt(const IirFilter& filter, const Eigen::Ref<const VectorXd>& x) {
  const Eigen::Index pad = filtfilt_padlen(filter);
  const Eigen::Index n = x.size();
  if (n <= pad) {
    throw Error("filtfilt: sequence too short for padding (" + std::to_string(n) + " <= " +
                std::to_string(pad) + ")");
  }
  VectorXd ext(n + 2 * pad);
  for (Eigen::Index i = 0; i < pad; ++i) ext[i] = 2.0 * x[0] - x[pad - i];
  ext.segment(pad, n) = x;
  for (Eigen::Index i = 0; i < pad; ++i) ext[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];

  const VectorXd zi = lfilter_zi(filter);
  VectorXd forward = lfilter(filter, ext, zi * ext[0]);
  VectorXd reversed = forward.reverse();
  VectorXd backward = lfilter(filter, reversed, zi * reversed[0]);
  return backward.reverse().segment(pad, n);
}

Eigen::VectorXcd fft(const Eigen::Ref<const VectorXd>& x) {
  Eigen::FFT<double> engine;
  const VectorXd in = x;
  Eigen::VectorXcd out;
  engine.fwd(out, in);
  return out;
}

Spectrum fft_magnitude(const Eigen::Ref<const VectorXd>& x, double fs) {
  if (x.size() < 2) throw Error("fft_magnitude: need at least 2 samples");
  const Eigen::VectorXcd full = fft(x);
  const Eigen::Index n = x.size();
  const Eigen::Index bins = n / 2 + 1;
  Spectrum s;
  s.kind = SpectrumKind::FftMagnitude;
  s.frequencies = VectorXd::LinSpaced(bins, 0.0, static_cast<double>(bins - 1)) * (fs / n);
  s.values = full.head(bins).cwiseAbs();
  return s;
}

VectorXd window_coefficients(Window window, int n) {
  VectorXd w(n);
  if (window == Window::Rectangular) return VectorXd::Ones(n);
  // periodic Hann
  for (int k = 0; k < n; ++k) w[k] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * k / n);
  return w;
}

Spectrum welch_psd(const Eigen::Ref<const VectorXd>& x, double fs, const WelchConfig& config) {
  const Eigen::Index n = x.size();
  const Eigen::Index seg = config.segment_len;
  if (seg < 1) throw Error("welch_psd: segment_len must be >= 1");
  if (seg > n) throw Error("welch_psd: segment_len " + std::to_string(seg) +
                           " exceeds signal length " + std::to_string(n));
  if (!(config.overlap >= 0.0 && config.overlap < 1.0)) {
    throw Error("welch_psd: overlap must be in [0, 1)");
  }
  const Eigen::Index noverlap = static_cast<Eigen::Index>(std::floor(seg * config.overlap));
  const Eigen::Index step = seg - noverlap;
  const VectorXd w = window_coefficients(config.window, static_cast<int>(seg));
  const double scale = 1.0 / (fs * w.squaredNorm());
  const Eigen::Index bins = seg / 2 + 1;

  Eigen::FFT<double> engine;
  VectorXd acc = VectorXd::Zero(bins);
  Eigen::VectorXcd spec;
  int count = 0;
  for (Eigen::Index start = 0; start + seg <= n; start += step) {
    const VectorXd frame = x.segment(start, seg).cwiseProduct(w);
    engine.fwd(spec, frame);
    acc += spec.head(bins).cwiseAbs2();
    ++count;
  }
  acc *= scale / count;
  // One-sided: fold negative frequencies except DC and (even length) Nyquist.
  const Eigen::Index last = (seg % 2 == 0) ? bins - 1 : bins;
  for (Eigen::Index k = 1; k < last; ++k) acc[k] *= 2.0;

  Spectrum s;
  s.kind = SpectrumKind::WelchPsd;
  s.frequencies = VectorXd::LinSpaced(bins, 0.0, static_cast<double>(bins - 1)) * (fs / seg);
  s.values = acc;
  return s;
}

Spectrum welch_psd(const Eigen::Ref<const VectorXd>& x, double fs) {
  WelchConfig config;
  config.segment_len = static_cast<int>(std::min<Eigen::Index>(256, x.size()));
  return welch_psd(x, fs, config);
}

}  // namespace neuma::dsp
