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

#include <cmath>
#include <complex>
#include <string>

namespace neuma::dsp {

/// Digital IIR filter in transfer-function form, a[0] == 1.
struct IirFilter {
  VectorXd b;
  VectorXd a;
  double low_hz = 0.0;
  double high_hz = 0.0;
  double fs = 0.0;

  /// Transfer-function order (len(a) - 1).
  int order() const { return static_cast<int>(a.size()) - 1; }
};

enum class SpectrumKind { FftMagnitude, WelchPsd };

struct Spectrum {
  VectorXd frequencies;
  VectorXd values;
  SpectrumKind kind = SpectrumKind::FftMagnitude;
};

template <class Scalar>
struct Moments {
  Scalar mean{};
  Scalar std{};
  Scalar skewness{};
  Scalar kurtosis{};
};

enum class Window { Hann, Rectangular };

struct WelchConfig {
  int segment_len = 256;  // feature extraction clips this to the segment length
  double overlap = 0.5;
  Window window = Window::Hann;
};

struct FrequencyBand {
  std::string name;
  double low_hz;
  double high_hz;
};

/// delta 0.5-4, theta 4-8, alpha 8-13, beta 13-30, gamma 30-45 Hz.
const std::vector<FrequencyBand>& standard_bands();

/// Analog Butterworth prototype -> bandpass -> bilinear (pre-warped band edges).
/// Throws unless 0 < low_hz < high_hz < fs/2.
IirFilter design_butterworth_bandpass(int order, double low_hz, double high_hz, double fs);

/// H(e^{jw}) evaluated directly from the coefficients at `freq_hz`.
std::complex<double> frequency_response(const IirFilter& filter, double freq_hz);

/// Poles of the filter (roots of a).
Eigen::VectorXcd poles(const IirFilter& filter);

/// Direct-form II transposed single pass with initial state `zi`.
VectorXd lfilter(const IirFilter& filter, const Eigen::Ref<const VectorXd>& x,
                 const Eigen::Ref<const VectorXd>& zi);

/// Steady-state initial conditions for a unit step input.
VectorXd lfilter_zi(const IirFilter& filter);

/// Padding used by filtfilt on each side: 3 * (transfer-function order + 1).
inline int filtfilt_padlen(const IirFilter& filter) { return 3 * (filter.order() + 1); }

/// Zero-phase forward-backward filtering with odd-reflection padding.
/// Requires len(x) > filtfilt_padlen(filter).
VectorXd filtfilt(const IirFilter& filter, const Eigen::Ref<const VectorXd>& x);

/// One-sided magnitude spectrum |X_k| of the unwindowed sequence, k = 0..floor(n/2).
Spectrum fft_magnitude(const Eigen::Ref<const VectorXd>& x, double fs);

/// Full complex DFT (two-sided), exposed for Parseval checks.
Eigen::VectorXcd fft(const Eigen::Ref<const VectorXd>& x);

/// Averaged modified periodogram with one-sided density scaling 1/(fs * sum w^2).
/// No detrending. Throws if config.segment_len > len(x).
Spectrum welch_psd(const Eigen::Ref<const VectorXd>& x, double fs, const WelchConfig& config);

/// Welch with the default parameters: Hann, min(256, n), 50% overlap.
Spectrum welch_psd(const Eigen::Ref<const VectorXd>& x, double fs);

VectorXd window_coefficients(Window window, int n);

/// Population moments with Pearson (non-excess) kurtosis. Degenerate variance
/// (m2 < 1e-12 * mean^2 + 1e-24) reports zero skewness and kurtosis.
template <class Derived>
Moments<typename Derived::Scalar> moments(const Eigen::DenseBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  const auto n = values.size();
  if (n < 1) throw Error("moments: empty input");
  const Scalar mean = values.sum() / static_cast<Scalar>(n);
  const auto centered = (values.derived().array() - mean).eval();
  const auto sq = centered.square().eval();
  const Scalar m2 = sq.sum() / static_cast<Scalar>(n);
  const Scalar m3 = (sq * centered).sum() / static_cast<Scalar>(n);
  const Scalar m4 = sq.square().sum() / static_cast<Scalar>(n);

  Moments<Scalar> out;
  out.mean = mean;
  out.std = std::sqrt(m2);
  if (m2 < Scalar(1e-12) * mean * mean + Scalar(1e-24)) return out;
  out.skewness = m3 / std::pow(m2, Scalar(1.5));
  out.kurtosis = m4 / (m2 * m2);
  return out;
}

}  // namespace neuma::dsp
