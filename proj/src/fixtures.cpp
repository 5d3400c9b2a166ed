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

#include "neuma/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace neuma::fixtures {

FixtureOptions separable(std::uint64_t seed) {
  FixtureOptions o;
  o.seed = seed;
  return o;
}

FixtureOptions imbalanced(std::uint64_t seed) {
  FixtureOptions o;
  o.class1_fraction = 0.21;
  o.alpha_amplitude[0] = 6.0;
  o.alpha_amplitude[1] = 6.6;
  o.alpha_jitter = 0.3;
  o.gain_log_std = 0.35;
  o.seed = seed;
  return o;
}

FixtureOptions tiny(std::uint64_t seed) {
  FixtureOptions o;
  o.n_segments = 3;
  o.class1_fraction = 1.0 / 3.0;
  o.n_subjects = 1;
  o.seed = seed;
  return o;
}

FixtureOptions fixture_by_name(const std::string& name, std::uint64_t seed) {
  if (name == "separable") return separable(seed);
  if (name == "imbalanced") return imbalanced(seed);
  if (name == "tiny") return tiny(seed);
  throw Error("unknown fixture '" + name + "' (expected separable, imbalanced or tiny)");
}

namespace {

SegmentRecord make_segment(const FixtureOptions& o, int index, Label label, double duration, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  SegmentRecord s;
  char id[32];
  std::snprintf(id, sizeof(id), "seg%05d", index);
  s.segment_id = id;
  s.subject_id = "S" + std::to_string(1 + index % std::max(1, o.n_subjects));
  s.page_id = 1 + (index / 24) % 6;
  s.product_id = 1 + index % 144;
  s.label = label;
  s.sample_rate_hz = o.sample_rate_hz;
  s.channel_names = standard_montage();
  const auto n = static_cast<Eigen::Index>(std::lround(duration * o.sample_rate_hz));
  s.data.resize(kNumChannels, n);
  const double gain = std::exp(o.gain_log_std * normal(rng));
  const double alpha = o.alpha_amplitude[static_cast<int>(label)];
  for (int c = 0; c < kNumChannels; ++c) {
    const double a = alpha * std::max(0.0, 1.0 + o.alpha_jitter * normal(rng));
    const double th = o.theta_amplitude * std::max(0.0, 1.0 + 0.3 * normal(rng));
    const double pa = phase(rng);
    const double pt = phase(rng);
    const double f_theta = 5.0 + 2.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (Eigen::Index t = 0; t < n; ++t) {
      const double time = static_cast<double>(t) / o.sample_rate_hz;
      s.data(c, t) = gain * (o.noise_std * normal(rng) + a * std::sin(2.0 * std::numbers::pi * 10.0 * time + pa) +
                             th * std::sin(2.0 * std::numbers::pi * f_theta * time + pt));
    }
  }
  return s;
}

}  // namespace

std::vector<SegmentRecord> synthetic_segments(const FixtureOptions& o) {
  if (o.n_segments < 1) throw Error("fixture: n_segments must be >= 1");
  if (!(o.class1_fraction >= 0.0 && o.class1_fraction <= 1.0)) throw Error("fixture: class1_fraction out of range");
  std::mt19937_64 rng(o.seed);
  const auto n1 = static_cast<int>(std::lround(o.class1_fraction * o.n_segments));
  std::vector<Label> labels(static_cast<std::size_t>(o.n_segments), Label::NoBuy);
  for (int i = 0; i < n1; ++i) labels[static_cast<std::size_t>(i)] = Label::Buy;
  std::shuffle(labels.begin(), labels.end(), rng);
  std::vector<SegmentRecord> out;
  out.reserve(static_cast<std::size_t>(o.n_segments + o.n_short));
  for (int i = 0; i < o.n_segments; ++i) {
    out.push_back(make_segment(o, i, labels[static_cast<std::size_t>(i)], o.duration_s, rng));
  }
  for (int i = 0; i < o.n_short; ++i) {
    out.push_back(make_segment(o, o.n_segments + i, i % 2 ? Label::Buy : Label::NoBuy, 0.4, rng));
  }
  return out;
}

std::vector<SegmentRecord> write_fixture(const std::filesystem::path& root, const FixtureOptions& options) {
  auto segments = synthetic_segments(options);
  write_store(root, segments);
  return segments;
}

}  // namespace neuma::fixtures
