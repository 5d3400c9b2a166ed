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

#include "neuma/ingest.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace neuma::fixtures {

/// Seeded synthetic recordings: white background noise, a theta rhythm and a
/// 10 Hz alpha rhythm whose amplitude depends on the label.
struct FixtureOptions {
  int n_segments = 400;
  double class1_fraction = 0.5;
  double duration_s = 2.0;
  double sample_rate_hz = 300.0;
  double noise_std = 10.0;
  double theta_amplitude = 6.0;
  double alpha_amplitude[2] = {5.0, 15.0};
  double alpha_jitter = 0.2;  // per-channel relative amplitude spread
  double gain_log_std = 0.2;  // per-segment log-normal gain
  int n_short = 0;            // extra 0.4 s segments appended for filter tests
  int n_subjects = 10;
  std::uint64_t seed = 7;
};

/// 400 balanced segments with a large alpha contrast.
FixtureOptions separable(std::uint64_t seed = 7);
/// 400 segments, 79% class 0, barely different alpha power.
FixtureOptions imbalanced(std::uint64_t seed = 11);
/// Three segments for smoke tests.
FixtureOptions tiny(std::uint64_t seed = 3);

std::vector<SegmentRecord> synthetic_segments(const FixtureOptions& options);

/// Writes a store and returns the segments it contains.
std::vector<SegmentRecord> write_fixture(const std::filesystem::path& root, const FixtureOptions& options);

FixtureOptions fixture_by_name(const std::string& name, std::uint64_t seed);

}  // namespace neuma::fixtures
