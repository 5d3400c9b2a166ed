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

#include "neuma/dsp.hpp"
#include "neuma/ingest.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace neuma::features {

struct FeatureConfig {
  std::vector<dsp::FrequencyBand> bands = dsp::standard_bands();
  int filter_order = 3;
  dsp::WelchConfig welch;
  bool include_dc = false;  // DC bin in the FFT/PSD statistics
  bool filter_short = true;
  double min_duration_s = 0.5;

  /// Per-electrode feature count: bands x 8 statistics.
  int node_dim() const { return static_cast<int>(bands.size()) * kNumStatistics; }
};

/// fft_mean, fft_std, fft_skew, fft_kurt, psd_mean, psd_std, psd_skew, psd_kurt
const std::vector<std::string>& statistic_names();

/// Column names `<channel>_<band>_<statistic>` in channel-major, band, statistic order.
std::vector<std::string> column_names(const std::vector<std::string>& channels,
                                      const FeatureConfig& config);

/// Per-electrode names `<band>_<statistic>`.
std::vector<std::string> node_feature_names(const FeatureConfig& config);

struct FeatureRow {
  std::string segment_id;
  Label label = Label::NoBuy;
  VectorXd values;
};

struct NodeFeatureMatrix {
  std::string segment_id;
  Label label = Label::NoBuy;
  MatrixXd values;  // channels x node_dim
};

struct FeatureMatrix {
  std::vector<std::string> segment_ids;
  Labels labels;
  std::vector<std::string> columns;
  MatrixXd values;  // segments x columns
};

/// The 8 statistics for every band of one channel, band-major.
VectorXd channel_features(const Eigen::Ref<const VectorXd>& signal, double fs,
                          const FeatureConfig& config);

NodeFeatureMatrix extract_node_features(const SegmentRecord& segment, const FeatureConfig& config);

/// Row-major flattening of the node features: 19 x 5 x 8 = 760 values by default.
FeatureRow extract_feature_row(const SegmentRecord& segment, const FeatureConfig& config);

/// Reads, filters (when enabled) and extracts every segment in manifest order.
/// A failing segment aborts with its segment_id in the message.
FeatureMatrix build_feature_matrix(const SegmentStore& store, const FeatureConfig& config,
                                   int jobs = 1);

/// Node features for every (filtered) segment in manifest order.
std::vector<NodeFeatureMatrix> build_node_features(const SegmentStore& store,
                                                   const FeatureConfig& config, int jobs = 1);

/// `segment_id,label,<columns...>`
void write_feature_csv(const std::filesystem::path& path, const FeatureMatrix& matrix);
FeatureMatrix read_feature_csv(const std::filesystem::path& path);

/// `node_features/<segment_id>.csv`: header `channel,<names...>`, one row per electrode.
void write_node_features(const std::filesystem::path& dir, const NodeFeatureMatrix& nodes,
                         const std::vector<std::string>& channels,
                         const std::vector<std::string>& names);

}  // namespace neuma::features
