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

#include "neuma/features.hpp"

#include "neuma/parallel.hpp"
#include "neuma/text_io.hpp"

#include <cmath>

namespace neuma::features {

const std::vector<std::string>& statistic_names() {
  static const std::vector<std::string> names = {"fft_mean", "fft_std", "fft_skew", "fft_kurt",
                                                 "psd_mean", "psd_std", "psd_skew", "psd_kurt"};
  return names;
}

std::vector<std::string> node_feature_names(const FeatureConfig& config) {
  std::vector<std::string> names;
  for (const auto& band : config.bands) {
    for (const auto& stat : statistic_names()) names.push_back(band.name + "_" + stat);
  }
  return names;
}

std::vector<std::string> column_names(const std::vector<std::string>& channels,
                                      const FeatureConfig& config) {
  const auto per_node = node_feature_names(config);
  std::vector<std::string> names;
  names.reserve(channels.size() * per_node.size());
  for (const auto& ch : channels) {
    for (const auto& n : per_node) names.push_back(ch + "_" + n);
  }
  return names;
}

namespace {

template <class Derived>
void put_moments(const Eigen::DenseBase<Derived>& values, double* out) {
  const auto m = dsp::moments(values);
  out[0] = m.mean;
  out[1] = m.std;
  out[2] = m.skewness;
  out[3] = m.kurtosis;
}

std::vector<dsp::IirFilter> design_filters(const FeatureConfig& config, double fs) {
  std::vector<dsp::IirFilter> filters;
  for (const auto& band : config.bands) {
    filters.push_back(dsp::design_butterworth_bandpass(config.filter_order, band.low_hz,
                                                       band.high_hz, fs));
  }
  return filters;
}

VectorXd channel_features_with(const Eigen::Ref<const VectorXd>& signal, double fs,
                               const FeatureConfig& config,
                               const std::vector<dsp::IirFilter>& filters) {
  VectorXd out(config.node_dim());
  dsp::WelchConfig welch = config.welch;
  welch.segment_len = static_cast<int>(std::min<Eigen::Index>(welch.segment_len, signal.size()));
  const Eigen::Index skip = config.include_dc ? 0 : 1;
  for (std::size_t b = 0; b < filters.size(); ++b) {
    const VectorXd filtered = dsp::filtfilt(filters[b], signal);
    const auto fft = dsp::fft_magnitude(filtered, fs);
    const auto psd = dsp::welch_psd(filtered, fs, welch);
    double* slot = out.data() + b * kNumStatistics;
    put_moments(fft.values.tail(fft.values.size() - skip), slot);
    put_moments(psd.values.tail(std::max<Eigen::Index>(1, psd.values.size() - skip)), slot + 4);
  }
  return out;
}

}  // namespace

VectorXd channel_features(const Eigen::Ref<const VectorXd>& signal, double fs,
                          const FeatureConfig& config) {
  return channel_features_with(signal, fs, config, design_filters(config, fs));
}

NodeFeatureMatrix extract_node_features(const SegmentRecord& segment, const FeatureConfig& config) {
  if (segment.data.rows() != kNumChannels) {
    throw Error("segment " + segment.segment_id + ": expected 19 channels");
  }
  const auto filters = design_filters(config, segment.sample_rate_hz);
  NodeFeatureMatrix nodes;
  nodes.segment_id = segment.segment_id;
  nodes.label = segment.label;
  nodes.values.resize(segment.data.rows(), config.node_dim());
  for (Eigen::Index ch = 0; ch < segment.data.rows(); ++ch) {
    const VectorXd signal = segment.data.row(ch).transpose();
    nodes.values.row(ch) =
        channel_features_with(signal, segment.sample_rate_hz, config, filters).transpose();
  }
  if (!nodes.values.allFinite()) {
    throw Error("segment " + segment.segment_id + ": non-finite feature values");
  }
  return nodes;
}

FeatureRow extract_feature_row(const SegmentRecord& segment, const FeatureConfig& config) {
  const auto nodes = extract_node_features(segment, config);
  FeatureRow row;
  row.segment_id = nodes.segment_id;
  row.label = nodes.label;
  row.values.resize(nodes.values.size());
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      row.values.data(), nodes.values.rows(), nodes.values.cols()) = nodes.values;
  return row;
}

namespace {

std::vector<const ManifestRow*> selected_rows(const SegmentStore& store, const FeatureConfig& config) {
  std::vector<const ManifestRow*> rows;
  for (const auto& row : store.rows()) {
    if (!config.filter_short || passes_min_duration(row, config.min_duration_s)) rows.push_back(&row);
  }
  return rows;
}

template <class T, class Fn>
std::vector<T> map_segments(const SegmentStore& store, const FeatureConfig& config, int jobs, Fn fn) {
  const auto rows = selected_rows(store, config);
  std::vector<T> out(rows.size());
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    try {
      out[i] = fn(read_segment(store, rows[i]->segment_id));
    } catch (const std::exception& e) {
      throw Error("segment " + rows[i]->segment_id + ": " + e.what());
    }
  });
  return out;
}

}  // namespace

std::vector<NodeFeatureMatrix> build_node_features(const SegmentStore& store,
                                                   const FeatureConfig& config, int jobs) {
  return map_segments<NodeFeatureMatrix>(store, config, jobs, [&](const SegmentRecord& seg) {
    return extract_node_features(seg, config);
  });
}

FeatureMatrix build_feature_matrix(const SegmentStore& store, const FeatureConfig& config,
                                   int jobs) {
  const auto rows = map_segments<FeatureRow>(store, config, jobs, [&](const SegmentRecord& seg) {
    return extract_feature_row(seg, config);
  });
  FeatureMatrix m;
  m.columns = column_names(store.montage(), config);
  m.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m.columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    m.segment_ids.push_back(rows[i].segment_id);
    m.labels.push_back(static_cast<int>(rows[i].label));
    m.values.row(static_cast<Eigen::Index>(i)) = rows[i].values.transpose();
  }
  return m;
}

void write_feature_csv(const std::filesystem::path& path, const FeatureMatrix& matrix) {
  std::string out = "segment_id,label," + text::join(matrix.columns) + "\n";
  for (Eigen::Index r = 0; r < matrix.values.rows(); ++r) {
    out += matrix.segment_ids[static_cast<std::size_t>(r)] + "," +
           std::to_string(matrix.labels[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < matrix.values.cols(); ++c) {
      out += ',';
      out += text::format_double(matrix.values(r, c));
    }
    out += '\n';
  }
  text::write_file(path, out);
}

FeatureMatrix read_feature_csv(const std::filesystem::path& path) {
  const auto lines = text::read_lines(path);
  if (lines.empty()) throw Error("empty feature file " + path.string());
  const auto header = text::split(lines.front());
  if (header.size() < 3 || header[0] != "segment_id" || header[1] != "label") {
    throw Error("feature file header must start with segment_id,label");
  }
  FeatureMatrix m;
  m.columns.assign(header.begin() + 2, header.end());
  std::vector<std::vector<std::string>> body;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (!text::trim(lines[i]).empty()) body.push_back(text::split(lines[i]));
  }
  m.values.resize(static_cast<Eigen::Index>(body.size()), static_cast<Eigen::Index>(m.columns.size()));
  for (std::size_t r = 0; r < body.size(); ++r) {
    if (body[r].size() != header.size()) {
      throw Error("feature file line " + std::to_string(r + 2) + ": wrong field count");
    }
    m.segment_ids.push_back(body[r][0]);
    m.labels.push_back(static_cast<int>(text::parse_long(body[r][1])));
    for (std::size_t c = 2; c < body[r].size(); ++c) {
      m.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c - 2)) =
          text::parse_double(body[r][c]);
    }
  }
  return m;
}

void write_node_features(const std::filesystem::path& dir, const NodeFeatureMatrix& nodes,
                         const std::vector<std::string>& channels,
                         const std::vector<std::string>& names) {
  std::string out = "channel," + text::join(names) + "\n";
  for (Eigen::Index r = 0; r < nodes.values.rows(); ++r) {
    out += channels[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < nodes.values.cols(); ++c) {
      out += ',';
      out += text::format_double(nodes.values(r, c));
    }
    out += '\n';
  }
  text::write_file(dir / (nodes.segment_id + ".csv"), out);
}

}  // namespace neuma::features
