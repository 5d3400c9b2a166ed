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

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace neuma {

enum class Label : int { NoBuy = 0, Buy = 1 };

/// 10-20 montage used by the NeuMa recordings, in storage order.
const std::vector<std::string>& standard_montage();

/// One product-viewing EEG segment. `data` is channels x samples, microvolts.
struct SegmentRecord {
  std::string segment_id;
  std::string subject_id;
  int page_id = 0;
  int product_id = 0;
  Label label = Label::NoBuy;
  double sample_rate_hz = 300.0;
  std::vector<std::string> channel_names;
  MatrixXd data;

  Eigen::Index n_samples() const { return data.cols(); }
  double duration_seconds() const { return static_cast<double>(data.cols()) / sample_rate_hz; }
};

struct ManifestRow {
  std::string segment_id;
  std::string subject_id;
  int page_id = 0;
  int product_id = 0;
  Label label = Label::NoBuy;
  double sample_rate_hz = 0.0;
  long n_samples = 0;
  std::string file;  // relative to the store root
};

/// Read-only view of an on-disk segment store (`manifest.csv` + `montage.txt`
/// + one CSV per segment).
class SegmentStore {
 public:
  SegmentStore(std::filesystem::path root, std::vector<std::string> montage,
               std::vector<ManifestRow> rows);

  const std::filesystem::path& root() const { return root_; }
  const std::vector<std::string>& montage() const { return montage_; }
  const std::vector<ManifestRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  /// Throws if the id is not in the manifest.
  const ManifestRow& row(const std::string& segment_id) const;

 private:
  std::filesystem::path root_;
  std::vector<std::string> montage_;
  std::vector<ManifestRow> rows_;
};

inline constexpr const char* kManifestHeader =
    "segment_id,subject_id,page_id,product_id,label,sample_rate_hz,n_samples,file";

SegmentStore load_store(const std::filesystem::path& root);

SegmentRecord read_segment(const SegmentStore& store, const std::string& segment_id);

/// Reads every segment in manifest order.
std::vector<SegmentRecord> read_all(const SegmentStore& store);

/// Writes a complete store. Segment files go to `data/<segment_id>.csv`.
/// Values are printed with 10 significant digits.
void write_store(const std::filesystem::path& root, const std::vector<SegmentRecord>& segments);

/// Keeps segments strictly longer than `min_seconds`, preserving order.
std::vector<SegmentRecord> filter_min_duration(std::vector<SegmentRecord> segments,
                                               double min_seconds = 0.5);

/// Same rule applied to manifest rows, so callers can skip reading short segments.
bool passes_min_duration(const ManifestRow& row, double min_seconds);

/// {NoBuy count, Buy count} over the manifest.
std::array<std::size_t, 2> label_counts(const SegmentStore& store);

}  // namespace neuma
