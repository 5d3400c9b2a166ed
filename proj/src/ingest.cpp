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

#include "neuma/ingest.hpp"

#include "neuma/text_io.hpp"

#include <cmath>
#include <set>

namespace fs = std::filesystem;

namespace neuma {

const std::vector<std::string>& standard_montage() {
  static const std::vector<std::string> montage = {
      "Fp1", "Fp2", "F7", "F3", "Fz", "F4", "F8", "T3", "C3", "Cz",
      "C4",  "T4",  "T5", "P3", "Pz", "P4", "T6", "O1", "O2"};
  return montage;
}

SegmentStore::SegmentStore(fs::path root, std::vector<std::string> montage,
                           std::vector<ManifestRow> rows)
    : root_(std::move(root)), montage_(std::move(montage)), rows_(std::move(rows)) {}

const ManifestRow& SegmentStore::row(const std::string& segment_id) const {
  for (const auto& r : rows_) {
    if (r.segment_id == segment_id) return r;
  }
  throw Error("unknown segment_id '" + segment_id + "'");
}

namespace {

Label parse_label(std::string_view field) {
  const long v = text::parse_long(field);
  if (v != 0 && v != 1) throw Error("label must be 0 or 1, got " + std::string(field));
  return static_cast<Label>(v);
}

std::vector<std::string> read_montage(const fs::path& path) {
  std::vector<std::string> names;
  for (const auto& line : text::read_lines(path)) {
    const auto name = text::trim(line);
    if (!name.empty()) names.emplace_back(name);
  }
  if (static_cast<int>(names.size()) != kNumChannels) {
    throw Error("montage length " + std::to_string(names.size()) + " != " +
                std::to_string(kNumChannels));
  }
  return names;
}

}  // namespace

SegmentStore load_store(const fs::path& root) {
  const auto manifest_path = root / "manifest.csv";
  const auto montage_path = root / "montage.txt";
  if (!fs::exists(manifest_path)) throw Error("missing manifest: " + manifest_path.string());
  if (!fs::exists(montage_path)) throw Error("missing montage: " + montage_path.string());

  auto montage = read_montage(montage_path);
  const auto lines = text::read_lines(manifest_path);
  if (lines.empty() || text::trim(lines.front()) != kManifestHeader) {
    throw Error("manifest header must be '" + std::string(kManifestHeader) + "'");
  }

  std::vector<ManifestRow> rows;
  std::set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    const auto f = text::split(lines[i]);
    if (f.size() != 8) {
      throw Error("manifest line " + std::to_string(i + 1) + ": expected 8 fields");
    }
    ManifestRow row;
    row.segment_id = std::string(text::trim(f[0]));
    row.subject_id = std::string(text::trim(f[1]));
    row.page_id = static_cast<int>(text::parse_long(f[2]));
    row.product_id = static_cast<int>(text::parse_long(f[3]));
    row.label = parse_label(f[4]);
    row.sample_rate_hz = text::parse_double(f[5]);
    row.n_samples = text::parse_long(f[6]);
    row.file = std::string(text::trim(f[7]));
    if (!(row.sample_rate_hz > 0.0)) throw Error("segment " + row.segment_id + ": sample_rate_hz must be > 0");
    if (row.n_samples < 1) throw Error("segment " + row.segment_id + ": n_samples must be >= 1");
    if (!seen.insert(row.segment_id).second) {
      throw Error("duplicate segment_id '" + row.segment_id + "'");
    }
    const auto data_path = root / row.file;
    if (!fs::is_regular_file(data_path)) {
      throw Error("missing data file for segment " + row.segment_id + ": " + data_path.string());
    }
    if (fs::file_size(data_path) == 0) {
      throw Error("empty data file for segment " + row.segment_id);
    }
    rows.push_back(std::move(row));
  }
  return SegmentStore(root, std::move(montage), std::move(rows));
}

SegmentRecord read_segment(const SegmentStore& store, const std::string& segment_id) {
  const auto& row = store.row(segment_id);
  const auto lines = text::read_lines(store.root() / row.file);
  if (lines.empty()) throw Error("segment " + segment_id + ": empty data file");

  const auto header = text::split(lines.front());
  if (header.size() != store.montage().size()) {
    throw Error("segment " + segment_id + ": row count mismatch, expected " +
                std::to_string(store.montage().size()) + " channels, got " +
                std::to_string(header.size()));
  }
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (text::trim(header[c]) != store.montage()[c]) {
      throw Error("segment " + segment_id + ": channel '" + std::string(text::trim(header[c])) +
                  "' does not match montage order");
    }
  }

  std::vector<const std::string*> data_lines;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (!text::trim(lines[i]).empty()) data_lines.push_back(&lines[i]);
  }
  if (static_cast<long>(data_lines.size()) != row.n_samples) {
    throw Error("segment " + segment_id + ": length mismatch, manifest says " +
                std::to_string(row.n_samples) + " samples, file has " +
                std::to_string(data_lines.size()));
  }

  const auto n_ch = static_cast<Eigen::Index>(header.size());
  MatrixXd data(n_ch, static_cast<Eigen::Index>(data_lines.size()));
  for (Eigen::Index t = 0; t < data.cols(); ++t) {
    const auto fields = text::split(*data_lines[static_cast<std::size_t>(t)]);
    if (static_cast<Eigen::Index>(fields.size()) != n_ch) {
      throw Error("segment " + segment_id + ": row count mismatch at sample " + std::to_string(t));
    }
    for (Eigen::Index c = 0; c < n_ch; ++c) {
      const double v = text::parse_double(fields[static_cast<std::size_t>(c)]);
      if (!std::isfinite(v)) {
        throw Error("segment " + segment_id + ": non-finite sample at (" + std::to_string(t) +
                    ", " + std::to_string(c) + ")");
      }
      data(c, t) = v;
    }
  }

  SegmentRecord rec;
  rec.segment_id = row.segment_id;
  rec.subject_id = row.subject_id;
  rec.page_id = row.page_id;
  rec.product_id = row.product_id;
  rec.label = row.label;
  rec.sample_rate_hz = row.sample_rate_hz;
  rec.channel_names = store.montage();
  rec.data = std::move(data);
  return rec;
}

std::vector<SegmentRecord> read_all(const SegmentStore& store) {
  std::vector<SegmentRecord> out;
  out.reserve(store.size());
  for (const auto& row : store.rows()) out.push_back(read_segment(store, row.segment_id));
  return out;
}

void write_store(const fs::path& root, const std::vector<SegmentRecord>& segments) {
  fs::create_directories(root / "data");
  const auto& montage = segments.empty() ? standard_montage() : segments.front().channel_names;

  std::string montage_text;
  for (const auto& name : montage) montage_text += name + "\n";
  text::write_file(root / "montage.txt", montage_text);

  std::string manifest = std::string(kManifestHeader) + "\n";
  for (const auto& seg : segments) {
    if (seg.channel_names != montage) throw Error("segment " + seg.segment_id + ": montage differs from store");
    if (seg.data.rows() != kNumChannels) throw Error("segment " + seg.segment_id + ": expected 19 channels");
    const std::string file = "data/" + seg.segment_id + ".csv";
    manifest += seg.segment_id + "," + seg.subject_id + "," + std::to_string(seg.page_id) + "," +
                std::to_string(seg.product_id) + "," + std::to_string(static_cast<int>(seg.label)) +
                "," + text::format_double(seg.sample_rate_hz) + "," +
                std::to_string(seg.data.cols()) + "," + file + "\n";

    std::string body = text::join(montage) + "\n";
    body.reserve(body.size() + static_cast<std::size_t>(seg.data.size()) * 14);
    for (Eigen::Index t = 0; t < seg.data.cols(); ++t) {
      for (Eigen::Index c = 0; c < seg.data.rows(); ++c) {
        if (c) body += ',';
        body += text::format_double(seg.data(c, t), 10);
      }
      body += '\n';
    }
    text::write_file(root / file, body);
  }
  text::write_file(root / "manifest.csv", manifest);
}

bool passes_min_duration(const ManifestRow& row, double min_seconds) {
  return static_cast<double>(row.n_samples) / row.sample_rate_hz > min_seconds;
}

std::vector<SegmentRecord> filter_min_duration(std::vector<SegmentRecord> segments,
                                               double min_seconds) {
  std::vector<SegmentRecord> kept;
  kept.reserve(segments.size());
  for (auto& seg : segments) {
    if (seg.duration_seconds() > min_seconds) kept.push_back(std::move(seg));
  }
  return kept;
}

std::array<std::size_t, 2> label_counts(const SegmentStore& store) {
  std::array<std::size_t, 2> counts{0, 0};
  for (const auto& row : store.rows()) ++counts[static_cast<std::size_t>(row.label)];
  return counts;
}

}  // namespace neuma
