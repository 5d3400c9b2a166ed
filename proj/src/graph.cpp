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

#include "neuma/graph.hpp"

#include "neuma/text_io.hpp"

#include <map>
#include <sstream>

namespace neuma::graph {

std::string to_string(EdgeTransform transform) {
  switch (transform) {
    case EdgeTransform::Raw: return "raw";
    case EdgeTransform::Abs: return "abs";
    case EdgeTransform::Clamp0: return "clamp0";
  }
  throw Error("unknown edge transform");
}

EdgeTransform edge_transform_from_string(const std::string& name) {
  if (name == "raw") return EdgeTransform::Raw;
  if (name == "abs") return EdgeTransform::Abs;
  if (name == "clamp0") return EdgeTransform::Clamp0;
  throw Error("unknown edge transform: " + name);
}

MatrixXd apply_edge_transform(const MatrixXd& adjacency, EdgeTransform transform) {
  switch (transform) {
    case EdgeTransform::Raw: return adjacency;
    case EdgeTransform::Abs: return adjacency.cwiseAbs();
    case EdgeTransform::Clamp0: return adjacency.cwiseMax(0.0);
  }
  throw Error("unknown edge transform");
}

BrainGraph build_graph(const features::NodeFeatureMatrix& nodes, EdgeTransform transform) {
  if (nodes.values.rows() != kNumChannels) {
    throw Error("graph " + nodes.segment_id + ": expected " + std::to_string(kNumChannels) + " nodes");
  }
  BrainGraph g;
  g.segment_id = nodes.segment_id;
  g.label = static_cast<int>(nodes.label);
  g.node_features = nodes.values;
  g.adjacency = apply_edge_transform(pearson_adjacency(nodes.values), transform);
  g.edge_transform = transform;
  return g;
}

BrainGraph build_graph(const SegmentRecord& segment, const features::FeatureConfig& config,
                       EdgeTransform transform) {
  return build_graph(features::extract_node_features(segment, config), transform);
}

void write_graph(const std::filesystem::path& path, const BrainGraph& graph) {
  std::ostringstream out;
  out << "# nodes=" << graph.n_nodes() << " features=" << graph.n_features() << " label=" << graph.label
      << " segment_id=" << graph.segment_id << "\n";
  out << "# edge_transform=" << to_string(graph.edge_transform) << "\n";
  auto rows = [&](const MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j) out << ',';
        out << text::format_double(m(i, j));
      }
      out << '\n';
    }
  };
  rows(graph.adjacency);
  rows(graph.node_features);
  text::write_file(path, out.str());
}

namespace {

std::map<std::string, std::string> header_fields(const std::string& line, const std::filesystem::path& path) {
  if (line.rfind("# ", 0) != 0) throw Error(path.string() + ": malformed graph header");
  std::map<std::string, std::string> fields;
  std::istringstream in(line.substr(2));
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw Error(path.string() + ": malformed graph header field " + token);
    fields[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return fields;
}

}  // namespace

BrainGraph read_graph(const std::filesystem::path& path) {
  const auto lines = text::read_lines(path);
  if (lines.size() < 2) throw Error(path.string() + ": missing graph header");
  auto dims = header_fields(lines[0], path);
  auto tag = header_fields(lines[1], path);
  for (const char* key : {"nodes", "features", "label", "segment_id"}) {
    if (!dims.count(key)) throw Error(path.string() + ": graph header lacks " + key);
  }
  if (!tag.count("edge_transform")) throw Error(path.string() + ": graph header lacks edge_transform");

  BrainGraph g;
  const auto n = text::parse_long(dims["nodes"]);
  const auto d = text::parse_long(dims["features"]);
  g.label = static_cast<int>(text::parse_long(dims["label"]));
  g.segment_id = dims["segment_id"];
  g.edge_transform = edge_transform_from_string(tag["edge_transform"]);
  std::vector<std::string> body;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    if (!text::trim(lines[i]).empty()) body.push_back(lines[i]);
  }
  if (static_cast<long>(body.size()) != 2 * n) throw Error(path.string() + ": graph row count mismatch");
  auto fill = [&](MatrixXd& m, long offset) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const auto f = text::split(text::trim(body[static_cast<std::size_t>(offset + i)]));
      if (static_cast<Eigen::Index>(f.size()) != m.cols()) {
        throw Error(path.string() + ": line " + std::to_string(offset + i + 3) + ": wrong field count");
      }
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = text::parse_double(f[static_cast<std::size_t>(j)]);
    }
  };
  g.adjacency.resize(n, n);
  g.node_features.resize(n, d);
  fill(g.adjacency, 0);
  fill(g.node_features, n);
  return g;
}

}  // namespace neuma::graph
