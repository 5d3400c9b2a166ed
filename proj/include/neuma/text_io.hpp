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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

// Small helpers shared by the textual file formats.
namespace neuma::text {

std::vector<std::string> split(std::string_view line, char sep = ',');
std::string_view trim(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep = ",");

/// Strict parsers: the whole (trimmed) field must be consumed.
double parse_double(std::string_view field);
long parse_long(std::string_view field);

/// Shortest-ish decimal with `digits` significant digits (printf %.*g).
std::string format_double(double value, int digits = 17);

std::string read_file(const std::filesystem::path& path);
std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Writes a rectangular matrix as CSV with a header row.
void write_matrix_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const MatrixXd& values, int digits = 17);

/// 64-bit FNV-1a, used as a stable digest in reports.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex_digest(std::string_view bytes);

}  // namespace neuma::text
