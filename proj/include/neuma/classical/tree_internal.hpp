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

#include "neuma/classical.hpp"

#include <vector>

namespace neuma::classical {

/// Row order of every column sorted ascending (stable).
std::vector<std::vector<int>> presort_columns(const MatrixXd& x);

/// Level-wise exact greedy Newton tree over presorted columns. `rows` must be unique.
Tree fit_newton_tree_presorted(const MatrixXd& x, const VectorXd& grad, const VectorXd& hess,
                               const std::vector<int>& rows, const TreeOptions& options,
                               const std::vector<std::vector<int>>& sorted);

}  // namespace neuma::classical
