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

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace neuma {

template <class Scalar, int Rows = Eigen::Dynamic, int Cols = Eigen::Dynamic>
using Matrix = Eigen::Matrix<Scalar, Rows, Cols>;

template <class Scalar, int Rows = Eigen::Dynamic>
using Vector = Eigen::Matrix<Scalar, Rows, 1>;

template <class Scalar, int Cols = Eigen::Dynamic>
using RowVector = Eigen::Matrix<Scalar, 1, Cols>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;
using RowVectorXd = RowVector<double>;

/// Binary labels are stored as 0/1 integers throughout (0 = NoBuy, 1 = Buy).
using Labels = std::vector<int>;

inline constexpr int kNumChannels = 19;
inline constexpr int kNumStatistics = 8;

/// Library-wide error type; the message is meant to be shown to the user as-is.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace neuma
