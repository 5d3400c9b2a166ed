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

namespace neuma::special {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double x, double a, double b);

/// Two-sided p-value of Student's t with `df` (possibly fractional) degrees of freedom.
double student_t_two_sided_p(double t, double df);

}  // namespace neuma::special
