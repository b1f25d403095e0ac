/*
 * Copyright 2026 The rcqa-rationale Authors.
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

#ifndef RCQA_DIFFCORE_FINITE_DIFFERENCE_H_
#define RCQA_DIFFCORE_FINITE_DIFFERENCE_H_

#include <functional>

#include "rcqa/diffcore/tensor.h"

namespace rcqa::diffcore {

using ScalarFunction = std::function<double(const Tensor&)>;

// Central-difference estimate of df/dx, entry by entry:
//   (f(x + eps e_i) - f(x - eps e_i)) / (2 eps).
// Used as an independent oracle for Graph::Backward.
Tensor FiniteDifferenceGradient(const ScalarFunction& f, const Tensor& x,
                                double epsilon);

// Norm-wise relative error ||a - b|| / max(||a||, ||b||). Returns 0 when
// both norms are below `floor`.
double RelativeError(const Tensor& a, const Tensor& b, double floor = 1e-12);

}  // namespace rcqa::diffcore

#endif  // RCQA_DIFFCORE_FINITE_DIFFERENCE_H_
