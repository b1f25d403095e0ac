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

#include "rcqa/diffcore/finite_difference.h"

#include <algorithm>
#include <cmath>

#include "rcqa/errors.h"

namespace rcqa::diffcore {

Tensor FiniteDifferenceGradient(const ScalarFunction& f, const Tensor& x,
                                double epsilon) {
  if (!(epsilon > 0.0)) {
    throw ContractError("finite difference epsilon must be positive");
  }
  Tensor grad(x.shape());
  Tensor probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double original = probe[i];
    probe[i] = original + epsilon;
    const double up = f(probe);
    probe[i] = original - epsilon;
    const double down = f(probe);
    probe[i] = original;
    grad[i] = (up - down) / (2.0 * epsilon);
  }
  return grad;
}

double RelativeError(const Tensor& a, const Tensor& b, double floor) {
  if (a.shape() != b.shape()) {
    throw ShapeError("RelativeError shape mismatch: " +
                     ShapeToString(a.shape()) + " vs " +
                     ShapeToString(b.shape()));
  }
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double scale = std::sqrt(std::max(na, nb));
  if (scale < floor) return 0.0;
  return std::sqrt(diff) / scale;
}

}  // namespace rcqa::diffcore
