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

// Differentiable operations over rank-2 arrays.
//
// Binary elementwise ops accept a right operand that either matches the left
// operand's shape or broadcasts against it as a 1xC row, an Rx1 column or a
// 1x1 scalar. All operands of one op must live on the same Graph. Shape
// violations throw ShapeError naming both shapes.

#ifndef RCQA_DIFFCORE_OPS_H_
#define RCQA_DIFFCORE_OPS_H_

#include <cstddef>
#include <vector>

#include "rcqa/diffcore/graph.h"

namespace rcqa::diffcore {

Var Add(Var a, Var b);
Var Sub(Var a, Var b);
Var Mul(Var a, Var b);
Var Div(Var a, Var b);
Var Scale(Var a, double factor);

// (R x K) . (K x C) -> R x C.
Var MatMul(Var a, Var b);
Var Transpose(Var a);

// Sum of all entries -> 1x1.
Var Sum(Var a);
// Per-row sums -> R x 1.
Var RowSum(Var a);
// Mean over rows -> 1 x C.
Var MeanPool(Var a);

// Elementwise. Log throws DomainError on a nonpositive entry, Sqrt on a
// negative one.
Var Log(Var a);
Var Sqrt(Var a);
Var Tanh(Var a);

// Softmax over all entries of `a` (max-subtracted).
Var Softmax(Var a);
// log(Softmax(a)) computed as a - logsumexp(a).
Var LogSoftmax(Var a);

// Row-wise cosine similarity of each row of `a` (R x C) with `b`, which is
// either a single 1 x C row or R x C. Returns R x 1. `eps` is added to both
// squared norms so a zero row yields similarity 0 instead of 0/0.
Var CosineSimilarity(Var a, Var b, double eps = 1e-12);

// Concatenation along axis 0 (rows) or 1 (columns).
Var Concatenate(const std::vector<Var>& parts, int axis);

// Output row i holds input row i - offset, or zeros when out of range.
Var ShiftRows(Var a, int offset);

// Entry (r, c) as a 1x1 array.
Var ScalarPick(Var a, std::size_t r, std::size_t c = 0);

}  // namespace rcqa::diffcore

#endif  // RCQA_DIFFCORE_OPS_H_
