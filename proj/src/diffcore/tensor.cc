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

#include "rcqa/diffcore/tensor.h"

#include <cmath>
#include <functional>
#include <numeric>
#include <utility>

#include "rcqa/errors.h"

namespace rcqa::diffcore {

std::string ShapeToString(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out += "x";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

std::size_t NumElements(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

Tensor::Tensor(Shape shape, double fill)
    : shape_(std::move(shape)), data_(NumElements(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (NumElements(shape_) != data_.size()) {
    throw ShapeError("tensor shape " + ShapeToString(shape_) + " holds " +
                     std::to_string(NumElements(shape_)) +
                     " elements but data has " + std::to_string(data_.size()));
  }
}

Tensor Tensor::FromRows(const std::vector<std::vector<double>>& rows) {
  const std::size_t num_cols = rows.empty() ? 0 : rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * num_cols);
  for (const auto& r : rows) {
    if (r.size() != num_cols) throw ShapeError("ragged rows in FromRows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Tensor(Shape{rows.size(), num_cols}, std::move(data));
}

std::size_t Tensor::rows() const {
  if (shape_.size() == 2) return shape_[0];
  if (shape_.size() <= 1) return 1;
  throw ShapeError("rows() on rank-" + std::to_string(shape_.size()) +
                   " tensor " + ShapeToString(shape_));
}

std::size_t Tensor::cols() const {
  if (shape_.size() == 2) return shape_[1];
  if (shape_.size() == 1) return shape_[0];
  if (shape_.empty()) return 1;
  throw ShapeError("cols() on rank-" + std::to_string(shape_.size()) +
                   " tensor " + ShapeToString(shape_));
}

double Tensor::item() const {
  if (data_.size() != 1) {
    throw ShapeError("item() on non-scalar tensor " + ShapeToString(shape_));
  }
  return data_[0];
}

bool Tensor::AllFinite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Tensor::Fill(double value) {
  for (double& v : data_) v = value;
}

void Tensor::AddScaled(const Tensor& other, double scale) {
  if (other.shape_ != shape_) {
    throw ShapeError("AddScaled shape mismatch: " + ShapeToString(shape_) +
                     " vs " + ShapeToString(other.shape_));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    data_[i] += scale * other.data_[i];
  }
}

}  // namespace rcqa::diffcore
