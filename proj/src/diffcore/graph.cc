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

#include "rcqa/diffcore/graph.h"

#include <utility>

#include "rcqa/errors.h"

namespace rcqa::diffcore {

const Tensor& Var::value() const {
  if (graph == nullptr) throw ContractError("Var is not bound to a graph");
  return graph->value(id);
}

const Tensor& Gradients::operator[](Var leaf) const { return at(leaf.id); }

const Tensor& Gradients::at(std::size_t leaf_id) const {
  auto it = grads_.find(leaf_id);
  if (it == grads_.end()) {
    throw ContractError("no gradient recorded for node " +
                        std::to_string(leaf_id) +
                        " (not a differentiable leaf)");
  }
  return it->second;
}

Var Graph::Leaf(Tensor value) {
  Var v = Record("leaf", std::move(value), {}, nullptr);
  nodes_[v.id].differentiable_leaf = true;
  return v;
}

Var Graph::Constant(Tensor value) {
  return Record("constant", std::move(value), {}, nullptr);
}

Var Graph::Record(std::string op, Tensor value,
                  std::vector<std::size_t> inputs, BackwardFn backward) {
  if (!value.AllFinite()) {
    throw NumericalError("non-finite value produced by '" + op +
                         "' with output shape " +
                         ShapeToString(value.shape()));
  }
  for (std::size_t in : inputs) {
    if (in >= nodes_.size()) {
      throw ContractError("operation '" + op + "' references unknown node");
    }
  }
  nodes_.push_back(Node{std::move(op), std::move(value), std::move(inputs),
                        std::move(backward), false});
  return Var{this, nodes_.size() - 1};
}

Gradients Graph::Backward(Var root) const {
  if (root.graph != this || root.id >= nodes_.size()) {
    throw ContractError("backward root does not belong to this graph");
  }
  const Tensor& root_value = nodes_[root.id].value;
  if (root_value.size() != 1) {
    throw ContractError("backward requires a scalar root, got shape " +
                        ShapeToString(root_value.shape()));
  }

  // Adjoints are allocated lazily: an empty shape means "no contribution".
  std::vector<Tensor> adjoints(root.id + 1);
  adjoints[root.id] = Tensor(root_value.shape(), 1.0);
  for (std::size_t id = root.id + 1; id-- > 0;) {
    const Node& node = nodes_[id];
    if (adjoints[id].size() == 0 || !node.backward) continue;
    for (std::size_t in : node.inputs) {
      if (adjoints[in].size() == 0) {
        adjoints[in] = Tensor(nodes_[in].value.shape(), 0.0);
      }
    }
    node.backward(*this, id, adjoints);
    if (!adjoints[id].AllFinite()) {
      throw NumericalError("non-finite adjoint at '" + node.op + "'");
    }
  }

  Gradients out;
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    if (!nodes_[id].differentiable_leaf) continue;
    if (id <= root.id && adjoints[id].size() != 0) {
      out.grads_.emplace(id, std::move(adjoints[id]));
    } else {
      out.grads_.emplace(id, Tensor(nodes_[id].value.shape(), 0.0));
    }
  }
  return out;
}

}  // namespace rcqa::diffcore
