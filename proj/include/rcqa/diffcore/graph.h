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

// Tape-based reverse-mode differentiation.
//
// Forward values are computed eagerly when an operation is recorded. Nodes are
// appended to the tape in creation order, which is a topological order of the
// graph, so the backward pass is a single reverse sweep over the tape.
//
// A Graph is not thread-safe; use one Graph per thread.

#ifndef RCQA_DIFFCORE_GRAPH_H_
#define RCQA_DIFFCORE_GRAPH_H_

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rcqa/diffcore/tensor.h"

namespace rcqa::diffcore {

class Graph;

// Handle to a node recorded on a Graph.
struct Var {
  Graph* graph = nullptr;
  std::size_t id = 0;

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
};

// Gradients of the root with respect to every differentiable leaf, keyed by
// leaf id.
class Gradients {
 public:
  const Tensor& operator[](Var leaf) const;
  const Tensor& at(std::size_t leaf_id) const;
  bool contains(std::size_t leaf_id) const {
    return grads_.contains(leaf_id);
  }
  std::size_t size() const { return grads_.size(); }

 private:
  friend class Graph;
  std::map<std::size_t, Tensor> grads_;
};

class Graph {
 public:
  // Propagates the adjoint of node `self` (already complete in
  // `adjoints[self]`) into the adjoints of its inputs.
  using BackwardFn =
      std::function<void(const Graph& graph, std::size_t self,
                         std::vector<Tensor>& adjoints)>;

  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  // A leaf whose gradient is reported by Backward().
  Var Leaf(Tensor value);
  // A leaf that is never differentiated.
  Var Constant(Tensor value);

  // Records an operation node. Throws NumericalError if `value` holds a
  // NaN or Inf; `op` names the operation in the diagnostic.
  Var Record(std::string op, Tensor value, std::vector<std::size_t> inputs,
             BackwardFn backward);

  const Tensor& value(std::size_t id) const { return nodes_[id].value; }
  const std::string& op(std::size_t id) const { return nodes_[id].op; }
  const std::vector<std::size_t>& inputs(std::size_t id) const {
    return nodes_[id].inputs;
  }
  std::size_t num_nodes() const { return nodes_.size(); }

  // Reverse sweep from a scalar root. Leaves created with Leaf() that the
  // root does not depend on receive zero gradients.
  Gradients Backward(Var root) const;

 private:
  struct Node {
    std::string op;
    Tensor value;
    std::vector<std::size_t> inputs;
    BackwardFn backward;
    bool differentiable_leaf = false;
  };

  std::vector<Node> nodes_;
};

}  // namespace rcqa::diffcore

#endif  // RCQA_DIFFCORE_GRAPH_H_
