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

#include "rcqa/diffcore/ops.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "rcqa/errors.h"

namespace rcqa::diffcore {
namespace {

Graph& SameGraph(Var a, Var b, const char* op) {
  if (a.graph == nullptr || a.graph != b.graph) {
    throw ContractError(std::string(op) + ": operands on different graphs");
  }
  return *a.graph;
}

void RequireMatrix(const Tensor& t, const char* op) {
  if (t.rank() > 2) {
    throw ShapeError(std::string(op) + ": expected rank <= 2, got " +
                     ShapeToString(t.shape()));
  }
}

enum class Broadcast { kSame, kRow, kColumn, kScalar };

Broadcast ResolveBroadcast(const Tensor& a, const Tensor& b, const char* op) {
  RequireMatrix(a, op);
  RequireMatrix(b, op);
  if (a.shape() == b.shape()) return Broadcast::kSame;
  if (b.size() == 1) return Broadcast::kScalar;
  if (b.rows() == 1 && b.cols() == a.cols()) return Broadcast::kRow;
  if (b.cols() == 1 && b.rows() == a.rows()) return Broadcast::kColumn;
  throw ShapeError(std::string(op) + ": cannot broadcast " +
                   ShapeToString(b.shape()) + " against " +
                   ShapeToString(a.shape()));
}

std::size_t BroadcastIndex(Broadcast mode, std::size_t r, std::size_t c,
                           std::size_t cols) {
  switch (mode) {
    case Broadcast::kSame:
      return r * cols + c;
    case Broadcast::kRow:
      return c;
    case Broadcast::kColumn:
      return r;
    case Broadcast::kScalar:
      return 0;
  }
  return 0;
}

// Shared implementation of broadcasting elementwise binary ops.
// `fwd(x, y)` is the value; `dx(x, y, out)` and `dy(x, y, out)` are the
// partial derivatives.
template <typename Fwd, typename Dx, typename Dy>
Var Binary(const char* op, Var a, Var b, Fwd fwd, Dx dx, Dy dy) {
  Graph& g = SameGraph(a, b, op);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const Broadcast mode = ResolveBroadcast(av, bv, op);
  const std::size_t rows = av.rows();
  const std::size_t cols = av.cols();
  Tensor out(av.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      out[r * cols + c] =
          fwd(av[r * cols + c], bv[BroadcastIndex(mode, r, c, cols)]);
    }
  }
  const std::size_t ia = a.id;
  const std::size_t ib = b.id;
  return g.Record(
      op, std::move(out), {ia, ib},
      [ia, ib, mode, rows, cols, dx, dy](const Graph& graph, std::size_t self,
                                         std::vector<Tensor>& adj) {
        const Tensor& x = graph.value(ia);
        const Tensor& y = graph.value(ib);
        const Tensor& z = graph.value(self);
        const Tensor& gz = adj[self];
        Tensor& gx = adj[ia];
        Tensor& gy = adj[ib];
        for (std::size_t r = 0; r < rows; ++r) {
          for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t i = r * cols + c;
            const std::size_t j = BroadcastIndex(mode, r, c, cols);
            gx[i] += gz[i] * dx(x[i], y[j], z[i]);
            gy[j] += gz[i] * dy(x[i], y[j], z[i]);
          }
        }
      });
}

// Elementwise unary op with derivative expressed via input and output.
template <typename Fwd, typename D>
Var Unary(const char* op, Var a, Fwd fwd, D deriv) {
  Graph& g = *a.graph;
  const Tensor& av = a.value();
  Tensor out(av.shape());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = fwd(av[i]);
  const std::size_t ia = a.id;
  return g.Record(op, std::move(out), {ia},
                  [ia, deriv](const Graph& graph, std::size_t self,
                              std::vector<Tensor>& adj) {
                    const Tensor& x = graph.value(ia);
                    const Tensor& z = graph.value(self);
                    const Tensor& gz = adj[self];
                    Tensor& gx = adj[ia];
                    for (std::size_t i = 0; i < x.size(); ++i) {
                      gx[i] += gz[i] * deriv(x[i], z[i]);
                    }
                  });
}

}  // namespace

Var Add(Var a, Var b) {
  return Binary(
      "add", a, b, [](double x, double y) { return x + y; },
      [](double, double, double) { return 1.0; },
      [](double, double, double) { return 1.0; });
}

Var Sub(Var a, Var b) {
  return Binary(
      "sub", a, b, [](double x, double y) { return x - y; },
      [](double, double, double) { return 1.0; },
      [](double, double, double) { return -1.0; });
}

Var Mul(Var a, Var b) {
  return Binary(
      "multiply", a, b, [](double x, double y) { return x * y; },
      [](double, double y, double) { return y; },
      [](double x, double, double) { return x; });
}

Var Div(Var a, Var b) {
  for (double v : b.value().data()) {
    if (v == 0.0) throw DomainError("div: zero denominator");
  }
  return Binary(
      "div", a, b, [](double x, double y) { return x / y; },
      [](double, double y, double) { return 1.0 / y; },
      [](double, double y, double z) { return -z / y; });
}

Var Scale(Var a, double factor) {
  return Unary(
      "scale", a, [factor](double x) { return factor * x; },
      [factor](double, double) { return factor; });
}

Var MatMul(Var a, Var b) {
  Graph& g = SameGraph(a, b, "matrix_product");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  RequireMatrix(av, "matrix_product");
  RequireMatrix(bv, "matrix_product");
  const std::size_t n = av.rows();
  const std::size_t k = av.cols();
  const std::size_t m = bv.cols();
  if (bv.rows() != k) {
    throw ShapeError("matrix_product: inner dimensions differ, " +
                     ShapeToString(av.shape()) + " x " +
                     ShapeToString(bv.shape()));
  }
  Tensor out = Tensor::Matrix(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = av[i * k + p];
      if (aip == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) out[i * m + j] += aip * bv[p * m + j];
    }
  }
  const std::size_t ia = a.id;
  const std::size_t ib = b.id;
  return g.Record("matrix_product", std::move(out), {ia, ib},
                  [ia, ib, n, k, m](const Graph& graph, std::size_t self,
                                    std::vector<Tensor>& adj) {
                    const Tensor& x = graph.value(ia);
                    const Tensor& y = graph.value(ib);
                    const Tensor& gz = adj[self];
                    Tensor& gx = adj[ia];
                    Tensor& gy = adj[ib];
                    for (std::size_t i = 0; i < n; ++i) {
                      for (std::size_t p = 0; p < k; ++p) {
                        double acc = 0.0;
                        const double xip = x[i * k + p];
                        for (std::size_t j = 0; j < m; ++j) {
                          const double gij = gz[i * m + j];
                          acc += gij * y[p * m + j];
                          gy[p * m + j] += xip * gij;
                        }
                        gx[i * k + p] += acc;
                      }
                    }
                  });
}

Var Transpose(Var a) {
  const Tensor& av = a.value();
  RequireMatrix(av, "transpose");
  const std::size_t rows = av.rows();
  const std::size_t cols = av.cols();
  Tensor out = Tensor::Matrix(cols, rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out[c * rows + r] = av[r * cols + c];
  }
  const std::size_t ia = a.id;
  return a.graph->Record("transpose", std::move(out), {ia},
                         [ia, rows, cols](const Graph&, std::size_t self,
                                          std::vector<Tensor>& adj) {
                           const Tensor& gz = adj[self];
                           Tensor& gx = adj[ia];
                           for (std::size_t r = 0; r < rows; ++r) {
                             for (std::size_t c = 0; c < cols; ++c) {
                               gx[r * cols + c] += gz[c * rows + r];
                             }
                           }
                         });
}

Var Sum(Var a) {
  double total = 0.0;
  for (double v : a.value().data()) total += v;
  const std::size_t ia = a.id;
  return a.graph->Record("sum", Tensor::Scalar(total), {ia},
                         [ia](const Graph&, std::size_t self,
                              std::vector<Tensor>& adj) {
                           const double gz = adj[self][0];
                           for (double& v : adj[ia].data()) v += gz;
                         });
}

Var RowSum(Var a) {
  const Tensor& av = a.value();
  RequireMatrix(av, "row_sum");
  const std::size_t rows = av.rows();
  const std::size_t cols = av.cols();
  Tensor out = Tensor::Matrix(rows, 1);
  for (std::size_t r = 0; r < rows; ++r) {
    for (double v : av.row(r)) out[r] += v;
  }
  const std::size_t ia = a.id;
  return a.graph->Record("row_sum", std::move(out), {ia},
                         [ia, rows, cols](const Graph&, std::size_t self,
                                          std::vector<Tensor>& adj) {
                           const Tensor& gz = adj[self];
                           Tensor& gx = adj[ia];
                           for (std::size_t r = 0; r < rows; ++r) {
                             for (std::size_t c = 0; c < cols; ++c) {
                               gx[r * cols + c] += gz[r];
                             }
                           }
                         });
}

Var MeanPool(Var a) {
  const Tensor& av = a.value();
  RequireMatrix(av, "mean_pool");
  const std::size_t rows = av.rows();
  const std::size_t cols = av.cols();
  if (rows == 0) throw ShapeError("mean_pool: input has no rows");
  Tensor out = Tensor::Matrix(1, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out[c] += av[r * cols + c];
  }
  const double inv = 1.0 / static_cast<double>(rows);
  for (double& v : out.data()) v *= inv;
  const std::size_t ia = a.id;
  return a.graph->Record("mean_pool", std::move(out), {ia},
                         [ia, rows, cols, inv](const Graph&, std::size_t self,
                                               std::vector<Tensor>& adj) {
                           const Tensor& gz = adj[self];
                           Tensor& gx = adj[ia];
                           for (std::size_t r = 0; r < rows; ++r) {
                             for (std::size_t c = 0; c < cols; ++c) {
                               gx[r * cols + c] += gz[c] * inv;
                             }
                           }
                         });
}

Var Log(Var a) {
  for (double v : a.value().data()) {
    if (!(v > 0.0)) {
      throw DomainError("log of nonpositive value " + std::to_string(v));
    }
  }
  return Unary(
      "log", a, [](double x) { return std::log(x); },
      [](double x, double) { return 1.0 / x; });
}

Var Sqrt(Var a) {
  for (double v : a.value().data()) {
    if (v < 0.0) throw DomainError("sqrt of negative value");
  }
  return Unary(
      "sqrt", a, [](double x) { return std::sqrt(x); },
      [](double, double z) { return 0.5 / z; });
}

Var Tanh(Var a) {
  return Unary(
      "tanh", a, [](double x) { return std::tanh(x); },
      [](double, double z) { return 1.0 - z * z; });
}

Var Softmax(Var a) {
  const Tensor& av = a.value();
  if (av.size() == 0) throw ShapeError("softmax: empty input");
  const double max = *std::max_element(av.data().begin(), av.data().end());
  Tensor out(av.shape());
  double total = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    out[i] = std::exp(av[i] - max);
    total += out[i];
  }
  for (double& v : out.data()) v /= total;
  const std::size_t ia = a.id;
  return a.graph->Record("softmax", std::move(out), {ia},
                         [ia](const Graph& graph, std::size_t self,
                              std::vector<Tensor>& adj) {
                           const Tensor& p = graph.value(self);
                           const Tensor& gz = adj[self];
                           double dot = 0.0;
                           for (std::size_t i = 0; i < p.size(); ++i) {
                             dot += gz[i] * p[i];
                           }
                           Tensor& gx = adj[ia];
                           for (std::size_t i = 0; i < p.size(); ++i) {
                             gx[i] += p[i] * (gz[i] - dot);
                           }
                         });
}

Var LogSoftmax(Var a) {
  const Tensor& av = a.value();
  if (av.size() == 0) throw ShapeError("log_softmax: empty input");
  const double max = *std::max_element(av.data().begin(), av.data().end());
  double total = 0.0;
  for (double v : av.data()) total += std::exp(v - max);
  const double log_norm = max + std::log(total);
  Tensor out(av.shape());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] - log_norm;
  const std::size_t ia = a.id;
  return a.graph->Record("log_softmax", std::move(out), {ia},
                         [ia](const Graph& graph, std::size_t self,
                              std::vector<Tensor>& adj) {
                           const Tensor& z = graph.value(self);
                           const Tensor& gz = adj[self];
                           double total_grad = 0.0;
                           for (double v : gz.data()) total_grad += v;
                           Tensor& gx = adj[ia];
                           for (std::size_t i = 0; i < z.size(); ++i) {
                             gx[i] += gz[i] - std::exp(z[i]) * total_grad;
                           }
                         });
}

Var CosineSimilarity(Var a, Var b, double eps) {
  Graph& g = SameGraph(a, b, "cosine_similarity");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  RequireMatrix(av, "cosine_similarity");
  RequireMatrix(bv, "cosine_similarity");
  const std::size_t rows = av.rows();
  const std::size_t cols = av.cols();
  const bool shared = bv.rows() == 1 && bv.cols() == cols;
  if (!shared && bv.shape() != av.shape()) {
    throw ShapeError("cosine_similarity: " + ShapeToString(av.shape()) +
                     " vs " + ShapeToString(bv.shape()));
  }
  if (eps < 0.0) throw DomainError("cosine_similarity: negative eps");

  // Squared norms (plus eps) are reused by the backward pass.
  std::vector<double> a_sq(rows), b_sq(rows);
  Tensor out = Tensor::Matrix(rows, 1);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto x = av.row(r);
    const auto y = bv.row(shared ? 0 : r);
    double dot = 0.0, xx = 0.0, yy = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      dot += x[c] * y[c];
      xx += x[c] * x[c];
      yy += y[c] * y[c];
    }
    a_sq[r] = xx + eps;
    b_sq[r] = yy + eps;
    if (a_sq[r] == 0.0 || b_sq[r] == 0.0) {
      throw DomainError("cosine_similarity: zero-norm row with eps = 0");
    }
    out[r] = dot / std::sqrt(a_sq[r] * b_sq[r]);
  }
  const std::size_t ia = a.id;
  const std::size_t ib = b.id;
  return g.Record(
      "cosine_similarity", std::move(out), {ia, ib},
      [ia, ib, rows, cols, shared, a_sq = std::move(a_sq), b_sq = std::move(b_sq)](
          const Graph& graph, std::size_t self, std::vector<Tensor>& adj) {
        const Tensor& x = graph.value(ia);
        const Tensor& y = graph.value(ib);
        const Tensor& z = graph.value(self);
        const Tensor& gz = adj[self];
        Tensor& gx = adj[ia];
        Tensor& gy = adj[ib];
        for (std::size_t r = 0; r < rows; ++r) {
          const std::size_t yr = shared ? 0 : r;
          const double inv_norm = 1.0 / std::sqrt(a_sq[r] * b_sq[r]);
          // d cos / dx = y / (|x||y|) - cos * x / |x|^2, symmetric for y.
          for (std::size_t c = 0; c < cols; ++c) {
            const double xc = x[r * cols + c];
            const double yc = y[yr * cols + c];
            gx[r * cols + c] += gz[r] * (yc * inv_norm - z[r] * xc / a_sq[r]);
            gy[yr * cols + c] += gz[r] * (xc * inv_norm - z[r] * yc / b_sq[r]);
          }
        }
      });
}

Var Concatenate(const std::vector<Var>& parts, int axis) {
  if (parts.empty()) throw ShapeError("concatenate: no operands");
  if (axis != 0 && axis != 1) throw ShapeError("concatenate: axis must be 0/1");
  Graph& g = *parts.front().graph;
  const Tensor& first = parts.front().value();
  RequireMatrix(first, "concatenate");
  std::size_t rows = first.rows();
  std::size_t cols = first.cols();
  std::vector<std::size_t> ids;
  std::vector<std::size_t> extents;  // per-part rows (axis 0) or cols (axis 1)
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const Var v = parts[p];
    SameGraph(parts.front(), v, "concatenate");
    const Tensor& t = v.value();
    RequireMatrix(t, "concatenate");
    const bool ok = axis == 1 ? t.rows() == rows : t.cols() == cols;
    if (!ok) {
      throw ShapeError("concatenate: " + ShapeToString(first.shape()) +
                       " vs " + ShapeToString(t.shape()) + " on axis " +
                       std::to_string(axis));
    }
    ids.push_back(v.id);
    extents.push_back(axis == 1 ? t.cols() : t.rows());
  }
  std::size_t total = 0;
  for (std::size_t e : extents) total += e;
  if (axis == 1) {
    cols = total;
  } else {
    rows = total;
  }
  Tensor out = Tensor::Matrix(rows, cols);
  std::size_t offset = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const Tensor& t = g.value(ids[p]);
    for (std::size_t r = 0; r < t.rows(); ++r) {
      for (std::size_t c = 0; c < t.cols(); ++c) {
        const std::size_t orow = axis == 0 ? offset + r : r;
        const std::size_t ocol = axis == 1 ? offset + c : c;
        out[orow * cols + ocol] = t[r * t.cols() + c];
      }
    }
    offset += extents[p];
  }
  return g.Record(
      "concatenate", std::move(out), ids,
      [ids, extents, axis, cols](const Graph& graph, std::size_t self,
                                 std::vector<Tensor>& adj) {
        const Tensor& gz = adj[self];
        std::size_t off = 0;
        for (std::size_t p = 0; p < ids.size(); ++p) {
          const Tensor& t = graph.value(ids[p]);
          Tensor& gp = adj[ids[p]];
          for (std::size_t r = 0; r < t.rows(); ++r) {
            for (std::size_t c = 0; c < t.cols(); ++c) {
              const std::size_t orow = axis == 0 ? off + r : r;
              const std::size_t ocol = axis == 1 ? off + c : c;
              gp[r * t.cols() + c] += gz[orow * cols + ocol];
            }
          }
          off += extents[p];
        }
      });
}

Var ShiftRows(Var a, int offset) {
  const Tensor& av = a.value();
  RequireMatrix(av, "shift_rows");
  const std::size_t rows = av.rows();
  const std::size_t cols = av.cols();
  Tensor out(av.shape());
  const long n = static_cast<long>(rows);
  for (long r = 0; r < n; ++r) {
    const long src = r - offset;
    if (src < 0 || src >= n) continue;
    for (std::size_t c = 0; c < cols; ++c) {
      out[r * cols + c] = av[src * cols + c];
    }
  }
  const std::size_t ia = a.id;
  return a.graph->Record("shift_rows", std::move(out), {ia},
                         [ia, n, cols, offset](const Graph&, std::size_t self,
                                               std::vector<Tensor>& adj) {
                           const Tensor& gz = adj[self];
                           Tensor& gx = adj[ia];
                           for (long r = 0; r < n; ++r) {
                             const long src = r - offset;
                             if (src < 0 || src >= n) continue;
                             for (std::size_t c = 0; c < cols; ++c) {
                               gx[src * cols + c] += gz[r * cols + c];
                             }
                           }
                         });
}

Var ScalarPick(Var a, std::size_t r, std::size_t c) {
  const Tensor& av = a.value();
  RequireMatrix(av, "scalar_pick");
  if (r >= av.rows() || c >= av.cols()) {
    throw ShapeError("scalar_pick: index (" + std::to_string(r) + ", " +
                     std::to_string(c) + ") outside " +
                     ShapeToString(av.shape()));
  }
  const std::size_t index = r * av.cols() + c;
  const std::size_t ia = a.id;
  return a.graph->Record("scalar_pick", Tensor::Scalar(av[index]), {ia},
                         [ia, index](const Graph&, std::size_t self,
                                     std::vector<Tensor>& adj) {
                           adj[ia][index] += adj[self][0];
                         });
}

}  // namespace rcqa::diffcore
