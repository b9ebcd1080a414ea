// Copyright 2026 The kpgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KPGEN_GRAPH_H_
#define KPGEN_GRAPH_H_

#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "kpgen/embedding.h"

namespace kpgen {

using Matrix = RowMatrix;

// A trainable tensor. Gradients accumulate into `grad` across backward passes
// until cleared by the optimizer.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

// Reverse-mode automatic differentiation over dense row-major matrices.
// Operations are recorded in creation order, which is a topological order, so
// backward() is a single reverse sweep. A Graph is single-use and must not be
// moved once operations have been recorded.
class Graph {
 public:
  struct Var {
    int id = -1;
  };

  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var constant(Matrix value);
  // Leaf bound to a parameter; its gradient flows into param.grad.
  Var param(Parameter& p);
  // Rows of an embedding table, with sparse gradient accumulation.
  Var gather_rows(Parameter& table, std::span<const int> ids);

  Var matmul(Var a, Var b);
  // a * b^T
  Var matmul_nt(Var a, Var b);
  Var add(Var a, Var b);
  // Adds a 1 x n row to every row of a.
  Var add_row(Var a, Var row);
  Var scale(Var a, double s);
  Var relu(Var a);
  Var tanh(Var a);
  Var sigmoid(Var a);
  Var layer_norm(Var x, Var gain, Var bias, double eps = 1e-5);
  // Row-wise softmax of (a + mask) where mask is an additive constant (0 or
  // -infinity entries); pass nullptr for no mask.
  Var softmax_rows(Var a, const Matrix* mask = nullptr);
  Var concat_cols(std::span<const Var> parts);
  Var slice_cols(Var a, int begin, int count);
  Var dropout(Var a, double rate, std::mt19937_64& rng);
  Var sum(std::span<const Var> scalars);

  // Negative log-likelihood of the copy/generate mixture, summed over rows:
  //   P_t(w) = g_t * vocab[t, w] + (1 - g_t) * sum_{i : source[i] == w} attn[t, i]
  //   loss   = -sum_t log P_t(target[t])
  // vocab is T x |V|, attn is T x S, gate is T x 1. Targets with id >= |V|
  // receive no generation mass.
  Var copy_mix_nll(Var vocab, Var attn, Var gate, std::span<const int> source,
                   std::span<const int> target);

  const Matrix& value(Var v) const;
  // Gradient of a non-parameter node after backward().
  const Matrix& grad(Var v) const { return nodes_[v.id].grad; }

  // Seeds d(out)/d(out) = 1 for a 1 x 1 node and propagates.
  void backward(Var out);

  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    const Matrix* value_ref = nullptr;
    Matrix* grad_ref = nullptr;
    std::function<void()> backward;
  };

  Var push(Matrix value);
  const Matrix& val(int id) const;
  Matrix& grad_of(int id);
  bool has_grad(int id) const;

  std::vector<Node> nodes_;
};

}  // namespace kpgen

#endif  // KPGEN_GRAPH_H_
