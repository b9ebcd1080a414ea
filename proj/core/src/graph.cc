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

#include "kpgen/graph.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kpgen/kernels.h"

namespace kpgen {

Graph::Var Graph::push(Matrix value) {
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

const Matrix& Graph::val(int id) const {
  const Node& n = nodes_[id];
  return n.value_ref ? *n.value_ref : n.value;
}

const Matrix& Graph::value(Var v) const { return val(v.id); }

Matrix& Graph::grad_of(int id) {
  Node& n = nodes_[id];
  if (n.grad_ref) return *n.grad_ref;
  if (n.grad.size() == 0) {
    const Matrix& v = val(id);
    n.grad.setZero(v.rows(), v.cols());
  }
  return n.grad;
}

bool Graph::has_grad(int id) const {
  const Node& n = nodes_[id];
  return n.grad_ref != nullptr || n.grad.size() != 0;
}

Graph::Var Graph::constant(Matrix value) { return push(std::move(value)); }

Graph::Var Graph::param(Parameter& p) {
  if (p.grad.rows() != p.value.rows() || p.grad.cols() != p.value.cols()) {
    p.zero_grad();
  }
  Node node;
  node.value_ref = &p.value;
  node.grad_ref = &p.grad;
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Graph::Var Graph::gather_rows(Parameter& table, std::span<const int> ids) {
  if (table.grad.rows() != table.value.rows() ||
      table.grad.cols() != table.value.cols()) {
    table.zero_grad();
  }
  Matrix out(static_cast<Eigen::Index>(ids.size()), table.value.cols());
  for (size_t r = 0; r < ids.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = table.value.row(ids[r]);
  }
  Var v = push(std::move(out));
  std::vector<int> rows(ids.begin(), ids.end());
  nodes_[v.id].backward = [this, v, &table, rows = std::move(rows)] {
    const Matrix& g = grad_of(v.id);
    for (size_t r = 0; r < rows.size(); ++r) {
      table.grad.row(rows[r]) += g.row(static_cast<Eigen::Index>(r));
    }
  };
  return v;
}

Graph::Var Graph::matmul(Var a, Var b) {
  if (val(a.id).cols() != val(b.id).rows()) {
    throw std::invalid_argument("matmul: shape mismatch");
  }
  Var v = push(val(a.id) * val(b.id));
  nodes_[v.id].backward = [this, v, a, b] {
    const Matrix& g = grad_of(v.id);
    grad_of(a.id).noalias() += g * val(b.id).transpose();
    grad_of(b.id).noalias() += val(a.id).transpose() * g;
  };
  return v;
}

Graph::Var Graph::matmul_nt(Var a, Var b) {
  if (val(a.id).cols() != val(b.id).cols()) {
    throw std::invalid_argument("matmul_nt: shape mismatch");
  }
  Var v = push(val(a.id) * val(b.id).transpose());
  nodes_[v.id].backward = [this, v, a, b] {
    const Matrix& g = grad_of(v.id);
    grad_of(a.id).noalias() += g * val(b.id);
    grad_of(b.id).noalias() += g.transpose() * val(a.id);
  };
  return v;
}

Graph::Var Graph::add(Var a, Var b) {
  if (val(a.id).rows() != val(b.id).rows() ||
      val(a.id).cols() != val(b.id).cols()) {
    throw std::invalid_argument("add: shape mismatch");
  }
  Var v = push(val(a.id) + val(b.id));
  nodes_[v.id].backward = [this, v, a, b] {
    const Matrix& g = grad_of(v.id);
    grad_of(a.id) += g;
    grad_of(b.id) += g;
  };
  return v;
}

Graph::Var Graph::add_row(Var a, Var row) {
  if (val(row.id).rows() != 1 || val(row.id).cols() != val(a.id).cols()) {
    throw std::invalid_argument("add_row: shape mismatch");
  }
  Matrix out = val(a.id);
  out.rowwise() += val(row.id).row(0);
  Var v = push(std::move(out));
  nodes_[v.id].backward = [this, v, a, row] {
    const Matrix& g = grad_of(v.id);
    grad_of(a.id) += g;
    grad_of(row.id) += g.colwise().sum();
  };
  return v;
}

Graph::Var Graph::scale(Var a, double s) {
  Var v = push(val(a.id) * s);
  nodes_[v.id].backward = [this, v, a, s] {
    grad_of(a.id) += grad_of(v.id) * s;
  };
  return v;
}

Graph::Var Graph::relu(Var a) {
  Var v = push(val(a.id).cwiseMax(0.0));
  nodes_[v.id].backward = [this, v, a] {
    const Matrix& g = grad_of(v.id);
    grad_of(a.id).array() +=
        g.array() * (val(a.id).array() > 0.0).cast<double>();
  };
  return v;
}

Graph::Var Graph::tanh(Var a) {
  Var v = push(val(a.id).array().tanh().matrix());
  nodes_[v.id].backward = [this, v, a] {
    const Matrix& y = val(v.id);
    grad_of(a.id).array() += grad_of(v.id).array() * (1.0 - y.array().square());
  };
  return v;
}

Graph::Var Graph::sigmoid(Var a) {
  Matrix out = val(a.id).unaryExpr([](double x) { return kernels::sigmoid(x); });
  Var v = push(std::move(out));
  nodes_[v.id].backward = [this, v, a] {
    const Matrix& y = val(v.id);
    grad_of(a.id).array() +=
        grad_of(v.id).array() * y.array() * (1.0 - y.array());
  };
  return v;
}

Graph::Var Graph::layer_norm(Var x, Var gain, Var bias, double eps) {
  Matrix xhat;
  Eigen::VectorXd inv_std;
  Matrix out =
      kernels::layer_norm(val(x.id), val(gain.id), val(bias.id), eps, &xhat, &inv_std);
  Var v = push(std::move(out));
  nodes_[v.id].backward = [this, v, x, gain, bias, xhat = std::move(xhat),
                           inv_std = std::move(inv_std)] {
    const Matrix& g = grad_of(v.id);
    grad_of(gain.id) += (g.array() * xhat.array()).colwise().sum().matrix();
    grad_of(bias.id) += g.colwise().sum();
    const Matrix dxhat =
        (g.array().rowwise() * val(gain.id).row(0).array()).matrix();
    const double n = static_cast<double>(g.cols());
    Matrix& gx = grad_of(x.id);
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      const double mean_d = dxhat.row(r).sum() / n;
      const double mean_dx = dxhat.row(r).dot(xhat.row(r)) / n;
      gx.row(r).array() += inv_std[r] * (dxhat.row(r).array() - mean_d -
                                         xhat.row(r).array() * mean_dx);
    }
  };
  return v;
}

Graph::Var Graph::softmax_rows(Var a, const Matrix* mask) {
  Matrix out = val(a.id);
  if (mask) {
    if (mask->rows() != out.rows() || mask->cols() != out.cols()) {
      throw std::invalid_argument("softmax_rows: mask shape mismatch");
    }
    out += *mask;
  }
  kernels::softmax_rows(out);
  Var v = push(std::move(out));
  nodes_[v.id].backward = [this, v, a] {
    const Matrix& y = val(v.id);
    const Matrix& g = grad_of(v.id);
    const Eigen::VectorXd dot = (g.array() * y.array()).rowwise().sum();
    grad_of(a.id).array() +=
        y.array() * (g.array().colwise() - dot.array());
  };
  return v;
}

Graph::Var Graph::concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: no inputs");
  const Eigen::Index rows = val(parts[0].id).rows();
  Eigen::Index cols = 0;
  for (Var p : parts) {
    if (val(p.id).rows() != rows) {
      throw std::invalid_argument("concat_cols: row mismatch");
    }
    cols += val(p.id).cols();
  }
  Matrix out(rows, cols);
  Eigen::Index offset = 0;
  for (Var p : parts) {
    out.middleCols(offset, val(p.id).cols()) = val(p.id);
    offset += val(p.id).cols();
  }
  Var v = push(std::move(out));
  std::vector<Var> inputs(parts.begin(), parts.end());
  nodes_[v.id].backward = [this, v, inputs = std::move(inputs)] {
    const Matrix& g = grad_of(v.id);
    Eigen::Index off = 0;
    for (Var p : inputs) {
      const Eigen::Index c = val(p.id).cols();
      grad_of(p.id) += g.middleCols(off, c);
      off += c;
    }
  };
  return v;
}

Graph::Var Graph::slice_cols(Var a, int begin, int count) {
  if (begin < 0 || count < 0 || begin + count > val(a.id).cols()) {
    throw std::invalid_argument("slice_cols: out of range");
  }
  Var v = push(val(a.id).middleCols(begin, count));
  nodes_[v.id].backward = [this, v, a, begin, count] {
    grad_of(a.id).middleCols(begin, count) += grad_of(v.id);
  };
  return v;
}

Graph::Var Graph::dropout(Var a, double rate, std::mt19937_64& rng) {
  if (rate <= 0) return a;
  std::bernoulli_distribution keep(1.0 - rate);
  const Matrix& x = val(a.id);
  Matrix mask(x.rows(), x.cols());
  const double scale = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    mask.data()[i] = keep(rng) ? scale : 0.0;
  }
  Var v = push(x.cwiseProduct(mask));
  nodes_[v.id].backward = [this, v, a, mask = std::move(mask)] {
    grad_of(a.id) += grad_of(v.id).cwiseProduct(mask);
  };
  return v;
}

Graph::Var Graph::sum(std::span<const Var> scalars) {
  double total = 0;
  for (Var s : scalars) total += val(s.id)(0, 0);
  Var v = push(Matrix::Constant(1, 1, total));
  std::vector<Var> inputs(scalars.begin(), scalars.end());
  nodes_[v.id].backward = [this, v, inputs = std::move(inputs)] {
    const double g = grad_of(v.id)(0, 0);
    for (Var s : inputs) grad_of(s.id)(0, 0) += g;
  };
  return v;
}

Graph::Var Graph::copy_mix_nll(Var vocab, Var attn, Var gate,
                               std::span<const int> source,
                               std::span<const int> target) {
  const Matrix& pv = val(vocab.id);
  const Matrix& pa = val(attn.id);
  const Matrix& pg = val(gate.id);
  const Eigen::Index steps = static_cast<Eigen::Index>(target.size());
  if (pv.rows() != steps || pa.rows() != steps || pg.rows() != steps ||
      pg.cols() != 1 || pa.cols() != static_cast<Eigen::Index>(source.size())) {
    throw std::invalid_argument("copy_mix_nll: shape mismatch");
  }
  const int vocab_size = static_cast<int>(pv.cols());
  Eigen::VectorXd gen(steps), copy(steps), prob(steps);
  double loss = 0;
  for (Eigen::Index t = 0; t < steps; ++t) {
    const int y = target[t];
    gen[t] = y < vocab_size ? pv(t, y) : 0.0;
    double c = 0;
    for (size_t i = 0; i < source.size(); ++i) {
      if (source[i] == y) c += pa(t, static_cast<Eigen::Index>(i));
    }
    copy[t] = c;
    const double g = pg(t, 0);
    prob[t] = g * gen[t] + (1.0 - g) * c;
    loss -= prob[t] > 0 ? std::log(prob[t])
                        : -std::numeric_limits<double>::infinity();
  }
  Var v = push(Matrix::Constant(1, 1, loss));
  std::vector<int> src(source.begin(), source.end());
  std::vector<int> tgt(target.begin(), target.end());
  nodes_[v.id].backward = [this, v, vocab, attn, gate, vocab_size,
                           src = std::move(src), tgt = std::move(tgt),
                           gen = std::move(gen), copy = std::move(copy),
                           prob = std::move(prob)] {
    const double upstream = grad_of(v.id)(0, 0);
    Matrix& gv = grad_of(vocab.id);
    Matrix& ga = grad_of(attn.id);
    Matrix& gg = grad_of(gate.id);
    const Matrix& pg = val(gate.id);
    for (size_t t = 0; t < tgt.size(); ++t) {
      const auto r = static_cast<Eigen::Index>(t);
      const double dp = -upstream / prob[r];
      const double g = pg(r, 0);
      const int y = tgt[t];
      if (y < vocab_size) gv(r, y) += dp * g;
      for (size_t i = 0; i < src.size(); ++i) {
        if (src[i] == y) ga(r, static_cast<Eigen::Index>(i)) += dp * (1.0 - g);
      }
      gg(r, 0) += dp * (gen[r] - copy[r]);
    }
  };
  return v;
}

void Graph::backward(Var out) {
  if (val(out.id).rows() != 1 || val(out.id).cols() != 1) {
    throw std::invalid_argument("backward: output must be a scalar");
  }
  grad_of(out.id)(0, 0) += 1.0;
  for (int i = out.id; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.backward && has_grad(i)) n.backward();
  }
}

}  // namespace kpgen
