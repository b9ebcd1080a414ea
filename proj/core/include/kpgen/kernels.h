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

// Forward kernels shared by the autodiff graph and the inference path.

#ifndef KPGEN_KERNELS_H_
#define KPGEN_KERNELS_H_

#include <cmath>
#include <limits>

#include "kpgen/embedding.h"

namespace kpgen::kernels {

// In-place row-wise softmax.
inline void softmax_rows(RowMatrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    const double mx = row.maxCoeff();
    if (mx == -std::numeric_limits<double>::infinity()) {
      row.setZero();
      continue;
    }
    row = (row.array() - mx).exp();
    row /= row.sum();
  }
}

// Row-wise layer normalization; writes normalized inputs to *xhat and the
// per-row inverse standard deviation to *inv_std when requested.
inline RowMatrix layer_norm(const RowMatrix& x, const RowMatrix& gain,
                            const RowMatrix& bias, double eps,
                            RowMatrix* xhat = nullptr,
                            Eigen::VectorXd* inv_std = nullptr) {
  const Eigen::Index n = x.cols();
  RowMatrix norm(x.rows(), n);
  if (inv_std) inv_std->resize(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double mean = x.row(r).mean();
    const double var = (x.row(r).array() - mean).square().sum() / n;
    const double is = 1.0 / std::sqrt(var + eps);
    norm.row(r) = (x.row(r).array() - mean) * is;
    if (inv_std) (*inv_std)[r] = is;
  }
  RowMatrix y = (norm.array().rowwise() * gain.row(0).array()).rowwise() +
                bias.row(0).array();
  if (xhat) *xhat = std::move(norm);
  return y;
}

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace kpgen::kernels

#endif  // KPGEN_KERNELS_H_
