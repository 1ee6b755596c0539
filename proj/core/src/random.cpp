// Copyright 2026 The qdiv Authors
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

#include "qdiv/random.hpp"

#include <cmath>

namespace qdiv {

Matrix random_complex_matrix(Rng& rng, int rows, int cols) {
  Matrix g(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) g(r, c) = rng.complex_normal();
  return g;
}

DensityOperator random_density(Rng& rng, DimList dims) {
  const int d = total_dim(dims);
  const Matrix g = random_complex_matrix(rng, d, d);
  Matrix w = g * g.adjoint();
  w /= w.trace().real();
  return DensityOperator(std::move(w), std::move(dims));
}

PureStateVector random_pure(Rng& rng, DimList dims) {
  const int d = total_dim(dims);
  CVector v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.complex_normal();
  v /= v.norm();
  return PureStateVector(std::move(v), std::move(dims));
}

Matrix random_unitary(Rng& rng, int dim) {
  const Matrix g = random_complex_matrix(rng, dim, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    const Complex diag = r(c, c);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(c) *= diag / mag;
  }
  return q;
}

QuantumChannel random_channel(Rng& rng, int dim_in, int dim_out, int env_dim) {
  if (env_dim <= 0) env_dim = dim_in * dim_out;
  const int dilated = dim_out * env_dim;
  if (dilated < dim_in)
    throw std::invalid_argument("random_channel: environment too small for an isometry");
  // isometry V: columns are the first dim_in columns of a Haar-like unitary
  const Matrix u = random_unitary(rng, dilated);
  const Matrix v = u.leftCols(dim_in);
  std::vector<Matrix> kraus;
  kraus.reserve(static_cast<std::size_t>(env_dim));
  // row (b, e) of V with e fixed forms Kraus operator K_e
  for (int e = 0; e < env_dim; ++e) {
    Matrix k(dim_out, dim_in);
    for (int b = 0; b < dim_out; ++b) k.row(b) = v.row(b * env_dim + e);
    kraus.push_back(std::move(k));
  }
  return QuantumChannel(std::move(kraus));
}

HermitianOperator random_test_operator(Rng& rng, DimList dims) {
  const int d = total_dim(dims);
  const Matrix u = random_unitary(rng, d);
  RVector values(d);
  for (int i = 0; i < d; ++i) values[i] = rng.uniform();
  Matrix m = u * values.asDiagonal() * u.adjoint();
  return HermitianOperator(std::move(m), std::move(dims));
}

HermitianOperator random_hermitian(Rng& rng, DimList dims) {
  const int d = total_dim(dims);
  const Matrix g = random_complex_matrix(rng, d, d);
  Matrix m = (g + g.adjoint()) * 0.5;
  return HermitianOperator(std::move(m), std::move(dims));
}

}  // namespace qdiv
