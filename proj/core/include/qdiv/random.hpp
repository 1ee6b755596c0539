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

#pragma once

#include "qdiv/qmat.hpp"
#include "qdiv/rng.hpp"

namespace qdiv {

/// Hilbert-Schmidt distributed density operator: G G^dag / tr with G a matrix
/// of unit-variance complex normal entries. Full rank almost surely.
DensityOperator random_density(Rng& rng, DimList dims);

/// Haar-distributed pure state.
PureStateVector random_pure(Rng& rng, DimList dims);

/// Random CPTP map via isometry dilation: QR of a complex Gaussian
/// (dim_out * env_dim) x dim_in block, Kraus operators indexed by the
/// environment basis. env_dim defaults to dim_in * dim_out, which makes the
/// Choi matrix generically full rank (a positive definite channel).
QuantumChannel random_channel(Rng& rng, int dim_in, int dim_out, int env_dim = 0);

/// Random test operator with eigenvalues uniform in [0, 1].
HermitianOperator random_test_operator(Rng& rng, DimList dims);

/// Hermitian matrix with complex normal entries (Gaussian unitary ensemble
/// scaling, eigenvalues of order sqrt(dim)).
HermitianOperator random_hermitian(Rng& rng, DimList dims);

Matrix random_complex_matrix(Rng& rng, int rows, int cols);

/// Unitary from the QR decomposition of a complex Gaussian matrix, with the
/// phase convention that makes R's diagonal positive (Haar-like).
Matrix random_unitary(Rng& rng, int dim);

}  // namespace qdiv
