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

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdiv {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using DimList = std::vector<int>;

/// Raised when a computation would exceed the dense-dimension budget.
struct resource_limit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a scalar function is undefined at an eigenvalue.
struct spectral_domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

namespace tol {
inline constexpr double hermiticity = 1e-12;  // relative to max-norm
inline constexpr double psd_clamp = 1e-10;    // eigenvalues above -psd_clamp are clamped to 0
inline constexpr double trace_one = 1e-10;
inline constexpr double unit_norm = 1e-12;
inline constexpr double cptp = 1e-9;
inline constexpr double choi_psd = 1e-10;
inline constexpr double support_rank = 1e-10;  // relative to largest eigenvalue
inline constexpr double permutation_invariance = 1e-9;
inline constexpr int dense_dim_limit = 256;
}  // namespace tol

int total_dim(const DimList& dims);

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
struct EigenSystem {
  RVector values;
  Matrix vectors;  // column k pairs with values[k]
};

EigenSystem eigh(const Matrix& m);

/// Dense complex square matrix with verified Hermiticity and a subsystem
/// dimension profile whose product equals the matrix dimension.
class HermitianOperator {
 public:
  HermitianOperator(Matrix data, DimList dims);

  static HermitianOperator identity(DimList dims);
  static HermitianOperator zero(DimList dims);

  const Matrix& matrix() const { return data_; }
  const DimList& dims() const { return dims_; }
  int dim() const { return static_cast<int>(data_.rows()); }
  double trace() const { return data_.trace().real(); }

  /// Same operator, new subsystem profile (total dimension must not change).
  HermitianOperator reshaped(DimList dims) const;

 private:
  Matrix data_;
  DimList dims_;
};

/// Positive semidefinite, unit-trace Hermitian operator. Eigenvalues in
/// [-1e-10, 0] are clamped to zero on construction and the spectrum is cached.
class DensityOperator {
 public:
  explicit DensityOperator(HermitianOperator op);
  DensityOperator(Matrix data, DimList dims)
      : DensityOperator(HermitianOperator(std::move(data), std::move(dims))) {}

  static DensityOperator maximally_mixed(DimList dims);
  static DensityOperator basis_state(DimList dims, int index);

  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  const DimList& dims() const { return op_.dims(); }
  int dim() const { return op_.dim(); }
  const EigenSystem& spectrum() const { return eig_; }

  DensityOperator reshaped(DimList dims) const;

 private:
  DensityOperator(HermitianOperator op, EigenSystem eig)
      : op_(std::move(op)), eig_(std::move(eig)) {}

  HermitianOperator op_;
  EigenSystem eig_;
};

/// Unit-norm complex amplitude vector over a subsystem profile.
class PureStateVector {
 public:
  PureStateVector(CVector amplitudes, DimList dims);

  static PureStateVector basis_state(DimList dims, int index);
  /// Normalized maximally entangled state on (d, d).
  static PureStateVector maximally_entangled(int d);

  const CVector& amplitudes() const { return amp_; }
  const DimList& dims() const { return dims_; }
  int dim() const { return static_cast<int>(amp_.size()); }

  DensityOperator to_density() const;

 private:
  CVector amp_;
  DimList dims_;
};

/// CPTP map stored as a Kraus list with a cached Choi matrix.
///
/// Choi convention: J = sum_{ij} N(|i><j|) (x) |i><j|, so the Choi profile is
/// (dim_out, dim_in) and tracing out the first (output) factor yields the
/// identity on the input replica.
class QuantumChannel {
 public:
  explicit QuantumChannel(std::vector<Matrix> kraus);

  static QuantumChannel identity(int dim);
  /// Discards the input and outputs tau.
  static QuantumChannel replacer(const DensityOperator& tau, int dim_in);
  /// (1-p) id + p replacer(maximally mixed).
  static QuantumChannel depolarizing(double p, int dim);
  static QuantumChannel from_choi(const HermitianOperator& choi, int dim_in,
                                  int dim_out);

  const std::vector<Matrix>& kraus() const { return kraus_; }
  const HermitianOperator& choi() const { return choi_; }
  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }

 private:
  std::vector<Matrix> kraus_;
  int dim_in_;
  int dim_out_;
  HermitianOperator choi_;
};

// ---------------------------------------------------------------------------
// Spectral calculus
// ---------------------------------------------------------------------------

enum class KernelPolicy {
  restrict_to_support,  // f applied on the support, kernel mapped to 0
  error_on_kernel,      // f evaluated everywhere; non-finite value -> error
  map_zero_to_zero,     // kernel eigenvalues mapped to 0 without calling f
};

/// f applied to the eigenvalues of h, reassembled in the same eigenbasis.
/// Eigenvalues within the relative support threshold of zero are treated as
/// kernel per the chosen policy.
HermitianOperator matrix_function(const HermitianOperator& h,
                                  const std::function<double(double)>& f,
                                  KernelPolicy policy);

/// Sum of the positive eigenvalues (tr X_+).
double positive_part_trace(const HermitianOperator& x);
double positive_part_trace(const Matrix& x);

/// Sum of |eigenvalues| (trace norm of a Hermitian operator).
double trace_norm(const HermitianOperator& x);

// ---------------------------------------------------------------------------
// Tensor algebra
// ---------------------------------------------------------------------------

/// Kronecker product with concatenated dims profiles.
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
PureStateVector tensor(const PureStateVector& a, const PureStateVector& b);
QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b);

HermitianOperator tensor_power(const HermitianOperator& a, int n);
DensityOperator tensor_power(const DensityOperator& a, int n);
QuantumChannel tensor_power(const QuantumChannel& a, int n);

/// Partial trace onto the subsystems listed in `keep` (ascending order of the
/// original profile). Trace is preserved.
HermitianOperator partial_trace(const HermitianOperator& x,
                                std::span<const int> keep);

/// Reorders subsystems: new position j holds old subsystem new_to_old[j].
HermitianOperator permute_subsystems(const HermitianOperator& x,
                                     std::span<const int> new_to_old);
CVector permute_subsystem_vector(const CVector& v, const DimList& dims,
                                 std::span<const int> new_to_old);

// ---------------------------------------------------------------------------
// Channel action
// ---------------------------------------------------------------------------

/// Kraus operators of `chan` lifted to act on the `acting` subsystems of a
/// space with profile `dims` (identity elsewhere). `acting` must be ascending
/// and its dimensions must multiply to chan.dim_in(). Also reports the output
/// profile: the acting block is replaced by one subsystem of size dim_out at
/// the position of the first acting index.
struct LiftedKraus {
  std::vector<Matrix> ops;
  DimList out_dims;
};
LiftedKraus lift_kraus(const QuantumChannel& chan, const DimList& dims,
                       std::span<const int> acting);

/// Kraus-sum action on the selected subsystems, identity elsewhere.
DensityOperator apply_channel(const QuantumChannel& chan,
                              const DensityOperator& rho,
                              std::span<const int> acting);

/// Same action for a pure input, avoiding the intermediate density matrix.
DensityOperator apply_lifted(const LiftedKraus& lifted, const CVector& psi);
DensityOperator apply_lifted(const LiftedKraus& lifted, const Matrix& rho);

// ---------------------------------------------------------------------------
// Permutation symmetry
// ---------------------------------------------------------------------------

/// Uniform average over all permutations of the n copies. The profile is
/// split into n equal consecutive blocks which are permuted as units.
DensityOperator symmetrize(const DensityOperator& psi, int copies);

/// Largest deviation of psi from invariance under block transpositions.
double permutation_invariance_defect(const DensityOperator& psi, int copies);

/// Canonical purification of a permutation-invariant state: the vectorized
/// square root of omega against a mirror copy. The output profile is omega's
/// profile followed by the mirror profile, and the purification lies in the
/// symmetric subspace of the n doubled blocks.
PureStateVector symmetric_purification(const DensityOperator& omega, int copies);

}  // namespace qdiv
