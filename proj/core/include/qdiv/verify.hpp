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

#include "qdiv/chandiv.hpp"
#include "qdiv/qmat.hpp"

#include <cstdint>
#include <span>
#include <string>

namespace qdiv::verify {

/// Outcome of a property check. A trial counts as a violation when the
/// asserted inequality fails by more than the check's tolerance, and
/// worst_margin records the largest such excess (nonpositive iff clean).
struct CheckReport {
  std::string name;
  int trials = 0;
  int violations = 0;
  double worst_margin = 0.0;
  std::string witness;
  std::uint64_t seed = 0;
};

inline constexpr double kDefaultTolerance = 1e-9;

/// tr(M-N)_+ <= tr M_+ + tr N_+ - tr N on random Hermitian pairs.
CheckReport check_twomat(int trials, int dim, std::uint64_t seed);

/// Hypothesis-testing lower bound from the Petz divergence at alpha in (0,1),
/// including the binary-entropy tightness margin over the prior bound.
CheckReport check_boundsdmin(int trials, int dim, std::uint64_t seed);

/// Hypothesis-testing upper bound from the sandwiched divergence at alpha > 1.
CheckReport check_dh_sandwiched(int trials, int dim, std::uint64_t seed);

/// Permutation-symmetric large-deviation bound on tr(rho_n - 2^(mu n) sigma_n)_+
/// for i.i.d. states, verified pointwise on a (mu, r, s) grid.
CheckReport check_ubd(const DensityOperator& rho, const DensityOperator& sigma, int copies,
                      std::span<const double> mu_grid, std::span<const double> r_grid,
                      std::span<const double> s_grid);

/// Symmetrizing the input of a two-copy strategy cannot lower the
/// hypothesis-testing divergence of the testing states.
CheckReport check_symmetrization(const QuantumChannel& n, const QuantumChannel& m,
                                 double eps, int trials, std::uint64_t seed);

/// ||N^(x)k (rho)||_inf <= b^k with b from the replacer decomposition.
CheckReport check_infnorm_bound(const QuantumChannel& n, int copies, int trials,
                                std::uint64_t seed);

/// The variance-bound counterexample: sigma = I/d, tau = t P + 3t (I-P) with
/// t = 1/(2d) and tr P = d/2. lhs is the log-variance f_sigma(tau), rhs the
/// claimed bound ||sigma||_inf log^2(1 + 1/t - d); violated when lhs > rhs.
struct GltRecord {
  int d;
  double lhs;
  double rhs;
  bool violated;
};
GltRecord counterexample_glt(int d);

/// Smallest even dimension at which the bound is violated.
int counterexample_glt_minimal_d(int d_limit = 1024);

/// a_1 <= a_2 (regularized estimates, Umegaki) and the amortized lower bound
/// dominates a_1, within optimizer slack.
CheckReport check_order_relation(const QuantumChannel& n, const QuantumChannel& m,
                                 const chandiv::OptimizerConfig& cfg);

/// Petz and sandwiched divergences approach the Umegaki value as alpha -> 1,
/// with the deviation bounded by a per-instance slope estimate.
CheckReport check_continuity(int trials, int dim, std::uint64_t seed);

}  // namespace qdiv::verify
