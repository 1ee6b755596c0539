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
#include "qdiv/statediv.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace qdiv::chandiv {

/// Multi-start ascent parameters. The same seed yields a bitwise-identical
/// restart sequence.
struct OptimizerConfig {
  int restarts = 32;
  int max_iterations = 2000;
  double convergence_tol = 1e-7;
  std::uint64_t seed = 0;
};

/// Best value found together with the input state realizing it. Reported
/// channel divergences are lower estimates of the worst-case supremum.
struct ChannelDivergenceResult {
  statediv::DivergenceValue value;
  PureStateVector witness;
};

/// Worst-case divergence between channel outputs, estimated by multi-start
/// local ascent over pure inputs on R (x) A with |R| = |A|. Deterministic
/// given cfg.seed. Extra starting points may be supplied via seed_inputs.
ChannelDivergenceResult channel_divergence(
    const QuantumChannel& n, const QuantumChannel& m,
    const statediv::DivergenceKind& kind, const OptimizerConfig& cfg,
    std::span<const PureStateVector> seed_inputs = {});

/// Per-copy lower estimates a_k = (1/k) D(N^(x)k || M^(x)k) for k = 1..n_max.
/// The k-copy search is seeded with the product of the smaller witnesses.
struct RegularizedPoint {
  int copies;
  double per_copy_value;
  PureStateVector witness;
};
std::vector<RegularizedPoint> regularized_estimate(const QuantumChannel& n,
                                                   const QuantumChannel& m,
                                                   const statediv::DivergenceKind& kind,
                                                   int n_max, const OptimizerConfig& cfg);

/// Certified lower bound on the amortized channel divergence with a finite
/// reference system: sup over ascended pairs of D(N(psi)||M(phi)) - D(psi||phi).
/// Only the Umegaki and Sandwiched families are supported. Extra starting
/// pairs (psi, phi) may be supplied; the search is always also seeded with the
/// one-shot witness duplicated (making the result dominate the one-shot value)
/// and with the identical maximally-mixed pair.
struct AmortizedResult {
  double value;
  DensityOperator input_null;
  DensityOperator input_alt;
};
using StatePair = std::pair<DensityOperator, DensityOperator>;
AmortizedResult amortized_lowerbound(const QuantumChannel& n, const QuantumChannel& m,
                                     const statediv::DivergenceKind& kind, int ref_dim,
                                     const OptimizerConfig& cfg,
                                     std::span<const StatePair> seed_pairs = {});

/// Max-relative entropy between the (normalized) Choi matrices.
statediv::DivergenceValue choi_dmax(const QuantumChannel& n, const QuantumChannel& m);

/// True iff the smallest Choi eigenvalue exceeds 1e-10.
bool positivity_check(const QuantumChannel& n);

/// Convex split N = (1-eps) residual + eps R_tau with tau maximally mixed and
/// b = 1 - eps + ||tau||_inf eps, the per-copy output infinity-norm bound.
struct ReplacerDecomposition {
  double epsilon;
  DensityOperator tau;
  QuantumChannel residual_channel;
  double b;
};
ReplacerDecomposition replacer_decomposition(const QuantumChannel& n);

/// Combines bipartite inputs on (Ra,Aa) and (Rb,Ab) into one bipartite input
/// on (Ra*Rb, Aa*Ab); used to seed k-copy searches with product ansatz.
PureStateVector product_input_seed(const PureStateVector& a, const PureStateVector& b);

namespace detail {

/// Derivative-free ascent on the unit sphere of R^n: central-difference
/// gradients (step 1e-5) with a backtracking line search, renormalizing after
/// each accepted step. Stops at max_iterations, on repeated improvements below
/// tol, or immediately when the objective reaches +infinity.
struct AscentOutcome {
  Eigen::VectorXd point;
  double value;
};
AscentOutcome sphere_ascend(const std::function<double(const Eigen::VectorXd&)>& objective,
                            Eigen::VectorXd start, int max_iterations, double tol);

}  // namespace detail

}  // namespace qdiv::chandiv
