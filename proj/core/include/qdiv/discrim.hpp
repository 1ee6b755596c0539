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
#include "qdiv/statediv.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace qdiv::discrim {

/// Inputs sent to the channel uses one at a time; each input carries its own
/// reference subsystems, the channel acts on the last subsystem.
struct ProductStrategy {
  std::vector<DensityOperator> inputs;
};

/// One joint input whose trailing `copies` subsystems feed the channel uses.
struct CoherentStrategy {
  DensityOperator input;
};

/// Adaptive strategy: initial state on (R_1, A_1), then update channels
/// P_k : R_k B_k -> R_{k+1} A_{k+1} interleaved with the channel uses. Each
/// update's output dimension must factor as r_{k+1} * dim_in.
struct SequentialStrategy {
  DensityOperator initial;
  std::vector<QuantumChannel> updates;
};

using Strategy = std::variant<ProductStrategy, CoherentStrategy, SequentialStrategy>;

struct ErrorPair {
  double type1;
  double type2;
};

/// Binary test 0 <= op <= I (eigenvalues clamped within 1e-10 slack).
class TestOperator {
 public:
  explicit TestOperator(HermitianOperator op);
  const HermitianOperator& op() const { return op_; }

 private:
  HermitianOperator op_;
};

/// Testing states (rho_n, sigma_n) generated by `copies` uses of n or m.
std::pair<DensityOperator, DensityOperator> generate_testing_states(
    const Strategy& strategy, const QuantumChannel& n, const QuantumChannel& m,
    int copies);

/// (tr[(I - test) rho], tr[test sigma]).
ErrorPair error_pair(const std::pair<DensityOperator, DensityOperator>& states,
                     const TestOperator& test);

/// -(1/copies) log of the optimal Type II error at Type I budget eps for the
/// given strategy's testing states.
double optimal_type2(const Strategy& strategy, const QuantumChannel& n,
                     const QuantumChannel& m, int copies, double eps);

enum class StrategyClass { product, coherent };

/// Per-copy hypothesis-testing rates toward the Stein exponent. The product
/// class repeats the single-copy optimal witness (the i.i.d. achievability
/// scheme); the coherent class optimizes the joint input at each copy count,
/// seeded with the product of smaller witnesses.
struct SteinPoint {
  int copies;
  double rate;
  PureStateVector witness;
};
std::vector<SteinPoint> stein_sequence(const QuantumChannel& n, const QuantumChannel& m,
                                       double eps, int n_max, StrategyClass cls,
                                       const chandiv::OptimizerConfig& cfg);

/// Rate r and a divergence curve alpha -> D_alpha over the declared domain.
struct ExponentQuery {
  double rate;
  std::function<double(double)> curve;
  double alpha_min = 1.0 / 64.0;  // err_exponent domain floor
  double alpha_max = 64.0;        // sc_exponent domain ceiling
};

/// sup_{alpha > 1} ((alpha-1)/alpha) (r - curve(alpha)), computed on a
/// logarithmic alpha grid with golden-section refinement in u = 1 - 1/alpha
/// plus both endpoint limits. Always nonnegative.
double sc_exponent(const ExponentQuery& query);

/// sup_{0 < alpha < 1} ((alpha-1)/alpha) (r - curve(alpha)); +infinity when
/// the values grow beyond 1e6 as alpha -> 0 with the bracket bounded away
/// from zero.
double err_exponent(const ExponentQuery& query);

struct ExponentSolution {
  double value;
  double alpha;  // probed argmax; alpha = 1 marks the endpoint limit
};
ExponentSolution sc_exponent_detailed(const ExponentQuery& query);
ExponentSolution err_exponent_detailed(const ExponentQuery& query);

/// Strong-converse and error exponents of a channel pair over the sandwiched
/// and Petz channel-divergence curves, one-shot and regularized-estimate
/// variants, with the witness input at the supremum order.
struct ExponentBranch {
  double value;
  double alpha_at_sup;
  std::optional<PureStateVector> witness;
};
struct ExponentReport {
  double rate;
  int regularized_copies;
  ExponentBranch sc_one_shot;
  ExponentBranch sc_regularized;
  ExponentBranch err_one_shot;
  ExponentBranch err_regularized;
};
ExponentReport exponent_report(const QuantumChannel& n, const QuantumChannel& m,
                               double rate, const chandiv::OptimizerConfig& cfg,
                               int regularized_copies = 2);

}  // namespace qdiv::discrim
