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

#include <limits>
#include <span>
#include <string>
#include <utility>

namespace qdiv::statediv {

/// Extended real divergence value plus the support-condition flag. The value
/// is +infinity exactly when support_ok is false, except at Renyi orders in
/// (0,1) where a support violation can still leave a finite value.
struct DivergenceValue {
  double value = 0.0;
  bool support_ok = true;

  bool finite() const { return std::isfinite(value); }
  static DivergenceValue infinite() {
    return {std::numeric_limits<double>::infinity(), false};
  }
};

/// Renyi order alpha in (0,1) or (1,inf).
struct RenyiOrder {
  double alpha;
  explicit RenyiOrder(double a) : alpha(a) {
    if (!(a > 0.0) || a == 1.0)
      throw std::invalid_argument("RenyiOrder: alpha must be positive and != 1");
  }
};

/// Type I error budget epsilon in [0, 1].
struct ErrorThreshold {
  double epsilon;
  explicit ErrorThreshold(double e) : epsilon(e) {
    if (!(e >= 0.0) || e > 1.0)
      throw std::invalid_argument("ErrorThreshold: epsilon must lie in [0,1]");
  }
};

/// tr[rho (log rho - log sigma)] on supp(rho); +inf on support violation.
DivergenceValue umegaki(const DensityOperator& rho, const DensityOperator& sigma);

/// (1/(alpha-1)) log tr[rho^alpha sigma^(1-alpha)].
DivergenceValue petz_renyi(const DensityOperator& rho, const DensityOperator& sigma,
                           RenyiOrder order);

/// (1/(alpha-1)) log tr[(sigma^((1-a)/2a) rho sigma^((1-a)/2a))^alpha].
DivergenceValue sandwiched_renyi(const DensityOperator& rho,
                                 const DensityOperator& sigma, RenyiOrder order);

/// log of the largest eigenvalue of sigma^(-1/2) rho sigma^(-1/2) on
/// supp(sigma); +inf on support violation.
DivergenceValue dmax(const DensityOperator& rho, const DensityOperator& sigma);

/// Hypothesis testing relative entropy, solved exactly through the concave
/// piecewise-linear dual: the objective (1-eps) t - tr(t rho - sigma)_+ is
/// evaluated at t = 0 and at every generalized-eigenvalue breakpoint t = 1/l.
/// When sigma has a kernel, rho is compressed to supp(sigma) and the leaked
/// mass is treated as an always-accepted component.
DivergenceValue hypothesis_testing(const DensityOperator& rho,
                                   const DensityOperator& sigma, ErrorThreshold eps);

/// Exact classical Neyman-Pearson optimum: outcomes sorted by likelihood
/// ratio, included greedily until the Type I budget is spent, with
/// randomization on the boundary outcome. Returns -log beta.
double hypothesis_testing_oracle(std::span<const double> p, std::span<const double> q,
                                 double eps);

enum class SpectrumVariant { ds, underline, overline };

/// Information spectrum relative entropies. The underline/overline variants
/// bisect the continuous nonincreasing map gamma -> tr(rho - 2^gamma sigma)_+
/// to 1e-9; the ds variant scans the generalized-eigenvalue breakpoints plus
/// midpoints, resolving ties at a breakpoint toward the smaller gamma.
double info_spectrum(const DensityOperator& rho, const DensityOperator& sigma,
                     double eps, SpectrumVariant variant);

/// Two-sided hypothesis-testing sandwich for the smooth max-relative entropy:
/// lower = D_H^{eps'} + log(1-eps-eps'), upper = D_H^{1-eps^2/2} + log(2/eps^2).
std::pair<double, double> smooth_dmax_bounds(const DensityOperator& rho,
                                             const DensityOperator& sigma,
                                             double eps, double eps_prime);

/// -a log a - (1-a) log(1-a) in base 2; 0 at the boundary.
double binary_entropy(double alpha);

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

/// Named divergence family with its scalar parameter, used by the channel
/// layer and the CLI to select a state divergence uniformly.
struct DivergenceKind {
  enum class Family { umegaki, petz, sandwiched, dmax, hypothesis };
  Family family = Family::umegaki;
  double alpha = 0.0;    // petz / sandwiched
  double epsilon = 0.0;  // hypothesis

  static DivergenceKind make_umegaki() { return {Family::umegaki, 0.0, 0.0}; }
  static DivergenceKind make_petz(double a) { return {Family::petz, a, 0.0}; }
  static DivergenceKind make_sandwiched(double a) { return {Family::sandwiched, a, 0.0}; }
  static DivergenceKind make_dmax() { return {Family::dmax, 0.0, 0.0}; }
  static DivergenceKind make_hypothesis(double e) { return {Family::hypothesis, 0.0, e}; }

  std::string label() const;
};

DivergenceValue state_divergence(const DivergenceKind& kind, const DensityOperator& rho,
                                 const DensityOperator& sigma);

}  // namespace qdiv::statediv
