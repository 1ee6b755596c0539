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

#include "qdiv/statediv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

namespace qdiv::statediv {

namespace {

constexpr double kLeakThreshold = 1e-10;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

void require_equal_dims(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim())
    throw std::invalid_argument("state divergence: dimension mismatch");
}

double support_threshold(const RVector& values) {
  return tol::support_rank * std::max(0.0, values.maxCoeff());
}

// Mass of rho outside the support of sigma.
double support_leak(const DensityOperator& rho, const DensityOperator& sigma) {
  const EigenSystem& es = sigma.spectrum();
  const double thr = support_threshold(es.values);
  double leak = 0.0;
  for (Eigen::Index j = 0; j < es.values.size(); ++j) {
    if (es.values[j] > thr) continue;
    const CVector v = es.vectors.col(j);
    leak += (v.adjoint() * rho.matrix() * v)(0).real();
  }
  return std::max(0.0, leak);
}

// sigma^exponent restricted to its support, as a dense matrix.
Matrix support_power(const DensityOperator& sigma, double exponent) {
  const EigenSystem& es = sigma.spectrum();
  const double thr = support_threshold(es.values);
  RVector mapped = RVector::Zero(es.values.size());
  for (Eigen::Index j = 0; j < es.values.size(); ++j)
    if (es.values[j] > thr) mapped[j] = std::pow(es.values[j], exponent);
  return es.vectors * mapped.asDiagonal() * es.vectors.adjoint();
}

// Positive generalized eigenvalues of (rho, sigma) on supp(sigma), i.e. the
// spectrum of sigma^(-1/2) rho sigma^(-1/2) compressed to the support.
// Also reports rho and sigma compressed to the support basis.
struct CompressedPair {
  Matrix rho_c;
  RVector sigma_diag;
  std::vector<double> positive_eigs;
  double leak = 0.0;
};

CompressedPair compress_to_support(const DensityOperator& rho,
                                   const DensityOperator& sigma) {
  const EigenSystem& es = sigma.spectrum();
  const double thr = support_threshold(es.values);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < es.values.size(); ++j)
    if (es.values[j] > thr) cols.push_back(j);
  const int m = static_cast<int>(cols.size());

  Matrix basis(rho.dim(), m);
  RVector diag(m);
  for (int j = 0; j < m; ++j) {
    basis.col(j) = es.vectors.col(cols[static_cast<std::size_t>(j)]);
    diag[j] = es.values[cols[static_cast<std::size_t>(j)]];
  }

  CompressedPair out;
  out.rho_c = basis.adjoint() * rho.matrix() * basis;
  out.rho_c = ((out.rho_c + out.rho_c.adjoint()) * 0.5).eval();
  out.sigma_diag = diag;
  out.leak = std::max(0.0, 1.0 - out.rho_c.trace().real());

  Matrix s = out.rho_c;
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) s(r, c) /= std::sqrt(diag[r] * diag[c]);
  const EigenSystem ses = eigh(s);
  const double sthr = support_threshold(ses.values);
  for (Eigen::Index i = 0; i < ses.values.size(); ++i)
    if (ses.values[i] > sthr) out.positive_eigs.push_back(ses.values[i]);
  std::sort(out.positive_eigs.begin(), out.positive_eigs.end());
  return out;
}

}  // namespace

DivergenceValue umegaki(const DensityOperator& rho, const DensityOperator& sigma) {
  require_equal_dims(rho, sigma);
  if (support_leak(rho, sigma) > kLeakThreshold) return DivergenceValue::infinite();

  const EigenSystem& er = rho.spectrum();
  const EigenSystem& es = sigma.spectrum();
  const double thr_r = support_threshold(er.values);
  const double thr_s = support_threshold(es.values);

  double entropy_term = 0.0;
  for (Eigen::Index i = 0; i < er.values.size(); ++i)
    if (er.values[i] > thr_r) entropy_term += er.values[i] * std::log2(er.values[i]);

  double cross_term = 0.0;
  for (Eigen::Index j = 0; j < es.values.size(); ++j) {
    if (es.values[j] <= thr_s) continue;
    const CVector v = es.vectors.col(j);
    const double weight = (v.adjoint() * rho.matrix() * v)(0).real();
    cross_term += weight * std::log2(es.values[j]);
  }
  return {entropy_term - cross_term, true};
}

DivergenceValue petz_renyi(const DensityOperator& rho, const DensityOperator& sigma,
                           RenyiOrder order) {
  require_equal_dims(rho, sigma);
  const double alpha = order.alpha;
  const bool support_ok = support_leak(rho, sigma) <= kLeakThreshold;
  if (alpha > 1.0 && !support_ok) return DivergenceValue::infinite();

  const EigenSystem& er = rho.spectrum();
  const EigenSystem& es = sigma.spectrum();
  const double thr_r = support_threshold(er.values);
  const double thr_s = support_threshold(es.values);
  const Matrix overlap = er.vectors.adjoint() * es.vectors;

  double trace_term = 0.0;
  for (Eigen::Index i = 0; i < er.values.size(); ++i) {
    if (er.values[i] <= thr_r) continue;
    const double pa = std::pow(er.values[i], alpha);
    for (Eigen::Index j = 0; j < es.values.size(); ++j) {
      if (es.values[j] <= thr_s) continue;
      trace_term += pa * std::pow(es.values[j], 1.0 - alpha) * std::norm(overlap(i, j));
    }
  }
  if (trace_term <= 0.0) return DivergenceValue::infinite();
  return {std::log2(trace_term) / (alpha - 1.0), support_ok};
}

DivergenceValue sandwiched_renyi(const DensityOperator& rho,
                                 const DensityOperator& sigma, RenyiOrder order) {
  require_equal_dims(rho, sigma);
  const double alpha = order.alpha;
  const bool support_ok = support_leak(rho, sigma) <= kLeakThreshold;
  if (alpha > 1.0 && !support_ok) return DivergenceValue::infinite();

  const Matrix g = support_power(sigma, (1.0 - alpha) / (2.0 * alpha));
  const Matrix a = g * rho.matrix() * g;
  const EigenSystem es = eigh(((a + a.adjoint()) * 0.5).eval());
  double trace_term = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    if (es.values[i] > 0.0) trace_term += std::pow(es.values[i], alpha);
  if (trace_term <= 0.0) return DivergenceValue::infinite();
  return {std::log2(trace_term) / (alpha - 1.0), support_ok};
}

DivergenceValue dmax(const DensityOperator& rho, const DensityOperator& sigma) {
  require_equal_dims(rho, sigma);
  if (support_leak(rho, sigma) > kLeakThreshold) return DivergenceValue::infinite();
  const Matrix g = support_power(sigma, -0.5);
  const Matrix a = g * rho.matrix() * g;
  const EigenSystem es = eigh(((a + a.adjoint()) * 0.5).eval());
  return {std::log2(es.values.maxCoeff()), true};
}

DivergenceValue hypothesis_testing(const DensityOperator& rho,
                                   const DensityOperator& sigma, ErrorThreshold eps) {
  require_equal_dims(rho, sigma);
  if (eps.epsilon >= 1.0) return DivergenceValue::infinite();

  const CompressedPair cp = compress_to_support(rho, sigma);
  // mass outside supp(sigma) is accepted for free
  const double budget = (1.0 - eps.epsilon) - cp.leak;
  if (budget <= 1e-15) return DivergenceValue::infinite();

  const Matrix sigma_c = Matrix(cp.sigma_diag.asDiagonal());

  // the dual objective is concave piecewise linear in t with kinks exactly at
  // t = 1/lambda, so the exact maximum sits at a breakpoint (or at t = 0)
  double best = 0.0;
  double previous = -1.0;
  for (auto it = cp.positive_eigs.rbegin(); it != cp.positive_eigs.rend(); ++it) {
    const double lambda = *it;
    if (previous > 0.0 && std::abs(lambda - previous) <= 1e-12 * previous) continue;
    previous = lambda;
    const double t = 1.0 / lambda;
    const Matrix e = t * cp.rho_c - sigma_c;
    const double value = budget * t - positive_part_trace(e);
    best = std::max(best, value);
  }
  if (best <= 0.0) return DivergenceValue::infinite();
  return {-std::log2(best), true};
}

double hypothesis_testing_oracle(std::span<const double> p, std::span<const double> q,
                                 double eps) {
  if (p.size() != q.size())
    throw std::invalid_argument("hypothesis_testing_oracle: length mismatch");
  if (eps < 0.0 || eps > 1.0)
    throw std::invalid_argument("hypothesis_testing_oracle: eps outside [0,1]");
  double psum = 0.0, qsum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < -1e-12 || q[i] < -1e-12)
      throw std::invalid_argument("hypothesis_testing_oracle: negative entries");
    psum += p[i];
    qsum += q[i];
  }
  if (std::abs(psum - 1.0) > 1e-9 || std::abs(qsum - 1.0) > 1e-9)
    throw std::invalid_argument("hypothesis_testing_oracle: distributions not normalized");

  // sort outcomes by likelihood ratio p/q, descending; q = 0 outcomes first
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const bool a_free = q[a] <= 0.0, b_free = q[b] <= 0.0;
    if (a_free != b_free) return a_free;
    if (a_free) return false;
    return p[a] * q[b] > p[b] * q[a];
  });

  const double needed = 1.0 - eps;
  double accepted_p = 0.0, beta = 0.0;
  for (std::size_t idx : order) {
    if (accepted_p >= needed - 1e-15) break;
    if (p[idx] <= 0.0 && q[idx] <= 0.0) continue;
    const double remaining = needed - accepted_p;
    if (p[idx] <= remaining + 1e-15) {
      accepted_p += p[idx];
      beta += q[idx];
    } else {
      // randomize on the boundary outcome
      const double fraction = remaining / p[idx];
      accepted_p += remaining;
      beta += fraction * q[idx];
    }
  }
  if (beta <= 0.0) return kInfinity;
  return -std::log2(beta);
}

namespace {

double positive_part_gap(const DensityOperator& rho, const DensityOperator& sigma,
                         double gamma) {
  const Matrix e = rho.matrix() - std::exp2(gamma) * sigma.matrix();
  return positive_part_trace(e);
}

double bisect_gamma(const std::function<bool(double)>& high_side, double lo, double hi) {
  // invariant: high_side(lo) true, high_side(hi) false
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (high_side(mid))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double info_spectrum(const DensityOperator& rho, const DensityOperator& sigma,
                     double eps, SpectrumVariant variant) {
  require_equal_dims(rho, sigma);
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::invalid_argument("info_spectrum: eps must lie in (0,1)");
  const double leak = support_leak(rho, sigma);

  if (variant == SpectrumVariant::underline) {
    if (1.0 - eps <= leak + 1e-12) return kInfinity;
    auto high = [&](double g) { return positive_part_gap(rho, sigma, g) >= 1.0 - eps; };
    double lo = -1.0, hi = 1.0;
    int guard = 0;
    while (!high(lo) && ++guard < 80) lo *= 2.0;
    guard = 0;
    while (high(hi) && ++guard < 80) hi *= 2.0;
    return bisect_gamma(high, lo, hi);
  }

  if (variant == SpectrumVariant::overline) {
    if (leak > eps + 1e-12) return kInfinity;
    auto high = [&](double g) { return positive_part_gap(rho, sigma, g) > eps; };
    double lo = -1.0, hi = 1.0;
    int guard = 0;
    while (!high(lo) && ++guard < 80) lo *= 2.0;
    guard = 0;
    while (high(hi) && ++guard < 80) hi *= 2.0;
    return bisect_gamma(high, lo, hi);
  }

  // D_s: sup over gamma with tr(rho {rho <= 2^gamma sigma}) <= eps, where the
  // projector includes the kernel of 2^gamma sigma - rho. The indicator can be
  // non-monotone, so scan breakpoints and midpoints; an infeasible breakpoint
  // whose left midpoint is feasible is an open boundary and counts as the sup.
  const CompressedPair cp = compress_to_support(rho, sigma);
  std::vector<double> breakpoints;
  for (double lambda : cp.positive_eigs) {
    const double g = std::log2(lambda);
    if (breakpoints.empty() || g - breakpoints.back() > 1e-12) breakpoints.push_back(g);
  }

  auto feasible = [&](double gamma) {
    const Matrix e = std::exp2(gamma) * sigma.matrix() - rho.matrix();
    const EigenSystem es = eigh(e);
    const double thr = support_threshold(es.values.cwiseAbs());
    double mass = 0.0;
    for (Eigen::Index j = 0; j < es.values.size(); ++j) {
      if (es.values[j] < -thr) continue;  // kernel of e is included
      const CVector v = es.vectors.col(j);
      mass += (v.adjoint() * rho.matrix() * v)(0).real();
    }
    return mass <= eps + 1e-12;
  };

  std::vector<double> candidates;
  std::vector<bool> is_breakpoint;
  if (breakpoints.empty()) {
    candidates = {-1.0, 1.0};
    is_breakpoint = {false, false};
  } else {
    candidates.push_back(breakpoints.front() - 1.0);
    is_breakpoint.push_back(false);
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
      if (i > 0) {
        candidates.push_back(0.5 * (breakpoints[i - 1] + breakpoints[i]));
        is_breakpoint.push_back(false);
      }
      candidates.push_back(breakpoints[i]);
      is_breakpoint.push_back(true);
    }
    candidates.push_back(breakpoints.back() + 1.0);
    is_breakpoint.push_back(false);
  }

  std::vector<bool> ok(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) ok[i] = feasible(candidates[i]);

  if (ok.back()) return kInfinity;
  double best = -kInfinity;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (ok[i]) best = candidates[i];
    else if (is_breakpoint[i] && i > 0 && ok[i - 1]) best = std::max(best, candidates[i]);
  }
  return best;
}

std::pair<double, double> smooth_dmax_bounds(const DensityOperator& rho,
                                             const DensityOperator& sigma,
                                             double eps, double eps_prime) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::invalid_argument("smooth_dmax_bounds: eps must lie in (0,1)");
  if (!(eps_prime > 0.0) || !(eps_prime < 1.0 - eps))
    throw std::invalid_argument("smooth_dmax_bounds: eps' must lie in (0, 1-eps)");
  const double lower =
      hypothesis_testing(rho, sigma, ErrorThreshold(eps_prime)).value +
      std::log2(1.0 - eps - eps_prime);
  const double upper =
      hypothesis_testing(rho, sigma, ErrorThreshold(1.0 - 0.5 * eps * eps)).value +
      std::log2(2.0 / (eps * eps));
  return {lower, upper};
}

double binary_entropy(double alpha) {
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("binary_entropy: argument outside [0,1]");
  if (alpha == 0.0 || alpha == 1.0) return 0.0;
  return -alpha * std::log2(alpha) - (1.0 - alpha) * std::log2(1.0 - alpha);
}

std::string DivergenceKind::label() const {
  char buf[64];
  switch (family) {
    case Family::umegaki:
      return "umegaki";
    case Family::petz:
      std::snprintf(buf, sizeof buf, "petz(%g)", alpha);
      return buf;
    case Family::sandwiched:
      std::snprintf(buf, sizeof buf, "sandwiched(%g)", alpha);
      return buf;
    case Family::dmax:
      return "dmax";
    case Family::hypothesis:
      std::snprintf(buf, sizeof buf, "hypothesis(%g)", epsilon);
      return buf;
  }
  return "unknown";
}

DivergenceValue state_divergence(const DivergenceKind& kind, const DensityOperator& rho,
                                 const DensityOperator& sigma) {
  switch (kind.family) {
    case DivergenceKind::Family::umegaki:
      return umegaki(rho, sigma);
    case DivergenceKind::Family::petz:
      return petz_renyi(rho, sigma, RenyiOrder(kind.alpha));
    case DivergenceKind::Family::sandwiched:
      return sandwiched_renyi(rho, sigma, RenyiOrder(kind.alpha));
    case DivergenceKind::Family::dmax:
      return dmax(rho, sigma);
    case DivergenceKind::Family::hypothesis:
      return hypothesis_testing(rho, sigma, ErrorThreshold(kind.epsilon));
  }
  throw std::logic_error("state_divergence: unhandled kind");
}

}  // namespace qdiv::statediv
