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

#include "qdiv/verify.hpp"

#include "qdiv/random.hpp"
#include "qdiv/serialize.hpp"
#include "qdiv/statediv.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace qdiv::verify {

namespace {

using statediv::DivergenceKind;
using statediv::ErrorThreshold;
using statediv::RenyiOrder;

// Per-trial excess above tolerance; violation when positive.
class MarginTracker {
 public:
  MarginTracker(std::string name, std::uint64_t seed)
      : report_{std::move(name), 0, 0, -std::numeric_limits<double>::infinity(), "", seed} {}

  void record(double excess, const std::function<std::string()>& witness) {
    ++report_.trials;
    if (excess > report_.worst_margin) {
      report_.worst_margin = excess;
      report_.witness = witness();
    }
    if (excess > 0.0) ++report_.violations;
  }

  CheckReport finish() && { return std::move(report_); }

 private:
  CheckReport report_;
};

double spectral_norm(const DensityOperator& rho) {
  return rho.spectrum().values.maxCoeff();
}

}  // namespace

CheckReport check_twomat(int trials, int dim, std::uint64_t seed) {
  if (dim > 64) throw std::invalid_argument("check_twomat: dim must be <= 64");
  MarginTracker tracker("twomat", seed);
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(t));
    const HermitianOperator m = random_hermitian(rng, {dim});
    const HermitianOperator n = random_hermitian(rng, {dim});
    const double lhs = positive_part_trace(m.matrix() - n.matrix());
    const double rhs = positive_part_trace(m) + positive_part_trace(n) - n.trace();
    tracker.record(lhs - rhs - kDefaultTolerance, [&] {
      return "M=" + serialize::compact_matrix(m.matrix()) +
             " N=" + serialize::compact_matrix(n.matrix());
    });
  }
  return std::move(tracker).finish();
}

CheckReport check_boundsdmin(int trials, int dim, std::uint64_t seed) {
  if (dim > 16) throw std::invalid_argument("check_boundsdmin: dim must be <= 16");
  MarginTracker tracker("boundsdmin", seed);
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(t));
    const DensityOperator rho = random_density(rng, {dim});
    const DensityOperator sigma = random_density(rng, {dim});
    const double eps = rng.uniform(0.05, 0.95);
    const double alpha = rng.uniform(0.05, 0.95);

    const double dh = statediv::hypothesis_testing(rho, sigma, ErrorThreshold(eps)).value;
    const double petz = statediv::petz_renyi(rho, sigma, RenyiOrder(alpha)).value;
    const double h = statediv::binary_entropy(alpha);
    const double bound =
        petz + alpha / (1.0 - alpha) * (h / alpha - std::log2(1.0 / eps));
    const double prior = petz - alpha / (1.0 - alpha) * std::log2(1.0 / eps);
    const double gain = h / (1.0 - alpha);

    // the new bound must hold and exceed the prior bound by exactly h/(1-a)
    double excess = bound - dh - kDefaultTolerance;
    excess = std::max(excess, std::abs((bound - prior) - gain) - kDefaultTolerance);
    excess = std::max(excess, -gain - kDefaultTolerance);
    tracker.record(excess, [&] {
      return "rho=" + serialize::compact_matrix(rho.matrix()) +
             " sigma=" + serialize::compact_matrix(sigma.matrix()) +
             " eps=" + serialize::sci12(eps) + " alpha=" + serialize::sci12(alpha);
    });
  }
  return std::move(tracker).finish();
}

CheckReport check_dh_sandwiched(int trials, int dim, std::uint64_t seed) {
  if (dim > 16) throw std::invalid_argument("check_dh_sandwiched: dim must be <= 16");
  MarginTracker tracker("dh-sandwiched", seed);
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(t));
    const DensityOperator rho = random_density(rng, {dim});
    const DensityOperator sigma = random_density(rng, {dim});
    const double eps = rng.uniform(0.05, 0.95);
    const double alpha = rng.uniform(1.05, 5.0);

    const double dh = statediv::hypothesis_testing(rho, sigma, ErrorThreshold(eps)).value;
    const double sand = statediv::sandwiched_renyi(rho, sigma, RenyiOrder(alpha)).value;
    const double bound = sand + alpha / (alpha - 1.0) * std::log2(1.0 / (1.0 - eps));
    tracker.record(dh - bound - kDefaultTolerance, [&] {
      return "rho=" + serialize::compact_matrix(rho.matrix()) +
             " sigma=" + serialize::compact_matrix(sigma.matrix()) +
             " eps=" + serialize::sci12(eps) + " alpha=" + serialize::sci12(alpha);
    });
  }
  return std::move(tracker).finish();
}

CheckReport check_ubd(const DensityOperator& rho, const DensityOperator& sigma, int copies,
                      std::span<const double> mu_grid, std::span<const double> r_grid,
                      std::span<const double> s_grid) {
  if (copies < 1 || copies > 4)
    throw std::invalid_argument("check_ubd: copies must lie in 1..4");
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("check_ubd: dimension mismatch");
  if (!statediv::umegaki(rho, sigma).support_ok)
    throw std::invalid_argument("check_ubd: supp(rho) must lie inside supp(sigma)");
  for (double s : s_grid)
    if (s < 0.0 || s > 1.0) throw std::invalid_argument("check_ubd: s grid outside [0,1]");

  const DensityOperator rho_n = tensor_power(rho, copies);
  const DensityOperator sigma_n = tensor_power(sigma, copies);
  const double local_dim = rho.dim();
  const double n = copies;

  // per-s spectral terms, shared across the (mu, r) grid
  std::vector<double> log_tr_rho_pow(s_grid.size());
  std::vector<double> log_tr_rho_sigma(s_grid.size());
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    const double s = s_grid[i];
    double tr_pow = 0.0;
    for (Eigen::Index k = 0; k < rho_n.spectrum().values.size(); ++k) {
      const double p = rho_n.spectrum().values[k];
      if (p > 0.0) tr_pow += std::pow(p, 1.0 + s);
    }
    const HermitianOperator sigma_pow = matrix_function(
        sigma_n.op(), [s](double x) { return std::pow(x, -s); },
        KernelPolicy::restrict_to_support);
    const double tr_cross = (rho_n.matrix() * sigma_pow.matrix()).trace().real();
    log_tr_rho_pow[i] = std::log2(tr_pow);
    log_tr_rho_sigma[i] = std::log2(tr_cross);
  }

  MarginTracker tracker("ubd", 0);
  for (double mu : mu_grid) {
    const double lhs =
        positive_part_trace(rho_n.matrix() - std::exp2(mu * n) * sigma_n.matrix());
    for (double r : r_grid) {
      for (std::size_t i = 0; i < s_grid.size(); ++i) {
        const double s = s_grid[i];
        const double first = std::exp2(-n * r * s + log_tr_rho_pow[i]);
        const double second = std::exp2(-n * s * (mu - r) + s * local_dim * std::log2(1.0 + n) +
                                        log_tr_rho_sigma[i]);
        const double rhs = first + second;
        tracker.record(lhs - rhs - kDefaultTolerance, [&] {
          return "mu=" + serialize::sci12(mu) + " r=" + serialize::sci12(r) +
                 " s=" + serialize::sci12(s) + " lhs=" + serialize::sci12(lhs) +
                 " rhs=" + serialize::sci12(rhs);
        });
      }
    }
  }
  return std::move(tracker).finish();
}

CheckReport check_symmetrization(const QuantumChannel& n, const QuantumChannel& m,
                                 double eps, int trials, std::uint64_t seed) {
  if (n.dim_in() != m.dim_in() || n.dim_out() != m.dim_out())
    throw std::invalid_argument("check_symmetrization: channel dimension mismatch");
  constexpr double kTolerance = 1e-8;
  const int ref = n.dim_in();
  const DimList input_dims{ref, n.dim_in(), ref, n.dim_in()};

  auto testing_value = [&](const DensityOperator& input, std::span<const int> acting) {
    DensityOperator rho = input;
    DensityOperator sigma = input;
    for (int a : acting) {
      const std::array<int, 1> one{a};
      rho = apply_channel(n, rho, one);
      sigma = apply_channel(m, sigma, one);
    }
    return statediv::hypothesis_testing(rho, sigma, ErrorThreshold(eps)).value;
  };

  MarginTracker tracker("symmetrization", seed);
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(t));
    const PureStateVector psi = random_pure(rng, input_dims);
    const std::array<int, 2> acting{1, 3};
    const double lhs = testing_value(psi.to_density(), acting);

    const DensityOperator omega = symmetrize(psi.to_density(), 2);
    const PureStateVector phi = symmetric_purification(omega, 2);
    // mirror subsystems are extra reference; the channels still act on the
    // A factors of the original blocks
    const double rhs = testing_value(phi.to_density(), acting);
    tracker.record(lhs - rhs - kTolerance, [&] {
      return "psi=" + serialize::compact_vector(psi.amplitudes()) +
             " eps=" + serialize::sci12(eps);
    });
  }
  return std::move(tracker).finish();
}

CheckReport check_infnorm_bound(const QuantumChannel& n, int copies, int trials,
                                std::uint64_t seed) {
  if (copies < 1 || copies > 3)
    throw std::invalid_argument("check_infnorm_bound: copies must lie in 1..3");
  const chandiv::ReplacerDecomposition decomposition = chandiv::replacer_decomposition(n);
  const int ref = n.dim_in();

  MarginTracker tracker("infnorm", seed);
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(t));
    for (int k = 1; k <= copies; ++k) {
      DimList dims;
      for (int c = 0; c < k; ++c) {
        dims.push_back(ref);
        dims.push_back(n.dim_in());
      }
      DensityOperator state = random_density(rng, dims);
      for (int c = 0; c < k; ++c) {
        const std::array<int, 1> acting{2 * c + 1};
        state = apply_channel(n, state, acting);
      }
      const double norm = spectral_norm(state);
      const double bound = std::pow(decomposition.b, k);
      tracker.record(norm - bound - kDefaultTolerance, [&] {
        return "k=" + std::to_string(k) + " norm=" + serialize::sci12(norm) +
               " b=" + serialize::sci12(decomposition.b);
      });
    }
  }
  return std::move(tracker).finish();
}

GltRecord counterexample_glt(int d) {
  if (d < 2 || d % 2 != 0)
    throw std::domain_error("counterexample_glt: d must be even and at least 2");
  const double t = 1.0 / (2.0 * d);
  Matrix tau = Matrix::Identity(d, d) * (3.0 * t);
  for (int i = 0; i < d / 2; ++i) tau(i, i) = t;
  const HermitianOperator tau_op(std::move(tau), {d});
  const HermitianOperator log_tau = matrix_function(
      tau_op, [](double x) { return std::log2(x); }, KernelPolicy::error_on_kernel);

  const double inv_d = 1.0 / d;
  const double first_moment = log_tau.trace() * inv_d;
  const double second_moment = (log_tau.matrix() * log_tau.matrix()).trace().real() * inv_d;
  const double lhs = second_moment - first_moment * first_moment;
  const double log_term = std::log2(1.0 + 1.0 / t - d);
  const double rhs = inv_d * log_term * log_term;
  return {d, lhs, rhs, lhs > rhs};
}

int counterexample_glt_minimal_d(int d_limit) {
  for (int d = 2; d <= d_limit; d += 2)
    if (counterexample_glt(d).violated) return d;
  return 0;
}

CheckReport check_order_relation(const QuantumChannel& n, const QuantumChannel& m,
                                 const chandiv::OptimizerConfig& cfg) {
  constexpr double kSlack = 1e-5;
  const std::vector<chandiv::RegularizedPoint> reg =
      chandiv::regularized_estimate(n, m, DivergenceKind::make_umegaki(), 2, cfg);
  const chandiv::AmortizedResult amortized = chandiv::amortized_lowerbound(
      n, m, DivergenceKind::make_umegaki(), n.dim_in() * n.dim_in(), cfg);

  const double a1 = reg[0].per_copy_value;
  const double a2 = reg[1].per_copy_value;
  MarginTracker tracker("order", cfg.seed);
  tracker.record(a1 - a2 - kSlack, [&] {
    return "a1=" + serialize::sci12(a1) + " a2=" + serialize::sci12(a2);
  });
  tracker.record(a1 - amortized.value - kSlack, [&] {
    return "a1=" + serialize::sci12(a1) + " amortized=" + serialize::sci12(amortized.value);
  });
  return std::move(tracker).finish();
}

CheckReport check_continuity(int trials, int dim, std::uint64_t seed) {
  constexpr double kDelta = 1e-4;
  MarginTracker tracker("continuity", seed);
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(t));
    const DensityOperator rho = random_density(rng, {dim});
    const DensityOperator sigma = random_density(rng, {dim});
    const double base = statediv::umegaki(rho, sigma).value;

    double excess = -std::numeric_limits<double>::infinity();
    for (bool sandwiched : {false, true}) {
      auto at = [&](double alpha) {
        return sandwiched
                   ? statediv::sandwiched_renyi(rho, sigma, RenyiOrder(alpha)).value
                   : statediv::petz_renyi(rho, sigma, RenyiOrder(alpha)).value;
      };
      const double above = at(1.0 + kDelta);
      const double below = at(1.0 - kDelta);
      // slope-calibrated deviation bound
      const double slope = (above - below) / (2.0 * kDelta);
      const double budget = 2.0 * (1.0 + std::abs(slope)) * kDelta;
      const double deviation = std::max(std::abs(above - base), std::abs(below - base));
      excess = std::max(excess, deviation - budget - kDefaultTolerance);
    }
    tracker.record(excess, [&] {
      return "rho=" + serialize::compact_matrix(rho.matrix()) +
             " sigma=" + serialize::compact_matrix(sigma.matrix());
    });
  }
  return std::move(tracker).finish();
}

}  // namespace qdiv::verify
