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

#include "qdiv/discrim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>

namespace qdiv::discrim {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

DensityOperator apply_to_subsystem(const QuantumChannel& chan, const DensityOperator& rho,
                                   int subsystem) {
  const std::array<int, 1> acting{subsystem};
  return apply_channel(chan, rho, acting);
}

DensityOperator run_product(const ProductStrategy& s, const QuantumChannel& chan) {
  DensityOperator joint = s.inputs[0];
  for (std::size_t i = 1; i < s.inputs.size(); ++i) joint = tensor(joint, s.inputs[i]);
  int offset = 0;
  for (const DensityOperator& input : s.inputs) {
    const int acting = offset + static_cast<int>(input.dims().size()) - 1;
    joint = apply_to_subsystem(chan, joint, acting);
    offset += static_cast<int>(input.dims().size());
  }
  return joint;
}

DensityOperator run_coherent(const CoherentStrategy& s, const QuantumChannel& chan,
                             int copies) {
  DensityOperator state = s.input;
  const int total = static_cast<int>(state.dims().size());
  for (int k = 0; k < copies; ++k)
    state = apply_to_subsystem(chan, state, total - copies + k);
  return state;
}

DensityOperator run_sequential(const SequentialStrategy& s, const QuantumChannel& chan,
                               int copies) {
  DensityOperator state = s.initial;
  if (state.dims().size() == 1) state = state.reshaped({1, state.dims()[0]});
  for (int k = 0; k < copies; ++k) {
    state = apply_to_subsystem(chan, state, 1);
    if (k + 1 == copies) break;
    const QuantumChannel& update = s.updates[static_cast<std::size_t>(k)];
    const std::array<int, 2> both{0, 1};
    state = apply_channel(update, state, both);
    const int next_ref = update.dim_out() / chan.dim_in();
    state = state.reshaped({next_ref, chan.dim_in()});
  }
  return state;
}

void validate_strategy(const Strategy& strategy, const QuantumChannel& n, int copies) {
  if (copies < 1) throw std::invalid_argument("generate_testing_states: copies must be positive");
  if (const auto* p = std::get_if<ProductStrategy>(&strategy)) {
    if (static_cast<int>(p->inputs.size()) != copies)
      throw std::invalid_argument("product strategy: one input per channel use required");
    for (const DensityOperator& input : p->inputs)
      if (input.dims().back() != n.dim_in())
        throw std::invalid_argument("product strategy: last subsystem must match dim_in");
  } else if (const auto* c = std::get_if<CoherentStrategy>(&strategy)) {
    const DimList& dims = c->input.dims();
    if (static_cast<int>(dims.size()) < copies)
      throw std::invalid_argument("coherent strategy: too few subsystems");
    for (int k = 0; k < copies; ++k)
      if (dims[dims.size() - static_cast<std::size_t>(copies) + static_cast<std::size_t>(k)] !=
          n.dim_in())
        throw std::invalid_argument("coherent strategy: trailing subsystems must match dim_in");
  } else if (const auto* q = std::get_if<SequentialStrategy>(&strategy)) {
    const DimList& dims = q->initial.dims();
    if (dims.size() > 2 || dims.back() != n.dim_in())
      throw std::invalid_argument("sequential strategy: initial state must live on (R, A)");
    if (static_cast<int>(q->updates.size()) != copies - 1)
      throw std::invalid_argument("sequential strategy: copies-1 update channels required");
    int ref = dims.size() == 2 ? dims[0] : 1;
    for (const QuantumChannel& update : q->updates) {
      if (update.dim_in() != ref * n.dim_out())
        throw std::invalid_argument("sequential strategy: update input dimension mismatch");
      if (update.dim_out() % n.dim_in() != 0)
        throw std::invalid_argument(
            "sequential strategy: update output must factor as R x dim_in");
      ref = update.dim_out() / n.dim_in();
    }
  }
}

}  // namespace

TestOperator::TestOperator(HermitianOperator op) : op_(std::move(op)) {
  EigenSystem es = eigh(op_.matrix());
  if (es.values.minCoeff() < -tol::psd_clamp || es.values.maxCoeff() > 1.0 + tol::psd_clamp)
    throw std::invalid_argument("TestOperator: eigenvalues outside [0, 1]");
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    es.values[i] = std::clamp(es.values[i], 0.0, 1.0);
  Matrix clamped = es.vectors * es.values.asDiagonal() * es.vectors.adjoint();
  op_ = HermitianOperator(std::move(clamped), op_.dims());
}

std::pair<DensityOperator, DensityOperator> generate_testing_states(
    const Strategy& strategy, const QuantumChannel& n, const QuantumChannel& m,
    int copies) {
  if (n.dim_in() != m.dim_in() || n.dim_out() != m.dim_out())
    throw std::invalid_argument("generate_testing_states: channel dimension mismatch");
  validate_strategy(strategy, n, copies);
  auto run = [&](const QuantumChannel& chan) {
    if (const auto* p = std::get_if<ProductStrategy>(&strategy)) return run_product(*p, chan);
    if (const auto* c = std::get_if<CoherentStrategy>(&strategy))
      return run_coherent(*c, chan, copies);
    return run_sequential(std::get<SequentialStrategy>(strategy), chan, copies);
  };
  return {run(n), run(m)};
}

ErrorPair error_pair(const std::pair<DensityOperator, DensityOperator>& states,
                     const TestOperator& test) {
  if (states.first.dim() != test.op().dim() || states.second.dim() != test.op().dim())
    throw std::invalid_argument("error_pair: dimension mismatch");
  const double accept_null = (test.op().matrix() * states.first.matrix()).trace().real();
  const double accept_alt = (test.op().matrix() * states.second.matrix()).trace().real();
  return {std::clamp(1.0 - accept_null, 0.0, 1.0), std::clamp(accept_alt, 0.0, 1.0)};
}

double optimal_type2(const Strategy& strategy, const QuantumChannel& n,
                     const QuantumChannel& m, int copies, double eps) {
  const auto states = generate_testing_states(strategy, n, m, copies);
  const statediv::DivergenceValue dh =
      statediv::hypothesis_testing(states.first, states.second, statediv::ErrorThreshold(eps));
  return dh.value / copies;
}

std::vector<SteinPoint> stein_sequence(const QuantumChannel& n, const QuantumChannel& m,
                                       double eps, int n_max, StrategyClass cls,
                                       const chandiv::OptimizerConfig& cfg) {
  if (n_max < 1) throw std::invalid_argument("stein_sequence: n_max must be positive");
  std::vector<SteinPoint> points;

  if (cls == StrategyClass::product) {
    const chandiv::ChannelDivergenceResult one_shot =
        chandiv::channel_divergence(n, m, statediv::DivergenceKind::make_umegaki(), cfg);
    const std::array<int, 1> acting{1};
    const DensityOperator out_n = apply_channel(n, one_shot.witness.to_density(), acting);
    const DensityOperator out_m = apply_channel(m, one_shot.witness.to_density(), acting);
    double budget = 1.0;
    DensityOperator rho_k = out_n;
    DensityOperator sigma_k = out_m;
    for (int k = 1; k <= n_max; ++k) {
      budget *= out_n.dim();
      if (budget > tol::dense_dim_limit)
        throw resource_limit_error("stein_sequence: output tensor power exceeds the dense limit");
      if (k > 1) {
        rho_k = tensor(rho_k, out_n);
        sigma_k = tensor(sigma_k, out_m);
      }
      const statediv::DivergenceValue dh =
          statediv::hypothesis_testing(rho_k, sigma_k, statediv::ErrorThreshold(eps));
      points.push_back({k, dh.value / k, one_shot.witness});
    }
    return points;
  }

  double budget = 1.0;
  QuantumChannel nk = n;
  QuantumChannel mk = m;
  for (int k = 1; k <= n_max; ++k) {
    budget *= static_cast<double>(n.dim_in()) * n.dim_in();
    if (budget > tol::dense_dim_limit)
      throw resource_limit_error("stein_sequence: (dim_in^2)^k exceeds the dense limit");
    if (k > 1) {
      nk = tensor(nk, n);
      mk = tensor(mk, m);
    }
    std::vector<PureStateVector> seeds;
    if (k > 1) seeds.push_back(chandiv::product_input_seed(points.back().witness,
                                                           points.front().witness));
    const chandiv::ChannelDivergenceResult res = chandiv::channel_divergence(
        nk, mk, statediv::DivergenceKind::make_hypothesis(eps), cfg, seeds);
    points.push_back({k, res.value.value / k, res.witness});
  }
  return points;
}

// ---------------------------------------------------------------------------
// Exponent evaluators
// ---------------------------------------------------------------------------

namespace {

double tradeoff_factor(double alpha) { return (alpha - 1.0) / alpha; }

// golden-section maximization; returns the best probed point
std::pair<double, double> golden_max(const std::function<double(double)>& f, double lo,
                                     double hi) {
  constexpr double kRatio = 0.6180339887498948482;
  double a = lo, b = hi;
  double x1 = b - kRatio * (b - a);
  double x2 = a + kRatio * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int iter = 0; iter < 120 && (b - a) > 1e-12; ++iter) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kRatio * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kRatio * (b - a);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  const double llo = std::log10(lo);
  const double lhi = std::log10(hi);
  const int count = std::max(2, static_cast<int>(std::ceil((lhi - llo) * per_decade)) + 1);
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    grid[static_cast<std::size_t>(i)] =
        std::pow(10.0, llo + (lhi - llo) * i / (count - 1));
  return grid;
}

}  // namespace

ExponentSolution sc_exponent_detailed(const ExponentQuery& query) {
  if (!(query.rate > 0.0)) throw std::invalid_argument("sc_exponent: rate must be positive");
  auto f_alpha = [&](double alpha) {
    return tradeoff_factor(alpha) * (query.rate - query.curve(alpha));
  };

  // alpha -> 1+ endpoint: the factor vanishes, value 0
  ExponentSolution best{0.0, 1.0};
  // u -> 1 endpoint: curve frozen at alpha_max
  const double tail = query.rate - query.curve(query.alpha_max);
  if (tail > best.value) best = {tail, query.alpha_max};

  const std::vector<double> grid = log_grid(1.0 + 1.0 / 1024.0, query.alpha_max, 64);
  std::vector<double> values(grid.size());
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = f_alpha(grid[i]);
    if (values[i] > values[best_idx]) best_idx = i;
  }
  if (values[best_idx] > best.value) best = {values[best_idx], grid[best_idx]};

  // refine around the best grid point in u = 1 - 1/alpha
  const double alpha_lo = grid[best_idx > 0 ? best_idx - 1 : 0];
  const double alpha_hi = grid[std::min(best_idx + 1, grid.size() - 1)];
  if (alpha_hi > alpha_lo) {
    auto f_u = [&](double u) { return f_alpha(1.0 / (1.0 - u)); };
    const auto [u_best, f_best] =
        golden_max(f_u, 1.0 - 1.0 / alpha_lo, 1.0 - 1.0 / alpha_hi);
    if (f_best > best.value) best = {f_best, 1.0 / (1.0 - u_best)};
  }
  if (best.value < 0.0) best = {0.0, 1.0};
  return best;
}

ExponentSolution err_exponent_detailed(const ExponentQuery& query) {
  if (!(query.rate > 0.0)) throw std::invalid_argument("err_exponent: rate must be positive");
  auto f_alpha = [&](double alpha) {
    return tradeoff_factor(alpha) * (query.rate - query.curve(alpha));
  };

  ExponentSolution best{0.0, 1.0};  // alpha -> 1- endpoint
  const std::vector<double> grid = log_grid(query.alpha_min, 1.0 - 1.0 / 1024.0, 64);
  std::vector<double> values(grid.size());
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = f_alpha(grid[i]);
    if (values[i] > values[best_idx]) best_idx = i;
  }

  // divergence as alpha -> 0: with the bracket bounded away from zero at the
  // domain floor, the tail values (1 - 1/alpha) (r - curve) grow beyond 1e6
  const double bracket_at_floor = query.rate - query.curve(query.alpha_min);
  if (bracket_at_floor < -1e-9) {
    const double tail_alpha = -bracket_at_floor / (1e6 - bracket_at_floor);
    if ((1.0 - 1.0 / tail_alpha) * bracket_at_floor >= 1e6 - 1.0)
      return {kInfinity, query.alpha_min};
  }
  if (values[best_idx] > 1e6 && bracket_at_floor < 0.0) return {kInfinity, query.alpha_min};

  if (values[best_idx] > best.value) best = {values[best_idx], grid[best_idx]};
  const double alpha_lo = grid[best_idx > 0 ? best_idx - 1 : 0];
  const double alpha_hi = grid[std::min(best_idx + 1, grid.size() - 1)];
  if (alpha_hi > alpha_lo) {
    auto f_u = [&](double u) { return f_alpha(1.0 / (1.0 - u)); };
    const auto [u_best, f_best] =
        golden_max(f_u, 1.0 - 1.0 / alpha_lo, 1.0 - 1.0 / alpha_hi);
    if (f_best > best.value) best = {f_best, 1.0 / (1.0 - u_best)};
  }
  if (best.value < 0.0) best = {0.0, 1.0};
  return best;
}

double sc_exponent(const ExponentQuery& query) { return sc_exponent_detailed(query).value; }
double err_exponent(const ExponentQuery& query) { return err_exponent_detailed(query).value; }

ExponentReport exponent_report(const QuantumChannel& n, const QuantumChannel& m,
                               double rate, const chandiv::OptimizerConfig& cfg,
                               int regularized_copies) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponent_report: rate must be positive");
  if (regularized_copies < 1)
    throw std::invalid_argument("exponent_report: regularized_copies must be positive");

  struct CurveCache {
    std::map<double, chandiv::ChannelDivergenceResult> samples;
  };

  const QuantumChannel nk = tensor_power(n, regularized_copies);
  const QuantumChannel mk = tensor_power(m, regularized_copies);

  auto make_curve = [&](bool sandwiched, bool regularized,
                        std::shared_ptr<CurveCache> cache) {
    return [&n, &m, &nk, &mk, &cfg, sandwiched, regularized, regularized_copies,
            cache](double alpha) -> double {
      auto it = cache->samples.find(alpha);
      if (it == cache->samples.end()) {
        const statediv::DivergenceKind kind =
            sandwiched ? statediv::DivergenceKind::make_sandwiched(alpha)
                       : statediv::DivergenceKind::make_petz(alpha);
        chandiv::ChannelDivergenceResult res =
            regularized ? chandiv::channel_divergence(nk, mk, kind, cfg)
                        : chandiv::channel_divergence(n, m, kind, cfg);
        it = cache->samples.emplace(alpha, std::move(res)).first;
      }
      const double scale = regularized ? static_cast<double>(regularized_copies) : 1.0;
      return it->second.value.value / scale;
    };
  };

  auto solve = [&](bool strong_converse, bool regularized) {
    auto cache = std::make_shared<CurveCache>();
    ExponentQuery query{rate, make_curve(strong_converse, regularized, cache)};
    const ExponentSolution solution =
        strong_converse ? sc_exponent_detailed(query) : err_exponent_detailed(query);
    ExponentBranch branch{solution.value, solution.alpha, std::nullopt};
    const auto it = cache->samples.find(solution.alpha);
    if (it != cache->samples.end()) branch.witness = it->second.witness;
    return branch;
  };

  ExponentReport report{rate, regularized_copies, {}, {}, {}, {}};
  report.sc_one_shot = solve(true, false);
  report.sc_regularized = solve(true, true);
  report.err_one_shot = solve(false, false);
  report.err_regularized = solve(false, true);
  return report;
}

}  // namespace qdiv::discrim
