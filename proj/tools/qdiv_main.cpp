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

#include "qdiv/chandiv.hpp"
#include "qdiv/discrim.hpp"
#include "qdiv/qmat.hpp"
#include "qdiv/random.hpp"
#include "qdiv/serialize.hpp"
#include "qdiv/statediv.hpp"
#include "qdiv/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using qdiv::statediv::DivergenceKind;

constexpr int kExitSuccess = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Inline state specs: mm:<d>, pure:<d>:<k>, diag:p1,p2,...; anything else is
// treated as a JSON file path.
qdiv::DensityOperator load_state(const std::string& spec) {
  if (spec.rfind("mm:", 0) == 0) {
    const int d = std::stoi(spec.substr(3));
    return qdiv::DensityOperator::maximally_mixed({d});
  }
  if (spec.rfind("pure:", 0) == 0) {
    const std::string rest = spec.substr(5);
    const std::size_t colon = rest.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("pure spec must be pure:<dim>:<index>");
    const int d = std::stoi(rest.substr(0, colon));
    const int k = std::stoi(rest.substr(colon + 1));
    return qdiv::DensityOperator::basis_state({d}, k);
  }
  if (spec.rfind("diag:", 0) == 0) {
    std::vector<double> entries;
    std::stringstream ss(spec.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) entries.push_back(std::stod(item));
    const int d = static_cast<int>(entries.size());
    qdiv::Matrix m = qdiv::Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
    return qdiv::DensityOperator(std::move(m), {d});
  }
  return qdiv::serialize::read_state_json(read_file(spec));
}

qdiv::QuantumChannel load_channel(const std::string& path) {
  return qdiv::serialize::read_channel_json(read_file(path));
}

DivergenceKind parse_kind(const std::string& name, double alpha, double epsilon) {
  if (name == "umegaki") return DivergenceKind::make_umegaki();
  if (name == "dmax") return DivergenceKind::make_dmax();
  if (name == "petz") {
    if (alpha <= 0.0) throw std::invalid_argument("--alpha required for kind=petz");
    return DivergenceKind::make_petz(alpha);
  }
  if (name == "sandwiched") {
    if (alpha <= 0.0) throw std::invalid_argument("--alpha required for kind=sandwiched");
    return DivergenceKind::make_sandwiched(alpha);
  }
  if (name == "hypothesis") return DivergenceKind::make_hypothesis(epsilon);
  throw std::invalid_argument("unknown kind: " + name);
}

std::string format_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return qdiv::serialize::sci12(v);
}

json json_value(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return json(v);
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  return out + "\"";
}

// ---------------------------------------------------------------------------
// divergence
// ---------------------------------------------------------------------------

int cmd_divergence(const std::string& state_a, const std::string& state_b,
                   const std::string& kind_name, double alpha, double epsilon,
                   const std::string& out_format) {
  const qdiv::DensityOperator rho = load_state(state_a);
  const qdiv::DensityOperator sigma = load_state(state_b);
  const DivergenceKind kind = parse_kind(kind_name, alpha, epsilon);
  const qdiv::statediv::DivergenceValue value =
      qdiv::statediv::state_divergence(kind, rho, sigma);

  if (out_format == "json") {
    json row;
    row["kind"] = kind.label();
    row["alpha"] = kind.alpha;
    row["epsilon"] = kind.epsilon;
    row["value"] = json_value(value.value);
    row["support_ok"] = value.support_ok;
    std::cout << row.dump() << "\n";
  } else {
    std::cout << "kind,alpha,epsilon,value,support_ok\n";
    std::cout << kind.label() << ',' << qdiv::serialize::sci12(kind.alpha) << ','
              << qdiv::serialize::sci12(kind.epsilon) << ',' << format_value(value.value)
              << ',' << (value.support_ok ? "true" : "false") << "\n";
  }
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// chandiv
// ---------------------------------------------------------------------------

int cmd_chandiv(const std::string& chan_a, const std::string& chan_b,
                const std::string& kind_name, double alpha, double epsilon, int n_max,
                const std::string& strategy_class, const qdiv::chandiv::OptimizerConfig& cfg,
                const std::string& out_format) {
  const qdiv::QuantumChannel n = load_channel(chan_a);
  const qdiv::QuantumChannel m = load_channel(chan_b);

  struct Row {
    int copies;
    double value;
    std::string witness_hash;
  };
  std::vector<Row> rows;

  if (strategy_class == "none") {
    const DivergenceKind kind = parse_kind(kind_name, alpha, epsilon);
    for (const qdiv::chandiv::RegularizedPoint& point :
         qdiv::chandiv::regularized_estimate(n, m, kind, n_max, cfg))
      rows.push_back({point.copies, point.per_copy_value,
                      qdiv::serialize::witness_hash(point.witness)});
  } else {
    const qdiv::discrim::StrategyClass cls = strategy_class == "pro"
                                                 ? qdiv::discrim::StrategyClass::product
                                                 : qdiv::discrim::StrategyClass::coherent;
    for (const qdiv::discrim::SteinPoint& point :
         qdiv::discrim::stein_sequence(n, m, epsilon, n_max, cls, cfg))
      rows.push_back(
          {point.copies, point.rate, qdiv::serialize::witness_hash(point.witness)});
  }

  if (out_format == "json") {
    json out = json::array();
    for (const Row& row : rows) {
      json j;
      j["k"] = row.copies;
      j["value"] = json_value(row.value);
      j["witness_hash"] = row.witness_hash;
      out.push_back(std::move(j));
    }
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "k,value,witness_hash\n";
    for (const Row& row : rows)
      std::cout << row.copies << ',' << format_value(row.value) << ',' << row.witness_hash
                << "\n";
  }
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// exponents
// ---------------------------------------------------------------------------

int cmd_exponents(const std::string& chan_a, const std::string& chan_b, double rate,
                  int n_max, const qdiv::chandiv::OptimizerConfig& cfg,
                  const std::string& out_format) {
  if (rate <= 0.0) throw std::invalid_argument("--rate must be positive");
  const qdiv::QuantumChannel n = load_channel(chan_a);
  const qdiv::QuantumChannel m = load_channel(chan_b);
  const qdiv::discrim::ExponentReport report =
      qdiv::discrim::exponent_report(n, m, rate, cfg, n_max);

  struct Row {
    const char* regime;
    const char* variant;
    const qdiv::discrim::ExponentBranch* branch;
  };
  const Row rows[] = {
      {"sc", "one-shot", &report.sc_one_shot},
      {"sc", "regularized", &report.sc_regularized},
      {"err", "one-shot", &report.err_one_shot},
      {"err", "regularized", &report.err_regularized},
  };

  if (out_format == "json") {
    json out;
    out["rate"] = rate;
    out["regularized_copies"] = report.regularized_copies;
    json list = json::array();
    for (const Row& row : rows) {
      json j;
      j["regime"] = row.regime;
      j["variant"] = row.variant;
      j["value"] = json_value(row.branch->value);
      j["alpha_at_sup"] = row.branch->alpha_at_sup;
      j["witness_hash"] = row.branch->witness
                              ? json(qdiv::serialize::witness_hash(*row.branch->witness))
                              : json(nullptr);
      list.push_back(std::move(j));
    }
    out["exponents"] = std::move(list);
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "regime,variant,value,alpha_at_sup,witness_hash\n";
    for (const Row& row : rows)
      std::cout << row.regime << ',' << row.variant << ',' << format_value(row.branch->value)
                << ',' << qdiv::serialize::sci12(row.branch->alpha_at_sup) << ','
                << (row.branch->witness ? qdiv::serialize::witness_hash(*row.branch->witness)
                                        : std::string("-"))
                << "\n";
  }
  return kExitSuccess;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

qdiv::QuantumChannel seeded_positive_channel(std::uint64_t seed, std::uint64_t stream,
                                             int dim) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    qdiv::Rng rng = qdiv::Rng::derive(seed, stream + static_cast<std::uint64_t>(attempt));
    qdiv::QuantumChannel chan = qdiv::random_channel(rng, dim, dim);
    if (qdiv::chandiv::positivity_check(chan)) return chan;
  }
  throw std::runtime_error("failed to sample a positive definite channel");
}

void emit_reports(const std::vector<qdiv::verify::CheckReport>& reports,
                  const std::vector<qdiv::verify::GltRecord>& glt_rows,
                  const std::string& out_format) {
  if (out_format == "json") {
    json out;
    json checks = json::array();
    for (const qdiv::verify::CheckReport& r : reports) {
      json j;
      j["name"] = r.name;
      j["trials"] = r.trials;
      j["violations"] = r.violations;
      j["worst_margin"] = json_value(r.worst_margin);
      j["seed"] = r.seed;
      j["witness"] = r.witness;
      checks.push_back(std::move(j));
    }
    out["checks"] = std::move(checks);
    if (!glt_rows.empty()) {
      json rows = json::array();
      for (const qdiv::verify::GltRecord& g : glt_rows) {
        json j;
        j["d"] = g.d;
        j["lhs"] = g.lhs;
        j["rhs"] = g.rhs;
        j["violated"] = g.violated;
        rows.push_back(std::move(j));
      }
      out["glt"] = std::move(rows);
    }
    std::cout << out.dump() << "\n";
    return;
  }
  if (!reports.empty()) {
    std::cout << "name,trials,violations,worst_margin,seed,witness\n";
    for (const qdiv::verify::CheckReport& r : reports)
      std::cout << r.name << ',' << r.trials << ',' << r.violations << ','
                << format_value(r.worst_margin) << ',' << r.seed << ','
                << csv_quote(r.witness) << "\n";
  }
  if (!glt_rows.empty()) {
    std::cout << "d,lhs,rhs,violated\n";
    for (const qdiv::verify::GltRecord& g : glt_rows)
      std::cout << g.d << ',' << qdiv::serialize::sci12(g.lhs) << ','
                << qdiv::serialize::sci12(g.rhs) << ',' << (g.violated ? "true" : "false")
                << "\n";
  }
}

int cmd_verify(const std::string& suite, int trials, int dim, std::uint64_t seed,
               int glt_d, double epsilon, int restarts, const std::string& out_format) {
  namespace verify = qdiv::verify;
  std::vector<verify::CheckReport> reports;
  std::vector<verify::GltRecord> glt_rows;

  auto want = [&](const char* name) { return suite == "all" || suite == name; };
  bool known = suite == "all";

  if (want("twomat")) {
    known = true;
    reports.push_back(verify::check_twomat(trials > 0 ? trials : 10000, dim > 0 ? dim : 8, seed));
  }
  if (want("boundsdmin")) {
    known = true;
    reports.push_back(
        verify::check_boundsdmin(trials > 0 ? trials : 10000, dim > 0 ? dim : 4, seed));
  }
  if (want("dh-sandwiched")) {
    known = true;
    reports.push_back(
        verify::check_dh_sandwiched(trials > 0 ? trials : 10000, dim > 0 ? dim : 4, seed));
  }
  if (want("ubd")) {
    known = true;
    qdiv::Rng rng = qdiv::Rng::derive(seed, 7001);
    const qdiv::DensityOperator rho = qdiv::random_density(rng, {2});
    const qdiv::DensityOperator sigma = qdiv::random_density(rng, {2});
    std::vector<double> mu(11), r(11), s(11);
    for (int i = 0; i < 11; ++i) {
      mu[static_cast<std::size_t>(i)] = -2.0 + 0.4 * i;
      r[static_cast<std::size_t>(i)] = -2.0 + 0.4 * i;
      s[static_cast<std::size_t>(i)] = 0.1 * i;
    }
    reports.push_back(verify::check_ubd(rho, sigma, 3, mu, r, s));
    reports.back().seed = seed;
  }
  if (want("symmetrization")) {
    known = true;
    qdiv::QuantumChannel n = seeded_positive_channel(seed, 7100, 2);
    qdiv::QuantumChannel m = seeded_positive_channel(seed, 7200, 2);
    reports.push_back(
        verify::check_symmetrization(n, m, epsilon, trials > 0 ? trials : 200, seed));
  }
  if (want("infnorm")) {
    known = true;
    qdiv::QuantumChannel n = seeded_positive_channel(seed, 7300, 2);
    reports.push_back(verify::check_infnorm_bound(n, 3, trials > 0 ? trials : 200, seed));
  }
  if (want("glt")) {
    known = true;
    if (glt_d > 0) {
      glt_rows.push_back(verify::counterexample_glt(glt_d));
    } else {
      glt_rows.push_back(verify::counterexample_glt(4));
      glt_rows.push_back(verify::counterexample_glt(64));
      const int minimal = verify::counterexample_glt_minimal_d();
      if (minimal > 0) glt_rows.push_back(verify::counterexample_glt(minimal));
    }
    // the closed form is constant in d; deviations count as violations
    verify::CheckReport constancy{"glt", 0, 0, -1.0, "", seed};
    const double expected = verify::counterexample_glt(2).lhs;
    for (const verify::GltRecord& g : glt_rows) {
      ++constancy.trials;
      const double excess = std::abs(g.lhs - expected) - 1e-12;
      if (excess > constancy.worst_margin) {
        constancy.worst_margin = excess;
        constancy.witness = "d=" + std::to_string(g.d);
      }
      if (excess > 0) ++constancy.violations;
    }
    reports.push_back(std::move(constancy));
  }
  if (want("order")) {
    known = true;
    qdiv::Rng rng = qdiv::Rng::derive(seed, 7400);
    qdiv::QuantumChannel n = qdiv::random_channel(rng, 2, 2);
    qdiv::QuantumChannel m = qdiv::random_channel(rng, 2, 2);
    qdiv::chandiv::OptimizerConfig cfg;
    cfg.seed = seed;
    cfg.restarts = restarts;
    reports.push_back(verify::check_order_relation(n, m, cfg));
  }
  if (want("continuity")) {
    known = true;
    reports.push_back(
        verify::check_continuity(trials > 0 ? trials : 500, dim > 0 ? dim : 4, seed));
  }
  if (!known) {
    std::cerr << "unknown suite: " << suite << "\n";
    return kExitUsage;
  }

  emit_reports(reports, glt_rows, out_format);
  for (const verify::CheckReport& r : reports)
    if (r.violations > 0) return kExitViolation;
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum channel discrimination toolkit"};
  app.require_subcommand(1);

  std::string out_format = "csv";
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  app.add_option("--out", out_format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "seed for all randomized work");
  app.add_option("--tol", tolerance, "numerical tolerance (informational)");

  // divergence
  auto* divergence = app.add_subcommand("divergence", "divergence between two states");
  std::string state_a, state_b, kind_name = "umegaki";
  double alpha = 0.0, epsilon = 0.1;
  divergence->add_option("state_a", state_a, "state file or inline spec")->required();
  divergence->add_option("state_b", state_b, "state file or inline spec")->required();
  divergence->add_option("--kind", kind_name, "divergence kind")
      ->check(CLI::IsMember({"umegaki", "petz", "sandwiched", "dmax", "hypothesis"}));
  divergence->add_option("--alpha", alpha, "Renyi order");
  divergence->add_option("--epsilon", epsilon, "Type I error budget");

  // chandiv
  auto* chandiv_cmd = app.add_subcommand("chandiv", "channel divergence estimates per copy count");
  std::string chan_a, chan_b, strategy_class = "none";
  int n_max = 2, restarts = 8;
  chandiv_cmd->add_option("channel_a", chan_a, "channel spec file")->required();
  chandiv_cmd->add_option("channel_b", chan_b, "channel spec file")->required();
  chandiv_cmd->add_option("--kind", kind_name, "divergence kind")
      ->check(CLI::IsMember({"umegaki", "petz", "sandwiched", "dmax", "hypothesis"}));
  chandiv_cmd->add_option("--alpha", alpha, "Renyi order");
  chandiv_cmd->add_option("--epsilon", epsilon, "Type I error budget");
  chandiv_cmd->add_option("--nmax", n_max, "largest copy count");
  chandiv_cmd->add_option("--restarts", restarts, "optimizer restarts");
  chandiv_cmd->add_option("--class", strategy_class, "stein sequence strategy class")
      ->check(CLI::IsMember({"none", "pro", "coh"}));

  // exponents
  auto* exponents = app.add_subcommand("exponents", "strong-converse and error exponents");
  double rate = 0.0;
  exponents->add_option("channel_a", chan_a, "channel spec file")->required();
  exponents->add_option("channel_b", chan_b, "channel spec file")->required();
  exponents->add_option("--rate", rate, "Type II decay rate r")->required();
  exponents->add_option("--nmax", n_max, "copies for the regularized estimate");
  exponents->add_option("--restarts", restarts, "optimizer restarts");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "property-check suites");
  std::string suite = "all";
  int trials = 0, dim = 0, glt_d = 0;
  verify_cmd->add_option("--suite", suite, "suite name");
  verify_cmd->add_option("--trials", trials, "trial count (suite default if 0)");
  verify_cmd->add_option("--dim", dim, "sample dimension (suite default if 0)");
  verify_cmd->add_option("--d", glt_d, "dimension for the glt record");
  verify_cmd->add_option("--epsilon", epsilon, "Type I error budget");
  verify_cmd->add_option("--restarts", restarts, "optimizer restarts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    if (divergence->parsed())
      return cmd_divergence(state_a, state_b, kind_name, alpha, epsilon, out_format);
    if (chandiv_cmd->parsed()) {
      qdiv::chandiv::OptimizerConfig cfg;
      cfg.seed = seed;
      cfg.restarts = restarts;
      return cmd_chandiv(chan_a, chan_b, kind_name, alpha, epsilon, n_max, strategy_class,
                         cfg, out_format);
    }
    if (exponents->parsed()) {
      qdiv::chandiv::OptimizerConfig cfg;
      cfg.seed = seed;
      cfg.restarts = restarts;
      return cmd_exponents(chan_a, chan_b, rate, n_max, cfg, out_format);
    }
    if (verify_cmd->parsed())
      return cmd_verify(suite, trials, dim, seed, glt_d, epsilon, restarts, out_format);
  } catch (const qdiv::resource_limit_error& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
