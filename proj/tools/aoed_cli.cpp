// Copyright 2026 The aoed Authors
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

// Command-line front end: generate problems, run the solvers, and emit
// CSV/JSON artifacts.
//
//   aoed generate --family diagonal --variances 4,1 --out M/
//   aoed solve --model M/ --method relaxed --m0 1 --out R/
//   aoed solve --model M/ --method greedy --m0-range 1:3 --out R/
//   aoed compare --model M/ --m0-start 3 --m-max 10 --out R/
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error. Outputs are
// written atomically; input model directories are never modified.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aoed/aoed.hpp"

namespace {

struct SolveConfig {
  std::string model_dir;
  std::string method;
  int m0 = 0;                // 0 = unset
  std::string m0_range;      // "a:b", empty = unset
  std::string out_dir;
  double tol_pg = 1e-8;
  int max_iters = 2000;
  int prune_every = 1;
  double tol_grad = -1.0;
};

/// Inclusive budget range from --m0/--m0-range; throws InvalidSpec on
/// malformed input.
std::pair<int, int> budget_range(const SolveConfig& config) {
  if ((config.m0 != 0) == !config.m0_range.empty()) {
    throw aoed::InvalidSpec("exactly one of --m0 or --m0-range is required");
  }
  if (config.m0 != 0) return {config.m0, config.m0};
  const size_t colon = config.m0_range.find(':');
  int lo = 0, hi = 0;
  try {
    size_t lo_end = 0, hi_end = 0;
    if (colon == std::string::npos) throw std::invalid_argument("no colon");
    lo = std::stoi(config.m0_range.substr(0, colon), &lo_end);
    hi = std::stoi(config.m0_range.substr(colon + 1), &hi_end);
    if (lo_end != colon || hi_end != config.m0_range.size() - colon - 1) {
      throw std::invalid_argument("trailing characters");
    }
  } catch (const std::exception&) {
    throw aoed::InvalidSpec("--m0-range must have the form a:b");
  }
  if (lo < 1 || hi < lo) {
    throw aoed::InvalidSpec("--m0-range needs 1 <= a <= b");
  }
  return {lo, hi};
}

std::string design_row(int m0, const Eigen::VectorXd& w) {
  std::ostringstream out;
  out << m0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    out << ',' << aoed::format_double(w[k]);
  }
  out << '\n';
  return out.str();
}

std::string objective_row(int m0, std::initializer_list<double> values) {
  std::ostringstream out;
  out << m0;
  for (double v : values) out << ',' << aoed::format_double(v);
  out << '\n';
  return out.str();
}

const char* class_name(aoed::IndexClass label) {
  switch (label) {
    case aoed::IndexClass::dominant: return "dominant";
    case aoed::IndexClass::redundant: return "redundant";
    case aoed::IndexClass::intermediate: return "intermediate";
  }
  return "unknown";
}

nlohmann::json certificate_json(const aoed::Certificate& cert) {
  nlohmann::json classification = nlohmann::json::array();
  for (aoed::IndexClass label : cert.classification) {
    classification.push_back(class_name(label));
  }
  nlohmann::json violations = nlohmann::json::array();
  for (const aoed::CertificateViolation& v : cert.violations) {
    violations.push_back({{"index", v.index},
                          {"condition", std::string(1, v.condition)}});
  }
  return nlohmann::json{
      {"is_optimal", cert.is_optimal},
      {"budget", cert.budget},
      {"tol_grad", cert.tol_grad},
      {"threshold_low", cert.threshold_low},
      {"threshold_high", std::isfinite(cert.threshold_high)
                             ? nlohmann::json(cert.threshold_high)
                             : nlohmann::json(nullptr)},
      {"classification", classification},
      {"violations", violations},
      {"source_converged", cert.source_converged}};
}

void ensure_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw aoed::IoError("cannot create directory " + dir.string() + ": " +
                        ec.message());
  }
}

int run_generate(const aoed::ProblemSpec& spec, const std::string& out_dir) {
  const aoed::Model model = aoed::generate(spec);
  aoed::save_model(model, out_dir, aoed::generator_string(spec));
  std::cout << "m=" << model.num_sensors << " d=" << model.block_size
            << " n=" << model.param_dim
            << " noise_var=" << aoed::format_double(model.noise_var) << "\n";
  return 0;
}

int run_solve(const SolveConfig& config) {
  const auto [lo, hi] = budget_range(config);
  const aoed::Model model = aoed::load_model(config.model_dir);
  const aoed::PrecomputedKernels kernels = aoed::precompute(model);
  const std::filesystem::path out = config.out_dir;
  ensure_out_dir(out);

  aoed::SolverOptions solver;
  solver.tol_pg = config.tol_pg;
  solver.max_iters = config.max_iters;

  std::string designs_csv;
  std::string objectives_csv;
  int status = 0;

  if (config.method == "greedy") {
    const aoed::SweepTrace trace = aoed::greedy_sweep(model, kernels, hi);
    for (int m0 = lo; m0 <= hi; ++m0) {
      designs_csv += design_row(m0, trace.designs[m0 - 1].weights);
      objectives_csv += objective_row(m0, {trace.objectives[m0 - 1]});
    }
  } else if (config.method == "brute") {
    for (int m0 = lo; m0 <= hi; ++m0) {
      const auto [design, value] = aoed::brute_force_best(model, kernels, m0);
      designs_csv += design_row(m0, design.weights);
      objectives_csv += objective_row(m0, {value});
    }
  } else if (config.method == "relaxed") {
    for (int m0 = lo; m0 <= hi; ++m0) {
      const aoed::RelaxedSolution sol =
          aoed::solve_relaxed(model, kernels, m0, solver);
      if (!sol.converged) {
        std::cerr << "relaxed solve did not converge at m0=" << m0
                  << " (projected-gradient norm "
                  << aoed::format_double(sol.final_step_criterion) << ")\n";
        status = 1;
      }
      const aoed::Certificate cert =
          aoed::certify_solution(model, kernels, sol, config.tol_grad);
      designs_csv += design_row(m0, sol.w_star.weights);
      objectives_csv += objective_row(m0, {sol.objective_value});
      const std::string name =
          lo == hi ? "certificate.json"
                   : "certificate_" + std::to_string(m0) + ".json";
      aoed::write_file_atomic(out / name, certificate_json(cert).dump(2) + "\n");
    }
  } else {  // informed; greedy runs too, for the comparison columns
    aoed::InformedOptions opts;
    opts.solver = solver;
    opts.prune_every = config.prune_every;
    opts.tol_grad = config.tol_grad;
    const aoed::SweepTrace greedy_trace = aoed::greedy_sweep(model, kernels, hi);
    const aoed::InformedTrace trace =
        aoed::informed_sweep(model, kernels, lo, hi, opts);
    const aoed::ComparisonReport report = compare_sweeps(greedy_trace, trace);
    for (int m0 = lo; m0 <= hi; ++m0) {
      const aoed::ComparisonRow& row = report.rows[m0 - lo];
      designs_csv += design_row(m0, trace.designs[m0 - lo].weights);
      objectives_csv += objective_row(
          m0, {row.j_informed, row.j_greedy, row.j_relaxed,
               row.rel_improvement});
    }
  }

  aoed::write_file_atomic(out / "designs.csv", designs_csv);
  aoed::write_file_atomic(out / "objectives.csv", objectives_csv);
  return status;
}

int run_compare(const std::string& model_dir, int m0_start, int m_max,
                const SolveConfig& config) {
  const aoed::Model model = aoed::load_model(model_dir);
  const aoed::PrecomputedKernels kernels = aoed::precompute(model);
  const std::filesystem::path out = config.out_dir;
  ensure_out_dir(out);

  aoed::InformedOptions opts;
  opts.solver.tol_pg = config.tol_pg;
  opts.solver.max_iters = config.max_iters;
  opts.prune_every = config.prune_every;
  opts.tol_grad = config.tol_grad;

  const aoed::SweepTrace greedy_trace =
      aoed::greedy_sweep(model, kernels, m_max);
  const aoed::InformedTrace informed_trace =
      aoed::informed_sweep(model, kernels, m0_start, m_max, opts);
  const aoed::ComparisonReport report =
      compare_sweeps(greedy_trace, informed_trace);

  aoed::write_file_atomic(out / "report.csv", aoed::comparison_csv(report));
  aoed::write_file_atomic(out / "report.json",
                          aoed::comparison_json(report).dump(2) + "\n");
  std::printf(
      "mean improvement %.2f%%, best-case %.2f%%, relaxed %.3fs of %.3fs "
      "total (plain greedy %.3fs)\n",
      100.0 * report.mean_improvement, 100.0 * report.best_improvement,
      report.relaxed_seconds, report.informed_seconds, report.greedy_seconds);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"A-optimal Bayesian sensor placement"};
  app.require_subcommand(1);

  // generate
  aoed::ProblemSpec spec;
  std::string family = "diagonal";
  std::string gen_out;
  double noise_var = 0.0;
  CLI::App* generate = app.add_subcommand("generate", "Generate a model directory");
  generate->add_option("--family", family, "diagonal|random_gaussian|grid_source")
      ->check(CLI::IsMember({"diagonal", "random_gaussian", "grid_source"}));
  generate->add_option("--variances", spec.variances,
                       "diagonal family prior variances")
      ->delimiter(',');
  generate->add_option("--m", spec.m, "number of candidate sensors");
  generate->add_option("--d", spec.d, "measurements per sensor");
  generate->add_option("--n", spec.n, "parameter dimension");
  generate->add_option("--seed", spec.seed, "generator seed");
  generate->add_option("--noise-percent", spec.noise_percent,
                       "noise calibration percentage");
  CLI::Option* noise_var_opt =
      generate->add_option("--noise-var", noise_var, "explicit noise variance");
  generate->add_option("--length-scale", spec.length_scale,
                       "grid_source prior length scale");
  generate->add_option("--amplitude", spec.amplitude,
                       "grid_source prior amplitude");
  generate->add_option("--extent", spec.extent, "grid_source grid half-width");
  generate->add_option("--out", gen_out, "output model directory")->required();

  // solve
  SolveConfig solve_config;
  CLI::App* solve = app.add_subcommand("solve", "Run a solver on a model");
  solve->add_option("--model", solve_config.model_dir, "model directory")
      ->required();
  solve->add_option("--method", solve_config.method,
                    "greedy|relaxed|informed|brute")
      ->required()
      ->check(CLI::IsMember({"greedy", "relaxed", "informed", "brute"}));
  solve->add_option("--m0", solve_config.m0, "single sensor budget");
  solve->add_option("--m0-range", solve_config.m0_range,
                    "inclusive budget range a:b");
  solve->add_option("--out", solve_config.out_dir, "output directory")
      ->required();
  solve->add_option("--tol-pg", solve_config.tol_pg,
                    "relaxed solver projected-gradient tolerance");
  solve->add_option("--max-iters", solve_config.max_iters,
                    "relaxed solver iteration cap");
  solve->add_option("--prune-every", solve_config.prune_every,
                    "informed sweep prune period");
  solve->add_option("--tol-grad", solve_config.tol_grad,
                    "certificate gradient tolerance");

  // compare
  SolveConfig compare_config;
  std::string compare_model;
  int m0_start = 0;
  int m_max = 0;
  CLI::App* compare =
      app.add_subcommand("compare", "Greedy vs informed comparison report");
  compare->add_option("--model", compare_model, "model directory")->required();
  compare->add_option("--m0-start", m0_start, "first budget")->required();
  compare->add_option("--m-max", m_max, "last budget")->required();
  compare->add_option("--out", compare_config.out_dir, "output directory")
      ->required();
  compare->add_option("--tol-pg", compare_config.tol_pg,
                      "relaxed solver projected-gradient tolerance");
  compare->add_option("--max-iters", compare_config.max_iters,
                      "relaxed solver iteration cap");
  compare->add_option("--prune-every", compare_config.prune_every,
                      "informed sweep prune period");
  compare->add_option("--tol-grad", compare_config.tol_grad,
                      "certificate gradient tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(generate)) {
      const auto parsed = aoed::family_from_name(family);
      spec.family = *parsed;  // IsMember guarantees a valid name
      if (noise_var_opt->count() > 0) spec.noise_var = noise_var;
      return run_generate(spec, gen_out);
    }
    if (app.got_subcommand(solve)) return run_solve(solve_config);
    return run_compare(compare_model, m0_start, m_max, compare_config);
  } catch (const aoed::InvalidSpec& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const aoed::InvalidBudget& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
