#include "pfldg/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <Eigen/Eigenvalues>

#include "pfldg/liftings.hpp"
#include "pfldg/solver.hpp"
#include "pfldg/stability.hpp"

namespace pfldg {

DGScalarFunction random_scalar(const Discretization& disc, int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DGScalarFunction u(disc, degree);
  for (auto& c : u.coefficients()) c = dist(rng);
  return u;
}

DGVectorFunction random_vector(const Discretization& disc, int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DGVectorFunction s(disc, degree);
  for (auto& c : s.coefficients()) c = dist(rng);
  return s;
}

Mesh load_mesh(const RunConfig& config) {
  if (!config.mesh_file.empty()) return read_mesh_file(config.mesh_file);
  return builtin_mesh(config.mesh);
}

namespace {

// Finest unit_square(n) at which convergence rates are asserted.
constexpr int kRateCheckSubdivisions = 16;

void add_check_rows(ExperimentReport& r) {
  for (const auto& c : r.checks) {
    r.csv_rows.push_back({c.name, format_number(c.value), format_number(c.threshold),
                          c.pass ? "1" : "0"});
  }
}

double relative_drift(double a, double b) { return std::abs(b - a) / std::abs(a); }

}  // namespace

ExperimentReport run_stability(const RunConfig& config) {
  const int k = config.k;
  const int ell = config.ell();
  std::mt19937_64 rng(config.seed);

  ExperimentReport report;
  report.experiment = "stability";
  report.mesh = config.mesh_label();
  report.k = k;
  report.ell = ell;
  report.csv_header = {"level", "cells", "h", "dofs", "c_min", "c_max", "tau_ratio_max",
                       "lower_bound_slack_min", "poincare"};

  Mesh mesh = load_mesh(config);
  std::vector<double> c_mins, tau_ratios;
  double worst_slack = std::numeric_limits<double>::infinity();
  for (int level = 0; level < config.levels; ++level) {
    if (level > 0) mesh = refine_uniform(mesh);
    const Discretization disc(mesh, k + 1);
    if (!disc.face_regular()) throw NotFaceRegular();

    const EquivalenceReport eq = equivalence_constants(disc, k, ell, report.mesh);
    double tau_ratio = 0.0;
    double slack = std::numeric_limits<double>::infinity();
    if (ell == k + 1) {
      for (int sample = 0; sample < 20; ++sample) {
        const DGScalarFunction u = random_scalar(disc, k, rng);
        const DGVectorFunction tau = build_tau(u);
        const double norm = norm_1h(u).value;
        tau_ratio = std::max(tau_ratio, check_upper_bound(u, tau));
        slack = std::min(slack, inner_product(lifted_gradient(u, ell), tau) - 0.5 * norm * norm);
      }
      worst_slack = std::min(worst_slack, slack);
    }
    const double poincare = poincare_constant(disc, k);
    c_mins.push_back(eq.c_min);
    tau_ratios.push_back(tau_ratio);
    report.csv_rows.push_back({std::to_string(level), std::to_string(mesh.num_cells()),
                               format_number(mesh.h()), std::to_string(eq.dofs),
                               format_number(eq.c_min), format_number(eq.c_max),
                               format_number(tau_ratio), format_number(slack),
                               format_number(poincare)});
    if (level == 0) {
      report.c_min = eq.c_min;
      report.c_max = eq.c_max;
    }
    report.metrics["c_min_level" + std::to_string(level)] = eq.c_min;
    report.metrics["poincare_level" + std::to_string(level)] = poincare;
  }

  if (ell == k + 1) {
    for (std::size_t l = 0; l < c_mins.size(); ++l) {
      report.checks.push_back(
          Check::at_least("c_min_positive_level" + std::to_string(l), c_mins[l], 1e-8));
    }
    for (std::size_t l = 1; l < c_mins.size(); ++l) {
      report.checks.push_back(Check::at_most("c_min_drift_level" + std::to_string(l),
                                             relative_drift(c_mins[l - 1], c_mins[l]), 0.2));
    }
    report.checks.push_back(Check::at_least("lower_bound_slack", worst_slack, -1e-10));
    const auto [lo, hi] = std::minmax_element(tau_ratios.begin(), tau_ratios.end());
    report.metrics["tau_ratio_variation"] = *hi / *lo - 1.0;
  } else if (config.mesh_file.empty() && config.mesh == "criss_cross") {
    // Equal-order lifting: only the criss-cross kernel is a proven failure.
    report.checks.push_back(Check::at_most("equal_order_c_min_vanishes", c_mins.front(), 1e-8));
  }
  return report;
}

ExperimentReport run_identities(const RunConfig& config) {
  const int k = config.k;
  std::mt19937_64 rng(config.seed);
  const Discretization disc(load_mesh(config), k + 1);
  if (!disc.face_regular()) throw NotFaceRegular();

  ExperimentReport report;
  report.experiment = "identities";
  report.mesh = config.mesh_label();
  report.k = k;
  report.ell = k + 1;
  report.csv_header = {"check", "value", "threshold", "pass"};

  double ibp = 0.0, lifting = 0.0;
  for (int pair = 0; pair < 100; ++pair) {
    const DGVectorFunction sigma = random_vector(disc, k + 1, rng);
    const DGScalarFunction v = random_scalar(disc, k, rng);
    const DGVectorFunction g = lifted_gradient(v, k + 1);
    const DGScalarFunction d = lifted_divergence(sigma, k);
    const double scale = l2_norm(sigma) * l2_norm(g) + l2_norm(d) * l2_norm(v);
    ibp = std::max(ibp, std::abs(inner_product(sigma, g) + inner_product(d, v)) / scale);

    // Lifting identity: int r(phi) . sigma = sum_F int phi {sigma . n}.
    const FaceData phi = jumps(v);
    const DGVectorFunction r = lift_vector(phi, disc, k + 1);
    double rhs = 0.0, rhs_scale = 0.0;
    const auto& t = disc.face_reference_rule().points;
    for (int f = 0; f < disc.num_faces(); ++f) {
      const PhysicalRule& rule = disc.face_rule(f);
      const Eigen::VectorXd avg_n = disc.face(f).normal.transpose() * average(sigma, f, t);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        rhs += rule.weights[q] * phi.values[f][q] * avg_n[q];
        rhs_scale += rule.weights[q] * std::abs(phi.values[f][q] * avg_n[q]);
      }
    }
    lifting = std::max(lifting, std::abs(inner_product(r, sigma) - rhs) /
                                    std::max(rhs_scale, l2_norm(r) * l2_norm(sigma)));
  }
  report.checks.push_back(Check::at_most("ibp_identity", ibp, 1e-11));
  report.checks.push_back(Check::at_most("vector_lifting_identity", lifting, 1e-11));

  double case_dev = 0.0, slack = std::numeric_limits<double>::infinity();
  std::array<int, 3> cases{};
  for (int sample = 0; sample < 50; ++sample) {
    const DGScalarFunction u = random_scalar(disc, k, rng);
    const DGVectorFunction tau = build_tau(u);
    const CaseIdentityResult c = check_case_identity(u, tau);
    case_dev = std::max(case_dev, c.max_deviation);
    cases = c.case_counts;
    const double norm = norm_1h(u).value;
    slack = std::min(slack, inner_product(lifted_gradient(u, k + 1), tau) - 0.5 * norm * norm);
  }
  report.checks.push_back(Check::at_most("three_case_identity", case_dev, 1e-10));
  report.checks.push_back(Check::at_least("lower_bound_slack", slack, -1e-10));
  for (int c = 0; c < 3; ++c) report.metrics["faces_case" + std::to_string(c + 1)] = cases[c];

  const StiffnessSystem one = assemble(disc, k, [](const Point&) { return 1.0; });
  const Eigen::SparseMatrix<double> asym = one.matrix - Eigen::SparseMatrix<double>(one.matrix.transpose());
  const double amax = Eigen::MatrixXd(one.matrix).cwiseAbs().maxCoeff();
  report.checks.push_back(Check::at_most(
      "stiffness_symmetry", asym.size() ? Eigen::MatrixXd(asym).cwiseAbs().maxCoeff() / amax : 0.0,
      1e-12));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(one.matrix),
                                                     Eigen::EigenvaluesOnly);
  report.checks.push_back(Check::at_least("stiffness_lambda_min", eig.eigenvalues()(0), 1e-12 * amax));

  for (const std::string name : {"one", "sinsin"}) {
    const ManufacturedSolution m = manufactured_solution(name);
    const StiffnessSystem sys = name == "one" ? one : assemble(disc, k, m.f);
    const SolveResult sol = solve(sys);
    const double ref = max_abs(l2_project(disc, m.f, k));
    report.checks.push_back(Check::at_most("strong_form_" + name,
                                           strong_form_residual(sol.solution, m.f) / ref, 1e-9));
    report.metrics["solve_residual_" + name] = sol.relative_residual;
  }
  add_check_rows(report);
  return report;
}

ExperimentReport run_convergence(const RunConfig& config) {
  const int k = config.k;
  if (config.levels < 3) throw ConfigError("convergence needs levels >= 3");
  const ConvergenceStudy study =
      convergence_study(config.levels, k, manufactured_solution("sinsin"));

  ExperimentReport report;
  report.experiment = "convergence";
  report.mesh = "unit_square(2..." + std::to_string(study.subdivisions.back()) + ")";
  report.k = k;
  report.ell = k + 1;
  report.csv_header = {"level", "h",     "dofs",   "err_l2", "err_h1broken",
                       "err_1h", "rate_l2", "rate_h1"};
  for (std::size_t l = 0; l < study.errors.size(); ++l) {
    const ErrorReport& e = study.errors[l];
    report.csv_rows.push_back({std::to_string(l), format_number(e.h), std::to_string(e.dofs),
                               format_number(e.err_l2), format_number(e.err_h1_broken),
                               format_number(e.err_1h),
                               l == 0 ? "" : format_number(study.rate_l2[l - 1]),
                               l == 0 ? "" : format_number(study.rate_h1[l - 1])});
  }
  // Rate thresholds are calibrated for studies reaching unit_square(16);
  // shallower studies are pre-asymptotic for k = 1 and only record rates.
  if (!study.rate_l2.empty()) {
    report.metrics["rate_l2_finest"] = study.rate_l2.back();
    report.metrics["rate_h1_finest"] = study.rate_h1.back();
    if (study.subdivisions.back() >= kRateCheckSubdivisions) {
      report.checks.push_back(Check::at_least("rate_l2_finest", study.rate_l2.back(), k + 0.85));
      report.checks.push_back(Check::at_least("rate_h1_finest", study.rate_h1.back(), k - 0.15));
    }
  }
  report.checks.push_back(Check::at_most(
      "solve_residual", *std::max_element(study.residuals.begin(), study.residuals.end()), 1e-10));
  report.metrics["err_l2_finest"] = study.errors.back().err_l2;
  report.metrics["err_h1_finest"] = study.errors.back().err_h1_broken;
  return report;
}

namespace {

std::string timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

void write_report(const ExperimentReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / (r.experiment + ".json")) << to_json(r, timestamp_now());
  std::ofstream(dir / (r.experiment + ".csv")) << to_csv(r);
}

}  // namespace

int emit(const std::vector<ExperimentReport>& reports, const RunConfig& config, std::ostream& out) {
  bool ok = true;
  const std::filesystem::path dir = config.output_dir();
  for (const auto& r : reports) {
    write_report(r, dir);
    for (const auto& c : r.checks) {
      out << (c.pass ? "PASS " : "FAIL ") << r.experiment << "/" << c.name << " = "
          << format_number(c.value) << (c.lower_bound ? " >= " : " <= ")
          << format_number(c.threshold) << "\n";
    }
    ok = ok && r.passed();
  }
  out << (ok ? "all checks passed" : "some checks failed") << " (reports in " << dir.string()
      << ")\n";
  return ok ? 0 : 1;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<ExperimentReport> reports;
  try {
    validate(config);
    const bool all = config.experiment == Experiment::all;
    if (all || config.experiment == Experiment::counterexample) reports.push_back(run_counterexample());
    if (all || config.experiment == Experiment::stability) reports.push_back(run_stability(config));
    if (all || config.experiment == Experiment::identities) reports.push_back(run_identities(config));
    if (all || config.experiment == Experiment::convergence) reports.push_back(run_convergence(config));
  } catch (const NotFaceRegular& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const MeshError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  return emit(reports, config, out);
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_config(args);
  } catch (const HelpRequested& help) {
    out << help.what();
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return run(config, out, err);
}

}  // namespace pfldg
