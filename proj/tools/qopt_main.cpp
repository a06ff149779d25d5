#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qopt/solvers.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct ExperimentConfig {
  std::size_t m = 10;
  std::size_t n = 1000;
  double beta = 0.05;
  double rho = 1.0;
  double sigma = 0.1;
  std::uint64_t seed = 1;
  int max_iter = 1000;
  double eps_abs = 1e-6;
  double eps_rel = 1e-4;
  int reference_iters = 1000;
  std::string output_dir = ".";
};

constexpr double kSparsity = 0.03;  // fraction of nonzero entries in q0

int run_bpdn_experiment(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const qopt::BpdnInstance inst =
      qopt::make_pure_instance(cfg.m, cfg.n, kSparsity, cfg.sigma, cfg.seed);
  const qopt::BpdnProblem prob{inst.d, inst.y, cfg.beta};

  // Long reference run to estimate the optimal value; stopping thresholds are
  // effectively disabled so the run always uses reference_iters iterations.
  qopt::AdmmConfig ref_cfg;
  ref_cfg.rho = cfg.rho;
  ref_cfg.max_iter = cfg.reference_iters;
  ref_cfg.eps_abs = 1e-300;
  ref_cfg.eps_rel = 1e-300;
  const qopt::BpdnResult reference = qopt::bpdn_solve(prob, ref_cfg);
  const double nu_star = reference.trace.rows.back().objective;

  qopt::AdmmConfig run_cfg;
  run_cfg.rho = cfg.rho;
  run_cfg.max_iter = cfg.max_iter;
  run_cfg.eps_abs = cfg.eps_abs;
  run_cfg.eps_rel = cfg.eps_rel;
  const auto t1 = std::chrono::steady_clock::now();
  const qopt::BpdnResult measured = qopt::bpdn_solve(prob, run_cfg);
  const auto t2 = std::chrono::steady_clock::now();

  fs::create_directories(cfg.output_dir);
  const fs::path trace_path = fs::path(cfg.output_dir) / "bpdn_trace.csv";
  {
    std::FILE* f = std::fopen(trace_path.string().c_str(), "w");
    if (f == nullptr) {
      throw std::runtime_error("cannot open for writing: " + trace_path.string());
    }
    std::fprintf(f, "k,objective,suboptimality,primal_res,dual_res\n");
    for (const qopt::TraceRow& r : measured.trace.rows) {
      std::fprintf(f, "%d,%.17g,%.17g,%.17g,%.17g\n", r.k, r.objective, r.objective - nu_star,
                   r.primal_res, r.dual_res);
    }
    std::fclose(f);
  }

  const qopt::TraceRow& last = measured.trace.rows.back();
  json summary;
  summary["seed"] = cfg.seed;
  summary["iterations"] = last.k;
  summary["final_objective"] = last.objective;
  summary["final_suboptimality"] = last.objective - nu_star;
  summary["final_primal_res"] = last.primal_res;
  summary["final_dual_res"] = last.dual_res;
  summary["max_re_violation"] = measured.max_re_violation;
  summary["nu_star"] = nu_star;
  summary["status"] =
      measured.status == qopt::SolveStatus::converged ? "converged" : "max_iter";
  summary["wall_time_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(t2 - t1).count();
  summary["total_time_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(t2 - t0).count();
  summary["reference"] = {{"iterations", reference.trace.rows.back().k},
                          {"final_primal_res", reference.trace.rows.back().primal_res},
                          {"final_dual_res", reference.trace.rows.back().dual_res}};
  std::ofstream out(fs::path(cfg.output_dir) / "bpdn_summary.json");
  out << summary.dump(2) << "\n";

  std::cout << "bpdn experiment: " << (measured.status == qopt::SolveStatus::converged
                                           ? "converged"
                                           : "max_iter reached")
            << " after " << last.k << " iterations, primal " << last.primal_res << ", dual "
            << last.dual_res << "\n";
  return measured.status == qopt::SolveStatus::converged ? 0 : 2;
}

qopt::WllsProblem load_wlls_manifest(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + manifest_path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(manifest_path + ": invalid JSON manifest: " + e.what());
  }
  const fs::path dir = fs::path(manifest_path).parent_path();
  const auto resolve = [&](const char* key) {
    return (dir / j.at("paths").at(key).get<std::string>()).string();
  };
  qopt::WllsProblem prob;
  prob.p1 = qopt::load_qmatrix_csv(resolve("P1"));
  prob.p2 = qopt::load_qmatrix_csv(resolve("P2"));
  prob.p3 = qopt::load_qmatrix_csv(resolve("P3"));
  prob.p4 = qopt::load_qmatrix_csv(resolve("P4"));
  prob.y = qopt::load_qvector_csv(resolve("y"));
  const std::string cone = j.at("constraint").get<std::string>();
  if (cone == "nonneg_parts") {
    prob.cone = qopt::ConstraintSet::nonneg_parts;
  } else if (cone == "soc") {
    prob.cone = qopt::ConstraintSet::soc_cone;
  } else {
    throw std::runtime_error(manifest_path + ": unknown constraint '" + cone +
                             "' (expected nonneg_parts or soc)");
  }
  return prob;
}

int run_wlls(const std::string& manifest_path, const std::string& subsolver,
             const std::string& output_dir, const qopt::AdmmConfig& cfg) {
  const qopt::WllsProblem prob = load_wlls_manifest(manifest_path);
  qopt::WllsOptions options;
  if (subsolver == "explicit") {
    options.subsolver = qopt::WllsSubsolver::explicit_augmented;
  } else if (subsolver == "gd") {
    options.subsolver = qopt::WllsSubsolver::gradient_descent;
  } else {
    throw std::runtime_error("unknown subsolver '" + subsolver + "' (expected explicit or gd)");
  }

  const auto t0 = std::chrono::steady_clock::now();
  const qopt::WllsResult res = qopt::wlls_solve(prob, cfg, options);
  const auto t1 = std::chrono::steady_clock::now();

  fs::create_directories(output_dir);
  qopt::save_qvector_csv((fs::path(output_dir) / "wlls_solution.csv").string(), res.solution);
  {
    std::ofstream out(fs::path(output_dir) / "wlls_trace.csv");
    qopt::write_csv(res.trace, out);
  }
  const qopt::TraceRow& last = res.trace.rows.back();
  json summary;
  summary["iterations"] = last.k;
  summary["final_objective"] = last.objective;
  summary["final_primal_res"] = last.primal_res;
  summary["final_dual_res"] = last.dual_res;
  summary["subsolver"] = subsolver;
  summary["status"] = res.status == qopt::SolveStatus::converged ? "converged" : "max_iter";
  summary["wall_time_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  std::ofstream out(fs::path(output_dir) / "wlls_summary.json");
  out << summary.dump(2) << "\n";

  std::cout << "wlls: " << (res.status == qopt::SolveStatus::converged ? "converged"
                                                                       : "max_iter reached")
            << " after " << last.k << " iterations\n";
  return res.status == qopt::SolveStatus::converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quaternion-domain convex optimization solvers"};
  app.require_subcommand(1);

  ExperimentConfig exp;
  CLI::App* bpdn = app.add_subcommand(
      "bpdn-experiment", "Run the synthetic 3D basis pursuit denoising convergence experiment");
  bpdn->add_option("--m", exp.m, "Number of measurements");
  bpdn->add_option("--n", exp.n, "Dictionary size");
  bpdn->add_option("--beta", exp.beta, "l1 penalty weight");
  bpdn->add_option("--rho", exp.rho, "Splitting penalty");
  bpdn->add_option("--sigma", exp.sigma, "Noise standard deviation per component");
  bpdn->add_option("--seed", exp.seed, "Instance seed");
  bpdn->add_option("--max-iter", exp.max_iter, "Measured-run iteration cap");
  bpdn->add_option("--eps-abs", exp.eps_abs, "Absolute stopping tolerance");
  bpdn->add_option("--eps-rel", exp.eps_rel, "Relative stopping tolerance");
  bpdn->add_option("--reference-iters", exp.reference_iters,
                   "Iterations of the reference run used for the optimal value");
  bpdn->add_option("--output-dir", exp.output_dir, "Directory for trace and summary files");

  std::string manifest;
  std::string subsolver = "explicit";
  std::string wlls_outdir = ".";
  qopt::AdmmConfig wlls_cfg;
  CLI::App* wlls = app.add_subcommand(
      "wlls", "Solve a constrained widely linear least squares problem from a manifest");
  wlls->add_option("--manifest", manifest, "JSON manifest with P1..P4, y and constraint")
      ->required();
  wlls->add_option("--subsolver", subsolver, "q-update strategy: explicit or gd");
  wlls->add_option("--rho", wlls_cfg.rho, "Splitting penalty");
  wlls->add_option("--max-iter", wlls_cfg.max_iter, "Iteration cap");
  wlls->add_option("--eps-abs", wlls_cfg.eps_abs, "Absolute stopping tolerance");
  wlls->add_option("--eps-rel", wlls_cfg.eps_rel, "Relative stopping tolerance");
  wlls->add_option("--output-dir", wlls_outdir, "Directory for solution and trace files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints usage/diagnostic
    return 1;
  }

  try {
    if (bpdn->parsed()) {
      return run_bpdn_experiment(exp);
    }
    return run_wlls(manifest, subsolver, wlls_outdir, wlls_cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
