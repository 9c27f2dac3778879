// Command-line harness: `solve` runs one system against the built-in
// benchmark, `study` runs a convergence ladder from a config file (flags
// override file values), `probe` runs the internal consistency suite.
// Exit code 0 means everything requested succeeded.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "spdo/analysis.hpp"
#include "spdo/assembly.hpp"
#include "spdo/pointset.hpp"
#include "spdo/probes.hpp"
#include "spdo/shape.hpp"
#include "spdo/spectral.hpp"
#include "spdo/study.hpp"
#include "spdo/symbol.hpp"
#include "spdo/warnings.hpp"

namespace {

struct SolveArgs {
  std::string method = "galerkin";
  std::string operator_name = "weakly-singular";
  std::string kernel = "wendland";
  std::string points = "fibonacci:101";
  int l_max = 400;
  int table_l_max = -1;
  double norm_s = -0.5;
  double tail_rel_tol = 1e-4;
  int exact_l_max = 40;
  int refinement = 6;
  std::string out;
};

spdo::PointSet parse_points(const std::string& spec) {
  if (spec.rfind("fibonacci:", 0) == 0) {
    std::size_t pos = 0;
    const std::string tail = spec.substr(10);
    const int n = std::stoi(tail, &pos);
    if (pos != tail.size()) throw std::invalid_argument("--points fibonacci:N needs an integer N");
    return spdo::fibonacci_points(n);
  }
  if (spec.rfind("file:", 0) == 0) return spdo::load_points(spec.substr(5));
  throw std::invalid_argument("--points must be fibonacci:N or file:PATH");
}

spdo::ShapeFunction parse_kernel(const std::string& spec, int table_l_max) {
  if (spec == "wendland") return spdo::wendland_shape(3, table_l_max);
  if (spec.rfind("file:", 0) == 0) return spdo::load_shape_csv(spec.substr(5));
  throw std::invalid_argument("--kernel must be wendland or file:PATH");
}

int run_solve(const SolveArgs& args) {
  using namespace spdo;
  std::vector<std::string> warnings;
  int exit_code = 0;
  {
    WarningCapture capture(warnings);
    const int table = args.table_l_max > 0 ? args.table_l_max : 2 * args.l_max;
    const ShapeFunction shape = parse_kernel(args.kernel, table);
    const SpectralSymbol symbol = parse_symbol(args.operator_name, 3);
    const PointSet X = parse_points(args.points);
    const SetGeometry geom = characterize(X, args.refinement);

    const DirichletBenchmark bench = dirichlet_benchmark(args.exact_l_max);
    const SpectralFunction exact = bench.solution;
    const SpectralFunction data = apply(symbol, exact);

    AssemblyInfo ainfo;
    const bool weighted = args.method == "galerkin";
    const Eigen::MatrixXd A =
        weighted ? galerkin_matrix(symbol, shape, X, args.l_max, args.tail_rel_tol, &ainfo)
                 : collocation_matrix(symbol, shape, X, args.l_max, args.tail_rel_tol, &ainfo);
    const Eigen::VectorXd b = weighted ? galerkin_rhs(symbol, shape, X, data, ainfo.l_max)
                                       : collocation_rhs(symbol, X, data);
    SolveInfo sinfo;
    const Eigen::VectorXd c = cholesky_solve(A, b, &sinfo);

    double error = 0.0;
    KernelCorrection corr;
    bool corrected = false;
    if (symbol.kernel_dim(3) > 0) {
      if (symbol.kernel_set.size() == 1 && symbol.kernel_set[0] == 0) {
        ConstraintFunctional mu = ConstraintFunctional::mean_value(0.0, 3);
        mu.target = apply_to_spectral(mu, exact);
        corr = kernel_correction({mu}, c, symbol, shape, X, ainfo.l_max);
        error = corrected_solution_error(exact, c, shape, X, args.norm_s, ainfo.l_max, symbol,
                                         corr);
        corrected = true;
      } else {
        throw std::runtime_error(
            "solve: operators with zero sets beyond {0} need custom constraints via the library");
      }
    } else {
      error = sobolev_error(exact, c, shape, X, args.norm_s, ainfo.l_max).value;
    }

    std::printf("method        = %s\n", args.method.c_str());
    std::printf("operator      = %s\n", args.operator_name.c_str());
    std::printf("N             = %d\n", X.size());
    std::printf("h             = %.6g\n", geom.h);
    std::printf("q             = %.6g\n", geom.q);
    std::printf("l_max         = %d\n", ainfo.l_max);
    std::printf("tail_relative = %.3g\n", ainfo.tail_relative);
    std::printf("condition     = %.3g\n", sinfo.condition);
    std::printf("rel_residual  = %.3g\n", sinfo.rel_residual);
    std::printf("error H^%-5g = %.9g\n", args.norm_s, error);

    if (!args.out.empty()) {
      std::ofstream outf(args.out, std::ios::binary);
      if (!outf) throw std::runtime_error("cannot write output file: " + args.out);
      outf << "# spdo solve method=" << args.method << " operator=" << args.operator_name
           << " kernel=" << args.kernel << " points=" << args.points << "\n";
      char line[256];
      std::snprintf(line, sizeof line,
                    "# N=%d h=%.17g q=%.17g l_max=%d condition=%.17g rel_residual=%.17g "
                    "error=%.17g norm=%.17g\n",
                    X.size(), geom.h, geom.q, ainfo.l_max, sinfo.condition, sinfo.rel_residual,
                    error, args.norm_s);
      outf << line;
      if (corrected) {
        for (std::size_t k = 0; k < corr.degrees.size(); ++k) {
          std::snprintf(line, sizeof line, "# correction l=%d m=%d beta=%.17g\n",
                        corr.degrees[k].first, corr.degrees[k].second,
                        corr.coeffs[static_cast<Eigen::Index>(k)]);
          outf << line;
        }
      }
      outf << "# one basis coefficient per line, in point order\n";
      for (int i = 0; i < c.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g\n", c[i]);
        outf << line;
      }
      if (!outf.flush()) throw std::runtime_error("failed writing output file: " + args.out);
    }
  }
  for (const std::string& w : warnings) std::fprintf(stderr, "spdo: warning: %s\n", w.c_str());
  return exit_code;
}

int run_study(const spdo::StudyConfig& config) {
  const spdo::StudyResult result = spdo::run_convergence_study(config);
  std::fputs(spdo::report_markdown(result).c_str(), stdout);
  if (!config.out.empty()) {
    spdo::write_report(result, config.out, config.format);
    std::printf("\nreport written to %s (+ %s.plot)\n", config.out.c_str(), config.out.c_str());
  }
  bool all_ok = true;
  for (const spdo::StudyRow& row : result.rows) all_ok = all_ok && row.ok;
  return all_ok ? 0 : 1;
}

int run_probe(std::uint64_t seed) {
  const spdo::ProbeSummary summary = spdo::run_probe_suite(seed);
  std::fputs(spdo::probe_report(summary).c_str(), stdout);
  return summary.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strongly elliptic zonal-kernel solver harness"};
  app.require_subcommand(1);

  SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "assemble and solve one system");
  solve->add_option("--method", sa.method, "galerkin | collocation")
      ->check(CLI::IsMember({"galerkin", "collocation"}));
  solve->add_option("--operator", sa.operator_name,
                    "weakly-singular | double-layer | laplace-beltrami | hypersingular | "
                    "identity | custom:ORDER:EXPR");
  solve->add_option("--kernel", sa.kernel, "wendland | file:PATH");
  solve->add_option("--points", sa.points, "fibonacci:N | file:PATH");
  solve->add_option("--lmax", sa.l_max, "series truncation degree");
  solve->add_option("--table-lmax", sa.table_l_max, "coefficient table size (-1: 2*lmax)");
  solve->add_option("--norm", sa.norm_s, "Sobolev index of the reported error");
  solve->add_option("--tail-rel-tol", sa.tail_rel_tol, "max tail bound relative to the diagonal");
  solve->add_option("--exact-lmax", sa.exact_l_max, "benchmark solution truncation");
  solve->add_option("--refinement", sa.refinement, "mesh-norm candidate grid level");
  solve->add_option("--out", sa.out, "write coefficients + diagnostics here");

  CLI::App* study = app.add_subcommand("study", "run a convergence ladder");
  std::string config_path;
  study->add_option("--config", config_path, "key=value config file");
  // Flag overrides, bound as strings so they share the config grammar and
  // take precedence over file values.
  const std::vector<std::string> keys = {"method", "operator", "kernel",       "norm",
                                         "ladder", "l_max",    "table_l_max",  "points",
                                         "out",    "format",   "seed",         "tail_rel_tol",
                                         "refinement", "exact_l_max", "parallel_rows"};
  std::vector<std::string> values(keys.size());
  std::vector<CLI::Option*> opts(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    std::string flag = "--" + keys[i];
    for (char& ch : flag) {
      if (ch == '_') ch = '-';
    }
    opts[i] = study->add_option(flag, values[i], "override config key '" + keys[i] + "'");
  }

  CLI::App* probe = app.add_subcommand("probe", "run the internal consistency suite");
  std::uint64_t seed = 1;
  probe->add_option("--seed", seed, "seed for the randomized probes");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(sa);
    if (study->parsed()) {
      spdo::StudyConfig cfg =
          config_path.empty() ? spdo::StudyConfig{} : spdo::load_config(config_path);
      for (std::size_t i = 0; i < keys.size(); ++i) {
        if (opts[i]->count() > 0) spdo::set_config_kv(cfg, keys[i], values[i]);
      }
      return run_study(cfg);
    }
    if (probe->parsed()) return run_probe(seed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "spdo: error: %s\n", e.what());
    return 1;
  }
  return 1;
}
