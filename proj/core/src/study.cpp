#include "spdo/study.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "spdo/assembly.hpp"
#include "spdo/harmonics.hpp"
#include "spdo/parallel.hpp"
#include "spdo/pointset.hpp"
#include "spdo/shape.hpp"
#include "spdo/sphere.hpp"
#include "spdo/symbol.hpp"
#include "spdo/warnings.hpp"

namespace spdo {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* want) {
  throw std::invalid_argument("study config: key '" + key + "' needs " + want + ", got '" +
                              value + "'");
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) bad_value(key, v, "an integer");
    return x;
  } catch (const std::invalid_argument&) {
    bad_value(key, v, "an integer");
  } catch (const std::out_of_range&) {
    bad_value(key, v, "an integer");
  }
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) bad_value(key, v, "a number");
    return x;
  } catch (const std::invalid_argument&) {
    bad_value(key, v, "a number");
  } catch (const std::out_of_range&) {
    bad_value(key, v, "a number");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) bad_value(key, v, "an unsigned integer");
    return static_cast<std::uint64_t>(x);
  } catch (const std::invalid_argument&) {
    bad_value(key, v, "an unsigned integer");
  } catch (const std::out_of_range&) {
    bad_value(key, v, "an unsigned integer");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  std::string t;
  for (char ch : v) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  bad_value(key, v, "a boolean");
}

std::vector<int> parse_ladder(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) bad_value(key, v, "a comma-separated integer list");
    out.push_back(parse_int(key, item));
  }
  if (out.empty()) bad_value(key, v, "a comma-separated integer list");
  return out;
}

bool has_prefix(const std::string& s, const char* p) { return s.rfind(p, 0) == 0; }

std::string csv_safe(std::string s) {
  for (char& ch : s) {
    if (ch == ',') ch = ';';
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

std::string md_safe(std::string s) {
  for (char& ch : s) {
    if (ch == '|') ch = '/';
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

}  // namespace

// Take the per-degree decomposition of the uncorrected error and replace the
// zero-set degrees by directly computed  sum_m (uhat - (what + beta))^2 terms,
// where what_{l,m} = theta_hat(l) sum_j c_j Y_{l,m}(x_j) is the approximant's
// own content at those degrees.
double corrected_solution_error(const SpectralFunction& exact, const Eigen::VectorXd& c,
                                const ShapeFunction& shape, const PointSet& X, double s,
                                int l_max, const SpectralSymbol& symbol,
                                const KernelCorrection& corr) {
  const ErrorReport rep = sobolev_error(exact, c, shape, X, s, l_max, true);
  double sum = 0.0;
  for (double term : rep.per_degree) sum += term;

  const SpectralFunction eg = exact.is_zonal() ? exact.to_general3() : exact;
  for (int l : symbol.kernel_set) {
    if (l < static_cast<int>(rep.per_degree.size())) sum -= rep.per_degree[l];
    const double theta = l <= shape.table_l_max() ? shape.coeff(l) : 0.0;
    Eigen::VectorXd what = Eigen::VectorXd::Zero(2 * l + 1);
    for (int j = 0; j < X.size(); ++j) {
      const Eigen::VectorXd Y = real_harmonics_n3(l, X.point(j));
      for (int m = -l; m <= l; ++m) what[m + l] += c[j] * Y[harmonic_index(l, m)];
    }
    what *= theta;
    double block = 0.0;
    for (int m = -l; m <= l; ++m) {
      double beta = 0.0;
      for (std::size_t k = 0; k < corr.degrees.size(); ++k) {
        if (corr.degrees[k].first == l && corr.degrees[k].second == m) {
          beta = corr.coeffs[static_cast<Eigen::Index>(k)];
          break;
        }
      }
      const double uhat = l <= eg.l_max() ? eg.coeff(l, m) : 0.0;
      const double d = uhat - (what[m + l] + beta);
      block += d * d;
    }
    sum += std::pow(1.0 + l, 2.0 * s) * block;
  }
  return std::sqrt(std::max(0.0, sum));
}

void set_config_kv(StudyConfig& config, const std::string& raw_key, const std::string& value) {
  // Accept both spellings: hyphenated keys (CLI style) fold to underscores.
  std::string key = raw_key;
  std::replace(key.begin(), key.end(), '-', '_');
  if (key == "method") {
    config.method = value;
  } else if (key == "operator") {
    config.operator_name = value;
  } else if (key == "kernel") {
    config.kernel = value;
  } else if (key == "norm") {
    config.norm_s = parse_double(key, value);
  } else if (key == "ladder") {
    config.ladder = parse_ladder(key, value);
  } else if (key == "l_max") {
    config.l_max = parse_int(key, value);
  } else if (key == "table_l_max") {
    config.table_l_max = parse_int(key, value);
  } else if (key == "points") {
    config.points = value;
  } else if (key == "out") {
    config.out = value;
  } else if (key == "format") {
    config.format = value;
  } else if (key == "seed") {
    config.seed = parse_u64(key, value);
  } else if (key == "tail_rel_tol") {
    config.tail_rel_tol = parse_double(key, value);
  } else if (key == "refinement") {
    config.refinement = parse_int(key, value);
  } else if (key == "exact_l_max") {
    config.exact_l_max = parse_int(key, value);
  } else if (key == "parallel_rows") {
    config.parallel_rows = parse_bool(key, value);
  } else {
    throw std::invalid_argument("study config: unknown key '" + key + "'");
  }
}

StudyConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  StudyConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(fmt("%s:%d: expected key=value", path.c_str(), lineno));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument(fmt("%s:%d: empty key", path.c_str(), lineno));
    }
    try {
      set_config_kv(config, key, value);
    } catch (const std::exception& e) {
      throw std::invalid_argument(fmt("%s:%d: %s", path.c_str(), lineno, e.what()));
    }
  }
  return config;
}

void validate_config(const StudyConfig& config) {
  if (config.method != "galerkin" && config.method != "collocation") {
    throw std::invalid_argument("study config: method must be 'galerkin' or 'collocation'");
  }
  if (config.format != "csv" && config.format != "markdown") {
    throw std::invalid_argument("study config: format must be 'csv' or 'markdown'");
  }
  if (config.kernel != "wendland" && !(has_prefix(config.kernel, "file:") && config.kernel.size() > 5)) {
    throw std::invalid_argument("study config: kernel must be 'wendland' or 'file:PATH'");
  }
  if (config.points != "fibonacci" && !(has_prefix(config.points, "file:") && config.points.size() > 5)) {
    throw std::invalid_argument("study config: points must be 'fibonacci' or 'file:PATH'");
  }
  if (config.ladder.size() < 2) {
    throw std::invalid_argument("study config: ladder needs at least two sizes");
  }
  for (std::size_t i = 0; i < config.ladder.size(); ++i) {
    if (config.ladder[i] < 2) throw std::invalid_argument("study config: ladder entries must be >= 2");
    if (i > 0 && config.ladder[i] <= config.ladder[i - 1]) {
      throw std::invalid_argument("study config: ladder must be strictly increasing");
    }
  }
  if (config.l_max < 1) throw std::invalid_argument("study config: l_max must be >= 1");
  if (config.table_l_max != -1 && config.table_l_max < config.l_max) {
    throw std::invalid_argument("study config: table_l_max must be -1 or >= l_max");
  }
  if (!(config.tail_rel_tol > 0.0)) {
    throw std::invalid_argument("study config: tail_rel_tol must be positive (inf allowed)");
  }
  if (config.refinement < 0 || config.refinement > 8) {
    throw std::invalid_argument("study config: refinement must be in [0, 8]");
  }
  if (config.exact_l_max < 0) throw std::invalid_argument("study config: exact_l_max must be >= 0");
  if (!std::isfinite(config.norm_s)) throw std::invalid_argument("study config: norm must be finite");
}

StudyResult run_convergence_study(const StudyConfig& config) {
  validate_config(config);
  StudyResult result;
  result.config = config;
  WarningCapture capture(result.warnings);

  const int table = config.table_l_max > 0 ? config.table_l_max : 2 * config.l_max;
  const ShapeFunction shape = config.kernel == "wendland"
                                  ? wendland_shape(3, table)
                                  : load_shape_csv(config.kernel.substr(5));
  if (shape.table_l_max() < config.l_max) {
    throw std::invalid_argument(fmt("study: the kernel coefficient table stops at degree %d, "
                                    "below the requested l_max %d",
                                    shape.table_l_max(), config.l_max));
  }
  const SpectralSymbol symbol = parse_symbol(config.operator_name, 3);
  result.shape_tau = shape.tau();
  result.predicted_rate = 2.0 * shape.tau() - config.norm_s;

  // Theory preconditions; violations degrade rates, they do not stop the run.
  const double tau = shape.tau();
  const double alpha = symbol.alpha();
  if (config.method == "galerkin") {
    if (!(tau > 0.5 * (alpha + 1.0))) {
      warn(fmt("study: weighted-method smoothness condition tau > (alpha + 1)/2 fails "
               "(tau=%g, alpha=%g); rates may degrade",
               tau, alpha));
    }
  } else {
    if (!(std::max(symbol.order, alpha) + 1.0 < tau)) {
      warn(fmt("study: pointwise-method smoothness condition max(2 alpha, alpha) + 1 < tau fails "
               "(tau=%g, alpha=%g); rates may degrade",
               tau, alpha));
    }
  }
  if (!(config.norm_s < 2.0 * tau - 1.0)) {
    warn(fmt("study: norm index s=%g is outside the approximant smoothness range (s < 2 tau - 1); "
             "errors are dominated by membership, not convergence",
             config.norm_s));
  }
  const EllipticityScan scan = ellipticity_scan(symbol, std::max(config.l_max, 256));
  if (!scan.strongly_elliptic) {
    warn("study: the operator is not strongly elliptic on the scanned range; "
         "the linear systems may be indefinite");
  }

  const DirichletBenchmark bench = dirichlet_benchmark(config.exact_l_max);
  const SpectralFunction exact = bench.solution;
  const SpectralFunction data = apply(symbol, exact);

  std::vector<ConstraintFunctional> constraints;
  if (const int m_dim = symbol.kernel_dim(3); m_dim > 0) {
    if (symbol.kernel_set.size() == 1 && symbol.kernel_set[0] == 0) {
      ConstraintFunctional mu = ConstraintFunctional::mean_value(0.0, 3);
      mu.target = apply_to_spectral(mu, exact);
      constraints.push_back(std::move(mu));
    } else {
      throw std::runtime_error(
          "study: only an empty zero set or {0} is orchestrated here; operators with larger "
          "zero sets need custom constraint functionals through the library API");
    }
  }
  const bool constrained = !constraints.empty();

  const bool points_from_file = has_prefix(config.points, "file:");
  if (points_from_file && config.ladder.size() > 1) {
    warn("study: a points file yields exactly one row; the ladder sizes are ignored");
  }

  auto run_row = [&](int N) -> StudyRow {
    StudyRow row;
    row.N = N;
    row.eoc = kNaN;
    try {
      const PointSet X =
          points_from_file ? load_points(config.points.substr(5)) : fibonacci_points(N);
      row.N = X.size();
      row.h = mesh_norm(X, config.refinement);
      row.q = separation_radius(X);
      AssemblyInfo ainfo;
      const bool weighted = config.method == "galerkin";
      const Eigen::MatrixXd A =
          weighted ? galerkin_matrix(symbol, shape, X, config.l_max, config.tail_rel_tol, &ainfo)
                   : collocation_matrix(symbol, shape, X, config.l_max, config.tail_rel_tol, &ainfo);
      const Eigen::VectorXd b = weighted ? galerkin_rhs(symbol, shape, X, data, ainfo.l_max)
                                         : collocation_rhs(symbol, X, data);
      SolveInfo sinfo;
      const Eigen::VectorXd coeff = cholesky_solve(A, b, &sinfo);
      row.condition = sinfo.condition;
      row.l_max = ainfo.l_max;
      if (constrained) {
        const KernelCorrection corr =
            kernel_correction(constraints, coeff, symbol, shape, X, ainfo.l_max);
        row.error = corrected_solution_error(exact, coeff, shape, X, config.norm_s, ainfo.l_max,
                                             symbol, corr);
      } else {
        row.error = sobolev_error(exact, coeff, shape, X, config.norm_s, ainfo.l_max).value;
      }
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.message = e.what();
    }
    return row;
  };

  const std::vector<int> sizes = points_from_file ? std::vector<int>{0} : config.ladder;
  result.rows.resize(sizes.size());
  if (config.parallel_rows && sizes.size() > 1 && worker_count() > 1) {
    std::vector<std::future<StudyRow>> futures;
    futures.reserve(sizes.size());
    for (int N : sizes) futures.push_back(std::async(std::launch::async, run_row, N));
    for (std::size_t i = 0; i < futures.size(); ++i) result.rows[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < sizes.size(); ++i) result.rows[i] = run_row(sizes[i]);
  }

  const StudyRow* prev = nullptr;
  for (StudyRow& row : result.rows) {
    if (row.ok && prev != nullptr && prev->error > 0.0 && row.error > 0.0 && row.h < prev->h) {
      row.eoc = pairwise_eoc(prev->h, prev->error, row.h, row.error);
    }
    if (row.ok) prev = &row;
  }

  std::vector<std::pair<double, double>> fit;
  for (const StudyRow& row : result.rows) {
    if (row.ok && row.h > 0.0 && row.error > 0.0) fit.emplace_back(row.h, row.error);
  }
  result.ls_eoc = kNaN;
  if (fit.size() >= 2) {
    try {
      result.ls_eoc = ls_log_slope(fit);
    } catch (const std::exception& e) {
      warn(fmt("study: least-squares rate fit failed: %s", e.what()));
    }
  }
  return result;
}

std::string report_csv(const StudyResult& result) {
  const StudyConfig& c = result.config;
  std::ostringstream os;
  os << "# spdo convergence study\n";
  os << "# method=" << c.method << " operator=" << c.operator_name << " kernel=" << c.kernel
     << " points=" << c.points << "\n";
  os << fmt("# norm=%.17g l_max=%d table_l_max=%d tail_rel_tol=%.17g refinement=%d "
            "exact_l_max=%d seed=%llu\n",
            c.norm_s, c.l_max, c.table_l_max, c.tail_rel_tol, c.refinement, c.exact_l_max,
            static_cast<unsigned long long>(c.seed));
  os << fmt("# shape_tau=%.17g predicted_rate=%.17g ls_eoc=%.17g\n", result.shape_tau,
            result.predicted_rate, result.ls_eoc);
  os << "N,h,q,error,eoc,condition,l_max,status,message\n";
  for (const StudyRow& row : result.rows) {
    os << row.N << ',' << fmt("%.17g", row.h) << ',' << fmt("%.17g", row.q) << ',';
    if (row.ok) os << fmt("%.17g", row.error);
    os << ',';
    if (std::isfinite(row.eoc)) os << fmt("%.17g", row.eoc);
    os << ',' << fmt("%.17g", row.condition) << ',' << row.l_max << ','
       << (row.ok ? "ok" : "failed") << ',' << csv_safe(row.message) << '\n';
  }
  return os.str();
}

std::string report_markdown(const StudyResult& result) {
  const StudyConfig& c = result.config;
  std::ostringstream os;
  os << "# Convergence study\n\n";
  os << "- method: " << c.method << ", operator: " << c.operator_name << ", kernel: " << c.kernel
     << "\n";
  os << fmt("- error norm: H^%g, l_max: %d, points: %s\n", c.norm_s, c.l_max, c.points.c_str());
  os << fmt("- kernel smoothness tau: %g, predicted rate: %.2f\n\n", result.shape_tau,
            result.predicted_rate);
  os << "| N | h | error | EOC | condition |\n";
  os << "|---:|---:|---:|---:|---:|\n";
  int ok_rows = 0;
  for (const StudyRow& row : result.rows) {
    if (row.ok) {
      ++ok_rows;
      const std::string eoc = std::isfinite(row.eoc) ? fmt("%.4f", row.eoc) : std::string("--");
      os << fmt("| %d | %.5f | %.9f | %s | %.3g |\n", row.N, row.h, row.error, eoc.c_str(),
                row.condition);
    } else {
      os << fmt("| %d | %.5f | failed | -- | -- |\n", row.N, row.h);
    }
  }
  os << fmt("\nLeast-squares EOC over %d rows: %.4f (predicted %.2f)\n", ok_rows, result.ls_eoc,
            result.predicted_rate);
  bool any_failed = false;
  for (const StudyRow& row : result.rows) any_failed = any_failed || !row.ok;
  if (any_failed) {
    os << "\nFailures:\n";
    for (const StudyRow& row : result.rows) {
      if (!row.ok) os << fmt("- N=%d: %s\n", row.N, md_safe(row.message).c_str());
    }
  }
  if (!result.warnings.empty()) {
    os << "\nWarnings:\n";
    for (const std::string& w : result.warnings) os << "- " << md_safe(w) << "\n";
  }
  return os.str();
}

std::string plot_data(const StudyResult& result) {
  const StudyConfig& c = result.config;
  std::ostringstream os;
  os << "# log10_h log10_error (method=" << c.method << " operator=" << c.operator_name << ")\n";
  for (const StudyRow& row : result.rows) {
    if (row.ok && row.h > 0.0 && row.error > 0.0) {
      os << fmt("%.17g %.17g\n", std::log10(row.h), std::log10(row.error));
    }
  }
  return os.str();
}

void write_report(const StudyResult& result, const std::string& path, const std::string& format) {
  if (format != "csv" && format != "markdown") {
    throw std::invalid_argument("write_report: format must be 'csv' or 'markdown'");
  }
  const std::string body = format == "markdown" ? report_markdown(result) : report_csv(result);
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report file: " + path);
    out << body;
    if (!out.flush()) throw std::runtime_error("failed writing report file: " + path);
  }
  {
    const std::string plot_path = path + ".plot";
    std::ofstream out(plot_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write plot file: " + plot_path);
    out << plot_data(result);
    if (!out.flush()) throw std::runtime_error("failed writing plot file: " + plot_path);
  }
}

}  // namespace spdo
