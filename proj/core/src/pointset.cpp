#include "spdo/pointset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace spdo {

namespace {

double geodesic(double dot) { return std::acos(std::clamp(dot, -1.0, 1.0)); }

}  // namespace

PointSet make_point_set(Eigen::MatrixXd raw) {
  const int N = static_cast<int>(raw.rows());
  const int n = static_cast<int>(raw.cols());
  if (N < 1 || n < 2) throw std::invalid_argument("make_point_set: need N >= 1 points in R^{n>=2}");
  for (int i = 0; i < N; ++i) {
    const double norm = raw.row(i).norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-6) {
      throw std::invalid_argument("make_point_set: row " + std::to_string(i + 1) +
                                  " is not a unit vector (|x| = " + std::to_string(norm) + ")");
    }
    raw.row(i) /= norm;
  }
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      const double chord = (raw.row(i) - raw.row(j)).norm();
      if (2.0 * std::asin(std::min(1.0, 0.5 * chord)) < 1e-10) {
        throw std::invalid_argument("make_point_set: rows " + std::to_string(i + 1) +
                                    " and " + std::to_string(j + 1) +
                                    " coincide (geodesic distance < 1e-10)");
      }
    }
  }
  return PointSet{std::move(raw)};
}

PointSet fibonacci_points(int N) {
  if (N < 2) throw std::invalid_argument("fibonacci_points: need N >= 2");
  Eigen::MatrixXd pts(N, 3);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < N; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / N;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    pts(i, 0) = r * std::cos(phi);
    pts(i, 1) = r * std::sin(phi);
    pts(i, 2) = z;
  }
  return PointSet{std::move(pts)};
}

PointSet load_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_points: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::vector<int> line_of_row;
  std::string line;
  int lineno = 0;
  int n = -1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<double> vals;
    double v;
    while (ss >> v) vals.push_back(v);
    if (!ss.eof()) {
      throw std::runtime_error("load_points: line " + std::to_string(lineno) +
                               ": unparsable coordinate");
    }
    if (vals.empty()) continue;
    if (n < 0) {
      n = static_cast<int>(vals.size());
      if (n < 2) {
        throw std::runtime_error("load_points: line " + std::to_string(lineno) +
                                 ": need at least 2 coordinates");
      }
    }
    if (static_cast<int>(vals.size()) != n) {
      throw std::runtime_error("load_points: line " + std::to_string(lineno) + ": expected " +
                               std::to_string(n) + " coordinates, got " +
                               std::to_string(vals.size()));
    }
    rows.push_back(std::move(vals));
    line_of_row.push_back(lineno);
  }
  if (rows.empty()) throw std::runtime_error("load_points: no points in " + path);

  Eigen::MatrixXd raw(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < n; ++j) raw(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
  }
  try {
    return make_point_set(std::move(raw));
  } catch (const std::invalid_argument& e) {
    // map "row k" diagnostics onto source line numbers
    std::string msg = e.what();
    for (std::size_t i = rows.size(); i-- > 0;) {
      const std::string key = "row" + std::string(1, ' ') + std::to_string(i + 1);
      std::size_t at;
      while ((at = msg.find(key)) != std::string::npos) {
        msg.replace(at, key.size(), "line " + std::to_string(line_of_row[i]));
      }
    }
    throw std::runtime_error("load_points: " + msg);
  }
}

double separation_radius(const PointSet& X) {
  const int N = X.size();
  if (N < 2) throw std::invalid_argument("separation_radius: need N >= 2");
  double max_dot = -1.0;
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      max_dot = std::max(max_dot, X.pts.row(i).dot(X.pts.row(j)));
    }
  }
  return 0.5 * geodesic(max_dot);
}

// ---------------------------------------------------------------------------
// icosphere candidate grid

namespace {

struct Icosphere {
  Eigen::MatrixXd verts;  // V x 3 unit rows
};

Icosphere build_icosphere(int level) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : verts) v.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int lev = 0; lev < level; ++lev) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Eigen::Vector3d m = (verts[static_cast<std::size_t>(a)] + verts[static_cast<std::size_t>(b)]).normalized();
      verts.push_back(m);
      const int idx = static_cast<int>(verts.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  Icosphere ico;
  ico.verts.resize(static_cast<Eigen::Index>(verts.size()), 3);
  for (std::size_t i = 0; i < verts.size(); ++i) ico.verts.row(static_cast<Eigen::Index>(i)) = verts[i].transpose();
  return ico;
}

const Icosphere& cached_icosphere(int level) {
  static std::mutex mutex;
  static std::map<int, Icosphere> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(level);
  if (it == cache.end()) it = cache.emplace(level, build_icosphere(level)).first;
  return it->second;
}

// f(y) = min_j geodesic(y, x_j)
double min_geodesic(const PointSet& X, const Eigen::Vector3d& y) {
  const double max_dot = (X.pts * y).maxCoeff();
  return geodesic(max_dot);
}

// Tangent-plane pattern search; handles the ridge structure of the max-min
// objective (shrinking steps, 8 directions).
double polish(const PointSet& X, Eigen::Vector3d y, double fy) {
  double step = 0.05;
  while (step > 1e-10) {
    Eigen::Vector3d a = std::abs(y.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    Eigen::Vector3d u = y.cross(a).normalized();
    Eigen::Vector3d v = y.cross(u);
    bool improved = false;
    const Eigen::Vector3d dirs[8] = {u, -u, v, -v, u + v, u - v, -u + v, -u - v};
    for (const auto& d : dirs) {
      const Eigen::Vector3d cand = (y + step * d).normalized();
      const double fc = min_geodesic(X, cand);
      if (fc > fy) {
        y = cand;
        fy = fc;
        improved = true;
        break;
      }
    }
    if (!improved) step *= 0.5;
  }
  return fy;
}

}  // namespace

double mesh_norm(const PointSet& X, int refinement) {
  if (X.dim() != 3) throw std::invalid_argument("mesh_norm: implemented for S^2 only");
  if (X.size() < 1) throw std::invalid_argument("mesh_norm: empty point set");
  if (refinement < 0 || refinement > 8) {
    throw std::invalid_argument("mesh_norm: refinement must be in [0, 8]");
  }
  const Icosphere& ico = cached_icosphere(refinement);
  // candidate scan: for each grid vertex the distance to the nearest center
  const Eigen::MatrixXd dots = ico.verts * X.pts.transpose();  // V x N
  const Eigen::VectorXd best_dot = dots.rowwise().maxCoeff();
  // polish the few best candidates (guards against the scan landing in a
  // neighbouring basin of the true maximizer)
  const int V = static_cast<int>(best_dot.size());
  std::vector<int> order(static_cast<std::size_t>(V));
  for (int i = 0; i < V; ++i) order[static_cast<std::size_t>(i)] = i;
  const int keep = std::min(8, V);
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    [&](int a, int b) { return best_dot(a) < best_dot(b); });
  double h = 0.0;
  for (int k = 0; k < keep; ++k) {
    const int idx = order[static_cast<std::size_t>(k)];
    const Eigen::Vector3d y = ico.verts.row(idx).transpose();
    h = std::max(h, polish(X, y, geodesic(best_dot(idx))));
  }
  return h;
}

SetGeometry characterize(const PointSet& X, int refinement) {
  SetGeometry g;
  g.h = mesh_norm(X, refinement);
  g.q = separation_radius(X);
  g.rho = g.h / g.q;
  return g;
}

}  // namespace spdo
