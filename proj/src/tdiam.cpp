#include "logpot/tdiam.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "logpot/error.hpp"
#include "logpot/mask.hpp"

namespace logpot {
namespace {

double log_product(const std::vector<Vec2>& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) s += std::log(distance(x[i], x[j]));
  return s;
}

double point_terms(const std::vector<Vec2>& x, std::size_t i, Vec2 p) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (j != i) s += std::log(distance(p, x[j]));
  return s;
}

std::optional<Vec2> into_closure(const Shape& shape, Vec2 p) {
  if (contains_closed(shape, p)) return p;
  return project_closed(shape, p);
}

std::vector<Vec2> random_points(const Shape& shape, int n, std::mt19937_64& rng) {
  const BBox b = bounds(shape);
  std::uniform_real_distribution<double> ux(b.lo.x, b.hi.x), uy(b.lo.y, b.hi.y);
  std::vector<Vec2> pts;
  for (long tries = 0; static_cast<int>(pts.size()) < n; ++tries) {
    if (tries > 1000000) throw InputError("rho_n: could not sample points inside the shape");
    const Vec2 p{ux(rng), uy(rng)};
    if (contains(shape, p)) pts.push_back(p);
  }
  return pts;
}

FeketeResult ascend(const Shape& shape, std::vector<Vec2> x, double diam, int max_sweeps) {
  const std::size_t n = x.size();
  std::vector<double> step(n, diam / 4);
  FeketeResult r;
  r.n = static_cast<int>(n);
  for (r.sweeps = 0; r.sweeps < max_sweeps; ++r.sweeps) {
    double best_gain = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Vec2 g{};
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) {
          const Vec2 d = x[i] - x[j];
          g += (1.0 / norm2(d)) * d;
        }
      const double gn = norm(g);
      if (gn == 0.0) continue;
      const Vec2 dir = (1.0 / gn) * g;
      const double base = point_terms(x, i, x[i]);
      double s = std::min(diam / 4, 2.0 * step[i]);
      while (s > 1e-16 * diam) {
        const auto cand = into_closure(shape, x[i] + s * dir);
        if (cand) {
          const double val = point_terms(x, i, *cand);
          if (val > base) {
            best_gain = std::max(best_gain, val - base);
            x[i] = *cand;
            break;
          }
        }
        s *= 0.5;
      }
      step[i] = std::max(s, 1e-14 * diam);
    }
    if (best_gain < 1e-12) break;
  }
  r.points = std::move(x);
  r.rho_n = product_mean(r.points);
  return r;
}

double shape_diameter(const Shape& shape) {
  const BBox b = bounds(shape);
  return distance(b.lo, b.hi);
}

} // namespace

double product_mean(const std::vector<Vec2>& points) {
  const double n = static_cast<double>(points.size());
  if (points.size() < 2) throw InputError("product_mean: need at least two points");
  return std::exp(2.0 / (n * (n - 1.0)) * log_product(points));
}

FeketeResult rho_n(const Shape& shape, int n, const FeketeOptions& opts) {
  if (n < 2) throw InputError("rho_n: n must be >= 2");
  if (n > opts.max_n) throw InputError("rho_n: n exceeds the configured cap");
  if (opts.restarts < 1) throw InputError("rho_n: restarts must be >= 1");
  validate(shape);
  const double diam = shape_diameter(shape);
  FeketeResult best;
  for (int k = 0; k < opts.restarts; ++k) {
    std::mt19937_64 rng(opts.seed + 7919u * static_cast<std::uint64_t>(k));
    auto r = ascend(shape, random_points(shape, n, rng), diam, opts.max_sweeps);
    if (k == 0 || r.rho_n > best.rho_n) best = std::move(r);
  }
  best.restarts_used = opts.restarts;
  return best;
}

namespace {

void solve_simplex(RobinResult& res) {
  const auto n = static_cast<Eigen::Index>(res.nodes.size());
  Eigen::MatrixXd G(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      G(i, j) = i == j ? std::log(1.0 / res.lengths[i]) + 1.5 : std::log(1.0 / distance(res.nodes[i], res.nodes[j]));

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + 1, n + 1);
  K.topLeftCorner(n, n) = G;
  K.block(0, n, n, 1).setOnes();
  K.block(n, 0, 1, n).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs[n] = 1.0;
  Eigen::VectorXd sol = K.fullPivLu().solve(rhs);
  Eigen::VectorXd w = sol.head(n);
  res.method = "kkt";
  if (!w.allFinite() || w.minCoeff() < 0.0) {
    res.method = "projected-gradient";
    auto project = [n](Eigen::VectorXd v) {
      // Euclidean projection onto the probability simplex
      std::vector<double> u(v.data(), v.data() + n);
      std::sort(u.begin(), u.end(), std::greater<>());
      double cum = 0.0, theta = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        cum += u[k];
        const double t = (cum - 1.0) / static_cast<double>(k + 1);
        if (u[k] - t > 0) theta = t;
      }
      return Eigen::VectorXd((v.array() - theta).max(0.0));
    };
    const double L = 2.0 * G.cwiseAbs().rowwise().sum().maxCoeff();
    Eigen::VectorXd x = project(w.allFinite() ? w : Eigen::VectorXd::Constant(n, 1.0 / n));
    Eigen::VectorXd y = x;
    double t = 1.0;
    bool converged = false;
    for (res.iterations = 0; res.iterations < 200000; ++res.iterations) {
      const Eigen::VectorXd xn = project(y - (2.0 / L) * (G * y));
      const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = xn + ((t - 1.0) / tn) * (xn - x);
      const double change = (xn - x).norm();
      x = xn;
      t = tn;
      if (change < 1e-13) {
        converged = true;
        break;
      }
    }
    if (!converged) throw ConvergenceError("robin_constant: projected gradient hit the iteration cap", (project(x - (2.0 / L) * (G * x)) - x).norm());
    w = x;
  }
  res.weights.assign(w.data(), w.data() + n);
  res.V_E = w.dot(G * w);
  res.tdiam = std::exp(-res.V_E);
}

} // namespace

RobinResult robin_constant(const Shape& shape, int node_count) {
  if (node_count < 8) throw InputError("robin_constant: node_count must be >= 8");
  validate(shape);
  RobinResult res;
  if (auto nodes = outer_boundary(shape, node_count)) {
    res.nodes = std::move(nodes->points);
    res.lengths = std::move(nodes->lengths);
    solve_simplex(res);
    return res;
  }
  const BBox b = bounds(shape);
  const double h = 2.0 * ((b.hi.x - b.lo.x) + (b.hi.y - b.lo.y)) / node_count;
  return robin_constant(rasterize(shape, h));
}

RobinResult robin_constant(const PixelMask& mask) {
  if (mask.active_count() == 0) throw InputError("robin_constant: empty mask");
  RobinResult res;
  res.nodes = exposed_centers(mask);
  res.lengths.assign(res.nodes.size(), mask.h());
  res.mask_fallback = true;
  solve_simplex(res);
  return res;
}

TdiamEstimate tdiam_estimate(const Shape& shape, int n_max, int node_count, const FeketeOptions& fekete) {
  if (n_max < 2) throw InputError("tdiam_estimate: n_max must be >= 2");
  TdiamEstimate e;
  e.robin = robin_constant(shape, node_count);
  e.tdiam = e.robin.tdiam;
  for (int n = 2; n <= n_max; ++n) {
    const double r = rho_n(shape, n, fekete).rho_n;
    e.rho_sequence.push_back(r);
    if (r < e.tdiam * (1.0 - e.tolerance)) e.upper_bound_consistent = false;
  }
  return e;
}

const char* positivity_name(Positivity p) {
  switch (p) {
  case Positivity::Positive: return "positive";
  case Positivity::Indefinite: return "indefinite";
  case Positivity::Inconclusive: return "inconclusive";
  }
  return "?";
}

PositivityResult positivity_classifier(const Shape& shape, double band, int n_max, int node_count) {
  PositivityResult p;
  p.band = band;
  p.tdiam = tdiam_estimate(shape, n_max, node_count).tdiam;
  if (std::abs(p.tdiam - 1.0) < band) p.cls = Positivity::Inconclusive;
  else p.cls = p.tdiam < 1.0 ? Positivity::Positive : Positivity::Indefinite;
  return p;
}

} // namespace logpot
