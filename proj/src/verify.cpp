#include "logpot/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <tuple>
#include <thread>
#include <unordered_map>

#include "logpot/disc_spectrum.hpp"
#include "logpot/error.hpp"
#include "logpot/tdiam.hpp"

namespace logpot {
namespace {

constexpr double kSolverRelTol = 1e-9;
constexpr double kPi = std::numbers::pi;

struct CellHash {
  std::size_t operator()(const Cell& c) const noexcept {
    return std::hash<long>()(c.col) * 1000003u ^ std::hash<long>()(c.row);
  }
};

template <class F>
void parallel_for(std::size_t n, int threads, F fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = n;
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct Eig {
  double value = 0.0;
  double tolerance = 0.0;
};

Eig extremal(const PixelMask& mask, const KernelSpec& kernel, bool bottom, const RunOptions& o) {
  auto A = assemble(std::make_shared<const PixelMask>(mask), kernel, o.assemble);
  EigOptions e = o.eig;
  e.want_bottom = bottom;
  e.require_bottom = bottom;
  const auto r = extremal_eigs(A, 1, e);
  const double v = bottom ? r.tau_bottom : r.tau_top.front();
  const double res = bottom ? r.residuals.back() : r.residuals.front();
  return {v, kSolverRelTol * std::abs(v) + res};
}

// Top pair plus the bottom pair when the solver resolved it.
std::pair<Eig, std::optional<Eig>> both_ends(const PixelMask& mask, const KernelSpec& kernel, const RunOptions& o) {
  auto A = assemble(std::make_shared<const PixelMask>(mask), kernel, o.assemble);
  EigOptions e = o.eig;
  e.want_bottom = true;
  e.require_bottom = false;
  const auto r = extremal_eigs(A, 1, e);
  const double t = r.tau_top.front();
  Eig top{t, kSolverRelTol * std::abs(t) + r.residuals.front()};
  if (!r.bottom_converged) return {top, std::nullopt};
  return {top, Eig{r.tau_bottom, kSolverRelTol * std::abs(r.tau_bottom) + r.residuals.back()}};
}

Shape diamond(Vec2 c, double delta) {
  return Polygon{{{c.x + delta, c.y}, {c.x, c.y + delta}, {c.x - delta, c.y}, {c.x, c.y - delta}}};
}

void require_inside(const Shape& domain, const Shape& obstacle, const char* what) {
  const auto nodes = outer_boundary(obstacle, 64);
  if (!nodes) throw InputError(std::string(what) + ": obstacle needs a parameterised boundary");
  for (const auto& p : nodes->points)
    if (!contains(domain, p)) throw InputError(std::string(what) + ": obstacle leaves the domain");
}

struct SweepSpec {
  std::string name;
  std::string param_name;
  std::vector<double> params;
  double h = 0.0;
  bool bottom = false;
  int direction = 1;
  std::function<Shape(double, double)> build;
};

ExperimentReport run_sweep(const SweepSpec& s, const RunOptions& o) {
  if (!(s.h > 0.0)) throw InputError(s.name + ": h must be positive");
  ExperimentReport rep;
  rep.name = s.name;
  rep.parameters.emplace_back(s.param_name, s.params);
  rep.parameters.emplace_back("h", s.h);
  rep.parameters.emplace_back("kernel", std::string("log"));
  rep.columns = {s.param_name, s.bottom ? "tau_bottom" : "tau_top", "cells", "area"};
  const auto kernel = KernelSpec::log();
  const std::size_t n = s.params.size();

  std::vector<PixelMask> masks;
  for (double p : s.params) masks.push_back(rasterize(s.build(p, s.h), s.h));
  std::vector<Eig> eig(n);
  parallel_for(n, o.threads, [&](std::size_t i) { eig[i] = extremal(masks[i], kernel, s.bottom, o); });

  std::vector<double> values;
  double solver_tol = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rep.samples.push_back({s.params[i], eig[i].value, static_cast<double>(masks[i].active_count()), masks[i].area()});
    values.push_back(eig[i].value);
    solver_tol = std::max(solver_tol, eig[i].tolerance);
  }

  double uncertainty = solver_tol;
  if (o.refine_probe && n >= 2) {
    const std::vector<std::size_t> ends{0, n - 1};
    std::vector<double> fine(2);
    parallel_for(2, o.threads, [&](std::size_t k) {
      fine[k] = extremal(rasterize(s.build(s.params[ends[k]], s.h / 2), s.h / 2), kernel, s.bottom, o).value;
    });
    for (std::size_t k = 0; k < 2; ++k) {
      const double d = std::abs(values[ends[k]] - fine[k]);
      uncertainty = std::max(uncertainty, d);
      rep.summary.emplace_back(k == 0 ? "probe_first" : "probe_last", fine[k]);
    }
  } else if (n >= 2) {
    rep.notes.push_back("no refinement probe: uncertainty is the solver tolerance only");
  }
  double min_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < n; ++i) min_step = std::min(min_step, s.direction * (values[i] - values[i - 1]));
  rep.summary.emplace_back("uncertainty", uncertainty);
  rep.summary.emplace_back("solver_tolerance", solver_tol);
  if (n >= 2) rep.summary.emplace_back("min_step", min_step);
  rep.tolerance_used = 3.0 * uncertainty;
  rep.verdict = monotone_verdict(values, uncertainty, s.direction);
  return rep;
}

// Reflection orbits {x, sigma x} with x on the closed H side.
struct Orbit {
  Cell x, sx;
  bool fixed;
};

} // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
  case Verdict::Pass: return "pass";
  case Verdict::Fail: return "fail";
  case Verdict::Inconclusive: return "inconclusive";
  case Verdict::InconclusiveSupporting: return "inconclusive-supporting";
  case Verdict::CounterexampleCandidate: return "counterexample-candidate";
  }
  return "?";
}

std::vector<double> ExperimentReport::column(const std::string& col) const {
  const auto it = std::find(columns.begin(), columns.end(), col);
  if (it == columns.end()) throw InputError("report has no column " + col);
  const auto k = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  for (const auto& row : samples) out.push_back(row[k]);
  return out;
}

double ExperimentReport::summary_value(const std::string& key) const {
  for (const auto& [k, v] : summary)
    if (k == key) return v;
  throw InputError("report has no summary value " + key);
}

Verdict monotone_verdict(const std::vector<double>& values, double uncertainty, int direction, double factor) {
  if (direction != 1 && direction != -1) throw InputError("monotone_verdict: direction must be +1 or -1");
  const double thr = factor * uncertainty;
  bool all_strict = true;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double d = direction * (values[i] - values[i - 1]);
    if (d < -thr) return Verdict::Fail;
    if (!(d > thr)) all_strict = false;
  }
  return all_strict ? Verdict::Pass : Verdict::Inconclusive;
}

double discrete_energy(const GridFunction& u, const KernelSpec& kernel) {
  const PixelMask& m = u.mask();
  const double h = m.h();
  const double w_self = h * h * kernel.self_cell(h);
  const double w = h * h * h * h;
  long double sum = 0.0L;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) continue;
    const Cell ci = m.active_cell(i);
    sum += static_cast<long double>(u[i]) * u[i] * w_self;
    for (std::size_t j = i + 1; j < u.size(); ++j) {
      const Cell cj = m.active_cell(j);
      const double r = h * std::hypot(static_cast<double>(ci.col - cj.col), static_cast<double>(ci.row - cj.row));
      sum += 2.0L * u[i] * u[j] * w * kernel.value(r);
    }
  }
  return static_cast<double>(sum);
}

double check_riesz_polarization(const GridFunction& u, const Polarizer& H, const KernelSpec& kernel) {
  if (u.min_value() < 0.0) throw InputError("check_riesz_polarization: u must be nonnegative");
  if (!H.grid_compatible()) throw InputError("check_riesz_polarization: polarizer is not grid compatible");
  const GridFunction pu = polarize_fn(u, H);
  const auto& L = *H.lattice();
  const double h = u.mask().h();

  std::unordered_map<Cell, double, CellHash> before, after;
  for (const auto& [fn, map] : {std::pair{&u, &before}, std::pair{&pu, &after}}) {
    const auto cells = fn->mask().lattice_cells(L.anchor);
    for (std::size_t k = 0; k < cells.size(); ++k) (*map)[cells[k]] = (*fn)[k];
  }
  auto get = [](const auto& map, Cell c) {
    const auto it = map.find(c);
    return it == map.end() ? 0.0L : static_cast<long double>(it->second);
  };

  std::vector<Orbit> orbits;
  std::unordered_map<Cell, bool, CellHash> seen;
  for (const auto* map : {&before, &after})
    for (const auto& kv : *map) {
      const Cell c = kv.first;
      const int side = L.side(c, H.normal());
      const Cell x = side >= 0 ? c : L.apply(c);
      if (seen.emplace(x, true).second) orbits.push_back({x, L.apply(x), side == 0});
    }

  const double w_self = h * h * kernel.self_cell(h);
  const double w = h * h * h * h;
  auto W = [&](Cell a, Cell b) -> long double {
    if (a == b) return w_self;
    return w * kernel.value(h * std::hypot(static_cast<double>(a.col - b.col), static_cast<double>(a.row - b.row)));
  };

  long double margin = 0.0L;
  for (std::size_t p = 0; p < orbits.size(); ++p) {
    const Orbit& P = orbits[p];
    const long double a1 = get(before, P.x), a2 = P.fixed ? 0.0L : get(before, P.sx);
    const long double b1 = get(after, P.x), b2 = P.fixed ? 0.0L : get(after, P.sx);
    for (std::size_t q = p; q < orbits.size(); ++q) {
      const Orbit& Q = orbits[q];
      const long double c1 = get(before, Q.x), c2 = Q.fixed ? 0.0L : get(before, Q.sx);
      const long double d1 = get(after, Q.x), d2 = Q.fixed ? 0.0L : get(after, Q.sx);
      const long double near = W(P.x, Q.x);
      long double term = (b1 * d1 - a1 * c1) * near;
      if (!P.fixed && !Q.fixed) term += (b2 * d2 - a2 * c2) * near;
      if (!Q.fixed) term += (b1 * d2 - a1 * c2) * W(P.x, Q.sx);
      if (!P.fixed) term += (b2 * d1 - a2 * c1) * W(P.sx, Q.x);
      margin += p == q ? term : 2.0L * term;
    }
  }
  return static_cast<double>(margin);
}

RieszCase random_riesz_case(std::uint64_t seed, double h) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(2, 12), shift(-6, 6), dir(0, 7), quant(0, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int nx = size(rng), ny = size(rng), ox = shift(rng), oy = shift(rng);
  const double p = 0.3 + 0.7 * unit(rng);
  const bool quantised = unit(rng) < 0.5;
  std::vector<Cell> cells;
  std::vector<double> vals;
  for (int r = 0; r < ny; ++r)
    for (int c = 0; c < nx; ++c)
      if (unit(rng) < p) {
        cells.push_back({ox + c, oy + r});
        vals.push_back(quantised ? 0.25 * quant(rng) : unit(rng));
      }
  if (cells.empty()) {
    cells.push_back({ox, oy});
    vals.push_back(1.0);
  }
  auto mask = std::make_shared<const PixelMask>(PixelMask::from_cells(pixel_anchor(h), h, cells));
  // from_cells enumerates row-major; reorder values to match
  std::unordered_map<Cell, double, CellHash> byCell;
  for (std::size_t k = 0; k < cells.size(); ++k) byCell[cells[k]] = vals[k];
  const auto ordered = mask->lattice_cells();
  std::vector<double> u(ordered.size());
  for (std::size_t k = 0; k < ordered.size(); ++k) u[k] = byCell.at(ordered[k]);

  static const Vec2 normals[8] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2},
                                  {-std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2},
                                  {std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2},
                                  {-std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2}};
  const Vec2 a = normals[dir(rng)];
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& c : mask->active_centers()) {
    lo = std::min(lo, dot(c, a));
    hi = std::max(hi, dot(c, a));
  }
  const bool diagonal = a.x != 0.0 && a.y != 0.0;
  const double unit_step = diagonal ? h / std::numbers::sqrt2 : h / 2;
  const long klo = static_cast<long>(std::floor((lo - 2 * h) / unit_step));
  const long khi = static_cast<long>(std::ceil((hi + 2 * h) / unit_step));
  const long k = std::uniform_int_distribution<long>(klo, khi)(rng);
  return {GridFunction(mask, std::move(u)), Polarizer::on_grid(a, k * unit_step, h)};
}

ExperimentReport riesz_suite(const KernelSpec& kernel, int cases, std::uint64_t seed) {
  if (cases < 0) throw InputError("riesz_suite: cases must be >= 0");
  ExperimentReport rep;
  rep.name = "riesz_polarization";
  rep.parameters = {{"kernel", kernel.name()}, {"cases", static_cast<double>(cases)}};
  rep.columns = {"case", "margin", "energy", "cells"};
  rep.seeds = {seed};
  rep.tolerance_used = 1e-12;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cases; ++i) {
    const auto c = random_riesz_case(seed + static_cast<std::uint64_t>(i));
    const double m = check_riesz_polarization(c.u, c.H, kernel);
    worst = std::min(worst, m);
    rep.samples.push_back({static_cast<double>(i), m, discrete_energy(c.u, kernel), static_cast<double>(c.u.size())});
  }
  rep.summary.emplace_back("min_margin", cases > 0 ? worst : 0.0);
  rep.verdict = (cases == 0 || worst >= -rep.tolerance_used) ? Verdict::Pass : Verdict::Fail;
  return rep;
}

namespace {

GapResult gap_between(const PixelMask& mask, const PixelMask& rearranged, bool force, const RunOptions& o) {
  GapResult g{};
  g.cells = mask.active_count();
  g.diameter = diameter(mask);
  g.hypothesis_verified = g.diameter <= 1.0;
  if (!g.hypothesis_verified && !force)
    throw InputError("mask diameter exceeds 1: positive eigenfunction not guaranteed (use force)");
  Eig a, b;
  std::vector<std::function<void()>> jobs{[&] { a = extremal(mask, KernelSpec::log(), false, o); },
                                          [&] { b = extremal(rearranged, KernelSpec::log(), false, o); }};
  parallel_for(2, o.threads, [&](std::size_t k) { jobs[k](); });
  g.tau = a.value;
  g.tau_rearranged = b.value;
  g.gap = b.value - a.value;
  g.tolerance = std::max(a.tolerance, b.tolerance);
  return g;
}

} // namespace

GapResult reverse_fk_polarization(const PixelMask& mask, const Polarizer& H, bool force, const RunOptions& o) {
  return gap_between(mask, polarize_set(mask, H), force, o);
}

GapResult reverse_fk_polarization(const Shape& shape, const Polarizer& H, double h, bool force, const RunOptions& o) {
  return reverse_fk_polarization(rasterize(shape, h), H, force, o);
}

GapResult reverse_fk_schwarz(const PixelMask& mask, bool force, const RunOptions& o) {
  return gap_between(mask, schwarz_set(mask), force, o);
}

GapResult reverse_fk_schwarz(const Shape& shape, double h, bool force, const RunOptions& o) {
  return reverse_fk_schwarz(rasterize(shape, h), force, o);
}

ExperimentReport gap_report(const std::string& name, const GapResult& g) {
  ExperimentReport rep;
  rep.name = name;
  rep.columns = {"tau", "tau_rearranged", "gap", "cells", "diameter"};
  rep.samples.push_back({g.tau, g.tau_rearranged, g.gap, static_cast<double>(g.cells), g.diameter});
  rep.tolerance_used = g.tolerance;
  rep.summary = {{"strict", g.gap > 3 * g.tolerance ? 1.0 : 0.0}};
  if (!g.hypothesis_verified) rep.notes.push_back("hypothesis unverified: mask diameter exceeds 1");
  rep.verdict = g.gap >= -g.tolerance ? Verdict::Pass : Verdict::Fail;
  return rep;
}

ExperimentReport annulus_sweep(double R, double r, const std::vector<double>& t_values, double h, const RunOptions& o) {
  if (!(r > 0.0) || !(R > r)) throw InputError("annulus_sweep: need 0 < r < R");
  SweepSpec s{"annulus_sweep", "t", t_values, h, false, 1,
              [R, r](double t, double) { return Shape(EccentricAnnulus{R, r, t}); }};
  std::vector<std::string> notes;
  if (R >= 0.5) notes.push_back("hypothesis violated: R < 1/2 required");
  for (double t : t_values)
    if (t < 0.0 || t >= R - r) notes.push_back("hypothesis violated: t outside [0, R - r)");
  auto rep = run_sweep(s, o);
  rep.parameters.insert(rep.parameters.begin(), {{"R", R}, {"r", r}});
  rep.notes.insert(rep.notes.end(), notes.begin(), notes.end());
  return rep;
}

TranslateFamily default_translate_family() {
  return {Rect{{-0.35, -0.35}, {0.35, 0.35}}, Rect{{-0.1, -0.1}, {0.1, 0.1}}, {1.0, 1.0}};
}

namespace {

Shape sector_cut_disc() {
  const double R = 0.48;
  std::vector<Vec2> sector{{0, 0}};
  for (int k = 0; k <= 32; ++k) {
    const double phi = kPi - kPi / 4 + (kPi / 2) * k / 32.0;
    sector.push_back({1.2 * R * std::cos(phi), 1.2 * R * std::sin(phi)});
  }
  return make_difference(Disc{{0, 0}, R}, Polygon{sector});
}

Shape rotating_diamond(double theta) { return diamond({0.3 * std::cos(theta), 0.3 * std::sin(theta)}, 0.06); }

} // namespace

Shape rotate_family(double theta) { return make_difference(sector_cut_disc(), rotating_diamond(theta)); }

ExperimentReport obstacle_sweep(ObstacleKind kind, const std::vector<double>& params, double h, const RunOptions& o,
                                const TranslateFamily& fam) {
  SweepSpec s;
  s.h = h;
  s.params = params;
  s.direction = 1;
  if (kind == ObstacleKind::Translate) {
    for (double p : params) require_inside(fam.domain, translated(fam.obstacle, p * fam.direction), "obstacle_sweep");
    s.name = "obstacle_translate";
    s.param_name = "s";
    s.build = [fam](double p, double) { return make_difference(fam.domain, translated(fam.obstacle, p * fam.direction)); };
  } else {
    for (double p : params) require_inside(sector_cut_disc(), rotating_diamond(p), "obstacle_sweep");
    s.name = "obstacle_rotate";
    s.param_name = "theta";
    s.build = [](double p, double) { return rotate_family(p); };
  }
  if (params.empty()) {
    ExperimentReport rep;
    rep.name = s.name;
    rep.columns = {s.param_name, "tau_top", "cells", "area"};
    rep.verdict = Verdict::Pass;
    rep.notes.push_back("empty parameter list");
    return rep;
  }
  return run_sweep(s, o);
}

Shape two_balls(double d) {
  if (!(d > 2.0)) throw InputError("two_balls: d must exceed 2 so the unit balls are disjoint");
  return Union{{Disc{{0, 0}, 1.0}, Disc{{d, 0}, 1.0}}};
}

ExperimentReport two_ball_sweep(const std::vector<double>& d_values, double h, const RunOptions& o) {
  for (double d : d_values) two_balls(d);
  SweepSpec s{"two_ball_sweep", "d", d_values, h, true, -1, [](double d, double) { return two_balls(d); }};
  auto rep = run_sweep(s, o);
  if (rep.samples.size() >= 2)
    rep.summary.emplace_back("ratio_last_first", rep.samples.back()[1] / rep.samples.front()[1]);
  return rep;
}

Shape dumbbell(double c, double d, double h) {
  if (!(c > 0.0) || !(h > 0.0)) throw InputError("dumbbell: c and h must be positive");
  const double s0 = std::sqrt(c / 3.0);
  if (!(d > s0 + 4 * h)) throw InputError("dumbbell: d too small for a corridor between the squares");
  // corridor width: even number of cells; square side: even number of cells
  const double w = 2 * h * std::max(1.0, std::round((c / 3.0) / (d - s0) / (2 * h)));
  double best_s = 0.0, best_err = std::numeric_limits<double>::infinity();
  for (long k = 1; 2 * k * h < d - 2 * h; ++k) {
    const double s = 2 * k * h;
    if (s <= w) continue;
    const double err = std::abs(2 * s * s + w * (d - s) - c);
    if (err < best_err) {
      best_err = err;
      best_s = s;
    }
  }
  if (best_s == 0.0) throw InputError("dumbbell: no admissible square size");
  const double a = best_s / 2;
  return Union{{Rect{{-a, -a}, {a, a}}, Rect{{d - a, -a}, {d + a, a}}, Rect{{0, -w / 2}, {d, w / 2}}}};
}

ExperimentReport dumbbell_sweep(double c, const std::vector<double>& d_values, double h, const RunOptions& o) {
  for (double d : d_values) dumbbell(c, d, h);
  SweepSpec s{"dumbbell_sweep", "d", d_values, h, true, -1, [c](double d, double hh) { return dumbbell(c, d, hh); }};
  auto rep = run_sweep(s, o);
  rep.parameters.insert(rep.parameters.begin(), {"c", c});
  double dev = 0.0;
  for (const auto& row : rep.samples) dev = std::max(dev, std::abs(row[3] - c) / c);
  rep.summary.emplace_back("max_area_deviation", dev);
  if (rep.samples.size() >= 2)
    rep.summary.emplace_back("ratio_last_first", rep.samples.back()[1] / rep.samples.front()[1]);
  if (dev > 0.02) {
    rep.notes.push_back("area deviates from c by more than 2%");
    rep.verdict = Verdict::Fail;
  }
  return rep;
}

double inscribed_radius(const PixelMask& mask) {
  const double h = mask.h();
  std::vector<Vec2> outside;
  for (std::size_t k = 0; k < mask.active_count(); ++k) {
    const Cell c = mask.active_cell(k);
    for (auto [dc, dr] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
      if (!mask.occupied(c.col + dc, c.row + dr)) outside.push_back(mask.center(c.col + dc, c.row + dr));
  }
  double best = 0.0;
  for (const auto& x : mask.active_centers()) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& y : outside) {
      const double dx = std::max(std::abs(x.x - y.x) - h / 2, 0.0);
      const double dy = std::max(std::abs(x.y - y.y) - h / 2, 0.0);
      m = std::min(m, std::hypot(dx, dy));
    }
    best = std::max(best, m);
  }
  return best;
}

Circle min_enclosing_circle(std::vector<Vec2> pts) {
  if (pts.empty()) throw InputError("min_enclosing_circle: no points");
  std::mt19937_64 rng(12345);
  std::shuffle(pts.begin(), pts.end(), rng);
  auto inside = [](const Circle& c, Vec2 p) { return distance(c.center, p) <= c.radius * (1 + 1e-12) + 1e-15; };
  auto two = [](Vec2 a, Vec2 b) { return Circle{0.5 * (a + b), 0.5 * distance(a, b)}; };
  auto three = [&](Vec2 a, Vec2 b, Vec2 c) {
    const double bx = b.x - a.x, by = b.y - a.y, cx = c.x - a.x, cy = c.y - a.y;
    const double d = 2 * (bx * cy - by * cx);
    if (std::abs(d) < 1e-300) {
      Circle best = two(a, b);
      for (const auto& cand : {two(a, c), two(b, c)})
        if (cand.radius > best.radius) best = cand;
      return best;
    }
    const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
    const Vec2 o{a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d};
    return Circle{o, distance(o, a)};
  };
  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (inside(c, pts[i])) continue;
    c = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (inside(c, pts[j])) continue;
      c = two(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k)
        if (!inside(c, pts[k])) c = three(pts[i], pts[j], pts[k]);
    }
  }
  return c;
}

Circle enclosing_circle(const PixelMask& mask) {
  const double a = mask.h() / 2;
  std::vector<Vec2> corners;
  for (const auto& p : convex_hull(mask.active_centers()))
    for (auto [sx, sy] : {std::pair{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}) corners.push_back({p.x + sx * a, p.y + sy * a});
  return min_enclosing_circle(convex_hull(corners));
}

ExperimentReport sandwich_check(const Shape& shape, double h, const RunOptions& o) {
  const PixelMask mask = rasterize(shape, h);
  const double r_in = inscribed_radius(mask) - h;
  const Circle enc = enclosing_circle(mask);
  const double r_out = enc.radius + h;
  if (!(r_in > 1.0)) throw InputError("sandwich_check: inscribed radius (with grid slack) must exceed 1");
  const double lower = neg_eig(r_out).tau;
  const double upper = neg_eig(r_in).tau;
  const Eig t = extremal(mask, KernelSpec::log(), true, o);
  ExperimentReport rep;
  rep.name = "sandwich_check";
  rep.parameters = {{"h", h}, {"slack", h}};
  rep.columns = {"R_inscribed", "R_enclosing", "lower_bound", "tau_bottom", "upper_bound", "cells"};
  rep.samples.push_back({r_in, r_out, lower, t.value, upper, static_cast<double>(mask.active_count())});
  rep.tolerance_used = t.tolerance;
  rep.verdict = (t.value >= lower - t.tolerance && t.value <= upper + t.tolerance) ? Verdict::Pass : Verdict::Fail;
  return rep;
}

ExperimentReport domain_monotonicity_check(const Shape& inner, const Shape& outer, double h, const RunOptions& o) {
  const PixelMask mi = rasterize(inner, h), mo = rasterize(outer, h);
  if (!is_subset(mi, mo)) throw InputError("domain_monotonicity_check: inner mask is not contained in the outer mask");
  const bool strict_set = mi.active_count() < mo.active_count();
  const auto k = KernelSpec::log();

  std::vector<Eig> top(2);
  std::vector<std::optional<Eig>> bot(2);
  const PixelMask* masks[2] = {&mi, &mo};
  parallel_for(2, o.threads, [&](std::size_t i) { std::tie(top[i], bot[i]) = both_ends(*masks[i], k, o); });

  ExperimentReport rep;
  rep.name = "domain_monotonicity";
  rep.parameters = {{"h", h}};
  rep.columns = {"which", "tau_top", "tau_bottom", "cells"};
  for (int i = 0; i < 2; ++i)
    rep.samples.push_back({static_cast<double>(i), top[i].value, bot[i] ? bot[i]->value : std::nan(""),
                           static_cast<double>(masks[i]->active_count())});
  const double tol_top = std::max(top[0].tolerance, top[1].tolerance);
  const double gap_top = top[1].value - top[0].value;
  rep.tolerance_used = 3.0 * tol_top;
  rep.summary = {{"gap_top", gap_top}};

  bool fail = gap_top < -tol_top;
  bool inconclusive = false;
  if (strict_set && diameter(mo) <= 1.0 && !(gap_top > 3 * tol_top)) inconclusive = true;

  if (bot[0] && bot[1] && bot[1]->value < 0.0) {
    const double tol_bot = std::max(bot[0]->tolerance, bot[1]->tolerance);
    const double gap_bot = bot[0]->value - bot[1]->value;
    rep.summary.emplace_back("gap_bottom", gap_bot);
    rep.tolerance_used = std::max(rep.tolerance_used, 3.0 * tol_bot);
    if (gap_bot < -tol_bot) fail = true;
    if (strict_set && robin_constant(inner).tdiam > 1.0 && !(gap_bot > 3 * tol_bot)) inconclusive = true;
  } else {
    rep.notes.push_back("no resolved negative eigenvalue on the outer mask; bottom comparison not asserted");
  }
  rep.verdict = fail ? Verdict::Fail : inconclusive ? Verdict::Inconclusive : Verdict::Pass;
  return rep;
}

ExperimentReport polarization_flow(const GridFunction& u0, int steps, std::uint64_t seed, const KernelSpec& kernel) {
  if (u0.min_value() < 0.0) throw InputError("polarization_flow: u must be nonnegative");
  if (steps < 0) throw InputError("polarization_flow: steps must be >= 0");
  const double h = u0.mask().h();
  const GridFunction target = schwarz_fn(u0);
  GridFunction u = u0;
  double energy = discrete_energy(u0, kernel);

  ExperimentReport rep;
  rep.name = "polarization_flow";
  rep.parameters = {{"steps", static_cast<double>(steps)}, {"kernel", kernel.name()}, {"h", h}};
  rep.columns = {"step", "accepted", "energy", "l2_distance"};
  rep.seeds = {seed};
  rep.tolerance_used = 1e-12;
  rep.samples.push_back({0.0, 0.0, energy, l2_distance(u, target)});

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dir(0, 7);
  const double r2 = std::numbers::sqrt2 / 2;
  const Vec2 normals[8] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {r2, r2}, {-r2, -r2}, {r2, -r2}, {-r2, r2}};
  bool monotone = true;
  int accepted = 0;
  for (int step = 1; step <= steps; ++step) {
    const Vec2 a = normals[dir(rng)];
    double lo = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k)
      if (u[k] > 0.0) lo = std::min(lo, dot(u.mask().active_center(k), a));
    const bool diagonal = a.x != 0.0 && a.y != 0.0;
    const double unit_step = diagonal ? h / std::numbers::sqrt2 : h / 2;
    const long kmin = static_cast<long>(std::floor(lo / unit_step));
    const long k = std::uniform_int_distribution<long>(kmin, 0)(rng);
    const Polarizer H = Polarizer::on_grid(a, k * unit_step, h);
    const double margin = check_riesz_polarization(u, H, kernel);
    const bool take = margin > 1e-12 * std::abs(energy);
    if (margin < -1e-12 * std::abs(energy)) monotone = false;
    if (take) {
      u = polarize_fn(u, H);
      energy += margin;
      ++accepted;
    }
    rep.samples.push_back({static_cast<double>(step), take ? 1.0 : 0.0, energy, l2_distance(u, target)});
  }
  const double d0 = rep.samples.front()[3], d1 = rep.samples.back()[3];
  rep.summary = {{"initial_distance", d0}, {"final_distance", d1}, {"accepted", static_cast<double>(accepted)},
                 {"distance_ratio", d0 > 0 ? d1 / d0 : 0.0}};
  rep.verdict = monotone ? Verdict::Pass : Verdict::Fail;
  return rep;
}

ExperimentReport conjecture_scan(ConjectureKind kind, const ScanConfig& cfg, std::uint64_t seed, const RunOptions& o) {
  if (cfg.cases < 0) throw InputError("conjecture_scan: cases must be >= 0");
  const bool tpol = kind == ConjectureKind::TdiamPolarization;
  const double h = cfg.h > 0 ? cfg.h : (tpol ? 0.05 : 0.15);
  const double tol = cfg.tolerance > 0 ? cfg.tolerance : (tpol ? 0.02 : 1e-6);

  ExperimentReport rep;
  rep.name = tpol ? "conjecture_tdiam_pol" : "conjecture_neg_fk_pol";
  rep.parameters = {{"cases", static_cast<double>(cfg.cases)}, {"h", h}, {"relative_tolerance", tol}};
  rep.columns = tpol ? std::vector<std::string>{"case", "tdiam", "tdiam_polarized", "margin", "violation"}
                     : std::vector<std::string>{"case", "tau_bottom", "tau_bottom_polarized", "margin", "violation"};
  rep.seeds = {seed};
  rep.tolerance_used = tol;

  std::vector<std::vector<double>> rows(static_cast<std::size_t>(cfg.cases));
  parallel_for(rows.size(), o.threads, [&](std::size_t i) {
    std::mt19937_64 rng(seed + 104729u * i);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double a = tpol ? 0.5 + 1.5 * unit(rng) : 1.2 + 1.3 * unit(rng);
    const double b = tpol ? 0.15 + 0.85 * unit(rng) : 0.6 + 0.9 * unit(rng);
    const Vec2 c{unit(rng) - 0.5, unit(rng) - 0.5};
    const Shape E = Ellipse{c, a, b, kPi * unit(rng)};
    const PixelMask m = rasterize(E, h);
    const double r2 = std::numbers::sqrt2 / 2;
    const Vec2 normals[8] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {r2, r2}, {-r2, -r2}, {r2, -r2}, {-r2, r2}};
    const Vec2 n = normals[std::uniform_int_distribution<int>(0, 7)(rng)];
    const bool diagonal = n.x != 0.0 && n.y != 0.0;
    const double unit_step = diagonal ? h / std::numbers::sqrt2 : h / 2;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& p : m.active_centers()) {
      lo = std::min(lo, dot(p, n));
      hi = std::max(hi, dot(p, n));
    }
    const long k = std::uniform_int_distribution<long>(static_cast<long>(std::ceil(lo / unit_step)),
                                                       static_cast<long>(std::floor(hi / unit_step)))(rng);
    const PixelMask pm = polarize_set(m, Polarizer::on_grid(n, k * unit_step, h));
    double lhs, rhs, margin;
    bool violation;
    if (tpol) {
      lhs = robin_constant(m).tdiam;
      rhs = robin_constant(pm).tdiam;
      margin = lhs - rhs;  // conjecture: T(P_H E) <= T(E)
      violation = rhs > lhs * (1 + tol);
    } else {
      if (robin_constant(m).tdiam <= 1.0 || robin_constant(pm).tdiam <= 1.0) {
        rows[i] = {static_cast<double>(i), std::nan(""), std::nan(""), std::nan(""), 0.0};
        return;
      }
      lhs = extremal(m, KernelSpec::log(), true, o).value;
      rhs = extremal(pm, KernelSpec::log(), true, o).value;
      margin = rhs - lhs;  // conjecture: tau~(E) <= tau~(P_H E)
      violation = lhs > rhs + tol * std::abs(lhs);
    }
    rows[i] = {static_cast<double>(i), lhs, rhs, margin, violation ? 1.0 : 0.0};
  });
  int violations = 0, skipped = 0;
  for (auto& r : rows) {
    if (std::isnan(r[1])) ++skipped;
    violations += r[4] > 0.5;
    rep.samples.push_back(std::move(r));
  }
  rep.summary = {{"violations", static_cast<double>(violations)}, {"skipped", static_cast<double>(skipped)}};
  if (skipped) rep.notes.push_back("cases with T_diam <= 1 on either side were skipped");
  rep.verdict = violations ? Verdict::CounterexampleCandidate : Verdict::InconclusiveSupporting;
  return rep;
}

} // namespace logpot
