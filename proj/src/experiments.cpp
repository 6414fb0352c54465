#include "logpot/experiments.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "logpot/error.hpp"

namespace logpot {

using io::json;

namespace {

// Config reader that records which keys were consumed.
class Config {
public:
  explicit Config(json j) : j_(std::move(j)) {
    if (!j_.is_object()) throw InputError("experiment config must be a JSON object");
    if (j_.contains("schema") && j_.at("schema") != "logpot.experiment/1")
      throw InputError("experiment config: schema must be logpot.experiment/1");
    used_.insert("schema");
  }

  double num(const std::string& key, double fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    if (!j_.at(key).is_number()) throw InputError("experiment config: '" + key + "' must be a number");
    const double v = j_.at(key).get<double>();
    if (!std::isfinite(v)) throw InputError("experiment config: '" + key + "' must be finite");
    return v;
  }
  double positive(const std::string& key, double fallback) {
    const double v = num(key, fallback);
    if (!(v > 0.0)) throw InputError("experiment config: '" + key + "' must be positive");
    return v;
  }
  int integer(const std::string& key, int fallback) {
    const double v = num(key, fallback);
    if (v != std::floor(v) || v < 0 || v > 1e9) throw InputError("experiment config: '" + key + "' must be a nonnegative integer");
    return static_cast<int>(v);
  }
  bool flag(const std::string& key, bool fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    if (!j_.at(key).is_boolean()) throw InputError("experiment config: '" + key + "' must be true or false");
    return j_.at(key).get<bool>();
  }
  std::vector<double> list(const std::string& key, std::vector<double> fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_array()) throw InputError("experiment config: '" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw InputError("experiment config: '" + key + "' must be an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  Shape shape(const std::string& key, const Shape& fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    const auto& v = j_.at(key);
    if (v.is_string()) return io::load_shape(v.get<std::string>());
    return io::shape_from_json(v);
  }
  KernelSpec kernel(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) return KernelSpec::log();
    if (!j_.at(key).is_string()) throw InputError("experiment config: '" + key + "' must be a string");
    return parse_kernel(j_.at(key).get<std::string>());
  }
  Vec2 point(const std::string& key, Vec2 fallback) {
    const auto v = list(key, {fallback.x, fallback.y});
    if (v.size() != 2) throw InputError("experiment config: '" + key + "' must be [x, y]");
    return {v[0], v[1]};
  }
  void finish() const {
    for (const auto& item : j_.items())
      if (!used_.count(item.key())) throw InputError("experiment config: unknown field '" + item.key() + "'");
  }

private:
  json j_;
  std::set<std::string> used_;
};

} // namespace

Shape sandwich_blob() {
  std::vector<Vec2> v;
  for (int k = 0; k < 720; ++k) {
    const double th = 2 * std::numbers::pi * k / 720, r = 2 + 0.45 * std::cos(3 * th);
    v.push_back({r * std::cos(th), r * std::sin(th)});
  }
  return Polygon{v};
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{
      "annulus", "obstacle-translate", "obstacle-rotate", "two-ball", "dumbbell", "sandwich",
      "domain-monotonicity", "polarization-flow", "riesz", "reverse-fk-polarization",
      "reverse-fk-schwarz", "conjecture-tdiam-pol", "conjecture-neg-fk-pol"};
  return names;
}

// Validates the whole config and returns the experiment to run.
ExperimentJob plan_experiment(const std::string& name, const json& config, std::uint64_t seed, int threads) {
  Config c(config);
  RunOptions o;
  o.threads = threads;
  o.eig.seed = seed;
  auto common = [&](double default_cap) {
    o.assemble.max_cells = static_cast<std::size_t>(c.positive("max_cells", default_cap));
    o.refine_probe = c.flag("refine_probe", true);
  };
  const double pi = std::numbers::pi;
  ExperimentJob job;
  if (name == "annulus") {
    const double R = c.positive("R", 0.45), r = c.positive("r", 0.1), h = c.positive("h", 0.01);
    const auto t = c.list("t", {0, 0.1, 0.2, 0.3});
    common(100000);
    job = [=] { return annulus_sweep(R, r, t, h, o); };
  } else if (name == "obstacle-translate") {
    const auto s = c.list("s", {0, 0.05, 0.1, 0.15});
    const double h = c.positive("h", 0.025);
    auto fam = default_translate_family();
    fam.domain = c.shape("domain", fam.domain);
    fam.obstacle = c.shape("obstacle", fam.obstacle);
    fam.direction = c.point("direction", fam.direction);
    common(100000);
    job = [=] { return obstacle_sweep(ObstacleKind::Translate, s, h, o, fam); };
  } else if (name == "obstacle-rotate") {
    const auto th = c.list("theta", {0, pi / 6, pi / 3});
    const double h = c.positive("h", 0.02);
    common(100000);
    job = [=] { return obstacle_sweep(ObstacleKind::Rotate, th, h, o); };
  } else if (name == "two-ball") {
    const auto d = c.list("d", {3, 6, 12});
    const double h = c.positive("h", 0.1);
    common(100000);
    job = [=] { return two_ball_sweep(d, h, o); };
  } else if (name == "dumbbell") {
    const double cc = c.positive("c", 3 * pi), h = c.positive("h", 0.02);
    const auto d = c.list("d", {6, 12, 24});
    common(200000);
    job = [=] { return dumbbell_sweep(cc, d, h, o); };
  } else if (name == "sandwich") {
    const Shape s = c.shape("shape", sandwich_blob());
    const double h = c.positive("h", 0.1);
    common(100000);
    job = [=] { return sandwich_check(s, h, o); };
  } else if (name == "domain-monotonicity") {
    const Shape in = c.shape("inner", Disc{{0, 0}, 0.3}), out = c.shape("outer", Disc{{0, 0}, 0.45});
    const double h = c.positive("h", 0.03);
    common(100000);
    job = [=] { return domain_monotonicity_check(in, out, h, o); };
  } else if (name == "polarization-flow") {
    const Shape s = c.shape("shape", Ellipse{{0, 0}, 0.5, 0.25, 0.0});
    const double h = c.positive("h", 0.05);
    const int steps = c.integer("steps", 500);
    const KernelSpec k = c.kernel("kernel");
    job = [=] {
      auto m = std::make_shared<const PixelMask>(rasterize(s, h));
      return polarization_flow(GridFunction::constant(m, 1.0), steps, seed, k);
    };
  } else if (name == "riesz") {
    const KernelSpec k = c.kernel("kernel");
    const int cases = c.integer("cases", 1000);
    job = [=] { return riesz_suite(k, cases, seed); };
  } else if (name == "reverse-fk-polarization") {
    const Shape s = c.shape("shape", make_difference(Disc{{0, 0}, 0.45}, Rect{{-0.4, 0.0}, {0.4, 0.4}}));
    const double h = c.positive("h", 0.025);
    const Vec2 n = c.point("normal", {0, 1});
    const double off = c.num("offset", -0.1);
    const bool force = c.flag("force", false);
    const Polarizer H = Polarizer::on_grid(n, off, h);
    common(100000);
    job = [=] { return gap_report("reverse_fk_polarization", reverse_fk_polarization(s, H, h, force, o)); };
  } else if (name == "reverse-fk-schwarz") {
    const double side = std::sqrt(pi) / 4;
    const Shape s = c.shape("shape", Rect{{-side / 2, -side / 2}, {side / 2, side / 2}});
    const double h = c.positive("h", 0.02);
    const bool force = c.flag("force", false);
    common(100000);
    job = [=] { return gap_report("reverse_fk_schwarz", reverse_fk_schwarz(s, h, force, o)); };
  } else if (name == "conjecture-tdiam-pol" || name == "conjecture-neg-fk-pol") {
    ScanConfig sc;
    sc.cases = c.integer("cases", 20);
    sc.h = c.num("h", 0.0);
    sc.tolerance = c.num("tolerance", 0.0);
    const auto kind = name == "conjecture-tdiam-pol" ? ConjectureKind::TdiamPolarization : ConjectureKind::NegativeFaberKrahn;
    common(100000);
    job = [=] { return conjecture_scan(kind, sc, seed, o); };
  } else {
    throw InputError("unknown experiment '" + name + "'");
  }
  c.finish();
  return job;
}


} // namespace logpot
