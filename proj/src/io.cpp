#include "logpot/io.hpp"

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "logpot/error.hpp"

namespace logpot::io {
namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw InputError("shape config " + (path.empty() ? std::string("<root>") : path) + ": " + what);
}

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool ok = item.key() == "kind" || item.key() == "schema";
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok) bad(path, "unknown field '" + item.key() + "'");
  }
}

double num(const json& j, const std::string& path, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    bad(path, std::string("missing field '") + key + "'");
  }
  const auto& v = j.at(key);
  if (!v.is_number()) bad(path + "." + key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) bad(path + "." + key, "must be finite");
  return d;
}

Vec2 point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    bad(path, "expected [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

Vec2 vec(const json& j, const std::string& path, const char* key, std::optional<Vec2> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    bad(path, std::string("missing field '") + key + "'");
  }
  return point(j.at(key), path + "." + key);
}

Shape parse(const json& j, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  if (j.contains("schema") && j.at("schema") != kShapeSchema) bad(path, std::string("schema must be ") + kShapeSchema);
  if (!j.contains("kind") || !j.at("kind").is_string()) bad(path, "missing string field 'kind'");
  const std::string kind = j.at("kind");
  const Vec2 origin{0, 0};
  if (kind == "disc") {
    only_keys(j, path, {"radius", "center"});
    return Disc{vec(j, path, "center", origin), num(j, path, "radius")};
  }
  if (kind == "annulus") {
    only_keys(j, path, {"outer", "inner", "center"});
    return Annulus{vec(j, path, "center", origin), num(j, path, "outer"), num(j, path, "inner")};
  }
  if (kind == "eccentric_annulus") {
    only_keys(j, path, {"outer", "inner", "offset"});
    return EccentricAnnulus{num(j, path, "outer"), num(j, path, "inner"), num(j, path, "offset")};
  }
  if (kind == "ellipse") {
    only_keys(j, path, {"semi_a", "semi_b", "angle", "center"});
    return Ellipse{vec(j, path, "center", origin), num(j, path, "semi_a"), num(j, path, "semi_b"), num(j, path, "angle", 0.0)};
  }
  if (kind == "rect") {
    only_keys(j, path, {"lo", "hi"});
    return Rect{vec(j, path, "lo"), vec(j, path, "hi")};
  }
  if (kind == "polygon") {
    only_keys(j, path, {"vertices"});
    if (!j.contains("vertices") || !j.at("vertices").is_array()) bad(path, "missing array field 'vertices'");
    Polygon p;
    std::size_t k = 0;
    for (const auto& v : j.at("vertices")) p.vertices.push_back(point(v, path + ".vertices[" + std::to_string(k++) + "]"));
    return p;
  }
  if (kind == "union") {
    only_keys(j, path, {"parts"});
    if (!j.contains("parts") || !j.at("parts").is_array()) bad(path, "missing array field 'parts'");
    Union u;
    std::size_t k = 0;
    for (const auto& part : j.at("parts")) u.parts.push_back(parse(part, path + ".parts[" + std::to_string(k++) + "]"));
    return u;
  }
  if (kind == "difference") {
    only_keys(j, path, {"outer", "obstacle"});
    if (!j.contains("outer") || !j.contains("obstacle")) bad(path, "difference needs 'outer' and 'obstacle'");
    return make_difference(parse(j.at("outer"), path + ".outer"), parse(j.at("obstacle"), path + ".obstacle"));
  }
  bad(path + ".kind", "unknown kind '" + kind + "'");
}

json pt(Vec2 p) { return json::array({p.x, p.y}); }

json params_json(const std::vector<std::pair<std::string, ParamValue>>& params) {
  json out = json::object();
  for (const auto& [k, v] : params) std::visit([&, &key = k](const auto& x) { out[key] = x; }, v);
  return out;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

Shape shape_from_json(const json& j) {
  Shape s = parse(j, "");
  validate(s);
  return s;
}

json shape_to_json(const Shape& s) {
  return std::visit(
      [](const auto& g) -> json {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Disc>) return {{"kind", "disc"}, {"center", pt(g.center)}, {"radius", g.radius}};
        else if constexpr (std::is_same_v<T, Annulus>)
          return {{"kind", "annulus"}, {"center", pt(g.center)}, {"outer", g.outer}, {"inner", g.inner}};
        else if constexpr (std::is_same_v<T, EccentricAnnulus>)
          return {{"kind", "eccentric_annulus"}, {"outer", g.outer}, {"inner", g.inner}, {"offset", g.offset}};
        else if constexpr (std::is_same_v<T, Ellipse>)
          return {{"kind", "ellipse"}, {"center", pt(g.center)}, {"semi_a", g.semi_a}, {"semi_b", g.semi_b}, {"angle", g.angle}};
        else if constexpr (std::is_same_v<T, Rect>) return {{"kind", "rect"}, {"lo", pt(g.lo)}, {"hi", pt(g.hi)}};
        else if constexpr (std::is_same_v<T, Polygon>) {
          json v = json::array();
          for (const auto& p : g.vertices) v.push_back(pt(p));
          return {{"kind", "polygon"}, {"vertices", v}};
        } else if constexpr (std::is_same_v<T, Union>) {
          json parts = json::array();
          for (const auto& p : g.parts) parts.push_back(shape_to_json(p));
          return {{"kind", "union"}, {"parts", parts}};
        } else {
          return {{"kind", "difference"}, {"outer", shape_to_json(*g.outer)}, {"obstacle", shape_to_json(*g.obstacle)}};
        }
      },
      s.geometry);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("not a number: '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size() || !std::isfinite(v)) throw InputError("not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InputError("empty number list");
  return out;
}

Shape parse_shape_string(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("shape string must look like kind:p1,p2,...");
  const std::string kind = text.substr(0, colon);
  const auto p = parse_list(text.substr(colon + 1));
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (p.size() < lo || p.size() > hi)
      throw InputError("shape string '" + kind + "': expected " + std::to_string(lo) + (lo == hi ? "" : "-" + std::to_string(hi)) + " numbers");
  };
  auto at = [&](std::size_t i, double d) { return i < p.size() ? p[i] : d; };
  Shape s = Disc{};
  if (kind == "disc") {
    need(1, 3);
    s = Disc{{at(1, 0), at(2, 0)}, p[0]};
  } else if (kind == "annulus") {
    need(2, 4);
    s = Annulus{{at(2, 0), at(3, 0)}, p[0], p[1]};
  } else if (kind == "eccentric") {
    need(3, 3);
    s = EccentricAnnulus{p[0], p[1], p[2]};
  } else if (kind == "ellipse") {
    need(2, 5);
    s = Ellipse{{at(3, 0), at(4, 0)}, p[0], p[1], at(2, 0)};
  } else if (kind == "rect") {
    need(4, 4);
    s = Rect{{p[0], p[1]}, {p[2], p[3]}};
  } else if (kind == "square") {
    need(1, 1);
    s = Rect{{-p[0] / 2, -p[0] / 2}, {p[0] / 2, p[0] / 2}};
  } else {
    throw InputError("unknown shape kind '" + kind + "'");
  }
  validate(s);
  return s;
}

Shape load_shape(const std::string& arg) {
  if (arg.empty()) throw InputError("empty shape argument");
  auto from_text = [](const std::string& text) {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw InputError(std::string("shape config is not valid JSON: ") + e.what());
    }
    return shape_from_json(j);
  };
  if (arg.front() == '{') return from_text(arg);
  if (std::filesystem::exists(arg)) return from_text(read_file(arg));
  if (arg.find(':') != std::string::npos) return parse_shape_string(arg);
  throw InputError("shape '" + arg + "' is neither JSON, a file, nor kind:params");
}

json to_json(const DiscEig& e) {
  const auto& f = e.eigenfunction;
  return {{"m", e.m},
          {"n", e.n},
          {"tau", e.tau},
          {"kind", kind_name(e.kind)},
          {"multiplicity", e.multiplicity},
          {"eigenfunction",
           {{"m", f.m},
            {"n", f.n},
            {"radius", f.radius},
            {"scale", f.scale},
            {"angular", angular_name(f.angular)},
            {"profile", f.profile == Profile::J ? "J" : "I0"}}}};
}

json to_json(const SignReport& s) {
  json j = {{"diameter", s.diameter}, {"top_min", s.top_min}, {"top_max", s.top_max},
            {"top_sign_change", s.top_sign_change}, {"flagged", s.flagged}};
  if (s.bottom_one_signed) {
    j["bottom_min"] = *s.bottom_min;
    j["bottom_max"] = *s.bottom_max;
    j["bottom_one_signed"] = *s.bottom_one_signed;
  }
  return j;
}

json to_json(const SpectralResult& r, const PixelMask& mask, const KernelSpec& kernel, bool with_vectors) {
  json j = {{"schema", kSpectralSchema},
            {"h", r.h},
            {"kernel", kernel.name()},
            {"cells", mask.active_count()},
            {"area", mask.area()},
            {"method", r.method},
            {"iterations", r.iterations},
            {"tau_top", r.tau_top},
            {"residuals", r.residuals},
            {"bottom_converged", r.bottom_converged}};
  j["tau_bottom"] = r.bottom_converged ? json(r.tau_bottom) : json(nullptr);
  if (with_vectors) {
    json vs = json::array();
    for (const auto& v : r.vectors) vs.push_back(std::vector<double>(v.values().begin(), v.values().end()));
    j["vectors"] = vs;
    json cells = json::array();
    for (std::size_t k = 0; k < mask.active_count(); ++k) cells.push_back(pt(mask.active_center(k)));
    j["centers"] = cells;
  }
  return j;
}

json to_json(const ExperimentReport& r) {
  json samples = json::array();
  for (const auto& row : r.samples) {
    json o = json::object();
    for (std::size_t k = 0; k < r.columns.size() && k < row.size(); ++k) o[r.columns[k]] = finite_or_null(row[k]);
    samples.push_back(o);
  }
  json summary = json::object();
  for (const auto& [k, v] : r.summary) summary[k] = finite_or_null(v);
  return {{"schema", kReportSchema},
          {"name", r.name},
          {"parameters", params_json(r.parameters)},
          {"columns", r.columns},
          {"samples", samples},
          {"verdict", verdict_name(r.verdict)},
          {"tolerance_used", r.tolerance_used},
          {"seeds", r.seeds},
          {"summary", summary},
          {"notes", r.notes}};
}

json to_json(const RefineTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"h", r.h}, {"cells", r.cells}, {"tau_top", r.tau_top},
                    {"tau_bottom", r.bottom_converged ? json(r.tau_bottom) : json(nullptr)}});
  auto ex = [](const Extrapolation& e) {
    return json{{"limit", finite_or_null(e.limit)}, {"order", finite_or_null(e.order)}, {"order_assumed", e.order_assumed}};
  };
  return {{"schema", kRefineSchema}, {"rows", rows}, {"top", ex(t.top)}, {"bottom", ex(t.bottom)}};
}

json to_json(const TdiamEstimate& t, const PositivityResult& p) {
  return {{"schema", kTdiamSchema},
          {"tdiam", t.tdiam},
          {"rho_sequence", t.rho_sequence},
          {"upper_bound_consistent", t.upper_bound_consistent},
          {"robin",
           {{"V_E", t.robin.V_E},
            {"method", t.robin.method},
            {"nodes", t.robin.nodes.size()},
            {"mask_fallback", t.robin.mask_fallback}}},
          {"classification", positivity_name(p.cls)},
          {"band", p.band}};
}

json to_json(const GapResult& g) {
  return {{"tau", g.tau}, {"tau_rearranged", g.tau_rearranged}, {"gap", g.gap}, {"tolerance", g.tolerance},
          {"cells", g.cells}, {"diameter", g.diameter},
          {"hypothesis", g.hypothesis_verified ? "verified" : "hypothesis unverified"}};
}

std::string to_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t k = 0; k < r.columns.size(); ++k) os << (k ? "," : "") << r.columns[k];
  os << '\n';
  for (const auto& row : r.samples) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) os << ',';
      if (std::isfinite(row[k])) os << row[k];
    }
    os << '\n';
  }
  return os.str();
}

std::string mask_to_pbm(const PixelMask& m) {
  std::ostringstream os;
  os.precision(17);
  os << "P1\n# logpot-mask v1\n# origin " << m.origin().x << ' ' << m.origin().y << "\n# h " << m.h() << '\n'
     << m.nx() << ' ' << m.ny() << '\n';
  for (int r = m.ny() - 1; r >= 0; --r) {
    for (int c = 0; c < m.nx(); ++c) os << (c ? " " : "") << (m.occupied(c, r) ? 1 : 0);
    os << '\n';
  }
  return os.str();
}

PixelMask mask_from_pbm(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("P1", 0) != 0) throw InputError("mask file: expected P1 header");
  std::optional<Vec2> origin;
  std::optional<double> h;
  bool tagged = false;
  std::string body;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] == '#') {
      std::istringstream c(line.substr(1));
      std::string key;
      c >> key;
      if (key == "logpot-mask") tagged = true;
      else if (key == "origin") {
        double x, y;
        if (c >> x >> y) origin = Vec2{x, y};
      } else if (key == "h") {
        double v;
        if (c >> v) h = v;
      }
      continue;
    }
    body += line + '\n';
  }
  if (!tagged || !origin || !h) throw InputError("mask file: missing '# logpot-mask', '# origin' or '# h' lines");
  if (!(*h > 0.0)) throw InputError("mask file: h must be positive");
  std::istringstream b(body);
  int nx = 0, ny = 0;
  if (!(b >> nx >> ny) || nx <= 0 || ny <= 0) throw InputError("mask file: bad dimensions");
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(nx) * ny);
  for (int r = ny - 1; r >= 0; --r)
    for (int c = 0; c < nx; ++c) {
      int v;
      if (!(b >> v) || (v != 0 && v != 1)) throw InputError("mask file: body must hold nx*ny values 0 or 1");
      occ[static_cast<std::size_t>(r) * nx + c] = static_cast<std::uint8_t>(v);
    }
  int extra;
  if (b >> extra) throw InputError("mask file: trailing data after the bitmap");
  return PixelMask(*origin, *h, nx, ny, std::move(occ));
}

json mask_metadata(const PixelMask& m) {
  return {{"schema", kMaskSchema}, {"origin", pt(m.origin())}, {"h", m.h()}, {"nx", m.nx()}, {"ny", m.ny()},
          {"cells", m.active_count()}, {"area", m.area()}, {"diameter", diameter(m)}};
}

std::string matrix_blob(const Eigen::MatrixXd& a, double h) {
  std::string out("LOGPOTMX");
  auto put = [&out](const void* p, std::size_t n) { out.append(static_cast<const char*>(p), n); };
  const std::uint32_t version = 1;
  const std::uint64_t rows = static_cast<std::uint64_t>(a.rows()), cols = static_cast<std::uint64_t>(a.cols());
  put(&version, sizeof version);
  put(&rows, sizeof rows);
  put(&cols, sizeof cols);
  put(&h, sizeof h);
  out.reserve(out.size() + rows * cols * sizeof(double));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double v = a(i, j);
      put(&v, sizeof v);
    }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::vector<std::pair<std::string, std::string>>& files) {
  std::vector<std::string> temps;
  auto cleanup = [&temps] {
    for (const auto& t : temps) std::remove(t.c_str());
  };
  try {
    for (const auto& [path, content] : files) {
      const std::string tmp = path + ".tmp." + std::to_string(::getpid());
      temps.push_back(tmp);
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw InputError("cannot write " + path + ": " + std::strerror(errno));
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
      out.close();
      if (!out) throw InputError("cannot write " + path);
    }
    for (std::size_t k = 0; k < files.size(); ++k) {
      std::error_code ec;
      std::filesystem::rename(temps[k], files[k].first, ec);
      if (ec) throw InputError("cannot rename into " + files[k].first + ": " + ec.message());
    }
  } catch (...) {
    cleanup();
    throw;
  }
}

} // namespace logpot::io
