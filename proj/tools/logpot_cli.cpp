#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <string>

#include "CLI11.hpp"

#include "logpot/disc_spectrum.hpp"
#include "logpot/error.hpp"
#include "logpot/experiments.hpp"
#include "logpot/io.hpp"
#include "logpot/rearrange.hpp"
#include "logpot/solver.hpp"
#include "logpot/tdiam.hpp"
#include "logpot/verify.hpp"

using namespace logpot;
using io::json;

namespace {

enum Exit { kOk = 0, kFailVerdict = 1, kValidation = 2, kConvergence = 3, kCounterexample = 4 };

int report_error(const char* type, const std::string& msg, int code) {
  std::cerr << json{{"error", {{"type", type}, {"message", msg}, {"exit_code", code}}}}.dump() << '\n';
  return code;
}

struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;
  std::string stdout_text;

  void main(const std::string& path, const json& j) {
    if (path.empty() || path == "-") stdout_text = j.dump(2) + "\n";
    else files.emplace_back(path, j.dump(2) + "\n");
  }
  void flush() {
    io::write_atomic(files);
    std::cout << stdout_text;
  }
};

struct MaskSource {
  std::string shape, mask;
  double h = 0.0;

  PixelMask load() const {
    if (!shape.empty() == !mask.empty()) throw InputError("give exactly one of --shape or --mask");
    if (!mask.empty()) return io::mask_from_pbm(io::read_file(mask));
    if (!(h > 0.0)) throw InputError("--h must be positive");
    return rasterize(io::load_shape(shape), h);
  }
  void add(CLI::App* cmd) {
    cmd->add_option("--shape", shape, "shape: JSON file, inline JSON or kind:params");
    cmd->add_option("--mask", mask, "mask file (P1 bitmap with logpot header)");
    cmd->add_option("--h", h, "grid spacing");
  }
};

EigenMethod parse_method(const std::string& m) {
  if (m == "auto") return EigenMethod::Auto;
  if (m == "dense") return EigenMethod::Dense;
  if (m == "jacobi") return EigenMethod::Jacobi;
  if (m == "lanczos") return EigenMethod::Lanczos;
  throw InputError("unknown method '" + m + "'");
}

Polarizer parse_polarizer(const std::string& normal, double offset, double h) {
  const auto n = io::parse_list(normal);
  if (n.size() != 2) throw InputError("--normal must be nx,ny");
  const double len = std::hypot(n[0], n[1]);
  if (!(len > 0.0)) throw InputError("--normal must be nonzero");
  return Polarizer::on_grid({n[0] / len, n[1] / len}, offset, h);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for the logarithmic potential operator on planar domains"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  app.add_option("--threads", threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  double radius = 1.0;
  int count = 3;
  bool negative = false;
  auto* disc = app.add_subcommand("disc-spectrum", "analytic eigenvalues of a disc");
  disc->add_option("--radius", radius)->capture_default_str();
  disc->add_option("--count", count)->capture_default_str();
  disc->add_flag("--negative", negative, "append the negative eigenvalue when R > 1");
  disc->add_option("--out", out);

  MaskSource src;
  std::string kernel = "log", method = "auto", dump;
  int topk = 3;
  bool vectors = false;
  std::size_t max_cells = 0;
  auto* solve = app.add_subcommand("solve", "extremal eigenvalues of the discretised operator");
  src.add(solve);
  solve->add_option("--kernel", kernel)->capture_default_str();
  solve->add_option("--topk", topk)->capture_default_str();
  solve->add_option("--method", method, "auto|dense|jacobi|lanczos")->capture_default_str();
  solve->add_option("--dump-matrix", dump, "write the dense matrix in binary form");
  solve->add_flag("--vectors", vectors, "include eigenvectors and cell centres");
  solve->add_option("--max-cells", max_cells, "assembly cap (default LOGPOT_MAX_CELLS or 20000)");
  solve->add_option("--out", out);

  std::string normal = "1,0", mask_out;
  double offset = 0.0;
  bool gap = false, force = false;
  auto* pol = app.add_subcommand("polarize", "polarize a mask across a grid-compatible half-space");
  src.add(pol);
  pol->add_option("--normal", normal, "nx,ny (axis or diagonal)")->capture_default_str();
  pol->add_option("--offset", offset)->capture_default_str();
  pol->add_option("--mask-out", mask_out, "write the rearranged mask");
  pol->add_flag("--gap", gap, "also compare tau_1 before and after");
  pol->add_flag("--force", force, "allow diameter > 1 for --gap");
  pol->add_option("--out", out);

  auto* sch = app.add_subcommand("schwarz", "discrete Schwarz symmetrisation of a mask");
  src.add(sch);
  sch->add_option("--mask-out", mask_out, "write the rearranged mask");
  sch->add_flag("--gap", gap, "also compare tau_1 before and after");
  sch->add_flag("--force", force, "allow diameter > 1 for --gap");
  sch->add_option("--out", out);

  std::string shape_arg;
  int n_max = 12, nodes = 512, restarts = 4;
  double band = 0.02;
  auto* td = app.add_subcommand("tdiam", "transfinite diameter estimate");
  td->add_option("--shape", shape_arg)->required();
  td->add_option("--n", n_max, "largest n for rho_n")->capture_default_str();
  td->add_option("--nodes", nodes, "boundary nodes for the Robin constant")->capture_default_str();
  td->add_option("--restarts", restarts)->capture_default_str();
  td->add_option("--band", band, "inconclusive band around 1")->capture_default_str();
  td->add_option("--out", out);

  std::string exp_name, config, csv;
  auto* ex = app.add_subcommand("experiment", "run a verification experiment");
  ex->add_option("name", exp_name)->required();
  ex->add_option("--config", config, "JSON config file or inline JSON");
  ex->add_option("--out", out);
  ex->add_option("--csv", csv);

  std::string h_list;
  auto* ref = app.add_subcommand("refine", "grid refinement study with Richardson extrapolation");
  ref->add_option("--shape", shape_arg)->required();
  ref->add_option("--h-list", h_list, "comma-separated, decreasing")->required();
  ref->add_option("--kernel", kernel)->capture_default_str();
  ref->add_option("--max-cells", max_cells);
  ref->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("validation", e.what(), kValidation);
  }

  try {
    Outputs outs;
    int code = kOk;
    if (*disc) {
      if (count < 1) throw InputError("--count must be >= 1");
      json arr = json::array();
      for (const auto& e : leading_eigs(radius, count)) arr.push_back(io::to_json(e));
      if (negative && radius > 1.0) arr.push_back(io::to_json(neg_eig(radius)));
      outs.main(out, arr);
    } else if (*solve) {
      const KernelSpec k = parse_kernel(kernel);
      const EigenMethod m = parse_method(method);
      if (topk < 1) throw InputError("--topk must be >= 1");
      auto mask = std::make_shared<const PixelMask>(src.load());
      AssembleOptions ao;
      ao.max_cells = max_cells;
      ao.threads = threads;
      const auto A = assemble(mask, k, ao);
      EigOptions eo;
      eo.method = m;
      eo.seed = seed;
      const auto r = extremal_eigs(A, topk, eo);
      json j = io::to_json(r, *mask, k, vectors);
      if (k.kind == KernelSpec::Kind::Log) j["sign_check"] = io::to_json(positive_sign_check(r, *mask));
      if (!src.shape.empty()) j["shape"] = io::shape_to_json(io::load_shape(src.shape));
      outs.main(out, j);
      if (!dump.empty()) outs.files.emplace_back(dump, io::matrix_blob(A.dense(), A.h()));
    } else if (*pol || *sch) {
      const PixelMask mask = src.load();
      std::optional<Polarizer> H;
      if (*pol) H = parse_polarizer(normal, offset, mask.h());
      const PixelMask after = H ? polarize_set(mask, *H) : schwarz_set(mask);
      json j = {{"schema", "logpot.rearrange/1"},
                {"operation", H ? "polarize" : "schwarz"},
                {"before", io::mask_metadata(mask)},
                {"after", io::mask_metadata(after)},
                {"same_cells", same_cells(mask, after)}};
      if (H) j["polarizer"] = {{"normal", {H->normal().x, H->normal().y}}, {"offset", H->offset()}};
      if (gap) {
        RunOptions o;
        o.threads = threads;
        o.eig.seed = seed;
        j["gap"] = io::to_json(H ? reverse_fk_polarization(mask, *H, force, o) : reverse_fk_schwarz(mask, force, o));
      }
      outs.main(out, j);
      if (!mask_out.empty()) {
        outs.files.emplace_back(mask_out, io::mask_to_pbm(after));
        outs.files.emplace_back(mask_out + ".json", io::mask_metadata(after).dump(2) + "\n");
      }
    } else if (*td) {
      const Shape s = io::load_shape(shape_arg);
      if (!(band > 0.0 && band < 1.0)) throw InputError("--band must lie in (0, 1)");
      FeketeOptions fo;
      fo.seed = seed;
      fo.restarts = restarts;
      const auto est = tdiam_estimate(s, n_max, nodes, fo);
      PositivityResult p;
      p.band = band;
      p.tdiam = est.tdiam;
      p.cls = std::abs(est.tdiam - 1.0) < band ? Positivity::Inconclusive
                                                : (est.tdiam < 1.0 ? Positivity::Positive : Positivity::Indefinite);
      json j = io::to_json(est, p);
      j["shape"] = io::shape_to_json(s);
      outs.main(out, j);
    } else if (*ex) {
      json cfg = json::object();
      if (!config.empty()) {
        const std::string text = config.front() == '{' ? config : io::read_file(config);
        try {
          cfg = json::parse(text);
        } catch (const json::parse_error& e) {
          throw InputError(std::string("experiment config is not valid JSON: ") + e.what());
        }
      }
      const ExperimentJob job = plan_experiment(exp_name, cfg, seed, threads);
      const ExperimentReport rep = job();
      outs.main(out, io::to_json(rep));
      if (!csv.empty()) outs.files.emplace_back(csv, io::to_csv(rep));
      if (rep.verdict == Verdict::Fail) code = kFailVerdict;
      if (rep.verdict == Verdict::CounterexampleCandidate) code = kCounterexample;
    } else if (*ref) {
      const Shape s = io::load_shape(shape_arg);
      const KernelSpec k = parse_kernel(kernel);
      const auto hs = io::parse_list(h_list);
      AssembleOptions ao;
      ao.max_cells = max_cells;
      ao.threads = threads;
      EigOptions eo;
      eo.seed = seed;
      json j = io::to_json(refine_study(s, k, hs, eo, ao));
      j["kernel"] = k.name();
      j["shape"] = io::shape_to_json(s);
      outs.main(out, j);
    }
    outs.flush();
    return code;
  } catch (const ConvergenceError& e) {
    return report_error("convergence", e.what(), kConvergence);
  } catch (const InputError& e) {
    return report_error("validation", e.what(), kValidation);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), kFailVerdict);
  }
}
