#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "weaklab/asymptotics.hpp"
#include "weaklab/config.hpp"
#include "weaklab/error.hpp"
#include "weaklab/json_io.hpp"
#include "weaklab/norms.hpp"
#include "weaklab/plot.hpp"
#include "weaklab/suites.hpp"
#include "weaklab/weights.hpp"

using namespace weaklab;
namespace fs = std::filesystem;

namespace {

enum Exit { kPass = 0, kCheckFailure = 1, kUsage = 2, kIo = 3 };

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> jobs;
};

RunConfig load_config(const Globals& g) {
  RunConfig cfg = g.config.empty() ? RunConfig{} : RunConfig::load(g.config);
  if (g.seed) cfg.seed = *g.seed;
  if (g.jobs) cfg.jobs = *g.jobs;
  if (!g.out.empty()) cfg.out_dir = g.out;
  cfg.validate();
  return cfg;
}

// `--out` names a file when it carries a known extension, else a directory
// that receives `default_name`. Empty means stdout.
std::string resolve_out(const std::string& out, const std::string& default_name) {
  if (out.empty()) return "";
  const std::string ext = fs::path(out).extension().string();
  if (ext == ".csv" || ext == ".json" || ext == ".svg") return out;
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) fail(Errc::io_error, "cannot create output directory '" + out + "': " + ec.message());
  return (fs::path(out) / default_name).string();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Errc::io_error, "cannot write '" + path + "'");
  f << text;
  if (!f) fail(Errc::io_error, "write failed for '" + path + "'");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json fit_json(const ExponentFit& f) {
  Json j;
  j["operator"] = f.op;
  j["endpoint"] = to_string(f.endpoint);
  j["exponent"] = json_number(f.exponent);
  j["intercept"] = json_number(f.intercept);
  j["residual"] = json_number(f.residual);
  j["points_used"] = f.points_used;
  j["clamped"] = f.clamped;
  return j;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
  return out;
}

int run_verify(const Globals& g, std::vector<std::string> names) {
  const RunConfig cfg = load_config(g);
  if (names.size() == 1 && names[0] == "all") names = suite_names();
  for (const auto& n : names) {
    if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end()) {
      fail(Errc::parse_error, "unknown suite '" + n + "'");
    }
  }
  bool ok = true;
  for (const auto& n : names) {
    const SuiteReport r = verify_suite(n, cfg);
    int failed = 0;
    for (const auto& c : r.checks) failed += !c.pass;
    std::cout << n << ": " << (r.pass() ? "pass" : "FAIL") << " (" << r.checks.size() - failed << "/"
              << r.checks.size() << " checks)\n";
    for (const auto& c : r.checks) {
      if (!c.pass) std::cout << "  failed: " << c.name << " measured " << format_double(c.measured) << " bound "
                             << format_double(c.bound) << "\n";
    }
    if (!g.out.empty()) emit(resolve_out(g.out, n + ".json"), r.to_json());
    ok = ok && r.pass();
  }
  return ok ? kPass : kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weaklab: weak-type norm experiments on the real line"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "RunConfig JSON file");
  app.add_option("--seed", g.seed, "seed for randomized corpora");
  app.add_option("--out", g.out, "output directory, or a file path for single-file commands");
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);

  std::function<int()> action;

  auto* verify = app.add_subcommand("verify", "run verification suites");
  std::vector<std::string> suites;
  verify->add_option("suite", suites, "suite names or 'all'")->required();
  verify->callback([&] { action = [&] { return run_verify(g, suites); }; });

  auto* norms = app.add_subcommand("norms", "sample N(p) = max ‖Tf‖_{p,∞,w}/‖f‖_{p,w} over a family");
  std::string op_text, family = "indicator", weight_text = "const:1", grid_text, plot_path;
  bool no_profiles = false;
  norms->add_option("--op", op_text)->required();
  norms->add_option("--family", family);
  norms->add_option("--weight", weight_text);
  norms->add_option("--p-grid", grid_text)->required();
  norms->add_flag("--no-profiles", no_profiles, "always evaluate on the grid");
  norms->add_option("--plot", plot_path, "SVG output");
  norms->callback([&] {
    action = [&] {
      const RunConfig cfg = load_config(g);
      const OperatorId op = OperatorId::parse(op_text);
      const Weight w = parse_weight(weight_text, cfg);
      EvalOptions eo = cfg.eval();
      eo.use_profiles = !no_profiles;
      const NormCurve c = sample_norm_curve(op, family, w, parse_p_grid(grid_text), eo);
      std::ostringstream csv;
      write_curves_csv(csv, {c});
      emit(resolve_out(g.out, "norms.csv"), csv.str());
      if (!plot_path.empty()) {
        std::ostringstream svg;
        std::vector<ExponentFit> fits;
        if (c.p.size() >= 3) fits.push_back(fit_exponent(c, c.p.front() >= 2 ? Endpoint::infinity : Endpoint::one_plus));
        plot_curves(svg, {c}, fits);
        emit(plot_path, svg.str());
      }
      return kPass;
    };
  });

  auto* fit = app.add_subcommand("fit", "fit α (one_plus) or γ (infinity) from a curve CSV");
  std::string in_path, endpoint_text, fit_op;
  int tail = 0;
  fit->add_option("--in", in_path)->required();
  fit->add_option("--endpoint", endpoint_text)->required();
  fit->add_option("--tail", tail, "samples nearest the endpoint (0 = all)");
  fit->add_option("--operator", fit_op, "only fit this operator's curve");
  fit->add_option("--plot", plot_path, "SVG output");
  fit->callback([&] {
    action = [&] {
      load_config(g);
      const Endpoint e = parse_endpoint(endpoint_text);
      std::ifstream in(in_path);
      if (!in) fail(Errc::io_error, "cannot read '" + in_path + "'");
      std::vector<NormCurve> curves = read_curves_csv(in);
      if (!fit_op.empty()) {
        std::erase_if(curves, [&](const NormCurve& c) { return c.op != fit_op; });
        if (curves.empty()) fail(Errc::invalid_argument, "no curve for operator '" + fit_op + "'");
      }
      std::vector<ExponentFit> fits;
      Json j = Json::array();
      for (const auto& c : curves) {
        fits.push_back(fit_exponent(c, e, tail));
        Json fj = fit_json(fits.back());
        // stability: the same fit over half the tail, when that still has 3 points
        const int half = fits.back().points_used / 2;
        if (half >= 3) {
          fj["half_tail_points"] = half;
          fj["half_tail_exponent"] = json_number(fit_exponent(c, e, half).exponent);
        }
        j.push_back(fj);
      }
      if (j.size() == 1) j = Json(j[0]);
      emit(resolve_out(g.out, "fit.json"), dump(j));
      if (!plot_path.empty()) {
        std::ostringstream svg;
        plot_curves(svg, curves, fits);
        emit(plot_path, svg.str());
      }
      return kPass;
    };
  });

  auto* bound = app.add_subcommand("bound", "β_min = max{γ, α/(p0-1)}");
  double alpha = 0, gamma = 0, p0 = 2;
  bound->add_option("--alpha", alpha)->required();
  bound->add_option("--gamma", gamma)->required();
  bound->add_option("--p0", p0)->required();
  bound->callback([&] {
    action = [&] {
      load_config(g);
      const BetaBound b = beta_lower(alpha, gamma, p0);
      Json j;
      j["alpha"] = json_number(b.alpha);
      j["gamma"] = json_number(b.gamma);
      j["p0"] = json_number(b.p0);
      j["beta_min"] = json_number(b.beta_min);
      emit(resolve_out(g.out, "bound.json"), dump(j));
      return kPass;
    };
  });

  auto* ap = app.add_subcommand("ap", "Muckenhoupt constant of a weight");
  std::string mode_text = "bruteforce";
  double p_ap = 2;
  int subdivide = 0;
  ap->add_option("--weight", weight_text)->required();
  ap->add_option("--p", p_ap)->required();
  ap->add_option("--mode", mode_text)->check(CLI::IsMember({"bruteforce", "dyadic"}));
  ap->add_option("--subdivide", subdivide, "bruteforce: extra 2^r - 1 nodes per gap")->check(CLI::Range(0, 8));
  ap->callback([&] {
    action = [&] {
      const RunConfig cfg = load_config(g);
      const ApMode mode = mode_text == "dyadic" ? ApMode::dyadic : ApMode::bruteforce;
      auto value = [&](const RunConfig& c) {
        ApOptions o;
        o.grid = c.grid;
        o.subdivide = subdivide;
        const Weight w = parse_weight(weight_text, c);
        return std::pair{w, ap_constant(w, p_ap, mode, o)};
      };
      const auto [w, r] = value(cfg);
      RunConfig wide = cfg;
      wide.grid.window_X *= 2;
      const auto r2 = value(wide).second;
      Json j;
      j["weight"] = w.id();
      j["p"] = json_number(p_ap);
      j["mode"] = mode_text;
      j["value"] = json_number(r.value);
      j["finite"] = r.finite;
      j["window_X"] = json_number(cfg.grid.window_X);
      j["value_window_doubled"] = json_number(r2.value);
      if (w.kind() == WeightKind::power) j["origin_candidate"] = json_number(w.origin_candidate(p_ap));
      j["fingerprint"] = cfg.fingerprint();
      emit(resolve_out(g.out, "ap.json"), dump(j));
      return kPass;
    };
  });

  auto* sharp = app.add_subcommand("sharpness", "slope of log ratio against log [w_δ]_{A_p} for power weights");
  double p_sharp = 2;
  std::string deltas_text;
  sharp->add_option("--op", op_text)->required();
  sharp->add_option("--p", p_sharp);
  sharp->add_option("--deltas", deltas_text, "comma-separated δ values");
  sharp->add_option("--plot", plot_path, "SVG output");
  sharp->callback([&] {
    action = [&] {
      const RunConfig cfg = load_config(g);
      SharpnessOptions so;
      so.eval.jobs = cfg.jobs;
      so.eval.quad = cfg.quad;
      if (!deltas_text.empty()) so.deltas = parse_list(deltas_text);
      const SharpnessResult s = sharpness_probe(OperatorId::parse(op_text), p_sharp, so);
      Json j;
      j["operator"] = s.op;
      j["p"] = json_number(s.p);
      j["exponent"] = json_number(s.fit.exponent);
      j["intercept"] = json_number(s.fit.intercept);
      j["residual"] = json_number(s.fit.residual);
      j["points_used"] = s.fit.points_used;
      j["clamped"] = s.fit.clamped;
      Json pairs = Json::array();
      for (const auto& pt : s.pairs) {
        pairs.push_back({{"delta", json_number(pt.delta)}, {"ap", json_number(pt.ap)}, {"ratio", json_number(pt.ratio)}});
      }
      j["pairs"] = pairs;
      emit(resolve_out(g.out, "sharpness.json"), dump(j));
      if (!plot_path.empty()) {
        PlotSeries data{s.op, {}, {}, false}, line{"fit, slope " + format_double(s.fit.exponent), {}, {}, true};
        for (const auto& pt : s.pairs) {
          data.x.push_back(pt.ap);
          data.y.push_back(pt.ratio);
          line.x.push_back(pt.ap);
          line.y.push_back(std::exp(s.fit.intercept + s.fit.exponent * std::log(pt.ap)));
        }
        std::ostringstream svg;
        write_svg(svg, {data, line}, "[w]_Ap", "weak-type ratio");
        emit(plot_path, svg.str());
      }
      return kPass;
    };
  });

  auto* rubio = app.add_subcommand("rubio", "Rubio de Francia majorant R_p h");
  std::string seed_fn = "indicator";
  double p_r = 2, bound_Bp = 0;
  int terms = 0;
  rubio->add_option("--seed-fn", seed_fn, "'indicator' or a step-function CSV");
  rubio->add_option("--p", p_r);
  rubio->add_option("--K", terms, "series terms (default from config)");
  rubio->add_option("--bound", bound_Bp, "bound for ‖M‖_p (default 2p/(p-1))");
  rubio->callback([&] {
    action = [&] {
      RunConfig cfg = load_config(g);
      if (terms > 0) cfg.terms_K = terms;
      if (bound_Bp > 0) cfg.bound_Bp = bound_Bp;
      const StepFunction h = seed_fn == "indicator" ? StepFunction::indicator(0, 1) : load_csv(seed_fn);
      const RdFParams params = cfg.rdf(p_r);
      const Weight R = rubio_majorant(h, params);
      double gap = INFINITY;
      for (std::size_t c = 0; c < R.body().cells(); ++c) {
        gap = std::min(gap, R.body().values()[c] - h(0.5 * (R.body().cell_lo(c) + R.body().cell_hi(c))));
      }
      std::ostringstream csv;
      write_csv(csv, R.body());
      emit(resolve_out(g.out, "rubio.csv"), csv.str());
      Json j;
      j["weight"] = R.id();
      j["p"] = json_number(p_r);
      j["bound_Bp"] = json_number(params.bound());
      j["terms_K"] = params.terms_K;
      j["min_R_minus_h"] = json_number(gap);
      j["norm_ratio"] =
          json_number(lorentz_norm(R.body(), p_r, NormKind::strong) / lorentz_norm(h, p_r, NormKind::strong));
      j["a1_dyadic"] = json_number(ap_constant(R, 1.0, ApMode::dyadic).value);
      j["fingerprint"] = cfg.fingerprint();
      // the CSV owns stdout when no --out is given
      (g.out.empty() ? std::cerr : std::cout) << dump(j);
      return kPass;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }
  try {
    return action();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Errc::io_error:
        return kIo;
      case Errc::parse_error:
      case Errc::invalid_argument:
      case Errc::invalid_weight:
      case Errc::domain_error:
        return kUsage;
      default:
        return kCheckFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailure;
  }
}
