#include "weaklab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "parallel.hpp"
#include "weaklab/error.hpp"
#include "weaklab/norms.hpp"
#include "weaklab/sparse.hpp"

namespace weaklab {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

int parse_int(const std::string& s) {
  const double v = parse_double(s);
  if (v != std::floor(v) || std::fabs(v) > 1e9) fail(Errc::parse_error, "not an integer: '" + s + "'");
  return static_cast<int>(v);
}

// `key=value` or a bare flag.
std::pair<std::string, std::string> key_value(const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos) return {item, ""};
  return {item.substr(0, eq), item.substr(eq + 1)};
}

int dyadic_depth(const GridSpec& g) {
  const int d = static_cast<int>(std::ceil(std::log2(2 * g.window_X / g.min_scale))) + 2;
  return std::clamp(d, 1, DyadicLattice::kMaxDepth);
}

double factorial(int n) {
  double r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

OperatorId OperatorId::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::vector<std::string> args =
      colon == std::string::npos ? std::vector<std::string>{} : split(text.substr(colon + 1), ',');
  OperatorId op;
  auto unknown = [&](const std::string& item) {
    fail(Errc::parse_error, "unknown argument '" + item + "' for operator '" + head + "'");
  };
  if (head == "maximal") {
    op.tag = Tag::maximal;
    for (const auto& item : args) {
      const auto [k, v] = key_value(item);
      if (k == "uncentered" && v.empty()) op.dyadic = false;
      else if (k == "dyadic" && v.empty()) op.dyadic = true;
      else if (k == "eps") op.eps = parse_double(v);
      else unknown(item);
    }
    if (!(op.eps > 0 && op.eps <= 1)) fail(Errc::parse_error, "eps must be in (0, 1]");
  } else if (head == "iterated-maximal") {
    op.tag = Tag::iterated_maximal;
    for (const auto& item : args) {
      const auto [k, v] = key_value(item);
      if (k == "k") op.k = parse_int(v);
      else if (k == "dyadic" && v.empty()) op.dyadic = true;
      else if (k == "uncentered" && v.empty()) op.dyadic = false;
      else unknown(item);
    }
    if (op.k < 1) fail(Errc::parse_error, "k must be >= 1");
  } else if (head == "hilbert" || head == "commutator-log-hilbert") {
    op.tag = head == "hilbert" ? Tag::hilbert : Tag::commutator_log_hilbert;
    for (const auto& item : args) {
      const auto [k, v] = key_value(item);
      if (k == "c_H") op.c_H = parse_double(v);
      else unknown(item);
    }
    if (!(op.c_H > 0)) fail(Errc::parse_error, "c_H must be positive");
  } else if (head == "adjoint-hardy" || head == "identity") {
    op.tag = head == "identity" ? Tag::identity : Tag::adjoint_hardy;
    if (!args.empty()) unknown(args.front());
  } else if (head == "sharp") {
    op.tag = Tag::sharp_maximal;
    for (const auto& item : args) {
      const auto [k, v] = key_value(item);
      if (k == "delta") op.delta = parse_double(v);
      else if (k == "dyadic" && v.empty()) op.dyadic = true;
      else if (k == "uncentered" && v.empty()) op.dyadic = false;
      else unknown(item);
    }
    if (!(op.delta > 0 && op.delta <= 1)) fail(Errc::parse_error, "delta must be in (0, 1]");
  } else if (head == "sparse") {
    op.tag = Tag::sparse;
    for (const auto& item : args) {
      const auto [k, v] = key_value(item);
      if ((k == "tower" || k == "single") && v.empty()) op.sparse_kind = k;
      else if (k == "depth") op.sparse_depth = parse_int(v);
      else unknown(item);
    }
    if (op.sparse_depth < 0 || op.sparse_depth > 51) fail(Errc::parse_error, "sparse depth must be in [0, 51]");
    if (op.sparse_kind == "single" && op.sparse_depth > 20) fail(Errc::parse_error, "single-scale depth must be <= 20");
  } else {
    fail(Errc::parse_error, "unknown operator '" + text + "'");
  }
  return op;
}

std::string OperatorId::str() const {
  switch (tag) {
    case Tag::maximal:
      return std::string("maximal:") + (dyadic ? "dyadic" : "uncentered") +
             (eps != 1.0 ? ",eps=" + format_double(eps) : "");
    case Tag::iterated_maximal:
      return "iterated-maximal:k=" + std::to_string(k) + (dyadic ? ",dyadic" : "");
    case Tag::hilbert:
      return c_H == std::numbers::inv_pi ? "hilbert" : "hilbert:c_H=" + format_double(c_H);
    case Tag::commutator_log_hilbert:
      return c_H == std::numbers::inv_pi ? "commutator-log-hilbert" : "commutator-log-hilbert:c_H=" + format_double(c_H);
    case Tag::adjoint_hardy:
      return "adjoint-hardy";
    case Tag::sharp_maximal:
      return "sharp:delta=" + format_double(delta) + (dyadic ? ",dyadic" : "");
    case Tag::sparse:
      return "sparse:" + sparse_kind + ",depth=" + std::to_string(sparse_depth);
    case Tag::identity:
      return "identity";
  }
  return "identity";
}

StepFunction apply_operator(const OperatorId& op, const StepFunction& f, const EvalOptions& opts) {
  validate(opts.grid);
  using Tag = OperatorId::Tag;
  const double X = opts.grid.window_X;
  auto lattice = [&] { return DyadicLattice(-X, X, dyadic_depth(opts.grid)); };
  auto sampled = [&](auto&& eval) {
    const std::vector<double> nodes = window_nodes(opts.grid, f.breakpoints());
    std::vector<double> vals(nodes.size() - 1);
    detail::parallel_for(vals.size(), opts.jobs, [&](std::size_t i) { vals[i] = eval(nodes[i], nodes[i + 1]); });
    return StepFunction(nodes, std::move(vals));
  };
  switch (op.tag) {
    case Tag::identity:
      return f;
    case Tag::maximal:
      if (op.dyadic) return maximal_dyadic(f, lattice(), op.eps);
      return maximal(f, op.eps, opts.grid);
    case Tag::iterated_maximal:
      if (op.dyadic) return iterate_maximal_dyadic(f, op.k, lattice());
      return iterate_maximal(f, op.k, opts.grid);
    case Tag::sharp_maximal:
      if (op.dyadic) return sharp_maximal_dyadic(f, op.delta, lattice());
      return sharp_maximal(f, op.delta, window_nodes(opts.grid, f.breakpoints()));
    case Tag::hilbert:
      return sampled([&](double a, double b) { return hilbert_step(f, op.c_H, 0.5 * (a + b)); });
    case Tag::commutator_log_hilbert:
      return sampled([&](double a, double b) { return commutator_log_hilbert(f, op.c_H, 0.5 * (a + b), opts.quad); });
    case Tag::adjoint_hardy:
      for (std::size_t i = 0; i < f.cells(); ++i) {
        require(f.values()[i] == 0.0 || f.cell_lo(i) >= 0.0, Errc::invalid_argument,
                "adjoint Hardy operator needs input supported in [0, inf)");
      }
      return sampled([&](double a, double b) { return a < 0 ? 0.0 : adjoint_hardy(f, 0.5 * (a + b)); });
    case Tag::sparse: {
      const DyadicLattice L(0.0, 1.0, op.sparse_depth + 1);
      const SparseFamily fam =
          op.sparse_kind == "single" ? single_scale_family(L, op.sparse_depth) : tower_family(L, op.sparse_depth);
      return apply_sparse(fam, f);
    }
  }
  fail(Errc::invalid_argument, "unhandled operator");
}

std::optional<ProfileSet> indicator_profile(const OperatorId& op) {
  using Tag = OperatorId::Tag;
  switch (op.tag) {
    case Tag::hilbert:
      return ProfileSet{{Profile::hilbert_indicator(0, 1, op.c_H), 1, 1}};
    case Tag::adjoint_hardy:
      return ProfileSet{{Profile::adjoint_hardy_indicator(0, 1), 1, 1}};
    case Tag::iterated_maximal:
      // M^k χ(±x) ≥ (ln x)^{k-1}/((k-1)! x) for x > e, by averaging over [0, x] and [-x, x]
      if (op.k < 2 || op.dyadic) return std::nullopt;
      return ProfileSet{{Profile::maximal_tail(op.k), 2, 1 / factorial(op.k - 1)}};
    case Tag::commutator_log_hilbert:
      // (c_H/2)(ln 1/x)^2 on (0, 1) and c_H ln|x|/|x| on |x| > e
      return ProfileSet{{Profile::commutator_small_x(op.c_H / 2, 1.0), 1, 1},
                        {Profile::commutator_tail(), 2, op.c_H}};
    default:
      return std::nullopt;
  }
}

std::vector<FamilyMember> make_family(const std::string& family, std::uint64_t seed) {
  if (family == "indicator" || family == "indicator-grid") return {{"indicator", StepFunction::indicator(0, 1)}};
  const auto colon = family.find(':');
  if (family.substr(0, colon) == "steps") {
    int n = 8;
    if (colon != std::string::npos) {
      const auto [k, v] = key_value(family.substr(colon + 1));
      if (k != "n") fail(Errc::parse_error, "steps family takes n=<count>");
      n = parse_int(v);
    }
    require(n >= 1 && n <= 1000, Errc::invalid_argument, "steps family size must be in [1, 1000]");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> cells(1, 8);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    std::vector<FamilyMember> out;
    for (int m = 0; m < n; ++m) {
      const int c = cells(rng);
      std::vector<double> bp(c + 1), vals(c);
      for (int i = 0; i <= c; ++i) bp[i] = static_cast<double>(i) / c;
      for (double& v : vals) v = val(rng);
      vals[0] = std::max(vals[0], 0.05);
      out.push_back({"steps#" + std::to_string(m), StepFunction(bp, vals)});
    }
    return out;
  }
  fail(Errc::parse_error, "unknown test-function family '" + family + "'");
}

NormCurve sample_norm_curve(const OperatorId& op, const std::string& family, const Weight& w,
                            const std::vector<double>& p_grid, const EvalOptions& opts) {
  require(!p_grid.empty(), Errc::invalid_argument, "empty p grid");
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    require(p_grid[i] > 1 && std::isfinite(p_grid[i]), Errc::invalid_argument, "p values must be finite and > 1");
    if (i > 0) require(p_grid[i] > p_grid[i - 1], Errc::invalid_argument, "p grid must be strictly increasing");
  }
  const std::vector<FamilyMember> members = make_family(family, opts.seed);

  NormCurve curve;
  curve.op = op.str();
  curve.family = family;
  curve.weight = w.id();
  curve.p = p_grid;
  curve.norm.assign(p_grid.size(), 0.0);
  curve.member.assign(p_grid.size(), "");
  curve.fingerprint = opts.fingerprint;

  const auto profile = indicator_profile(op);
  if (opts.use_profiles && family == "indicator" && w.kind() == WeightKind::constant && profile) {
    // ‖χ_(0,1)‖_p = 1 and a constant weight cancels in the ratio
    curve.method = "profile";
    detail::parallel_for(p_grid.size(), opts.jobs,
                         [&](std::size_t i) { curve.norm[i] = profile_weak_norm(*profile, p_grid[i]); });
    std::fill(curve.member.begin(), curve.member.end(), members.front().id);
  } else {
    curve.method = "grid";
    for (const auto& m : members) {
      const StepFunction Tf = apply_operator(op, m.f, opts);
      for (std::size_t i = 0; i < p_grid.size(); ++i) {
        const double den = lorentz_norm(m.f, w, p_grid[i], NormKind::strong);
        if (!(den > 0)) continue;
        const double r = lorentz_norm(Tf, w, p_grid[i], NormKind::weak) / den;
        if (r > curve.norm[i]) {
          curve.norm[i] = r;
          curve.member[i] = m.id;
        }
      }
    }
  }
  for (double n : curve.norm) {
    require(n > 0 && std::isfinite(n), Errc::invalid_argument, "norm ratio is not positive and finite");
  }
  return curve;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) fail(Errc::parse_error, "unterminated quote in CSV row");
  out.push_back(cur);
  return out;
}

}  // namespace

void write_curves_csv(std::ostream& out, const std::vector<NormCurve>& curves) {
  out << "operator,family,weight,p,norm\n";
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.p.size(); ++i) {
      out << csv_field(c.op) << ',' << csv_field(c.family) << ',' << csv_field(c.weight) << ','
          << format_double(c.p[i]) << ',' << format_double(c.norm[i]) << '\n';
    }
  }
}

std::vector<NormCurve> read_curves_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(Errc::parse_error, "empty curve CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "operator,family,weight,p,norm") fail(Errc::parse_error, "expected header 'operator,family,weight,p,norm'");
  std::vector<NormCurve> curves;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto row = csv_row(line);
    if (row.size() != 5) fail(Errc::parse_error, "curve CSV rows need 5 fields: '" + line + "'");
    NormCurve* c = nullptr;
    for (auto& existing : curves) {
      if (existing.op == row[0] && existing.family == row[1] && existing.weight == row[2]) c = &existing;
    }
    if (!c) {
      curves.push_back({row[0], row[1], row[2], {}, {}, {}, "", ""});
      c = &curves.back();
    }
    c->p.push_back(parse_double(row[3]));
    c->norm.push_back(parse_double(row[4]));
    c->member.emplace_back();
  }
  return curves;
}

Endpoint parse_endpoint(const std::string& text) {
  if (text == "one_plus" || text == "one-plus") return Endpoint::one_plus;
  if (text == "infinity") return Endpoint::infinity;
  fail(Errc::parse_error, "endpoint must be one_plus or infinity, got '" + text + "'");
}

std::string to_string(Endpoint e) { return e == Endpoint::one_plus ? "one_plus" : "infinity"; }

ExponentFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), Errc::invalid_argument, "fit needs paired samples");
  if (x.size() < 3) fail(Errc::insufficient_data, "fit needs at least 3 points, got " + std::to_string(x.size()));
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(x[i] > 0 && y[i] > 0 && std::isfinite(x[i]) && std::isfinite(y[i]), Errc::invalid_argument,
            "log-log fit needs positive finite samples");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0)) fail(Errc::insufficient_variation, "fit abscissae are all equal");
  ExponentFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  for (std::size_t i = 0; i < n; ++i) {
    fit.residual = std::max(fit.residual, std::fabs(ly[i] - (fit.intercept + fit.exponent * lx[i])));
  }
  fit.points_used = static_cast<int>(n);
  return fit;
}

ExponentFit fit_exponent(const NormCurve& curve, Endpoint endpoint, int tail) {
  require(curve.p.size() == curve.norm.size(), Errc::invalid_argument, "curve has mismatched columns");
  std::vector<std::pair<double, double>> s;
  for (std::size_t i = 0; i < curve.p.size(); ++i) s.emplace_back(curve.p[i], curve.norm[i]);
  std::sort(s.begin(), s.end());
  const std::size_t use = tail <= 0 ? s.size() : std::min<std::size_t>(s.size(), static_cast<std::size_t>(tail));
  if (tail > 0 && static_cast<std::size_t>(tail) > s.size()) {
    fail(Errc::insufficient_data, "tail of " + std::to_string(tail) + " exceeds the " + std::to_string(s.size()) +
                                      " samples");
  }
  if (endpoint == Endpoint::infinity) s.erase(s.begin(), s.end() - static_cast<std::ptrdiff_t>(use));
  else s.resize(use);
  std::vector<double> x, y;
  for (const auto& [p, n] : s) {
    require(p > 1, Errc::invalid_argument, "fit needs p > 1");
    // -log(p-1) = log(1/(p-1))
    x.push_back(endpoint == Endpoint::infinity ? p : 1 / (p - 1));
    y.push_back(n);
  }
  ExponentFit fit = fit_loglog(x, y);
  fit.op = curve.op;
  fit.endpoint = endpoint;
  if (fit.exponent < 0) {
    fit.exponent = 0;
    fit.clamped = true;
  }
  return fit;
}

BetaBound beta_lower(double alpha, double gamma, double p0) {
  require(p0 > 1 && std::isfinite(p0), Errc::invalid_argument, "beta bound needs p0 > 1");
  require(alpha >= 0 && gamma >= 0, Errc::invalid_argument, "alpha and gamma must be >= 0");
  return {p0, alpha, gamma, std::max(gamma, alpha / (p0 - 1))};
}

std::vector<double> parse_p_grid(const std::string& text) {
  const auto parts = split(text, ':');
  const std::string& kind = parts[0];
  std::vector<double> out;
  if (kind == "geometric") {
    if (parts.size() != 4) fail(Errc::parse_error, "geometric grid is geometric:lo:hi:n");
    const double lo = parse_double(parts[1]), hi = parse_double(parts[2]);
    const int n = parse_int(parts[3]);
    if (!(lo > 1 && hi > lo && n >= 2 && n <= 100000)) fail(Errc::parse_error, "geometric grid needs 1 < lo < hi, n >= 2");
    for (int i = 0; i < n; ++i) out.push_back(i == n - 1 ? hi : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  } else if (kind == "list") {
    if (parts.size() != 2) fail(Errc::parse_error, "list grid is list:a,b,...");
    for (const auto& v : split(parts[1], ',')) out.push_back(parse_double(v));
  } else if (kind == "one-plus" || kind == "pow2") {
    if (parts.size() != 3) fail(Errc::parse_error, kind + " grid is " + kind + ":j0:j1");
    const int j0 = parse_int(parts[1]), j1 = parse_int(parts[2]);
    if (j0 > j1 || j1 - j0 > 1000 || std::abs(j0) > 1000 || std::abs(j1) > 1000) fail(Errc::parse_error, "bad exponent range");
    if (kind == "pow2") {
      for (int j = j0; j <= j1; ++j) out.push_back(std::ldexp(1.0, j));
    } else {
      for (int j = j1; j >= j0; --j) out.push_back(1 + std::ldexp(1.0, -j));
    }
  } else {
    fail(Errc::parse_error, "unknown p grid '" + text + "'");
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] > 1) || (i > 0 && !(out[i] > out[i - 1]))) {
      fail(Errc::parse_error, "p grid must be strictly increasing with p > 1");
    }
  }
  return out;
}

std::vector<double> default_one_plus_grid() { return parse_p_grid("one-plus:2:10"); }
std::vector<double> default_infinity_grid() { return parse_p_grid("pow2:3:9"); }

StepFunction sharpness_test_function(double delta, double min_scale, int nodes_per_octave) {
  require(delta > 0 && delta < 1, Errc::invalid_argument, "sharpness delta must be in (0, 1)");
  GridSpec g{1.0, min_scale, nodes_per_octave};
  validate(g);
  const std::vector<double> nodes = positive_log_grid(g, true);
  std::vector<double> vals(nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double u = nodes[i], v = nodes[i + 1];
    // exact cell average of x^{δ-1}
    const double mass = u == 0.0 ? std::pow(v, delta) / delta
                                 : std::pow(u, delta) * std::expm1(delta * std::log(v / u)) / delta;
    vals[i] = mass / (v - u);
  }
  return StepFunction(nodes, vals);
}

SharpnessResult sharpness_probe(const OperatorId& op, double p, const SharpnessOptions& opts) {
  require(p > 1 && std::isfinite(p), Errc::invalid_argument, "sharpness probe needs p > 1");
  require(opts.deltas.size() >= 3, Errc::insufficient_data, "sharpness probe needs at least 3 deltas");
  EvalOptions eval = opts.eval;
  eval.grid = GridSpec{opts.window_X, opts.min_scale, opts.nodes_per_octave};
  SharpnessResult res;
  res.op = op.str();
  res.p = p;
  res.pairs.resize(opts.deltas.size());
  for (std::size_t i = 0; i < opts.deltas.size(); ++i) {
    const double delta = opts.deltas[i];
    const Weight w = Weight::power((1 - delta) * (p - 1), opts.window_X);
    const ApResult ap = ap_constant(w, p, ApMode::bruteforce, opts.ap);
    require(ap.finite, Errc::invalid_argument, "sharpness family has an infinite A_p constant");
    const StepFunction f = sharpness_test_function(delta, opts.min_scale, opts.nodes_per_octave);
    const StepFunction Tf = apply_operator(op, f, eval);
    const double ratio = lorentz_norm(Tf, w, p, NormKind::weak) / lorentz_norm(f, w, p, NormKind::strong);
    res.pairs[i] = {delta, ap.value, ratio};
  }
  double lo = INFINITY, hi = 0;
  std::vector<double> x, y;
  for (const auto& pt : res.pairs) {
    lo = std::min(lo, pt.ap);
    hi = std::max(hi, pt.ap);
    x.push_back(pt.ap);
    y.push_back(pt.ratio);
  }
  if (!(hi > lo * (1 + 1e-9))) fail(Errc::insufficient_variation, "A_p constant does not vary across the family");
  res.fit = fit_loglog(x, y);
  res.fit.op = res.op;
  if (res.fit.exponent < 0) {
    res.fit.exponent = 0;
    res.fit.clamped = true;
  }
  return res;
}

}  // namespace weaklab
