#include "weaklab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "weaklab/error.hpp"

namespace weaklab {

namespace {

using nlohmann::ordered_json;

ordered_json numeric_fields(const RunConfig& c) {
  ordered_json j;
  j["window_X"] = c.grid.window_X;
  j["min_scale"] = c.grid.min_scale;
  j["nodes_per_octave"] = c.grid.nodes_per_octave;
  j["quad_abs_tol"] = c.quad.abs_tol;
  j["quad_max_depth"] = c.quad.max_depth;
  j["c_H"] = c.c_H;
  j["delta"] = c.delta;
  j["bound_Bp"] = c.bound_Bp;
  j["terms_K"] = c.terms_K;
  j["seed"] = c.seed;
  j["corpus"] = c.corpus;
  return j;
}

std::pair<std::string, std::string> split_kind(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {text, ""};
  return {text.substr(0, colon), text.substr(colon + 1)};
}

// `k=v,k=v` into a map; values may not contain commas.
std::map<std::string, std::string> params(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail(Errc::parse_error, "expected key=value, got '" + item + "'");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

double take(std::map<std::string, std::string>& m, const std::string& key, const std::string& where) {
  const auto it = m.find(key);
  if (it == m.end()) fail(Errc::parse_error, where + " needs " + key + "=<value>");
  const double v = parse_double(it->second);
  m.erase(it);
  return v;
}

StepFunction take_seed(std::map<std::string, std::string>& m) {
  const auto it = m.find("seed");
  if (it == m.end()) return StepFunction::indicator(0, 1);
  const std::string s = it->second;
  m.erase(it);
  if (s == "indicator") return StepFunction::indicator(0, 1);
  return load_csv(s);
}

void no_leftovers(const std::map<std::string, std::string>& m, const std::string& where) {
  if (!m.empty()) fail(Errc::parse_error, where + ": unknown parameter '" + m.begin()->first + "'");
}

}  // namespace

void RunConfig::validate() const {
  weaklab::validate(grid);
  require(quad.abs_tol > 0 && quad.max_depth > 0, Errc::invalid_argument, "quadrature tolerances must be positive");
  require(c_H > 0 && std::isfinite(c_H), Errc::invalid_argument, "c_H must be positive");
  require(delta > 0 && delta < 1, Errc::invalid_argument, "delta must lie in (0, 1)");
  require(bound_Bp >= 0 && std::isfinite(bound_Bp), Errc::invalid_argument, "bound_Bp must be >= 0 (0 = 2p/(p-1))");
  require(terms_K >= 1, Errc::invalid_argument, "terms_K must be >= 1");
  require(corpus >= 1 && corpus <= 10000, Errc::invalid_argument, "corpus must be in [1, 10000]");
  require(jobs >= 1, Errc::invalid_argument, "jobs must be >= 1");
}

std::string RunConfig::to_json() const {
  ordered_json j = numeric_fields(*this);
  j["out_dir"] = out_dir;
  j["jobs"] = jobs;
  return j.dump(2);
}

RunConfig RunConfig::from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    fail(Errc::parse_error, std::string("config is not valid JSON: ") + e.what());
  }
  require(j.is_object(), Errc::parse_error, "config must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "window_X") c.grid.window_X = v.get<double>();
      else if (key == "min_scale") c.grid.min_scale = v.get<double>();
      else if (key == "nodes_per_octave") c.grid.nodes_per_octave = v.get<int>();
      else if (key == "quad_abs_tol") c.quad.abs_tol = v.get<double>();
      else if (key == "quad_max_depth") c.quad.max_depth = v.get<unsigned>();
      else if (key == "c_H") c.c_H = v.get<double>();
      else if (key == "delta") c.delta = v.get<double>();
      else if (key == "bound_Bp") c.bound_Bp = v.get<double>();
      else if (key == "terms_K") c.terms_K = v.get<int>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "corpus") c.corpus = v.get<int>();
      else if (key == "out_dir") c.out_dir = v.get<std::string>();
      else if (key == "jobs") c.jobs = v.get<int>();
      else fail(Errc::parse_error, "unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("config value has the wrong type: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunConfig::fingerprint() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(numeric_fields(*this).dump())));
  return buf;
}

EvalOptions RunConfig::eval() const {
  EvalOptions o;
  o.grid = grid;
  o.quad = quad;
  o.jobs = jobs;
  o.seed = seed;
  o.fingerprint = fingerprint();
  return o;
}

RdFParams RunConfig::rdf(double p) const {
  RdFParams r;
  r.p = p;
  r.bound_Bp = bound_Bp;
  r.terms_K = terms_K;
  r.grid = grid;
  return r;
}

Weight parse_weight(const std::string& text, const RunConfig& cfg) {
  const auto [kind, rest] = split_kind(text);
  if (kind == "const") {
    const double c = rest.empty() ? 1.0 : parse_double(rest);
    return Weight::constant(c);
  }
  auto m = params(rest);
  if (kind == "power") {
    const double a = take(m, "a", "power weight");
    no_leftovers(m, "power weight");
    return Weight::power(a, cfg.grid.window_X);
  }
  if (kind == "step") {
    const auto it = m.find("file");
    if (it == m.end()) fail(Errc::parse_error, "step weight needs file=<csv>");
    const std::string path = it->second;
    m.erase(it);
    no_leftovers(m, "step weight");
    return Weight::step(load_csv(path), "step:file=" + path);
  }
  if (kind == "rdf") {
    const StepFunction seed = take_seed(m);
    const double p = take(m, "p", "rdf weight");
    no_leftovers(m, "rdf weight");
    return rubio_majorant(seed, cfg.rdf(p));
  }
  if (kind == "primal" || kind == "dual") {
    const StepFunction seed = take_seed(m);
    const double p = take(m, "p", kind + " weight");
    const double p0 = take(m, "p0", kind + " weight");
    no_leftovers(m, kind + " weight");
    return extrapolation_weight(seed, p, p0, kind == "primal" ? Direction::primal : Direction::dual, cfg.rdf(p))
        .weight;
  }
  fail(Errc::parse_error, "unknown weight '" + text + "'");
}

}  // namespace weaklab
