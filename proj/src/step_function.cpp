#include "weaklab/step_function.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include "weaklab/error.hpp"

namespace weaklab {

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  require(breakpoints_.size() >= 2, Errc::invalid_argument, "step function needs at least two breakpoints");
  require(values_.size() + 1 == breakpoints_.size(), Errc::invalid_argument,
          "step function needs exactly one value per cell");
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    require(std::isfinite(breakpoints_[i]), Errc::invalid_argument, "non-finite breakpoint");
    if (i > 0) {
      require(breakpoints_[i] > breakpoints_[i - 1], Errc::invalid_argument,
              "breakpoints must be strictly increasing");
    }
  }
  for (double v : values_) require(std::isfinite(v), Errc::invalid_argument, "non-finite cell value");
}

StepFunction StepFunction::indicator(double a, double b, double height) {
  require(a < b, Errc::invalid_argument, "indicator needs a < b");
  return StepFunction({a, b}, {height});
}

std::size_t StepFunction::cell_index(double x) const noexcept {
  if (!(x >= breakpoints_.front()) || !(x < breakpoints_.back())) return npos;
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

double StepFunction::operator()(double x) const noexcept {
  const std::size_t i = cell_index(x);
  return i == npos ? 0.0 : values_[i];
}

double StepFunction::integrate(double a, double b) const {
  require(std::isfinite(a) && std::isfinite(b), Errc::invalid_argument, "integration limits must be finite");
  if (a > b) return -integrate(b, a);
  const double lo = std::max(a, breakpoints_.front());
  const double hi = std::min(b, breakpoints_.back());
  if (!(lo < hi)) return 0.0;
  auto first = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), lo);
  std::size_t i = static_cast<std::size_t>(first - breakpoints_.begin()) - 1;
  double sum = 0.0;
  for (; i < values_.size() && breakpoints_[i] < hi; ++i) {
    const double l = std::max(lo, breakpoints_[i]);
    const double r = std::min(hi, breakpoints_[i + 1]);
    if (r > l) sum += values_[i] * (r - l);
  }
  return sum;
}

bool StepFunction::is_nonnegative() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0; });
}

bool StepFunction::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

StepFunction StepFunction::refined(std::span<const double> extra_nodes) const {
  std::vector<double> nodes = merge_nodes(breakpoints_, extra_nodes);
  std::vector<double> vals(nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) vals[i] = (*this)(nodes[i]);
  return StepFunction(std::move(nodes), std::move(vals));
}

StepFunction StepFunction::compacted() const {
  std::vector<double> bp{breakpoints_.front()};
  std::vector<double> vals{values_.front()};
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] == vals.back()) continue;
    bp.push_back(breakpoints_[i]);
    vals.push_back(values_[i]);
  }
  bp.push_back(breakpoints_.back());
  return StepFunction(std::move(bp), std::move(vals));
}

std::vector<double> merge_nodes(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

StepFunction map_values(const StepFunction& f, auto&& op) {
  std::vector<double> vals(f.values().begin(), f.values().end());
  for (double& v : vals) v = op(v);
  return StepFunction(std::vector<double>(f.breakpoints().begin(), f.breakpoints().end()), std::move(vals));
}

}  // namespace

StepFunction transform(const StepFunction& f, const Transform& kind) {
  return std::visit(
      [&](const auto& t) -> StepFunction {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, Abs>) {
          return map_values(f, [](double v) { return std::fabs(v); });
        } else if constexpr (std::is_same_v<T, Scale>) {
          return map_values(f, [c = t.c](double v) { return c * v; });
        } else if constexpr (std::is_same_v<T, Power>) {
          const double r = t.r;
          require(std::isfinite(r), Errc::invalid_argument, "power exponent must be finite");
          const bool integral = std::floor(r) == r;
          for (double v : f.values()) {
            if (v < 0 && !integral) fail(Errc::domain_error, "fractional power of a negative cell value");
            if (r < 0 && v == 0) fail(Errc::domain_error, "negative power of a zero cell inside the support");
          }
          return map_values(f, [r](double v) { return std::pow(v, r); });
        } else {
          const StepFunction& g = t.g;
          std::vector<double> nodes = merge_nodes(f.breakpoints(), g.breakpoints());
          std::vector<double> vals(nodes.size() - 1);
          for (std::size_t i = 0; i + 1 < nodes.size(); ++i) vals[i] = f(nodes[i]) + g(nodes[i]);
          return StepFunction(std::move(nodes), std::move(vals));
        }
      },
      kind);
}

StepFunction abs(const StepFunction& f) { return transform(f, Abs{}); }
StepFunction power(const StepFunction& f, double r) { return transform(f, Power{r}); }
StepFunction scale(const StepFunction& f, double c) { return transform(f, Scale{c}); }
StepFunction add(const StepFunction& f, const StepFunction& g) { return transform(f, Add{g}); }

StepFunction multiply(const StepFunction& f, const StepFunction& g) {
  std::vector<double> nodes = merge_nodes(f.breakpoints(), g.breakpoints());
  std::vector<double> vals(nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) vals[i] = f(nodes[i]) * g(nodes[i]);
  return StepFunction(std::move(nodes), std::move(vals));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text) {
  const char* begin = text.c_str();
  while (*begin == ' ' || *begin == '\t') ++begin;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin) fail(Errc::parse_error, "not a number: '" + text + "'");
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  if (*end != '\0') fail(Errc::parse_error, "trailing characters in number: '" + text + "'");
  return v;
}

void write_csv(std::ostream& out, const StepFunction& f) {
  out << "breakpoint,value\n";
  for (std::size_t i = 0; i < f.cells(); ++i) {
    out << format_double(f.breakpoints()[i]) << ',' << format_double(f.values()[i]) << '\n';
  }
  out << format_double(f.hi()) << ",\n";
}

StepFunction read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(Errc::parse_error, "empty step-function CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "breakpoint,value") fail(Errc::parse_error, "expected header 'breakpoint,value'");
  std::vector<double> bp;
  std::vector<double> vals;
  bool closed = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (closed) fail(Errc::parse_error, "rows after the closing breakpoint");
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(Errc::parse_error, "missing ',' in row '" + line + "'");
    bp.push_back(parse_double(line.substr(0, comma)));
    const std::string rest = line.substr(comma + 1);
    if (rest.empty()) {
      closed = true;
    } else {
      vals.push_back(parse_double(rest));
    }
  }
  if (!closed) fail(Errc::parse_error, "last row must have an empty value field");
  return StepFunction(std::move(bp), std::move(vals));
}

void save_csv(const std::string& path, const StepFunction& f) {
  std::ofstream out(path);
  if (!out) fail(Errc::io_error, "cannot write " + path);
  write_csv(out, f);
  if (!out) fail(Errc::io_error, "write failed for " + path);
}

StepFunction load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot read " + path);
  return read_csv(in);
}

}  // namespace weaklab
