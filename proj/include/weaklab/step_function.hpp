#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace weaklab {

/// Finitely supported piecewise-constant function on the real line.
///
/// Cell i is the half-open interval [e_i, e_{i+1}) and carries values[i].
/// Outside [e_0, e_n) the function is identically zero. Instances are
/// immutable once constructed.
class StepFunction {
 public:
  /// Throws invalid_argument unless breakpoints are finite, strictly
  /// increasing, at least two, and values has one entry per cell.
  StepFunction(std::vector<double> breakpoints, std::vector<double> values);

  /// height * indicator of [a, b).
  static StepFunction indicator(double a, double b, double height = 1.0);

  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t cells() const noexcept { return values_.size(); }

  double lo() const noexcept { return breakpoints_.front(); }
  double hi() const noexcept { return breakpoints_.back(); }
  double cell_lo(std::size_t i) const noexcept { return breakpoints_[i]; }
  double cell_hi(std::size_t i) const noexcept { return breakpoints_[i + 1]; }
  double cell_length(std::size_t i) const noexcept { return breakpoints_[i + 1] - breakpoints_[i]; }

  /// Right-continuous evaluation.
  double operator()(double x) const noexcept;

  /// Index of the cell containing x, or npos outside [lo, hi).
  std::size_t cell_index(double x) const noexcept;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Exact integral over [a, b]; a > b integrates with reversed sign.
  double integrate(double a, double b) const;

  bool is_nonnegative() const noexcept;
  bool is_zero() const noexcept;

  /// Same function on a refined grid (extra nodes inside [lo, hi] split cells,
  /// nodes outside extend the representation with zero cells).
  StepFunction refined(std::span<const double> extra_nodes) const;

  /// Drops interior breakpoints whose neighbouring cells carry equal values.
  StepFunction compacted() const;

  bool operator==(const StepFunction& other) const = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// Cellwise transforms.
struct Abs {};
struct Power {
  double r;
};
struct Scale {
  double c;
};
struct Add {
  StepFunction g;
};
using Transform = std::variant<Abs, Power, Scale, Add>;

/// Power(r): negative cell values need an integer r; r < 0 forbids zero cells.
/// The zero exterior always maps to zero.
StepFunction transform(const StepFunction& f, const Transform& kind);

StepFunction abs(const StepFunction& f);
StepFunction power(const StepFunction& f, double r);
StepFunction scale(const StepFunction& f, double c);
StepFunction add(const StepFunction& f, const StepFunction& g);
StepFunction multiply(const StepFunction& f, const StepFunction& g);

/// Sorted union of two node sets (exact duplicates removed).
std::vector<double> merge_nodes(std::span<const double> a, std::span<const double> b);

// CSV with header `breakpoint,value`; the last row has an empty value field.
// Numbers are written with 17 significant digits so that a read returns the
// identical doubles.
void write_csv(std::ostream& out, const StepFunction& f);
StepFunction read_csv(std::istream& in);
void save_csv(const std::string& path, const StepFunction& f);
StepFunction load_csv(const std::string& path);

/// "%.17g" formatting shared by every text output.
std::string format_double(double v);
double parse_double(const std::string& text);

}  // namespace weaklab
