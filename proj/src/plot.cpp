#include "weaklab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "weaklab/error.hpp"

namespace weaklab {

namespace {

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 80, kRight = 20, kTop = 20, kBottom = 60;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Range {
  int lo;
  int hi;  // decade exponents, hi - lo >= 2
};

Range decades(double mn, double mx) {
  int lo = static_cast<int>(std::floor(std::log10(mn)));
  int hi = static_cast<int>(std::ceil(std::log10(mx)));
  while (hi - lo < 2) {
    ++hi;
    if (hi - lo < 2) --lo;
  }
  return {lo, hi};
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

}  // namespace

void write_svg(std::ostream& out, const std::vector<PlotSeries>& series, const std::string& x_label,
               const std::string& y_label) {
  double xmn = INFINITY, xmx = -INFINITY, ymn = INFINITY, ymx = -INFINITY;
  for (const auto& s : series) {
    require(s.x.size() == s.y.size(), Errc::invalid_argument, "plot series needs equal x and y lengths");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0 && s.y[i] > 0 && std::isfinite(s.x[i]) && std::isfinite(s.y[i]))) continue;
      xmn = std::min(xmn, s.x[i]);
      xmx = std::max(xmx, s.x[i]);
      ymn = std::min(ymn, s.y[i]);
      ymx = std::max(ymx, s.y[i]);
    }
  }
  require(std::isfinite(xmn), Errc::insufficient_data, "nothing positive to plot");
  const Range rx = decades(xmn, xmx), ry = decades(ymn, ymx);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto X = [&](double x) { return kLeft + (std::log10(x) - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto Y = [&](double y) { return kTop + (1 - (std::log10(y) - ry.lo) / (ry.hi - ry.lo)) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = rx.lo; d <= rx.hi; ++d) {
    const double x = kLeft + double(d - rx.lo) / (rx.hi - rx.lo) * pw;
    out << "<line x1=\"" << fmt(x) << "\" y1=\"" << kTop + ph << "\" x2=\"" << fmt(x) << "\" y2=\"" << kTop + ph + 5
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(x) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int d = ry.lo; d <= ry.hi; ++d) {
    const double y = kTop + (1 - double(d - ry.lo) / (ry.hi - ry.lo)) * ph;
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fmt(y) << "\" x2=\"" << kLeft << "\" y2=\"" << fmt(y)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
      << escape(x_label) << "</text>\n";
  out << "<text x=\"20\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << kTop + ph / 2 << ")\">" << escape(y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "")
        << " points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0 && s.y[i] > 0 && std::isfinite(s.x[i]) && std::isfinite(s.y[i]))) continue;
      out << (first ? "" : " ") << fmt(X(s.x[i])) << "," << fmt(Y(s.y[i]));
      first = false;
    }
    out << "\"/>\n";
    out << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 16 + 14 * k << "\" fill=\"" << color << "\">"
        << escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
}

void plot_curves(std::ostream& out, const std::vector<NormCurve>& curves, const std::vector<ExponentFit>& fits) {
  const bool one_plus = !fits.empty() && fits.front().endpoint == Endpoint::one_plus;
  auto xv = [one_plus](double p) { return one_plus ? 1 / (p - 1) : p; };
  std::vector<PlotSeries> series;
  for (const auto& c : curves) {
    PlotSeries s{c.op, {}, c.norm, false};
    for (double p : c.p) s.x.push_back(xv(p));
    series.push_back(std::move(s));
    for (const auto& f : fits) {
      if (f.op != c.op || c.p.empty()) continue;
      PlotSeries line{c.op + " fit, exponent " + fmt(f.exponent), {}, {}, true};
      for (double p : {c.p.front(), c.p.back()}) {
        line.x.push_back(xv(p));
        line.y.push_back(std::exp(f.intercept + f.exponent * std::log(xv(p))));
      }
      series.push_back(std::move(line));
    }
  }
  write_svg(out, series, one_plus ? "1/(p-1)" : "p", "weak-type ratio N(p)");
}

}  // namespace weaklab
