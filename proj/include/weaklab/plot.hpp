#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "weaklab/asymptotics.hpp"

namespace weaklab {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

/// Log-log SVG: decade ticks with labels, at least two decades per axis.
/// Non-positive points are dropped.
void write_svg(std::ostream& out, const std::vector<PlotSeries>& series, const std::string& x_label,
               const std::string& y_label);

/// One polyline per curve against p (or 1/(p-1) when the fit is at one_plus),
/// with the fitted power law overlaid as a dashed line.
void plot_curves(std::ostream& out, const std::vector<NormCurve>& curves, const std::vector<ExponentFit>& fits);

}  // namespace weaklab
