#pragma once

#include <ostream>
#include <vector>

#include "fucik/spectral.hpp"

namespace fucik::cli {

struct PlotSpec {
  double alpha_max = 0.0;
  double beta_max = 0.0;
  int width = 640;
  int height = 640;
};

/// Standalone SVG of the given curves in the (alpha, beta) plane, clipped to
/// [0, alpha_max] x [0, beta_max], with the lines alpha = lambda1_m and
/// beta = lambda1_n.
void write_svg(std::ostream& os, const PlotSpec& spec, const std::vector<SpectrumCurve>& curves, double lambda1_m,
               double lambda1_n);

}  // namespace fucik::cli
