#include "plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>

namespace fucik::cli {

namespace {

constexpr double kLeft = 64;
constexpr double kRight = 16;
constexpr double kTop = 16;
constexpr double kBottom = 48;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double tick_step(double range) {
  const double raw = range / 5;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double f : {1.0, 2.0, 5.0}) {
    if (f * mag >= raw) return f * mag;
  }
  return 10 * mag;
}

using Point = std::pair<double, double>;

// Liang-Barsky clip of segment a-b to [0, ax] x [0, by].
std::optional<std::pair<Point, Point>> clip(Point a, Point b, double ax, double by) {
  const double dx = b.first - a.first;
  const double dy = b.second - a.second;
  double t0 = 0.0;
  double t1 = 1.0;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.first, ax - a.first, a.second, by - a.second};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0) return std::nullopt;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
    if (t0 > t1) return std::nullopt;
  }
  return std::pair{Point{a.first + t0 * dx, a.second + t0 * dy}, Point{a.first + t1 * dx, a.second + t1 * dy}};
}

}  // namespace

void write_svg(std::ostream& os, const PlotSpec& spec, const std::vector<SpectrumCurve>& curves, double lambda1_m,
               double lambda1_n) {
  const double w = spec.width - kLeft - kRight;
  const double h = spec.height - kTop - kBottom;
  auto px = [&](double alpha) { return kLeft + alpha / spec.alpha_max * w; };
  auto py = [&](double beta) { return kTop + h - beta / spec.beta_max * h; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
     << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect class=\"frame\" x=\"" << fixed(kLeft) << "\" y=\"" << fixed(kTop) << "\" width=\"" << fixed(w)
     << "\" height=\"" << fixed(h) << "\" fill=\"none\" stroke=\"black\"/>\n";

  const double sa = tick_step(spec.alpha_max);
  for (int i = 0; i * sa <= spec.alpha_max * (1 + 1e-12); ++i) {
    const double x = px(i * sa);
    os << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(kTop + h) << "\" x2=\"" << fixed(x) << "\" y2=\""
       << fixed(kTop + h + 5) << "\" stroke=\"black\"/>";
    os << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(kTop + h + 18) << "\" text-anchor=\"middle\">"
       << label(i * sa) << "</text>\n";
  }
  const double sb = tick_step(spec.beta_max);
  for (int i = 0; i * sb <= spec.beta_max * (1 + 1e-12); ++i) {
    const double y = py(i * sb);
    os << "<line x1=\"" << fixed(kLeft - 5) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(kLeft) << "\" y2=\""
       << fixed(y) << "\" stroke=\"black\"/>";
    os << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(y + 4) << "\" text-anchor=\"end\">" << label(i * sb)
       << "</text>\n";
  }
  os << "<text x=\"" << fixed(kLeft + w / 2) << "\" y=\"" << fixed(spec.height - 8.0)
     << "\" text-anchor=\"middle\">alpha</text>\n";
  os << "<text x=\"14\" y=\"" << fixed(kTop + h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
     << fixed(kTop + h / 2) << ")\">beta</text>\n";

  if (lambda1_m <= spec.alpha_max) {
    os << "<line class=\"trivial\" x1=\"" << fixed(px(lambda1_m)) << "\" y1=\"" << fixed(kTop) << "\" x2=\""
       << fixed(px(lambda1_m)) << "\" y2=\"" << fixed(kTop + h) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  }
  if (lambda1_n <= spec.beta_max) {
    os << "<line class=\"trivial\" x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(py(lambda1_n)) << "\" x2=\""
       << fixed(kLeft + w) << "\" y2=\"" << fixed(py(lambda1_n)) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  }

  for (const SpectrumCurve& c : curves) {
    const char* colour = kPalette[static_cast<std::size_t>(c.k - 1) % kPalette.size()];
    std::vector<std::vector<Point>> runs;
    for (std::size_t i = 1; i < c.points.size(); ++i) {
      const Point a{c.points[i - 1].alpha, c.points[i - 1].beta};
      const Point b{c.points[i].alpha, c.points[i].beta};
      const auto seg = clip(a, b, spec.alpha_max, spec.beta_max);
      if (!seg) continue;
      if (runs.empty() || runs.back().back() != seg->first) runs.push_back({seg->first});
      runs.back().push_back(seg->second);
    }
    for (const auto& run : runs) {
      os << "<polyline class=\"curve\" data-k=\"" << c.k << "\" data-sign=\"" << to_char(c.sign)
         << "\" fill=\"none\" stroke=\"" << colour << '"';
      if (c.sign == Sign::Minus) os << " stroke-dasharray=\"6 3\"";
      os << " points=\"";
      for (std::size_t i = 0; i < run.size(); ++i) {
        os << (i ? " " : "") << fixed(px(run[i].first)) << ',' << fixed(py(run[i].second));
      }
      os << "\"/>\n";
    }
  }
  os << "</svg>\n";
}

}  // namespace fucik::cli
