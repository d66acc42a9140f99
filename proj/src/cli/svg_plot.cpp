#include "ordcif/cli/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ordcif::cli {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// 1, 2 or 5 times a power of ten, giving roughly `target` ticks over span.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string render_cifs_svg(const CifSet& cifs, double upper, const std::string& title) {
  const double x_max = upper > 0.0 ? upper : 1.0;
  double top = 0.0;
  for (const auto& f : cifs.cifs) {
    for (double v : f.values()) top = std::max(top, v);
  }
  const double y_max = std::clamp(std::ceil(top * 10.0 + 1e-9) / 10.0, 0.1, 1.0);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double t) { return kLeft + plot_w * std::min(t, x_max) / x_max; };
  auto py = [&](double v) { return kTop + plot_h * (1.0 - v / y_max); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

  // axes
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(kLeft + plot_w)
      << "\" y2=\"" << num(py(0)) << "\"/>\n";
  svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(kLeft)
      << "\" y2=\"" << num(kTop) << "\"/>\n";
  const double xs = nice_step(x_max, 6);
  for (double t = 0.0; t <= x_max * (1 + 1e-12); t += xs) {
    svg << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(px(t))
        << "\" y2=\"" << num(py(0) + 5) << "\"/>\n";
  }
  const double ys = nice_step(y_max, 5);
  for (double v = 0.0; v <= y_max * (1 + 1e-12); v += ys) {
    svg << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(v)) << "\" x2=\"" << num(kLeft)
        << "\" y2=\"" << num(py(v)) << "\"/>\n";
  }
  svg << "</g>\n";

  svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double t = 0.0; t <= x_max * (1 + 1e-12); t += xs) {
    svg << "<text x=\"" << num(px(t)) << "\" y=\"" << num(py(0) + 18) << "\" text-anchor=\"middle\">"
        << tick_label(t) << "</text>\n";
  }
  for (double v = 0.0; v <= y_max * (1 + 1e-12); v += ys) {
    svg << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(v) + 4) << "\" text-anchor=\"end\">"
        << tick_label(std::round(v * 1e6) / 1e6) << "</text>\n";
  }
  svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 15)
      << "\" text-anchor=\"middle\">time</text>\n";
  svg << "<text x=\"18\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << num(kTop + plot_h / 2) << ")\">cumulative incidence</text>\n";
  svg << "</g>\n";

  for (int j = 1; j <= cifs.k; ++j) {
    const StepFunction& f = cifs.cif(j);
    const char* colour = kPalette[static_cast<std::size_t>(j - 1) % kPalette.size()];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    double level = f.initial_value();
    svg << num(px(0)) << ',' << num(py(level));
    for (std::size_t m = 0; m < f.size(); ++m) {
      const double t = f.knots()[m];
      if (t > x_max) break;
      svg << ' ' << num(px(t)) << ',' << num(py(level));
      level = f.values()[m];
      svg << ' ' << num(px(t)) << ',' << num(py(level));
    }
    svg << ' ' << num(px(x_max)) << ',' << num(py(level)) << "\"/>\n";
  }

  svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (int j = 1; j <= cifs.k; ++j) {
    const double y = kTop + 10 + 20.0 * (j - 1);
    const char* colour = kPalette[static_cast<std::size_t>(j - 1) % kPalette.size()];
    svg << "<rect x=\"" << num(kWidth - kRight + 20) << "\" y=\"" << num(y - 4) << "\" width=\"24\" height=\"3\" fill=\""
        << colour << "\"/>\n";
    svg << "<text x=\"" << num(kWidth - kRight + 50) << "\" y=\"" << num(y + 1) << "\">cause " << j << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace ordcif::cli
