#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "setopt/bench.hpp"
#include "setopt/errors.hpp"

namespace setopt {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 60, kRight = 150, kTop = 40, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};

std::string fmt(const char* pattern, double a)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

std::string escape(const std::string& text)
{
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string profile_svg(const ProfileSet& profile, const std::string& title)
{
  if (profile.curves.empty()) throw Error("profile has no curves to draw");
  double log_max = 1.0;
  for (const auto& c : profile.curves)
    for (const auto& [tau, rho] : c.steps) log_max = std::max(log_max, std::log2(tau));
  log_max = std::ceil(log_max * 1.05 * 4.0) / 4.0;

  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  auto px = [&](double log_tau) { return kLeft + plot_w * log_tau / log_max; };
  auto py = [&](double rho) { return kTop + plot_h * (1.0 - rho); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" viewBox=\"0 0 640 420\">\n";
  svg += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt("%.1f", kLeft + plot_w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
         escape(title) + "</text>\n";
  svg += "<g stroke=\"#bbbbbb\" stroke-width=\"0.5\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = py(i / 4.0);
    svg += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", y) + "\" x2=\"" + fmt("%.2f", kLeft + plot_w) +
           "\" y2=\"" + fmt("%.2f", y) + "\"/>\n";
  }
  svg += "</g>\n";
  svg += "<rect x=\"" + fmt("%.2f", kLeft) + "\" y=\"" + fmt("%.2f", kTop) + "\" width=\"" + fmt("%.2f", plot_w) +
         "\" height=\"" + fmt("%.2f", plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";

  svg += "<g font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i)
    svg += "<text x=\"" + fmt("%.2f", kLeft - 6) + "\" y=\"" + fmt("%.2f", py(i / 4.0) + 4) +
           "\" text-anchor=\"end\">" + fmt("%.2f", i / 4.0) + "</text>\n";
  const int ticks = 4;
  for (int i = 0; i <= ticks; ++i) {
    const double lt = log_max * i / ticks;
    svg += "<text x=\"" + fmt("%.2f", px(lt)) + "\" y=\"" + fmt("%.2f", kTop + plot_h + 16) +
           "\" text-anchor=\"middle\">" + fmt("%.2f", lt) + "</text>\n";
  }
  svg += "<text x=\"" + fmt("%.2f", kLeft + plot_w / 2) + "\" y=\"" + fmt("%.2f", kHeight - 10) +
         "\" text-anchor=\"middle\">log2(tau)</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt("%.2f", kTop + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fmt("%.2f", kTop + plot_h / 2) + ")\">rho(tau)</text>\n";
  svg += "</g>\n";

  for (std::size_t s = 0; s < profile.curves.size(); ++s) {
    const auto& curve = profile.curves[s];
    const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
    std::string d = "M" + fmt("%.2f", px(0)) + "," + fmt("%.2f", py(0));
    double rho = 0.0;
    for (const auto& [tau, value] : curve.steps) {
      const double x = px(std::log2(tau));
      d += " L" + fmt("%.2f", x) + "," + fmt("%.2f", py(rho));
      d += " L" + fmt("%.2f", x) + "," + fmt("%.2f", py(value));
      rho = value;
    }
    d += " L" + fmt("%.2f", px(log_max)) + "," + fmt("%.2f", py(rho));
    svg += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.8\"/>\n";

    const double ly = kTop + 14 + 18.0 * static_cast<double>(s);
    const double lx = kLeft + plot_w + 14;
    svg += "<line x1=\"" + fmt("%.2f", lx) + "\" y1=\"" + fmt("%.2f", ly) + "\" x2=\"" + fmt("%.2f", lx + 22) +
           "\" y2=\"" + fmt("%.2f", ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", lx + 28) + "\" y=\"" + fmt("%.2f", ly + 4) + "\" font-size=\"12\">" +
           escape(curve.algorithm) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace setopt
