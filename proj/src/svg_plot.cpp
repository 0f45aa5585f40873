#include "hrnvo/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace hrnvo {

namespace {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void include(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void pad() {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    } else {
      const double m = 0.05 * (hi - lo);
      lo -= m;
      hi += m;
    }
  }
};

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

}  // namespace

void writeSvgPlot(const std::filesystem::path& file, const std::string& title,
                  const std::string& xLabel, const std::vector<PlotPanel>& panels, int width,
                  int panelHeight) {
  const int marginLeft = 64, marginRight = 16, marginTop = 34, marginBottom = 40;
  const int plotWidth = width - marginLeft - marginRight;
  const int totalHeight = marginTop + static_cast<int>(panels.size()) * panelHeight + marginBottom;

  Range xRange;
  for (const auto& panel : panels)
    for (const auto& s : panel.series)
      for (double v : s.x) xRange.include(v);
  xRange.pad();

  std::ofstream out(file);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << totalHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const PlotPanel& panel = panels[p];
    const int top = marginTop + static_cast<int>(p) * panelHeight + 8;
    const int innerHeight = panelHeight - 26;

    Range yRange;
    for (const auto& s : panel.series)
      for (double v : s.y) yRange.include(v);
    yRange.pad();

    auto toX = [&](double v) {
      return marginLeft + plotWidth * (v - xRange.lo) / (xRange.hi - xRange.lo);
    };
    auto toY = [&](double v) {
      return top + innerHeight * (1.0 - (v - yRange.lo) / (yRange.hi - yRange.lo));
    };

    out << "<rect x=\"" << marginLeft << "\" y=\"" << top << "\" width=\"" << plotWidth
        << "\" height=\"" << innerHeight << "\" fill=\"none\" stroke=\"#888\"/>\n";

    for (int tick = 0; tick <= 4; ++tick) {
      const double fy = yRange.lo + (yRange.hi - yRange.lo) * tick / 4.0;
      const double py = toY(fy);
      out << "<line x1=\"" << marginLeft << "\" y1=\"" << py << "\" x2=\""
          << marginLeft + plotWidth << "\" y2=\"" << py
          << "\" stroke=\"#eee\" stroke-width=\"1\"/>\n";
      out << "<text x=\"" << marginLeft - 6 << "\" y=\"" << py + 4
          << "\" text-anchor=\"end\">" << fmt(fy) << "</text>\n";
      const double fx = xRange.lo + (xRange.hi - xRange.lo) * tick / 4.0;
      if (p + 1 == panels.size()) {
        out << "<text x=\"" << toX(fx) << "\" y=\"" << top + innerHeight + 16
            << "\" text-anchor=\"middle\">" << fmt(fx) << "</text>\n";
      }
    }

    int legendX = marginLeft + 8;
    for (const auto& s : panel.series) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
      const std::size_t n = std::min(s.x.size(), s.y.size());
      // Cap the emitted points; plots stay readable and files bounded.
      const std::size_t stride = std::max<std::size_t>(1, n / 4000);
      for (std::size_t i = 0; i < n; i += stride)
        out << fmt(toX(s.x[i])) << "," << fmt(toY(s.y[i])) << " ";
      out << "\"/>\n";
      out << "<text x=\"" << legendX << "\" y=\"" << top + 14 << "\" fill=\"" << s.color << "\">"
          << s.name << "</text>\n";
      legendX += static_cast<int>(s.name.size()) * 8 + 24;
    }
    out << "<text x=\"14\" y=\"" << top + innerHeight / 2
        << "\" transform=\"rotate(-90 14 " << top + innerHeight / 2 << ")\" text-anchor=\"middle\">"
        << panel.yLabel << "</text>\n";
  }
  out << "<text x=\"" << marginLeft + plotWidth / 2 << "\" y=\"" << totalHeight - 8
      << "\" text-anchor=\"middle\">" << xLabel << "</text>\n";
  out << "</svg>\n";
}

}  // namespace hrnvo
