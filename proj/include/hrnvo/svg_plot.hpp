#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hrnvo {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
};

struct PlotPanel {
  std::string yLabel;
  std::vector<PlotSeries> series;
};

// Writes a stacked line chart as a self-contained SVG file. Output is a
// pure function of the inputs.
void writeSvgPlot(const std::filesystem::path& file, const std::string& title,
                  const std::string& xLabel, const std::vector<PlotPanel>& panels,
                  int width = 960, int panelHeight = 220);

}  // namespace hrnvo
