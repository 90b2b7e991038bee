#pragma once
// Deterministic file emitters: CSV point clouds, SVG scatter/polyline
// plots (1000x1000 viewbox, fixed 6-decimal coordinates), JSON.

#include <filesystem>
#include <string>
#include <vector>

#include "wander/numberfield.hpp"

namespace wander {

void write_text(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const Json& j);

// rows of "re,im,path"
void write_cloud_csv(const std::filesystem::path& path, const std::vector<Complex>& pts,
                     const std::vector<std::string>& tags);

struct SvgPlot {
  double size = 1000.0;
  double margin = 40.0;
  // bounds are fixed from the data once, rounded outward to 1e-6
  void fit(const std::vector<Complex>& pts);
  void add_points(const std::vector<Complex>& pts, const std::string& color, double radius = 1.0);
  void add_polyline(const std::vector<Complex>& pts, const std::string& color, double width = 1.0);
  void write(const std::filesystem::path& path) const;

 private:
  double min_re_ = 0, max_re_ = 1, min_im_ = 0, max_im_ = 1;
  bool fitted_ = false;
  std::vector<std::string> elements_;
  std::pair<double, double> map(Complex z) const;
};

std::string fmt6(double v);
std::string fmt17(double v);

}  // namespace wander
