#include "wander/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace wander {

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << content;
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

void write_cloud_csv(const std::filesystem::path& path, const std::vector<Complex>& pts,
                     const std::vector<std::string>& tags) {
  std::string out = "re,im,path\n";
  for (size_t i = 0; i < pts.size(); ++i) {
    out += fmt17(pts[i].real());
    out += ',';
    out += fmt17(pts[i].imag());
    out += ',';
    if (i < tags.size()) out += tags[i];
    out += '\n';
  }
  write_text(path, out);
}

void SvgPlot::fit(const std::vector<Complex>& pts) {
  if (pts.empty()) return;
  double a = 1e300, b = -1e300, c = 1e300, d = -1e300;
  for (Complex z : pts) {
    a = std::min(a, z.real());
    b = std::max(b, z.real());
    c = std::min(c, z.imag());
    d = std::max(d, z.imag());
  }
  if (!fitted_) {
    min_re_ = a;
    max_re_ = b;
    min_im_ = c;
    max_im_ = d;
    fitted_ = true;
  } else {
    min_re_ = std::min(min_re_, a);
    max_re_ = std::max(max_re_, b);
    min_im_ = std::min(min_im_, c);
    max_im_ = std::max(max_im_, d);
  }
  // round outward at 1e-6 so bounds are reproducible
  min_re_ = std::floor(min_re_ * 1e6) / 1e6;
  min_im_ = std::floor(min_im_ * 1e6) / 1e6;
  max_re_ = std::ceil(max_re_ * 1e6) / 1e6;
  max_im_ = std::ceil(max_im_ * 1e6) / 1e6;
}

std::pair<double, double> SvgPlot::map(Complex z) const {
  double w = std::max(max_re_ - min_re_, 1e-9), h = std::max(max_im_ - min_im_, 1e-9);
  double s = (size - 2 * margin) / std::max(w, h);
  double x = margin + (z.real() - min_re_) * s;
  double y = size - margin - (z.imag() - min_im_) * s;  // y up
  return {x, y};
}

void SvgPlot::add_points(const std::vector<Complex>& pts, const std::string& color, double radius) {
  for (Complex z : pts) {
    auto [x, y] = map(z);
    elements_.push_back("<circle cx=\"" + fmt6(x) + "\" cy=\"" + fmt6(y) + "\" r=\"" + fmt6(radius) +
                        "\" fill=\"" + color + "\"/>");
  }
}

void SvgPlot::add_polyline(const std::vector<Complex>& pts, const std::string& color, double width) {
  std::string d = "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + fmt6(width) + "\" points=\"";
  for (size_t i = 0; i < pts.size(); ++i) {
    auto [x, y] = map(pts[i]);
    if (i) d += ' ';
    d += fmt6(x) + "," + fmt6(y);
  }
  d += "\"/>";
  elements_.push_back(std::move(d));
}

void SvgPlot::write(const std::filesystem::path& path) const {
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + fmt6(size) + " " + fmt6(size) +
                    "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& e : elements_) {
    out += e;
    out += '\n';
  }
  out += "</svg>\n";
  write_text(path, out);
}

}  // namespace wander
