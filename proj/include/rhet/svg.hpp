#pragma once

// Minimal SVG writer. Coordinates are printed with two decimals so output
// bytes depend only on the input values.

#include <string>
#include <utility>
#include <vector>

namespace rhet::svg {

std::string fmt(double v);
std::string escape(const std::string& s);

class Document {
 public:
  Document(double width, double height);

  void rect(double x, double y, double w, double h, const std::string& fill, const std::string& stroke = "none");
  void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0,
            const std::string& dash = "");
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, double width = 1.5);
  void polygon(const std::vector<std::pair<double, double>>& pts, const std::string& fill, double opacity = 1.0);
  void circle(double cx, double cy, double r, const std::string& fill);
  /// Diamond marker centred on (cx, cy).
  void diamond(double cx, double cy, double r, const std::string& fill);
  void text(double x, double y, const std::string& s, double size = 11.0, const std::string& anchor = "start",
            double rotate = 0.0);

  std::string str() const;

 private:
  double width_, height_;
  std::string body_;
};

/// Linear map from [d0, d1] onto [r0, r1].
struct Scale {
  double d0, d1, r0, r1;
  double operator()(double v) const { return d1 == d0 ? 0.5 * (r0 + r1) : r0 + (v - d0) / (d1 - d0) * (r1 - r0); }
};

/// Roughly five round tick values covering [lo, hi].
std::vector<double> ticks(double lo, double hi, int target = 5);

}  // namespace rhet::svg
