#include "circlestab/portrait.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "circlestab/circle.hpp"
#include "circlestab/errors.hpp"
#include "circlestab/field_io.hpp"

namespace circlestab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt4(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
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

// Shared layout constants: graph box on top, annotated circle below.
constexpr double kGraphLeft = 60.0;
constexpr double kGraphRight = 740.0;
constexpr double kGraphTop = 44.0;
constexpr double kGraphBottom = 344.0;
constexpr double kCircleCx = 400.0;
constexpr double kCircleCy = 462.0;
constexpr double kCircleR = 78.0;

double graph_x(double x) { return kGraphLeft + (kGraphRight - kGraphLeft) * x; }

struct ValueScale {
  double lo = -1.0;
  double hi = 1.0;
  double y(double v) const {
    return kGraphBottom - (v - lo) / (hi - lo) * (kGraphBottom - kGraphTop);
  }
};

ValueScale value_scale(const PhasePortrait& p) {
  double lo = 0.0, hi = 0.0;
  for (const PortraitSample& s : p.samples) {
    lo = std::min(lo, s.f);
    hi = std::max(hi, s.f);
  }
  double pad = 0.08 * (hi - lo);
  if (pad < 1e-12) pad = 0.5;
  return {lo - pad, hi + pad};
}

// Marker glyph at (cx, cy): filled disk for stable, hollow for unstable,
// half-filled for the nonhyperbolic kinds.
void append_marker(std::string& out, const char* cls, double cx, double cy,
                   Classification c, double x_value) {
  out += "<g class=\"" + std::string(cls) + "\" data-x=\"" + format_number(x_value) +
         "\" data-kind=\"" + classification_name(c) + "\">";
  const std::string sx = fmt4(cx), sy = fmt4(cy);
  switch (c) {
    case Classification::HyperbolicStable:
      out += "<circle cx=\"" + sx + "\" cy=\"" + sy + "\" r=\"5\" fill=\"#000\"/>";
      break;
    case Classification::HyperbolicUnstable:
      out += "<circle cx=\"" + sx + "\" cy=\"" + sy +
             "\" r=\"5\" fill=\"#fff\" stroke=\"#000\" stroke-width=\"1.5\"/>";
      break;
    default:
      out += "<circle cx=\"" + sx + "\" cy=\"" + sy +
             "\" r=\"5\" fill=\"#fff\" stroke=\"#000\" stroke-width=\"1.5\"/>";
      out += "<path d=\"M " + sx + " " + fmt4(cy - 5.0) + " A 5 5 0 0 1 " + sx + " " +
             fmt4(cy + 5.0) + " Z\" fill=\"#000\"/>";
      break;
  }
  out += "</g>\n";
}

void append_axis_arrow(std::string& out, double cx, double cy, int sign, double x_value) {
  const double d = sign > 0 ? 1.0 : -1.0;
  out += "<path class=\"flow\" data-x=\"" + format_number(x_value) + "\" data-sign=\"" +
         (sign > 0 ? std::string("+1") : std::string("-1")) + "\" d=\"M " +
         fmt4(cx - 5.0 * d) + " " + fmt4(cy - 4.0) + " L " + fmt4(cx + 5.0 * d) + " " +
         fmt4(cy) + " L " + fmt4(cx - 5.0 * d) + " " + fmt4(cy + 4.0) +
         " Z\" fill=\"#b71c1c\"/>\n";
}

// Point on the displayed circle: x = 0 sits on top and x increases
// counterclockwise.
void circle_point(double x, double radius, double& px, double& py) {
  const double theta = 0.5 * kPi + 2.0 * kPi * x;
  px = kCircleCx + radius * std::cos(theta);
  py = kCircleCy - radius * std::sin(theta);
}

void append_circle_arrow(std::string& out, double x, int sign) {
  double px, py;
  circle_point(x, kCircleR, px, py);
  const double theta = 0.5 * kPi + 2.0 * kPi * x;
  // unit tangent in the direction of increasing x (counterclockwise on screen)
  double tx = -std::sin(theta), ty = -std::cos(theta);
  if (sign < 0) {
    tx = -tx;
    ty = -ty;
  }
  const double nx = -ty, ny = tx;
  out += "<path class=\"flow-circle\" data-x=\"" + format_number(x) + "\" data-sign=\"" +
         (sign > 0 ? std::string("+1") : std::string("-1")) + "\" d=\"M " +
         fmt4(px + 6.0 * tx) + " " + fmt4(py + 6.0 * ty) + " L " +
         fmt4(px - 4.0 * tx + 4.0 * nx) + " " + fmt4(py - 4.0 * ty + 4.0 * ny) + " L " +
         fmt4(px - 4.0 * tx - 4.0 * nx) + " " + fmt4(py - 4.0 * ty - 4.0 * ny) +
         " Z\" fill=\"#b71c1c\"/>\n";
}

}  // namespace

PhasePortrait render_portrait(const CircleField& field, const FixedPointSet& fixed_points,
                              int resolution) {
  if (resolution < 64) throw precondition_error("portrait resolution must be >= 64");
  PhasePortrait p;
  p.label = field.label;
  p.resolution = resolution;
  p.fixed_points = fixed_points;
  p.samples.reserve(resolution + 1);
  for (int i = 0; i <= resolution; ++i) {
    const double x = static_cast<double>(i) / resolution;
    p.samples.push_back({x, field.eval(x), field.eval_deriv(x)});
  }

  std::vector<double> anchors;
  const auto& pts = fixed_points.points;
  if (pts.empty()) {
    anchors = {0.125, 0.375, 0.625, 0.875};
  } else {
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double a = pts[k].location;
      const double b = k + 1 < pts.size() ? pts[k + 1].location : pts[0].location + 1.0;
      anchors.push_back(wrap_unit(a + 0.5 * (b - a)));
    }
  }
  const double tol = fixed_points.config.tol_zero;
  for (double a : anchors) {
    const double v = field.eval(a);
    if (std::abs(v) <= tol) continue;  // anchor fell inside a zero band
    p.arrow_anchors.push_back(a);
    p.arrow_signs.push_back(v > 0.0 ? 1 : -1);
  }
  return p;
}

std::string portrait_csv(const PhasePortrait& portrait) {
  std::string out = "x,f,df\n";
  for (const PortraitSample& s : portrait.samples) {
    out += format_number(s.x);
    out += ',';
    out += format_number(s.f);
    out += ',';
    out += format_number(s.df);
    out += '\n';
  }
  return out;
}

std::string portrait_svg(const PhasePortrait& portrait) {
  const ValueScale scale = value_scale(portrait);
  const double y0 = scale.y(0.0);
  std::string out;
  out.reserve(1 << 16);
  out +=
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 560\" "
      "font-family=\"sans-serif\" font-size=\"13\">\n";
  out += "<title>" + escape_xml(portrait.label) + "</title>\n";
  out += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" class=\"label\">" +
         escape_xml(portrait.label) + "</text>\n";

  // graph of f over one period
  out += "<g class=\"graph\">\n";
  out += "<rect x=\"" + fmt4(kGraphLeft) + "\" y=\"" + fmt4(kGraphTop) + "\" width=\"" +
         fmt4(kGraphRight - kGraphLeft) + "\" height=\"" + fmt4(kGraphBottom - kGraphTop) +
         "\" fill=\"none\" stroke=\"#999\"/>\n";
  out += "<line class=\"axis\" x1=\"" + fmt4(kGraphLeft) + "\" y1=\"" + fmt4(y0) +
         "\" x2=\"" + fmt4(kGraphRight) + "\" y2=\"" + fmt4(y0) +
         "\" stroke=\"#555\" stroke-dasharray=\"4 3\"/>\n";
  out += "<text x=\"" + fmt4(kGraphLeft) + "\" y=\"" + fmt4(kGraphBottom + 18.0) +
         "\" text-anchor=\"middle\">0</text>\n";
  out += "<text x=\"" + fmt4(kGraphRight) + "\" y=\"" + fmt4(kGraphBottom + 18.0) +
         "\" text-anchor=\"middle\">1</text>\n";
  out += "<polyline class=\"curve\" fill=\"none\" stroke=\"#1565c0\" "
         "stroke-width=\"1.5\" points=\"";
  for (const PortraitSample& s : portrait.samples) {
    out += fmt4(graph_x(s.x));
    out += ',';
    out += fmt4(scale.y(s.f));
    out += ' ';
  }
  out += "\"/>\n";

  for (const PlateauInterval& pl : portrait.fixed_points.plateaus) {
    const double a = pl.a;
    const double b = pl.b < pl.a ? pl.b + 1.0 : pl.b;
    const auto band = [&](double lo, double hi) {
      out += "<rect class=\"plateau\" x=\"" + fmt4(graph_x(lo)) + "\" y=\"" +
             fmt4(y0 - 2.0) + "\" width=\"" + fmt4(graph_x(hi) - graph_x(lo)) +
             "\" height=\"4\" fill=\"#ef6c00\"/>\n";
    };
    if (b <= 1.0) {
      band(a, b);
    } else {  // wrapped arc split at the seam
      band(a, 1.0);
      band(0.0, b - 1.0);
    }
  }

  for (const FixedPoint& fp : portrait.fixed_points.points)
    append_marker(out, "fp", graph_x(fp.location), y0, fp.classification, fp.location);
  for (std::size_t i = 0; i < portrait.arrow_anchors.size(); ++i)
    append_axis_arrow(out, graph_x(portrait.arrow_anchors[i]), y0, portrait.arrow_signs[i],
                      portrait.arrow_anchors[i]);
  out += "</g>\n";

  // the same data on the circle
  out += "<g class=\"circle-view\">\n";
  out += "<circle class=\"orbit\" cx=\"" + fmt4(kCircleCx) + "\" cy=\"" + fmt4(kCircleCy) +
         "\" r=\"" + fmt4(kCircleR) + "\" fill=\"none\" stroke=\"#999\" "
         "stroke-width=\"1.5\"/>\n";
  for (const FixedPoint& fp : portrait.fixed_points.points) {
    double px, py;
    circle_point(fp.location, kCircleR, px, py);
    append_marker(out, "fp-circle", px, py, fp.classification, fp.location);
  }
  for (std::size_t i = 0; i < portrait.arrow_anchors.size(); ++i)
    append_circle_arrow(out, portrait.arrow_anchors[i], portrait.arrow_signs[i]);
  out += "</g>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace circlestab
