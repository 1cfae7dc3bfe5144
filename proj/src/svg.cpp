#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "goldman/curve.hpp"

namespace goldman {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// XML comments may not contain "--".
std::string comment_safe(std::string s) {
  for (std::size_t i = s.find("--"); i != std::string::npos; i = s.find("--", i)) s[i + 1] = '_';
  return s;
}

// Chart coordinates in traversal order; the first coordinate is monotone.
std::vector<Vec2d> traverse(const JordanCurve& curve, Chart chart) {
  const auto samples = curve.samples();
  std::vector<Vec2d> pts;
  pts.reserve(samples.size());
  std::size_t start = 0;
  if (chart == Chart::Affine) {
    // Start just past the line x = 0 so the walk crosses theta = pi (where
    // the chart is regular) instead of theta = pi / 2.
    while (start < samples.size() && samples[start].theta <= kPi / 2) ++start;
  }
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[(start + k) % samples.size()];
    if (auto c = chart_coords(chart, s.point())) pts.push_back(*c);
  }
  if (chart == Chart::AffineY) std::reverse(pts.begin(), pts.end());
  return pts;
}

Window automatic_window(Chart chart, const std::vector<Vec2d>& pts) {
  Window w;
  if (chart == Chart::Ray) {
    w.x0 = 0;
    w.x1 = kPi;
  } else {
    w.x0 = -3;
    w.x1 = 3;
  }
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& p : pts) {
    if (p(0) < w.x0 || p(0) > w.x1) continue;
    lo = std::min(lo, p(1));
    hi = std::max(hi, p(1));
  }
  if (!(hi >= lo)) lo = hi = 0;
  const double span = hi - lo;
  if (span < 1e-12) {
    w.y0 = lo - 0.1 * (w.x1 - w.x0);
    w.y1 = hi + 0.1 * (w.x1 - w.x0);
  } else {
    w.y0 = lo - 0.05 * span;
    w.y1 = hi + 0.05 * span;
  }
  return w;
}

}  // namespace

const char* to_string(Chart c) {
  switch (c) {
    case Chart::Affine: return "affine";
    case Chart::AffineY: return "affine-y";
    case Chart::Ray: return "ray";
  }
  return "?";
}

Chart chart_from_string(const std::string& s) {
  if (s == "affine") return Chart::Affine;
  if (s == "affine-y") return Chart::AffineY;
  if (s == "ray") return Chart::Ray;
  throw CurveError("unknown chart '" + s + "' (expected affine, affine-y or ray)");
}

std::optional<Vec2d> chart_coords(Chart chart, const Vec3d& p) {
  switch (chart) {
    case Chart::Affine:
      if (std::abs(p(0)) < 1e-9 * p.norm()) return std::nullopt;
      return Vec2d(p(1) / p(0), p(2) / p(0));
    case Chart::AffineY:
      if (std::abs(p(1)) < 1e-9 * p.norm()) return std::nullopt;
      return Vec2d(p(0) / p(1), p(2) / p(1));
    case Chart::Ray: {
      auto s = fold_point(p);
      if (!s) return std::nullopt;
      return Vec2d(s->theta, s->delta);
    }
  }
  return std::nullopt;
}

void render_svg(std::ostream& out, const JordanCurve& curve, const SvgOptions& opts) {
  if (curve.empty()) throw CurveError("cannot render an empty curve");
  const std::vector<Vec2d> pts = traverse(curve, opts.chart);
  const Window win = opts.window ? *opts.window : automatic_window(opts.chart, pts);
  if (!win.valid()) throw CurveError("render window must have x0 < x1 and y0 < y1");

  const double margin = 40;
  const double pw = opts.width - 2 * margin;
  const double ph = opts.height - 2 * margin;
  auto to_px = [&](const Vec2d& p) {
    const double x = margin + (p(0) - win.x0) / (win.x1 - win.x0) * pw;
    double y = margin + (win.y1 - p(1)) / (win.y1 - win.y0) * ph;
    y = std::clamp(y, -10.0 * opts.height, 11.0 * opts.height);
    return Vec2d(x, y);
  };

  // Column aggregation over the visible range plus one point on each side.
  std::vector<Vec2d> path;
  auto push = [&](const Vec2d& p) {
    if (path.empty() || (path.back() - p).cwiseAbs().maxCoeff() > 0.005) path.push_back(p);
  };
  std::size_t i = 0;
  while (i < pts.size() && pts[i](0) < win.x0) ++i;
  if (i > 0 && i < pts.size()) push(to_px(pts[i - 1]));
  while (i < pts.size() && pts[i](0) <= win.x1) {
    const long col = std::lround(std::floor(to_px(pts[i])(0) * 4.0));
    std::size_t j = i;
    std::size_t imin = i, imax = i;
    while (j < pts.size() && pts[j](0) <= win.x1 &&
           std::lround(std::floor(to_px(pts[j])(0) * 4.0)) == col) {
      if (pts[j](1) < pts[imin](1)) imin = j;
      if (pts[j](1) > pts[imax](1)) imax = j;
      ++j;
    }
    push(to_px(pts[i]));
    push(to_px(pts[std::min(imin, imax)]));
    push(to_px(pts[std::max(imin, imax)]));
    push(to_px(pts[j - 1]));
    i = j;
  }
  if (i < pts.size() && i > 0) push(to_px(pts[i]));

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  for (const auto& c : opts.comments) out << "<!-- " << comment_safe(c) << " -->\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
      << opts.height << "\" viewBox=\"0 0 " << opts.width << ' ' << opts.height << "\">\n";
  out << "<!-- chart " << to_string(opts.chart) << ", window " << fmt("%.9g", win.x0) << ','
      << fmt("%.9g", win.y0) << ',' << fmt("%.9g", win.x1) << ',' << fmt("%.9g", win.y1)
      << ", samples " << curve.size() << ", depth " << curve.max_len() << ", vertices "
      << path.size() << " -->\n";
  out << "<defs><clipPath id=\"plot\"><rect x=\"" << margin << "\" y=\"" << margin << "\" width=\""
      << fmt("%.2f", pw) << "\" height=\"" << fmt("%.2f", ph) << "\"/></clipPath></defs>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << fmt("%.2f", pw)
      << "\" height=\"" << fmt("%.2f", ph) << "\" fill=\"none\" stroke=\"#999\"/>\n";
  if (!opts.title.empty()) {
    out << "<text x=\"" << margin << "\" y=\"" << margin - 14
        << "\" font-family=\"sans-serif\" font-size=\"14\">" << xml_escape(opts.title) << "</text>\n";
  }
  const double label_y = opts.height - margin + 16;
  out << "<text x=\"" << margin << "\" y=\"" << fmt("%.2f", label_y)
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << fmt("%.6g", win.x0) << "</text>\n";
  out << "<text x=\"" << fmt("%.2f", opts.width - margin) << "\" y=\"" << fmt("%.2f", label_y)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << fmt("%.6g", win.x1)
      << "</text>\n";
  out << "<text x=\"" << margin - 4 << "\" y=\"" << fmt("%.2f", opts.height - margin)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << fmt("%.6g", win.y0)
      << "</text>\n";
  out << "<text x=\"" << margin - 4 << "\" y=\"" << margin + 10
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << fmt("%.6g", win.y1)
      << "</text>\n";
  out << "<polyline clip-path=\"url(#plot)\" fill=\"none\" stroke=\"#1f3a93\" stroke-width=\"0.8\" "
         "points=\"";
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k) out << ' ';
    out << fmt("%.2f", path[k](0)) << ',' << fmt("%.2f", path[k](1));
  }
  out << "\"/>\n</svg>\n";
}

}  // namespace goldman
