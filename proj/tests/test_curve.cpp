#include <doctest.h>

#include <cmath>
#include <numbers>
#include <regex>
#include <sstream>

#include "goldman/curve.hpp"
#include "goldman/deformation.hpp"

using namespace goldman;

namespace {

constexpr double kPi = std::numbers::pi;

const Representation& zero_rep() {
  static const Representation rep = Representation::fuchsian(2);
  return rep;
}

const Representation& pure_rep() {
  static const Representation rep = zero_rep().with_cocycle(solve_cocycle(zero_rep(), 42, 0.1).t);
  return rep;
}

const JordanCurve& zero_curve() {
  static const JordanCurve c = sample_curve(zero_rep(), 6);
  return c;
}

const JordanCurve& pure_curve() {
  static const JordanCurve c = sample_curve(pure_rep(), 6);
  return c;
}

std::vector<Vec2d> polyline(const std::string& svg) {
  const auto at = svg.find("points=\"");
  REQUIRE(at != std::string::npos);
  std::stringstream ss(svg.substr(at + 8, svg.find('"', at + 8) - at - 8));
  std::vector<Vec2d> pts;
  double x, y;
  char comma;
  while (ss >> x >> comma >> y) pts.emplace_back(x, y);
  return pts;
}

}  // namespace

TEST_CASE("repelling fixed points") {
  const AffDualMapd lin{Mat2d(Eigen::Vector2d(4, 0.25).asDiagonal()), Row2d(0, 0)};
  CHECK(angle_distance(ProjPointd(repelling_fixed_point(lin)), ProjPointd(0, 1, 0)) < 1e-15);
  const AffDualMapd aff{lin.linear, Row2d(1, 1)};
  CHECK(angle_distance(ProjPointd(repelling_fixed_point(aff)), ProjPointd(0, 1, -4.0 / 3)) < 1e-15);
  CHECK(angle_distance(ProjPointd(attracting_fixed_point(aff)), ProjPointd(1, 0, 1.0 / 3)) < 1e-15);
  const AffDualMapd flat{Mat2d(Eigen::Vector2d(4, 1).asDiagonal()), Row2d(0, 0)};
  CHECK_THROWS(repelling_fixed_point(flat));
}

TEST_CASE("zero cocycle gives the line z = 0") {
  const auto& c = zero_curve();
  CHECK(c.max_abs_delta() < 1e-9);
  for (double th : {0.0, 0.3, 1.7, 3.0}) CHECK(std::abs(c.delta_at(th)) < 1e-9);
  const Vec3d p(0.3, -0.8, 0.7);
  CHECK((conjugacy_f(c, p) - p).norm() < 1e-9);
  const auto eq = equivariance_check(c, zero_rep(), 100);
  CHECK(eq.matched_residual < 1e-9);
  CHECK(eq.interpolated_residual < 1e-9);
  const auto reg = regularity_probe(c);
  CHECK(reg.box_dim == doctest::Approx(1.0).epsilon(0.05));
  for (const auto& s : reg.slopes) CHECK(s.max_slope < 1e-6);
}

TEST_CASE("sampling is monotone in depth and thread independent") {
  const auto five = sample_curve(pure_rep(), 5);
  CHECK(five.size() < pure_curve().size());
  const auto threaded = sample_curve(pure_rep(), 6, {3, 1e-10});
  REQUIRE(threaded.size() == pure_curve().size());
  for (std::size_t i = 0; i < threaded.size(); ++i) {
    CHECK(threaded.samples()[i].theta == pure_curve().samples()[i].theta);
    CHECK(threaded.samples()[i].delta == pure_curve().samples()[i].delta);
  }
  const auto trunc = pure_curve().truncated(5);
  CHECK(trunc.size() == five.size());
  CHECK(trunc.max_len() == 5);
}

TEST_CASE("samples are repelling fixed points in [0, pi)") {
  const auto& c = pure_curve();
  for (std::size_t i = 0; i < c.size(); i += 997) {
    const auto& s = c.samples()[i];
    CHECK(s.theta >= 0);
    CHECK(s.theta < kPi);
    const Vec3d p = s.point();
    // attracting for the inverse, so rounding contracts
    const auto m = pure_rep().eval_code(s.code).inverse();
    CHECK(angle_distance(m.apply(p), p) < 1e-12);
  }
}

TEST_CASE("delta interpolation") {
  const auto& c = pure_curve();
  for (std::size_t i = 0; i < c.size(); i += 1009) {
    CHECK(c.delta_at(c.samples()[i].theta) == doctest::Approx(c.samples()[i].delta).epsilon(1e-12));
  }
  for (int k = 0; k < 2000; ++k) {
    const double th = -kPi + 2 * kPi * (k + 0.5) / 2000;
    const double x = std::cos(th), y = std::sin(th);
    CHECK(std::abs(c.delta_xy(x, y) + c.delta_xy(-x, -y)) < 1e-12);
  }
}

TEST_CASE("conjugacy to the linear model") {
  const auto& c = pure_curve();
  for (double th : {0.1, 1.0, 2.5, 4.0}) {
    const Vec3d on_line(std::cos(th), std::sin(th), 0);
    const Vec3d img = conjugacy_f(c, on_line);
    CHECK(img(2) == doctest::Approx(c.delta_xy(img(0), img(1))));
    const Vec3d off(std::cos(th), std::sin(th), 0.4);
    CHECK((conjugacy_f_inverse(c, conjugacy_f(c, off)) - off).norm() < 1e-12);
  }
}

TEST_CASE("equivariance on the pure curve") {
  const auto eq = equivariance_check(pure_curve(), pure_rep(), 200, 42);
  CHECK(eq.matched_pairs + eq.fresh_pairs > 0);
  CHECK(eq.matched_residual < 1e-8);
  CHECK(eq.fresh_residual < 1e-8);
  CHECK(eq.interpolated_residual < 1e-2);
  const auto again = equivariance_check(pure_curve(), pure_rep(), 200, 42);
  CHECK(again.interpolated_residual == eq.interpolated_residual);
}

TEST_CASE("regularity probe on the pure curve") {
  const auto reg = regularity_probe(pure_curve());
  CHECK(reg.box_dim > 1.05);
  CHECK(reg.fit_residual >= 0);
  REQUIRE(reg.slopes.size() >= 3);
  CHECK(reg.slopes.back().max_slope > reg.slopes.front().max_slope);
  CHECK_THROWS_AS(regularity_probe(sample_curve(pure_rep(), 2)), CurveError);
}

TEST_CASE("CSV round trip") {
  std::stringstream ss;
  const std::vector<std::string> comments = {"mode = solved", "seed = 42"};
  write_curve_csv(ss, pure_curve(), comments);
  const std::string text = ss.str();
  CHECK(text.rfind("# mode = solved\n# seed = 42\ntheta,x,y,z,delta,word_len,word\n", 0) == 0);
  std::stringstream in(text);
  const auto back = read_curve_csv(in);
  REQUIRE(back.size() == pure_curve().size());
  CHECK(back.max_len() == 6);
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back.samples()[i].theta == pure_curve().samples()[i].theta);
    CHECK(back.samples()[i].delta == pure_curve().samples()[i].delta);
    CHECK(back.samples()[i].code == pure_curve().samples()[i].code);
  }
  std::stringstream bad("theta,x\n1,2\n");
  CHECK_THROWS(read_curve_csv(bad));
}

TEST_CASE("SVG of the zero cocycle is a straight segment") {
  SvgOptions opts;
  std::ostringstream a;
  render_svg(a, zero_curve(), opts);
  const auto pts = polyline(a.str());
  REQUIRE(pts.size() >= 2);
  const double y0 = pts.front()(1);
  for (const auto& p : pts) CHECK(std::abs(p(1) - y0) < 0.011);
  std::ostringstream b;
  render_svg(b, zero_curve(), opts);
  CHECK(a.str() == b.str());
}

TEST_CASE("SVG charts and windows") {
  for (Chart chart : {Chart::Affine, Chart::AffineY, Chart::Ray}) {
    SvgOptions opts;
    opts.chart = chart;
    opts.comments = {"chart test -- dashes"};
    std::ostringstream out;
    render_svg(out, pure_curve(), opts);
    const std::string svg = out.str();
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("chart test -_ dashes") != std::string::npos);
    CHECK(polyline(svg).size() > 100);
    CHECK(chart_from_string(to_string(chart)) == chart);
  }
  CHECK_THROWS_AS(chart_from_string("disk"), CurveError);
  SvgOptions bad;
  bad.window = Window{1, 0, 0, 1};
  std::ostringstream out;
  CHECK_THROWS_AS(render_svg(out, pure_curve(), bad), CurveError);
}
