#include <doctest.h>

#include <cmath>
#include <numbers>

#include "goldman/deformation.hpp"
#include "goldman/foliation.hpp"

using namespace goldman;

namespace {

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

}  // namespace

TEST_CASE("flag validation") {
  const ProjPointd x(1, 0, 0.5);
  CHECK_NOTHROW(FlagPoint::make(x, ProjLined(0.5, 0, -1)));
  CHECK_THROWS_AS(FlagPoint::make(x, ProjLined(0, 1, 0)), FoliationError);     // through the origin
  CHECK_THROWS_AS(FlagPoint::make(x, ProjLined(1, 0, -1)), FoliationError);    // x not on d
  CHECK_THROWS_AS(FlagPoint::make(ProjPointd(0, 0, 1), ProjLined(0, 0, 1)), FoliationError);
  // z = a cos + b sin at theta
  const double a = 0.3, b = (0.2 - a * std::cos(0.7)) / std::sin(0.7);
  const auto f = FlagPoint::from_chart(0.7, 0.2, a, b);
  CHECK(f.theta() == doctest::Approx(0.7));
  CHECK(f.height() == doctest::Approx(0.2));
  CHECK((f.slope() - Vec2d(a, b)).norm() < 1e-12);
  CHECK_THROWS_AS(FlagPoint::from_chart(0.7, 0.2, 0.3, -0.1), FoliationError);
}

TEST_CASE("endpoints on a line curve coincide") {
  for (double th : {0.2, 1.3, 2.9}) {
    const auto f = FlagPoint::from_chart(th, 0.5, 0.5 * std::cos(th) + 0.2 * std::sin(th),
                                         0.5 * std::sin(th) - 0.2 * std::cos(th));
    const auto e = endpoints(zero_curve(), f);
    CHECK(e.equal());
    CHECK(e.crossings == 1);
    CHECK(angle_distance(e.alpha, e.beta) == 0);
    CHECK(std::abs(e.alpha.coords()(2)) < 1e-9);  // on z = 0
  }
  const auto on_curve = FlagPoint::from_chart(1.0, 0.0, -std::sin(1.0), std::cos(1.0));
  CHECK_THROWS_AS(endpoints(zero_curve(), on_curve), FoliationError);
}

TEST_CASE("canonical representation is refused") {
  const auto report = classify_flags(zero_rep(), zero_curve());
  CHECK(report.refused);
  CHECK(report.fraction_distinct == 0);
  CHECK(report.diagnosis.find("not_pure") != std::string::npos);
  CHECK(report.diagnosis.find("alpha = beta") != std::string::npos);
}

TEST_CASE("invariant line of a linear saddle") {
  const AffDualMapd m{Mat2d(Eigen::Vector2d(4, 0.25).asDiagonal()), Row2d(0, 0)};
  const Representation rep(2, {m, m, m, m});
  const auto il = invariant_line(rep, Word::parse("a1"));
  CHECK(angle_distance(il.attracting, ProjPointd(1, 0, 0)) < 1e-15);
  CHECK(angle_distance(il.repelling, ProjPointd(0, 1, 0)) < 1e-15);
  CHECK((il.line.coeffs() - Vec3d(0, 0, 1)).norm() < 1e-15);
}

TEST_CASE("invariant line of a1 on the pure representation") {
  const auto il = invariant_line(pure_rep(), Word::parse("a1"), &pure_curve());
  const auto m = pure_rep().eval(Word::parse("a1"));
  CHECK(angle_distance(Vec3d((m * il.line).coeffs()), Vec3d(il.line.coeffs())) < 1e-9);
  CHECK(incident(il.attracting, il.line));
  CHECK(incident(il.repelling, il.line));
  CHECK(il.meets_complement);

  // both fixed points are crossings of the line with the curve
  const CurveIndex index(pure_curve());
  const Vec3d c = il.line.coeffs();
  const auto cr = index.crossings(-c(0) / c(2), -c(1) / c(2));
  for (const auto& fp : {il.attracting, il.repelling}) {
    const double th = fold_point(fp.coords())->theta;
    double best = 10;
    for (double t : cr.thetas) best = std::min({best, std::abs(t - th), std::numbers::pi - std::abs(t - th)});
    CHECK(best < 1e-4);
  }
}

TEST_CASE("witness on the invariant line of a2") {
  // the line of a2 has an arc between its fixed points that avoids the curve;
  // the component there is bounded by the two fixed points
  const Word a2 = Word::parse("a2");
  const auto il = invariant_line(pure_rep(), a2, &pure_curve());
  const CurveIndex index(pure_curve());
  const auto w = invariant_line_witness(pure_rep(), index, a2);
  REQUIRE(w);
  CHECK(w->ends.status == EndpointStatus::Distinct);
  // endpoints are the two fixed points of a1, in some order
  const double direct = std::max(angle_distance(w->ends.alpha, il.attracting),
                                 angle_distance(w->ends.beta, il.repelling));
  const double swapped = std::max(angle_distance(w->ends.alpha, il.repelling),
                                  angle_distance(w->ends.beta, il.attracting));
  CHECK(std::min(direct, swapped) < 1e-3);
}

TEST_CASE("classification of random flags") {
  ClassifyOptions opts;
  opts.n_samples = 2000;
  opts.seed = 42;
  const auto a = classify_flags(pure_rep(), pure_curve(), opts);
  CHECK_FALSE(a.refused);
  CHECK(a.sampled == 2000);
  CHECK(a.distinct + a.equal + a.skipped == a.sampled);
  CHECK(a.distinct > 0);
  REQUIRE(a.witness_distinct);
  CHECK(a.fraction_distinct == doctest::Approx(double(a.distinct) / (a.distinct + a.equal)));

  opts.threads = 3;
  const auto b = classify_flags(pure_rep(), pure_curve(), opts);
  CHECK(b.distinct == a.distinct);
  CHECK(b.equal == a.equal);
  REQUIRE(b.witness_distinct);
  CHECK(b.witness_distinct->index == a.witness_distinct->index);

  const auto again = endpoints(pure_curve(), a.witness_distinct->flag);
  CHECK(again.status == EndpointStatus::Distinct);
  CHECK(again.alpha_theta == a.witness_distinct->ends.alpha_theta);
  CHECK(again.beta_theta == a.witness_distinct->ends.beta_theta);
}

TEST_CASE("orbit accumulation") {
  const auto f = FlagPoint::from_chart(0.9, 0.6, 0.6 * std::cos(0.9), 0.6 * std::sin(0.9));
  const auto lin = orbit_accumulation_probe(zero_rep(), zero_curve(), f, 8, 64, 3);
  REQUIRE(lin.size() == 9);
  CHECK(lin[0].samples == 1);
  CHECK(lin[0].median_distance > 0);
  CHECK(lin[8].median_distance < lin[2].median_distance);

  ClassifyOptions opts;
  opts.n_samples = 200;
  const auto report = classify_flags(pure_rep(), pure_curve(), opts);
  REQUIRE(report.witness_distinct);
  const auto rows = orbit_accumulation_probe(pure_rep(), pure_curve(), report.witness_distinct->flag, 8);
  CHECK(rows[0].median_distance > 0);
  CHECK(rows[8].median_distance < rows[2].median_distance);
}
