#include <doctest.h>

#include <cmath>
#include <numbers>

#include "goldman/algebra.hpp"

using namespace goldman;

TEST_CASE("block composition") {
  const AffDualMapd a{Mat2d(Eigen::Vector2d(2, 0.5).asDiagonal()), Row2d(0, 0)};
  const AffDualMapd b{Mat2d::Identity(), Row2d(1, 1)};
  const AffDualMapd ab = a * b;
  Mat3d expected;
  expected << 2, 0, 0, 0, 0.5, 0, 1, 1, 1;
  CHECK((ab.matrix() - expected).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((ab.matrix() - a.matrix() * b.matrix()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(distance(AffDualMapd::identity() * a, a) == 0);
}

TEST_CASE("inverse and determinant") {
  const AffDualMapd m{(Mat2d() << 3, 1, 2, 1).finished(), Row2d(0.5, -2)};
  CHECK(distance(m * m.inverse(), AffDualMapd::identity()) < 1e-14);
  CHECK(AffDualMapd::from_linear(Mat2d(Eigen::Vector2d(3, 1.0 / 3).asDiagonal())).det() ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(AffDualMapd::from_matrix((Mat3d() << 1, 0, 1, 0, 1, 0, 0, 0, 1).finished()),
                  AlgebraError);
}

TEST_CASE("2x2 spectrum") {
  const auto d = eig2(Mat2d(Eigen::Vector2d(4, 0.25).asDiagonal()));
  CHECK(d.lambda1 == doctest::Approx(4));
  CHECK(d.lambda2 == doctest::Approx(0.25));
  CHECK((d.v1 - Vec2d(1, 0)).norm() < 1e-15);
  CHECK((d.v2 - Vec2d(0, 1)).norm() < 1e-15);

  const auto e = eig2((Mat2d() << 2, 1, 0, 0.5).finished());
  CHECK(e.lambda1 == doctest::Approx(2));
  CHECK(e.lambda2 == doctest::Approx(0.5));
  CHECK((e.v1 - Vec2d(1, 0)).norm() < 1e-14);
  const Vec2d v2 = Vec2d(0.5547001962252291, -0.8320502943378437);
  CHECK(std::abs(std::abs(e.v2.dot(v2)) - 1) < 1e-14);

  const double c = std::cos(std::numbers::pi / 4), s = std::sin(std::numbers::pi / 4);
  CHECK_THROWS_AS(eig2((Mat2d() << c, -s, s, c).finished()), AlgebraError);
}

TEST_CASE("Cartan duality") {
  Mat3d d = dual(Mat3d(Eigen::Vector3d(2, 0.5, 1).asDiagonal()));
  CHECK((d - Mat3d(Eigen::Vector3d(0.5, 2, 1).asDiagonal())).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((dual(Mat3d::Identity().eval()) - Mat3d::Identity()).cwiseAbs().maxCoeff() == 0);

  Mat3d af;  // fixes the line at infinity: upper-right translation column
  af << 2, 1, 3, 0, 0.5, -1, 0, 0, 1;
  const auto m = AffDualMapd::from_matrix(dual(af));
  CHECK((m.translation - Row2d(-2.5, 2)).norm() < 1e-14);
  CHECK((m.linear - (Mat2d() << 0.5, 0, -1, 2).finished()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("projective incidence") {
  const ProjPointd p(1, 0, 0), q(0, 1, 0);
  const auto line = line_through(p, q);
  CHECK((line.coeffs() - Vec3d(0, 0, 1)).norm() < 1e-15);
  CHECK(incident(ProjPointd(1, 1, 1), ProjLined(1, -1, 0)));
  CHECK_THROWS_AS(line_through(p, p), AlgebraError);
  const auto x = intersection(ProjLined(1, 0, 0), ProjLined(0, 1, 0));
  CHECK((x.coords() - Vec3d(0, 0, 1)).norm() < 1e-15);
}

TEST_CASE("maps act on points and lines compatibly") {
  const AffDualMapd m{(Mat2d() << 3, 1, 2, 1).finished(), Row2d(0.5, -2)};
  const ProjPointd p(1, 2, 3), q(-1, 0.5, 2);
  const auto d = line_through(p, q);
  const auto md = m * d;
  CHECK(incident(m * p, md));
  CHECK(incident(m * q, md));
}

TEST_CASE("fixed points from eigenpairs") {
  const AffDualMapd m{Mat2d(Eigen::Vector2d(4, 0.25).asDiagonal()), Row2d(1, 1)};
  const auto e = eig2(m.linear);
  const ProjPointd rep(eigen_fixed_point(m, e.lambda2, e.v2));
  CHECK(angle_distance(rep, ProjPointd(0, 1, -4.0 / 3)) < 1e-15);
  CHECK(angle_distance(m * rep, rep) < 1e-15);
  CHECK(is_saddle(e));
  const AffDualMapd unit{Mat2d(Eigen::Vector2d(1, 1).asDiagonal()), Row2d(0, 0)};
  CHECK_THROWS(eigen_fixed_point(unit, 1.0, Vec2d(1, 0)));
}
