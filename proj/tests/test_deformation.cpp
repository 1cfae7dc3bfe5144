#include <doctest.h>

#include <random>

#include "goldman/deformation.hpp"

using namespace goldman;

namespace {

const Representation& base() {
  static const Representation rep = Representation::fuchsian(2);
  return rep;
}

}  // namespace

TEST_CASE("relation map on cocycles") {
  const auto linear = base().linear_parts();
  const std::vector<Row2d> zeros(4, Row2d::Zero());
  CHECK(relation_map(linear, zeros).norm() == 0);
  CHECK(relation_map(linear, coboundary(linear, Row2d(3, -1))).norm() < 1e-10);
}

TEST_CASE("relation map matches the translation row of the 3x3 product") {
  const auto linear = base().linear_parts();
  const Eigen::MatrixXd m = relation_matrix(linear);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 8);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Row2d> t(4);
    for (auto& r : t) r = Row2d(u(rng), u(rng));
    // the translation row depends linearly on t; compare with small-t products
    const double eps = 1e-7;
    std::vector<Row2d> small(4);
    for (int i = 0; i < 4; ++i) small[i] = eps * t[i];
    const auto rel = base().with_cocycle(small).eval(surface_relator(2));
    const Row2d fd = rel.translation / eps;
    const Eigen::VectorXd lin = m * vector_from_rows(t);
    // the relator evaluates to +-I; its sign is absorbed by the 3x3 scale
    const double sign = rel.linear(0, 0) > 0 ? 1 : -1;
    CHECK((sign * fd.transpose() - lin).norm() < 1e-5 * (1 + lin.norm()));
  }
}

TEST_CASE("null space dimension and coboundaries") {
  const auto linear = base().linear_parts();
  const Eigen::MatrixXd basis = null_space(relation_matrix(linear));
  CHECK(basis.cols() >= 6);
  CHECK((basis.transpose() * basis - Eigen::MatrixXd::Identity(basis.cols(), basis.cols())).norm() < 1e-12);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd t = vector_from_rows(coboundary(linear, Row2d(u(rng), u(rng))));
    CHECK((t - basis * (basis.transpose() * t)).norm() < 1e-9 * (1 + t.norm()));
  }
}

TEST_CASE("solve_cocycle") {
  const auto a = solve_cocycle(base(), 42, 0.1);
  CHECK(vector_from_rows(a.t).norm() == doctest::Approx(0.1));
  CHECK(a.relation_residual < 1e-8);
  CHECK(a.pure_dimension >= 4);
  CHECK(a.t[0](0) == doctest::Approx(-0.060360).epsilon(1e-4));
  const auto b = solve_cocycle(base(), 42, 0.1);
  CHECK(vector_from_rows(a.t) == vector_from_rows(b.t));
  const auto c = solve_cocycle(base(), 43, 0.1);
  CHECK((vector_from_rows(a.t) - vector_from_rows(c.t)).norm() > 1e-3);
  CHECK(vector_from_rows(solve_cocycle(base(), 42, 0.0).t).norm() == 0);
}

TEST_CASE("purity") {
  const auto linear = base().linear_parts();
  const auto zero = is_pure(base());
  CHECK(zero.verdict == Purity::NotPure);
  CHECK(zero.fixed_point.norm() == 0);

  const Row2d p(3, -1);
  const auto cob = is_pure(base().with_cocycle(coboundary(linear, p)));
  CHECK(cob.verdict == Purity::NotPure);
  CHECK((cob.fixed_point - p).norm() < 1e-8);

  const auto pure = is_pure(base().with_cocycle(solve_cocycle(base(), 42, 0.1).t));
  CHECK(pure.verdict == Purity::Pure);
  CHECK(pure.residual > 0.1);

  // a pure direction plus a coboundary stays pure
  auto t = solve_cocycle(base(), 42, 0.1).t;
  const auto c = coboundary(linear, Row2d(0.5, 0.25));
  for (int i = 0; i < 4; ++i) t[i] += c[i];
  CHECK(is_pure(base().with_cocycle(t)).verdict == Purity::Pure);
}
