#include "goldman/deformation.hpp"

#include <random>

#include "goldman/detail/rng.hpp"

namespace goldman {

namespace {

// Relation product for frozen linear parts, generic in the translation rows.
AffDualMapd relation_product(std::span<const Mat2d> linear, std::span<const Row2d> t) {
  if (linear.size() != t.size() || linear.size() % 2 != 0 || linear.empty()) {
    throw DeformationError("expected 2g linear parts and 2g translation rows");
  }
  AffDualMapd out;
  for (std::size_t i = 0; i < linear.size(); i += 2) {
    const AffDualMapd a{linear[i], t[i]};
    const AffDualMapd b{linear[i + 1], t[i + 1]};
    out = out * a * b * a.inverse() * b.inverse();
  }
  return out;
}

}  // namespace

Row2d relation_map(std::span<const Mat2d> linear, std::span<const Row2d> t) {
  const AffDualMapd r = relation_product(linear, t);
  const double linear_residual = (r.linear - Mat2d::Identity()).cwiseAbs().maxCoeff();
  if (linear_residual > 1e-6) {
    throw DeformationError("linear parts do not satisfy the surface relation (residual " +
                           std::to_string(linear_residual) + ")");
  }
  return r.translation;
}

Eigen::MatrixXd relation_matrix(std::span<const Mat2d> linear) {
  const Eigen::Index n = static_cast<Eigen::Index>(2 * linear.size());
  Eigen::MatrixXd m(2, n);
  std::vector<Row2d> t(linear.size(), Row2d::Zero());
  for (Eigen::Index j = 0; j < n; ++j) {
    t[j / 2](j % 2) = 1.0;
    m.col(j) = relation_map(linear, t).transpose();
    t[j / 2](j % 2) = 0.0;
  }
  return m;
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double rank_tol) {
  const Eigen::MatrixXd mt = m.transpose();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(mt);
  qr.setThreshold(rank_tol);
  const Eigen::Index rank = qr.rank();
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(mt.rows(), mt.rows());
  return q.rightCols(mt.rows() - rank);
}

std::vector<Row2d> coboundary(std::span<const Mat2d> linear, const Row2d& p) {
  std::vector<Row2d> t;
  t.reserve(linear.size());
  for (const Mat2d& a : linear) t.push_back(p * (a - Mat2d::Identity()));
  return t;
}

Eigen::MatrixXd coboundary_matrix(std::span<const Mat2d> linear) {
  Eigen::MatrixXd m(2 * linear.size(), 2);
  for (int k = 0; k < 2; ++k) {
    Row2d p = Row2d::Zero();
    p(k) = 1.0;
    m.col(k) = vector_from_rows(coboundary(linear, p));
  }
  return m;
}

std::vector<Row2d> rows_from_vector(const Eigen::VectorXd& v) {
  std::vector<Row2d> rows(v.size() / 2);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = Row2d(v(2 * i), v(2 * i + 1));
  return rows;
}

Eigen::VectorXd vector_from_rows(std::span<const Row2d> rows) {
  Eigen::VectorXd v(2 * rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    v(2 * i) = rows[i](0);
    v(2 * i + 1) = rows[i](1);
  }
  return v;
}

CocycleSolution solve_cocycle(const Representation& linear_rep, std::uint64_t seed,
                              double amplitude) {
  const auto linear = linear_rep.linear_parts();
  const int genus = linear_rep.genus();
  const Eigen::MatrixXd m = relation_matrix(linear);

  CocycleSolution sol;
  sol.basis = null_space(m);
  const Eigen::Index dim = sol.basis.cols();
  if (dim < 4 * genus - 2) {
    throw DeformationError("cocycle space has dimension " + std::to_string(dim) +
                           ", expected at least " + std::to_string(4 * genus - 2));
  }
  const Eigen::MatrixXd cob = coboundary_matrix(linear);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> cob_qr(cob);
  cob_qr.setThreshold(1e-9);
  sol.pure_dimension = static_cast<int>(dim - cob_qr.rank());

  Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * linear.size());
  if (amplitude != 0.0) {
    std::mt19937_64 rng(seed);
    Eigen::VectorXd coeffs(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      coeffs(k) = detail::symmetric_unit(rng);
    }
    v = sol.basis * coeffs;
    v *= amplitude / v.norm();
  }
  sol.t = rows_from_vector(v);
  sol.relation_residual = linear_rep.with_cocycle(sol.t).relation_residual();
  return sol;
}

const char* to_string(Purity p) {
  switch (p) {
    case Purity::Pure: return "pure";
    case Purity::NotPure: return "not_pure";
    case Purity::Indeterminate: return "indeterminate";
  }
  return "?";
}

PurityResult is_pure(const Representation& rep, const PurityThresholds& thresholds) {
  const auto linear = rep.linear_parts();
  const auto t = rep.translations();
  const Eigen::VectorXd rhs = vector_from_rows(t);
  PurityResult out;
  const double scale = rhs.norm();
  if (scale == 0.0) {
    out.verdict = Purity::NotPure;
    return out;
  }
  // Stack p (A_i - I) = t_i as a 4g x 2 system in p.
  const Eigen::MatrixXd sys = coboundary_matrix(linear);
  const Eigen::Vector2d p = sys.colPivHouseholderQr().solve(rhs);
  out.fixed_point = p.transpose();
  out.residual = (sys * p - rhs).norm() / scale;
  if (out.residual < thresholds.not_pure_below) {
    out.verdict = Purity::NotPure;
  } else if (out.residual >= thresholds.pure_above) {
    out.verdict = Purity::Pure;
  } else {
    out.verdict = Purity::Indeterminate;
  }
  return out;
}

}  // namespace goldman
