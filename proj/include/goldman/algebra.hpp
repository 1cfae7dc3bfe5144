#pragma once

// Small fixed-size linear algebra for the affine-dual group and the
// projective plane. Everything here is closed form: 2x2 spectra come from
// the quadratic formula and 3x3 maps are only ever handled in block form.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace goldman {

template <typename Scalar> using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar> using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar> using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar> using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Row2 = Eigen::Matrix<Scalar, 1, 2>;

using Mat2d = Mat2<double>;
using Mat3d = Mat3<double>;
using Vec2d = Vec2<double>;
using Vec3d = Vec3<double>;
using Row2d = Row2<double>;

/// Default tolerances shared by the numerical gates.
struct Tolerances {
  static constexpr double singular = 1e-12;
  static constexpr double discriminant = 1e-8;
  static constexpr double spectral_gate = 1e-8;
  static constexpr double incidence = 1e-9;
};

class AlgebraError : public std::runtime_error {
 public:
  enum class Kind { Singular, NonRealSpectrum, Degenerate, NotBlockForm };

  AlgebraError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

template <typename Scalar>
Mat2<Scalar> inverse_checked(const Mat2<Scalar>& a,
                             Scalar tol = Scalar(Tolerances::singular)) {
  const Scalar d = a.determinant();
  const Scalar scale = std::max(Scalar(1), a.cwiseAbs().maxCoeff());
  if (std::abs(d) <= tol * scale * scale) {
    throw AlgebraError(AlgebraError::Kind::Singular, "singular 2x2 matrix");
  }
  Mat2<Scalar> inv;
  inv << a(1, 1), -a(0, 1), -a(1, 0), a(0, 0);
  return inv / d;
}

template <typename Scalar>
Mat3<Scalar> inverse_checked(const Mat3<Scalar>& m,
                             Scalar tol = Scalar(Tolerances::singular)) {
  const Scalar d = m.determinant();
  const Scalar scale = std::max(Scalar(1), m.cwiseAbs().maxCoeff());
  if (std::abs(d) <= tol * scale * scale * scale) {
    throw AlgebraError(AlgebraError::Kind::Singular, "singular 3x3 matrix");
  }
  return m.inverse();
}

// ---------------------------------------------------------------------------
// Affine-dual maps
// ---------------------------------------------------------------------------

/// Element of the dual affine group: the projective class of
///
///     | A     0 |
///     | u  v  1 |
///
/// acting on column vectors (x, y, z). The origin [0:0:1] is fixed.
template <typename Scalar>
struct AffDualMap {
  Mat2<Scalar> linear = Mat2<Scalar>::Identity();
  Row2<Scalar> translation = Row2<Scalar>::Zero();

  static AffDualMap identity() { return {}; }

  static AffDualMap from_linear(const Mat2<Scalar>& a) {
    return {a, Row2<Scalar>::Zero()};
  }

  /// Accepts any 3x3 matrix whose upper-right column vanishes; the matrix is
  /// rescaled so that its lower-right entry is 1.
  static AffDualMap from_matrix(const Mat3<Scalar>& m,
                                Scalar tol = Scalar(1e-12)) {
    const Scalar scale = m.cwiseAbs().maxCoeff();
    if (!(scale > 0) || std::abs(m(2, 2)) <= tol * scale) {
      throw AlgebraError(AlgebraError::Kind::NotBlockForm,
                         "matrix does not fix the origin with a finite weight");
    }
    if (std::abs(m(0, 2)) > tol * scale || std::abs(m(1, 2)) > tol * scale) {
      throw AlgebraError(AlgebraError::Kind::NotBlockForm,
                         "upper-right column is not zero");
    }
    const Mat3<Scalar> n = m / m(2, 2);
    AffDualMap out;
    out.linear = n.template topLeftCorner<2, 2>();
    out.translation = n.template block<1, 2>(2, 0);
    return out;
  }

  Mat3<Scalar> matrix() const {
    Mat3<Scalar> m = Mat3<Scalar>::Zero();
    m.template topLeftCorner<2, 2>() = linear;
    m.template block<1, 2>(2, 0) = translation;
    m(2, 2) = Scalar(1);
    return m;
  }

  Scalar det() const { return linear.determinant(); }
  Scalar trace() const { return linear.trace(); }

  AffDualMap inverse() const {
    const Mat2<Scalar> inv = inverse_checked(linear);
    return {inv, -translation * inv};
  }

  Vec3<Scalar> apply(const Vec3<Scalar>& p) const {
    Vec3<Scalar> out;
    out.template head<2>() = linear * p.template head<2>();
    out(2) = translation.dot(p.template head<2>()) + p(2);
    return out;
  }

  // Block multiplication keeps the upper-right column structurally zero.
  friend AffDualMap operator*(const AffDualMap& lhs, const AffDualMap& rhs) {
    return {lhs.linear * rhs.linear, lhs.translation * rhs.linear + rhs.translation};
  }
};

using AffDualMapd = AffDualMap<double>;

/// Largest entry distance between the 3x3 forms.
template <typename Scalar>
Scalar distance(const AffDualMap<Scalar>& a, const AffDualMap<Scalar>& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

/// Cartan duality: M -> (M^T)^{-1}.
template <typename Scalar>
Mat3<Scalar> dual(const Mat3<Scalar>& m) {
  return inverse_checked(Mat3<Scalar>(m.transpose()));
}

/// Rescales a matrix so its largest-magnitude entry is +1.
template <typename Scalar, int R, int C>
Eigen::Matrix<Scalar, R, C> projective_normalize(const Eigen::Matrix<Scalar, R, C>& m) {
  Eigen::Index r = 0, c = 0;
  m.cwiseAbs().maxCoeff(&r, &c);
  const Scalar pivot = m(r, c);
  if (pivot == Scalar(0)) {
    throw AlgebraError(AlgebraError::Kind::Degenerate, "zero matrix has no projective class");
  }
  return m / pivot;
}

template <typename Scalar>
Scalar projective_distance(const Mat3<Scalar>& a, const Mat3<Scalar>& b) {
  return (projective_normalize(a) - projective_normalize(b)).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Spectra of 2x2 matrices
// ---------------------------------------------------------------------------

template <typename Scalar>
struct EigenPair2 {
  Scalar lambda1{};  // |lambda1| >= |lambda2|
  Scalar lambda2{};
  Vec2<Scalar> v1 = Vec2<Scalar>::Zero();
  Vec2<Scalar> v2 = Vec2<Scalar>::Zero();
};

namespace detail {

template <typename Scalar>
Vec2<Scalar> kernel_direction(const Mat2<Scalar>& a, Scalar lambda) {
  const Mat2<Scalar> m = a - lambda * Mat2<Scalar>::Identity();
  const Row2<Scalar> r0 = m.row(0);
  const Row2<Scalar> r1 = m.row(1);
  const Row2<Scalar> r = r0.squaredNorm() >= r1.squaredNorm() ? r0 : r1;
  Vec2<Scalar> v(-r(1), r(0));
  const Scalar n = v.norm();
  if (!(n > 0)) {
    throw AlgebraError(AlgebraError::Kind::Degenerate, "scalar matrix has no eigenline");
  }
  v /= n;
  if (v(0) < 0 || (v(0) == 0 && v(1) < 0)) v = -v;
  return v;
}

}  // namespace detail

/// Real spectrum of a 2x2 matrix, or nullopt when the discriminant
/// tr^2 - 4 det is below the separation tolerance (elliptic or
/// near-parabolic matrices).
template <typename Scalar>
std::optional<EigenPair2<Scalar>> try_eig2(const Mat2<Scalar>& a,
                                           Scalar tol = Scalar(Tolerances::discriminant)) {
  const Scalar tr = a.trace();
  const Scalar det = a.determinant();
  const Scalar disc = tr * tr - Scalar(4) * det;
  if (!(disc >= tol * std::max(Scalar(1), tr * tr))) return std::nullopt;
  const Scalar root = std::sqrt(disc);
  EigenPair2<Scalar> out;
  // Avoid cancellation: the large root from the formula, the small one from det.
  out.lambda1 = tr >= 0 ? (tr + root) / 2 : (tr - root) / 2;
  out.lambda2 = det / out.lambda1;
  out.v1 = detail::kernel_direction(a, out.lambda1);
  out.v2 = detail::kernel_direction(a, out.lambda2);
  return out;
}

template <typename Scalar>
EigenPair2<Scalar> eig2(const Mat2<Scalar>& a, Scalar tol = Scalar(Tolerances::discriminant)) {
  auto e = try_eig2(a, tol);
  if (!e) {
    throw AlgebraError(AlgebraError::Kind::NonRealSpectrum,
                       "complex or near-double spectrum (elliptic/parabolic)");
  }
  return *e;
}

// ---------------------------------------------------------------------------
// Projective points and lines
// ---------------------------------------------------------------------------

namespace detail {

template <typename Scalar>
Vec3<Scalar> normalize_homogeneous(const Vec3<Scalar>& v) {
  const Scalar m = v.cwiseAbs().maxCoeff();
  if (!(m > 0) || !std::isfinite(m)) {
    throw AlgebraError(AlgebraError::Kind::Degenerate, "zero vector is not a projective point");
  }
  Vec3<Scalar> out = v / m;
  // Sign: first coordinate that is not numerically zero is positive.
  for (int i = 0; i < 3; ++i) {
    if (std::abs(out(i)) > Scalar(1e-12)) {
      if (out(i) < 0) out = -out;
      break;
    }
  }
  return out;
}

}  // namespace detail

/// Point of RP^2 in canonical homogeneous coordinates: largest coordinate has
/// magnitude 1 and the first non-negligible coordinate is positive.
template <typename Scalar>
class ProjPoint {
 public:
  ProjPoint() : coords_(Scalar(0), Scalar(0), Scalar(1)) {}
  explicit ProjPoint(const Vec3<Scalar>& v) : coords_(detail::normalize_homogeneous(v)) {}
  ProjPoint(Scalar x, Scalar y, Scalar z) : ProjPoint(Vec3<Scalar>(x, y, z)) {}

  const Vec3<Scalar>& coords() const { return coords_; }
  Scalar operator[](int i) const { return coords_(i); }

  static ProjPoint origin() { return ProjPoint(Scalar(0), Scalar(0), Scalar(1)); }

 private:
  Vec3<Scalar> coords_;
};

/// Line of RP^2 given by the coefficients of a linear form, same normalization.
template <typename Scalar>
class ProjLine {
 public:
  ProjLine() : coeffs_(Scalar(0), Scalar(0), Scalar(1)) {}
  explicit ProjLine(const Vec3<Scalar>& v) : coeffs_(detail::normalize_homogeneous(v)) {}
  ProjLine(Scalar a, Scalar b, Scalar c) : ProjLine(Vec3<Scalar>(a, b, c)) {}

  const Vec3<Scalar>& coeffs() const { return coeffs_; }
  Scalar operator[](int i) const { return coeffs_(i); }

  bool contains_origin(Scalar tol = Scalar(Tolerances::incidence)) const {
    return std::abs(coeffs_(2)) < tol;
  }

 private:
  Vec3<Scalar> coeffs_;
};

using ProjPointd = ProjPoint<double>;
using ProjLined = ProjLine<double>;

template <typename Scalar>
ProjLine<Scalar> line_through(const ProjPoint<Scalar>& p, const ProjPoint<Scalar>& q,
                              Scalar tol = Scalar(1e-12)) {
  const Vec3<Scalar> c = p.coords().cross(q.coords());
  if (c.norm() <= tol) {
    throw AlgebraError(AlgebraError::Kind::Degenerate, "line through coincident points");
  }
  return ProjLine<Scalar>(c);
}

template <typename Scalar>
ProjPoint<Scalar> intersection(const ProjLine<Scalar>& d, const ProjLine<Scalar>& e,
                               Scalar tol = Scalar(1e-12)) {
  const Vec3<Scalar> c = d.coeffs().cross(e.coeffs());
  if (c.norm() <= tol) {
    throw AlgebraError(AlgebraError::Kind::Degenerate, "intersection of coincident lines");
  }
  return ProjPoint<Scalar>(c);
}

template <typename Scalar>
bool incident(const ProjPoint<Scalar>& p, const ProjLine<Scalar>& d,
              Scalar tol = Scalar(Tolerances::incidence)) {
  return std::abs(p.coords().dot(d.coeffs())) < tol;
}

/// Sine of the angle between unit representatives; a metric on RP^2.
template <typename Scalar>
Scalar angle_distance(const Vec3<Scalar>& a, const Vec3<Scalar>& b) {
  return a.cross(b).norm() / (a.norm() * b.norm());
}

template <typename Scalar>
Scalar angle_distance(const ProjPoint<Scalar>& a, const ProjPoint<Scalar>& b) {
  return angle_distance(a.coords(), b.coords());
}

template <typename Scalar>
ProjPoint<Scalar> operator*(const AffDualMap<Scalar>& m, const ProjPoint<Scalar>& p) {
  return ProjPoint<Scalar>(m.apply(p.coords()));
}

/// Image of a line under a projective map: d -> d M^{-1}.
template <typename Scalar>
ProjLine<Scalar> operator*(const AffDualMap<Scalar>& m, const ProjLine<Scalar>& d) {
  const Row2<Scalar> head = d.coeffs().template head<2>().transpose();
  const Scalar c = d.coeffs()(2);
  const AffDualMap<Scalar> inv = m.inverse();
  // (a, b, c) * [A^-1 0; w' 1] = ((a, b) A^-1 + c w', c)
  const Row2<Scalar> out = head * inv.linear + c * inv.translation;
  return ProjLine<Scalar>(Vec3<Scalar>(out(0), out(1), c));
}

/// Fixed point of the 3x3 form attached to an eigenpair (lambda, v) of the
/// linear part: [v : (w.v)/(lambda - 1)].
template <typename Scalar>
Vec3<Scalar> eigen_fixed_point(const AffDualMap<Scalar>& m, Scalar lambda,
                               const Vec2<Scalar>& v) {
  const Scalar denom = lambda - Scalar(1);
  if (std::abs(denom) <= Scalar(Tolerances::spectral_gate)) {
    throw AlgebraError(AlgebraError::Kind::Degenerate, "eigenvalue 1 collides with the origin");
  }
  return Vec3<Scalar>(v(0), v(1), m.translation.dot(v) / denom);
}

/// True when |lambda1| > 1 + gate and |lambda2| < 1 - gate: the origin is a
/// saddle of the 3x3 form.
template <typename Scalar>
bool is_saddle(const EigenPair2<Scalar>& e, Scalar gate = Scalar(Tolerances::spectral_gate)) {
  return std::abs(e.lambda1) > Scalar(1) + gate && std::abs(e.lambda2) < Scalar(1) - gate;
}

}  // namespace goldman
