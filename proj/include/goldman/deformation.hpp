#pragma once

// Translation cocycles over a fixed linear part. With the linear parts
// frozen, the surface relation becomes a linear equation in the 2g
// translation rows; its null space contains the coboundaries (conjugates by
// a translation) and the pure deformations.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "goldman/algebra.hpp"
#include "goldman/representation.hpp"

namespace goldman {

class DeformationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Translation row of the relation product [a1,b1]...[ag,bg] when the
/// generators carry linear parts `linear` and translation rows `t`.
/// Throws when the linear parts do not satisfy the relation to 1e-6.
Row2d relation_map(std::span<const Mat2d> linear, std::span<const Row2d> t);

/// The 2 x 4g matrix of relation_map (columns ordered u1, v1, u2, v2, ...).
Eigen::MatrixXd relation_matrix(std::span<const Mat2d> linear);

/// Orthonormal basis (columns) of the null space of `m`, from a
/// column-pivoted Householder QR of m^T; rank threshold is relative.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double rank_tol = 1e-9);

/// t_i = p (A_i - I): the conjugate of the linear representation by the
/// translation p. Its invariant line is z = p.(x, y).
std::vector<Row2d> coboundary(std::span<const Mat2d> linear, const Row2d& p);

/// The 4g x 2 matrix of p -> coboundary(p).
Eigen::MatrixXd coboundary_matrix(std::span<const Mat2d> linear);

std::vector<Row2d> rows_from_vector(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_rows(std::span<const Row2d> rows);

struct CocycleSolution {
  std::vector<Row2d> t;
  Eigen::MatrixXd basis;        // 4g x k, orthonormal columns spanning the null space
  double relation_residual = 0;  // full 3x3 relation product with t attached
  int pure_dimension = 0;        // null-space dimension minus coboundary rank
};

/// Deterministic pseudo-random element of the cocycle space with Euclidean
/// norm `amplitude`. Coefficients c_k in [-1, 1) on the basis columns come
/// from std::mt19937_64(seed) as (x >> 11) * 2^-53 * 2 - 1, then the
/// combination is rescaled.
CocycleSolution solve_cocycle(const Representation& linear_rep, std::uint64_t seed,
                              double amplitude);

enum class Purity { Pure, NotPure, Indeterminate };

const char* to_string(Purity p);

struct PurityResult {
  Purity verdict = Purity::Indeterminate;
  Row2d fixed_point = Row2d::Zero();  // least-squares p with p (A_i - I) = t_i
  double residual = 0;                // relative: |stacked residual| / |t|
};

struct PurityThresholds {
  double not_pure_below = 1e-8;
  double pure_above = 1e-6;
};

/// Pure iff no translation conjugates the cocycle away, i.e. the holonomy
/// fixes no projective line avoiding the origin.
PurityResult is_pure(const Representation& rep, const PurityThresholds& thresholds = {});

}  // namespace goldman
