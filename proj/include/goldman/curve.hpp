#pragma once

// The invariant Jordan curve as a graph over ray directions. A point of the
// curve in direction theta is [cos theta : sin theta : delta(theta)]; the
// samples are repelling fixed points of swept group elements.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "goldman/algebra.hpp"
#include "goldman/representation.hpp"
#include "goldman/words.hpp"

namespace goldman {

class CurveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigenline of the smallest eigenvalue of the 3x3 form, as a homogeneous
/// vector [v2 : (w.v2)/(lambda2 - 1)] with v2 a unit vector. Throws
/// CurveError when the linear part is not a saddle.
Vec3d repelling_fixed_point(const AffDualMapd& m);
/// Same for the largest eigenvalue.
Vec3d attracting_fixed_point(const AffDualMapd& m);

struct CurveSample {
  double theta = 0;  // in [0, pi)
  double delta = 0;  // z-coordinate over the unit direction
  WordCode code = 0;
  std::uint64_t fingerprint = 0;

  int word_len() const { return word_length(code); }
  Vec3d point() const;  // (cos theta, sin theta, delta)
};

/// Direction and height of a homogeneous point off the origin, folded so that
/// theta lies in [0, pi).
std::optional<CurveSample> fold_point(const Vec3d& p);

struct SampleOptions {
  int threads = 1;
  double dedup_tol = 1e-10;
};

class JordanCurve {
 public:
  JordanCurve() = default;
  JordanCurve(std::vector<CurveSample> samples, int max_len, std::uint64_t rep_hash);

  std::span<const CurveSample> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  int max_len() const { return max_len_; }
  std::uint64_t rep_hash() const { return rep_hash_; }

  /// Samples whose source word has length <= depth.
  JordanCurve truncated(int depth) const;

  /// Piecewise-linear delta at any angle, using delta(theta + pi) = -delta(theta).
  double delta_at(double theta) const;
  /// Degree-one extension: delta(x, y) = |(x, y)| delta_at(atan2(y, x)).
  double delta_xy(double x, double y) const;

  /// Largest gap between consecutive sample directions, wrap included.
  double max_theta_gap() const;
  double max_abs_delta() const;

  /// Index of the stored sample with this fingerprint, if any.
  std::optional<std::size_t> find_fingerprint(std::uint64_t fp) const;

 private:
  std::vector<CurveSample> samples_;  // sorted by theta
  std::vector<std::pair<std::uint64_t, std::uint32_t>> by_fp_;
  int max_len_ = 0;
  std::uint64_t rep_hash_ = 0;
};

JordanCurve sample_curve(const Representation& rep, int max_len, const SampleOptions& opts = {});
/// Variant reusing a precomputed list of distinct elements.
JordanCurve sample_curve(const Representation& rep, std::span<const WordCode> elements,
                         int max_len, const SampleOptions& opts = {});

/// (x, y, z) -> (x, y, z + delta(x, y)); the origin is fixed.
Vec3d conjugacy_f(const JordanCurve& curve, const Vec3d& p);
Vec3d conjugacy_f_inverse(const JordanCurve& curve, const Vec3d& p);

struct EquivarianceReport {
  int max_len = 0;
  std::size_t matched_pairs = 0;  // image found among stored samples by fingerprint
  double matched_residual = 0;
  std::size_t fresh_pairs = 0;  // image recomputed from the conjugated element
  double fresh_residual = 0;
  std::size_t interpolated_pairs = 0;
  double interpolated_residual = 0;  // max angle distance f(rho1(g) p) vs rho(g) f(p)
};

/// Tests delta(A w) = delta(w) + t.w on stored samples (exact fixed points of
/// conjugated elements) and the conjugacy relation at random points with
/// interpolated delta. The random pairs depend only on `seed`, so runs at
/// different depths see the same pairs.
EquivarianceReport equivariance_check(const JordanCurve& curve, const Representation& rep,
                                      std::size_t n_samples, std::uint64_t seed = 1);

struct DepthSlope {
  int depth = 0;
  std::size_t samples = 0;
  double max_slope = 0;
  double max_gap = 0;
};

struct RegularityReport {
  double box_dim = 0;
  double fit_residual = 0;  // rms of the log-log fit
  std::vector<std::pair<double, double>> box_counts;  // (scale, count)
  std::vector<DepthSlope> slopes;
};

/// Box counting of the (theta / pi, delta) graph at scales 2^-4 .. 2^-12 and
/// the largest |d delta / d theta| between adjacent samples for each depth.
RegularityReport regularity_probe(const JordanCurve& curve, std::size_t min_samples = 1000);

/// CSV with header theta,x,y,z,delta,word_len,word. `comments` lines are
/// emitted first, each prefixed with "# ".
void write_curve_csv(std::ostream& out, const JordanCurve& curve,
                     std::span<const std::string> comments = {});
JordanCurve read_curve_csv(std::istream& in);

/// Affine: (y/x, z/x), defined off the line x = 0. AffineY: (x/y, z/y).
/// Ray: (theta, delta), the graph itself.
enum class Chart { Affine, AffineY, Ray };

const char* to_string(Chart c);
Chart chart_from_string(const std::string& s);

struct Window {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool valid() const { return x1 > x0 && y1 > y0; }
};

struct SvgOptions {
  Chart chart = Chart::Affine;
  std::optional<Window> window;  // chart coordinates; automatic when absent
  int width = 800;
  int height = 800;
  std::string title;
  std::vector<std::string> comments;  // embedded as XML comments
};

/// Chart coordinates of a curve point (nullopt where the chart is undefined).
std::optional<Vec2d> chart_coords(Chart chart, const Vec3d& p);

/// Polyline plot of the curve in a chart. Samples are aggregated per quarter
/// pixel column (first, min, max, last), which keeps every visible extreme
/// while bounding the file size. Output depends only on the inputs.
void render_svg(std::ostream& out, const JordanCurve& curve, const SvgOptions& opts);

}  // namespace goldman
