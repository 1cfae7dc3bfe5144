#pragma once

// Flags (x, d) off the origin and the endpoints on the curve of the component
// of d minus the curve that contains x. A line d avoiding the origin is
// z = a x + b y; over the ray direction theta it sits at height
// h(theta) = a cos theta + b sin theta, so d meets the curve exactly where
// g(theta) = h(theta) - delta(theta) changes sign. Since g(theta + pi) =
// -g(theta), the number of crossings over [0, pi) is odd.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "goldman/algebra.hpp"
#include "goldman/curve.hpp"
#include "goldman/representation.hpp"

namespace goldman {

class FoliationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FlagPoint {
  ProjPointd x;
  ProjLined d;

  /// Validates incidence, x away from the origin and d avoiding the origin.
  static FlagPoint make(const ProjPointd& x, const ProjLined& d);
  /// Flag at direction theta, height z, on the line z = a x + b y.
  static FlagPoint from_chart(double theta, double z, double a, double b);

  /// (a, b) with d: z = a x + b y.
  Vec2d slope() const;
  /// Direction of x in [0, pi) and its height over the unit direction.
  double theta() const;
  double height() const;
};

enum class EndpointStatus { Distinct, Equal, Ambiguous };

const char* to_string(EndpointStatus s);

struct EndpointPair {
  EndpointStatus status = EndpointStatus::Ambiguous;
  ProjPointd alpha;
  ProjPointd beta;
  double alpha_theta = 0;
  double beta_theta = 0;
  std::size_t crossings = 0;
  std::size_t robust_crossings = 0;  // crossings not bounding a dead-zone arc
  double min_arc_height = 0;  // smallest max|g| over the arcs between crossings

  bool equal() const { return status == EndpointStatus::Equal; }
};

struct EndpointOptions {
  double dead_zone = 1e-6;  // chart heights below this are not trusted
  int cells = 4096;
};

/// Cell index over the sampled curve: per-cell ranges of delta let each
/// flag scan only the cells where its line may cross the curve.
class CurveIndex {
 public:
  explicit CurveIndex(const JordanCurve& curve, int cells = 4096);

  const JordanCurve& curve() const { return *curve_; }

  /// Directions in [0, pi) where g changes sign, for the line (a, b), plus the
  /// smallest arc height between consecutive crossings.
  struct Crossings {
    std::vector<double> thetas;
    std::vector<double> arc_heights;  // arc_heights[i]: arc from thetas[i] to thetas[i+1] (cyclic)
  };
  Crossings crossings(double a, double b) const;

 private:
  const JordanCurve* curve_;
  int cells_;
  std::vector<std::size_t> begin_;  // first sample index per cell, plus end
  std::vector<double> lo_, hi_;     // range of the interpolated delta per cell
  std::vector<double> edge_cos_, edge_sin_, edge_delta_;  // at theta = pi c / cells
};

EndpointPair endpoints(const CurveIndex& index, const FlagPoint& flag, const EndpointOptions& opts = {});
EndpointPair endpoints(const JordanCurve& curve, const FlagPoint& flag, const EndpointOptions& opts = {});

struct InvariantLine {
  ProjLined line;
  ProjPointd attracting;
  ProjPointd repelling;
  bool meets_complement = false;  // the line leaves the sampled curve
  double max_height = 0;          // max |g| along the line
};

/// Line through the two fixed points of rho(w) other than the origin.
InvariantLine invariant_line(const Representation& rep, const Word& w, const JordanCurve* curve = nullptr);

struct ClassifyOptions {
  std::size_t n_samples = 10000;
  std::uint64_t seed = 1;
  int threads = 1;
  EndpointOptions endpoint;
  Word fallback_word = Word::parse("a1");
};

struct FlagRecord {
  std::size_t index = 0;
  FlagPoint flag;
  EndpointPair ends;
};

struct ClassifyReport {
  bool refused = false;
  std::string diagnosis;
  std::size_t sampled = 0;
  std::size_t distinct = 0;
  std::size_t equal = 0;
  std::size_t skipped = 0;  // ambiguous or degenerate
  double fraction_distinct = 0;
  std::optional<FlagRecord> witness_distinct;  // first random flag with alpha != beta
  std::optional<FlagRecord> witness_equal;
  std::optional<FlagRecord> constructed_witness;  // from an invariant line
  bool witness_from_fallback = false;
};

/// Seeded flag sampling; flag i depends only on (seed, i). Non-pure input is
/// refused with a diagnosis (the curve is a line and every flag has alpha = beta).
ClassifyReport classify_flags(const Representation& rep, const JordanCurve& curve,
                              const ClassifyOptions& opts = {});

/// Witness of alpha != beta on the invariant line of `w`, with x at the point
/// of the line farthest from the curve.
std::optional<FlagRecord> invariant_line_witness(const Representation& rep, const CurveIndex& index,
                                                 const Word& w, const EndpointOptions& opts = {});

struct OrbitRow {
  int length = 0;
  std::size_t samples = 0;
  double min_distance = 0;
  double median_distance = 0;
};

/// Distance from rho(g) x to the sampled curve union the origin, for random
/// reduced words g of each length 0..max_len.
std::vector<OrbitRow> orbit_accumulation_probe(const Representation& rep, const JordanCurve& curve,
                                               const FlagPoint& flag, int max_len,
                                               std::size_t per_length = 64, std::uint64_t seed = 1);

/// True when the per-length medians never increase.
bool non_increasing_medians(const std::vector<OrbitRow>& rows);

}  // namespace goldman
