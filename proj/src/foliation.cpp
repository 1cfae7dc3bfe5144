#include "goldman/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <random>
#include <thread>

#include "goldman/deformation.hpp"
#include "goldman/detail/rng.hpp"

namespace goldman {

namespace {

constexpr double kPi = std::numbers::pi;

double line_height(double a, double b, double theta) { return a * std::cos(theta) + b * std::sin(theta); }

Vec2d slope_of(const ProjLined& d) {
  const Vec3d& c = d.coeffs();
  return Vec2d(-c(0) / c(2), -c(1) / c(2));
}

ProjPointd point_on(double a, double b, double theta) {
  return ProjPointd(std::cos(theta), std::sin(theta), line_height(a, b, theta));
}

// Distance in RP^2 from y to the sampled curve (along its ray) or the origin.
double distance_to_curve_or_origin(const JordanCurve& curve, const Vec3d& y) {
  const double to_origin = angle_distance(y, Vec3d(0, 0, 1));
  auto s = fold_point(y);
  if (!s) return to_origin;
  const Vec3d on_curve(std::cos(s->theta), std::sin(s->theta), curve.delta_at(s->theta));
  return std::min(to_origin, angle_distance(s->point(), on_curve));
}

}  // namespace

FlagPoint FlagPoint::make(const ProjPointd& x, const ProjLined& d) {
  if (d.contains_origin()) throw FoliationError("flag line passes through the origin");
  if (angle_distance(x.coords(), Vec3d(0, 0, 1)) < 1e-6) {
    throw FoliationError("flag point is the origin");
  }
  const double pairing = std::abs(x.coords().dot(d.coeffs())) / (x.coords().norm() * d.coeffs().norm());
  if (pairing > 1e-9) throw FoliationError("flag point is not on the flag line");
  return FlagPoint{x, d};
}

FlagPoint FlagPoint::from_chart(double theta, double z, double a, double b) {
  return make(ProjPointd(std::cos(theta), std::sin(theta), z), ProjLined(a, b, -1.0));
}

Vec2d FlagPoint::slope() const { return slope_of(d); }

double FlagPoint::theta() const {
  auto s = fold_point(x.coords());
  if (!s) throw FoliationError("flag point is the origin");
  return s->theta;
}

double FlagPoint::height() const {
  auto s = fold_point(x.coords());
  if (!s) throw FoliationError("flag point is the origin");
  return s->delta;
}

const char* to_string(EndpointStatus s) {
  switch (s) {
    case EndpointStatus::Distinct: return "distinct";
    case EndpointStatus::Equal: return "equal";
    case EndpointStatus::Ambiguous: return "ambiguous";
  }
  return "?";
}

CurveIndex::CurveIndex(const JordanCurve& curve, int cells)
    : curve_(&curve),
      cells_(cells),
      begin_(cells + 1),
      lo_(cells),
      hi_(cells),
      edge_cos_(cells + 1),
      edge_sin_(cells + 1),
      edge_delta_(cells + 1) {
  if (curve.empty()) throw FoliationError("empty curve");
  const auto samples = curve.samples();
  for (int c = 0; c <= cells_; ++c) {
    const double t = kPi * c / cells_;
    edge_cos_[c] = c == cells_ ? -1.0 : std::cos(t);
    edge_sin_[c] = c == cells_ ? 0.0 : std::sin(t);
    edge_delta_[c] = c == cells_ ? -curve.delta_at(0) : curve.delta_at(t);
  }
  std::size_t idx = 0;
  for (int c = 0; c < cells_; ++c) {
    const double t1 = kPi * (c + 1) / cells_;
    begin_[c] = idx;
    double lo = std::min(edge_delta_[c], edge_delta_[c + 1]);
    double hi = std::max(edge_delta_[c], edge_delta_[c + 1]);
    while (idx < samples.size() && samples[idx].theta < t1) {
      lo = std::min(lo, samples[idx].delta);
      hi = std::max(hi, samples[idx].delta);
      ++idx;
    }
    lo_[c] = lo;
    hi_[c] = hi;
  }
  begin_[cells_] = samples.size();
}

CurveIndex::Crossings CurveIndex::crossings(double a, double b) const {
  const auto samples = curve_->samples();
  Crossings out;
  std::vector<double> raw_heights;  // arcs from 0, between crossings, to pi
  double critical = std::atan2(b, a);
  if (critical < 0) critical += kPi;
  if (critical >= kPi) critical -= kPi;
  const int critical_cell = std::min(cells_ - 1, static_cast<int>(critical / kPi * cells_));

  auto edge_g = [&](int c) { return a * edge_cos_[c] + b * edge_sin_[c] - edge_delta_[c]; };
  double prev_theta = 0;
  double prev_g = edge_g(0);
  double arc = std::abs(prev_g);
  auto visit = [&](double theta, double g) {
    arc = std::max(arc, std::abs(g));
    if ((g >= 0) != (prev_g >= 0)) {
      const double t = prev_theta + (theta - prev_theta) * prev_g / (prev_g - g);
      out.thetas.push_back(t);
      raw_heights.push_back(arc);
      arc = std::abs(g);
    }
    prev_theta = theta;
    prev_g = g;
  };

  for (int c = 0; c < cells_; ++c) {
    const double h0 = a * edge_cos_[c] + b * edge_sin_[c];
    const double h1 = a * edge_cos_[c + 1] + b * edge_sin_[c + 1];
    double hmin = std::min(h0, h1);
    double hmax = std::max(h0, h1);
    if (c == critical_cell) {
      // h is a sinusoid with its extremum inside this cell.
      const double hc = line_height(a, b, critical);
      hmin = std::min(hmin, hc);
      hmax = std::max(hmax, hc);
    }
    const double gmin = hmin - hi_[c];
    const double gmax = hmax - lo_[c];
    const double t1 = kPi * (c + 1) / cells_;
    const double g1 = edge_g(c + 1);
    if (gmin > 0 || gmax < 0) {
      // One sign over the whole cell.
      arc = std::max(arc, gmin > 0 ? gmin : -gmax);
      visit(t1, g1);
      continue;
    }
    for (std::size_t i = begin_[c]; i < begin_[c + 1]; ++i) {
      visit(samples[i].theta, line_height(a, b, samples[i].theta) - samples[i].delta);
    }
    visit(t1, g1);
  }
  raw_heights.push_back(arc);

  const std::size_t n = out.thetas.size();
  out.arc_heights.resize(n);
  for (std::size_t i = 0; i + 1 < n; ++i) out.arc_heights[i] = raw_heights[i + 1];
  if (n > 0) out.arc_heights[n - 1] = std::max(raw_heights[n], raw_heights[0]);
  return out;
}

EndpointPair endpoints(const CurveIndex& index, const FlagPoint& flag, const EndpointOptions& opts) {
  const JordanCurve& curve = index.curve();
  const Vec2d ab = flag.slope();
  const double theta_x = flag.theta();
  const double gx = flag.height() - curve.delta_at(theta_x);
  if (std::abs(gx) < opts.dead_zone) throw FoliationError("degenerate flag: point is on the curve");

  const auto cr = index.crossings(ab(0), ab(1));
  EndpointPair out;
  out.crossings = cr.thetas.size();
  if (cr.thetas.empty()) throw FoliationError("line does not meet the sampled curve");
  out.min_arc_height = *std::min_element(cr.arc_heights.begin(), cr.arc_heights.end());

  const auto upper = std::upper_bound(cr.thetas.begin(), cr.thetas.end(), theta_x);
  const double beta = upper == cr.thetas.end() ? cr.thetas.front() : *upper;
  const double alpha = upper == cr.thetas.begin() ? cr.thetas.back() : *(upper - 1);
  out.alpha_theta = alpha;
  out.beta_theta = beta;
  out.alpha = point_on(ab(0), ab(1), alpha);
  out.beta = point_on(ab(0), ab(1), beta);
  // Crossings bounding an arc shallower than the dead zone may be a single
  // tangency; discard both and decide on what is left.
  const std::size_t n = cr.thetas.size();
  std::vector<char> shaky(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (cr.arc_heights[i] < opts.dead_zone) shaky[i] = shaky[(i + 1) % n] = 1;
  }
  const auto robust = static_cast<std::size_t>(std::count(shaky.begin(), shaky.end(), 0));
  out.robust_crossings = robust;
  if (n == 1) {
    out.status = EndpointStatus::Equal;
  } else if (robust >= 2) {
    out.status = EndpointStatus::Distinct;
  } else {
    out.status = EndpointStatus::Ambiguous;
  }
  return out;
}

EndpointPair endpoints(const JordanCurve& curve, const FlagPoint& flag, const EndpointOptions& opts) {
  const CurveIndex index(curve, opts.cells);
  return endpoints(index, flag, opts);
}

InvariantLine invariant_line(const Representation& rep, const Word& w, const JordanCurve* curve) {
  const AffDualMapd m = rep.eval(w);
  const auto e = try_eig2(m.linear);
  if (!e || !is_saddle(*e)) throw FoliationError("element " + w.str() + " is not hyperbolic");
  InvariantLine out;
  out.attracting = ProjPointd(eigen_fixed_point(m, e->lambda1, e->v1));
  out.repelling = ProjPointd(eigen_fixed_point(m, e->lambda2, e->v2));
  out.line = line_through(out.attracting, out.repelling);
  if (out.line.contains_origin()) throw FoliationError("invariant line passes through the origin");
  if (curve) {
    const Vec2d ab = slope_of(out.line);
    for (const auto& s : curve->samples()) {
      out.max_height = std::max(out.max_height, std::abs(line_height(ab(0), ab(1), s.theta) - s.delta));
    }
    out.meets_complement = out.max_height > 1e-6;
  }
  return out;
}

std::optional<FlagRecord> invariant_line_witness(const Representation& rep, const CurveIndex& index,
                                                 const Word& w, const EndpointOptions& opts) {
  const JordanCurve& curve = index.curve();
  const InvariantLine il = invariant_line(rep, w, &curve);
  if (!il.meets_complement) return std::nullopt;
  const Vec2d ab = slope_of(il.line);
  // x where the line is farthest from the curve.
  double best = -1, best_theta = 0;
  const int grid = 8192;
  for (int k = 0; k < grid; ++k) {
    const double t = kPi * (k + 0.5) / grid;
    const double g = std::abs(line_height(ab(0), ab(1), t) - curve.delta_at(t));
    if (g > best) {
      best = g;
      best_theta = t;
    }
  }
  FlagRecord rec;
  rec.flag = FlagPoint::make(point_on(ab(0), ab(1), best_theta), il.line);
  rec.ends = endpoints(index, rec.flag, opts);
  if (rec.ends.status != EndpointStatus::Distinct) return std::nullopt;
  return rec;
}

ClassifyReport classify_flags(const Representation& rep, const JordanCurve& curve,
                              const ClassifyOptions& opts) {
  ClassifyReport report;
  const PurityResult purity = is_pure(rep);
  if (purity.verdict != Purity::Pure) {
    report.refused = true;
    const Row2d& p = purity.fixed_point;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "representation is %s: the holonomy fixes the line z = %.9g x + %.9g y "
                  "(relative residual %.3g), the curve is that line and every flag has "
                  "alpha = beta",
                  to_string(purity.verdict), p(0) == 0 ? 0.0 : p(0), p(1) == 0 ? 0.0 : p(1),
                  purity.residual);
    report.diagnosis = buf;
    return report;
  }
  if (curve.empty()) throw FoliationError("empty curve");

  const CurveIndex index(curve, opts.endpoint.cells);
  const double amp = std::max(curve.max_abs_delta(), 1e-3);
  const std::size_t n = opts.n_samples;
  std::vector<FlagRecord> records(n);
  std::vector<char> ok(n, 0);
  const int threads = std::max(1, opts.threads);
  std::vector<std::exception_ptr> errors(threads);

  auto work = [&](int worker) {
    try {
      for (std::size_t i = worker; i < n; i += threads) {
        std::mt19937_64 rng(detail::splitmix64(opts.seed ^ detail::splitmix64(i)));
        const double theta = kPi * detail::unit_interval(rng);
        const double h = 2 * amp * detail::symmetric_unit(rng);
        const double s = 2 * amp * detail::symmetric_unit(rng);
        const double z = curve.delta_at(theta) + h;
        const double c = std::cos(theta), sn = std::sin(theta);
        records[i].index = i;
        try {
          records[i].flag = FlagPoint::from_chart(theta, z, z * c - s * sn, z * sn + s * c);
          records[i].ends = endpoints(index, records[i].flag, opts.endpoint);
          ok[i] = 1;
        } catch (const FoliationError&) {
          ok[i] = 0;
        } catch (const AlgebraError&) {
          ok[i] = 0;
        }
      }
    } catch (...) {
      errors[worker] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  report.sampled = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!ok[i] || records[i].ends.status == EndpointStatus::Ambiguous) {
      ++report.skipped;
      continue;
    }
    if (records[i].ends.status == EndpointStatus::Distinct) {
      ++report.distinct;
      if (!report.witness_distinct) report.witness_distinct = records[i];
    } else {
      ++report.equal;
      if (!report.witness_equal) report.witness_equal = records[i];
    }
  }
  const std::size_t classified = report.distinct + report.equal;
  report.fraction_distinct = classified ? static_cast<double>(report.distinct) / classified : 0.0;

  report.constructed_witness = invariant_line_witness(rep, index, opts.fallback_word, opts.endpoint);
  if (!report.witness_distinct && report.constructed_witness) {
    report.witness_distinct = report.constructed_witness;
    report.witness_from_fallback = true;
  }
  return report;
}

std::vector<OrbitRow> orbit_accumulation_probe(const Representation& rep, const JordanCurve& curve,
                                               const FlagPoint& flag, int max_len,
                                               std::size_t per_length, std::uint64_t seed) {
  const int letters = 4 * rep.genus();
  std::vector<OrbitRow> rows;
  for (int len = 0; len <= max_len; ++len) {
    std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(static_cast<std::uint64_t>(len))));
    const std::size_t count = len == 0 ? 1 : per_length;
    std::vector<double> dist;
    dist.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
      AffDualMapd g;
      int prev = -1;
      for (int i = 0; i < len; ++i) {
        int ord;
        do {
          ord = static_cast<int>(detail::below(rng, letters));
        } while (prev >= 0 && (ord ^ 1) == prev);
        g = g * rep.letter_image(ord);
        prev = ord;
      }
      dist.push_back(distance_to_curve_or_origin(curve, g.apply(flag.x.coords())));
    }
    std::sort(dist.begin(), dist.end());
    OrbitRow row;
    row.length = len;
    row.samples = dist.size();
    row.min_distance = dist.front();
    row.median_distance = dist.size() % 2 ? dist[dist.size() / 2]
                                          : 0.5 * (dist[dist.size() / 2 - 1] + dist[dist.size() / 2]);
    rows.push_back(row);
  }
  return rows;
}

bool non_increasing_medians(const std::vector<OrbitRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].median_distance > rows[i - 1].median_distance) return false;
  }
  return true;
}

}  // namespace goldman
