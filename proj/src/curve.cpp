#include "goldman/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "goldman/detail/rng.hpp"

namespace goldman {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3d fixed_point_for(const AffDualMapd& m, bool repelling) {
  const auto e = try_eig2(m.linear);
  if (!e || !is_saddle(*e)) throw CurveError("element is not hyperbolic");
  const double lambda = repelling ? e->lambda2 : e->lambda1;
  const Vec2d v = repelling ? e->v2 : e->v1;
  return eigen_fixed_point(m, lambda, v);
}

// Difference of two folded samples; directions near 0 and near pi are
// compared through the antipodal rule.
double sample_distance(const CurveSample& a, const CurveSample& b) {
  double dtheta = a.theta - b.theta;
  double bdelta = b.delta;
  if (dtheta > kPi / 2) {
    dtheta -= kPi;
    bdelta = -bdelta;
  } else if (dtheta < -kPi / 2) {
    dtheta += kPi;
    bdelta = -bdelta;
  }
  return std::max(std::abs(dtheta), std::abs(a.delta - bdelta));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Vec3d repelling_fixed_point(const AffDualMapd& m) { return fixed_point_for(m, true); }
Vec3d attracting_fixed_point(const AffDualMapd& m) { return fixed_point_for(m, false); }

Vec3d CurveSample::point() const { return Vec3d(std::cos(theta), std::sin(theta), delta); }

std::optional<CurveSample> fold_point(const Vec3d& p) {
  const double r = std::hypot(p(0), p(1));
  if (!(r > 1e-14 * p.norm())) return std::nullopt;
  double theta = std::atan2(p(1), p(0));
  double delta = p(2) / r;
  if (theta < 0) {
    theta += kPi;
    delta = -delta;
  }
  if (theta >= kPi) {
    theta -= kPi;
    delta = -delta;
  }
  CurveSample s;
  s.theta = theta;
  s.delta = delta;
  return s;
}

JordanCurve::JordanCurve(std::vector<CurveSample> samples, int max_len, std::uint64_t rep_hash)
    : samples_(std::move(samples)), max_len_(max_len), rep_hash_(rep_hash) {
  std::sort(samples_.begin(), samples_.end(), [](const CurveSample& a, const CurveSample& b) {
    if (a.theta != b.theta) return a.theta < b.theta;
    if (a.delta != b.delta) return a.delta < b.delta;
    return a.code < b.code;
  });
  by_fp_.reserve(samples_.size());
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (samples_[i].fingerprint != 0) {
      by_fp_.emplace_back(samples_[i].fingerprint, static_cast<std::uint32_t>(i));
    }
  }
  std::sort(by_fp_.begin(), by_fp_.end());
}

JordanCurve JordanCurve::truncated(int depth) const {
  std::vector<CurveSample> kept;
  for (const auto& s : samples_) {
    if (s.word_len() <= depth) kept.push_back(s);
  }
  return JordanCurve(std::move(kept), std::min(depth, max_len_), rep_hash_);
}

double JordanCurve::delta_at(double theta) const {
  if (samples_.empty()) throw CurveError("empty curve");
  const double k = std::floor(theta / kPi);
  double t = theta - k * kPi;
  double sign = std::fmod(std::abs(k), 2.0) == 1.0 ? -1.0 : 1.0;
  if (t >= kPi) {
    t -= kPi;
    sign = -sign;
  }
  const auto upper = std::upper_bound(samples_.begin(), samples_.end(), t,
                                      [](double v, const CurveSample& s) { return v < s.theta; });
  double t0, d0, t1, d1;
  if (upper == samples_.begin()) {
    t0 = samples_.back().theta - kPi;
    d0 = -samples_.back().delta;
    t1 = upper->theta;
    d1 = upper->delta;
  } else if (upper == samples_.end()) {
    t0 = samples_.back().theta;
    d0 = samples_.back().delta;
    t1 = samples_.front().theta + kPi;
    d1 = -samples_.front().delta;
  } else {
    t0 = (upper - 1)->theta;
    d0 = (upper - 1)->delta;
    t1 = upper->theta;
    d1 = upper->delta;
  }
  const double w = t1 > t0 ? (t - t0) / (t1 - t0) : 0.0;
  return sign * (d0 + w * (d1 - d0));
}

double JordanCurve::delta_xy(double x, double y) const {
  const double r = std::hypot(x, y);
  if (r == 0) return 0;
  return r * delta_at(std::atan2(y, x));
}

double JordanCurve::max_theta_gap() const {
  if (samples_.empty()) return kPi;
  double gap = samples_.front().theta + kPi - samples_.back().theta;
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    gap = std::max(gap, samples_[i].theta - samples_[i - 1].theta);
  }
  return gap;
}

double JordanCurve::max_abs_delta() const {
  double m = 0;
  for (const auto& s : samples_) m = std::max(m, std::abs(s.delta));
  return m;
}

std::optional<std::size_t> JordanCurve::find_fingerprint(std::uint64_t fp) const {
  auto it = std::lower_bound(by_fp_.begin(), by_fp_.end(), std::make_pair(fp, std::uint32_t{0}));
  if (it == by_fp_.end() || it->first != fp) return std::nullopt;
  return it->second;
}

JordanCurve sample_curve(const Representation& rep, int max_len, const SampleOptions& opts) {
  const auto elements = distinct_elements(rep, max_len, opts.threads);
  return sample_curve(rep, elements, max_len, opts);
}

JordanCurve sample_curve(const Representation& rep, std::span<const WordCode> elements,
                         int max_len, const SampleOptions& opts) {
  const int threads = std::max(1, opts.threads);
  const std::size_t n = elements.size();
  std::vector<std::vector<CurveSample>> parts(threads);
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](int worker) {
    try {
      const std::size_t begin = n * worker / threads;
      const std::size_t end = n * (worker + 1) / threads;
      auto& out = parts[worker];
      out.reserve(end - begin);
      for (std::size_t i = begin; i < end; ++i) {
        const AffDualMapd m = rep.eval_code(elements[i]);
        const auto e = try_eig2(m.linear);
        if (!e || !is_saddle(*e)) continue;
        auto s = fold_point(eigen_fixed_point(m, e->lambda2, e->v2));
        if (!s) continue;
        s->code = elements[i];
        s->fingerprint = fingerprint(m);
        out.push_back(*s);
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
  std::vector<CurveSample> all;
  all.reserve(n);
  for (auto& p : parts) {
    all.insert(all.end(), p.begin(), p.end());
    std::vector<CurveSample>().swap(p);
  }
  std::sort(all.begin(), all.end(), [](const CurveSample& a, const CurveSample& b) {
    if (a.theta != b.theta) return a.theta < b.theta;
    if (a.delta != b.delta) return a.delta < b.delta;
    return a.code < b.code;
  });

  // Merge runs of coincident samples, keeping the shortest source word.
  const double tol = opts.dedup_tol;
  std::vector<CurveSample> kept;
  kept.reserve(all.size());
  for (const auto& s : all) {
    if (!kept.empty()) {
      CurveSample& k = kept.back();
      if (std::abs(s.theta - k.theta) < tol && std::abs(s.delta - k.delta) < tol) {
        if (s.code < k.code) k = s;
        continue;
      }
    }
    kept.push_back(s);
  }
  std::vector<CurveSample>().swap(all);
  if (kept.size() >= 2) {
    const CurveSample& f = kept.front();
    const CurveSample& l = kept.back();
    if (f.theta + kPi - l.theta < tol && std::abs(-f.delta - l.delta) < tol) {
      if (l.code < f.code) {
        kept.erase(kept.begin());
      } else {
        kept.pop_back();
      }
    }
  }
  return JordanCurve(std::move(kept), max_len, rep.content_hash());
}

Vec3d conjugacy_f(const JordanCurve& curve, const Vec3d& p) {
  return Vec3d(p(0), p(1), p(2) + curve.delta_xy(p(0), p(1)));
}

Vec3d conjugacy_f_inverse(const JordanCurve& curve, const Vec3d& p) {
  return Vec3d(p(0), p(1), p(2) - curve.delta_xy(p(0), p(1)));
}

EquivarianceReport equivariance_check(const JordanCurve& curve, const Representation& rep,
                                      std::size_t n_samples, std::uint64_t seed) {
  if (curve.empty()) throw CurveError("empty curve");
  EquivarianceReport report;
  report.max_len = curve.max_len();
  const int letters = 4 * rep.genus();
  const auto samples = curve.samples();

  // Exact pairs: the image of the repelling fixed point of g' under g is the
  // repelling fixed point of g g' g^-1. Half of the conjugators undo the first
  // letter of g', so the conjugate is a cyclic rotation of the same length.
  std::mt19937_64 rng(detail::splitmix64(seed));
  for (std::size_t i = 0; i < n_samples; ++i) {
    const CurveSample& s = samples[detail::below(rng, samples.size())];
    const Word w = Word::from_code(s.code);
    int ord;
    if (i % 2 == 0 && !w.empty()) {
      ord = w[0].inverse().ordinal();
    } else {
      ord = static_cast<int>(detail::below(rng, letters));
    }
    const AffDualMapd& g = rep.letter_image(ord);
    const AffDualMapd conj = g * rep.eval_code(s.code) * g.inverse();
    auto predicted = fold_point(g.apply(s.point()));
    if (!predicted) continue;
    if (auto idx = curve.find_fingerprint(fingerprint(conj))) {
      ++report.matched_pairs;
      report.matched_residual =
          std::max(report.matched_residual, sample_distance(*predicted, samples[*idx]));
    } else {
      const auto e = try_eig2(conj.linear);
      if (!e || !is_saddle(*e)) continue;
      auto fresh = fold_point(eigen_fixed_point(conj, e->lambda2, e->v2));
      if (!fresh) continue;
      ++report.fresh_pairs;
      report.fresh_residual = std::max(report.fresh_residual, sample_distance(*predicted, *fresh));
    }
  }

  // Interpolated pairs: f(rho1(g) p) against rho(g) f(p).
  std::mt19937_64 prng(detail::splitmix64(seed ^ 0x5bd1e995ull));
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double phi = kPi * detail::unit_interval(prng);
    const double z = detail::symmetric_unit(prng);
    const int len = 1 + static_cast<int>(detail::below(prng, 4));
    AffDualMapd g;
    int prev = -1;
    for (int k = 0; k < len; ++k) {
      int ord;
      do {
        ord = static_cast<int>(detail::below(prng, letters));
      } while (prev >= 0 && (ord ^ 1) == prev);
      g = g * rep.letter_image(ord);
      prev = ord;
    }
    const Vec3d p(std::cos(phi), std::sin(phi), z);
    const Vec3d lhs = conjugacy_f(curve, AffDualMapd::from_linear(g.linear).apply(p));
    const Vec3d rhs = g.apply(conjugacy_f(curve, p));
    ++report.interpolated_pairs;
    report.interpolated_residual = std::max(report.interpolated_residual, angle_distance(lhs, rhs));
  }
  return report;
}

RegularityReport regularity_probe(const JordanCurve& curve, std::size_t min_samples) {
  if (curve.size() < min_samples) {
    throw CurveError("regularity probe needs at least " + std::to_string(min_samples) +
                     " samples, curve has " + std::to_string(curve.size()));
  }
  RegularityReport report;
  const auto samples = curve.samples();

  // Box counting over u = theta / pi in [0, 1). Each column covers the range
  // of the piecewise-linear graph over it: its samples plus both edge values.
  std::vector<double> xs, ys;
  for (int k = 4; k <= 12; ++k) {
    const std::size_t cols = std::size_t{1} << k;
    const double eps = 1.0 / static_cast<double>(cols);
    std::size_t idx = 0;
    double count = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double u0 = c * eps;
      const double u1 = (c + 1) * eps;
      double lo = curve.delta_at(u0 * kPi);
      double hi = lo;
      const double right = curve.delta_at(u1 * kPi);
      lo = std::min(lo, right);
      hi = std::max(hi, right);
      while (idx < samples.size() && samples[idx].theta / kPi < u1) {
        lo = std::min(lo, samples[idx].delta);
        hi = std::max(hi, samples[idx].delta);
        ++idx;
      }
      count += std::floor(hi / eps) - std::floor(lo / eps) + 1.0;
    }
    report.box_counts.emplace_back(eps, count);
    xs.push_back(std::log(1.0 / eps));
    ys.push_back(std::log(count));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  report.box_dim = sxy / sxx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + report.box_dim * (xs[i] - mx));
    ss += r * r;
  }
  report.fit_residual = std::sqrt(ss / n);

  int depth_max = 0;
  for (const auto& s : samples) depth_max = std::max(depth_max, s.word_len());
  for (int depth = 1; depth <= depth_max; ++depth) {
    DepthSlope row;
    row.depth = depth;
    const CurveSample* first = nullptr;
    const CurveSample* prev = nullptr;
    for (const auto& s : samples) {
      if (s.word_len() > depth) continue;
      if (!first) first = &s;
      if (prev) {
        const double dt = s.theta - prev->theta;
        row.max_gap = std::max(row.max_gap, dt);
        if (dt > 0) row.max_slope = std::max(row.max_slope, std::abs(s.delta - prev->delta) / dt);
      }
      prev = &s;
      ++row.samples;
    }
    if (row.samples >= 2) {
      const double dt = first->theta + kPi - prev->theta;
      row.max_gap = std::max(row.max_gap, dt);
      if (dt > 0) row.max_slope = std::max(row.max_slope, std::abs(-first->delta - prev->delta) / dt);
    }
    report.slopes.push_back(row);
  }
  return report;
}

void write_curve_csv(std::ostream& out, const JordanCurve& curve,
                     std::span<const std::string> comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "theta,x,y,z,delta,word_len,word\n";
  std::string line;
  for (const auto& s : curve.samples()) {
    const ProjPointd p(s.point());
    line.clear();
    line += format_double(s.theta);
    for (int i = 0; i < 3; ++i) {
      line += ',';
      line += format_double(p[i]);
    }
    line += ',';
    line += format_double(s.delta);
    line += ',';
    line += std::to_string(s.word_len());
    line += ',';
    line += Word::from_code(s.code).str();
    line += '\n';
    out << line;
  }
}

JordanCurve read_curve_csv(std::istream& in) {
  std::string line;
  bool header = false;
  std::vector<CurveSample> samples;
  int max_len = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "theta,x,y,z,delta,word_len,word") throw CurveError("unexpected curve CSV header");
      header = true;
      continue;
    }
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 7) {
      throw CurveError("curve CSV line " + std::to_string(lineno) + ": expected 7 fields");
    }
    CurveSample s;
    try {
      s.theta = std::stod(fields[0]);
      s.delta = std::stod(fields[4]);
      s.code = Word::parse(fields[6]).code();
    } catch (const std::exception& e) {
      throw CurveError("curve CSV line " + std::to_string(lineno) + ": " + e.what());
    }
    max_len = std::max(max_len, s.word_len());
    samples.push_back(s);
  }
  if (!header) throw CurveError("curve CSV has no header");
  return JordanCurve(std::move(samples), max_len, 0);
}

}  // namespace goldman
