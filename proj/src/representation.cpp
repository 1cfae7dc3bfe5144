#include "goldman/representation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "goldman/detail/rng.hpp"

namespace goldman {

namespace {

Mat2d rotation(double angle) {
  Mat2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

void append_float(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

std::uint64_t fingerprint(const AffDualMapd& m) {
  const std::array<double, 7> entries{m.linear(0, 0), m.linear(0, 1), m.linear(1, 0),
                                      m.linear(1, 1), m.translation(0), m.translation(1), 1.0};
  double scale = 0;
  for (double e : entries) scale = std::max(scale, std::abs(e));
  std::uint64_t h = 0x6a09e667f3bcc908ull;
  for (double e : entries) {
    const long long q = std::llround(e / scale * 1e9);
    h = detail::splitmix64(h ^ static_cast<std::uint64_t>(q));
  }
  return h;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Representation::Representation(int genus, std::vector<AffDualMapd> generators)
    : genus_(genus), generators_(std::move(generators)), cache_(std::make_shared<Cache>()) {
  if (genus_ < 1) throw RepresentationError("genus must be positive");
  if (generators_.size() != static_cast<std::size_t>(2 * genus_)) {
    throw RepresentationError("expected 2g generator images");
  }
  if (4 * genus_ > 16) throw RepresentationError("genus too large for packed words");
  letters_.reserve(4 * genus_);
  for (const auto& g : generators_) {
    if (!(g.det() > 0)) throw RepresentationError("generator linear part must have positive determinant");
    letters_.push_back(g);
    letters_.push_back(g.inverse());
    const double l = 0.5 * std::log(g.det());
    log_homothety_.push_back(std::abs(l) < 1e-12 ? 0.0 : l);
  }
}

double Representation::log_homothety(WordCode code) const {
  const int len = word_length(code);
  double sum = 0;
  for (int i = 0; i < len; ++i) {
    const int ord = static_cast<int>((code >> (56 - 4 * i)) & 0xF);
    sum += (ord % 2 ? -1.0 : 1.0) * log_homothety_[ord / 2];
  }
  return sum;
}

double Representation::log_homothety(const Word& w) const {
  double sum = 0;
  for (const Letter& l : w.letters()) sum += l.sign * log_homothety_.at(l.generator);
  return sum;
}

Representation Representation::fuchsian(int genus) {
  if (genus != 2) throw RepresentationError("only genus 2 is supported");
  // Side pairings of the regular octagon with interior angles pi/4: the
  // hyperbolic translation T with trace 2 + 2 sqrt 2 conjugated by the
  // rotations of the disc by k pi/4 (SL(2,R) angle k pi/8). They satisfy
  // x0 x1^-1 x2 x3^-1 x0^-1 x1 x2^-1 x3 = 1.
  const double half_len = std::acosh(1.0 + std::numbers::sqrt2);
  const Mat2d t = Eigen::Vector2d(std::exp(half_len), std::exp(-half_len)).asDiagonal();
  std::array<Mat2d, 4> x;
  for (int k = 0; k < 4; ++k) {
    const double angle = k * std::numbers::pi / 8.0;
    x[k] = rotation(angle) * t * rotation(-angle);
  }
  const auto inv = [](const Mat2d& m) { return inverse_checked(m); };
  // Symplectic basis; every element is conjugate to T (b2 up to the sign
  // -I, which commutators do not see).
  const Mat2d a1 = x[0];
  const Mat2d b1 = inv(x[1]);
  const Mat2d a2 = inv(x[2]) * x[3];
  const Mat2d b2 = -(x[0] * inv(x[1]) * x[2]);
  return Representation(genus, {AffDualMapd::from_linear(a1), AffDualMapd::from_linear(b1),
                                AffDualMapd::from_linear(a2), AffDualMapd::from_linear(b2)});
}

std::vector<Mat2d> Representation::linear_parts() const {
  std::vector<Mat2d> out;
  out.reserve(generators_.size());
  for (const auto& g : generators_) out.push_back(g.linear);
  return out;
}

std::vector<Row2d> Representation::translations() const {
  std::vector<Row2d> out;
  out.reserve(generators_.size());
  for (const auto& g : generators_) out.push_back(g.translation);
  return out;
}

Representation Representation::with_cocycle(std::span<const Row2d> rows) const {
  if (rows.size() != generators_.size()) throw RepresentationError("expected 2g translation rows");
  std::vector<AffDualMapd> gens = generators_;
  for (std::size_t i = 0; i < gens.size(); ++i) gens[i].translation = rows[i];
  return Representation(genus_, std::move(gens));
}

Representation Representation::with_determinant_twist(int generator, double s) const {
  if (generator < 0 || generator >= static_cast<int>(generators_.size())) {
    throw RepresentationError("twist generator index out of range");
  }
  std::vector<AffDualMapd> gens = generators_;
  gens[generator].linear *= std::exp(s);
  return Representation(genus_, std::move(gens));
}

AffDualMapd Representation::eval_code(WordCode code) const {
  const int len = word_length(code);
  AffDualMapd out;
  for (int i = 0; i < len; ++i) {
    const int ord = static_cast<int>((code >> (56 - 4 * i)) & 0xF);
    out = i == 0 ? letters_[ord] : out * letters_[ord];
  }
  return out;
}

AffDualMapd Representation::eval(const Word& w) const {
  for (const Letter& l : w.letters()) {
    if (l.generator >= generators_.size()) throw RepresentationError("letter outside generator range");
  }
  if (w.size() > static_cast<std::size_t>(kMaxCodedLength)) {
    AffDualMapd out;
    for (const Letter& l : w.letters()) out = out * letters_[l.ordinal()];
    return out;
  }
  const WordCode code = w.code();
  {
    std::shared_lock lock(cache_->mutex);
    auto it = cache_->entries.find(code);
    if (it != cache_->entries.end()) return it->second;
  }
  const AffDualMapd value = eval_code(code);
  std::unique_lock lock(cache_->mutex);
  cache_->entries.emplace(code, value);
  return value;
}

double Representation::relation_residual() const {
  const AffDualMapd r = eval(surface_relator(genus_));
  return distance(r, AffDualMapd::identity());
}

double Representation::linear_relation_residual() const {
  const AffDualMapd r = eval(surface_relator(genus_));
  return (r.linear - Mat2d::Identity()).cwiseAbs().maxCoeff();
}

std::string Representation::canonical_text() const {
  std::string out = "{\"genus\":" + std::to_string(genus_) + ",\"generators\":[";
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const auto& g = generators_[i];
    if (i) out += ',';
    out += "[[";
    const double lin[4] = {g.linear(0, 0), g.linear(0, 1), g.linear(1, 0), g.linear(1, 1)};
    for (int k = 0; k < 4; ++k) {
      if (k) out += ',';
      append_float(out, lin[k]);
    }
    out += "],[";
    append_float(out, g.translation(0));
    out += ',';
    append_float(out, g.translation(1));
    out += "]]";
  }
  out += "]}";
  return out;
}

std::uint64_t Representation::content_hash() const { return fnv1a(canonical_text()); }

// ---------------------------------------------------------------------------

std::vector<WordCode> distinct_elements(const Representation& rep, int max_len, int threads,
                                        std::uint64_t memory_budget) {
  if (max_len < 1) return {};
  const int genus = rep.genus();
  const std::uint64_t words = word_count(genus, max_len);
  // fingerprint table plus merge copy
  if (words > memory_budget / 32) {
    throw RepresentationError("sweep of " + std::to_string(words) +
                              " words exceeds the memory budget; lower max_len");
  }
  using Entry = std::pair<std::uint64_t, WordCode>;
  const int partitions = 4 * genus;
  std::vector<std::vector<Entry>> parts(partitions);
  threads = std::clamp(threads, 1, partitions);

  auto run_partition = [&](int first) {
    std::array<AffDualMapd, kMaxCodedLength + 1> stack;
    auto& part = parts[first];
    part.reserve((words - 1) / partitions + 1);
    walk_words_with_prefix(genus, max_len, first, [&](WordCode code, int last) {
      const int len = word_length(code);
      stack[len] = len == 1 ? rep.letter_image(last) : stack[len - 1] * rep.letter_image(last);
      part.emplace_back(fingerprint(stack[len]), code);
      return true;
    });
  };

  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (int worker = 0; worker < threads; ++worker) {
    pool.emplace_back([&, worker] {
      try {
        for (int p = worker; p < partitions; p += threads) run_partition(p);
      } catch (...) {
        errors[worker] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<Entry> all;
  all.reserve(words);
  for (auto& part : parts) {
    all.insert(all.end(), part.begin(), part.end());
    std::vector<Entry>().swap(part);
  }
  std::sort(all.begin(), all.end());
  const std::uint64_t identity_fp = fingerprint(AffDualMapd::identity());
  std::vector<WordCode> out;
  out.reserve(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (i > 0 && all[i].first == all[i - 1].first) continue;
    if (all[i].first == identity_fp) continue;
    out.push_back(all[i].second);
  }
  std::vector<Entry>().swap(all);
  std::sort(out.begin(), out.end());
  return out;
}

void for_each_distinct(const Representation& rep, int max_len, int threads,
                       const std::function<void(WordCode, const AffDualMapd&)>& fn) {
  for (WordCode code : distinct_elements(rep, max_len, threads)) fn(code, rep.eval_code(code));
}

std::optional<double> stable_norm_ratio(const Mat2d& linear, double log_u) {
  const double det = linear.determinant();
  if (!(det > 0)) return std::nullopt;
  const double root_det = std::sqrt(det);
  const double tr = std::abs(linear.trace()) / root_det;
  if (!(tr > 2.0 + 1e-12)) return std::nullopt;
  const double radius = (tr + std::sqrt(tr * tr - 4.0)) / 2.0;
  const double translation_length = 2.0 * std::log(radius);
  return std::abs(log_u) / translation_length;
}

HyperbolicityReport check_hyperbolic(const Representation& rep, int max_len,
                                     const HyperbolicityOptions& opts) {
  if (max_len < 1) throw RepresentationError("max_len must be at least 1");
  HyperbolicityReport report;
  report.max_len = max_len;
  for_each_distinct(rep, max_len, opts.threads, [&](WordCode code, const AffDualMapd& m) {
    ++report.elements_checked;
    const auto e = try_eig2(m.linear);
    if (!e) {
      ++report.skipped;
      return;
    }
    if (!is_saddle(*e, opts.gate)) {
      ++report.violation_count;
      if (report.violations.size() < HyperbolicityReport::kMaxStoredViolations) {
        report.violations.push_back({Word::from_code(code), e->lambda1, e->lambda2});
      }
    }
    const auto ratio = stable_norm_ratio(m.linear, rep.log_homothety(code));
    if (ratio && *ratio > report.stable_norm_lower_bound) {
      report.stable_norm_lower_bound = *ratio;
      report.stable_norm_witness = Word::from_code(code);
    }
  });
  return report;
}

double stable_norm_bound(const Representation& rep, int max_len, int threads) {
  double best = 0;
  for_each_distinct(rep, max_len, threads, [&](WordCode code, const AffDualMapd& m) {
    if (auto ratio = stable_norm_ratio(m.linear, rep.log_homothety(code))) best = std::max(best, *ratio);
  });
  return best;
}

}  // namespace goldman
