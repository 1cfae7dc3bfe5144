#pragma once

// Surface-group representations into the affine-dual group: explicit
// cocompact Fuchsian generators, translation cocycles, word evaluation and
// finite-depth hyperbolicity certificates.

#include <cstdint>
#include <functional>
#include <memory>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "goldman/algebra.hpp"
#include "goldman/words.hpp"

namespace goldman {

class RepresentationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix fingerprint used to identify group elements: entries of the 3x3
/// form divided by the largest entry, rounded to a 1e-9 grid, then hashed.
std::uint64_t fingerprint(const AffDualMapd& m);

class Representation {
 public:
  /// `generators` are the images of a1, b1, ..., ag, bg, in that order.
  Representation(int genus, std::vector<AffDualMapd> generators);

  /// Regular-octagon Fuchsian group in SL(2,R), zero cocycle. Only genus 2
  /// is supported.
  static Representation fuchsian(int genus);

  int genus() const { return genus_; }
  std::span<const AffDualMapd> generators() const { return generators_; }
  std::vector<Mat2d> linear_parts() const;
  std::vector<Row2d> translations() const;

  /// Replaces the translation rows. No relation check: callers that need the
  /// relation verify it with relation_residual().
  Representation with_cocycle(std::span<const Row2d> rows) const;

  /// Multiplies the linear part of one generator by the homothety e^s.
  Representation with_determinant_twist(int generator, double s) const;

  /// Image of a letter ordinal (a1, a1^-1, b1, ...).
  const AffDualMapd& letter_image(int ordinal) const { return letters_[ordinal]; }

  /// Ordered product of generator images, cached by word code.
  AffDualMapd eval(const Word& w) const;
  /// Uncached evaluation of a packed word.
  AffDualMapd eval_code(WordCode code) const;

  /// L_u(w) = (1/2) log det of the linear part, computed additively from the
  /// generators (values below 1e-12 in magnitude count as exactly zero).
  double log_homothety(WordCode code) const;
  double log_homothety(const Word& w) const;

  /// Max-entry distance of the relation product from the identity.
  double relation_residual() const;
  /// Same, for the linear parts only (2x2).
  double linear_relation_residual() const;

  /// Canonical text: genus and generator entries at 17 significant digits.
  std::string canonical_text() const;
  /// FNV-1a hash of canonical_text().
  std::uint64_t content_hash() const;

 private:
  struct Cache {
    std::shared_mutex mutex;
    std::unordered_map<WordCode, AffDualMapd> entries;
  };

  int genus_;
  std::vector<AffDualMapd> generators_;
  std::vector<AffDualMapd> letters_;
  std::vector<double> log_homothety_;  // per generator
  std::shared_ptr<Cache> cache_;
};

std::string hash_hex(std::uint64_t h);
std::uint64_t fnv1a(std::string_view text);

// ---------------------------------------------------------------------------
// Sweeps over group elements
// ---------------------------------------------------------------------------

/// Memory budget for the fingerprint table of a sweep, in bytes.
inline constexpr std::uint64_t kDefaultSweepBudget = 3ull << 30;

/// Distinct non-identity group elements of word length <= max_len, each
/// represented by its shortest (then lexicographically first) word, in
/// canonical word order. Work is partitioned by first letter across
/// `threads` workers; the result does not depend on the thread count.
std::vector<WordCode> distinct_elements(const Representation& rep, int max_len, int threads = 1,
                                        std::uint64_t memory_budget = kDefaultSweepBudget);

/// Calls `fn` on every distinct element in canonical order.
void for_each_distinct(const Representation& rep, int max_len, int threads,
                       const std::function<void(WordCode, const AffDualMapd&)>& fn);

struct Violation {
  Word word;
  double lambda1 = 0;
  double lambda2 = 0;
};

struct HyperbolicityReport {
  int max_len = 0;
  std::uint64_t elements_checked = 0;
  std::uint64_t violation_count = 0;
  std::vector<Violation> violations;  // first kMaxStoredViolations in word order
  std::uint64_t skipped = 0;          // numerically elliptic/parabolic
  double stable_norm_lower_bound = 0;
  Word stable_norm_witness;

  static constexpr std::size_t kMaxStoredViolations = 64;

  bool hyperbolic() const { return violation_count == 0; }
  bool stable_norm_criterion_violated() const { return stable_norm_lower_bound >= 0.5; }
};

struct HyperbolicityOptions {
  int threads = 1;
  double gate = Tolerances::spectral_gate;
};

HyperbolicityReport check_hyperbolic(const Representation& rep, int max_len,
                                     const HyperbolicityOptions& opts = {});

/// Largest |L_u(g)| / t(g) over swept elements, where L_u = log det / 2 and
/// t = twice the log spectral radius of the unimodular part. A lower bound
/// for the dual stable norm of L_u.
double stable_norm_bound(const Representation& rep, int max_len, int threads = 1);

/// Ratio |log_u| / t for one linear part, where t is twice the log spectral
/// radius of its unimodular part; nullopt when that part is not hyperbolic.
std::optional<double> stable_norm_ratio(const Mat2d& linear, double log_u);

}  // namespace goldman
