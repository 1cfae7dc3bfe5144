#include <doctest.h>

#include <cmath>
#include <random>

#include "goldman/deformation.hpp"
#include "goldman/representation.hpp"

using namespace goldman;

TEST_CASE("Fuchsian octagon generators") {
  const auto rep = Representation::fuchsian(2);
  CHECK(rep.relation_residual() < 1e-8);
  for (const auto& g : rep.generators()) {
    CHECK(std::abs(g.det() - 1) < 1e-12);
    CHECK(std::abs(g.trace() - (2 + 2 * std::sqrt(2.0))) < 1e-10);
    CHECK(g.translation.norm() == 0);
  }
  CHECK_THROWS_AS(Representation::fuchsian(3), RepresentationError);
}

TEST_CASE("attaching translations") {
  const auto rep = Representation::fuchsian(2);
  const std::vector<Row2d> zeros(4, Row2d::Zero());
  CHECK(rep.with_cocycle(zeros).content_hash() == rep.content_hash());

  const auto sol = solve_cocycle(rep, 42, 0.1);
  CHECK(rep.with_cocycle(sol.t).relation_residual() < 1e-8);

  std::vector<Row2d> bad(4, Row2d::Zero());
  bad[0] = Row2d(1, 0);
  const auto broken = rep.with_cocycle(bad);
  CHECK(broken.relation_residual() > 1e-3);
  CHECK(broken.linear_relation_residual() < 1e-8);
}

TEST_CASE("evaluation") {
  const auto rep = Representation::fuchsian(2).with_cocycle(solve_cocycle(Representation::fuchsian(2), 42, 0.1).t);
  CHECK(distance(rep.eval(Word()), AffDualMapd::identity()) == 0);
  CHECK(distance(rep.eval(Word::parse("b1")), rep.generators()[1]) == 0);
  CHECK(distance(rep.eval(Word::parse("B2")), rep.generators()[3].inverse()) < 1e-13);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Letter> letters;
    for (int i = 0; i < 7; ++i) letters.push_back(Letter::from_ordinal(static_cast<int>(rng() % 8)));
    const Word w = reduce(letters);
    const auto m = rep.eval(w);
    const auto raw_product = [&] {
      AffDualMapd acc;
      for (const auto& l : w.letters()) acc = acc * rep.letter_image(l.ordinal());
      return acc;
    }();
    CHECK(distance(m, raw_product) < 1e-10);
    CHECK(distance(rep.eval_code(w.code()), m) < 1e-10);
    CHECK(distance(rep.eval(w * inverse(w)), AffDualMapd::identity()) == 0);
    const double scale = m.matrix().cwiseAbs().maxCoeff() * rep.eval(inverse(w)).matrix().cwiseAbs().maxCoeff();
    CHECK(distance(m * rep.eval(inverse(w)), AffDualMapd::identity()) < 1e-14 * scale);
  }
}

TEST_CASE("canonical text and hash") {
  const auto rep = Representation::fuchsian(2);
  const auto text = rep.canonical_text();
  CHECK(text.rfind("{\"genus\":2,\"generators\":[[[", 0) == 0);
  CHECK(rep.content_hash() == fnv1a(text));
  CHECK(hash_hex(0xabcull) == "0000000000000abc");
  CHECK(rep.with_determinant_twist(0, 1e-3).content_hash() != rep.content_hash());
}

TEST_CASE("distinct elements") {
  const auto rep = Representation::fuchsian(2);
  const auto four = distinct_elements(rep, 4, 1);
  // the relator has length 8: no two words of length <= 3 coincide, and at
  // length 4 each of its 8 rotations u v gives exactly one coincidence u = v^-1
  CHECK(distinct_elements(rep, 3, 1).size() + 1 == word_count(2, 3));
  CHECK(four.size() + 1 + 8 == word_count(2, 4));
  const auto six1 = distinct_elements(rep, 6, 1);
  const auto six3 = distinct_elements(rep, 6, 3);
  CHECK(six1 == six3);
  CHECK(six1.size() < word_count(2, 6));
  CHECK_THROWS_AS(distinct_elements(rep, 10, 1, 1 << 20), RepresentationError);
}

TEST_CASE("hyperbolicity sweep") {
  const auto rep = Representation::fuchsian(2);
  const auto report = check_hyperbolic(rep, 6);
  CHECK(report.hyperbolic());
  CHECK(report.elements_checked == distinct_elements(rep, 6).size());
  CHECK(report.stable_norm_lower_bound == 0);

  const auto threaded = check_hyperbolic(rep, 6, {3, Tolerances::spectral_gate});
  CHECK(threaded.elements_checked == report.elements_checked);

  // e^s beyond the spectral radius of a1 pushes lambda2 of a1 above 1
  const double r = std::abs(eig2(rep.generators()[0].linear).lambda1);
  const auto twisted = rep.with_determinant_twist(0, 1.2 * std::log(r));
  const auto bad = check_hyperbolic(twisted, 2);
  CHECK_FALSE(bad.hyperbolic());
  REQUIRE_FALSE(bad.violations.empty());
  CHECK(bad.violations.front().word == Word::parse("a1"));
}

TEST_CASE("stable norm bound") {
  const auto rep = Representation::fuchsian(2);
  CHECK(stable_norm_bound(rep, 6) == 0);
  // numpy sweep over all reduced words of length <= 6
  CHECK(stable_norm_bound(rep.with_determinant_twist(0, 0.01), 6) ==
        doctest::Approx(0.00408421246267).epsilon(1e-9));

  const double r = std::abs(eig2(rep.generators()[0].linear).lambda1);
  const auto boundary = rep.with_determinant_twist(0, std::log(r));
  const double bound = stable_norm_bound(boundary, 4);
  CHECK(bound >= 0.5 - 1e-12);
  CHECK(stable_norm_ratio(boundary.generators()[0].linear, std::log(r)).value() ==
        doctest::Approx(0.5));
}

TEST_CASE("fingerprints identify equal elements") {
  const auto rep = Representation::fuchsian(2);
  const auto rel = rep.eval(surface_relator(2));
  CHECK(fingerprint(rep.eval(Word::parse("a1b1"))) ==
        fingerprint(rep.eval(Word::parse("a1b1")) * rel));
  CHECK(fingerprint(rep.eval(Word::parse("a1"))) != fingerprint(rep.eval(Word::parse("b1"))));
}
