#include "support.hpp"

using namespace testing;

namespace {

// Direct arithmetic: sum over terms of lambda^n * sum c n^alpha, with no
// shared code beyond Scalar.
Scalar direct_eval(const ExpPoly& f, const LatticePoint& n) {
  Scalar total(0);
  for (const auto& t : f.terms()) {
    Scalar e(1);
    for (std::size_t i = 0; i < n.dim(); ++i) {
      const Scalar base = n[i] >= 0 ? t.witness[i] : Scalar(1) / t.witness[i];
      for (std::int64_t k = 0; k < (n[i] >= 0 ? n[i] : -n[i]); ++k) e *= base;
    }
    Scalar p(0);
    for (const auto& [alpha, c] : t.coeffs) {
      Scalar m = c;
      for (std::size_t i = 0; i < n.dim(); ++i) {
        for (std::uint32_t k = 0; k < alpha[i]; ++k) m *= Scalar(n[i]);
      }
      p += m;
    }
    total += e * p;
  }
  return total;
}

// Concatenates the raw term lists, so like terms and zeros survive until
// normalization.
ExpPoly raw_sum(const ExpPoly& a, const ExpPoly& b) {
  std::vector<ExpTerm> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return ExpPoly(a.dim(), std::move(terms));
}

bool normal_form_invariants(const ExpPoly& f) {
  for (std::size_t i = 0; i < f.terms().size(); ++i) {
    if (f.terms()[i].coeffs.empty()) return false;
    for (const auto& [alpha, c] : f.terms()[i].coeffs) {
      if (c.is_zero(0.0)) return false;
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (witness_equal(f.terms()[i].witness, f.terms()[j].witness, 0.0)) return false;
    }
  }
  return true;
}

bool same_terms(const ExpPoly& a, const ExpPoly& b) {
  if (a.dim() != b.dim() || a.terms().size() != b.terms().size()) return false;
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    const auto& s = a.terms()[i];
    const auto& t = b.terms()[i];
    if (!witness_equal(s.witness, t.witness, 0.0) || s.coeffs.size() != t.coeffs.size()) return false;
    auto it = t.coeffs.begin();
    for (const auto& [alpha, c] : s.coeffs) {
      if (!(alpha == it->first) || !exactly_equal(c, it->second)) return false;
      ++it;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("eval") {
  CHECK(exactly_equal(eval(ExpPoly(1), {5}), Scalar(0)));
  CHECK(exactly_equal(eval(n_two_n(), {3}), Scalar(24)));
  const ExpPoly g = mono(witness({2, 3}), {1, 0});
  CHECK(exactly_equal(eval(g, {2, 1}), Scalar(24)));
  // Negative coordinates invert exactly: (-2) * 2^-2.
  CHECK(exactly_equal(eval(n_two_n(), {-2}), Scalar::exact(mpq_class(-1, 2))));
  CHECK(error_code_of([] { eval(n_two_n(), {1, 1}); }) == ErrorCode::dimension_mismatch);
}

TEST_CASE("float evaluation overflow is reported") {
  const ExpPoly big = mono(ExponentialWitness({Scalar::floating(1e200)}), {0});
  CHECK(error_code_of([&] { eval(big, {5}); }) == ErrorCode::evaluation_overflow);
}

TEST_CASE("witness components must be nonzero") {
  CHECK(error_code_of([] { ExponentialWitness({Scalar(1), Scalar(0)}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("normalize") {
  const ExpPoly twice = normalize(raw_sum(power_of(2), power_of(2)));
  REQUIRE(twice.terms().size() == 1);
  CHECK(exactly_equal(twice.terms()[0].coeffs.at(MultiIndex{0}), Scalar(2)));

  CHECK(normalize(raw_sum(n_two_n(), n_two_n().scaled(Scalar(-1)))).is_zero());

  const ExpPoly two_three = normalize(raw_sum(power_of(2), power_of(3)));
  CHECK(two_three.terms().size() == 2);
}

TEST_CASE("translate") {
  CHECK(equivalent(translate(power_of(2), {1}), power_of(2).scaled(Scalar(2))));
  CHECK(equivalent(translate(n_two_n(), {0}), n_two_n()));
  CHECK(equivalent(translate(n_two_n(), {1}), n_two_n().scaled(Scalar(2)) + power_of(2).scaled(Scalar(2))));
}

TEST_CASE("linear_combine") {
  const ExpPoly f = n_two_n();
  CHECK(linear_combine({{Scalar(1), f}, {Scalar(-1), f}}).is_zero());

  const ExpPoly doubled = linear_combine({{Scalar(2), power_of(2)}});
  REQUIRE(doubled.terms().size() == 1);
  CHECK(exactly_equal(doubled.terms()[0].coeffs.at(MultiIndex{0}), Scalar(2)));

  const ExpPoly merged = linear_combine({{Scalar(1), power_of(2)}, {Scalar(1), n_two_n()}});
  REQUIRE(merged.terms().size() == 1);
  CHECK(merged.terms()[0].coeffs.size() == 2);
  CHECK(exactly_equal(merged.terms()[0].coeffs.at(MultiIndex{1}), Scalar(1)));
}

TEST_CASE("eval matches direct arithmetic on random instances") {
  oracle::Rng rng(11);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ExpPoly f = oracle::random_instance(seed, exact_profile(1 + seed % 3, 3, 3)).f;
    const LatticePoint x = random_point(rng, f.dim(), -4, 4);
    CHECK(exactly_equal(eval(f, x), direct_eval(f, x)));
  }
}

TEST_CASE("linearity of linear_combine") {
  oracle::Rng rng(5);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t d = 1 + seed % 3;
    const ExpPoly f = oracle::random_instance(seed, exact_profile(d, 3, 2)).f;
    const ExpPoly g = oracle::random_instance(seed + 1000, exact_profile(d, 3, 2)).f;
    const Scalar a = oracle::random_exact(rng, 5, 4, true, false);
    const Scalar b = oracle::random_exact(rng, 5, 4, true, false);
    const ExpPoly h = linear_combine({{a, f}, {b, g}});
    for (int k = 0; k < 3; ++k) {
      const LatticePoint x = random_point(rng, d, -3, 3);
      CHECK(exactly_equal(eval(h, x), a * eval(f, x) + b * eval(g, x)));
    }
  }
}

TEST_CASE("translations compose") {
  oracle::Rng rng(8);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t d = 1 + seed % 3;
    const ExpPoly f = oracle::random_instance(seed, exact_profile(d, 3, 3)).f;
    const LatticePoint y = random_point(rng, d, -3, 3);
    const LatticePoint z = random_point(rng, d, -3, 3);
    CHECK(same_terms(translate(translate(f, y), z), translate(f, y + z)));
    const LatticePoint x = random_point(rng, d, -3, 3);
    CHECK(exactly_equal(eval(translate(f, y), x), eval(f, x + y)));
  }
}

TEST_CASE("normalize is idempotent and preserves values") {
  oracle::Rng rng(3);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t d = 1 + seed % 3;
    const ExpPoly f = oracle::random_instance(seed, exact_profile(d, 4, 3)).f;
    const ExpPoly g = oracle::random_instance(seed + 500, exact_profile(d, 4, 3)).f;
    // Raw concatenation with a partial cancellation keeps duplicates around.
    const ExpPoly raw = raw_sum(raw_sum(f, g), f.scaled(Scalar(-1)));
    const ExpPoly once = normalize(raw);
    CHECK(normal_form_invariants(once));
    CHECK(same_terms(normalize(once), once));
    const LatticePoint x = random_point(rng, d, -3, 3);
    CHECK(exactly_equal(eval(once, x), eval(raw, x)));
    CHECK(exactly_equal(eval(once, x), eval(g, x)));
  }
}

TEST_CASE("witnesses are multiplicative") {
  oracle::Rng rng(21);
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = 1 + k % 3;
    std::vector<Scalar> lambda;
    for (std::size_t i = 0; i < d; ++i) lambda.push_back(oracle::random_exact(rng, 4, 3, true, true));
    const ExponentialWitness w(lambda);
    const LatticePoint x = random_point(rng, d, -5, 5);
    const LatticePoint y = random_point(rng, d, -5, 5);
    CHECK(exactly_equal(w.at(x + y), w.at(x) * w.at(y)));
  }
}
