#include "support.hpp"

#include <algorithm>

using namespace testing;

namespace {

SampledFunction samples(const ExpPoly& f, std::int64_t lo, std::int64_t hi) {
  return SampledFunction::sample(f, Box::cube(f.dim(), lo, hi));
}

}  // namespace

TEST_CASE("apply_modified") {
  CHECK(equivalent(apply_modified(n_two_n(), witness({2}), {1}, 1), power_of(2).scaled(Scalar(2))));
  CHECK(apply_modified(n_two_n(), witness({2}), {1}, 2).is_zero());

  // phi = 1 at y reduces to the plain difference.
  const ExpPoly f = n_two_n() + power_of(3);
  CHECK(equivalent(apply_modified(f, witness({1}), {1}, 1), translate(f, {1}) - f));
  CHECK(equivalent(apply_difference(f, Scalar(1), {2}, 1), translate(f, {2}) - f));
}

TEST_CASE("apply_product") {
  const ExpPoly f = power_of(2) + power_of(3);
  CHECK(equivalent(apply_product(f, DiffProduct{}), f));
  CHECK(apply_product(f, DiffProduct{{factor(witness({2}), {1}), factor(witness({3}), {1})}}).is_zero());
  CHECK(equivalent(apply_product(f, DiffProduct{{factor(witness({2}), {1})}}), power_of(3)));

  DiffProduct table_based{{OpFactor{PhiTable{{LatticePoint{1}, Scalar(2)}}, {1}, 1}}};
  CHECK(error_code_of([&] { apply_product(f, table_based); }) == ErrorCode::invalid_argument);
  CHECK(error_code_of([&] { apply_modified(f, witness({2, 2}), {1, 0}, 1); }) == ErrorCode::dimension_mismatch);
}

TEST_CASE("apply_sampled") {
  const PhiTable one{{LatticePoint{1}, Scalar(1)}};
  const PhiTable two{{LatticePoint{1}, Scalar(2)}};

  const SampledFunction c = samples(power_of(1), 0, 9);
  const SampledFunction dc = apply_sampled(c, one, {1}, 1);
  CHECK(dc.box() == Box::cube(1, 0, 8));
  CHECK(all_exact_zero(dc));

  const SampledFunction d2 = apply_sampled(samples(n_two_n(), 0, 9), two, {1}, 2);
  CHECK(d2.box() == Box::cube(1, 0, 7));
  CHECK(all_exact_zero(d2));

  CHECK(error_code_of([&] { apply_sampled(samples(n_two_n(), 0, 3), two, {1}, 5); }) ==
        ErrorCode::insufficient_box);
  CHECK(error_code_of([&] { apply_sampled(c, PhiTable{}, {1}, 1); }) == ErrorCode::missing_phi);
}

TEST_CASE("sampled functions validate their shape") {
  CHECK(error_code_of([] { SampledFunction(Box::cube(1, 0, 3), std::vector<Scalar>(3)); }) ==
        ErrorCode::invalid_argument);
  CHECK(error_code_of([] { SampledFunction(Box({0}, {-1}), {}); }) == ErrorCode::insufficient_box);
}

TEST_CASE("difmod identity") {
  const Box box = Box::cube(1, 0, 10);
  CHECK(difmod_identity_check(n_two_n(), witness({5}), {{1}, {1}}, box));
  CHECK(difmod_identity_check(ExpPoly(1), witness({7}), {{2}, {-1}}, box));

  CHECK(difmod_identity_check(power_of(3), witness({3}), {{1}}, box));
  // Both sides vanish: f * phi_check is constant 1.
  CHECK(apply_modified(power_of(3), witness({3}), {1}, 1).is_zero());

  const SampledFunction s = samples(n_two_n(), -2, 14);
  CHECK(difmod_identity_check(s, witness({5}), {{1}, {2}}, box));
  CHECK(error_code_of([&] { difmod_identity_check(s, witness({5}), {{3}, {2}}, box); }) ==
        ErrorCode::insufficient_box);

  const ExpPoly g = mono(ExponentialWitness({Scalar::floating(0.9, 0.3)}), {2}, Scalar::floating(1.5, -0.5));
  CHECK(difmod_identity_check(g, ExponentialWitness({Scalar::floating(1.1, -0.2)}), {{1}, {3}}, box));
}

TEST_CASE("factor order does not matter") {
  oracle::Rng rng(31);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t d = 1 + seed % 2;
    const ExpPoly f = oracle::random_instance(seed, exact_profile(d, 3, 2)).f;
    std::vector<OpFactor> factors;
    const int count = 2 + static_cast<int>(seed % 2);
    for (int k = 0; k < count; ++k) {
      std::vector<Scalar> lambda;
      for (std::size_t i = 0; i < d; ++i) lambda.push_back(oracle::random_exact(rng, 3, 2, false, true));
      factors.push_back(OpFactor{ExponentialWitness(lambda), random_point(rng, d, -2, 2),
                                 static_cast<unsigned>(rng.uniform_int(1, 2))});
    }
    const ExpPoly reference = apply_product(f, DiffProduct{factors});
    std::sort(factors.begin(), factors.end(), [](const OpFactor& a, const OpFactor& b) { return a.shift < b.shift; });
    do {
      CHECK(equivalent(apply_product(f, DiffProduct{factors}), reference));
    } while (std::next_permutation(factors.begin(), factors.end(),
                                   [](const OpFactor& a, const OpFactor& b) { return a.shift < b.shift; }));
  }
}

TEST_CASE("each term is killed by its own witness at power degree + 1") {
  oracle::Rng rng(17);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t d = 1 + seed % 3;
    const ExpPoly f = oracle::random_instance(seed, exact_profile(d, 3, 3)).f;
    for (const auto& t : f.terms()) {
      const ExpPoly term(d, {t});
      const LatticePoint y = random_point(rng, d, -3, 3);
      const auto k = static_cast<unsigned>(t.degree());
      CHECK(apply_modified(term, t.witness, y, k + 1).is_zero());
    }
  }
}

TEST_CASE("symbolic and sampled application agree") {
  oracle::Rng rng(23);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t d = 1 + seed % 2;
    oracle::InstanceProfile p = exact_profile(d, 3, 2);
    p.exact = seed % 2 == 0;
    const ExpPoly f = oracle::random_instance(seed, p).f;
    std::vector<Scalar> lambda;
    for (std::size_t i = 0; i < d; ++i) lambda.push_back(oracle::random_exact(rng, 3, 2, false, true));
    const ExponentialWitness w(lambda);
    const LatticePoint y = random_point(rng, d, -2, 2);
    const unsigned power = static_cast<unsigned>(rng.uniform_int(1, 3));

    const SampledFunction s = samples(f, -2, 6);
    const SampledFunction out = apply_sampled(s, w.at(y), y, power);
    const ExpPoly symbolic = apply_modified(f, w, y, power);
    double scale = 1.0;
    for (const auto& v : out.values()) scale = std::max(scale, v.abs());
    for_each_point(out.box(), [&](const LatticePoint& x) {
      const Scalar expected = eval(symbolic, x);
      if (f.is_exact()) {
        CHECK(exactly_equal(out.at(x), expected));
      } else {
        CHECK((out.at(x) - expected).abs() <= 1e-10 * scale);
      }
    });
  }
}

TEST_CASE("products are linear") {
  oracle::Rng rng(41);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t d = 1 + seed % 3;
    const ExpPoly f = oracle::random_instance(seed, exact_profile(d, 3, 2)).f;
    const ExpPoly g = oracle::random_instance(seed + 77, exact_profile(d, 3, 2)).f;
    const Scalar a = oracle::random_exact(rng, 4, 3, true, false);
    const Scalar b = oracle::random_exact(rng, 4, 3, true, false);
    DiffProduct p;
    for (int k = 0; k < 2; ++k) {
      std::vector<Scalar> lambda;
      for (std::size_t i = 0; i < d; ++i) lambda.push_back(oracle::random_exact(rng, 3, 2, true, true));
      p.factors.push_back(OpFactor{ExponentialWitness(lambda), random_point(rng, d, -2, 2), 1});
    }
    const ExpPoly lhs = apply_product(linear_combine({{a, f}, {b, g}}), p);
    const ExpPoly rhs = linear_combine({{a, apply_product(f, p)}, {b, apply_product(g, p)}});
    CHECK(equivalent(lhs, rhs));
  }
}
