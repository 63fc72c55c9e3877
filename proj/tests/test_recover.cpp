#include "support.hpp"

#include <algorithm>
#include <limits>

#include "expolat/montel.hpp"
#include "expolat/recover.hpp"

using namespace testing;

namespace {

SampledFunction samples(const ExpPoly& f, std::int64_t lo, std::int64_t hi) {
  return SampledFunction::sample(f, Box::cube(f.dim(), lo, hi));
}

RecoveryConfig with_order(unsigned m) {
  RecoveryConfig cfg;
  cfg.max_order = m;
  return cfg;
}

void check_coeffs(const Annihilator& q, const std::vector<double>& expected) {
  REQUIRE(q.coeffs.size() == expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) CHECK(std::abs(q.coeffs[k] - Complex(expected[k])) < 1e-8);
}

double witness_distance(const ExponentialWitness& a, const ExponentialWitness& b) {
  double dist = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) dist = std::max(dist, std::abs(a[i].to_complex() - b[i].to_complex()));
  return dist;
}

}  // namespace

TEST_CASE("section annihilator") {
  check_coeffs(section_annihilator(samples(power_of(3), 0, 6), 0, with_order(3)), {-3, 1});
  // (x - 2)(x - 1)^2
  const ExpPoly f = power_of(2) + mono(witness({1}), {1});
  check_coeffs(section_annihilator(samples(f, 0, 10), 0, with_order(5)), {-2, 5, -4, 1});
  CHECK(section_annihilator(samples(ExpPoly(1), 0, 10), 0, with_order(5)).degree() == 0);

  CHECK(error_code_of([&] { section_annihilator(samples(f, 0, 6), 0, with_order(5)); }) ==
        ErrorCode::insufficient_box);
  CHECK(error_code_of([&] { section_annihilator(samples(f, 0, 10), 0, with_order(2)); }) ==
        ErrorCode::no_annihilator);
  CHECK(error_code_of([&] { section_annihilator(samples(f, 0, 10), 1, with_order(2)); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("recovery config validation") {
  RecoveryConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.max_order = 0;
  CHECK(error_code_of([&] { cfg.validate(); }) == ErrorCode::invalid_argument);
  cfg = RecoveryConfig{};
  cfg.rank_tol = 0.0;
  CHECK(error_code_of([&] { cfg.validate(); }) == ErrorCode::invalid_argument);
}

TEST_CASE("annihilator roots carry multiplicities") {
  Annihilator q;
  q.coeffs = {Complex(-2), Complex(5), Complex(-4), Complex(1)};
  const auto roots = annihilator_roots(q, RecoveryConfig{});
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0].value - Complex(1)) < 1e-8);
  CHECK(roots[0].multiplicity == 2);
  CHECK(std::abs(roots[1].value - Complex(2)) < 1e-12);
  CHECK(roots[1].multiplicity == 1);
}

TEST_CASE("split_spectrum") {
  const SampledFunction s = samples(power_of(2) + power_of(3), 0, 12);
  const RecoveryConfig cfg = with_order(4);
  const std::vector<Root> roots{{Complex(2), 1}, {Complex(3), 1}};
  const auto parts = split_spectrum(s, 0, roots, cfg);
  REQUIRE(parts.size() == 2);
  for_each_point(parts[0].box(), [&](const LatticePoint& x) {
    CHECK(std::abs(parts[0].at(x).to_complex() - std::pow(2.0, double(x[0]))) <= 1e-8);
    CHECK(std::abs(parts[1].at(x).to_complex() - std::pow(3.0, double(x[0]))) <= 1e-8);
  });

  const auto single = split_spectrum(s, 0, {{Complex(2), 1}}, cfg);
  REQUIRE(single.size() == 1);
  CHECK(single[0].box() == s.box());

  const auto zero = split_spectrum(samples(ExpPoly(1), 0, 12), 0, roots, cfg);
  for (const auto& part : zero) {
    for (const auto& v : part.values()) CHECK(v.abs() == 0.0);
  }
}

TEST_CASE("recover") {
  const Decomposition two_three = recover(samples(power_of(2) + power_of(3), 0, 9), with_order(4));
  CHECK(two_three.success);
  CHECK(two_three.residual <= 1e-10);
  REQUIRE(two_three.result.terms().size() == 2);
  CHECK(witness_distance(two_three.result.terms()[0].witness, witness({2})) < 1e-9);
  CHECK(witness_distance(two_three.result.terms()[1].witness, witness({3})) < 1e-9);
  for (const auto& t : two_three.result.terms()) {
    REQUIRE(t.coeffs.size() == 1);
    CHECK(near(t.coeffs.begin()->second, Scalar(1), 1e-9));
  }

  const ExpPoly g = mono(witness({2, 3}), {1, 0});
  const Decomposition dg = recover(samples(g, 0, 8), with_order(4));
  CHECK(dg.success);
  CHECK(dg.residual <= 1e-8);
  REQUIRE(dg.result.terms().size() == 1);
  CHECK(witness_distance(dg.result.terms()[0].witness, witness({2, 3})) < 1e-8);
  REQUIRE(dg.result.terms()[0].coeffs.size() == 1);
  CHECK(dg.result.terms()[0].coeffs.begin()->first == MultiIndex{1, 0});

  const Decomposition dz = recover(samples(ExpPoly(2), 0, 8), with_order(4));
  CHECK(dz.success);
  CHECK(dz.result.is_zero());
  CHECK(dz.residual == 0.0);
}

TEST_CASE("exact lift snaps to small rationals") {
  RecoveryConfig cfg = with_order(4);
  cfg.exact_lift = true;
  const ExpPoly f = mono(ExponentialWitness({Scalar::exact(mpq_class(3, 2))}), {1}, Scalar::exact(mpq_class(-1, 3))) + power_of(-2);
  const Decomposition d = recover(samples(f, 0, 12), cfg);
  CHECK(d.success);
  REQUIRE(d.exact_result.has_value());
  CHECK(equivalent(*d.exact_result, f));
}

TEST_CASE("recovery round trip") {
  int successes = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    oracle::InstanceProfile p;
    p.dim = 1 + seed % 2;
    p.max_terms = 3;
    p.max_degree = 2;
    p.exact = false;
    p.min_modulus = 0.5;
    p.max_modulus = 3.0;
    p.separation = 0.1;
    p.box_side = 20;
    const auto inst = oracle::random_instance(seed, p);
    try {
      const Decomposition d = recover(*inst.samples, with_order(9));
      double err = 0.0;
      for_each_point(inst.samples->box(), [&](const LatticePoint& x) {
        err = std::max(err, std::abs(eval(d.result, x).to_complex() - eval(inst.f, x).to_complex()));
      });
      const double relative = err / std::max(1.0, inst.samples->max_abs());
      bool witnesses = d.result.terms().size() == inst.f.terms().size();
      for (const auto& t : inst.f.terms()) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& u : d.result.terms()) best = std::min(best, witness_distance(t.witness, u.witness));
        witnesses = witnesses && best <= 1e-6;
      }
      if (relative <= 1e-8 && witnesses) ++successes;
    } catch (const Error&) {
    }
  }
  CHECK(successes >= 95);
}

TEST_CASE("annihilators leave a small residual") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    oracle::InstanceProfile p;
    p.dim = 1 + seed % 2;
    p.exact = false;
    p.min_modulus = 0.8;
    p.max_modulus = 1.25;
    p.box_side = 16;
    const auto inst = oracle::random_instance(seed, p);
    const RecoveryConfig cfg = with_order(7);
    for (std::size_t axis = 0; axis < p.dim; ++axis) {
      const Annihilator q = section_annihilator(*inst.samples, axis, cfg);
      // q(S) s through the difference operators: q = prod (x - r)^m.
      SampledFunction out = *inst.samples;
      for (const auto& r : annihilator_roots(q, cfg)) {
        out = apply_sampled(out, Scalar(r.value), LatticePoint::unit(p.dim, axis), r.multiplicity);
      }
      CHECK(out.max_abs() <= cfg.rank_tol * inst.samples->max_abs());
    }
  }
}

TEST_CASE("spectral components sum to the input") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    oracle::InstanceProfile p;
    p.dim = 1;
    p.exact = false;
    p.min_modulus = 0.8;
    p.max_modulus = 1.25;
    p.box_side = 18;
    const auto inst = oracle::random_instance(seed, p);
    const RecoveryConfig cfg = with_order(7);
    const auto roots = annihilator_roots(section_annihilator(*inst.samples, 0, cfg), cfg);
    const auto parts = split_spectrum(*inst.samples, 0, roots, cfg);
    REQUIRE(parts.size() == roots.size());
    for_each_point(parts[0].box(), [&](const LatticePoint& x) {
      Complex sum(0.0);
      for (const auto& part : parts) sum += part.at(x).to_complex();
      CHECK(std::abs(sum - inst.samples->at(x).to_complex()) <= 1e-8 * std::max(1.0, inst.samples->max_abs()));
    });
  }
}

TEST_CASE("recovered witnesses interpolate the certified values") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    oracle::InstanceProfile p;
    p.dim = 2;
    p.exact = false;
    p.min_modulus = 0.8;
    p.max_modulus = 1.25;
    p.box_side = 20;
    const auto inst = oracle::random_instance(seed, p);
    const Decomposition d = recover(*inst.samples, with_order(9));
    REQUIRE(d.success);
    const std::vector<LatticePoint> shifts{{1, 0}, {0, 1}};
    MontelConfig mc;
    const WitnessCandidates c = certify_witness(*inst.samples, shifts, 9, mc);
    for (std::size_t k = 0; k < shifts.size(); ++k) {
      for (const auto& t : d.result.terms()) {
        const Complex v = t.witness.at(shifts[k]).to_complex();
        const bool listed = std::any_of(c.per_shift[k].begin(), c.per_shift[k].end(),
                                        [&](const Root& r) { return std::abs(r.value - v) <= 1e-6; });
        CHECK(listed);
      }
    }
  }
}
