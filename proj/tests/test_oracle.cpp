#include "support.hpp"

#include <algorithm>

using namespace testing;

namespace {

using Matrix = std::vector<std::vector<mpq_class>>;

// Delta_y on C^G as an explicit matrix: (Delta_y f)(x) = f(x + y) - f(x).
Matrix difference_matrix(const oracle::FiniteGroupSpec& g, const LatticePoint& y) {
  const std::size_t n = g.order();
  Matrix m(n, std::vector<mpq_class>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    m[i][g.index_of(g.element(i) + y)] += 1;
    m[i][i] -= 1;
  }
  return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix c(n, std::vector<mpq_class>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

std::size_t exact_rank(Matrix rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][c] == 0) continue;
      const mpq_class f = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

struct Ranks {
  std::size_t a, b, ab;
};

Ranks frechet_ranks(const oracle::FiniteGroupSpec& g, unsigned n) {
  const std::size_t size = g.order();
  Matrix a, b;
  std::vector<std::size_t> tuple(n + 1, 0);
  while (true) {
    Matrix prod = difference_matrix(g, g.element(tuple[0]));
    for (std::size_t k = 1; k <= n; ++k) prod = multiply(prod, difference_matrix(g, g.element(tuple[k])));
    a.insert(a.end(), prod.begin(), prod.end());
    std::size_t k = 0;
    while (k <= n && ++tuple[k] == size) tuple[k++] = 0;
    if (k > n) break;
  }
  for (std::size_t i = 0; i < size; ++i) {
    const Matrix d = difference_matrix(g, g.element(i));
    Matrix p = d;
    for (unsigned k = 0; k < n; ++k) p = multiply(p, d);
    b.insert(b.end(), p.begin(), p.end());
  }
  Matrix both = a;
  both.insert(both.end(), b.begin(), b.end());
  return {exact_rank(a), exact_rank(b), exact_rank(both)};
}

}  // namespace

TEST_CASE("brute_apply examples") {
  const PhiTable one{{LatticePoint{1}, Scalar(1)}};
  const SampledFunction c = SampledFunction::sample(power_of(1), Box::cube(1, 0, 9));
  CHECK(all_exact_zero(oracle::brute_apply(c, DiffProduct{{OpFactor{one, {1}, 1}}})));

  const SampledFunction s = SampledFunction::sample(n_two_n(), Box::cube(1, 0, 9));
  const PhiTable two{{LatticePoint{1}, Scalar(2)}};
  const SampledFunction once = oracle::brute_apply(s, DiffProduct{{OpFactor{two, {1}, 1}}});
  // (n + 1) 2^(n+1) - 2 n 2^n = 2^(n+1).
  CHECK(exactly_equal(once.at({0}), Scalar(2)));
  CHECK(exactly_equal(once.at({1}), Scalar(4)));
  CHECK(exactly_equal(once.at({2}), Scalar(8)));
  CHECK(all_exact_zero(oracle::brute_apply(s, DiffProduct{{OpFactor{two, {1}, 2}}})));

  CHECK(error_code_of([&] { oracle::brute_apply(s, DiffProduct{{OpFactor{two, {1}, 12}}}); }) ==
        ErrorCode::insufficient_box);
}

TEST_CASE("brute_apply on a finite group wraps around") {
  const oracle::FiniteGroupSpec z4{{4}};
  const std::vector<Scalar> table{Scalar(1), Scalar(2), Scalar(5), Scalar(7)};
  const auto out = oracle::brute_apply(z4, table, DiffProduct{{OpFactor{PhiTable{{LatticePoint{1}, Scalar(1)}}, {1}, 1}}});
  const std::vector<std::int64_t> expected{1, 3, 2, -6};
  for (std::size_t i = 0; i < 4; ++i) CHECK(exactly_equal(out[i], Scalar(expected[i])));
  CHECK(z4.reduce({-1}) == LatticePoint{3});
}

TEST_CASE("brute_apply matches apply_sampled exactly") {
  oracle::Rng rng(500);
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const std::size_t d = 1 + seed % 2;
    oracle::InstanceProfile p = exact_profile(d, 2, 2);
    p.box_side = 7;
    const auto inst = oracle::random_instance(seed, p);
    DiffProduct prod;
    const auto count = rng.uniform_int(1, 2);
    for (std::int64_t k = 0; k < count; ++k) {
      LatticePoint y = random_point(rng, d, -1, 1);
      const Scalar phi = oracle::random_exact(rng, 3, 2, true, false);
      prod.factors.push_back(OpFactor{PhiTable{{y, phi}}, y, static_cast<unsigned>(rng.uniform_int(1, 2))});
    }
    CHECK(same_exact_samples(oracle::brute_apply(*inst.samples, prod), apply_sampled(*inst.samples, prod)));
  }
}

TEST_CASE("frechet nullspaces") {
  const auto z4 = oracle::frechet_nullspaces({{4}}, 1);
  CHECK(z4.dim1 == 1);
  CHECK(z4.dim2 == 1);
  CHECK(z4.equal);

  const auto klein = oracle::frechet_nullspaces({{2, 2}}, 0);
  CHECK(klein.equal);
  CHECK(klein.dim1 == klein.dim2);

  const auto z5 = oracle::frechet_nullspaces({{5}}, 2);
  CHECK(z5.dim1 == z5.dim2);
  CHECK(z5.equal);
  CHECK(z5.exact_checked);
  CHECK_FALSE(z5.sampled);
}

TEST_CASE("frechet nullspaces agree with an exact dense computation") {
  const std::vector<oracle::FiniteGroupSpec> groups{{{1}}, {{2}}, {{3}}, {{4}}, {{6}}, {{2, 2}}, {{2, 3}}};
  for (const auto& g : groups) {
    for (unsigned n = 0; n <= 2; ++n) {
      const Ranks r = frechet_ranks(g, n);
      const auto res = oracle::frechet_nullspaces(g, n);
      CHECK(res.dim1 == g.order() - r.a);
      CHECK(res.dim2 == g.order() - r.b);
      CHECK(res.equal == (r.a == r.ab && r.b == r.ab));
    }
  }
}

TEST_CASE("frechet sampling and limits") {
  oracle::FrechetOptions opts;
  opts.full_enumeration_limit = 100;
  const auto sampled = oracle::frechet_nullspaces({{8}}, 2, opts);
  CHECK(sampled.sampled);
  CHECK(sampled.equal);

  CHECK(error_code_of([] { oracle::frechet_nullspaces({{4}}, 4); }) == ErrorCode::invalid_argument);
  CHECK(error_code_of([] { oracle::frechet_nullspaces({{100, 100}}, 1); }) == ErrorCode::size_bound_exceeded);
  CHECK(error_code_of([] { oracle::frechet_nullspaces({{0}}, 1); }) == ErrorCode::invalid_argument);
}

TEST_CASE("random instances are reproducible") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    oracle::InstanceProfile p;
    p.dim = 1 + seed % 3;
    p.box_side = 4;
    const auto a = oracle::random_instance(seed, p);
    const auto b = oracle::random_instance(seed, p);
    CHECK(equivalent(a.f, b.f));
    CHECK(same_exact_samples(*a.samples, *b.samples));
  }
  CHECK_FALSE(equivalent(oracle::random_instance(1).f, oracle::random_instance(2).f));
}

TEST_CASE("random instances honour the separation bound") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    oracle::InstanceProfile p;
    p.dim = 1 + seed % 2;
    p.exact = seed % 3 == 0;
    p.min_terms = 2;
    p.max_terms = 3;
    p.separation = 0.25;
    const ExpPoly f = oracle::random_instance(seed, p).f;
    for (std::size_t i = 0; i < f.terms().size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        double dist = 0.0;
        for (std::size_t k = 0; k < p.dim; ++k) {
          dist = std::max(dist, std::abs(f.terms()[i].witness[k].to_complex() - f.terms()[j].witness[k].to_complex()));
        }
        CHECK(dist >= p.separation);
      }
    }
    if (!p.exact) {
      for (const auto& t : f.terms()) {
        for (const auto& l : t.witness.lambda()) {
          CHECK(l.abs() >= p.min_modulus - 1e-12);
          CHECK(l.abs() <= p.max_modulus + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("degree-zero single-term profile gives a pure exponential") {
  oracle::InstanceProfile p;
  p.dim = 2;
  p.min_terms = 1;
  p.max_terms = 1;
  p.max_degree = 0;
  const ExpPoly f = oracle::random_instance(4, p).f;
  REQUIRE(f.terms().size() == 1);
  REQUIRE(f.terms()[0].coeffs.size() == 1);
  CHECK(f.terms()[0].coeffs.begin()->first == MultiIndex{0, 0});
}
