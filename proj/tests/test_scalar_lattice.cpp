#include "support.hpp"

#include <algorithm>

using namespace testing;

TEST_CASE("gaussian rational arithmetic") {
  const GaussianRational a(1, 2);  // 1 + 2i
  const GaussianRational b(3, -1);
  CHECK(a * b == GaussianRational(5, 5));
  CHECK((a * b) / b == a);
  CHECK(a - a == GaussianRational{});
  CHECK(a.norm() == 5);
  CHECK(GaussianRational::parse("3/4", "-1") == GaussianRational(mpq_class(3, 4), -1));
  CHECK(error_code_of([] { GaussianRational::parse("x/2", "0"); }) == ErrorCode::parse_error);
}

TEST_CASE("scalar backends") {
  const Scalar half = Scalar::exact(mpq_class(1, 2));
  CHECK(half.is_exact());
  CHECK(exactly_equal(Scalar(2).pow(-2), Scalar::exact(mpq_class(1, 4))));
  CHECK(exactly_equal(Scalar(7).pow(0), Scalar(1)));

  const Scalar mixed = half + Scalar::floating(0.25);
  CHECK_FALSE(mixed.is_exact());
  CHECK(near(mixed, Scalar::floating(0.75), 1e-15));
  CHECK_FALSE(exactly_equal(mixed, Scalar::floating(0.75)));

  CHECK(error_code_of([] { Scalar(0).pow(-1); }) == ErrorCode::invalid_argument);
  CHECK(error_code_of([] { (void)(Scalar(1) / Scalar(0)); }) == ErrorCode::invalid_argument);
}

TEST_CASE("graded lex order compares degree, then coordinate 1 first") {
  const auto m = graded_lex_monomials(2, 2);
  const std::vector<MultiIndex> expected{{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}};
  CHECK(m == expected);
  CHECK(lex_less({0, 5}, {1, 0}));
  CHECK(GradedLexLess{}({3, 0}, {2, 2}));

  // Count is C(d + k, k) and the list is strictly increasing.
  for (std::size_t d = 1; d <= 3; ++d) {
    for (std::uint32_t k = 0; k <= 4; ++k) {
      const auto list = graded_lex_monomials(d, k);
      std::size_t binom = 1;
      for (std::size_t i = 1; i <= d; ++i) binom = binom * (k + i) / i;
      CHECK(list.size() == binom);
      CHECK(std::is_sorted(list.begin(), list.end(), GradedLexLess{}));
      CHECK(std::adjacent_find(list.begin(), list.end()) == list.end());
    }
  }
}

TEST_CASE("box enumeration is row-major") {
  const Box b({0, -1}, {1, 1});
  CHECK(b.volume() == 6);
  std::vector<LatticePoint> seen;
  for_each_point(b, [&](const LatticePoint& p) { seen.push_back(p); });
  const std::vector<LatticePoint> expected{{0, -1}, {0, 0}, {0, 1}, {1, -1}, {1, 0}, {1, 1}};
  CHECK(seen == expected);
  for (std::size_t i = 0; i < seen.size(); ++i) {
    CHECK(b.index_of(seen[i]) == i);
    CHECK(b.point_at(i) == seen[i]);
  }
}

TEST_CASE("box shrink and grow") {
  const Box b = Box::cube(1, 0, 9);
  CHECK(*b.shrink({1}, 2) == Box({0}, {7}));
  CHECK(*b.shrink({-1}, 2) == Box({2}, {9}));
  CHECK_FALSE(Box::cube(1, 0, 3).shrink({1}, 5).has_value());
  CHECK(b.grow({-2}, 1) == Box({-2}, {9}));
  CHECK(b.contains(*b.shrink({3}, 1)));
}
