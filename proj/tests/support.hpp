#pragma once

#include <doctest.h>

#include <functional>
#include <initializer_list>
#include <vector>

#include "expolat/diffops.hpp"
#include "expolat/error.hpp"
#include "expolat/exppoly.hpp"
#include "expolat/oracle.hpp"

namespace testing {

using namespace expolat;

inline ExponentialWitness witness(std::initializer_list<std::int64_t> l) {
  std::vector<Scalar> v;
  for (auto x : l) v.emplace_back(x);
  return ExponentialWitness(std::move(v));
}

inline ExpPoly mono(const ExponentialWitness& w, const MultiIndex& alpha, const Scalar& c = Scalar(1)) {
  return ExpPoly::monomial(w, alpha, c);
}

// n * 2^n on Z.
inline ExpPoly n_two_n() { return mono(witness({2}), {1}); }
// b^n on Z.
inline ExpPoly power_of(std::int64_t b) { return mono(witness({b}), {0}); }

inline OpFactor factor(const ExponentialWitness& w, LatticePoint shift, unsigned power = 1) {
  return OpFactor{w, std::move(shift), power};
}

inline ErrorCode error_code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an expolat::Error");
  return ErrorCode::invalid_argument;
}

inline bool all_exact_zero(const SampledFunction& s) {
  for (const auto& v : s.values()) {
    if (!v.is_exact() || !v.exactly_zero()) return false;
  }
  return true;
}

inline bool same_exact_samples(const SampledFunction& a, const SampledFunction& b) {
  if (!(a.box() == b.box())) return false;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    if (!exactly_equal(a.values()[i], b.values()[i])) return false;
  }
  return true;
}

inline oracle::InstanceProfile exact_profile(std::size_t dim, std::size_t max_terms, std::uint32_t max_degree) {
  oracle::InstanceProfile p;
  p.dim = dim;
  p.max_terms = max_terms;
  p.max_degree = max_degree;
  p.exact = true;
  return p;
}

inline LatticePoint random_point(oracle::Rng& rng, std::size_t dim, std::int64_t lo, std::int64_t hi) {
  LatticePoint p(dim);
  for (std::size_t i = 0; i < dim; ++i) p[i] = rng.uniform_int(lo, hi);
  return p;
}

}  // namespace testing
