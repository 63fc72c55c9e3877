#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "expolat/lattice.hpp"
#include "expolat/scalar.hpp"

namespace expolat {

/// The exponential n -> lambda^n on Z^d, lambda in (C \ {0})^d.
class ExponentialWitness {
 public:
  ExponentialWitness() = default;
  /// Throws invalid_argument if a component is zero.
  explicit ExponentialWitness(std::vector<Scalar> lambda);

  std::size_t dim() const { return lambda_.size(); }
  const std::vector<Scalar>& lambda() const { return lambda_; }
  const Scalar& operator[](std::size_t i) const { return lambda_[i]; }
  bool is_exact() const;

  /// lambda^n; negative coordinates use exact inversion / complex reciprocal.
  Scalar at(const LatticePoint& n) const;

  ExponentialWitness inverse() const;
  friend ExponentialWitness operator*(const ExponentialWitness& a, const ExponentialWitness& b);

 private:
  std::vector<Scalar> lambda_;
};

bool witness_equal(const ExponentialWitness& a, const ExponentialWitness& b, double float_tol);
bool witness_less(const ExponentialWitness& a, const ExponentialWitness& b);

using CoeffMap = std::map<MultiIndex, Scalar, GradedLexLess>;

/// p(n) * lambda^n with p(n) = sum_alpha c_alpha n^alpha.
struct ExpTerm {
  ExponentialWitness witness;
  CoeffMap coeffs;

  /// Largest |alpha| present; 0 for an empty map.
  std::uint64_t degree() const;
};

struct NormalizeOptions {
  /// Float witnesses within this componentwise distance are merged.
  double merge_tol = 1e-12;
  /// Float coefficients with modulus <= zero_tol are dropped.
  double zero_tol = 0.0;
};

/// Finite sum of exponential monomials on Z^d. The empty term list is the
/// zero function. Most operations return normalized values.
class ExpPoly {
 public:
  ExpPoly() = default;
  explicit ExpPoly(std::size_t dim) : dim_(dim) {}
  ExpPoly(std::size_t dim, std::vector<ExpTerm> terms);

  /// c * n^alpha * lambda^n.
  static ExpPoly monomial(const ExponentialWitness& w, const MultiIndex& alpha, const Scalar& c);

  std::size_t dim() const { return dim_; }
  const std::vector<ExpTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_exact() const;

  Scalar eval(const LatticePoint& n) const;

  ExpPoly normalized(const NormalizeOptions& opts = {}) const;
  ExpPoly translate(const LatticePoint& y) const;
  ExpPoly scaled(const Scalar& c) const;

  /// Pointwise product with the exponential mu^n (multiplies every witness).
  ExpPoly times_exponential(const ExponentialWitness& mu) const;

  ExpPoly to_float() const;

 private:
  std::size_t dim_ = 0;
  std::vector<ExpTerm> terms_;
};

Scalar eval(const ExpPoly& f, const LatticePoint& n);
ExpPoly normalize(const ExpPoly& f, const NormalizeOptions& opts = {});
ExpPoly translate(const ExpPoly& f, const LatticePoint& y);
ExpPoly linear_combine(const std::vector<std::pair<Scalar, ExpPoly>>& pairs);

ExpPoly operator+(const ExpPoly& a, const ExpPoly& b);
ExpPoly operator-(const ExpPoly& a, const ExpPoly& b);

/// Structural equality of normalized forms (exact scalars compared exactly,
/// float ones within `tol`).
bool equivalent(const ExpPoly& a, const ExpPoly& b, double tol = 0.0);

/// n^alpha with 0^0 = 1.
Scalar monomial_value(const MultiIndex& alpha, const LatticePoint& n);

}  // namespace expolat
