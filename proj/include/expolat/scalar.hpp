#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <variant>

#include <gmpxx.h>

namespace expolat {

using Complex = std::complex<double>;

/// Exact complex number a + b i with arbitrary-precision rational parts.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(mpq_class re, mpq_class im = 0);
  GaussianRational(std::int64_t re) : GaussianRational(mpq_class(mpz_class(static_cast<long>(re)))) {}

  /// Parses a pair of rational strings such as ("3/4", "-1").
  static GaussianRational parse(const std::string& re, const std::string& im);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }
  GaussianRational conj() const { return {re_, -im_}; }
  mpq_class norm() const { return re_ * re_ + im_ * im_; }

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  GaussianRational operator-() const { return {-re_, -im_}; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

/// A complex number carried either exactly (Gaussian rational) or as a
/// double-precision complex. Mixed arithmetic promotes to float.
///
/// Float values are never compared bitwise; use `near` / `is_zero(atol)`.
/// Exact values compare with `exactly_equal`.
class Scalar {
 public:
  enum class Backend { exact, floating };

  Scalar() : value_(GaussianRational{}) {}
  Scalar(GaussianRational v) : value_(std::move(v)) {}
  Scalar(Complex v) : value_(v) {}
  Scalar(std::int64_t v) : value_(GaussianRational(v)) {}
  Scalar(int v) : value_(GaussianRational(static_cast<std::int64_t>(v))) {}
  Scalar(const mpz_class& v) : value_(GaussianRational(mpq_class(v))) {}
  Scalar(const mpq_class& v) : value_(GaussianRational(v)) {}

  static Scalar exact(const mpq_class& re, const mpq_class& im = 0) { return GaussianRational(re, im); }
  static Scalar floating(double re, double im = 0.0) { return Complex(re, im); }

  Backend backend() const { return is_exact() ? Backend::exact : Backend::floating; }
  bool is_exact() const { return std::holds_alternative<GaussianRational>(value_); }

  /// Precondition: is_exact().
  const GaussianRational& as_exact() const { return std::get<GaussianRational>(value_); }
  Complex to_complex() const;
  Scalar to_float() const { return Scalar(to_complex()); }

  double abs() const { return std::abs(to_complex()); }

  /// Exact zero test; float values are zero only if both parts are +-0.
  bool exactly_zero() const;
  bool is_zero(double atol) const { return is_exact() ? as_exact().is_zero() : abs() <= atol; }

  /// Integer power; negative exponents invert (division by zero throws).
  Scalar pow(std::int64_t e) const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  Scalar operator-() const;

  std::string to_string() const;

 private:
  std::variant<GaussianRational, Complex> value_;
};

/// Equality of two exact scalars; false if either side is float.
bool exactly_equal(const Scalar& a, const Scalar& b);

/// |a - b| <= atol (exact pairs compare exactly regardless of atol).
bool near(const Scalar& a, const Scalar& b, double atol);

/// Total order used to sort witnesses deterministically: (re, im) as doubles,
/// ties between exact values broken by exact comparison.
bool scalar_less(const Scalar& a, const Scalar& b);

}  // namespace expolat
