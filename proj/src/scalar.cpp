#include "expolat/scalar.hpp"

#include <cmath>

#include "expolat/error.hpp"

namespace expolat {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::evaluation_overflow: return "evaluation-overflow";
    case ErrorCode::insufficient_box: return "insufficient-box";
    case ErrorCode::missing_phi: return "missing-phi";
    case ErrorCode::no_annihilator: return "no-annihilator";
    case ErrorCode::ill_conditioned_projection: return "ill-conditioned-projection";
    case ErrorCode::no_candidate: return "no-candidate";
    case ErrorCode::size_bound_exceeded: return "size-bound-exceeded";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::parse_error: return "parse-error";
  }
  return "unknown";
}

GaussianRational::GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

GaussianRational GaussianRational::parse(const std::string& re, const std::string& im) {
  auto read = [](const std::string& s) {
    mpq_class q;
    if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0) {
      throw Error(ErrorCode::parse_error, "not a rational number: '" + s + "'");
    }
    q.canonicalize();
    return q;
  };
  return {read(re), read(im)};
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw Error(ErrorCode::invalid_argument, "division by exact zero");
  if (sgn(o.im_) == 0) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  const mpq_class n = o.norm();
  *this *= o.conj();
  re_ /= n;
  im_ /= n;
  return *this;
}

Complex Scalar::to_complex() const {
  if (is_exact()) return as_exact().to_complex();
  return std::get<Complex>(value_);
}

bool Scalar::exactly_zero() const {
  if (is_exact()) return as_exact().is_zero();
  const Complex& c = std::get<Complex>(value_);
  return c.real() == 0.0 && c.imag() == 0.0;
}

Scalar Scalar::pow(std::int64_t e) const {
  if (e < 0) {
    if (is_exact() ? as_exact().is_zero() : exactly_zero()) {
      throw Error(ErrorCode::invalid_argument, "negative power of zero");
    }
    return (Scalar(1) / *this).pow(-e);
  }
  // Square-and-multiply keeps float error comparable to the exact path.
  Scalar result(1);
  Scalar base = *this;
  auto k = static_cast<std::uint64_t>(e);
  while (k != 0) {
    if (k & 1U) result *= base;
    k >>= 1U;
    if (k != 0) base *= base;
  }
  return result;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (is_exact() && o.is_exact()) {
    std::get<GaussianRational>(value_) += o.as_exact();
  } else {
    value_ = to_complex() + o.to_complex();
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  if (is_exact() && o.is_exact()) {
    std::get<GaussianRational>(value_) -= o.as_exact();
  } else {
    value_ = to_complex() - o.to_complex();
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (is_exact() && o.is_exact()) {
    std::get<GaussianRational>(value_) *= o.as_exact();
  } else {
    value_ = to_complex() * o.to_complex();
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (is_exact() && o.is_exact()) {
    std::get<GaussianRational>(value_) /= o.as_exact();
  } else {
    value_ = to_complex() / o.to_complex();
  }
  return *this;
}

Scalar Scalar::operator-() const {
  if (is_exact()) return Scalar(-as_exact());
  return Scalar(-std::get<Complex>(value_));
}

std::string Scalar::to_string() const {
  if (is_exact()) {
    const auto& g = as_exact();
    if (sgn(g.im()) == 0) return g.re().get_str();
    return "(" + g.re().get_str() + ")+(" + g.im().get_str() + ")i";
  }
  const Complex c = to_complex();
  return "(" + std::to_string(c.real()) + "," + std::to_string(c.imag()) + ")";
}

bool exactly_equal(const Scalar& a, const Scalar& b) {
  return a.is_exact() && b.is_exact() && a.as_exact() == b.as_exact();
}

bool near(const Scalar& a, const Scalar& b, double atol) {
  if (a.is_exact() && b.is_exact()) return a.as_exact() == b.as_exact();
  return std::abs(a.to_complex() - b.to_complex()) <= atol;
}

bool scalar_less(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) {
    const auto& x = a.as_exact();
    const auto& y = b.as_exact();
    if (x.re() != y.re()) return x.re() < y.re();
    return x.im() < y.im();
  }
  const Complex x = a.to_complex();
  const Complex y = b.to_complex();
  if (x.real() != y.real()) return x.real() < y.real();
  if (x.imag() != y.imag()) return x.imag() < y.imag();
  // Exact before float when numerically tied.
  return a.is_exact() && !b.is_exact();
}

}  // namespace expolat
