#include "expolat/exppoly.hpp"

#include <algorithm>
#include <cmath>

#include "expolat/error.hpp"

namespace expolat {

namespace {

void require_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw Error(ErrorCode::dimension_mismatch, what);
}

bool drop_coefficient(const Scalar& c, double zero_tol) {
  return c.is_exact() ? c.as_exact().is_zero() : c.abs() <= zero_tol;
}

// Accumulates c * (x + y)^alpha into `out`, expanded in powers of x.
void add_translated_monomial(const MultiIndex& alpha, const LatticePoint& y, const Scalar& c, CoeffMap& out) {
  const std::size_t d = alpha.dim();
  MultiIndex k(d);
  // Per-coordinate binomial-times-power tables: row i holds
  // C(alpha_i, j) * y_i^(alpha_i - j) for j = 0..alpha_i.
  std::vector<std::vector<mpz_class>> table(d);
  for (std::size_t i = 0; i < d; ++i) {
    table[i].resize(alpha[i] + 1);
    for (std::uint32_t j = 0; j <= alpha[i]; ++j) {
      mpz_class binom;
      mpz_bin_uiui(binom.get_mpz_t(), alpha[i], j);
      mpz_class power;
      mpz_class base(static_cast<long>(y[i]));
      mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(), alpha[i] - j);
      table[i][j] = binom * power;
    }
  }
  while (true) {
    mpz_class w = 1;
    for (std::size_t i = 0; i < d && w != 0; ++i) w *= table[i][k[i]];
    if (w != 0) {
      auto [it, inserted] = out.try_emplace(k, Scalar(0));
      it->second += c * Scalar(w);
    }
    std::size_t axis = d;
    bool done = true;
    while (axis > 0) {
      --axis;
      if (k[axis] < alpha[axis]) {
        ++k[axis];
        done = false;
        break;
      }
      k[axis] = 0;
    }
    if (done) break;
  }
}

}  // namespace

ExponentialWitness::ExponentialWitness(std::vector<Scalar> lambda) : lambda_(std::move(lambda)) {
  for (const auto& l : lambda_) {
    if (l.is_exact() ? l.as_exact().is_zero() : l.exactly_zero()) {
      throw Error(ErrorCode::invalid_argument, "exponential witness components must be nonzero");
    }
  }
}

bool ExponentialWitness::is_exact() const {
  return std::all_of(lambda_.begin(), lambda_.end(), [](const Scalar& s) { return s.is_exact(); });
}

Scalar ExponentialWitness::at(const LatticePoint& n) const {
  require_dim(n.dim(), dim(), "witness and point dimensions differ");
  Scalar v(1);
  for (std::size_t i = 0; i < dim(); ++i) {
    if (n[i] != 0) v *= lambda_[i].pow(n[i]);
  }
  return v;
}

ExponentialWitness ExponentialWitness::inverse() const {
  std::vector<Scalar> inv;
  inv.reserve(dim());
  for (const auto& l : lambda_) inv.push_back(Scalar(1) / l);
  return ExponentialWitness(std::move(inv));
}

ExponentialWitness operator*(const ExponentialWitness& a, const ExponentialWitness& b) {
  require_dim(a.dim(), b.dim(), "witness dimensions differ");
  std::vector<Scalar> prod;
  prod.reserve(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) prod.push_back(a[i] * b[i]);
  return ExponentialWitness(std::move(prod));
}

bool witness_equal(const ExponentialWitness& a, const ExponentialWitness& b, double float_tol) {
  if (a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (!near(a[i], b[i], float_tol)) return false;
  }
  return true;
}

bool witness_less(const ExponentialWitness& a, const ExponentialWitness& b) {
  return std::lexicographical_compare(a.lambda().begin(), a.lambda().end(), b.lambda().begin(),
                                      b.lambda().end(), scalar_less);
}

std::uint64_t ExpTerm::degree() const {
  std::uint64_t deg = 0;
  for (const auto& [alpha, c] : coeffs) deg = std::max(deg, alpha.total_degree());
  return deg;
}

Scalar monomial_value(const MultiIndex& alpha, const LatticePoint& n) {
  require_dim(alpha.dim(), n.dim(), "multi-index and point dimensions differ");
  mpz_class v = 1;
  for (std::size_t i = 0; i < alpha.dim(); ++i) {
    if (alpha[i] == 0) continue;
    mpz_class p;
    mpz_class base(static_cast<long>(n[i]));
    mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), alpha[i]);
    v *= p;
  }
  return Scalar(v);
}

ExpPoly::ExpPoly(std::size_t dim, std::vector<ExpTerm> terms) : dim_(dim), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    require_dim(t.witness.dim(), dim_, "term witness dimension differs from ExpPoly dimension");
    for (const auto& [alpha, c] : t.coeffs) require_dim(alpha.dim(), dim_, "multi-index dimension differs");
  }
}

ExpPoly ExpPoly::monomial(const ExponentialWitness& w, const MultiIndex& alpha, const Scalar& c) {
  ExpTerm t{w, {}};
  t.coeffs.emplace(alpha, c);
  return ExpPoly(w.dim(), {std::move(t)}).normalized();
}

bool ExpPoly::is_exact() const {
  for (const auto& t : terms_) {
    if (!t.witness.is_exact()) return false;
    for (const auto& [alpha, c] : t.coeffs) {
      if (!c.is_exact()) return false;
    }
  }
  return true;
}

Scalar ExpPoly::eval(const LatticePoint& n) const {
  require_dim(n.dim(), dim_, "evaluation point dimension differs");
  Scalar total(0);
  for (const auto& t : terms_) {
    Scalar poly(0);
    for (const auto& [alpha, c] : t.coeffs) poly += c * monomial_value(alpha, n);
    total += poly * t.witness.at(n);
  }
  if (!total.is_exact()) {
    const Complex z = total.to_complex();
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorCode::evaluation_overflow, "float evaluation overflowed");
    }
  }
  return total;
}

ExpPoly ExpPoly::normalized(const NormalizeOptions& opts) const {
  std::vector<ExpTerm> merged;
  for (const auto& t : terms_) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const ExpTerm& m) {
      return witness_equal(m.witness, t.witness, opts.merge_tol);
    });
    if (it == merged.end()) {
      merged.push_back(ExpTerm{t.witness, {}});
      it = std::prev(merged.end());
    }
    for (const auto& [alpha, c] : t.coeffs) {
      auto [slot, inserted] = it->coeffs.try_emplace(alpha, c);
      if (!inserted) slot->second += c;
    }
  }
  for (auto& t : merged) {
    std::erase_if(t.coeffs, [&](const auto& kv) { return drop_coefficient(kv.second, opts.zero_tol); });
  }
  std::erase_if(merged, [](const ExpTerm& t) { return t.coeffs.empty(); });
  std::sort(merged.begin(), merged.end(),
            [](const ExpTerm& a, const ExpTerm& b) { return witness_less(a.witness, b.witness); });
  ExpPoly out(dim_);
  out.terms_ = std::move(merged);
  return out;
}

ExpPoly ExpPoly::translate(const LatticePoint& y) const {
  require_dim(y.dim(), dim_, "translation dimension differs");
  ExpPoly out(dim_);
  for (const auto& t : terms_) {
    const Scalar shift_factor = t.witness.at(y);
    ExpTerm moved{t.witness, {}};
    for (const auto& [alpha, c] : t.coeffs) add_translated_monomial(alpha, y, c * shift_factor, moved.coeffs);
    out.terms_.push_back(std::move(moved));
  }
  return out.normalized();
}

ExpPoly ExpPoly::scaled(const Scalar& c) const {
  ExpPoly out = *this;
  for (auto& t : out.terms_) {
    for (auto& [alpha, v] : t.coeffs) v *= c;
  }
  return out.normalized();
}

ExpPoly ExpPoly::times_exponential(const ExponentialWitness& mu) const {
  require_dim(mu.dim(), dim_, "exponential dimension differs");
  ExpPoly out = *this;
  for (auto& t : out.terms_) t.witness = t.witness * mu;
  return out.normalized();
}

ExpPoly ExpPoly::to_float() const {
  ExpPoly out(dim_);
  for (const auto& t : terms_) {
    std::vector<Scalar> lam;
    for (const auto& l : t.witness.lambda()) lam.push_back(l.to_float());
    ExpTerm ft{ExponentialWitness(std::move(lam)), {}};
    for (const auto& [alpha, c] : t.coeffs) ft.coeffs.emplace(alpha, c.to_float());
    out.terms_.push_back(std::move(ft));
  }
  return out.normalized();
}

Scalar eval(const ExpPoly& f, const LatticePoint& n) { return f.eval(n); }

ExpPoly normalize(const ExpPoly& f, const NormalizeOptions& opts) { return f.normalized(opts); }

ExpPoly translate(const ExpPoly& f, const LatticePoint& y) { return f.translate(y); }

ExpPoly linear_combine(const std::vector<std::pair<Scalar, ExpPoly>>& pairs) {
  if (pairs.empty()) return ExpPoly(0);
  const std::size_t d = pairs.front().second.dim();
  std::vector<ExpTerm> all;
  for (const auto& [c, f] : pairs) {
    require_dim(f.dim(), d, "linear_combine operands differ in dimension");
    for (const auto& t : f.terms()) {
      ExpTerm s = t;
      for (auto& [alpha, v] : s.coeffs) v *= c;
      all.push_back(std::move(s));
    }
  }
  return ExpPoly(d, std::move(all)).normalized();
}

ExpPoly operator+(const ExpPoly& a, const ExpPoly& b) { return linear_combine({{Scalar(1), a}, {Scalar(1), b}}); }

ExpPoly operator-(const ExpPoly& a, const ExpPoly& b) { return linear_combine({{Scalar(1), a}, {Scalar(-1), b}}); }

bool equivalent(const ExpPoly& a, const ExpPoly& b, double tol) {
  if (a.dim() != b.dim()) return false;
  const ExpPoly diff = linear_combine({{Scalar(1), a}, {Scalar(-1), b}}).normalized({std::max(tol, 1e-12), tol});
  return diff.is_zero();
}

}  // namespace expolat
