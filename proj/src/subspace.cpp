#include "expolat/subspace.hpp"

#include <algorithm>

#include "expolat/error.hpp"
#include "expolat/smith.hpp"

namespace expolat {

bool CoordLess::operator()(const CoordKey& a, const CoordKey& b) const {
  if (witness_less(a.witness, b.witness)) return true;
  if (witness_less(b.witness, a.witness)) return false;
  return GradedLexLess{}(a.alpha, b.alpha);
}

SparseVector coordinates(const ExpPoly& f) {
  SparseVector v;
  const ExpPoly g = f.normalized();
  for (const auto& t : g.terms()) {
    if (!t.witness.is_exact()) throw Error(ErrorCode::invalid_argument, "subspaces hold exact functions only");
    for (const auto& [alpha, c] : t.coeffs) {
      if (!c.is_exact()) throw Error(ErrorCode::invalid_argument, "subspaces hold exact functions only");
      v.emplace(CoordKey{t.witness, alpha}, c.as_exact());
    }
  }
  return v;
}

ExpPoly from_coordinates(std::size_t dim, const SparseVector& v) {
  std::vector<ExpTerm> terms;
  for (const auto& [key, c] : v) {
    ExpTerm t{key.witness, {}};
    t.coeffs.emplace(key.alpha, Scalar(c));
    terms.push_back(std::move(t));
  }
  return ExpPoly(dim, std::move(terms)).normalized();
}

SparseVector ExactRowSpace::reduce(SparseVector v) const {
  // Rows are fully reduced with distinct leading keys, so one pass suffices.
  for (const auto& row : rows_) {
    const auto& [pivot_key, pivot_one] = *row.begin();
    auto it = v.find(pivot_key);
    if (it == v.end()) continue;
    const GaussianRational factor = it->second;
    for (const auto& [key, c] : row) {
      auto [slot, inserted] = v.try_emplace(key, GaussianRational{});
      slot->second -= factor * c;
      if (slot->second.is_zero()) v.erase(slot);
    }
  }
  return v;
}

bool ExactRowSpace::insert(const SparseVector& v) {
  SparseVector r = reduce(v);
  if (r.empty()) return false;
  const GaussianRational lead = r.begin()->second;
  for (auto& [key, c] : r) c /= lead;
  const CoordKey pivot = r.begin()->first;
  for (auto& row : rows_) {
    auto it = row.find(pivot);
    if (it == row.end()) continue;
    const GaussianRational factor = it->second;
    for (const auto& [key, c] : r) {
      auto [slot, inserted] = row.try_emplace(key, GaussianRational{});
      slot->second -= factor * c;
      if (slot->second.is_zero()) row.erase(slot);
    }
  }
  rows_.push_back(std::move(r));
  // Keep leading keys ordered so canonical bases compare equal.
  std::sort(rows_.begin(), rows_.end(),
            [](const SparseVector& a, const SparseVector& b) { return CoordLess{}(a.begin()->first, b.begin()->first); });
  return true;
}

bool ExactRowSpace::contains(const SparseVector& v) const { return reduce(v).empty(); }

SpanSpace SpanSpace::span(std::size_t ambient_dim, const std::vector<ExpPoly>& generators) {
  SpanSpace s(ambient_dim);
  for (const auto& g : generators) s.add(g);
  return s;
}

bool SpanSpace::contains(const ExpPoly& f) const {
  if (f.dim() != dim_) throw Error(ErrorCode::dimension_mismatch, "function dimension differs from the space");
  return echelon_.contains(coordinates(f));
}

bool SpanSpace::contains(const SpanSpace& other) const {
  return std::all_of(other.basis_.begin(), other.basis_.end(), [&](const ExpPoly& f) { return contains(f); });
}

bool SpanSpace::add(const ExpPoly& f) {
  if (f.dim() != dim_) throw Error(ErrorCode::dimension_mismatch, "function dimension differs from the space");
  if (!echelon_.insert(coordinates(f))) return false;
  basis_.push_back(f.normalized());
  return true;
}

std::vector<ExpPoly> SpanSpace::canonical_basis() const {
  std::vector<ExpPoly> out;
  for (const auto& row : echelon_.rows()) out.push_back(from_coordinates(dim_, row));
  return out;
}

ExpPoly apply_operator(const OpFactor& op, const ExpPoly& f) {
  return apply_difference(f, op.phi_at_shift(), op.shift, op.power);
}

bool is_invariant(const SpanSpace& space, const OpFactor& op) {
  return std::all_of(space.basis().begin(), space.basis().end(),
                     [&](const ExpPoly& b) { return space.contains(apply_operator(op, b)); });
}

namespace {

bool is_invariant_under_power(const SpanSpace& space, const OpFactor& op, unsigned n) {
  OpFactor powered = op;
  powered.power = op.power * n;
  return n > 0 && is_invariant(space, powered);
}

}  // namespace

ExtendResult extend_once(const SpanSpace& v, const OpFactor& op, unsigned n) {
  ExtendResult out{v, is_invariant_under_power(v, op, n), false};
  std::vector<ExpPoly> layer = v.basis();
  for (unsigned k = 1; k <= n; ++k) {
    for (auto& f : layer) {
      f = apply_operator(op, f);
      out.space.add(f);
    }
  }
  out.invariant = is_invariant(out.space, op);
  return out;
}

ChainResult closure_chain(const SpanSpace& v, const std::vector<OpFactor>& ops, const std::vector<unsigned>& powers) {
  if (ops.size() != powers.size()) throw Error(ErrorCode::invalid_argument, "one power per operator required");
  ChainResult out{v, {}, false, false};
  for (std::size_t i = 0; i < ops.size(); ++i) {
    ExtendResult step = extend_once(out.space, ops[i], powers[i]);
    out.step_precondition.push_back(step.precondition_met);
    if (!step.precondition_met) out.precondition_unmet = true;
    out.space = std::move(step.space);
  }
  out.invariant_under_all =
      std::all_of(ops.begin(), ops.end(), [&](const OpFactor& op) { return is_invariant(out.space, op); });
  return out;
}

bool is_translation_invariant(const SpanSpace& v, const std::vector<LatticePoint>& generators) {
  for (const auto& g : generators) {
    for (const auto& b : v.basis()) {
      if (!v.contains(b.translate(g))) return false;
    }
  }
  return true;
}

InvarianceReport invariance_report(const SpanSpace& v, const std::vector<LatticePoint>& generators,
                                   const std::vector<Scalar>& phi_values) {
  if (phi_values.size() != generators.size()) {
    throw Error(ErrorCode::invalid_argument, "one phi value per generator required");
  }
  InvarianceReport r;
  r.translation = is_translation_invariant(v, generators);
  r.difference = true;
  r.modified_difference = true;
  for (std::size_t k = 0; k < generators.size(); ++k) {
    for (const auto& b : v.basis()) {
      if (r.difference && !v.contains(apply_difference(b, Scalar(1), generators[k], 1))) r.difference = false;
      if (r.modified_difference && !v.contains(apply_difference(b, phi_values[k], generators[k], 1))) {
        r.modified_difference = false;
      }
    }
  }
  r.generators_span_lattice = generates_lattice(generators, v.ambient_dim());
  return r;
}

GradedLexBasis::GradedLexBasis(ExponentialWitness w, std::uint32_t bound)
    : witness(std::move(w)), degree_bound(bound), monomials(graded_lex_monomials(witness.dim(), bound)) {}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& o) const {
  const std::size_t n = size();
  OperatorMatrix out{std::vector<std::vector<Scalar>>(n, std::vector<Scalar>(n, Scalar(0)))};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (entries[i][k].exactly_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) out.entries[i][j] += entries[i][k] * o.entries[k][j];
    }
  }
  return out;
}

OperatorMatrix OperatorMatrix::power(unsigned k) const {
  const std::size_t n = size();
  OperatorMatrix out{std::vector<std::vector<Scalar>>(n, std::vector<Scalar>(n, Scalar(0)))};
  for (std::size_t i = 0; i < n; ++i) out.entries[i][i] = Scalar(1);
  for (unsigned i = 0; i < k; ++i) out = out * *this;
  return out;
}

bool OperatorMatrix::is_zero() const {
  for (const auto& row : entries) {
    for (const auto& e : row) {
      if (!e.exactly_zero()) return false;
    }
  }
  return true;
}

bool OperatorMatrix::is_upper_triangular() const {
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (!entries[i][j].exactly_zero()) return false;
    }
  }
  return true;
}

Scalar OperatorMatrix::determinant() const {
  std::vector<std::vector<Scalar>> a = entries;
  const std::size_t n = size();
  Scalar det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c].exactly_zero()) ++p;
    if (p == n) return Scalar(0);
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c].exactly_zero()) continue;
      const Scalar f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

OperatorMatrix operator_matrix(const GradedLexBasis& basis, const Scalar& phi_value, const LatticePoint& h) {
  const std::size_t n = basis.monomials.size();
  OperatorMatrix m{std::vector<std::vector<Scalar>>(n, std::vector<Scalar>(n, Scalar(0)))};
  for (std::size_t j = 0; j < n; ++j) {
    const ExpPoly image =
        apply_difference(ExpPoly::monomial(basis.witness, basis.monomials[j], Scalar(1)), phi_value, h, 1);
    for (const auto& t : image.terms()) {
      for (const auto& [alpha, c] : t.coeffs) {
        const auto pos = std::find(basis.monomials.begin(), basis.monomials.end(), alpha);
        m.entries[static_cast<std::size_t>(pos - basis.monomials.begin())][j] = c;
      }
    }
  }
  return m;
}

}  // namespace expolat
