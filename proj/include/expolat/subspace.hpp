#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "expolat/diffops.hpp"
#include "expolat/exppoly.hpp"

namespace expolat {

/// Coordinate of an exact ExpPoly in the (witness, monomial) basis. Distinct
/// witness-monomial functions are linearly independent, so these
/// coordinates are faithful.
struct CoordKey {
  ExponentialWitness witness;
  MultiIndex alpha;
};

struct CoordLess {
  bool operator()(const CoordKey& a, const CoordKey& b) const;
};

using SparseVector = std::map<CoordKey, GaussianRational, CoordLess>;

/// Throws invalid_argument for float witnesses or coefficients.
SparseVector coordinates(const ExpPoly& f);
ExpPoly from_coordinates(std::size_t dim, const SparseVector& v);

/// Incrementally maintained reduced row echelon form over Q(i).
class ExactRowSpace {
 public:
  /// Adds v; returns false (and leaves the space unchanged) if v is already
  /// in the span.
  bool insert(const SparseVector& v);
  bool contains(const SparseVector& v) const;
  std::size_t rank() const { return rows_.size(); }
  const std::vector<SparseVector>& rows() const { return rows_; }

 private:
  SparseVector reduce(SparseVector v) const;
  std::vector<SparseVector> rows_;
};

/// Finite-dimensional space of exact ExpPoly values.
class SpanSpace {
 public:
  explicit SpanSpace(std::size_t ambient_dim = 1) : dim_(ambient_dim) {}

  /// Keeps the independent subset of `generators`, in order.
  static SpanSpace span(std::size_t ambient_dim, const std::vector<ExpPoly>& generators);

  std::size_t ambient_dim() const { return dim_; }
  std::size_t dimension() const { return basis_.size(); }
  const std::vector<ExpPoly>& basis() const { return basis_; }

  bool contains(const ExpPoly& f) const;
  bool contains(const SpanSpace& other) const;
  /// Returns true if f was independent of the current basis.
  bool add(const ExpPoly& f);

  /// Reduced echelon basis, identical for equal subspaces.
  std::vector<ExpPoly> canonical_basis() const;

  friend bool operator==(const SpanSpace& a, const SpanSpace& b) {
    return a.dim_ == b.dim_ && a.dimension() == b.dimension() && a.contains(b);
  }

 private:
  std::size_t dim_;
  std::vector<ExpPoly> basis_;
  ExactRowSpace echelon_;
};

/// The operator L = Delta_{phi;shift}^power of a witness-based factor.
ExpPoly apply_operator(const OpFactor& op, const ExpPoly& f);

/// True iff op(basis) lies in V.
bool is_invariant(const SpanSpace& space, const OpFactor& op);

struct ExtendResult {
  SpanSpace space;
  /// n > 0 and V was L^n-invariant; only then is the result the smallest
  /// L-invariant space containing V.
  bool precondition_met = false;
  /// The result is L-invariant.
  bool invariant = false;
};

/// V + L(V) + ... + L^n(V).
ExtendResult extend_once(const SpanSpace& v, const OpFactor& op, unsigned n);

struct ChainResult {
  SpanSpace space;
  /// Step i had V_{i-1} invariant under L_i^{s_i}.
  std::vector<bool> step_precondition;
  bool precondition_unmet = false;
  /// V_t is invariant under every listed operator.
  bool invariant_under_all = false;
};

/// V_0 = V, V_i = (V_{i-1})_{L_i}^{[s_i]}.
ChainResult closure_chain(const SpanSpace& v, const std::vector<OpFactor>& ops, const std::vector<unsigned>& powers);

struct InvarianceReport {
  bool translation = false;
  bool difference = false;
  bool modified_difference = false;
  /// Generators pass the Smith normal form test for Z^d.
  bool generators_span_lattice = false;
};

/// tau_g(basis) in V for every generator g.
bool is_translation_invariant(const SpanSpace& v, const std::vector<LatticePoint>& generators);

/// All three invariance notions; `phi_values[k]` is phi(g_k) for the
/// modified-difference check.
InvarianceReport invariance_report(const SpanSpace& v, const std::vector<LatticePoint>& generators,
                                   const std::vector<Scalar>& phi_values);

/// Basis {n^alpha e(n) : |alpha| <= degree_bound} in graded lex order
/// (coordinate 1 compared first on ties).
struct GradedLexBasis {
  GradedLexBasis(ExponentialWitness w, std::uint32_t degree_bound);

  ExponentialWitness witness;
  std::uint32_t degree_bound;
  std::vector<MultiIndex> monomials;
};

/// Square matrix; column j holds the coordinates of the operator applied to
/// the j-th basis element.
struct OperatorMatrix {
  std::vector<std::vector<Scalar>> entries;

  std::size_t size() const { return entries.size(); }
  OperatorMatrix operator*(const OperatorMatrix& o) const;
  OperatorMatrix power(unsigned k) const;
  bool is_zero() const;
  bool is_upper_triangular() const;
  /// Exact determinant by fraction-free elimination (exact entries only).
  Scalar determinant() const;
};

/// Matrix of Delta_{phi;h} restricted to span(basis).
OperatorMatrix operator_matrix(const GradedLexBasis& basis, const Scalar& phi_value, const LatticePoint& h);

}  // namespace expolat
