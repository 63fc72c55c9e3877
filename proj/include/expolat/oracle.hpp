#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "expolat/diffops.hpp"
#include "expolat/exppoly.hpp"

// Reference implementations written for clarity, not speed. Nothing here
// calls into diffops' application routines; they serve as the comparison
// side of the tests.

namespace expolat::oracle {

/// G = Z_{m_1} x ... x Z_{m_k}.
struct FiniteGroupSpec {
  std::vector<std::int64_t> moduli;

  /// Throws invalid_argument on a modulus < 1 and size_bound_exceeded when
  /// |G| > bound.
  void validate(std::size_t bound = 4096) const;
  std::size_t order() const;
  std::size_t rank() const { return moduli.size(); }
  /// Canonical representative with coordinates in [0, m_i).
  LatticePoint reduce(const LatticePoint& x) const;
  std::size_t index_of(const LatticePoint& x) const;
  LatticePoint element(std::size_t index) const;
};

/// Delta-product applied by literal recursion on the definition:
///   (Delta_{phi;y}^p g)(x) = (Delta_{phi;y}^{p-1} g)(x+y) - phi(y) (Delta_{phi;y}^{p-1} g)(x).
/// Each output point is computed independently from the input samples.
SampledFunction brute_apply(const SampledFunction& s, const DiffProduct& product);

/// Same recursion for a full value table on a finite group (indices per
/// FiniteGroupSpec::index_of); shifts wrap around.
std::vector<Scalar> brute_apply(const FiniteGroupSpec& group, const std::vector<Scalar>& table,
                                const DiffProduct& product);

struct FrechetOptions {
  std::size_t size_bound = 4096;
  /// Full enumeration of (y_1..y_{n+1}) when |G|^{n+1} <= this.
  std::uint64_t full_enumeration_limit = std::uint64_t{1} << 20;
  std::uint64_t seed = 0;
  double rank_tol = 1e-9;
  /// Groups up to this order are also checked in exact arithmetic.
  std::size_t exact_limit = 16;
};

struct FrechetResult {
  std::size_t dim1 = 0;
  std::size_t dim2 = 0;
  bool equal = false;
  /// The (y_1..y_{n+1}) tuples were a seeded random subset.
  bool sampled = false;
  /// Exact rational ranks agreed with the float ones.
  bool exact_checked = false;
};

/// Nullspace dimensions of Delta_{y1..y_{n+1}} f = 0 (all tuples) and
/// Delta_y^{n+1} f = 0 (all y) on C^G, and whether the nullspaces coincide
/// (rank[A] = rank[A;B] = rank[B]).
FrechetResult frechet_nullspaces(const FiniteGroupSpec& group, unsigned n, const FrechetOptions& opts = {});

struct InstanceProfile {
  std::size_t dim = 1;
  std::size_t min_terms = 1;
  std::size_t max_terms = 3;
  std::uint32_t max_degree = 2;
  bool exact = true;
  /// Float witnesses: modulus range of each component.
  double min_modulus = 0.5;
  double max_modulus = 3.0;
  /// Minimum distance between distinct witness values along every axis
  /// (float profiles) and between whole witnesses (max-norm).
  double separation = 0.1;
  /// Float witnesses are real (no imaginary part) when true.
  bool real_witnesses = false;
  /// Optional sampling cube [0, box_side - 1]^dim; 0 = no samples.
  std::int64_t box_side = 0;
};

struct RandomInstance {
  ExpPoly f;
  std::optional<SampledFunction> samples;
};

/// Reproducible instance: identical seed and profile give identical output
/// on every platform (only mt19937_64 raw output is used).
RandomInstance random_instance(std::uint64_t seed, const InstanceProfile& profile = {});

/// Deterministic helpers over mt19937_64 raw output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  double uniform_real(double lo, double hi);
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Random exact Gaussian rational with numerator in [-num, num] and
/// denominator in [1, den]; `nonzero` rejects zero.
Scalar random_exact(Rng& rng, std::int64_t num, std::int64_t den, bool complex, bool nonzero);

}  // namespace expolat::oracle
