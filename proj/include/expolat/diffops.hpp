#pragma once

#include <cstddef>
#include <map>
#include <variant>
#include <vector>

#include "expolat/exppoly.hpp"
#include "expolat/lattice.hpp"
#include "expolat/scalar.hpp"

namespace expolat {

/// Values of f on an inclusive box, stored row-major.
class SampledFunction {
 public:
  SampledFunction() = default;
  /// Throws insufficient_box on an empty box and invalid_argument when the
  /// value count differs from the box volume.
  SampledFunction(Box box, std::vector<Scalar> values);

  /// Samples `f` on `box` (float overflow surfaces as evaluation_overflow).
  static SampledFunction sample(const ExpPoly& f, const Box& box);

  std::size_t dim() const { return box_.dim(); }
  const Box& box() const { return box_; }
  const std::vector<Scalar>& values() const { return values_; }
  const Scalar& at(const LatticePoint& p) const { return values_[box_.index_of(p)]; }

  /// Max modulus over all samples.
  double max_abs() const;
  SampledFunction to_float() const;
  /// Restriction to a sub-box (must be contained in the box).
  SampledFunction restrict_to(const Box& sub) const;

 private:
  Box box_;
  std::vector<Scalar> values_;
};

/// phi(y) on the shifts actually used. phi is an arbitrary function; zero
/// values are allowed.
using PhiTable = std::map<LatticePoint, Scalar>;

/// One factor Delta_{phi;shift}^power of a difference-operator product.
struct OpFactor {
  std::variant<ExponentialWitness, PhiTable> phi;
  LatticePoint shift;
  unsigned power = 1;

  bool is_witness() const { return std::holds_alternative<ExponentialWitness>(phi); }
  /// phi(shift); throws missing_phi when a table lacks the entry.
  Scalar phi_at_shift() const;
};

/// Ordered product of factors; the empty product is the identity.
struct DiffProduct {
  std::vector<OpFactor> factors;
};

/// (tau_y - c tau_0)^power f for a fixed value c = phi(y). Only phi(y)
/// enters a single factor, so the result stays inside the ExpPoly class.
ExpPoly apply_difference(const ExpPoly& f, const Scalar& phi_at_y, const LatticePoint& y, unsigned power);

/// Delta_{w;y}^power f with phi = w an exponential.
ExpPoly apply_modified(const ExpPoly& f, const ExponentialWitness& w, const LatticePoint& y, unsigned power);

/// Composition of all factors, which must be witness-based
/// (invalid_argument otherwise).
ExpPoly apply_product(const ExpPoly& f, const DiffProduct& product);

/// Delta_{phi;y}^power on samples. The output box is the input box shrunk so
/// that every x + k y (0 <= k <= power) is sampled.
SampledFunction apply_sampled(const SampledFunction& s, const PhiTable& phi, const LatticePoint& y, unsigned power);
SampledFunction apply_sampled(const SampledFunction& s, const Scalar& phi_at_y, const LatticePoint& y,
                              unsigned power);
SampledFunction apply_sampled(const SampledFunction& s, const DiffProduct& product);

/// Checks
///   Delta_{phi;y1..yr} f(x) = phi(x + y1 + ... + yr) * Delta_{y1..yr}(f * phi_check)(x)
/// at every x in `box`, where phi_check(x) = phi(-x). The left side is
/// computed symbolically, the right side on samples of f * phi_check.
/// Exact inputs compare exactly; float ones within `rtol` relative to the
/// largest value of either side over the box.
bool difmod_identity_check(const ExpPoly& f, const ExponentialWitness& phi, const std::vector<LatticePoint>& shifts,
                           const Box& box, double rtol = 1e-10);

/// Sampled variant: both sides from samples. Every x in `box` must have all
/// x + partial shift sums inside the sample box (insufficient_box otherwise).
bool difmod_identity_check(const SampledFunction& s, const ExponentialWitness& phi,
                           const std::vector<LatticePoint>& shifts, const Box& box, double rtol = 1e-10);

}  // namespace expolat
