#include "expolat/diffops.hpp"

#include <algorithm>
#include <cmath>

#include "expolat/error.hpp"

namespace expolat {

SampledFunction::SampledFunction(Box box, std::vector<Scalar> values) : box_(std::move(box)), values_(std::move(values)) {
  if (box_.empty()) throw Error(ErrorCode::insufficient_box, "sample box is empty");
  if (values_.size() != box_.volume()) {
    throw Error(ErrorCode::invalid_argument, "sample count " + std::to_string(values_.size()) +
                                                 " differs from box volume " + std::to_string(box_.volume()));
  }
}

SampledFunction SampledFunction::sample(const ExpPoly& f, const Box& box) {
  if (f.dim() != box.dim()) throw Error(ErrorCode::dimension_mismatch, "function and box dimensions differ");
  std::vector<Scalar> values;
  values.reserve(box.volume());
  for_each_point(box, [&](const LatticePoint& p) { values.push_back(f.eval(p)); });
  return {box, std::move(values)};
}

double SampledFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, v.abs());
  return m;
}

SampledFunction SampledFunction::to_float() const {
  std::vector<Scalar> v;
  v.reserve(values_.size());
  for (const auto& x : values_) v.push_back(x.to_float());
  return {box_, std::move(v)};
}

SampledFunction SampledFunction::restrict_to(const Box& sub) const {
  if (!box_.contains(sub)) throw Error(ErrorCode::insufficient_box, "restriction box is not inside the sample box");
  std::vector<Scalar> v;
  v.reserve(sub.volume());
  for_each_point(sub, [&](const LatticePoint& p) { v.push_back(at(p)); });
  return {sub, std::move(v)};
}

Scalar OpFactor::phi_at_shift() const {
  if (const auto* w = std::get_if<ExponentialWitness>(&phi)) return w->at(shift);
  const auto& table = std::get<PhiTable>(phi);
  auto it = table.find(shift);
  if (it == table.end()) throw Error(ErrorCode::missing_phi, "phi value missing for a shift");
  return it->second;
}

ExpPoly apply_difference(const ExpPoly& f, const Scalar& phi_at_y, const LatticePoint& y, unsigned power) {
  if (y.dim() != f.dim()) throw Error(ErrorCode::dimension_mismatch, "shift and function dimensions differ");
  ExpPoly g = f.normalized();
  for (unsigned k = 0; k < power && !g.is_zero(); ++k) {
    g = linear_combine({{Scalar(1), g.translate(y)}, {-phi_at_y, g}});
  }
  return g;
}

ExpPoly apply_modified(const ExpPoly& f, const ExponentialWitness& w, const LatticePoint& y, unsigned power) {
  if (w.dim() != f.dim()) throw Error(ErrorCode::dimension_mismatch, "witness and function dimensions differ");
  return apply_difference(f, w.at(y), y, power);
}

ExpPoly apply_product(const ExpPoly& f, const DiffProduct& product) {
  ExpPoly g = f.normalized();
  for (const auto& factor : product.factors) {
    if (!factor.is_witness()) {
      throw Error(ErrorCode::invalid_argument, "symbolic application needs exponential-witness factors");
    }
    g = apply_modified(g, std::get<ExponentialWitness>(factor.phi), factor.shift, factor.power);
  }
  return g;
}

SampledFunction apply_sampled(const SampledFunction& s, const Scalar& phi_at_y, const LatticePoint& y,
                              unsigned power) {
  if (y.dim() != s.dim()) throw Error(ErrorCode::dimension_mismatch, "shift and sample dimensions differ");
  if (!s.box().shrink(y, power)) {
    throw Error(ErrorCode::insufficient_box, "box too small for " + std::to_string(power) + " applications");
  }
  SampledFunction cur = s;
  for (unsigned k = 0; k < power; ++k) {
    const Box out = *cur.box().shrink(y, 1);
    std::vector<Scalar> values;
    values.reserve(out.volume());
    for_each_point(out, [&](const LatticePoint& x) { values.push_back(cur.at(x + y) - phi_at_y * cur.at(x)); });
    cur = SampledFunction(out, std::move(values));
  }
  return cur;
}

SampledFunction apply_sampled(const SampledFunction& s, const PhiTable& phi, const LatticePoint& y, unsigned power) {
  auto it = phi.find(y);
  if (it == phi.end()) throw Error(ErrorCode::missing_phi, "phi value missing for the shift");
  return apply_sampled(s, it->second, y, power);
}

SampledFunction apply_sampled(const SampledFunction& s, const DiffProduct& product) {
  SampledFunction cur = s;
  for (const auto& factor : product.factors) cur = apply_sampled(cur, factor.phi_at_shift(), factor.shift, factor.power);
  return cur;
}

namespace {

LatticePoint total_shift(std::size_t dim, const std::vector<LatticePoint>& shifts) {
  LatticePoint sum(dim);
  for (const auto& y : shifts) sum += y;
  return sum;
}

// Right-hand side phi(x + sum y) * Delta_{y1..yr}(g)(x) from samples of g.
SampledFunction plain_difference_rhs(const SampledFunction& g, const ExponentialWitness& phi,
                                     const std::vector<LatticePoint>& shifts) {
  SampledFunction diff = g;
  for (const auto& y : shifts) diff = apply_sampled(diff, Scalar(1), y, 1);
  const LatticePoint sum = total_shift(g.dim(), shifts);
  std::vector<Scalar> values;
  values.reserve(diff.values().size());
  for_each_point(diff.box(), [&](const LatticePoint& x) { values.push_back(phi.at(x + sum) * diff.at(x)); });
  return {diff.box(), std::move(values)};
}

bool sides_agree(const Box& box, const std::vector<Scalar>& lhs, const SampledFunction& rhs, double rtol) {
  bool all_exact = true;
  double scale = 0.0;
  double worst = 0.0;
  std::size_t i = 0;
  bool exact_ok = true;
  for_each_point(box, [&](const LatticePoint& x) {
    const Scalar& l = lhs[i++];
    const Scalar& r = rhs.at(x);
    if (l.is_exact() && r.is_exact()) {
      if (!(l.as_exact() == r.as_exact())) exact_ok = false;
    } else {
      all_exact = false;
    }
    scale = std::max({scale, l.abs(), r.abs()});
    worst = std::max(worst, std::abs(l.to_complex() - r.to_complex()));
  });
  if (all_exact) return exact_ok;
  return exact_ok && worst <= rtol * scale;
}

void require_box_dim(const Box& box, std::size_t dim, const std::vector<LatticePoint>& shifts) {
  if (box.dim() != dim) throw Error(ErrorCode::dimension_mismatch, "box dimension differs");
  if (box.empty()) throw Error(ErrorCode::insufficient_box, "check box is empty");
  for (const auto& y : shifts) {
    if (y.dim() != dim) throw Error(ErrorCode::dimension_mismatch, "shift dimension differs");
  }
}

}  // namespace

bool difmod_identity_check(const ExpPoly& f, const ExponentialWitness& phi, const std::vector<LatticePoint>& shifts,
                           const Box& box, double rtol) {
  require_box_dim(box, f.dim(), shifts);
  ExpPoly lhs_poly = f.normalized();
  for (const auto& y : shifts) lhs_poly = apply_modified(lhs_poly, phi, y, 1);
  std::vector<Scalar> lhs;
  lhs.reserve(box.volume());
  for_each_point(box, [&](const LatticePoint& x) { lhs.push_back(lhs_poly.eval(x)); });

  Box wide = box;
  for (const auto& y : shifts) wide = wide.grow(y, 1);
  const ExpPoly g = f.times_exponential(phi.inverse());
  const SampledFunction rhs = plain_difference_rhs(SampledFunction::sample(g, wide), phi, shifts);
  return sides_agree(box, lhs, rhs, rtol);
}

bool difmod_identity_check(const SampledFunction& s, const ExponentialWitness& phi,
                           const std::vector<LatticePoint>& shifts, const Box& box, double rtol) {
  require_box_dim(box, s.dim(), shifts);
  SampledFunction lhs_samples = s;
  for (const auto& y : shifts) lhs_samples = apply_sampled(lhs_samples, phi.at(y), y, 1);
  if (!lhs_samples.box().contains(box)) {
    throw Error(ErrorCode::insufficient_box, "samples do not cover the check box after shifting");
  }
  std::vector<Scalar> lhs;
  lhs.reserve(box.volume());
  for_each_point(box, [&](const LatticePoint& x) { lhs.push_back(lhs_samples.at(x)); });

  std::vector<Scalar> twisted;
  twisted.reserve(s.values().size());
  for_each_point(s.box(), [&](const LatticePoint& x) { twisted.push_back(s.at(x) * phi.at(-x)); });
  const SampledFunction rhs = plain_difference_rhs(SampledFunction(s.box(), std::move(twisted)), phi, shifts);
  return sides_agree(box, lhs, rhs, rtol);
}

}  // namespace expolat
