#include "expolat/montel.hpp"

#include <algorithm>
#include <functional>

#include "expolat/error.hpp"
#include "expolat/smith.hpp"

namespace expolat {

namespace {

void check_lengths(std::size_t dim, const std::vector<LatticePoint>& shifts, std::size_t orders,
                   std::size_t phis) {
  if (orders != shifts.size() || phis != shifts.size()) {
    throw Error(ErrorCode::invalid_argument, "shifts, orders and phi values must have equal lengths");
  }
  for (const auto& h : shifts) {
    if (h.dim() != dim) throw Error(ErrorCode::dimension_mismatch, "shift dimension differs");
  }
}

bool symbolic_zero(const ExpPoly& g) { return g.normalized({1e-12, 1e-10}).is_zero(); }

// A nonzero exponential polynomial with N = sum (deg_i + 1) basis functions
// cannot vanish on [0, N-1]^d, so a nonzero point exists in that cube.
LatticePoint nonzero_point(const ExpPoly& g) {
  std::int64_t n = 0;
  for (const auto& t : g.terms()) n += static_cast<std::int64_t>(t.degree()) + 1;
  const Box cube = Box::cube(g.dim(), 0, std::max<std::int64_t>(n - 1, 0));
  LatticePoint best = cube.lo();
  double best_abs = -1.0;
  bool found_exact = false;
  for_each_point(cube, [&](const LatticePoint& x) {
    if (found_exact) return;
    const Scalar v = g.eval(x);
    if (v.is_exact()) {
      if (!v.exactly_zero()) {
        best = x;
        found_exact = true;
      }
    } else if (v.abs() > best_abs) {
      best = x;
      best_abs = v.abs();
    }
  });
  return best;
}

double zero_threshold(const SampledFunction& input, const MontelConfig& cfg) {
  return cfg.atol + cfg.rtol * input.max_abs();
}

// Largest-modulus point of the output, or nullopt when below threshold.
std::optional<LatticePoint> sampled_violation(const SampledFunction& out, double threshold) {
  double worst = -1.0;
  LatticePoint at;
  for_each_point(out.box(), [&](const LatticePoint& x) {
    const double a = out.at(x).abs();
    if (a > worst) {
      worst = a;
      at = x;
    }
  });
  if (worst <= threshold) return std::nullopt;
  return at;
}

void for_each_choice(std::size_t slots, std::size_t t, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(slots, 0);
  if (t == 0 && slots > 0) return;
  while (true) {
    fn(idx);
    std::size_t k = slots;
    bool done = true;
    while (k > 0) {
      --k;
      if (idx[k] + 1 < t) {
        ++idx[k];
        done = false;
        break;
      }
      idx[k] = 0;
    }
    if (done) return;
  }
}

Scalar table_value(const PhiTable& table, const LatticePoint& y) {
  auto it = table.find(y);
  if (it == table.end()) throw Error(ErrorCode::missing_phi, "phi value missing for a shift");
  return it->second;
}

// Applies the factors listed in `factors` with the chosen shift indices.
template <class Fn>
auto apply_choice(const SystemCertificate& sys, const std::vector<std::size_t>& factors,
                  const std::vector<std::size_t>& choice, Fn&& apply_one) {
  return [&, factors, choice](auto g) {
    for (std::size_t j = 0; j < factors.size(); ++j) {
      const std::size_t k = factors[j];
      const LatticePoint& h = sys.shifts[choice[j]];
      g = apply_one(g, table_value(sys.functions[k], h), h, sys.orders[k][choice[j]]);
    }
    return g;
  };
}

void check_system(const SystemCertificate& sys, std::size_t dim) {
  if (sys.orders.size() != sys.functions.size()) {
    throw Error(ErrorCode::invalid_argument, "one order row per factor required");
  }
  for (const auto& row : sys.orders) {
    if (row.size() != sys.shifts.size()) throw Error(ErrorCode::invalid_argument, "one order per shift required");
  }
  for (const auto& h : sys.shifts) {
    if (h.dim() != dim) throw Error(ErrorCode::dimension_mismatch, "shift dimension differs");
  }
}

template <class F, class Apply, class IsZero>
void fill_verdicts(const F& f, SystemCertificate& sys, Apply&& apply_one, IsZero&& is_zero) {
  sys.verdicts.clear();
  std::vector<std::size_t> all(sys.factor_count());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  for_each_choice(all.size(), sys.shifts.size(), [&](const std::vector<std::size_t>& choice) {
    sys.verdicts.emplace_back(choice, is_zero(apply_choice(sys, all, choice, apply_one)(f)));
  });
}

template <class F, class Apply, class IsZero>
MinimalityReport minimality(const F& f, const SystemCertificate& given, Apply&& apply_one, IsZero&& is_zero) {
  SystemCertificate sys = given;
  fill_verdicts(f, sys, apply_one, is_zero);
  MinimalityReport report;
  report.equation_holds =
      std::all_of(sys.verdicts.begin(), sys.verdicts.end(), [](const auto& v) { return v.second; });
  const std::size_t r = sys.factor_count();
  report.non_redundant.assign(r, false);
  for (std::size_t k = 0; k < r; ++k) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < r; ++j) {
      if (j != k) others.push_back(j);
    }
    for_each_choice(others.size(), sys.shifts.size(), [&](const std::vector<std::size_t>& choice) {
      if (report.non_redundant[k]) return;
      if (!is_zero(apply_choice(sys, others, choice, apply_one)(f))) report.non_redundant[k] = true;
    });
  }
  report.minimal = report.equation_holds && r > 0 &&
                   std::all_of(report.non_redundant.begin(), report.non_redundant.end(), [](bool b) { return b; });
  return report;
}

}  // namespace

MontelCertificate verify_annihilation(const ExpPoly& f, const std::vector<LatticePoint>& shifts,
                                      const std::vector<unsigned>& orders, const std::vector<Scalar>& phi_values) {
  check_lengths(f.dim(), shifts, orders.size(), phi_values.size());
  MontelCertificate cert{shifts, orders, phi_values, Verdict::annihilated, std::nullopt,
                         generates_lattice(shifts, f.dim())};
  for (std::size_t k = 0; k < shifts.size(); ++k) {
    const ExpPoly g = apply_difference(f, phi_values[k], shifts[k], orders[k]);
    if (symbolic_zero(g)) continue;
    const LatticePoint p = nonzero_point(g);
    cert.verdict = Verdict::violated;
    cert.violation = Violation{p, k, g.eval(p)};
    break;
  }
  return cert;
}

MontelCertificate verify_annihilation(const SampledFunction& s, const std::vector<LatticePoint>& shifts,
                                      const std::vector<unsigned>& orders, const std::vector<Scalar>& phi_values,
                                      const MontelConfig& cfg) {
  check_lengths(s.dim(), shifts, orders.size(), phi_values.size());
  MontelCertificate cert{shifts, orders, phi_values, Verdict::annihilated, std::nullopt,
                         generates_lattice(shifts, s.dim())};
  const double threshold = zero_threshold(s, cfg);
  for (std::size_t k = 0; k < shifts.size(); ++k) {
    const SampledFunction out = apply_sampled(s, phi_values[k], shifts[k], orders[k]);
    if (auto p = sampled_violation(out, threshold)) {
      cert.verdict = Verdict::violated;
      cert.violation = Violation{*p, k, out.at(*p)};
      break;
    }
  }
  return cert;
}

std::vector<std::optional<unsigned>> minimal_orders(const ExpPoly& f, const std::vector<LatticePoint>& shifts,
                                                    const std::vector<Scalar>& phi_values, unsigned max_power) {
  if (max_power < 1) throw Error(ErrorCode::invalid_argument, "max_power must be at least 1");
  check_lengths(f.dim(), shifts, shifts.size(), phi_values.size());
  std::vector<std::optional<unsigned>> out;
  for (std::size_t k = 0; k < shifts.size(); ++k) {
    std::optional<unsigned> found;
    ExpPoly g = f.normalized();
    for (unsigned p = 1; p <= max_power && !found; ++p) {
      g = apply_difference(g, phi_values[k], shifts[k], 1);
      if (symbolic_zero(g)) found = p;
    }
    out.push_back(found);
  }
  return out;
}

std::vector<std::optional<unsigned>> minimal_orders(const SampledFunction& s, const std::vector<LatticePoint>& shifts,
                                                    const std::vector<Scalar>& phi_values, unsigned max_power,
                                                    const MontelConfig& cfg) {
  if (max_power < 1) throw Error(ErrorCode::invalid_argument, "max_power must be at least 1");
  check_lengths(s.dim(), shifts, shifts.size(), phi_values.size());
  const double threshold = zero_threshold(s, cfg);
  std::vector<std::optional<unsigned>> out;
  for (std::size_t k = 0; k < shifts.size(); ++k) {
    std::optional<unsigned> found;
    SampledFunction g = s;
    for (unsigned p = 1; p <= max_power && !found; ++p) {
      g = apply_sampled(g, phi_values[k], shifts[k], 1);
      if (!sampled_violation(g, threshold)) found = p;
    }
    out.push_back(found);
  }
  return out;
}

WitnessCandidates certify_witness(const SampledFunction& s, const std::vector<LatticePoint>& shifts, unsigned max_power,
                                  const MontelConfig& cfg) {
  if (max_power < 1) throw Error(ErrorCode::invalid_argument, "max_power must be at least 1");
  WitnessCandidates out;
  RecoveryConfig rc;
  rc.max_order = max_power;
  rc.rank_tol = cfg.rank_tol;
  rc.cluster_tol = cfg.cluster_tol;
  for (const auto& h : shifts) {
    Annihilator q;
    try {
      q = direction_annihilator(s, h, rc);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::no_annihilator) {
        throw Error(ErrorCode::no_candidate, "annihilator along a shift needs degree > " + std::to_string(max_power));
      }
      throw;
    }
    if (q.degree() == 0) {
      out.all = true;
      out.per_shift.clear();
      return out;
    }
    out.per_shift.push_back(annihilator_roots(q, rc));
  }
  std::vector<std::size_t> idx(shifts.size(), 0);
  if (shifts.empty()) return out;
  while (true) {
    std::vector<Scalar> values;
    std::vector<unsigned> orders;
    for (std::size_t k = 0; k < shifts.size(); ++k) {
      values.emplace_back(out.per_shift[k][idx[k]].value);
      orders.push_back(out.per_shift[k][idx[k]].multiplicity);
    }
    if (verify_annihilation(s, shifts, orders, values, cfg).verdict == Verdict::annihilated) {
      out.assignments.push_back(std::move(values));
    }
    std::size_t k = shifts.size();
    bool done = true;
    while (k > 0) {
      --k;
      if (idx[k] + 1 < out.per_shift[k].size()) {
        ++idx[k];
        done = false;
        break;
      }
      idx[k] = 0;
    }
    if (done) break;
  }
  return out;
}

namespace {

auto symbolic_step = [](const ExpPoly& g, const Scalar& c, const LatticePoint& h, unsigned p) {
  return apply_difference(g, c, h, p);
};

auto sampled_step = [](const SampledFunction& g, const Scalar& c, const LatticePoint& h, unsigned p) {
  return apply_sampled(g, c, h, p);
};

}  // namespace

void compute_system_verdicts(const ExpPoly& f, SystemCertificate& system) {
  check_system(system, f.dim());
  fill_verdicts(f, system, symbolic_step, symbolic_zero);
}

void compute_system_verdicts(const SampledFunction& s, SystemCertificate& system, const MontelConfig& cfg) {
  check_system(system, s.dim());
  const double threshold = zero_threshold(s, cfg);
  fill_verdicts(s, system, sampled_step,
                [&](const SampledFunction& g) { return !sampled_violation(g, threshold).has_value(); });
}

MinimalityReport check_minimal_set(const ExpPoly& f, const SystemCertificate& system) {
  check_system(system, f.dim());
  return minimality(f, system, symbolic_step, symbolic_zero);
}

MinimalityReport check_minimal_set(const SampledFunction& s, const SystemCertificate& system, const MontelConfig& cfg) {
  check_system(system, s.dim());
  const double threshold = zero_threshold(s, cfg);
  return minimality(s, system, sampled_step,
                    [&](const SampledFunction& g) { return !sampled_violation(g, threshold).has_value(); });
}

}  // namespace expolat
