#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "expolat/diffops.hpp"
#include "expolat/exppoly.hpp"
#include "expolat/recover.hpp"

namespace expolat {

/// Zero test for sampled operator outputs:
///   max |value| <= atol + rtol * max |input sample|.
struct MontelConfig {
  double atol = 1e-10;
  double rtol = 1e-9;
  /// Root clustering radius for certify_witness.
  double cluster_tol = 1e-6;
  /// Kernel threshold for the per-shift annihilator.
  double rank_tol = 1e-9;
};

enum class Verdict { annihilated, violated };

struct Violation {
  LatticePoint point;
  std::size_t shift_index = 0;
  Scalar value;
};

/// Outcome of checking Delta_{phi;h_k}^{orders_k} f = 0 for every k.
struct MontelCertificate {
  std::vector<LatticePoint> shifts;
  std::vector<unsigned> orders;
  std::vector<Scalar> phi_values;
  Verdict verdict = Verdict::annihilated;
  std::optional<Violation> violation;
  /// Shifts generate Z^d (Smith normal form). When false the claim only
  /// concerns the generated subgroup.
  bool generates_lattice = false;

  bool subgroup_only() const { return !generates_lattice; }
};

MontelCertificate verify_annihilation(const ExpPoly& f, const std::vector<LatticePoint>& shifts,
                                      const std::vector<unsigned>& orders, const std::vector<Scalar>& phi_values);
MontelCertificate verify_annihilation(const SampledFunction& s, const std::vector<LatticePoint>& shifts,
                                      const std::vector<unsigned>& orders, const std::vector<Scalar>& phi_values,
                                      const MontelConfig& cfg = {});

/// Least p <= max_power with Delta_{phi;h_k}^p f = 0, per shift.
std::vector<std::optional<unsigned>> minimal_orders(const ExpPoly& f, const std::vector<LatticePoint>& shifts,
                                                    const std::vector<Scalar>& phi_values, unsigned max_power);
std::vector<std::optional<unsigned>> minimal_orders(const SampledFunction& s, const std::vector<LatticePoint>& shifts,
                                                    const std::vector<Scalar>& phi_values, unsigned max_power,
                                                    const MontelConfig& cfg = {});

struct WitnessCandidates {
  /// Samples are identically zero: every value annihilates.
  bool all = false;
  /// Roots of the per-shift annihilator, i.e. the only values c for which a
  /// power of Delta_{c;h_k} can kill a component.
  std::vector<std::vector<Root>> per_shift;
  /// Cross-shift assignments phi(h_1..h_t) accepted by verify_annihilation
  /// with orders equal to the root multiplicities.
  std::vector<std::vector<Scalar>> assignments;
};

/// Throws no_candidate when a per-shift annihilator needs degree > max_power.
WitnessCandidates certify_witness(const SampledFunction& s, const std::vector<LatticePoint>& shifts, unsigned max_power,
                                  const MontelConfig& cfg = {});

/// Data of a product equation
///   Delta_{phi_1;g_{i_1}}^{n_{1,i_1}} ... Delta_{phi_r;g_{i_r}}^{n_{r,i_r}} f = 0
/// for every choice of indices (powers stored explicitly).
struct SystemCertificate {
  std::vector<LatticePoint> shifts;             // g_1..g_t
  std::vector<PhiTable> functions;              // phi_1..phi_r
  std::vector<std::vector<unsigned>> orders;    // r x t powers
  /// One entry per index choice (i_1..i_r), filled by compute_system_verdicts.
  std::vector<std::pair<std::vector<std::size_t>, bool>> verdicts;

  std::size_t factor_count() const { return functions.size(); }
};

/// Fills `verdicts` (true = annihilated) for every index choice.
void compute_system_verdicts(const ExpPoly& f, SystemCertificate& system);
void compute_system_verdicts(const SampledFunction& s, SystemCertificate& system, const MontelConfig& cfg = {});

struct MinimalityReport {
  /// Factor k is non-redundant: some product omitting it is nonzero.
  std::vector<bool> non_redundant;
  /// Every instance of the equation holds.
  bool equation_holds = false;
  bool minimal = false;
};

MinimalityReport check_minimal_set(const ExpPoly& f, const SystemCertificate& system);
MinimalityReport check_minimal_set(const SampledFunction& s, const SystemCertificate& system,
                                   const MontelConfig& cfg = {});

}  // namespace expolat
