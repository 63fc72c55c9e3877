#include "expolat/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "expolat/diffops.hpp"
#include "expolat/error.hpp"
#include "expolat/montel.hpp"
#include "expolat/oracle.hpp"
#include "expolat/recover.hpp"
#include "expolat/smith.hpp"
#include "expolat/subspace.hpp"

namespace expolat::acceptance {

namespace {

using oracle::InstanceProfile;
using oracle::Rng;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

CriterionResult finish(int id, std::string name, bool ok, std::string detail, const Stopwatch& sw, double budget) {
  CriterionResult r{id, std::move(name), false, std::move(detail), sw.seconds(), budget};
  r.passed = ok && r.seconds < budget;
  if (ok && !r.passed) r.detail += "; over time budget";
  return r;
}

LatticePoint random_shift(Rng& rng, std::size_t d, std::int64_t reach) {
  LatticePoint h(d);
  while (h.is_zero()) {
    for (std::size_t i = 0; i < d; ++i) h[i] = rng.uniform_int(-reach, reach);
  }
  return h;
}

std::vector<LatticePoint> unit_shifts(std::size_t d) {
  std::vector<LatticePoint> out;
  for (std::size_t i = 0; i < d; ++i) out.push_back(LatticePoint::unit(d, i));
  return out;
}

ExponentialWitness random_exact_witness(Rng& rng, std::size_t d) {
  std::vector<Scalar> lam;
  for (std::size_t i = 0; i < d; ++i) lam.push_back(oracle::random_exact(rng, 3, 2, rng.uniform_int(0, 1) == 1, true));
  return ExponentialWitness(std::move(lam));
}

// Smallest subspace containing `seed` and closed under every operator, by
// repeated application until no new direction appears.
SpanSpace fixpoint_closure(const SpanSpace& seed, const std::vector<OpFactor>& ops) {
  SpanSpace w = seed;
  std::size_t done = 0;
  while (done < w.dimension()) {
    const ExpPoly b = w.basis()[done++];
    for (const auto& op : ops) {
      const auto& lam = std::get<ExponentialWitness>(op.phi);
      w.add(apply_difference(b, lam.at(op.shift), op.shift, op.power));
    }
  }
  return w;
}

bool operator_keeps(const SpanSpace& v, const OpFactor& op) {
  const auto& lam = std::get<ExponentialWitness>(op.phi);
  return std::all_of(v.basis().begin(), v.basis().end(), [&](const ExpPoly& b) {
    return v.contains(apply_difference(b, lam.at(op.shift), op.shift, op.power));
  });
}

std::string ratio(std::size_t ok, std::size_t total) { return std::to_string(ok) + "/" + std::to_string(total); }

}  // namespace

CriterionResult symbolic_annihilation() {
  Stopwatch sw;
  std::size_t ok = 0;
  std::size_t total = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    InstanceProfile p;
    p.dim = 1 + seed % 3;
    p.max_terms = 3;
    p.max_degree = 3;
    p.exact = true;
    const ExpPoly f = oracle::random_instance(seed, p).f;
    Rng rng(seed ^ 0x5bd1e995ULL);
    for (int k = 0; k < 5; ++k) {
      const LatticePoint h = random_shift(rng, p.dim, 2);
      DiffProduct prod;
      for (const auto& t : f.terms()) {
        prod.factors.push_back(OpFactor{t.witness, h, static_cast<unsigned>(t.degree() + 1)});
      }
      ++total;
      if (apply_product(f, prod).is_zero()) ++ok;
    }
  }
  return finish(1, "symbolic annihilation", ok == total, ratio(ok, total) + " products annihilate exactly", sw, 5.0);
}

CriterionResult difmod_identity() {
  Stopwatch sw;
  std::size_t exact_ok = 0;
  std::size_t float_ok = 0;
  const std::size_t count = 100;
  for (std::uint64_t seed = 0; seed < count; ++seed) {
    Rng rng(seed + 1000);
    InstanceProfile p;
    p.dim = 1 + seed % 2;
    p.max_degree = 2;
    const std::size_t r = static_cast<std::size_t>(rng.uniform_int(1, 3));
    std::vector<LatticePoint> shifts;
    for (std::size_t k = 0; k < r; ++k) shifts.push_back(random_shift(rng, p.dim, 2));
    const Box box = Box::cube(p.dim, -2, 2);

    const ExpPoly fe = oracle::random_instance(seed, p).f;
    if (difmod_identity_check(fe, random_exact_witness(rng, p.dim), shifts, box)) ++exact_ok;

    p.exact = false;
    p.min_modulus = 0.5;
    p.max_modulus = 2.0;
    const ExpPoly ff = oracle::random_instance(seed, p).f;
    std::vector<Scalar> lam;
    for (std::size_t i = 0; i < p.dim; ++i) {
      const double m = rng.uniform_real(0.5, 2.0);
      const double t = rng.uniform_real(-3.14159, 3.14159);
      lam.push_back(Scalar::floating(m * std::cos(t), m * std::sin(t)));
    }
    if (difmod_identity_check(ff, ExponentialWitness(std::move(lam)), shifts, box, 1e-10)) ++float_ok;
  }
  return finish(2, "difmod identity", exact_ok == count && float_ok == count,
                "exact " + ratio(exact_ok, count) + ", float " + ratio(float_ok, count) + " within 1e-10 relative", sw,
                2.0);
}

CriterionResult upper_triangular() {
  Stopwatch sw;
  std::size_t ok = 0;
  std::size_t total = 0;
  std::size_t nilpotent_ok = 0;
  std::size_t nilpotent_total = 0;
  Rng rng(2024);
  for (std::size_t d = 1; d <= 2; ++d) {
    for (std::uint32_t k = 0; k <= 3; ++k) {
      const ExponentialWitness w = random_exact_witness(rng, d);
      const LatticePoint h = random_shift(rng, d, 2);
      const GradedLexBasis basis(w, k);
      const Scalar eh = w.at(h);
      std::vector<Scalar> phis;
      for (int i = 0; i < 10; ++i) phis.push_back(oracle::random_exact(rng, 4, 3, true, false));
      phis.push_back(eh);
      for (const auto& phi : phis) {
        const OperatorMatrix m = operator_matrix(basis, phi, h);
        bool good = m.size() == basis.monomials.size();
        const Scalar diag = eh - phi;
        for (std::size_t i = 0; i < m.size() && good; ++i) {
          for (std::size_t j = 0; j < m.size(); ++j) {
            if (i > j && !m.entries[i][j].exactly_zero()) good = false;
            if (i == j && !exactly_equal(m.entries[i][j], diag)) good = false;
          }
        }
        ++total;
        if (good) ++ok;
        if (exactly_equal(phi, eh)) {
          ++nilpotent_total;
          if (m.power(k + 1).is_zero()) ++nilpotent_ok;
        }
      }
    }
  }
  return finish(3, "upper-triangular operator matrices", ok == total && nilpotent_ok == nilpotent_total,
                ratio(ok, total) + " triangular with exact diagonal, " + ratio(nilpotent_ok, nilpotent_total) +
                    " nilpotent at phi(h) = e(h)",
                sw, 2.0);
}

CriterionResult invariant_extension() {
  Stopwatch sw;
  std::size_t ext_ok = 0;
  const std::size_t ext_total = 50;
  for (std::uint64_t seed = 0; seed < ext_total; ++seed) {
    Rng rng(seed + 7000);
    InstanceProfile p;
    p.dim = 1 + seed % 2;
    p.max_terms = 2;
    p.max_degree = 2;
    const ExpPoly f = oracle::random_instance(seed, p).f;
    // L uses a witness of f half of the time so that L is not invertible on V.
    const ExponentialWitness w = (seed % 2 == 0 && !f.is_zero()) ? f.terms().front().witness
                                                                : random_exact_witness(rng, p.dim);
    const OpFactor l{w, random_shift(rng, p.dim, 1), 1};
    const unsigned n = static_cast<unsigned>(rng.uniform_int(1, 3));
    OpFactor ln = l;
    ln.power = n;
    // V = closure of span{f} under L^n, so the precondition holds by construction.
    const SpanSpace v = fixpoint_closure(SpanSpace::span(p.dim, {f}), {ln});
    const ExtendResult ext = extend_once(v, l, n);
    const SpanSpace expect = fixpoint_closure(v, {l});
    if (ext.precondition_met && ext.invariant && ext.space.dimension() == expect.dimension() && ext.space == expect) {
      ++ext_ok;
    }
  }

  std::size_t chain_ok = 0;
  const std::size_t chain_total = 20;
  for (std::uint64_t seed = 0; seed < chain_total; ++seed) {
    Rng rng(seed + 9000);
    InstanceProfile p;
    p.dim = 1 + seed % 2;
    p.max_terms = 2;
    p.max_degree = 2;
    const ExpPoly f = oracle::random_instance(seed + 500, p).f;
    const std::size_t t = static_cast<std::size_t>(rng.uniform_int(1, 3));
    std::vector<OpFactor> ops;
    std::vector<OpFactor> powered;
    std::vector<unsigned> powers;
    for (std::size_t i = 0; i < t; ++i) {
      const bool reuse = i < f.terms().size() && rng.uniform_int(0, 1) == 1;
      const ExponentialWitness w = reuse ? f.terms()[i].witness : random_exact_witness(rng, p.dim);
      ops.push_back(OpFactor{w, random_shift(rng, p.dim, 1), 1});
      powers.push_back(static_cast<unsigned>(rng.uniform_int(1, 3)));
      powered.push_back(ops.back());
      powered.back().power = powers.back();
    }
    // Invariant under every L_i^{s_i}; commuting operators keep that through the chain.
    const SpanSpace v = fixpoint_closure(SpanSpace::span(p.dim, {f}), powered);
    const ChainResult base = closure_chain(v, ops, powers);
    bool good = base.space.contains(v) && !base.precondition_unmet && base.invariant_under_all;
    for (const auto& op : ops) good = good && operator_keeps(base.space, op);
    good = good && base.space == fixpoint_closure(v, ops);
    std::vector<std::size_t> perm(t);
    std::iota(perm.begin(), perm.end(), 0);
    while (good && std::next_permutation(perm.begin(), perm.end())) {
      std::vector<OpFactor> pops;
      std::vector<unsigned> ppow;
      for (auto i : perm) {
        pops.push_back(ops[i]);
        ppow.push_back(powers[i]);
      }
      const ChainResult other = closure_chain(v, pops, ppow);
      good = other.space == base.space && other.space.canonical_basis().size() == base.space.canonical_basis().size();
    }
    if (good) ++chain_ok;
  }
  return finish(4, "invariant extension and closure chain", ext_ok == ext_total && chain_ok == chain_total,
                "extend_once " + ratio(ext_ok, ext_total) + " equal to fixpoint closure, closure_chain " +
                    ratio(chain_ok, chain_total) + " contain V, invariant, order-independent",
                sw, 10.0);
}

CriterionResult frechet_equivalence() {
  Stopwatch sw;
  std::vector<oracle::FiniteGroupSpec> groups;
  for (std::int64_t m = 1; m <= 64; ++m) groups.push_back({{m}});
  for (std::int64_t a = 2; a <= 8; ++a) {
    for (std::int64_t b = a; a * b <= 64; ++b) groups.push_back({{a, b}});
  }
  std::size_t ok = 0;
  std::size_t total = 0;
  std::string first_failure;
  for (const auto& g : groups) {
    for (unsigned n = 0; n <= 2; ++n) {
      ++total;
      const auto r = oracle::frechet_nullspaces(g, n);
      const bool exact_agrees = g.order() > oracle::FrechetOptions{}.exact_limit || r.exact_checked;
      if (r.equal && exact_agrees) {
        ++ok;
      } else if (first_failure.empty()) {
        std::ostringstream os;
        os << "; first failure: moduli";
        for (auto m : g.moduli) os << ' ' << m;
        os << ", n=" << n;
        first_failure = os.str();
      }
    }
  }
  return finish(5, "Frechet equation equivalence", ok == total,
                ratio(ok, total) + " (group, n) pairs equal" + first_failure, sw, 30.0);
}

CriterionResult montel_round_trip() {
  Stopwatch sw;
  std::size_t ok = 0;
  std::size_t interp_ok = 0;
  const std::size_t total = 100;
  double worst_value = 0.0;
  double worst_witness = 0.0;
  for (std::uint64_t seed = 0; seed < total; ++seed) {
    InstanceProfile p;
    p.dim = 1 + seed % 2;
    p.max_terms = 3;
    p.max_degree = 2;
    p.exact = false;
    p.min_modulus = 0.8;
    p.max_modulus = 1.25;
    p.separation = 0.1;
    p.box_side = 20;
    const auto inst = oracle::random_instance(seed, p);
    RecoveryConfig cfg;
    cfg.max_order = 9;
    try {
      const Decomposition dec = recover(*inst.samples, cfg);
      double value_err = 0.0;
      for_each_point(inst.samples->box(), [&](const LatticePoint& x) {
        value_err = std::max(value_err, std::abs(dec.result.eval(x).to_complex() - inst.f.eval(x).to_complex()));
      });
      // Witnesses must match one-to-one.
      bool witnesses = dec.result.terms().size() == inst.f.terms().size();
      double witness_err = 0.0;
      for (const auto& t : inst.f.terms()) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& u : dec.result.terms()) {
          double dist = 0.0;
          for (std::size_t i = 0; i < p.dim; ++i) {
            dist = std::max(dist, std::abs(t.witness[i].to_complex() - u.witness[i].to_complex()));
          }
          best = std::min(best, dist);
        }
        witness_err = std::max(witness_err, best);
      }
      witnesses = witnesses && witness_err <= 1e-6;
      worst_value = std::max(worst_value, value_err);
      worst_witness = std::max(worst_witness, witness_err);

      // Recovered e_k(g_i) against the per-shift candidates along generating shifts.
      const auto shifts = unit_shifts(p.dim);
      MontelConfig mcfg;
      mcfg.cluster_tol = cfg.cluster_tol;
      const WitnessCandidates cand = certify_witness(*inst.samples, shifts, cfg.max_order, mcfg);
      bool interp = !cand.all;
      for (std::size_t i = 0; i < shifts.size() && interp; ++i) {
        auto close = [](Complex a, Complex b) { return std::abs(a - b) <= 1e-6; };
        for (const auto& u : dec.result.terms()) {
          const Complex v = u.witness.at(shifts[i]).to_complex();
          interp = interp && std::any_of(cand.per_shift[i].begin(), cand.per_shift[i].end(),
                                         [&](const Root& r) { return close(r.value, v); });
        }
        for (const auto& r : cand.per_shift[i]) {
          interp = interp && std::any_of(dec.result.terms().begin(), dec.result.terms().end(), [&](const ExpTerm& u) {
                     return close(r.value, u.witness.at(shifts[i]).to_complex());
                   });
        }
      }
      if (interp) ++interp_ok;
      if (dec.success && value_err <= 1e-8 && witnesses && interp) ++ok;
    } catch (const Error&) {
    }
  }
  std::ostringstream os;
  os << ok << "/" << total << " recovered (need 95), interpolation " << interp_ok << "/" << total
     << ", worst value error " << worst_value << ", worst witness error " << worst_witness;
  return finish(6, "Montel round trip", ok >= 95, os.str(), sw, 60.0);
}

CriterionResult subgroup_orders() {
  Stopwatch sw;
  bool good = true;
  std::ostringstream os;
  std::vector<Scalar> phis;
  const std::vector<LatticePoint> shifts{LatticePoint{1}};
  for (std::uint32_t i = 1; i <= 4; ++i) {
    const Scalar base = Scalar(std::int64_t{1} << i);
    const ExpPoly f = ExpPoly::monomial(ExponentialWitness({base}), MultiIndex{i}, Scalar(1));
    const auto sym = minimal_orders(f, shifts, {base}, 8);
    const auto smp = minimal_orders(SampledFunction::sample(f, Box::cube(1, 0, 15)), shifts, {base}, 8);
    // The restriction's data from the previous subgroup no longer works.
    const auto wrong = minimal_orders(f, shifts, {Scalar(std::int64_t{1} << (i - 1))}, 8);
    const bool row = sym[0] == i + 1 && smp[0] == i + 1 && (i == 1 || !wrong[0]);
    good = good && row;
    phis.push_back(base);
    os << (i > 1 ? ", " : "") << "i=" << i << ": order " << (sym[0] ? std::to_string(*sym[0]) : "none")
       << " at phi(1)=" << base.to_string();
  }
  return finish(7, "per-subgroup minimal orders", good, os.str(), sw, 1.0);
}

CriterionResult negative_control() {
  Stopwatch sw;
  const std::size_t total = 50;
  std::size_t ok = 0;
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < total; ++seed) {
    InstanceProfile p;
    p.dim = 1 + seed % 2;
    p.min_terms = 2;
    p.max_terms = 2;
    p.max_degree = 1;
    p.exact = true;
    p.box_side = 10;
    const auto inst = oracle::random_instance(seed, p);
    std::vector<LatticePoint> shifts = unit_shifts(p.dim);
    if (p.dim == 2 && seed % 4 == 1) shifts.push_back(LatticePoint{1, 1});
    bool good = inst.f.terms().size() == 2 && generates_lattice(shifts, p.dim);
    try {
      const WitnessCandidates cand = certify_witness(*inst.samples, shifts, 4);
      good = good && !cand.all && cand.assignments.empty();
      // Every single-phi assignment built from the per-shift candidates.
      std::vector<std::size_t> idx(shifts.size(), 0);
      while (good) {
        std::vector<Scalar> phi;
        for (std::size_t k = 0; k < shifts.size(); ++k) phi.push_back(Scalar(cand.per_shift[k][idx[k]].value));
        const auto cert = verify_annihilation(*inst.samples, shifts, std::vector<unsigned>(shifts.size(), 4), phi);
        ++checked;
        good = cert.verdict == Verdict::violated;
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == cand.per_shift[k].size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    } catch (const Error&) {
      good = false;
    }
    if (good) ++ok;
  }
  return finish(8, "negative control", ok == total,
                ratio(ok, total) + " two-witness instances reject all " + std::to_string(checked) + " candidates", sw,
                10.0);
}

std::vector<CriterionResult> run_all(const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (auto* fn : {symbolic_annihilation, difmod_identity, upper_triangular, invariant_extension, frechet_equivalence,
                   montel_round_trip, subgroup_orders, negative_control}) {
    out.push_back(fn());
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format(const CriterionResult& r) {
  std::ostringstream os;
  os.precision(3);
  os << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " (" << r.seconds << " s / "
     << r.budget_seconds << " s): " << r.detail;
  return os.str();
}

}  // namespace expolat::acceptance
