#include "expolat/recover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "expolat/error.hpp"

namespace expolat {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

void RecoveryConfig::validate() const {
  if (max_order < 1) throw Error(ErrorCode::invalid_argument, "max_order must be at least 1");
  if (!(rank_tol > 0) || !(cluster_tol > 0) || !(residual_tol > 0)) {
    throw Error(ErrorCode::invalid_argument, "tolerances must be positive");
  }
}

Complex Annihilator::operator()(Complex z) const {
  Complex acc(0.0);
  for (std::size_t k = coeffs.size(); k > 0; --k) acc = acc * z + coeffs[k - 1];
  return acc;
}

namespace {

using Poly = std::vector<Complex>;  // ascending coefficients

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, Complex(0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Poly poly_derivative(const Poly& p) {
  if (p.size() <= 1) return {Complex(0.0)};
  Poly out(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) out[k - 1] = p[k] * static_cast<double>(k);
  return out;
}

Complex poly_eval(const Poly& p, Complex z) {
  Complex acc(0.0);
  for (std::size_t k = p.size(); k > 0; --k) acc = acc * z + p[k - 1];
  return acc;
}

bool complex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

Complex ipow(Complex z, std::int64_t e) {
  if (e < 0) return ipow(Complex(1.0) / z, -e);
  Complex r(1.0);
  while (e > 0) {
    if (e & 1) r *= z;
    e >>= 1;
    if (e > 0) z *= z;
  }
  return r;
}

std::vector<Complex> complex_values(const SampledFunction& s) {
  std::vector<Complex> v;
  v.reserve(s.values().size());
  for (const auto& x : s.values()) v.push_back(x.to_complex());
  return v;
}

std::int64_t chain_length(const Box& box, const LatticePoint& h) {
  std::int64_t len = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (h[i] == 0) continue;
    len = std::min<std::int64_t>(len, (box.extent(i) - 1) / std::llabs(h[i]) + 1);
  }
  return len;
}

}  // namespace

Annihilator direction_annihilator(const SampledFunction& s, const LatticePoint& h, const RecoveryConfig& cfg) {
  cfg.validate();
  if (h.dim() != s.dim()) throw Error(ErrorCode::dimension_mismatch, "direction and sample dimensions differ");
  if (h.is_zero()) throw Error(ErrorCode::invalid_argument, "direction must be nonzero");
  if (chain_length(s.box(), h) < 2 * static_cast<std::int64_t>(cfg.max_order) + 1) {
    throw Error(ErrorCode::insufficient_box,
                "sample box needs at least " + std::to_string(2 * cfg.max_order + 1) + " points along the direction");
  }
  const std::vector<Complex> values = complex_values(s);
  const double scale = std::accumulate(values.begin(), values.end(), 0.0,
                                       [](double m, Complex z) { return std::max(m, std::abs(z)); });
  if (scale == 0.0) return Annihilator{};

  for (unsigned degree = 1; degree <= cfg.max_order; ++degree) {
    const Box starts = *s.box().shrink(h, degree);
    std::vector<CVector> rows;
    rows.reserve(starts.volume());
    for_each_point(starts, [&](const LatticePoint& x) {
      CVector row(degree + 1);
      LatticePoint p = x;
      double norm = 0.0;
      for (unsigned q = 0; q <= degree; ++q) {
        row(q) = values[s.box().index_of(p)];
        norm = std::max(norm, std::abs(row(q)));
        p += h;
      }
      if (norm > 0.0) rows.push_back(row / norm);
    });
    if (rows.size() < degree + 1) continue;
    CMatrix hankel(static_cast<Eigen::Index>(rows.size()), degree + 1);
    for (std::size_t r = 0; r < rows.size(); ++r) hankel.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
    Eigen::JacobiSVD<CMatrix> svd(hankel, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(degree) > cfg.rank_tol * sv(0)) continue;
    const CVector kernel = svd.matrixV().col(degree);
    if (std::abs(kernel(degree)) < 1e-8 * kernel.norm()) continue;
    Annihilator q;
    q.coeffs.resize(degree + 1);
    for (unsigned k = 0; k <= degree; ++k) q.coeffs[k] = kernel(k) / kernel(degree);
    q.coeffs[degree] = Complex(1.0);
    return q;
  }
  throw Error(ErrorCode::no_annihilator, "no annihilator of degree <= " + std::to_string(cfg.max_order));
}

Annihilator section_annihilator(const SampledFunction& s, std::size_t axis, const RecoveryConfig& cfg) {
  if (axis >= s.dim()) throw Error(ErrorCode::invalid_argument, "axis out of range");
  return direction_annihilator(s, LatticePoint::unit(s.dim(), axis), cfg);
}

std::vector<Root> annihilator_roots(const Annihilator& q, const RecoveryConfig& cfg) {
  const std::size_t n = q.degree();
  if (n == 0) return {};
  CMatrix companion = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 1; i < n; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < n; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -q.coeffs[i];
  Eigen::ComplexEigenSolver<CMatrix> eig(companion, false);
  std::vector<Complex> eigenvalues(eig.eigenvalues().data(), eig.eigenvalues().data() + n);
  std::sort(eigenvalues.begin(), eigenvalues.end(), complex_less);

  // Perturbing an m-fold root by eps moves the eigenvalues by about
  // eps^(1/m), so larger groups get a larger radius. Groups are searched
  // largest first; otherwise the pairs inside a split triple root are too
  // far apart for the two-point radius and the triple never forms. The cap
  // keeps high multiplicities from swallowing distinct roots.
  auto centre = [](const std::vector<Complex>& g) {
    return std::accumulate(g.begin(), g.end(), Complex(0.0)) / static_cast<double>(g.size());
  };
  auto radius = [&](std::size_t m, Complex c) {
    const double spread = std::min(1e-2, std::pow(cfg.rank_tol, 1.0 / static_cast<double>(m)));
    return std::max(cfg.cluster_tol, spread * std::max(1.0, std::abs(c)));
  };
  std::vector<std::vector<Complex>> groups;
  std::vector<bool> used(n, false);
  for (std::size_t m = n; m >= 2; --m) {
    bool found = true;
    while (found) {
      found = false;
      for (std::size_t p = 0; p < n && !found; ++p) {
        if (used[p]) continue;
        std::vector<std::size_t> near;
        for (std::size_t j = 0; j < n; ++j) {
          if (!used[j]) near.push_back(j);
        }
        if (near.size() < m) break;
        std::stable_sort(near.begin(), near.end(), [&](std::size_t a, std::size_t b) {
          return std::abs(eigenvalues[a] - eigenvalues[p]) < std::abs(eigenvalues[b] - eigenvalues[p]);
        });
        near.resize(m);
        std::vector<Complex> g;
        for (auto j : near) g.push_back(eigenvalues[j]);
        const Complex c = centre(g);
        const double rad = radius(m, c);
        if (std::all_of(g.begin(), g.end(), [&](Complex z) { return std::abs(z - c) <= rad; })) {
          for (auto j : near) used[j] = true;
          groups.push_back(std::move(g));
          found = true;
        }
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (!used[p]) groups.push_back({eigenvalues[p]});
  }

  std::vector<Root> roots;
  for (const auto& g : groups) {
    const auto m = static_cast<unsigned>(g.size());
    const Complex c = centre(g);
    // An m-fold root is a simple root of q^(m-1).
    Poly target = q.coeffs;
    for (unsigned k = 1; k < m; ++k) target = poly_derivative(target);
    const Poly slope = poly_derivative(target);
    Complex z = c;
    for (int it = 0; it < 30; ++it) {
      const Complex d = poly_eval(slope, z);
      if (d == Complex(0.0)) break;
      const Complex step = poly_eval(target, z) / d;
      z -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    if (!(std::abs(z - c) <= radius(m, c)) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) z = c;
    roots.push_back(Root{z, m});
  }
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return complex_less(a.value, b.value); });
  // Polished roots that still collide are one root.
  std::vector<Root> out;
  for (const auto& r : roots) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Root& o) { return std::abs(o.value - r.value) <= cfg.cluster_tol; });
    if (it == out.end()) {
      out.push_back(r);
    } else {
      const double total = it->multiplicity + r.multiplicity;
      it->value = (it->value * static_cast<double>(it->multiplicity) + r.value * static_cast<double>(r.multiplicity)) / total;
      it->multiplicity += r.multiplicity;
    }
  }
  return out;
}

std::vector<SampledFunction> split_spectrum(const SampledFunction& s, std::size_t axis, const std::vector<Root>& roots,
                                            const RecoveryConfig& cfg) {
  cfg.validate();
  if (axis >= s.dim()) throw Error(ErrorCode::invalid_argument, "axis out of range");
  if (roots.size() <= 1) return {s};
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (std::abs(roots[i].value - roots[j].value) <= cfg.cluster_tol) {
        throw Error(ErrorCode::invalid_argument, "roots are not cluster-separated");
      }
    }
  }
  std::size_t total = 0;
  for (const auto& r : roots) total += r.multiplicity;

  // Complementary factors Q_j = prod_{i != j} (z - r_i)^{m_i}.
  std::vector<Poly> complement(roots.size(), Poly{Complex(1.0)});
  for (std::size_t j = 0; j < roots.size(); ++j) {
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (i == j) continue;
      for (unsigned k = 0; k < roots[i].multiplicity; ++k) complement[j] = poly_mul(complement[j], {-roots[i].value, 1.0});
    }
  }
  // Solve sum_j u_j Q_j = 1 with deg u_j < m_j.
  const auto n = static_cast<Eigen::Index>(total);
  CMatrix system = CMatrix::Zero(n, n);
  Eigen::Index col = 0;
  for (std::size_t j = 0; j < roots.size(); ++j) {
    for (unsigned k = 0; k < roots[j].multiplicity; ++k, ++col) {
      for (std::size_t c = 0; c < complement[j].size(); ++c) system(static_cast<Eigen::Index>(c + k), col) = complement[j][c];
    }
  }
  Eigen::JacobiSVD<CMatrix> svd(system, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(n - 1) == 0.0 || sv(0) / sv(n - 1) > 1.0 / cfg.rank_tol) {
    throw Error(ErrorCode::ill_conditioned_projection, "partial-fraction system is ill-conditioned");
  }
  CVector rhs = CVector::Zero(n);
  rhs(0) = 1.0;
  const CVector u = svd.solve(rhs);

  const auto out_box = s.box().shrink(LatticePoint::unit(s.dim(), axis), static_cast<std::int64_t>(total) - 1);
  if (!out_box) throw Error(ErrorCode::insufficient_box, "box too short along the axis for spectral splitting");
  const std::vector<Complex> values = complex_values(s);
  const LatticePoint step = LatticePoint::unit(s.dim(), axis);

  std::vector<SampledFunction> components;
  col = 0;
  for (std::size_t j = 0; j < roots.size(); ++j) {
    Poly uj(roots[j].multiplicity);
    for (unsigned k = 0; k < roots[j].multiplicity; ++k, ++col) uj[k] = u(col);
    const Poly projector = poly_mul(uj, complement[j]);
    std::vector<Scalar> comp;
    comp.reserve(out_box->volume());
    for_each_point(*out_box, [&](const LatticePoint& x) {
      Complex acc(0.0);
      LatticePoint p = x;
      for (std::size_t k = 0; k < projector.size() && k < total; ++k) {
        acc += projector[k] * values[s.box().index_of(p)];
        p += step;
      }
      comp.emplace_back(acc);
    });
    components.emplace_back(*out_box, std::move(comp));
  }
  return components;
}

namespace {

struct Candidate {
  std::vector<Complex> lambda;
  std::vector<unsigned> multiplicity;  // per axis: polynomial degree bound + 1
};

void add_candidate(std::vector<Candidate>& out, Candidate c, double tol) {
  for (auto& o : out) {
    bool same = true;
    for (std::size_t i = 0; i < c.lambda.size() && same; ++i) same = std::abs(o.lambda[i] - c.lambda[i]) <= tol;
    if (same) {
      for (std::size_t i = 0; i < c.multiplicity.size(); ++i) o.multiplicity[i] = std::max(o.multiplicity[i], c.multiplicity[i]);
      return;
    }
  }
  out.push_back(std::move(c));
}

void cartesian(const std::vector<AxisSpectrum>& spectra, std::size_t axis, Candidate prefix, std::vector<Candidate>& out,
               double tol) {
  if (axis == spectra.size()) {
    add_candidate(out, std::move(prefix), tol);
    return;
  }
  for (const auto& r : spectra[axis].roots) {
    Candidate next = prefix;
    next.lambda.push_back(r.value);
    next.multiplicity.push_back(r.multiplicity);
    cartesian(spectra, axis + 1, std::move(next), out, tol);
  }
}

// Pairs roots across axes by splitting along one axis and re-analysing each
// component along the next. Sub-trees that fail fall back to the Cartesian
// product of the global per-axis roots.
void pair_by_projection(const SampledFunction& comp, std::size_t axis, const std::vector<Root>& roots,
                        const std::vector<AxisSpectrum>& global, Candidate prefix, std::vector<Candidate>& out,
                        const RecoveryConfig& cfg, bool& fell_back) {
  const std::size_t d = global.size();
  if (axis + 1 == d) {
    for (const auto& r : roots) {
      Candidate c = prefix;
      c.lambda.push_back(r.value);
      c.multiplicity.push_back(r.multiplicity);
      add_candidate(out, std::move(c), cfg.cluster_tol);
    }
    return;
  }
  std::vector<SampledFunction> parts;
  try {
    parts = split_spectrum(comp, axis, roots, cfg);
  } catch (const Error&) {
    fell_back = true;
    for (const auto& r : roots) {
      Candidate c = prefix;
      c.lambda.push_back(r.value);
      c.multiplicity.push_back(r.multiplicity);
      cartesian(global, axis + 1, std::move(c), out, cfg.cluster_tol);
    }
    return;
  }
  for (std::size_t j = 0; j < roots.size(); ++j) {
    Candidate c = prefix;
    c.lambda.push_back(roots[j].value);
    c.multiplicity.push_back(roots[j].multiplicity);
    try {
      const auto next_roots = annihilator_roots(section_annihilator(parts[j], axis + 1, cfg), cfg);
      pair_by_projection(parts[j], axis + 1, next_roots, global, std::move(c), out, cfg, fell_back);
    } catch (const Error&) {
      fell_back = true;
      cartesian(global, axis + 1, std::move(c), out, cfg.cluster_tol);
    }
  }
}

struct Column {
  std::size_t candidate;
  MultiIndex alpha;
};

struct Model {
  std::vector<Candidate> candidates;
  std::vector<Column> columns;
  std::vector<Complex> coeffs;
};

std::vector<Column> support_columns(const std::vector<Candidate>& cands) {
  std::vector<Column> cols;
  for (std::size_t c = 0; c < cands.size(); ++c) {
    const std::size_t d = cands[c].lambda.size();
    MultiIndex a(d);
    while (true) {
      cols.push_back({c, a});
      std::size_t axis = d;
      bool done = true;
      while (axis > 0) {
        --axis;
        if (a[axis] + 1 < cands[c].multiplicity[axis]) {
          ++a[axis];
          done = false;
          break;
        }
        a[axis] = 0;
      }
      if (done) break;
    }
  }
  return cols;
}

Complex basis_value(const Candidate& c, const MultiIndex& alpha, const LatticePoint& x) {
  Complex v(1.0);
  for (std::size_t i = 0; i < x.dim(); ++i) {
    v *= ipow(c.lambda[i], x[i]);
    for (std::uint32_t k = 0; k < alpha[i]; ++k) v *= static_cast<double>(x[i]);
  }
  return v;
}

CMatrix design_matrix(const Model& m, const std::vector<LatticePoint>& points) {
  CMatrix a(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(m.columns.size()));
  for (std::size_t r = 0; r < points.size(); ++r) {
    for (std::size_t c = 0; c < m.columns.size(); ++c) {
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          basis_value(m.candidates[m.columns[c].candidate], m.columns[c].alpha, points[r]);
    }
  }
  return a;
}

CVector weighted_solve(const CMatrix& a, const CVector& rhs, const Eigen::VectorXd& w) {
  CMatrix aw = w.asDiagonal() * a;
  Eigen::VectorXd colscale(aw.cols());
  for (Eigen::Index c = 0; c < aw.cols(); ++c) {
    colscale(c) = aw.col(c).norm();
    if (colscale(c) == 0.0) colscale(c) = 1.0;
    aw.col(c) /= colscale(c);
  }
  const CVector y = aw.colPivHouseholderQr().solve(CVector(w.asDiagonal() * rhs));
  return y.cwiseQuotient(colscale.cast<Complex>());
}

Eigen::VectorXd row_weights(const CMatrix& a) {
  Eigen::VectorXd w(a.rows());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    const double m = a.row(r).cwiseAbs().maxCoeff();
    w(r) = m > 0.0 ? 1.0 / m : 1.0;
  }
  return w;
}

void fit_coefficients(Model& m, const std::vector<LatticePoint>& points, const CVector& samples, double prune_tol) {
  for (int pass = 0; pass < 2; ++pass) {
    m.columns = pass == 0 ? support_columns(m.candidates) : m.columns;
    if (m.columns.empty()) {
      m.coeffs.clear();
      return;
    }
    const CMatrix a = design_matrix(m, points);
    const CVector x = weighted_solve(a, samples, row_weights(a));
    m.coeffs.assign(x.data(), x.data() + x.size());
    if (pass == 1) break;
    std::vector<Column> kept;
    for (std::size_t c = 0; c < m.columns.size(); ++c) {
      if (std::abs(m.coeffs[c]) >= prune_tol) kept.push_back(m.columns[c]);
    }
    if (kept.size() == m.columns.size()) break;
    m.columns = std::move(kept);
  }
  // Drop candidates without columns and renumber.
  std::vector<std::size_t> remap(m.candidates.size(), SIZE_MAX);
  std::vector<Candidate> used;
  for (auto& col : m.columns) {
    if (remap[col.candidate] == SIZE_MAX) {
      remap[col.candidate] = used.size();
      used.push_back(m.candidates[col.candidate]);
    }
    col.candidate = remap[col.candidate];
  }
  m.candidates = std::move(used);
}

CVector model_values(const Model& m, const std::vector<LatticePoint>& points) {
  if (m.columns.empty()) return CVector::Zero(static_cast<Eigen::Index>(points.size()));
  const CMatrix a = design_matrix(m, points);
  const CVector x = Eigen::Map<const CVector>(m.coeffs.data(), static_cast<Eigen::Index>(m.coeffs.size()));
  return a * x;
}

// Gauss-Newton on witnesses and coefficients jointly. The model is
// holomorphic in its parameters, so complex Jacobians apply directly.
void polish(Model& m, const std::vector<LatticePoint>& points, const CVector& samples, const Eigen::VectorXd& w) {
  if (m.columns.empty()) return;
  const std::size_t d = points.front().dim();
  const auto ncoef = static_cast<Eigen::Index>(m.columns.size());
  const auto nparam = ncoef + static_cast<Eigen::Index>(m.candidates.size() * d);
  auto cost = [&](const Model& mm) { return (w.asDiagonal() * (samples - model_values(mm, points))).norm(); };
  double current = cost(m);
  for (int iter = 0; iter < 12; ++iter) {
    const CMatrix a = design_matrix(m, points);
    CMatrix jac(a.rows(), nparam);
    jac.leftCols(ncoef) = a;
    jac.rightCols(nparam - ncoef).setZero();
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      const LatticePoint& x = points[static_cast<std::size_t>(r)];
      for (std::size_t c = 0; c < m.columns.size(); ++c) {
        const auto& col = m.columns[c];
        const Complex term = m.coeffs[c] * a(r, static_cast<Eigen::Index>(c));
        for (std::size_t i = 0; i < d; ++i) {
          const Eigen::Index p = ncoef + static_cast<Eigen::Index>(col.candidate * d + i);
          jac(r, p) += term * static_cast<double>(x[i]) / m.candidates[col.candidate].lambda[i];
        }
      }
    }
    const CVector resid = samples - a * Eigen::Map<const CVector>(m.coeffs.data(), ncoef);
    const CVector step = weighted_solve(jac, resid, w);
    double damping = 1.0;
    bool improved = false;
    for (int tries = 0; tries < 6 && !improved; ++tries, damping *= 0.5) {
      Model trial = m;
      for (Eigen::Index k = 0; k < ncoef; ++k) trial.coeffs[static_cast<std::size_t>(k)] += damping * step(k);
      for (std::size_t c = 0; c < m.candidates.size(); ++c) {
        for (std::size_t i = 0; i < d; ++i) {
          trial.candidates[c].lambda[i] += damping * step(ncoef + static_cast<Eigen::Index>(c * d + i));
        }
      }
      const double trial_cost = cost(trial);
      if (std::isfinite(trial_cost) && trial_cost < current) {
        const double gain = current - trial_cost;
        m = std::move(trial);
        improved = true;
        if (gain <= 1e-3 * current) iter = 100;
        current = trial_cost;
      }
    }
    if (!improved) break;
  }
}

ExpPoly to_exppoly(const Model& m, std::size_t dim) {
  std::vector<ExpTerm> terms;
  for (const auto& cand : m.candidates) {
    std::vector<Scalar> lam;
    for (const auto& z : cand.lambda) lam.emplace_back(z);
    terms.push_back(ExpTerm{ExponentialWitness(std::move(lam)), {}});
  }
  for (std::size_t c = 0; c < m.columns.size(); ++c) {
    terms[m.columns[c].candidate].coeffs.emplace(m.columns[c].alpha, Scalar(m.coeffs[c]));
  }
  return ExpPoly(dim, std::move(terms)).normalized();
}

std::optional<mpq_class> snap_rational(double x, double tol) {
  for (long den = 1; den <= 64; ++den) {
    const double num = std::round(x * static_cast<double>(den));
    if (std::abs(x - num / static_cast<double>(den)) <= tol) {
      mpq_class q(mpz_class(static_cast<long>(num)), mpz_class(den));
      q.canonicalize();
      return q;
    }
  }
  return std::nullopt;
}

// Snaps witnesses, solves for exact coefficients from exact samples and
// checks every sample. Returns nullopt with a flag on failure.
std::optional<ExpPoly> lift_exact(const Model& m, const SampledFunction& s, std::vector<std::string>& flags) {
  const std::size_t d = s.dim();
  std::vector<ExponentialWitness> witnesses;
  for (const auto& cand : m.candidates) {
    std::vector<Scalar> lam;
    for (const auto& z : cand.lambda) {
      auto re = snap_rational(z.real(), 1e-9);
      auto im = snap_rational(z.imag(), 1e-9);
      if (!re || !im) {
        flags.emplace_back("exact-lift-failed");
        return std::nullopt;
      }
      lam.push_back(Scalar::exact(*re, *im));
    }
    witnesses.emplace_back(std::move(lam));
  }
  // Dense elimination on [A | b] over Q(i).
  const std::size_t ncol = m.columns.size();
  std::vector<std::vector<GaussianRational>> pivots;  // rows with leading one
  std::vector<std::size_t> pivot_cols;
  bool consistent = true;
  for_each_point(s.box(), [&](const LatticePoint& x) {
    if (!consistent) return;
    std::vector<GaussianRational> row(ncol + 1);
    for (std::size_t c = 0; c < ncol; ++c) {
      const Scalar v = witnesses[m.columns[c].candidate].at(x) * monomial_value(m.columns[c].alpha, x);
      row[c] = v.as_exact();
    }
    row[ncol] = s.at(x).as_exact();
    for (std::size_t p = 0; p < pivots.size(); ++p) {
      const GaussianRational f = row[pivot_cols[p]];
      if (f.is_zero()) continue;
      for (std::size_t c = 0; c <= ncol; ++c) row[c] -= f * pivots[p][c];
    }
    std::size_t lead = 0;
    while (lead < ncol && row[lead].is_zero()) ++lead;
    if (lead == ncol) {
      if (!row[ncol].is_zero()) consistent = false;
      return;
    }
    const GaussianRational inv = GaussianRational(1) / row[lead];
    for (auto& e : row) e *= inv;
    for (std::size_t p = 0; p < pivots.size(); ++p) {
      const GaussianRational f = pivots[p][lead];
      if (f.is_zero()) continue;
      for (std::size_t c = 0; c <= ncol; ++c) pivots[p][c] -= f * row[c];
    }
    pivots.push_back(std::move(row));
    pivot_cols.push_back(lead);
  });
  if (!consistent || pivots.size() != ncol) {
    flags.emplace_back("exact-lift-mismatch");
    return std::nullopt;
  }
  std::vector<ExpTerm> terms;
  for (const auto& w : witnesses) terms.push_back(ExpTerm{w, {}});
  for (std::size_t p = 0; p < pivots.size(); ++p) {
    const auto& col = m.columns[pivot_cols[p]];
    terms[col.candidate].coeffs.emplace(col.alpha, Scalar(pivots[p][ncol]));
  }
  ExpPoly lifted = ExpPoly(d, std::move(terms)).normalized();
  bool ok = true;
  for_each_point(s.box(), [&](const LatticePoint& x) {
    if (ok && !exactly_equal(lifted.eval(x), s.at(x))) ok = false;
  });
  if (!ok) {
    flags.emplace_back("exact-lift-mismatch");
    return std::nullopt;
  }
  flags.emplace_back("exact-lift-verified");
  return lifted;
}

struct FitResult {
  Model model;
  double residual = std::numeric_limits<double>::infinity();
  double abs_residual = std::numeric_limits<double>::infinity();
};

FitResult fit(std::vector<Candidate> candidates, const std::vector<LatticePoint>& points, const CVector& samples,
              double scale, const RecoveryConfig& cfg) {
  FitResult r;
  r.model.candidates = std::move(candidates);
  fit_coefficients(r.model, points, samples, cfg.residual_tol);
  if (!r.model.columns.empty()) {
    polish(r.model, points, samples, row_weights(design_matrix(r.model, points)));
  }
  const CVector diff = samples - model_values(r.model, points);
  r.abs_residual = diff.size() == 0 ? 0.0 : diff.cwiseAbs().maxCoeff();
  r.residual = r.abs_residual / std::max(1.0, scale);
  return r;
}

}  // namespace

Decomposition recover(const SampledFunction& s, const RecoveryConfig& cfg) {
  cfg.validate();
  Decomposition out;
  const std::size_t d = s.dim();
  out.result = ExpPoly(d);
  const double scale = s.max_abs();
  if (scale == 0.0) {
    out.success = true;
    if (cfg.exact_lift) out.exact_result = ExpPoly(d);
    return out;
  }

  std::vector<LatticePoint> points;
  points.reserve(s.values().size());
  for_each_point(s.box(), [&](const LatticePoint& x) { points.push_back(x); });
  CVector samples(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) samples(static_cast<Eigen::Index>(i)) = s.values()[i].to_complex();

  for (std::size_t axis = 0; axis < d; ++axis) {
    out.spectra.push_back(AxisSpectrum{axis, annihilator_roots(section_annihilator(s, axis, cfg), cfg)});
  }
  std::vector<Candidate> paired;
  bool fell_back = false;
  pair_by_projection(s, 0, out.spectra[0].roots, out.spectra, Candidate{}, paired, cfg, fell_back);
  if (fell_back) out.flags.emplace_back("projection-fallback");
  FitResult best = fit(paired, points, samples, scale, cfg);

  if (best.residual > cfg.residual_tol && d > 1) {
    std::vector<Candidate> all;
    cartesian(out.spectra, 0, Candidate{}, all, cfg.cluster_tol);
    FitResult alt = fit(std::move(all), points, samples, scale, cfg);
    if (alt.residual < best.residual) {
      best = std::move(alt);
      out.flags.emplace_back("cartesian-pairing");
    }
  }

  out.result = to_exppoly(best.model, d);
  out.residual = best.residual;
  out.abs_residual = best.abs_residual;
  out.success = best.residual <= cfg.residual_tol;
  if (!out.success) out.flags.emplace_back("residual-exceeded");

  if (cfg.exact_lift) {
    const bool exact_samples =
        std::all_of(s.values().begin(), s.values().end(), [](const Scalar& v) { return v.is_exact(); });
    if (exact_samples) {
      out.exact_result = lift_exact(best.model, s, out.flags);
    } else {
      out.flags.emplace_back("exact-lift-skipped");
    }
  }
  return out;
}

}  // namespace expolat
