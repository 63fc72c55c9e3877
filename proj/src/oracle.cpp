#include "expolat/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "expolat/error.hpp"

namespace expolat::oracle {

void FiniteGroupSpec::validate(std::size_t bound) const {
  if (moduli.empty()) throw Error(ErrorCode::invalid_argument, "group needs at least one modulus");
  std::size_t size = 1;
  for (auto m : moduli) {
    if (m < 1) throw Error(ErrorCode::invalid_argument, "moduli must be positive");
    size *= static_cast<std::size_t>(m);
    if (size > bound) throw Error(ErrorCode::size_bound_exceeded, "group order exceeds " + std::to_string(bound));
  }
}

std::size_t FiniteGroupSpec::order() const {
  std::size_t size = 1;
  for (auto m : moduli) size *= static_cast<std::size_t>(m);
  return size;
}

LatticePoint FiniteGroupSpec::reduce(const LatticePoint& x) const {
  LatticePoint r(rank());
  for (std::size_t i = 0; i < rank(); ++i) r[i] = ((x[i] % moduli[i]) + moduli[i]) % moduli[i];
  return r;
}

std::size_t FiniteGroupSpec::index_of(const LatticePoint& x) const {
  const LatticePoint r = reduce(x);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < rank(); ++i) idx = idx * static_cast<std::size_t>(moduli[i]) + static_cast<std::size_t>(r[i]);
  return idx;
}

LatticePoint FiniteGroupSpec::element(std::size_t index) const {
  LatticePoint x(rank());
  for (std::size_t i = rank(); i > 0; --i) {
    const auto m = static_cast<std::size_t>(moduli[i - 1]);
    x[i - 1] = static_cast<std::int64_t>(index % m);
    index /= m;
  }
  return x;
}

namespace {

Scalar factor_phi(const OpFactor& f) {
  if (const auto* table = std::get_if<PhiTable>(&f.phi)) {
    auto it = table->find(f.shift);
    if (it == table->end()) throw Error(ErrorCode::missing_phi, "phi value missing for a shift");
    return it->second;
  }
  return std::get<ExponentialWitness>(f.phi).at(f.shift);
}

// rec(i, p, x): factors i.. applied with p applications of factor i left.
Scalar literal(const std::vector<OpFactor>& factors, const std::vector<Scalar>& phis, std::size_t i, unsigned p,
               const LatticePoint& x, const std::function<Scalar(const LatticePoint&)>& base) {
  if (i == factors.size()) return base(x);
  if (p == 0) {
    const unsigned next = i + 1 < factors.size() ? factors[i + 1].power : 0;
    return literal(factors, phis, i + 1, next, x, base);
  }
  return literal(factors, phis, i, p - 1, x + factors[i].shift, base) -
         phis[i] * literal(factors, phis, i, p - 1, x, base);
}

}  // namespace

SampledFunction brute_apply(const SampledFunction& s, const DiffProduct& product) {
  const std::size_t d = s.dim();
  LatticePoint lo = s.box().lo();
  LatticePoint hi = s.box().hi();
  std::vector<Scalar> phis;
  for (const auto& f : product.factors) {
    if (f.shift.dim() != d) throw Error(ErrorCode::dimension_mismatch, "shift dimension differs");
    for (std::size_t i = 0; i < d; ++i) {
      const std::int64_t reach = static_cast<std::int64_t>(f.power) * f.shift[i];
      lo[i] += std::max<std::int64_t>(0, -reach);
      hi[i] -= std::max<std::int64_t>(0, reach);
      if (hi[i] < lo[i]) throw Error(ErrorCode::insufficient_box, "box too small for the product");
    }
    phis.push_back(factor_phi(f));
  }
  const Box out(lo, hi);
  const unsigned first = product.factors.empty() ? 0 : product.factors.front().power;
  auto base = [&](const LatticePoint& x) { return s.at(x); };
  std::vector<Scalar> values;
  for_each_point(out, [&](const LatticePoint& x) {
    values.push_back(literal(product.factors, phis, 0, first, x, base));
  });
  return {out, std::move(values)};
}

std::vector<Scalar> brute_apply(const FiniteGroupSpec& group, const std::vector<Scalar>& table,
                                const DiffProduct& product) {
  group.validate();
  if (table.size() != group.order()) throw Error(ErrorCode::invalid_argument, "table size differs from |G|");
  std::vector<Scalar> phis;
  for (const auto& f : product.factors) {
    if (f.shift.dim() != group.rank()) throw Error(ErrorCode::dimension_mismatch, "shift dimension differs");
    phis.push_back(factor_phi(f));
  }
  const unsigned first = product.factors.empty() ? 0 : product.factors.front().power;
  auto base = [&](const LatticePoint& x) { return table[group.index_of(x)]; };
  std::vector<Scalar> out;
  out.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    out.push_back(literal(product.factors, phis, 0, first, group.element(i), base));
  }
  return out;
}

namespace {

// Row-space accumulator in floating point: Gram-Schmidt with one
// re-orthogonalisation pass selects a spanning subset of rows; the final rank
// comes from an SVD of that subset.
class FloatRowSpace {
 public:
  FloatRowSpace(std::size_t width, double tol) : width_(width), tol_(tol) {}

  void add(const Eigen::VectorXd& row) {
    const double norm = row.norm();
    if (norm == 0.0) return;
    Eigen::VectorXd r = row;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : ortho_) r -= q.dot(r) * q;
    }
    if (r.norm() <= 1e-8 * norm) return;
    ortho_.push_back(r / r.norm());
    kept_.push_back(row);
  }

  std::size_t selected() const { return kept_.size(); }

  std::size_t rank() const {
    if (kept_.empty()) return 0;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(kept_.size()), static_cast<Eigen::Index>(width_));
    for (std::size_t i = 0; i < kept_.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = kept_[i].transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > tol_ * sv(0)) ++r;
    }
    return r;
  }

 private:
  std::size_t width_;
  double tol_;
  std::vector<Eigen::VectorXd> ortho_;
  std::vector<Eigen::VectorXd> kept_;
};

// Exact reduced echelon form over Q for integer rows.
class ExactIntRowSpace {
 public:
  explicit ExactIntRowSpace(std::size_t width) : width_(width) {}

  void add(const std::vector<long>& row) {
    std::vector<mpq_class> r(width_);
    for (std::size_t i = 0; i < width_; ++i) r[i] = row[i];
    for (std::size_t p = 0; p < rows_.size(); ++p) {
      const mpq_class f = r[pivots_[p]];
      if (f == 0) continue;
      for (std::size_t i = 0; i < width_; ++i) r[i] -= f * rows_[p][i];
    }
    std::size_t lead = 0;
    while (lead < width_ && r[lead] == 0) ++lead;
    if (lead == width_) return;
    const mpq_class inv = 1 / r[lead];
    for (auto& v : r) v *= inv;
    for (auto& other : rows_) {
      const mpq_class f = other[lead];
      if (f == 0) continue;
      for (std::size_t i = 0; i < width_; ++i) other[i] -= f * r[i];
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(lead);
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  std::size_t width_;
  std::vector<std::vector<mpq_class>> rows_;
  std::vector<std::size_t> pivots_;
};

struct RankTracker {
  RankTracker(std::size_t width, double tol, bool exact)
      : float_space(width, tol), exact_space(exact ? std::optional<ExactIntRowSpace>(width) : std::nullopt) {}

  void add(const std::vector<long>& row, std::size_t bound) {
    if (float_space.selected() < bound) {
      Eigen::VectorXd v(static_cast<Eigen::Index>(row.size()));
      for (std::size_t i = 0; i < row.size(); ++i) v(static_cast<Eigen::Index>(i)) = static_cast<double>(row[i]);
      float_space.add(v);
    }
    if (exact_space && exact_space->rank() < bound) exact_space->add(row);
  }

  bool saturated(std::size_t bound) const {
    return float_space.selected() >= bound && (!exact_space || exact_space->rank() >= bound);
  }

  FloatRowSpace float_space;
  std::optional<ExactIntRowSpace> exact_space;
};

}  // namespace

FrechetResult frechet_nullspaces(const FiniteGroupSpec& group, unsigned n, const FrechetOptions& opts) {
  group.validate(opts.size_bound);
  if (n > 3) throw Error(ErrorCode::invalid_argument, "n must be at most 3");
  const std::size_t order = group.order();
  const std::size_t k = n + 1;
  const bool exact = order <= opts.exact_limit;
  // Every row has coefficient sum zero, so constants lie in both kernels and
  // no rank exceeds |G| - 1; accumulation stops once that is reached.
  const std::size_t bound = order - 1;

  RankTracker a(order, opts.rank_tol, exact);
  RankTracker b(order, opts.rank_tol, exact);
  RankTracker ab(order, opts.rank_tol, exact);

  std::vector<long> row(order);
  auto check_row = [&]() {
    long sum = 0;
    for (auto v : row) sum += v;
    if (sum != 0) throw Error(ErrorCode::invalid_argument, "internal: difference row with nonzero sum");
  };

  // Delta_y^{n+1}: coefficients (-1)^{n+1-j} C(n+1, j) at x + j y.
  std::vector<long> binom(k + 1, 1);
  for (std::size_t j = 1; j <= k; ++j) binom[j] = binom[j - 1] * static_cast<long>(k - j + 1) / static_cast<long>(j);
  for (std::size_t yi = 0; yi < order && !(b.saturated(bound) && ab.saturated(bound)); ++yi) {
    const LatticePoint y = group.element(yi);
    for (std::size_t xi = 0; xi < order; ++xi) {
      std::fill(row.begin(), row.end(), 0);
      const LatticePoint x = group.element(xi);
      for (std::size_t j = 0; j <= k; ++j) {
        const long sign = ((k - j) % 2 == 0) ? 1 : -1;
        row[group.index_of(x + static_cast<std::int64_t>(j) * y)] += sign * binom[j];
      }
      check_row();
      b.add(row, bound);
      ab.add(row, bound);
    }
  }

  // Delta_{y_1} ... Delta_{y_{n+1}}: sum over subsets S of (-1)^{k-|S|} at x + sum_S y.
  FrechetResult result;
  std::uint64_t tuples = 1;
  bool full = true;
  for (std::size_t i = 0; i < k; ++i) {
    if (tuples > opts.full_enumeration_limit / order + 1) full = false;
    tuples *= order;
  }
  full = full && tuples <= opts.full_enumeration_limit;
  result.sampled = !full;
  const std::uint64_t count = full ? tuples : opts.full_enumeration_limit;
  Rng rng(opts.seed);
  std::vector<std::size_t> tuple(k, 0);
  // Full enumeration visits tuple indices in the order t -> stride * t mod N
  // (a bijection, stride coprime to N). Plain mixed-radix order would vary
  // only the last coordinate for a long time and delay rank saturation.
  std::uint64_t stride = 1;
  if (full) {
    stride = static_cast<std::uint64_t>(static_cast<double>(tuples) * 0.6180339887) + 1;
    while (std::gcd(stride, tuples) != 1) ++stride;
  }
  for (std::uint64_t t = 0; t < count && !(a.saturated(bound) && ab.saturated(bound)); ++t) {
    if (full) {
      std::uint64_t rest = static_cast<std::uint64_t>((static_cast<unsigned __int128>(t) * stride) % tuples);
      for (std::size_t i = k; i > 0; --i) {
        tuple[i - 1] = static_cast<std::size_t>(rest % order);
        rest /= order;
      }
    } else {
      for (auto& e : tuple) e = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(order) - 1));
    }
    std::vector<LatticePoint> ys;
    for (auto e : tuple) ys.push_back(group.element(e));
    if (std::any_of(ys.begin(), ys.end(), [](const LatticePoint& y) { return y.is_zero(); })) continue;
    for (std::size_t xi = 0; xi < order; ++xi) {
      std::fill(row.begin(), row.end(), 0);
      const LatticePoint x = group.element(xi);
      for (std::uint32_t mask = 0; mask < (1U << k); ++mask) {
        LatticePoint p = x;
        for (std::size_t i = 0; i < k; ++i) {
          if (mask & (1U << i)) p += ys[i];
        }
        const long sign = ((k - static_cast<std::size_t>(std::popcount(mask))) % 2 == 0) ? 1 : -1;
        row[group.index_of(p)] += sign;
      }
      check_row();
      a.add(row, bound);
      ab.add(row, bound);
    }
  }

  std::size_t rank_a = a.float_space.rank();
  std::size_t rank_b = b.float_space.rank();
  std::size_t rank_ab = ab.float_space.rank();
  if (exact) {
    const std::size_t ea = a.exact_space->rank();
    const std::size_t eb = b.exact_space->rank();
    const std::size_t eab = ab.exact_space->rank();
    result.exact_checked = ea == rank_a && eb == rank_b && eab == rank_ab;
    rank_a = ea;
    rank_b = eb;
    rank_ab = eab;
  }
  result.dim1 = order - rank_a;
  result.dim2 = order - rank_b;
  result.equal = rank_a == rank_ab && rank_b == rank_ab;
  return result;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(engine_() % span);
}

double Rng::uniform_real(double lo, double hi) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Scalar random_exact(Rng& rng, std::int64_t num, std::int64_t den, bool complex, bool nonzero) {
  while (true) {
    const mpq_class re(mpz_class(static_cast<long>(rng.uniform_int(-num, num))),
                       mpz_class(static_cast<long>(rng.uniform_int(1, den))));
    mpq_class im = 0;
    if (complex) {
      im = mpq_class(mpz_class(static_cast<long>(rng.uniform_int(-num, num))),
                     mpz_class(static_cast<long>(rng.uniform_int(1, den))));
    }
    Scalar s = Scalar::exact(re, im);
    if (!nonzero || !s.exactly_zero()) return s;
  }
}

namespace {

double max_norm_distance(const ExponentialWitness& a, const ExponentialWitness& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i].to_complex() - b[i].to_complex()));
  return m;
}

CoeffMap random_coefficients(Rng& rng, std::size_t dim, std::uint32_t degree, bool exact) {
  auto draw = [&]() -> Scalar {
    if (exact) return random_exact(rng, 4, 3, rng.uniform_int(0, 1) == 1, true);
    const double r = rng.uniform_real(0.5, 2.0);
    const double t = rng.uniform_real(0.0, 2.0 * std::numbers::pi);
    return Scalar::floating(r * std::cos(t), r * std::sin(t));
  };
  CoeffMap c;
  const auto monomials = graded_lex_monomials(dim, degree);
  // One monomial of top degree is always present.
  std::vector<MultiIndex> top;
  for (const auto& a : monomials) {
    if (a.total_degree() == degree) top.push_back(a);
  }
  c.emplace(top[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(top.size()) - 1))], draw());
  for (const auto& a : monomials) {
    if (c.count(a) == 0 && rng.uniform_int(0, 1) == 1) c.emplace(a, draw());
  }
  return c;
}

}  // namespace

RandomInstance random_instance(std::uint64_t seed, const InstanceProfile& profile) {
  if (profile.dim < 1 || profile.min_terms > profile.max_terms) {
    throw Error(ErrorCode::invalid_argument, "inconsistent instance profile");
  }
  Rng rng(seed);
  const auto terms = static_cast<std::size_t>(
      rng.uniform_int(static_cast<std::int64_t>(profile.min_terms), static_cast<std::int64_t>(profile.max_terms)));

  // Per-axis value pools keep distinct witness components separated.
  std::vector<std::vector<Scalar>> pools(profile.dim);
  for (auto& pool : pools) {
    while (pool.size() < terms) {
      Scalar v;
      if (profile.exact) {
        v = random_exact(rng, 5, 3, rng.uniform_int(0, 2) == 0, true);
      } else {
        const double r = rng.uniform_real(profile.min_modulus, profile.max_modulus);
        if (profile.real_witnesses) {
          v = Scalar::floating(rng.uniform_int(0, 3) == 0 ? -r : r, 0.0);
        } else {
          const double t = rng.uniform_real(-std::numbers::pi, std::numbers::pi);
          v = Scalar::floating(r * std::cos(t), r * std::sin(t));
        }
      }
      const bool separated = std::all_of(pool.begin(), pool.end(), [&](const Scalar& o) {
        return std::abs(o.to_complex() - v.to_complex()) >= profile.separation;
      });
      if (separated) pool.push_back(v);
    }
  }

  std::vector<ExpTerm> out;
  std::size_t attempts = 0;
  while (out.size() < terms && attempts++ < 1000) {
    std::vector<Scalar> lam;
    for (const auto& pool : pools) {
      lam.push_back(pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))]);
    }
    ExponentialWitness w(std::move(lam));
    const bool distinct = std::all_of(out.begin(), out.end(), [&](const ExpTerm& t) {
      return max_norm_distance(t.witness, w) >= profile.separation;
    });
    if (!distinct) continue;
    const auto degree = static_cast<std::uint32_t>(rng.uniform_int(0, profile.max_degree));
    out.push_back(ExpTerm{std::move(w), random_coefficients(rng, profile.dim, degree, profile.exact)});
  }

  RandomInstance inst{ExpPoly(profile.dim, std::move(out)).normalized(), std::nullopt};
  if (profile.box_side > 0) inst.samples = SampledFunction::sample(inst.f, Box::cube(profile.dim, 0, profile.box_side - 1));
  return inst;
}

}  // namespace expolat::oracle
