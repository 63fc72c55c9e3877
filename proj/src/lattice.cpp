#include "expolat/lattice.hpp"

#include <algorithm>
#include <numeric>

#include "expolat/error.hpp"

namespace expolat {

bool LatticePoint::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](std::int64_t c) { return c == 0; });
}

LatticePoint& LatticePoint::operator+=(const LatticePoint& o) {
  if (o.dim() != dim()) throw Error(ErrorCode::dimension_mismatch, "lattice point dimensions differ");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
  return *this;
}

LatticePoint& LatticePoint::operator-=(const LatticePoint& o) {
  if (o.dim() != dim()) throw Error(ErrorCode::dimension_mismatch, "lattice point dimensions differ");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
  return *this;
}

LatticePoint operator*(std::int64_t k, LatticePoint a) {
  for (auto& c : a.coords_) c *= k;
  return a;
}

LatticePoint LatticePoint::operator-() const { return -1 * *this; }

std::uint64_t MultiIndex::total_degree() const {
  return std::accumulate(entries_.begin(), entries_.end(), std::uint64_t{0});
}

bool lex_less(const MultiIndex& a, const MultiIndex& b) {
  return std::lexicographical_compare(a.entries().begin(), a.entries().end(), b.entries().begin(),
                                      b.entries().end());
}

bool GradedLexLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  const auto da = a.total_degree();
  const auto db = b.total_degree();
  if (da != db) return da < db;
  return lex_less(a, b);
}

std::vector<MultiIndex> graded_lex_monomials(std::size_t dim, std::uint32_t max_degree) {
  std::vector<MultiIndex> out;
  // Enumerate the product box [0, max_degree]^dim and filter; dims are small.
  MultiIndex a(dim);
  while (true) {
    if (a.total_degree() <= max_degree) out.push_back(a);
    std::size_t axis = dim;
    bool done = true;
    while (axis > 0) {
      --axis;
      if (a[axis] < max_degree) {
        ++a[axis];
        done = false;
        break;
      }
      a[axis] = 0;
    }
    if (done) break;
  }
  std::sort(out.begin(), out.end(), GradedLexLess{});
  return out;
}

Box::Box(LatticePoint lo, LatticePoint hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.dim() != hi_.dim()) throw Error(ErrorCode::dimension_mismatch, "box corners differ in dimension");
}

Box Box::cube(std::size_t dim, std::int64_t lo, std::int64_t hi) {
  return Box(LatticePoint(std::vector<std::int64_t>(dim, lo)), LatticePoint(std::vector<std::int64_t>(dim, hi)));
}

bool Box::empty() const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (hi_[i] < lo_[i]) return true;
  }
  return dim() == 0;
}

std::size_t Box::volume() const {
  if (empty()) return 0;
  std::size_t v = 1;
  for (std::size_t i = 0; i < dim(); ++i) v *= static_cast<std::size_t>(extent(i));
  return v;
}

bool Box::contains(const LatticePoint& p) const {
  if (p.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (p[i] < lo_[i] || p[i] > hi_[i]) return false;
  }
  return true;
}

bool Box::contains(const Box& other) const {
  return other.empty() || (contains(other.lo()) && contains(other.hi()));
}

std::size_t Box::index_of(const LatticePoint& p) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < dim(); ++i) {
    idx = idx * static_cast<std::size_t>(extent(i)) + static_cast<std::size_t>(p[i] - lo_[i]);
  }
  return idx;
}

LatticePoint Box::point_at(std::size_t index) const {
  LatticePoint p(dim());
  for (std::size_t i = dim(); i > 0; --i) {
    const auto ext = static_cast<std::size_t>(extent(i - 1));
    p[i - 1] = lo_[i - 1] + static_cast<std::int64_t>(index % ext);
    index /= ext;
  }
  return p;
}

std::optional<Box> Box::shrink(const LatticePoint& y, std::int64_t steps) const {
  if (y.dim() != dim()) throw Error(ErrorCode::dimension_mismatch, "shift and box dimensions differ");
  LatticePoint lo = lo_;
  LatticePoint hi = hi_;
  for (std::size_t i = 0; i < dim(); ++i) {
    const std::int64_t reach = steps * y[i];
    if (reach > 0) hi[i] -= reach;
    if (reach < 0) lo[i] -= reach;
  }
  Box out(lo, hi);
  if (out.empty()) return std::nullopt;
  return out;
}

Box Box::grow(const LatticePoint& y, std::int64_t steps) const {
  LatticePoint lo = lo_;
  LatticePoint hi = hi_;
  for (std::size_t i = 0; i < dim(); ++i) {
    const std::int64_t reach = steps * y[i];
    if (reach > 0) hi[i] += reach;
    if (reach < 0) lo[i] += reach;
  }
  return {lo, hi};
}

}  // namespace expolat
