#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace expolat {

/// A point of Z^d. Also used for shifts.
class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(std::size_t dim) : coords_(dim, 0) {}
  LatticePoint(std::initializer_list<std::int64_t> c) : coords_(c) {}
  explicit LatticePoint(std::vector<std::int64_t> c) : coords_(std::move(c)) {}

  static LatticePoint unit(std::size_t dim, std::size_t axis) {
    LatticePoint p(dim);
    p.coords_[axis] = 1;
    return p;
  }

  std::size_t dim() const { return coords_.size(); }
  std::int64_t operator[](std::size_t i) const { return coords_[i]; }
  std::int64_t& operator[](std::size_t i) { return coords_[i]; }
  std::span<const std::int64_t> coords() const { return coords_; }
  bool is_zero() const;

  LatticePoint& operator+=(const LatticePoint& o);
  LatticePoint& operator-=(const LatticePoint& o);
  friend LatticePoint operator+(LatticePoint a, const LatticePoint& b) { return a += b; }
  friend LatticePoint operator-(LatticePoint a, const LatticePoint& b) { return a -= b; }
  friend LatticePoint operator*(std::int64_t k, LatticePoint a);
  LatticePoint operator-() const;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

 private:
  std::vector<std::int64_t> coords_;
};

/// Exponent vector alpha in N^d; n^alpha = prod n_i^alpha_i with 0^0 = 1.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t dim) : entries_(dim, 0) {}
  MultiIndex(std::initializer_list<std::uint32_t> e) : entries_(e) {}
  explicit MultiIndex(std::vector<std::uint32_t> e) : entries_(std::move(e)) {}

  std::size_t dim() const { return entries_.size(); }
  std::uint32_t operator[](std::size_t i) const { return entries_[i]; }
  std::uint32_t& operator[](std::size_t i) { return entries_[i]; }
  std::span<const std::uint32_t> entries() const { return entries_; }
  std::uint64_t total_degree() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<std::uint32_t> entries_;
};

/// Lexicographic order, coordinate 1 compared first.
bool lex_less(const MultiIndex& a, const MultiIndex& b);

/// Graded lexicographic order: total degree first, ties broken by `lex_less`.
struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

/// All multi-indices of dimension `dim` with |alpha| <= max_degree, in
/// graded lexicographic order.
std::vector<MultiIndex> graded_lex_monomials(std::size_t dim, std::uint32_t max_degree);

/// Inclusive axis-aligned box [lo, hi] in Z^d. Points are enumerated in
/// row-major order (last coordinate varies fastest).
class Box {
 public:
  Box() = default;
  Box(LatticePoint lo, LatticePoint hi);

  /// Cube [lo, hi]^dim.
  static Box cube(std::size_t dim, std::int64_t lo, std::int64_t hi);

  const LatticePoint& lo() const { return lo_; }
  const LatticePoint& hi() const { return hi_; }
  std::size_t dim() const { return lo_.dim(); }
  bool empty() const;
  std::int64_t extent(std::size_t axis) const { return hi_[axis] - lo_[axis] + 1; }
  std::size_t volume() const;

  bool contains(const LatticePoint& p) const;
  bool contains(const Box& other) const;
  std::size_t index_of(const LatticePoint& p) const;
  LatticePoint point_at(std::size_t index) const;

  /// The sub-box of points x with x + k*y inside this box for every
  /// 0 <= k <= steps; nullopt when that set is empty.
  std::optional<Box> shrink(const LatticePoint& y, std::int64_t steps) const;

  /// Minkowski-style growth: smallest box containing x + k*y for x in this
  /// box and 0 <= k <= steps.
  Box grow(const LatticePoint& y, std::int64_t steps) const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  LatticePoint lo_;
  LatticePoint hi_;
};

/// Calls fn(point) for every point of the box in row-major order.
template <class Fn>
void for_each_point(const Box& box, Fn&& fn) {
  if (box.empty()) return;
  LatticePoint p = box.lo();
  const std::size_t d = box.dim();
  while (true) {
    fn(static_cast<const LatticePoint&>(p));
    std::size_t axis = d;
    while (axis > 0) {
      --axis;
      if (p[axis] < box.hi()[axis]) {
        ++p[axis];
        break;
      }
      p[axis] = box.lo()[axis];
      if (axis == 0) return;
    }
    if (d == 0) return;
  }
}

}  // namespace expolat
