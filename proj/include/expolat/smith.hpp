#pragma once

#include <cstddef>
#include <vector>

#include <gmpxx.h>

#include "expolat/lattice.hpp"

namespace expolat {

using IntMatrix = std::vector<std::vector<mpz_class>>;

/// Diagonal of the Smith normal form: nonzero invariant factors
/// d_1 | d_2 | ... | d_rank, all positive.
struct SmithForm {
  std::vector<mpz_class> invariant_factors;
  std::size_t rank() const { return invariant_factors.size(); }
};

SmithForm smith_normal_form(IntMatrix m);

/// True iff the vectors generate Z^dim as a group: the dim x t matrix with
/// the vectors as columns has rank dim and every invariant factor equal to 1.
bool generates_lattice(const std::vector<LatticePoint>& vectors, std::size_t dim);

}  // namespace expolat
