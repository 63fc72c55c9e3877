#include "expolat/smith.hpp"

#include <utility>

#include "expolat/error.hpp"

namespace expolat {

namespace {

// Locates the entry of smallest nonzero modulus in the lower-right block.
bool find_pivot(const IntMatrix& a, std::size_t s, std::size_t& pr, std::size_t& pc) {
  bool found = false;
  mpz_class best;
  for (std::size_t i = s; i < a.size(); ++i) {
    for (std::size_t j = s; j < a[i].size(); ++j) {
      if (a[i][j] == 0) continue;
      mpz_class v = abs(a[i][j]);
      if (!found || v < best) {
        best = v;
        pr = i;
        pc = j;
        found = true;
      }
    }
  }
  return found;
}

}  // namespace

SmithForm smith_normal_form(IntMatrix a) {
  SmithForm out;
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  for (const auto& r : a) {
    if (r.size() != cols) throw Error(ErrorCode::invalid_argument, "ragged integer matrix");
  }
  for (std::size_t s = 0; s < std::min(rows, cols); ++s) {
    std::size_t pr = 0;
    std::size_t pc = 0;
    if (!find_pivot(a, s, pr, pc)) break;
    while (true) {
      std::swap(a[s], a[pr]);
      for (auto& r : a) std::swap(r[s], r[pc]);

      bool clean = true;
      for (std::size_t i = s + 1; i < rows; ++i) {
        if (a[i][s] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][s].get_mpz_t(), a[s][s].get_mpz_t());
        for (std::size_t j = s; j < cols; ++j) a[i][j] -= q * a[s][j];
        if (a[i][s] != 0) clean = false;
      }
      for (std::size_t j = s + 1; j < cols; ++j) {
        if (a[s][j] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a[s][j].get_mpz_t(), a[s][s].get_mpz_t());
        for (std::size_t i = s; i < rows; ++i) a[i][j] -= q * a[i][s];
        if (a[s][j] != 0) clean = false;
      }
      if (clean) {
        // Divisibility: fold a row with an entry not divisible by the pivot
        // into row s and redo the reduction.
        bool divisible = true;
        for (std::size_t i = s + 1; i < rows && divisible; ++i) {
          for (std::size_t j = s + 1; j < cols; ++j) {
            if (a[i][j] % a[s][s] != 0) {
              for (std::size_t k = s; k < cols; ++k) a[s][k] += a[i][k];
              divisible = false;
              break;
            }
          }
        }
        if (divisible) break;
      }
      find_pivot(a, s, pr, pc);
    }
    out.invariant_factors.push_back(abs(a[s][s]));
  }
  return out;
}

bool generates_lattice(const std::vector<LatticePoint>& vectors, std::size_t dim) {
  IntMatrix m(dim, std::vector<mpz_class>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].dim() != dim) throw Error(ErrorCode::dimension_mismatch, "generator dimension differs");
    for (std::size_t i = 0; i < dim; ++i) m[i][j] = static_cast<long>(vectors[j][i]);
  }
  const SmithForm snf = smith_normal_form(std::move(m));
  if (snf.rank() != dim) return false;
  for (const auto& d : snf.invariant_factors) {
    if (d != 1) return false;
  }
  return true;
}

}  // namespace expolat
