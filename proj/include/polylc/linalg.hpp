#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polylc/rational.hpp"

namespace polylc {

struct AbelianInvariants {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;  // d1 | d2 | ..., each >= 2

  bool operator==(const AbelianInvariants& o) const {
    return free_rank == o.free_rank && torsion == o.torsion;
  }
  bool trivial() const { return free_rank == 0 && torsion.empty(); }
  std::string str() const;  // "Z^2 + Z/3", "0"
};

Integer vec_gcd(const IntVec& v);
IntVec primitive_step(const IntVec& v);

// Bareiss
Integer determinant(IntMatrix m);
Rational determinant(const RatMatrix& m);

std::size_t rank(RatMatrix m);
std::size_t rank(const IntMatrix& m);

// Some solution x of A x = b, nullopt if inconsistent.
std::optional<std::vector<Rational>> solve_linear(const RatMatrix& A, const std::vector<Rational>& b);
// Basis (rows) of {x : A x = 0} over Q.
RatMatrix rational_kernel(const RatMatrix& A);
RatMatrix inverse(const RatMatrix& A);
RatMatrix transpose(const RatMatrix& A);
RatMatrix multiply(const RatMatrix& A, const RatMatrix& B);
std::vector<Rational> apply(const RatMatrix& A, const std::vector<Rational>& x);

// Rows spanning {x in Z^n : A x = 0}; n = number of columns of A (pass ncols when A has no rows).
IntMatrix integer_kernel(const IntMatrix& A, std::size_t ncols);
// Row Hermite normal form, zero rows dropped.
IntMatrix hermite_normal_form(IntMatrix rows, std::size_t ncols);
// Canonical (HNF) basis of span_Q(rows) ∩ Z^ncols.
IntMatrix saturation(const IntMatrix& rows, std::size_t ncols);
// Nonzero diagonal entries of the Smith form, ascending with divisibility.
std::vector<Integer> elementary_divisors(IntMatrix m);
// true iff the rows are linearly independent and generate a saturated lattice
bool is_saturated_basis(const IntMatrix& rows);

// coker(M) = Z^{cols} / rowspace(M)
AbelianInvariants smith_normal_form(const IntMatrix& m, std::size_t ncols);
AbelianInvariants smith_normal_form(const IntMatrix& m);

// Sparse relation matrix; cokernel computed by unit-pivot elimination, with a
// dense Smith form on whatever remains.
struct SparseRelations {
  std::size_t ncols = 0;
  std::vector<std::vector<std::pair<std::uint32_t, long>>> rows;  // sorted by column
};
AbelianInvariants sparse_cokernel(const SparseRelations& m);

IntVec scale_to_integer(const std::vector<Rational>& v);  // positive multiple, primitive

}  // namespace polylc
