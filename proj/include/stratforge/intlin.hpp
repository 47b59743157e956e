#pragma once

// Exact integer and rational linear algebra: Smith/Hermite normal forms,
// subgroup structure of kernels of character maps on compact abelian groups,
// and canonical (decidable) equality of such subgroups.

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

#include "stratforge/error.hpp"

namespace stratforge::intlin {

using Int = mpz_class;
using Rat = mpq_class;

// Dense matrix of arbitrary-precision integers, row-major.
// Empty shapes (0 x m, n x 0) are legal and show up constantly: the empty
// support, the rank-zero torus.
class IntMatrix {
  public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), e_(rows * cols) {}
    IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries);

    static IntMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    IntMatrix transpose() const;
    IntMatrix operator*(const IntMatrix& rhs) const;
    bool operator==(const IntMatrix& rhs) const = default;

    // Column selection (used to slice a weight matrix to a support).
    IntMatrix select_columns(const std::vector<int>& cols) const;

    // Stack rhs below this matrix; column counts must agree.
    IntMatrix stack(const IntMatrix& below) const;

    std::string str() const;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Int> e_;
};

// Matrix of exact rationals; only what the descriptors need.
class RatMatrix {
  public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), e_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rat& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const Rat& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
    bool operator==(const RatMatrix& rhs) const = default;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rat> e_;
};

// U * M * V = D with U, V unimodular and D diagonal, nonnegative,
// d1 | d2 | ... | dr.
struct SNFResult {
    IntMatrix U, D, V;
};

SNFResult smith_normal_form(const IntMatrix& M);

// Canonical row-style Hermite normal form of the row lattice of M.
// Zero rows are dropped; pivots are positive, entries above a pivot are
// reduced into [0, pivot).  Two matrices have equal row lattices iff their
// Hermite forms coincide, which is what group_equal leans on.
IntMatrix hermite_normal_form(const IntMatrix& M);

// Rank over Q (exact).
std::size_t rank(const IntMatrix& M);

// Determinant of a square matrix (exact, Bareiss).
Int determinant(const IntMatrix& M);

// Basis of the integer kernel lattice {x in Z^cols : M x = 0}.
// The returned matrix has cols() = kernel rank; its columns form a basis of
// the saturated kernel lattice.
IntMatrix kernel_basis(const IntMatrix& M);

// True iff v lies in the row lattice of the Hermite form H.
bool in_row_lattice(const IntMatrix& hnf, const std::vector<Int>& v);

// A closed subgroup H of the abelian group G = T^k x prod Z/m_i in canonical
// form.  G itself is treated as the subgroup {u : m_i u_{k+i} in Z} of the
// torus T^N, N = k + #moduli, so elements are parameter vectors u in R^N/Z^N.
//
// torus_rank and invariant_factors give the abstract isomorphism type
// H = T^d x prod Z/d_i; the embedding columns are parameter vectors of the
// generators (torus one-parameter directions first, then finite generators of
// orders d_1 | d_2 | ...).  annihilator is the Hermite form of the lattice
// {a in Z^N : <a,u> in Z for all u in H}; it determines H as a subset and
// makes equality and containment decidable.
struct GroupDescriptor {
    std::size_t ambient_torus_rank = 0;
    std::vector<Int> ambient_moduli;

    std::size_t torus_rank = 0;
    std::vector<Int> invariant_factors;  // each >= 2, divisibility chain
    RatMatrix embedding;                 // N x (torus_rank + #factors)
    IntMatrix annihilator;               // canonical HNF, rows x N

    std::size_t ambient_dim() const { return ambient_torus_rank + ambient_moduli.size(); }
    bool is_trivial() const { return torus_rank == 0 && invariant_factors.empty(); }
    std::size_t order_if_finite() const;  // throws if torus_rank > 0
};

// Character of such a subgroup in its canonical coordinates: an integer per
// torus generator plus a residue per finite generator.  Trivial iff all zero.
struct CharacterDescriptor {
    std::vector<Int> torus_part;       // length = torus_rank
    std::vector<Int> finite_residues;  // residue mod invariant_factors[i]

    bool trivial() const;
    bool operator==(const CharacterDescriptor&) const = default;
};

// Isotropy subgroup H_S = {g in G : chi_j(g) = 1 for all j} of the joint
// character map whose torus weights are the columns of A_S (k x s) and whose
// finite characters are the columns of finite_chars (f x s), f = #moduli.
GroupDescriptor subgroup_structure(const IntMatrix& A_S,
                                   const IntMatrix& finite_chars,
                                   const std::vector<Int>& moduli);

// Restriction of one ambient character (torus weight + finite residues) to H,
// expressed in H's canonical coordinates.
CharacterDescriptor restrict_character(const std::vector<Int>& weight,
                                       const std::vector<Int>& finite_char,
                                       const GroupDescriptor& H);

// Set-theoretic equality / containment of subgroups of the same ambient group.
bool group_equal(const GroupDescriptor& g1, const GroupDescriptor& g2);
bool group_contains(const GroupDescriptor& big, const GroupDescriptor& small);

}  // namespace stratforge::intlin
