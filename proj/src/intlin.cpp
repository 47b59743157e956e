#include "stratforge/intlin.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace stratforge::intlin {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries)
    : rows_(rows), cols_(cols), e_(std::move(entries)) {
    if (e_.size() != rows_ * cols_)
        throw input_error("IntMatrix: entry count does not match shape");
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw input_error("IntMatrix: shape mismatch in product");
    IntMatrix p(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t l = 0; l < cols_; ++l) {
            const Int& a = at(i, l);
            if (a == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) p.at(i, j) += a * rhs.at(l, j);
        }
    return p;
}

IntMatrix IntMatrix::select_columns(const std::vector<int>& cols) const {
    IntMatrix s(rows_, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j] < 0 || static_cast<std::size_t>(cols[j]) >= cols_)
            throw input_error("IntMatrix: column index out of range");
        for (std::size_t i = 0; i < rows_; ++i) s.at(i, j) = at(i, cols[j]);
    }
    return s;
}

IntMatrix IntMatrix::stack(const IntMatrix& below) const {
    if (cols_ != below.cols_) throw input_error("IntMatrix: stack column mismatch");
    IntMatrix s(rows_ + below.rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) s.at(i, j) = at(i, j);
    for (std::size_t i = 0; i < below.rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) s.at(rows_ + i, j) = below.at(i, j);
    return s;
}

std::string IntMatrix::str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j);
        os << "]";
    }
    os << "]";
    return os.str();
}

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(a, j), m.at(b, j));
}
void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m.at(i, a), m.at(i, b));
}
// row a += q * row b
void add_row(IntMatrix& m, std::size_t a, std::size_t b, const Int& q) {
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(a, j) += q * m.at(b, j);
}
void add_col(IntMatrix& m, std::size_t a, std::size_t b, const Int& q) {
    for (std::size_t i = 0; i < m.rows(); ++i) m.at(i, a) += q * m.at(i, b);
}
void negate_row(IntMatrix& m, std::size_t a) {
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(a, j) = -m.at(a, j);
}

Int floordiv(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace

SNFResult smith_normal_form(const IntMatrix& M) {
    const std::size_t rows = M.rows(), cols = M.cols();
    IntMatrix A = M;
    IntMatrix U = IntMatrix::identity(rows);
    IntMatrix V = IntMatrix::identity(cols);

    const std::size_t nmin = std::min(rows, cols);
    for (std::size_t t = 0; t < nmin; ++t) {
        // Find a pivot of minimal nonzero magnitude in the trailing block.
        bool found = false;
        std::size_t pi = t, pj = t;
        Int best;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j) {
                const Int& a = A.at(i, j);
                if (a == 0) continue;
                Int mag = abs(a);
                if (!found || mag < best) {
                    found = true;
                    best = mag;
                    pi = i;
                    pj = j;
                }
            }
        if (!found) break;
        if (pi != t) { swap_rows(A, t, pi); swap_rows(U, t, pi); }
        if (pj != t) { swap_cols(A, t, pj); swap_cols(V, t, pj); }

        for (;;) {
            // Clear column t below the pivot, then row t right of the pivot.
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (A.at(i, t) == 0) continue;
                Int q = floordiv(A.at(i, t), A.at(t, t));
                add_row(A, i, t, -q);
                add_row(U, i, t, -q);
                if (A.at(i, t) != 0) {
                    // Remainder became the smaller pivot candidate.
                    swap_rows(A, t, i);
                    swap_rows(U, t, i);
                    clean = false;
                }
            }
            if (!clean) continue;
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (A.at(t, j) == 0) continue;
                Int q = floordiv(A.at(t, j), A.at(t, t));
                add_col(A, j, t, -q);
                add_col(V, j, t, -q);
                if (A.at(t, j) != 0) {
                    swap_cols(A, t, j);
                    swap_cols(V, t, j);
                    clean = false;
                    break;  // column clearing may be stale now
                }
            }
            if (!clean) continue;

            // Enforce divisibility of the trailing block by the pivot.
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i)
                for (std::size_t j = t + 1; j < cols && divides; ++j)
                    if (A.at(i, j) % A.at(t, t) != 0) {
                        add_row(A, t, i, 1);
                        add_row(U, t, i, 1);
                        divides = false;
                    }
            if (divides) break;
        }
        if (A.at(t, t) < 0) { negate_row(A, t); negate_row(U, t); }
    }
    return SNFResult{std::move(U), std::move(A), std::move(V)};
}

IntMatrix hermite_normal_form(const IntMatrix& M) {
    IntMatrix A = M;
    const std::size_t rows = A.rows(), cols = A.cols();
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        // Fold all rows below r into a single pivot at (r, col) via gcd steps.
        std::size_t piv = r;
        bool nonzero = false;
        for (std::size_t i = r; i < rows; ++i)
            if (A.at(i, col) != 0) { piv = i; nonzero = true; break; }
        if (!nonzero) continue;
        if (piv != r) swap_rows(A, r, piv);
        for (std::size_t i = r + 1; i < rows; ++i) {
            while (A.at(i, col) != 0) {
                Int q = floordiv(A.at(i, col), A.at(r, col));
                add_row(A, i, r, -q);
                if (A.at(i, col) != 0) swap_rows(A, r, i);
            }
        }
        if (A.at(r, col) < 0) negate_row(A, r);
        for (std::size_t i = 0; i < r; ++i) {
            Int q = floordiv(A.at(i, col), A.at(r, col));
            if (q != 0) add_row(A, i, r, -q);
        }
        ++r;
    }
    IntMatrix H(r, cols);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < cols; ++j) H.at(i, j) = A.at(i, j);
    return H;
}

std::size_t rank(const IntMatrix& M) { return hermite_normal_form(M).rows(); }

Int determinant(const IntMatrix& M) {
    if (M.rows() != M.cols()) throw input_error("determinant: matrix not square");
    const std::size_t n = M.rows();
    if (n == 0) return 1;
    IntMatrix A = M;
    Int prev = 1;
    int sign = 1;
    for (std::size_t t = 0; t + 1 < n; ++t) {
        if (A.at(t, t) == 0) {
            std::size_t piv = t;
            for (std::size_t i = t + 1; i < n; ++i)
                if (A.at(i, t) != 0) { piv = i; break; }
            if (A.at(piv, t) == 0) return 0;
            swap_rows(A, t, piv);
            sign = -sign;
        }
        for (std::size_t i = t + 1; i < n; ++i)
            for (std::size_t j = t + 1; j < n; ++j) {
                Int num = A.at(i, j) * A.at(t, t) - A.at(i, t) * A.at(t, j);
                mpz_divexact(A.at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
        prev = A.at(t, t);
    }
    return sign * A.at(n - 1, n - 1);
}

IntMatrix kernel_basis(const IntMatrix& M) {
    SNFResult snf = smith_normal_form(M);
    std::size_t r = 0;
    const std::size_t nmin = std::min(M.rows(), M.cols());
    while (r < nmin && snf.D.at(r, r) != 0) ++r;
    IntMatrix K(M.cols(), M.cols() - r);
    for (std::size_t j = r; j < M.cols(); ++j)
        for (std::size_t i = 0; i < M.cols(); ++i) K.at(i, j - r) = snf.V.at(i, j);
    return K;
}

bool in_row_lattice(const IntMatrix& hnf, const std::vector<Int>& v) {
    if (v.size() != hnf.cols()) throw input_error("in_row_lattice: length mismatch");
    std::vector<Int> w = v;
    std::size_t row = 0;
    for (std::size_t col = 0; col < hnf.cols(); ++col) {
        if (row < hnf.rows() && hnf.at(row, col) != 0) {
            Int q, rem;
            mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), w[col].get_mpz_t(),
                        hnf.at(row, col).get_mpz_t());
            if (rem != 0) return false;
            for (std::size_t j = col; j < hnf.cols(); ++j) w[j] -= q * hnf.at(row, j);
            ++row;
        } else if (w[col] != 0) {
            return false;
        }
    }
    return true;
}

std::size_t GroupDescriptor::order_if_finite() const {
    if (torus_rank > 0) throw input_error("order_if_finite: group has positive dimension");
    Int o = 1;
    for (const Int& d : invariant_factors) o *= d;
    return o.get_ui();
}

bool CharacterDescriptor::trivial() const {
    for (const Int& x : torus_part)
        if (x != 0) return false;
    for (const Int& x : finite_residues)
        if (x != 0) return false;
    return true;
}

GroupDescriptor subgroup_structure(const IntMatrix& A_S, const IntMatrix& finite_chars,
                                   const std::vector<Int>& moduli) {
    const std::size_t k = A_S.rows();
    const std::size_t f = moduli.size();
    const std::size_t s = A_S.cols();
    if (finite_chars.rows() != f || finite_chars.cols() != s)
        throw input_error("subgroup_structure: finite character shape mismatch");
    for (const Int& m : moduli)
        if (m < 2) throw input_error("subgroup_structure: modulus < 2");
    const std::size_t N = k + f;

    // Relation matrix on the covering torus T^N: one row per character in the
    // support, plus the rows m_i e_{k+i} carving the ambient group out of T^N.
    IntMatrix B(s + f, N);
    for (std::size_t j = 0; j < s; ++j) {
        for (std::size_t i = 0; i < k; ++i) B.at(j, i) = A_S.at(i, j);
        for (std::size_t i = 0; i < f; ++i) B.at(j, k + i) = finite_chars.at(i, j);
    }
    for (std::size_t i = 0; i < f; ++i) B.at(s + i, k + i) = moduli[i];

    SNFResult snf = smith_normal_form(B);
    std::size_t r = 0;
    const std::size_t nmin = std::min(B.rows(), B.cols());
    while (r < nmin && snf.D.at(r, r) != 0) ++r;

    GroupDescriptor g;
    g.ambient_torus_rank = k;
    g.ambient_moduli = moduli;
    g.torus_rank = N - r;
    std::vector<std::size_t> finite_cols;
    for (std::size_t i = 0; i < r; ++i)
        if (snf.D.at(i, i) >= 2) {
            g.invariant_factors.push_back(snf.D.at(i, i));
            finite_cols.push_back(i);
        }

    // In the unimodular coordinates w = V^{-1} u the kernel is
    // prod (1/d_i)Z/Z x T^{N-r}; its generators are columns of V.
    g.embedding = RatMatrix(N, g.torus_rank + finite_cols.size());
    for (std::size_t j = 0; j < g.torus_rank; ++j)
        for (std::size_t i = 0; i < N; ++i)
            g.embedding.at(i, j) = Rat(snf.V.at(i, r + j));
    for (std::size_t j = 0; j < finite_cols.size(); ++j)
        for (std::size_t i = 0; i < N; ++i) {
            Rat e(snf.V.at(i, finite_cols[j]), snf.D.at(finite_cols[j], finite_cols[j]));
            e.canonicalize();
            g.embedding.at(i, g.torus_rank + j) = e;
        }

    // The annihilator lattice of ker(B : T^N -> T^rows) is the row lattice
    // of B itself; its Hermite form is the canonical tag of the subgroup.
    g.annihilator = hermite_normal_form(B);
    return g;
}

CharacterDescriptor restrict_character(const std::vector<Int>& weight,
                                       const std::vector<Int>& finite_char,
                                       const GroupDescriptor& H) {
    if (weight.size() != H.ambient_torus_rank || finite_char.size() != H.ambient_moduli.size())
        throw input_error("restrict_character: character does not match ambient group");
    const std::size_t k = H.ambient_torus_rank;
    const std::size_t N = H.ambient_dim();

    auto pair_with_column = [&](std::size_t col) {
        Rat acc(0);
        for (std::size_t i = 0; i < k; ++i) acc += Rat(weight[i]) * H.embedding.at(i, col);
        for (std::size_t i = k; i < N; ++i) acc += Rat(finite_char[i - k]) * H.embedding.at(i, col);
        acc.canonicalize();
        return acc;
    };

    CharacterDescriptor chi;
    for (std::size_t j = 0; j < H.torus_rank; ++j) {
        Rat v = pair_with_column(j);
        if (v.get_den() != 1)
            throw integrity_error("restrict_character: non-integral pairing with torus generator");
        chi.torus_part.push_back(v.get_num());
    }
    for (std::size_t j = 0; j < H.invariant_factors.size(); ++j) {
        Rat v = pair_with_column(H.torus_rank + j);
        // v is a multiple of 1/d_j; the character residue is d_j * v mod d_j.
        const Int& d = H.invariant_factors[j];
        Rat scaled = v * Rat(d);
        scaled.canonicalize();
        if (scaled.get_den() != 1)
            throw integrity_error("restrict_character: generator order mismatch");
        Int res;
        mpz_fdiv_r(res.get_mpz_t(), scaled.get_num().get_mpz_t(), d.get_mpz_t());
        chi.finite_residues.push_back(res);
    }
    return chi;
}

namespace {
void require_same_ambient(const GroupDescriptor& a, const GroupDescriptor& b) {
    if (a.ambient_torus_rank != b.ambient_torus_rank || a.ambient_moduli != b.ambient_moduli)
        throw input_error("group comparison: descriptors have different ambient groups");
}
}  // namespace

bool group_equal(const GroupDescriptor& g1, const GroupDescriptor& g2) {
    require_same_ambient(g1, g2);
    return g1.annihilator == g2.annihilator;
}

bool group_contains(const GroupDescriptor& big, const GroupDescriptor& small) {
    require_same_ambient(big, small);
    // small <= big iff Ann(big) <= Ann(small).
    for (std::size_t i = 0; i < big.annihilator.rows(); ++i) {
        std::vector<Int> row(big.annihilator.cols());
        for (std::size_t j = 0; j < row.size(); ++j) row[j] = big.annihilator.at(i, j);
        if (!in_row_lattice(small.annihilator, row)) return false;
    }
    return true;
}

}  // namespace stratforge::intlin
