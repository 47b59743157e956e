#include "stratforge/lp.hpp"

#include <cstddef>

namespace stratforge::lp {

std::optional<std::vector<Rat>> positive_kernel_point(const IntMatrix& A) {
    return kernel_point_with_lower_bounds(A, std::vector<int>(A.cols(), 1));
}

std::optional<std::vector<Rat>> kernel_point_with_lower_bounds(
    const IntMatrix& A, const std::vector<int>& lb) {
    const std::size_t m = A.rows();
    const std::size_t s = A.cols();
    if (lb.size() != s) throw input_error("kernel_point_with_lower_bounds: bad bounds");
    if (s == 0) return std::vector<Rat>{};

    // Substitute y = x - lb >= 0:  A y = -A lb =: b.  Phase-1 with one
    // artificial per row, minimizing their sum.
    const std::size_t nv = s + m;
    std::vector<std::vector<Rat>> T(m, std::vector<Rat>(nv + 1));
    for (std::size_t i = 0; i < m; ++i) {
        Rat b(0);
        for (std::size_t j = 0; j < s; ++j)
            if (lb[j]) b -= Rat(A.at(i, j));
        bool flip = b < 0;
        for (std::size_t j = 0; j < s; ++j) {
            Rat a(A.at(i, j));
            T[i][j] = flip ? -a : a;
        }
        T[i][s + i] = 1;
        T[i][nv] = flip ? -b : b;
    }

    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = s + i;

    // Reduced costs for cost vector c = (0,...,0, 1,...,1): obj[j] = c_j - sum_i T[i][j].
    std::vector<Rat> obj(nv + 1);
    for (std::size_t j = 0; j < nv; ++j) {
        Rat acc(0);
        for (std::size_t i = 0; i < m; ++i) acc += T[i][j];
        obj[j] = (j >= s ? Rat(1) : Rat(0)) - acc;
    }
    for (std::size_t i = 0; i < m; ++i) obj[nv] -= T[i][nv];

    for (;;) {
        // Bland: smallest-index entering variable with negative reduced cost.
        std::size_t enter = nv;
        for (std::size_t j = 0; j < nv; ++j)
            if (obj[j] < 0) { enter = j; break; }
        if (enter == nv) break;

        // Ratio test, ties broken by smallest basis index.
        std::size_t leave = m;
        Rat best;
        for (std::size_t i = 0; i < m; ++i) {
            if (T[i][enter] <= 0) continue;
            Rat ratio = T[i][nv] / T[i][enter];
            if (leave == m || ratio < best ||
                (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m)
            throw integrity_error("positive_kernel_point: unbounded phase-1 objective");

        // Pivot.
        Rat piv = T[leave][enter];
        for (std::size_t j = 0; j <= nv; ++j) T[leave][j] /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || T[i][enter] == 0) continue;
            Rat f = T[i][enter];
            for (std::size_t j = 0; j <= nv; ++j) T[i][j] -= f * T[leave][j];
        }
        if (obj[enter] != 0) {
            Rat f = obj[enter];
            for (std::size_t j = 0; j <= nv; ++j) obj[j] -= f * T[leave][j];
        }
        basis[leave] = enter;
    }

    // Feasible iff the artificial cost reached zero.
    if (obj[nv] != 0) return std::nullopt;

    std::vector<Rat> x(s);
    for (std::size_t j = 0; j < s; ++j) x[j] = lb[j];
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < s) x[basis[i]] += T[i][nv];
    return x;
}

bool feasible_positive_kernel(const IntMatrix& A) {
    return positive_kernel_point(A).has_value();
}

}  // namespace stratforge::lp
