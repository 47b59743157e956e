#pragma once

// Weight systems for diagonal linear actions of T^k x prod Z/m_i on C^n,
// their moment maps, and the contactization / symplectization calculus.
//
// Sign convention, fixed once for the whole library:
//   Phi_i(z) = 1/2 sum_j A_ij |z_j|^2
// i.e. the moment map paired with X is (1/2 iota(R) omega)(X_V), with omega
// the standard form on C^n and X_V(z)_j = i (A X)_j z_j.  Finite factors have
// zero Lie algebra and contribute nothing, structurally.

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "stratforge/intlin.hpp"

namespace stratforge::torus_rep {

using intlin::GroupDescriptor;
using intlin::Int;
using intlin::IntMatrix;

constexpr double kSphereTol = 1e-9;  // relative tolerance for |z| = 1

struct WeightSystem {
    std::size_t torus_rank = 0;      // k
    std::vector<Int> moduli;         // finite cyclic factors, each >= 2
    IntMatrix weights;               // k x n, column j = torus weight of z_j
    IntMatrix finite_chars;          // #moduli x n, residues mod moduli

    WeightSystem() = default;
    WeightSystem(std::size_t k, std::vector<Int> moduli, IntMatrix weights,
                 IntMatrix finite_chars);

    std::size_t n() const { return weights.cols(); }

    std::vector<Int> weight_of(std::size_t j) const;       // column j, length k
    std::vector<Int> finite_char_of(std::size_t j) const;  // column j, length f

    bool operator==(const WeightSystem&) const = default;
};

struct Point {
    std::vector<std::complex<double>> coords;
    std::optional<double> t;  // contactization coordinate

    double norm() const;
};

using MomentValue = std::vector<double>;

MomentValue moment_map(const WeightSystem& ws, const Point& z);

// Moment map of the trivially extended action on the contactization V x R;
// factors through the projection, so the t coordinate is ignored (but must
// be present).
MomentValue contactization_moment(const WeightSystem& ws, const Point& z);

// Psi(m, t) = -e^t Phi(m) on the symplectization.
MomentValue symplectization_moment(const MomentValue& phi, double t);

// Restriction of the moment map to the unit sphere; errors off-sphere input.
MomentValue sphere_contact_moment(const WeightSystem& ws, const Point& z);

// Splits {0..n-1} into (fixed, moving) coordinates for a subgroup H: a
// coordinate is fixed iff its character restricts trivially to H.
std::pair<std::vector<int>, std::vector<int>> fixed_subspace(const WeightSystem& ws,
                                                             const GroupDescriptor& H);

// The whole group as a subgroup of itself (isotropy of the origin).
GroupDescriptor full_group(const WeightSystem& ws);

// Group element, as a parameter vector: t in R^k, s integer residues.
struct GroupElement {
    std::vector<double> torus;  // length k, read mod 1
    std::vector<long> finite;   // length #moduli
};

Point act(const WeightSystem& ws, const GroupElement& g, const Point& z);

}  // namespace stratforge::torus_rep
