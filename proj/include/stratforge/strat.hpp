#pragma once

// The combinatorial engine: canonical partition of V//G(0) and of S//G into
// orbit-type strata for a diagonal linear action of a compact abelian group,
// together with the descriptor algebra for cones and products of partitioned
// spaces.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stratforge/lp.hpp"
#include "stratforge/torus_rep.hpp"

namespace stratforge::strat {

using intlin::GroupDescriptor;
using intlin::IntMatrix;
using torus_rep::WeightSystem;

// Sorted list of coordinate indices allowed to be nonzero.
using Support = std::vector<int>;

enum class Kind { symplectic_at_zero, contact_sphere };

struct Stratum {
    GroupDescriptor isotropy;
    std::vector<Support> supports;  // member supports, sorted lexicographically
    int dimension = 0;
    bool is_open = false;
    bool is_principal = false;
};

struct Partition {
    WeightSystem ambient;
    Kind kind = Kind::symplectic_at_zero;
    std::vector<Stratum> strata;
    // Frontier partial order as pairs (lower, upper): strata[lower] lies in
    // the closure of strata[upper].  Transitively closed.
    std::vector<std::pair<int, int>> frontier;
    // Coordinates fixed by the whole group (zero weight column and trivial
    // finite characters), split off before enumeration; every stratum
    // implicitly carries the factor C^{free}.
    std::vector<int> free_coords;

    int total_dimension() const;
    // Index of the stratum owning a given support over the moving
    // coordinates; -1 if the support is not zero-feasible.
    int stratum_of(const Support& moving_support) const;
};

// Dimension labels of a partitioned space: (label, dim) pairs plus the total.
struct StratificationDescriptor {
    std::vector<std::pair<std::string, int>> pieces;
    int total = 0;

    static StratificationDescriptor of(const Partition& p);
};

// True iff {z : support(z) = S, Phi(z) = 0} is nonempty: the exact rational
// LP {A_S x = 0, x_j >= 1} is feasible.  S = {} is always feasible.
bool zero_feasible(const WeightSystem& ws, const Support& S);

GroupDescriptor isotropy_of_support(const WeightSystem& ws, const Support& S);

// 2(|S| - rank A_S) for the symplectic quotient, one less on the sphere.
// Requires zero_feasible(ws, S); contact kind additionally requires S != {}
// unless the system has free coordinates making the sphere point legal.
int stratum_dimension(const WeightSystem& ws, const Support& S, Kind kind);

inline constexpr std::size_t kDefaultNMax = 20;

Partition assemble_partition(const WeightSystem& ws, Kind kind,
                             std::size_t n_max = kDefaultNMax);

// The unique open dense stratum per connected component of the quotient
// (components of the support-inclusion graph over all feasible supports).
// Throws integrity_error if existence or uniqueness fails.
std::vector<int> open_dense_stratum(const Partition& p);

StratificationDescriptor cone_descriptor(const StratificationDescriptor& d);
StratificationDescriptor product_descriptor(const StratificationDescriptor& d1,
                                            const StratificationDescriptor& d2);

// The (unique) largest zero-feasible support over the moving coordinates.
Support maximal_feasible_support(const WeightSystem& ws);

// Worker cap for the support sweep: STRAT_FORGE_THREADS, else hardware.
unsigned worker_count();

}  // namespace stratforge::strat
