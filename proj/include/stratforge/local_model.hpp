#pragma once

// Local models of strata: for a stratum with isotropy H the quotient near it
// is (disk) x cone(S(W)//H) where W is the non-fixed part of the slice
// representation.  Recursing through the links of links yields the full
// LinkTree; each link is a contact quotient of a sphere of strictly smaller
// dimension, so the recursion terminates.

#include <optional>

#include "stratforge/strat.hpp"

namespace stratforge::local_model {

using intlin::GroupDescriptor;
using intlin::IntMatrix;
using strat::Kind;
using strat::Partition;
using strat::Support;
using torus_rep::Point;
using torus_rep::WeightSystem;

// The isotropy group H of a support together with its action on the moving
// coordinates, re-expressed in H's canonical coordinates.  Every character of
// weight_system is nontrivial; the fixed directions are already split off.
struct SliceRep {
    GroupDescriptor isotropy;
    WeightSystem weight_system;      // H acting on C^{moving}
    Support base_support;
    std::vector<int> fixed_coords;   // ambient indices with trivial restricted character
    std::vector<int> moving_coords;  // ambient indices of weight_system columns
    IntMatrix base_weights;          // ambient A_S (k x |S|)
    IntMatrix h_torus_basis;         // k x torus_rank(H), Lie algebra basis of H
};

SliceRep slice_representation(const WeightSystem& ws, const Support& S);

struct VsDecomposition {
    int u_dim = 0;                        // dim of the fixed factor U (resp. U x R - 1)
    std::optional<WeightSystem> link_ws;  // H-action on the sphere of W; absent if W = 0
};

VsDecomposition vs_decomposition(const SliceRep& slice, Kind kind);

struct LinkNode {
    int stratum = -1;  // index into the owning partition
    int fixed_dim = 0;
    std::optional<WeightSystem> link;  // absent iff the stratum is open
    std::optional<Partition> link_partition;
    std::vector<LinkNode> children;  // one per stratum of link_partition
    bool truncated = false;
};

struct LinkTree {
    Partition partition;
    std::vector<LinkNode> nodes;  // one per stratum of partition
};

// Builds the partition and the recursive link tree; verifies the dimension
// ledger at every node and throws integrity_error on any violation.
// max_depth < 0 means the ambient-dimension default (always sufficient).
LinkTree link_tree(const WeightSystem& ws, Kind kind, int max_depth = -1);

// Model moment map F(eta, w) = eta + i(Phi_W(w)) of the abelian normal form;
// eta must lie in the annihilator of Lie(H) (checked), and the returned
// vector vanishes iff eta = 0 and Phi_W(w) = 0.
std::vector<double> model_moment(const SliceRep& slice, const std::vector<double>& eta,
                                 const Point& w);

}  // namespace stratforge::local_model
