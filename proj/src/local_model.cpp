#include "stratforge/local_model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace stratforge::local_model {

using intlin::Int;

SliceRep slice_representation(const WeightSystem& ws, const Support& S) {
    if (!strat::zero_feasible(ws, S))
        throw input_error("slice_representation: support is not zero-feasible");
    SliceRep slice;
    slice.base_support = S;
    slice.isotropy = strat::isotropy_of_support(ws, S);
    slice.base_weights = ws.weights.select_columns(S);
    auto [fixed, moving] = torus_rep::fixed_subspace(ws, slice.isotropy);
    slice.fixed_coords = fixed;
    slice.moving_coords = moving;

    const auto& H = slice.isotropy;
    IntMatrix w(H.torus_rank, moving.size());
    IntMatrix c(H.invariant_factors.size(), moving.size());
    for (std::size_t m = 0; m < moving.size(); ++m) {
        auto chi = intlin::restrict_character(ws.weight_of(moving[m]),
                                              ws.finite_char_of(moving[m]), H);
        for (std::size_t i = 0; i < H.torus_rank; ++i) w.at(i, m) = chi.torus_part[i];
        for (std::size_t i = 0; i < H.invariant_factors.size(); ++i)
            c.at(i, m) = chi.finite_residues[i];
    }
    slice.weight_system = WeightSystem(H.torus_rank, H.invariant_factors, w, c);

    slice.h_torus_basis = IntMatrix(ws.torus_rank, H.torus_rank);
    for (std::size_t j = 0; j < H.torus_rank; ++j)
        for (std::size_t i = 0; i < ws.torus_rank; ++i) {
            const auto& e = H.embedding.at(i, j);
            if (e.get_den() != 1)
                throw integrity_error("slice_representation: non-integral torus generator");
            slice.h_torus_basis.at(i, j) = e.get_num();
        }
    return slice;
}

VsDecomposition vs_decomposition(const SliceRep& slice, Kind kind) {
    VsDecomposition vs;
    const int rank_s = static_cast<int>(intlin::rank(slice.base_weights));
    vs.u_dim = 2 * (static_cast<int>(slice.fixed_coords.size()) - rank_s);
    if (kind == Kind::contact_sphere) vs.u_dim -= 1;
    if (!slice.moving_coords.empty()) vs.link_ws = slice.weight_system;
    return vs;
}

namespace {

// Dimensions of strata visible near a point of the given stratum: the
// stratum itself plus every stratum owning a feasible support containing the
// representative.
std::multiset<int> neighborhood_dims(const Partition& p, int stratum_idx,
                                     const Support& rep) {
    std::set<int> seen;
    std::multiset<int> dims;
    for (std::size_t t = 0; t < p.strata.size(); ++t) {
        bool adjacent = false;
        for (const auto& sup : p.strata[t].supports) {
            if (std::includes(sup.begin(), sup.end(), rep.begin(), rep.end())) {
                adjacent = true;
                break;
            }
        }
        if (adjacent) dims.insert(p.strata[t].dimension);
    }
    (void)stratum_idx;
    (void)seen;
    return dims;
}

std::multiset<int> model_dims(int fixed_dim, const std::optional<Partition>& link_partition) {
    std::multiset<int> dims{fixed_dim};
    if (link_partition)
        for (const auto& st : link_partition->strata) dims.insert(fixed_dim + 1 + st.dimension);
    return dims;
}

std::vector<LinkNode> build_nodes(const Partition& p, int depth);

LinkNode build_node(const Partition& p, int stratum_idx, int depth) {
    LinkNode node;
    node.stratum = stratum_idx;
    const auto& st = p.strata[stratum_idx];

    // Representative: largest member support (links agree across members by
    // construction: same isotropy, same fixed set, same restricted weights).
    Support rep = st.supports.front();
    for (const auto& s : st.supports)
        if (s.size() > rep.size() || (s.size() == rep.size() && s > rep)) rep = s;
    Support rep_ambient = rep;
    for (int j : p.free_coords) rep_ambient.push_back(j);
    std::sort(rep_ambient.begin(), rep_ambient.end());

    SliceRep slice = slice_representation(p.ambient, rep_ambient);
    VsDecomposition vs = vs_decomposition(slice, p.kind);
    node.fixed_dim = vs.u_dim;
    if (node.fixed_dim != st.dimension)
        throw integrity_error("link_tree: disk dimension differs from stratum dimension");

    Partition link_partition;
    if (vs.link_ws) link_partition = strat::assemble_partition(*vs.link_ws,
                                                               Kind::contact_sphere);
    const bool empty_link = !vs.link_ws || link_partition.strata.empty();
    if (empty_link != st.is_open)
        throw integrity_error("link_tree: empty link does not match stratum openness");

    if (!empty_link) {
        node.link = vs.link_ws;
        if (link_partition.total_dimension() >= p.total_dimension() &&
            p.kind == Kind::contact_sphere)
            throw integrity_error("link_tree: link dimension failed to decrease");
        // Ledger: neighborhood dims in the ambient partition match
        // disk x cone(link partition).
        if (neighborhood_dims(p, stratum_idx, rep) !=
            model_dims(node.fixed_dim, link_partition))
            throw integrity_error("link_tree: dimension ledger violated at a stratum");
        if (depth <= 0) {
            node.truncated = true;
        } else {
            node.children = build_nodes(link_partition, depth - 1);
        }
        node.link_partition = std::move(link_partition);
    } else {
        // Open stratum: the model is a plain disk.
        if (neighborhood_dims(p, stratum_idx, rep) != std::multiset<int>{st.dimension})
            throw integrity_error("link_tree: open stratum has nontrivial neighborhood");
    }
    return node;
}

std::vector<LinkNode> build_nodes(const Partition& p, int depth) {
    std::vector<LinkNode> nodes;
    for (std::size_t i = 0; i < p.strata.size(); ++i)
        nodes.push_back(build_node(p, static_cast<int>(i), depth));
    return nodes;
}

}  // namespace

LinkTree link_tree(const WeightSystem& ws, Kind kind, int max_depth) {
    if (max_depth < 0) max_depth = static_cast<int>(2 * ws.n()) + 1;
    if (max_depth < 1) throw input_error("link_tree: max_depth must be >= 1");
    LinkTree tree;
    tree.partition = strat::assemble_partition(ws, kind);
    tree.nodes = build_nodes(tree.partition, max_depth - 1);
    return tree;
}

std::vector<double> model_moment(const SliceRep& slice, const std::vector<double>& eta,
                                 const Point& w) {
    const std::size_t k = slice.h_torus_basis.rows();
    const std::size_t d = slice.h_torus_basis.cols();
    if (eta.size() != k) throw input_error("model_moment: eta has wrong dimension");

    Eigen::MatrixXd B(k, d);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < d; ++j) B(i, j) = slice.h_torus_basis.at(i, j).get_d();

    // eta must annihilate Lie(H).
    double eta_scale = 1.0;
    for (double e : eta) eta_scale = std::max(eta_scale, std::abs(e));
    if (d > 0) {
        Eigen::VectorXd ev(k);
        for (std::size_t i = 0; i < k; ++i) ev(i) = eta[i];
        Eigen::VectorXd proj = B.transpose() * ev;
        if (proj.lpNorm<Eigen::Infinity>() > 1e-9 * eta_scale * B.lpNorm<Eigen::Infinity>())
            throw input_error("model_moment: eta does not annihilate the isotropy algebra");
    }

    // F(eta, w) = eta + i(Phi_W(w)), with i the splitting injection carrying
    // H-coordinates back into the ambient dual along the generator basis.
    auto phi = torus_rep::moment_map(slice.weight_system, w);
    std::vector<double> out(eta);
    if (d > 0) {
        Eigen::VectorXd pv(d);
        for (std::size_t j = 0; j < d; ++j) pv(j) = phi[j];
        Eigen::VectorXd lifted = B * (B.transpose() * B).ldlt().solve(pv);
        for (std::size_t i = 0; i < k; ++i) out[i] += lifted(i);
    }
    return out;
}

}  // namespace stratforge::local_model
