#include "stratforge/strat.hpp"

#include <algorithm>
#include <cstdlib>
#include <future>
#include <map>
#include <thread>

namespace stratforge::strat {

namespace {

uint32_t to_mask(const Support& S, const std::vector<int>& coords) {
    uint32_t m = 0;
    for (int j : S) {
        auto it = std::find(coords.begin(), coords.end(), j);
        if (it == coords.end()) return UINT32_MAX;
        m |= 1u << (it - coords.begin());
    }
    return m;
}

Support from_mask(uint32_t mask, const std::vector<int>& coords) {
    Support S;
    for (std::size_t b = 0; b < coords.size(); ++b)
        if (mask & (1u << b)) S.push_back(coords[b]);
    return S;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<int> moving_coordinates(const WeightSystem& ws, std::vector<int>& free_coords) {
    std::vector<int> moving;
    for (std::size_t j = 0; j < ws.n(); ++j) {
        bool zero = true;
        for (std::size_t i = 0; i < ws.torus_rank && zero; ++i)
            if (ws.weights.at(i, j) != 0) zero = false;
        for (std::size_t i = 0; i < ws.moduli.size() && zero; ++i)
            if (ws.finite_chars.at(i, j) != 0) zero = false;
        (zero ? free_coords : moving).push_back(static_cast<int>(j));
    }
    return moving;
}

}  // namespace

int Partition::total_dimension() const {
    int d = -1;
    for (const auto& s : strata) d = std::max(d, s.dimension);
    return d;
}

int Partition::stratum_of(const Support& moving_support) const {
    for (std::size_t i = 0; i < strata.size(); ++i)
        for (const auto& s : strata[i].supports)
            if (s == moving_support) return static_cast<int>(i);
    return -1;
}

StratificationDescriptor StratificationDescriptor::of(const Partition& p) {
    StratificationDescriptor d;
    for (std::size_t i = 0; i < p.strata.size(); ++i)
        d.pieces.emplace_back("s" + std::to_string(i), p.strata[i].dimension);
    d.total = p.total_dimension();
    return d;
}

bool zero_feasible(const WeightSystem& ws, const Support& S) {
    for (int j : S)
        if (j < 0 || static_cast<std::size_t>(j) >= ws.n())
            throw input_error("zero_feasible: support index out of range");
    return lp::feasible_positive_kernel(ws.weights.select_columns(S));
}

GroupDescriptor isotropy_of_support(const WeightSystem& ws, const Support& S) {
    for (int j : S)
        if (j < 0 || static_cast<std::size_t>(j) >= ws.n())
            throw input_error("isotropy_of_support: support index out of range");
    return intlin::subgroup_structure(ws.weights.select_columns(S),
                                      ws.finite_chars.select_columns(S), ws.moduli);
}

int stratum_dimension(const WeightSystem& ws, const Support& S, Kind kind) {
    if (!zero_feasible(ws, S))
        throw input_error("stratum_dimension: support is not zero-feasible");
    if (kind == Kind::contact_sphere && S.empty())
        throw input_error("stratum_dimension: empty support has no sphere stratum");
    const int r = static_cast<int>(intlin::rank(ws.weights.select_columns(S)));
    const int d = 2 * (static_cast<int>(S.size()) - r);
    return kind == Kind::symplectic_at_zero ? d : d - 1;
}

unsigned worker_count() {
    if (const char* env = std::getenv("STRAT_FORGE_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(std::min(v, 256L));
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

Partition assemble_partition(const WeightSystem& ws, Kind kind, std::size_t n_max) {
    Partition p;
    p.ambient = ws;
    p.kind = kind;
    std::vector<int> moving = moving_coordinates(ws, p.free_coords);
    if (moving.size() > n_max)
        throw input_error("assemble_partition: " + std::to_string(moving.size()) +
                          " moving coordinates exceed n_max=" + std::to_string(n_max) +
                          "; use the sampler path for systems this large");

    const std::size_t nm = moving.size();
    const uint32_t nmask = 1u << nm;

    // Independent per-support sweep: feasibility only (isotropy is computed
    // afterwards for the feasible ones).
    std::vector<char> feasible(nmask, 0);
    const unsigned workers = std::min<unsigned>(worker_count(), nmask);
    {
        std::vector<std::future<void>> futs;
        for (unsigned w = 0; w < workers; ++w)
            futs.push_back(std::async(std::launch::async, [&, w] {
                for (uint32_t mask = w; mask < nmask; mask += workers)
                    feasible[mask] =
                        zero_feasible(ws, from_mask(mask, moving)) ? 1 : 0;
            }));
        for (auto& f : futs) f.get();
    }

    std::vector<uint32_t> feas;
    for (uint32_t mask = 0; mask < nmask; ++mask) {
        if (!feasible[mask]) continue;
        if (kind == Kind::contact_sphere && mask == 0 && p.free_coords.empty())
            continue;  // the sphere misses the origin
        feas.push_back(mask);
    }
    if (feas.empty()) return p;

    // Feasible supports are closed under union, so the union of all of them
    // is the unique maximal one.
    uint32_t smax = 0;
    for (uint32_t m : feas) smax |= m;
    if (!feasible[smax])
        throw integrity_error("assemble_partition: feasible supports not union-closed");

    // Group by isotropy, split groups by inclusion adjacency.
    std::vector<GroupDescriptor> iso(feas.size());
    std::map<std::string, std::vector<int>> by_iso;
    for (std::size_t i = 0; i < feas.size(); ++i) {
        iso[i] = isotropy_of_support(ws, from_mask(feas[i], moving));
        by_iso[iso[i].annihilator.str()].push_back(static_cast<int>(i));
    }

    UnionFind uf(feas.size());
    for (const auto& [key, members] : by_iso)
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                uint32_t ma = feas[members[a]], mb = feas[members[b]];
                if ((ma & mb) == ma || (ma & mb) == mb) uf.unite(members[a], members[b]);
            }

    std::map<int, std::vector<int>> pieces;
    for (std::size_t i = 0; i < feas.size(); ++i)
        pieces[uf.find(static_cast<int>(i))].push_back(static_cast<int>(i));

    for (const auto& [root, members] : pieces) {
        Stratum st;
        st.isotropy = iso[members.front()];
        int dim = -1;
        bool open = false;
        for (int i : members) {
            Support amb = from_mask(feas[i], moving);
            for (int j : p.free_coords) amb.push_back(j);
            std::sort(amb.begin(), amb.end());
            dim = std::max(dim, stratum_dimension(ws, amb, kind));
            st.supports.push_back(from_mask(feas[i], moving));
            if (feas[i] == smax) open = true;
        }
        std::sort(st.supports.begin(), st.supports.end());
        st.dimension = dim;
        st.is_open = open;
        p.strata.push_back(std::move(st));
    }
    std::sort(p.strata.begin(), p.strata.end(), [](const Stratum& a, const Stratum& b) {
        if (a.dimension != b.dimension) return a.dimension < b.dimension;
        return a.supports < b.supports;
    });

    // Frontier: sigma < tau iff some member support of sigma is strictly
    // contained in a member of tau; transitively closed.
    const std::size_t ns = p.strata.size();
    std::vector<std::vector<char>> lt(ns, std::vector<char>(ns, 0));
    for (std::size_t a = 0; a < ns; ++a)
        for (std::size_t b = 0; b < ns; ++b) {
            if (a == b) continue;
            for (const auto& sa : p.strata[a].supports) {
                uint32_t ma = to_mask(sa, moving);
                for (const auto& sb : p.strata[b].supports) {
                    uint32_t mb = to_mask(sb, moving);
                    if (ma != mb && (ma & mb) == ma) { lt[a][b] = 1; break; }
                }
                if (lt[a][b]) break;
            }
        }
    for (std::size_t k = 0; k < ns; ++k)
        for (std::size_t a = 0; a < ns; ++a)
            for (std::size_t b = 0; b < ns; ++b)
                if (lt[a][k] && lt[k][b]) lt[a][b] = 1;
    for (std::size_t a = 0; a < ns; ++a)
        for (std::size_t b = 0; b < ns; ++b)
            if (lt[a][b]) {
                if (p.strata[a].dimension >= p.strata[b].dimension)
                    throw integrity_error(
                        "assemble_partition: frontier violates dimension ordering");
                if (!intlin::group_contains(p.strata[a].isotropy, p.strata[b].isotropy))
                    throw integrity_error(
                        "assemble_partition: frontier violates isotropy containment");
                p.frontier.emplace_back(static_cast<int>(a), static_cast<int>(b));
            }

    // Dimension parity ledger.
    for (const auto& st : p.strata) {
        const bool even = st.dimension % 2 == 0;
        if (kind == Kind::symplectic_at_zero && !even)
            throw integrity_error("assemble_partition: odd-dimensional symplectic stratum");
        if (kind == Kind::contact_sphere && even)
            throw integrity_error("assemble_partition: even-dimensional contact stratum");
    }

    for (int idx : open_dense_stratum(p)) p.strata[idx].is_principal = true;
    return p;
}

std::vector<int> open_dense_stratum(const Partition& p) {
    if (p.strata.empty()) return {};
    std::vector<int> free_dummy;
    // Components of the support-inclusion graph over all feasible supports.
    struct Member { uint32_t mask; int stratum; };
    std::vector<int> moving;
    {
        std::vector<int> fc;
        moving = moving_coordinates(p.ambient, fc);
    }
    std::vector<Member> all;
    for (std::size_t i = 0; i < p.strata.size(); ++i)
        for (const auto& s : p.strata[i].supports)
            all.push_back({to_mask(s, moving), static_cast<int>(i)});
    UnionFind uf(all.size());
    for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = a + 1; b < all.size(); ++b) {
            uint32_t ma = all[a].mask, mb = all[b].mask;
            if ((ma & mb) == ma || (ma & mb) == mb) uf.unite(static_cast<int>(a),
                                                             static_cast<int>(b));
        }
    std::map<int, std::vector<int>> comps;
    for (std::size_t a = 0; a < all.size(); ++a)
        comps[uf.find(static_cast<int>(a))].push_back(static_cast<int>(a));

    std::vector<int> result;
    for (const auto& [root, members] : comps) {
        std::vector<char> in_comp(p.strata.size(), 0);
        for (int m : members) in_comp[all[m].stratum] = 1;
        // Candidate open strata of this component whose closure covers it.
        std::vector<int> open_covering;
        for (std::size_t i = 0; i < p.strata.size(); ++i) {
            if (!in_comp[i] || !p.strata[i].is_open) continue;
            bool covers = true;
            for (std::size_t j = 0; j < p.strata.size() && covers; ++j) {
                if (!in_comp[j] || j == i) continue;
                bool below = false;
                for (const auto& [lo, hi] : p.frontier)
                    if (lo == static_cast<int>(j) && hi == static_cast<int>(i)) below = true;
                if (!below) covers = false;
            }
            if (covers) open_covering.push_back(static_cast<int>(i));
        }
        if (open_covering.empty())
            throw integrity_error("open_dense_stratum: no open dense stratum in component");
        if (open_covering.size() > 1)
            throw integrity_error("open_dense_stratum: open dense stratum not unique");
        result.push_back(open_covering.front());
    }
    return result;
}

StratificationDescriptor cone_descriptor(const StratificationDescriptor& d) {
    StratificationDescriptor c;
    c.pieces.emplace_back("vertex", 0);
    for (const auto& [label, dim] : d.pieces) c.pieces.emplace_back(label + "*(0,1)", dim + 1);
    c.total = d.pieces.empty() ? 0 : d.total + 1;
    return c;
}

StratificationDescriptor product_descriptor(const StratificationDescriptor& d1,
                                            const StratificationDescriptor& d2) {
    StratificationDescriptor p;
    for (const auto& [l1, a] : d1.pieces)
        for (const auto& [l2, b] : d2.pieces) p.pieces.emplace_back(l1 + "x" + l2, a + b);
    p.total = d1.total + d2.total;
    return p;
}

Support maximal_feasible_support(const WeightSystem& ws) {
    std::vector<int> free_coords;
    std::vector<int> moving = moving_coordinates(ws, free_coords);
    // Feasible supports are union-closed, so coordinate j lies in the maximal
    // one iff some feasible support contains it, i.e. the exact LP
    // {A x = 0, x >= 0, x_j >= 1} over all moving coordinates is feasible.
    const IntMatrix A = ws.weights.select_columns(moving);
    Support cand = free_coords;
    for (std::size_t b = 0; b < moving.size(); ++b) {
        std::vector<int> lb(moving.size(), 0);
        lb[b] = 1;
        if (lp::kernel_point_with_lower_bounds(A, lb)) cand.push_back(moving[b]);
    }
    std::sort(cand.begin(), cand.end());
    return cand;
}

}  // namespace stratforge::strat
