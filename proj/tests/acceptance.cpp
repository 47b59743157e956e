// Acceptance suite: eight independent checks, one line of output each.
// Exit status = number of failed criteria.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "stratforge/serialize.hpp"

using namespace stratforge;
using intlin::Int;
using intlin::IntMatrix;
using strat::Kind;
using strat::Support;
using torus_rep::Point;
using torus_rep::WeightSystem;

namespace {

WeightSystem make_ws(std::vector<std::vector<long>> rows, std::vector<long> moduli = {},
                     std::vector<std::vector<long>> chars = {}) {
    const std::size_t k = rows.size();
    std::size_t n = rows.empty() ? 0 : rows[0].size();
    if (n == 0 && !chars.empty()) n = chars[0].size();
    IntMatrix w(k, n);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < n; ++j) w.at(i, j) = rows[i][j];
    IntMatrix c(moduli.size(), n);
    for (std::size_t i = 0; i < chars.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) c.at(i, j) = chars[i][j];
    std::vector<Int> m(moduli.begin(), moduli.end());
    return WeightSystem(k, m, w, c);
}

// The fixed 10-system corpus used by criteria 2-7.
std::vector<WeightSystem> corpus() {
    return {
        make_ws({{1, -1}}),
        make_ws({{1, 1, -1}}),
        make_ws({{2, -2, 1}}),
        make_ws({{1, 1, -1, -1}}),
        make_ws({{1, 0, -1}, {0, 1, -1}}),
        make_ws({{0, 0}}),
        make_ws({}, {2}, {{1, 1}}),
        make_ws({{2, -2}}),
        make_ws({{3, -1, -1}}),
        make_ws({{1, -1}}, {2}, {{1, 0}}),
    };
}

double urand(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

// ---------------------------------------------------------------------------
// Criterion 1: brute-force classifier for k = 1, n <= 3, entries in [-3,3].
//
// Completely independent path: points are projected onto the zero level by
// bisection along the magnitude flow z_j -> z_j e^{-a_j s} (the moment value
// is strictly decreasing in s whenever a nonzero weight is present), isotropy
// is read off numerically by testing rational rotations against the sampled
// point, and strata are clustered by (support, isotropy) plus inclusion.
// ---------------------------------------------------------------------------

struct OracleStratum {
    std::set<Support> supports;  // full supports (free coordinates included)
    std::string isotropy;
    int dimension = 0;
};

struct OraclePartition {
    std::vector<OracleStratum> strata;
    std::set<std::pair<int, int>> frontier;
};

bool project_to_zero(const std::vector<long>& a, std::vector<double>& x) {
    auto f = [&](double s) {
        double v = 0;
        for (std::size_t j = 0; j < a.size(); ++j)
            v += static_cast<double>(a[j]) * x[j] * std::exp(-2.0 * a[j] * s);
        return v;
    };
    if (std::abs(f(0.0)) < 1e-15) return true;
    double lo = 0, hi = 0;
    bool bracketed = false;
    for (double span = 1.0; span <= 64.0; span *= 2.0) {
        if (f(-span) > 0 && f(span) < 0) {
            lo = -span;
            hi = span;
            bracketed = true;
            break;
        }
    }
    if (!bracketed) return false;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0 ? lo : hi) = mid;
    }
    const double s = 0.5 * (lo + hi);
    for (std::size_t j = 0; j < a.size(); ++j) x[j] *= std::exp(-2.0 * a[j] * s);
    double v = 0;
    for (std::size_t j = 0; j < a.size(); ++j) v += static_cast<double>(a[j]) * x[j];
    return std::abs(v) < 1e-9;
}

// Isotropy of a sampled point with magnitudes x: count the rotations i/L that
// fix it; L = 60 covers every finite order reachable with |weights| <= 3.
std::string numeric_isotropy(const std::vector<long>& a, const std::vector<double>& x) {
    const int L = 60;
    int fixing = 0;
    for (int i = 0; i < L; ++i) {
        bool fixes = true;
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (x[j] <= 1e-12) continue;
            const double angle = 2.0 * std::numbers::pi * a[j] * i / static_cast<double>(L);
            if (std::abs(std::sin(angle)) > 1e-9 || std::cos(angle) < 0.5) {
                fixes = false;
                break;
            }
        }
        if (fixes) ++fixing;
    }
    if (fixing == L) return "T1";
    if (fixing == 1) return "1";
    return "Z/" + std::to_string(fixing);
}

OraclePartition oracle_classify(const std::vector<long>& a, std::size_t total_samples,
                                std::mt19937_64& g) {
    const std::size_t n = a.size();
    const std::size_t per_support = std::max<std::size_t>(total_samples >> n, 64);

    // (support, isotropy) classes of successfully projected samples
    std::map<Support, std::string> classes;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        Support S;
        for (std::size_t b = 0; b < n; ++b)
            if (mask & (std::size_t{1} << b)) S.push_back(static_cast<int>(b));
        std::size_t ok = 0;
        std::string iso;
        for (std::size_t t = 0; t < per_support; ++t) {
            std::vector<double> x(n, 0.0);
            for (int j : S) {
                const double re = urand(g) * 2 - 1, im = urand(g) * 2 - 1;
                x[j] = re * re + im * im + 1e-6;
            }
            std::vector<long> as(n, 0);
            for (int j : S) as[j] = a[j];
            if (!project_to_zero(as, x)) continue;
            // support must survive projection to count for S itself
            bool intact = true;
            for (int j : S) intact = intact && x[j] > 1e-12;
            if (!intact) continue;
            ++ok;
            if (iso.empty()) iso = numeric_isotropy(a, x);
        }
        if (S.empty()) {
            std::vector<double> x(n, 0.0);
            classes[S] = numeric_isotropy(a, x);
        } else if (ok * 2 > per_support) {
            classes[S] = iso;
        }
    }

    // cluster: same isotropy + connected through support inclusion
    std::vector<Support> sup;
    for (const auto& [s, iso] : classes) sup.push_back(s);
    std::vector<int> parent(sup.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < sup.size(); ++i)
        for (std::size_t j = 0; j < sup.size(); ++j) {
            if (classes[sup[i]] != classes[sup[j]]) continue;
            if (std::includes(sup[j].begin(), sup[j].end(), sup[i].begin(), sup[i].end()) &&
                sup[i].size() < sup[j].size())
                parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
        }

    OraclePartition p;
    std::map<int, int> root_to_idx;
    std::vector<int> member_root(sup.size());
    for (std::size_t i = 0; i < sup.size(); ++i) {
        const int r = find(static_cast<int>(i));
        member_root[i] = r;
        if (!root_to_idx.count(r)) {
            root_to_idx[r] = static_cast<int>(p.strata.size());
            p.strata.push_back({});
            p.strata.back().isotropy = classes[sup[i]];
        }
        auto& st = p.strata[root_to_idx[r]];
        st.supports.insert(sup[i]);
        int nonzero = 0;
        for (int j : sup[i])
            if (a[j] != 0) nonzero = 1;
        st.dimension = std::max(st.dimension,
                                2 * (static_cast<int>(sup[i].size()) - nonzero));
    }
    // frontier: member-support inclusion, transitively closed
    for (std::size_t i = 0; i < sup.size(); ++i)
        for (std::size_t j = 0; j < sup.size(); ++j) {
            const int si = root_to_idx[member_root[i]], sj = root_to_idx[member_root[j]];
            if (si == sj) continue;
            if (std::includes(sup[j].begin(), sup[j].end(), sup[i].begin(), sup[i].end()))
                p.frontier.insert({si, sj});
        }
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto [a1, b1] : p.frontier)
            for (auto [a2, b2] : p.frontier)
                if (b1 == a2 && !p.frontier.count({a1, b2})) {
                    p.frontier.insert({a1, b2});
                    changed = true;
                }
    }
    return p;
}

std::string engine_isotropy_tag(const intlin::GroupDescriptor& g) {
    if (g.torus_rank == 1) return "T1";
    if (g.invariant_factors.empty()) return "1";
    std::string s = "Z/" + g.invariant_factors[0].get_str();
    for (std::size_t i = 1; i < g.invariant_factors.size(); ++i)
        s += "xZ/" + g.invariant_factors[i].get_str();
    return s;
}

// Engine partition in the oracle's normal form (full supports incl. free coords).
OraclePartition engine_normal_form(const strat::Partition& p) {
    OraclePartition out;
    const auto& free = p.free_coords;
    for (const auto& st : p.strata) {
        OracleStratum os;
        os.isotropy = engine_isotropy_tag(st.isotropy);
        os.dimension = st.dimension;
        for (const auto& m : st.supports)
            for (std::size_t fm = 0; fm < (std::size_t{1} << free.size()); ++fm) {
                Support full = m;
                for (std::size_t b = 0; b < free.size(); ++b)
                    if (fm & (std::size_t{1} << b)) full.push_back(free[b]);
                std::sort(full.begin(), full.end());
                os.supports.insert(full);
            }
        out.strata.push_back(std::move(os));
    }
    for (const auto& [lo, hi] : p.frontier) out.frontier.insert({lo, hi});
    return out;
}

bool same_partition(OraclePartition a, OraclePartition b) {
    if (a.strata.size() != b.strata.size()) return false;
    // sort strata by member supports; remap frontiers accordingly
    auto order = [](const OraclePartition& p) {
        std::vector<int> idx(p.strata.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int x, int y) {
            return p.strata[x].supports < p.strata[y].supports;
        });
        return idx;
    };
    auto ia = order(a), ib = order(b);
    std::vector<int> ra(ia.size()), rb(ib.size());
    for (std::size_t i = 0; i < ia.size(); ++i) ra[ia[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < ib.size(); ++i) rb[ib[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < ia.size(); ++i) {
        const auto& sa = a.strata[ia[i]];
        const auto& sb = b.strata[ib[i]];
        if (sa.supports != sb.supports || sa.isotropy != sb.isotropy ||
            sa.dimension != sb.dimension)
            return false;
    }
    std::set<std::pair<int, int>> fa, fb;
    for (auto [lo, hi] : a.frontier) fa.insert({ra[lo], ra[hi]});
    for (auto [lo, hi] : b.frontier) fb.insert({rb[lo], rb[hi]});
    return fa == fb;
}

bool criterion1() {
    std::mt19937_64 g(20240817);
    for (std::size_t n = 1; n <= 3; ++n) {
        std::vector<long> a(n, -3);
        while (true) {
            auto oracle = oracle_classify(a, 100000, g);
            auto ws = make_ws({a});
            auto engine = engine_normal_form(
                strat::assemble_partition(ws, Kind::symplectic_at_zero));
            if (!same_partition(oracle, engine)) {
                std::fprintf(stderr, "criterion 1 mismatch at weights (");
                for (long v : a) std::fprintf(stderr, "%ld,", v);
                std::fprintf(stderr, ")\n");
                return false;
            }
            std::size_t j = 0;
            while (j < n && a[j] == 3) a[j++] = -3;
            if (j == n) break;
            ++a[j];
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 2: sampled local dimension equals the predicted stratum dimension
// on the corpus; parity of dimensions by kind.
// ---------------------------------------------------------------------------

bool criterion2() {
    uint64_t seed = 424242;
    for (const auto& ws : corpus()) {
        auto p = strat::assemble_partition(ws, Kind::symplectic_at_zero);
        for (const auto& st : p.strata) {
            if (st.dimension % 2 != 0) return false;
            Support rep = st.supports.front();
            for (const auto& s : st.supports)
                if (s.size() > rep.size()) rep = s;
            for (int j : p.free_coords) rep.push_back(j);
            std::sort(rep.begin(), rep.end());
            int est = 0;
            if (!rep.empty()) {
                auto center = sampler::representative_point(ws, rep, false);
                auto local = sampler::sample_near(ws, rep, center, sampler::kLocalRadius,
                                                  400, ++seed, false);
                est = sampler::estimate_local_dimension(ws, local, center,
                                                        sampler::kLocalRadius);
            }
            if (est != st.dimension) {
                std::fprintf(stderr, "criterion 2: estimated %d, predicted %d\n", est,
                             st.dimension);
                return false;
            }
        }
        auto pc = strat::assemble_partition(ws, Kind::contact_sphere);
        for (const auto& st : pc.strata)
            if (st.dimension % 2 != 1) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 3: the dimension ledger at every link-tree node, recomputed here
// through the descriptor algebra (disk x cone(link partition)).
// ---------------------------------------------------------------------------

bool check_node_ledger(const strat::Partition& p, const local_model::LinkNode& node) {
    std::multiset<int> neighborhood;
    Support rep;
    for (const auto& s : p.strata[node.stratum].supports)
        if (s.size() >= rep.size()) rep = s;
    for (const auto& st : p.strata)
        for (const auto& s : st.supports)
            if (std::includes(s.begin(), s.end(), rep.begin(), rep.end())) {
                neighborhood.insert(st.dimension);
                break;
            }

    strat::StratificationDescriptor disk;
    disk.pieces = {{"disk", node.fixed_dim}};
    disk.total = node.fixed_dim;
    strat::StratificationDescriptor link;
    if (node.link_partition) link = strat::StratificationDescriptor::of(*node.link_partition);
    auto model = node.link_partition
                     ? strat::product_descriptor(disk, strat::cone_descriptor(link))
                     : disk;
    if (node.link_partition &&
        strat::cone_descriptor(link).total != link.total + 1)
        return false;
    std::multiset<int> model_dims;
    for (const auto& [label, d] : model.pieces) model_dims.insert(d);
    if (model_dims != neighborhood) return false;
    for (const auto& child : node.children)
        if (!check_node_ledger(*node.link_partition, child)) return false;
    return true;
}

bool criterion3() {
    for (const auto& ws : corpus()) {
        auto tree = local_model::link_tree(ws, Kind::symplectic_at_zero);
        for (const auto& node : tree.nodes)
            if (!check_node_ledger(tree.partition, node)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 4: connectivity of every link in the corpus, plus the constructed
// disconnection diagnostic.
// ---------------------------------------------------------------------------

bool check_links_connected(const local_model::LinkNode& node, uint64_t& seed) {
    if (!node.link) return true;
    auto smax = strat::maximal_feasible_support(*node.link);
    if (!smax.empty()) {
        auto batch = sampler::sample_zero_level(*node.link, smax, 2000, ++seed, true);
        if (sampler::quotient_connectivity(*node.link, batch) != 1) return false;
    }
    for (const auto& child : node.children)
        if (!check_links_connected(child, seed)) return false;
    return true;
}

bool criterion4() {
    uint64_t seed = 777;
    for (const auto& ws : corpus()) {
        auto tree = local_model::link_tree(ws, Kind::symplectic_at_zero);
        for (const auto& node : tree.nodes)
            if (!check_links_connected(node, seed)) return false;
    }
    // detector validity: two decoupled blocks, disjoint supports only
    auto ws = make_ws({{1, -1, 0, 0}, {0, 0, 1, -1}});
    auto a = sampler::sample_zero_level(ws, {0, 1}, 300, 1, true);
    auto b = sampler::sample_zero_level(ws, {2, 3}, 300, 2, true);
    a.points.insert(a.points.end(), b.points.begin(), b.points.end());
    return sampler::quotient_connectivity(ws, a) >= 2;
}

// ---------------------------------------------------------------------------
// Criterion 5: unique open dense stratum and its sampled density.
// ---------------------------------------------------------------------------

bool criterion5() {
    uint64_t seed = 90210;
    for (const auto& ws : corpus()) {
        auto p = strat::assemble_partition(ws, Kind::symplectic_at_zero);
        auto open = strat::open_dense_stratum(p);  // throws on non-uniqueness
        if (open.empty()) return false;
        if (sampler::density_fraction(ws, p, 100000, ++seed) < 0.99) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 6: moment-map identities.
// ---------------------------------------------------------------------------

bool criterion6() {
    std::mt19937_64 g(6);
    for (const auto& ws : corpus()) {
        for (int it = 0; it < 10000; ++it) {
            Point z;
            z.coords.resize(ws.n());
            for (auto& c : z.coords) c = {urand(g) * 2 - 1, urand(g) * 2 - 1};
            const double lam = 1.5 * urand(g);
            auto phi = torus_rep::moment_map(ws, z);
            Point lz = z;
            for (auto& c : lz.coords) c *= lam;
            auto phil = torus_rep::moment_map(ws, lz);
            const double n2 = z.norm() * z.norm();
            for (std::size_t l = 0; l < phi.size(); ++l)
                if (std::abs(phil[l] - lam * lam * phi[l]) > 1e-9 * (1 + n2)) return false;

            const double t = urand(g) * 4 - 2;
            auto psi = torus_rep::symplectization_moment(phi, t);
            for (std::size_t l = 0; l < phi.size(); ++l) {
                const double expected = -std::exp(t) * phi[l];
                if (std::abs(psi[l] - expected) > 1e-12 * (1 + std::abs(expected)))
                    return false;
            }

            Point zc = z;
            zc.t = t;
            auto psic = torus_rep::contactization_moment(ws, zc);
            for (std::size_t l = 0; l < phi.size(); ++l)
                if (std::abs(psic[l] - phi[l]) > 1e-12 * (1 + std::abs(phi[l])))
                    return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 7: the model moment vanishes exactly on eta = 0, Phi_W(w) = 0.
// ---------------------------------------------------------------------------

bool criterion7() {
    std::mt19937_64 g(7);
    for (const auto& ws : corpus()) {
        auto p = strat::assemble_partition(ws, Kind::symplectic_at_zero);
        for (const auto& st : p.strata) {
            Support rep = st.supports.front();
            for (const auto& s : st.supports)
                if (s.size() > rep.size()) rep = s;
            for (int j : p.free_coords) rep.push_back(j);
            std::sort(rep.begin(), rep.end());
            auto slice = local_model::slice_representation(ws, rep);
            const std::size_t k = ws.torus_rank;
            const std::size_t nw = slice.moving_coords.size();

            const int iters = 10000 / std::max<int>(1, static_cast<int>(p.strata.size()));
            for (int it = 0; it < iters; ++it) {
                // eta in the annihilator of Lie(H): the column span of A_rep
                std::vector<double> eta(k, 0.0);
                const bool want_eta = it % 2 == 0;
                if (want_eta && !rep.empty()) {
                    for (int j : rep) {
                        const double c = urand(g) * 2 - 1;
                        for (std::size_t l = 0; l < k; ++l)
                            eta[l] += c * ws.weights.at(l, j).get_d();
                    }
                }
                double eta_norm = 0;
                for (double e : eta) eta_norm += e * e;

                Point w;
                w.coords.resize(nw);
                const bool want_w_zero = it % 3 == 0;
                if (!want_w_zero)
                    for (auto& c : w.coords) c = {urand(g) * 2 - 1, urand(g) * 2 - 1};
                auto phiw = torus_rep::moment_map(slice.weight_system, w);
                double phi_norm = 0;
                for (double v : phiw) phi_norm += v * v;

                auto out = local_model::model_moment(slice, eta, w);
                double out_norm = 0;
                for (double v : out) out_norm += v * v;

                const bool zero_inputs = eta_norm < 1e-20 && phi_norm < 1e-20;
                if (zero_inputs && out_norm > 1e-18) return false;
                if (!zero_inputs && out_norm < 1e-14 * (eta_norm + phi_norm)) return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 8: exactness of SNF at scale, byte-identical reports, lossless
// round trips.
// ---------------------------------------------------------------------------

bool criterion8() {
    std::mt19937_64 g(8);
    for (int it = 0; it < 1000; ++it) {
        const std::size_t r = 1 + g() % 8, c = 1 + g() % 8;
        IntMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                m.at(i, j) = static_cast<long>(g() % 101) - 50;
        auto snf = intlin::smith_normal_form(m);
        if (!(snf.U * m * snf.V == snf.D)) return false;
        if (intlin::determinant(snf.U) * intlin::determinant(snf.U) != 1) return false;
        if (intlin::determinant(snf.V) * intlin::determinant(snf.V) != 1) return false;
        Int prev = 0;
        for (std::size_t i = 0; i < std::min(r, c); ++i) {
            const Int& d = snf.D.at(i, i);
            if (d < 0) return false;
            if (prev != 0 && d != 0 && d % prev != 0) return false;
            if (prev == 0 && i > 0 && d != 0) return false;
            prev = d;
        }
    }

    auto ws = make_ws({{2, -2, 1}});
    auto tree = local_model::link_tree(ws, Kind::symplectic_at_zero);
    auto r1 = sampler::verify_ledgers(ws, tree, 20000, 555);
    auto r2 = sampler::verify_ledgers(ws, tree, 20000, 555);
    if (serialize::dump(serialize::to_json(r1)) != serialize::dump(serialize::to_json(r2)))
        return false;

    for (const auto& sys : corpus()) {
        if (!(serialize::weight_system_from_json(serialize::to_json(sys)) == sys))
            return false;
        auto p = strat::assemble_partition(sys, Kind::symplectic_at_zero);
        auto pj = serialize::to_json(p);
        if (serialize::to_json(serialize::partition_from_json(pj)) != pj) return false;
        auto t = local_model::link_tree(sys, Kind::symplectic_at_zero);
        auto tj = serialize::to_json(t);
        if (serialize::to_json(serialize::link_tree_from_json(tj)) != tj) return false;
    }
    auto rj = serialize::to_json(r1);
    return serialize::to_json(serialize::report_from_json(rj)) == rj;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        bool (*run)();
    };
    const Criterion criteria[] = {
        {"oracle equivalence, k=1 corpus", criterion1},
        {"sampled dimension = predicted dimension; parity", criterion2},
        {"dimension ledger at every link-tree node", criterion3},
        {"link connectivity; disconnection detector", criterion4},
        {"unique open dense stratum; density >= 0.99", criterion5},
        {"moment-map identities", criterion6},
        {"model zero-level identity", criterion7},
        {"exactness and determinism", criterion8},
    };
    int failures = 0;
    for (std::size_t i = 0; i < std::size(criteria); ++i) {
        bool ok = false;
        std::string note;
        try {
            ok = criteria[i].run();
        } catch (const std::exception& e) {
            note = std::string(" (") + e.what() + ")";
        }
        std::printf("criterion %zu (%s): %s%s\n", i + 1, criteria[i].name,
                    ok ? "PASS" : "FAIL", note.c_str());
        if (!ok) ++failures;
    }
    return failures;
}
