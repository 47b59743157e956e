#include "stratforge/sampler.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stratforge::sampler {

using intlin::Int;
using intlin::IntMatrix;
using intlin::Rat;

double Rng::gauss() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

Rng Rng::derive(uint64_t stream) const {
    Rng copy = *this;
    // Mix the stream index through splitmix64 so derived streams decorrelate.
    uint64_t z = stream + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    uint64_t base = const_cast<Rng&>(copy).u64();
    return Rng(base ^ (z ^ (z >> 31)));
}

namespace {

// Orthonormal basis (columns) of the magnitude directions: ker(A_S), cut by
// {sum x = 0} on the sphere where the total is normalized away.
Eigen::MatrixXd polytope_directions(const IntMatrix& A_S, bool sphere) {
    const std::size_t s = A_S.cols();
    IntMatrix M = A_S;
    if (sphere) {
        IntMatrix ones(1, s);
        for (std::size_t j = 0; j < s; ++j) ones.at(0, j) = 1;
        M = A_S.stack(ones);
    }
    IntMatrix K = intlin::kernel_basis(M);
    Eigen::MatrixXd B(s, K.cols());
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < K.cols(); ++j) B(i, j) = K.at(i, j).get_d();
    if (K.cols() == 0) return Eigen::MatrixXd(s, 0);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(s, K.cols());
    return Q;
}

// One hit-and-run step inside {x >= 0, sum x <= cap} along the affine
// directions in Q.  The cap bounds the scaling ray of the magnitude cone off
// the sphere; on the sphere the directions sum to zero and it is inert.
void hit_and_run_step(Eigen::VectorXd& x, const Eigen::MatrixXd& Q, double cap, Rng& rng) {
    if (Q.cols() == 0) return;
    Eigen::VectorXd d(Q.cols());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = rng.gauss();
    if (d.norm() == 0) return;
    Eigen::VectorXd dir = Q * d.normalized();
    double tlo = -1e300, thi = 1e300;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        if (dir(j) > 1e-14)
            tlo = std::max(tlo, -x(j) / dir(j));
        else if (dir(j) < -1e-14)
            thi = std::min(thi, -x(j) / dir(j));
    }
    const double dsum = dir.sum();
    const double slack = cap - x.sum();
    if (dsum > 1e-14)
        thi = std::min(thi, slack / dsum);
    else if (dsum < -1e-14)
        tlo = std::max(tlo, slack / dsum);
    if (tlo >= thi) return;
    x += rng.uniform(tlo, thi) * dir;
    for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = std::max(x(j), 0.0);
}

Eigen::VectorXd lp_interior_point(const IntMatrix& A_S) {
    auto x0 = lp::positive_kernel_point(A_S);
    if (!x0) throw input_error("sampler: support is not zero-feasible");
    Eigen::VectorXd x(x0->size());
    for (std::size_t j = 0; j < x0->size(); ++j) x(j) = (*x0)[j].get_d();
    return x;
}

Point assemble_point(const WeightSystem& ws, const Support& S, const Eigen::VectorXd& mags,
                     const std::vector<double>& phases, bool sphere) {
    Point z;
    z.coords.assign(ws.n(), {0.0, 0.0});
    double total = 0;
    for (Eigen::Index j = 0; j < mags.size(); ++j) total += mags(j);
    const double scale = sphere && total > 0 ? 1.0 / total : 1.0;
    for (std::size_t m = 0; m < S.size(); ++m)
        z.coords[S[m]] = std::polar(std::sqrt(std::max(mags(m) * scale, 0.0)),
                                    2.0 * std::numbers::pi * phases[m]);
    return z;
}

void check_level(const WeightSystem& ws, const Point& z) {
    auto phi = torus_rep::moment_map(ws, z);
    double norm = 0;
    for (double v : phi) norm += v * v;
    const double n2 = z.norm();
    if (std::sqrt(norm) > kLevelTol * (1.0 + n2 * n2))
        throw integrity_error("sampler: sampled point violates the zero level");
}

Support point_support(const Point& z, double tol = 1e-12) {
    Support s;
    for (std::size_t j = 0; j < z.coords.size(); ++j)
        if (std::abs(z.coords[j]) > tol) s.push_back(static_cast<int>(j));
    return s;
}

}  // namespace

Point representative_point(const WeightSystem& ws, const Support& S, bool sphere) {
    if (S.empty()) {
        if (sphere) throw input_error("representative_point: empty support off the sphere");
        Point z;
        z.coords.assign(ws.n(), {0.0, 0.0});
        return z;
    }
    Eigen::VectorXd x = lp_interior_point(ws.weights.select_columns(S));
    return assemble_point(ws, S, x, std::vector<double>(S.size(), 0.0), sphere);
}

SampleBatch sample_zero_level(const WeightSystem& ws, const Support& S, std::size_t count,
                              uint64_t seed, bool sphere) {
    SampleBatch batch;
    batch.seed = seed;
    batch.sphere = sphere;
    if (S.empty()) {
        if (sphere) throw input_error("sample_zero_level: empty support off the sphere");
        Point z;
        z.coords.assign(ws.n(), {0.0, 0.0});
        batch.points.push_back(z);
        batch.support_histogram[{}] = 1;
        return batch;
    }
    const IntMatrix A_S = ws.weights.select_columns(S);
    Eigen::VectorXd x = lp_interior_point(A_S);
    Eigen::MatrixXd Q = polytope_directions(A_S, sphere);
    const double cap = 4.0 * x.sum();
    Rng rng(seed);
    for (int burn = 0; burn < 64; ++burn) hit_and_run_step(x, Q, cap, rng);
    for (std::size_t i = 0; i < count; ++i) {
        for (int step = 0; step < 16; ++step) hit_and_run_step(x, Q, cap, rng);
        std::vector<double> phases(S.size());
        for (auto& p : phases) p = rng.uniform();
        Point z = assemble_point(ws, S, x, phases, sphere);
        check_level(ws, z);
        batch.support_histogram[point_support(z)]++;
        batch.points.push_back(std::move(z));
    }
    return batch;
}

SampleBatch sample_near(const WeightSystem& ws, const Support& S, const Point& center,
                        double radius, std::size_t count, uint64_t seed, bool sphere) {
    if (S.empty()) throw input_error("sample_near: empty support has no local cloud");
    const IntMatrix A_S = ws.weights.select_columns(S);
    Eigen::MatrixXd Q = polytope_directions(A_S, sphere);
    Eigen::VectorXd xc(S.size());
    std::vector<double> pc(S.size());
    for (std::size_t m = 0; m < S.size(); ++m) {
        xc(m) = std::norm(center.coords[S[m]]);
        pc[m] = std::arg(center.coords[S[m]]) / (2.0 * std::numbers::pi);
    }
    Rng rng(seed);
    SampleBatch batch;
    batch.seed = seed;
    batch.sphere = sphere;
    for (std::size_t i = 0; i < count; ++i) {
        Eigen::VectorXd x = xc;
        if (Q.cols() > 0) {
            Eigen::VectorXd d(Q.cols());
            for (Eigen::Index j = 0; j < d.size(); ++j) d(j) = rng.gauss();
            Eigen::VectorXd dir = Q * d;
            double t = radius;
            // stay strictly inside the positive orthant
            for (Eigen::Index j = 0; j < x.size(); ++j)
                if (dir(j) < 0) t = std::min(t, -0.5 * x(j) / dir(j));
            x += t * dir;
        }
        std::vector<double> phases(S.size());
        for (std::size_t m = 0; m < S.size(); ++m)
            phases[m] = pc[m] + radius * rng.uniform(-1.0, 1.0);
        Point z = assemble_point(ws, S, x, phases, sphere);
        check_level(ws, z);
        batch.support_histogram[point_support(z)]++;
        batch.points.push_back(std::move(z));
    }
    return batch;
}

int estimate_local_dimension(const WeightSystem& ws, const SampleBatch& batch,
                             const Point& center, double radius) {
    // Collect points within the radius (relative to the center scale).
    const double scale = std::max(center.norm(), 1.0);
    std::vector<const Point*> local;
    for (const auto& z : batch.points) {
        double d2 = 0;
        for (std::size_t j = 0; j < z.coords.size(); ++j)
            d2 += std::norm(z.coords[j] - center.coords[j]);
        if (std::sqrt(d2) <= radius * scale * 8.0) local.push_back(&z);
    }
    if (local.size() < 50)
        throw input_error("estimate_local_dimension: fewer than 50 samples in radius");

    const std::size_t n = ws.n();
    Eigen::MatrixXd U(local.size(), 2 * n);
    for (std::size_t i = 0; i < local.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto diff = local[i]->coords[j] - center.coords[j];
            U(i, 2 * j) = diff.real();
            U(i, 2 * j + 1) = diff.imag();
        }

    // Project out the group-orbit directions at the center.
    std::vector<Eigen::VectorXd> orbit;
    for (std::size_t l = 0; l < ws.torus_rank; ++l) {
        Eigen::VectorXd v(2 * n);
        for (std::size_t j = 0; j < n; ++j) {
            const auto w = std::complex<double>(0, 1) * ws.weights.at(l, j).get_d() *
                           center.coords[j];
            v(2 * j) = w.real();
            v(2 * j + 1) = w.imag();
        }
        for (const auto& prev : orbit) v -= prev.dot(v) * prev;
        if (v.norm() > 1e-9) orbit.push_back(v.normalized());
    }
    for (const auto& v : orbit) U -= (U * v) * v.transpose();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(U);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0) return 0;
    int dim = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) >= kThetaDim * sv(0)) ++dim;
    return dim;
}

namespace {

// Character phase table over a finite grid of the group.
struct GroupGrid {
    std::vector<std::vector<std::complex<double>>> phase;  // [element][coord]
};

GroupGrid make_group_grid(const WeightSystem& ws) {
    const std::size_t k = ws.torus_rank;
    std::size_t per_dim = k <= 1 ? 256 : (k == 2 ? 48 : (k == 3 ? 16 : 8));
    if (k == 0) per_dim = 1;
    std::size_t torus_total = 1;
    for (std::size_t i = 0; i < k; ++i) torus_total *= per_dim;
    std::size_t finite_total = 1;
    for (const Int& m : ws.moduli) finite_total *= m.get_ui();
    if (torus_total * finite_total > 400000)
        throw input_error("quotient metric grid too large for this group");

    GroupGrid grid;
    std::vector<std::size_t> idx(k, 0);
    for (std::size_t t = 0; t < torus_total; ++t) {
        std::vector<double> torus(k);
        std::size_t rem = t;
        for (std::size_t i = 0; i < k; ++i) {
            torus[i] = static_cast<double>(rem % per_dim) / static_cast<double>(per_dim);
            rem /= per_dim;
        }
        std::vector<std::size_t> fidx(ws.moduli.size(), 0);
        for (std::size_t f = 0; f < finite_total; ++f) {
            std::size_t frem = f;
            std::vector<long> fin(ws.moduli.size());
            for (std::size_t i = 0; i < ws.moduli.size(); ++i) {
                fin[i] = static_cast<long>(frem % ws.moduli[i].get_ui());
                frem /= ws.moduli[i].get_ui();
            }
            std::vector<std::complex<double>> row(ws.n());
            for (std::size_t j = 0; j < ws.n(); ++j) {
                double angle = 0;
                for (std::size_t i = 0; i < k; ++i)
                    angle += ws.weights.at(i, j).get_d() * torus[i];
                for (std::size_t i = 0; i < ws.moduli.size(); ++i)
                    angle += ws.finite_chars.at(i, j).get_d() * static_cast<double>(fin[i]) /
                             ws.moduli[i].get_d();
                row[j] = std::polar(1.0, 2.0 * std::numbers::pi * angle);
            }
            grid.phase.push_back(std::move(row));
        }
    }
    return grid;
}

double quotient_distance(const GroupGrid& grid, const Point& a, const Point& b) {
    const std::size_t n = a.coords.size();
    double na = 0, nb = 0;
    for (std::size_t j = 0; j < n; ++j) {
        na += std::norm(a.coords[j]);
        nb += std::norm(b.coords[j]);
    }
    std::vector<std::complex<double>> c(n);
    for (std::size_t j = 0; j < n; ++j) c[j] = std::conj(a.coords[j]) * b.coords[j];
    double best = -1e300;
    for (const auto& row : grid.phase) {
        double dot = 0;
        for (std::size_t j = 0; j < n; ++j)
            dot += c[j].real() * row[j].real() - c[j].imag() * row[j].imag();
        best = std::max(best, dot);
    }
    return std::sqrt(std::max(na + nb - 2.0 * best, 0.0));
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

}  // namespace

int quotient_connectivity(const WeightSystem& ws, const SampleBatch& batch, double eps,
                          double eps_scale) {
    const std::size_t m = batch.points.size();
    if (m == 0) throw input_error("quotient_connectivity: empty batch");
    if (m == 1) return 1;
    GroupGrid grid = make_group_grid(ws);

    std::vector<double> dist(m * m, 0.0);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) {
            double d = quotient_distance(grid, batch.points[a], batch.points[b]);
            dist[a * m + b] = dist[b * m + a] = d;
        }

    if (eps <= 0) {
        // Auto-scale from the largest nearest-neighbor distance: on a connected
        // manifold this tracks the largest sampling gap (median NN under-scales
        // by a log(n) factor on one-dimensional links), while for genuinely
        // separated clusters the inter-cluster distance still dwarfs it.
        std::vector<double> nn(m, 1e300);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                if (a != b) nn[a] = std::min(nn[a], dist[a * m + b]);
        eps = eps_scale * *std::max_element(nn.begin(), nn.end());
    }

    UnionFind uf(m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            if (dist[a * m + b] <= eps) uf.unite(static_cast<int>(a), static_cast<int>(b));
    std::vector<char> root(m, 0);
    int comps = 0;
    for (std::size_t a = 0; a < m; ++a)
        if (!root[uf.find(static_cast<int>(a))]) {
            root[uf.find(static_cast<int>(a))] = 1;
            ++comps;
        }
    return comps;
}

double density_fraction(const WeightSystem& ws, const Partition& p, std::size_t count,
                        uint64_t seed) {
    Support smax = strat::maximal_feasible_support(ws);
    if (smax.empty()) return 1.0;  // only the origin: vacuously dense
    SampleBatch batch = sample_zero_level(ws, smax, count, seed, false);
    std::size_t principal = 0;
    for (const auto& z : batch.points) {
        Support sup = point_support(z);
        Support moving;
        for (int j : sup)
            if (std::find(p.free_coords.begin(), p.free_coords.end(), j) ==
                p.free_coords.end())
                moving.push_back(j);
        int idx = p.stratum_of(moving);
        if (idx >= 0 && p.strata[idx].is_principal) ++principal;
    }
    return static_cast<double>(principal) / static_cast<double>(batch.points.size());
}

namespace {

struct Budget {
    std::size_t remaining;
    bool exhausted = false;
    // Grants up to `want` points; a check that cannot get its minimum viable
    // count is skipped and the report flagged incomplete.
    std::size_t take(std::size_t want, std::size_t min_needed) {
        std::size_t got = std::min(want, remaining);
        if (got < min_needed) {
            exhausted = true;
            return 0;
        }
        remaining -= got;
        return got;
    }
};

void check_links_recursive(const local_model::LinkNode& node, const std::string& path,
                           VerificationReport& report, Budget& budget, Rng& rng,
                           double eps_scale) {
    if (!node.link) return;
    const WeightSystem& link_ws = *node.link;
    Support link_smax = strat::maximal_feasible_support(link_ws);
    if (!link_smax.empty()) {
        std::size_t want = budget.take(400, 100);
        if (want >= 50) {
            SampleBatch batch =
                sample_zero_level(link_ws, link_smax, want, rng.derive(1).u64(), true);
            LinkCheck lc;
            lc.path = path;
            lc.samples = static_cast<int>(batch.points.size());
            lc.components = quotient_connectivity(link_ws, batch, 0.0, eps_scale);
            report.links.push_back(lc);
        }
    }
    for (const auto& child : node.children)
        check_links_recursive(child, path + "/s" + std::to_string(child.stratum) + "/link",
                              report, budget, rng, eps_scale);
}

}  // namespace

VerificationReport verify_ledgers(const WeightSystem& ws, const LinkTree& tree,
                                  std::size_t budget_total, uint64_t seed,
                                  double eps_scale) {
    VerificationReport report;
    report.seed = seed;
    report.eps_scale = eps_scale;
    report.budget = budget_total;
    Budget budget{budget_total};
    Rng rng(seed);
    const Partition& p = tree.partition;

    // Moment-map residuals on random points.
    {
        std::size_t want = budget.take(2000, 200);
        Rng r = rng.derive(11);
        double hom = 0, equi = 0;
        for (std::size_t i = 0; i < want; ++i) {
            Point z;
            z.coords.resize(ws.n());
            for (auto& c : z.coords) c = {r.gauss(), r.gauss()};
            const double lambda = r.uniform(0.0, 1.5);
            auto phi = torus_rep::moment_map(ws, z);
            Point lz = z;
            for (auto& c : lz.coords) c *= lambda;
            auto phil = torus_rep::moment_map(ws, lz);
            const double n2 = z.norm() * z.norm();
            for (std::size_t l = 0; l < phi.size(); ++l)
                hom = std::max(hom,
                               std::abs(phil[l] - lambda * lambda * phi[l]) / (1.0 + n2));
            torus_rep::GroupElement g;
            g.torus.resize(ws.torus_rank);
            for (auto& t : g.torus) t = r.uniform();
            g.finite.resize(ws.moduli.size());
            for (std::size_t f = 0; f < g.finite.size(); ++f)
                g.finite[f] =
                    static_cast<long>(r.u64() % ws.moduli[f].get_ui());
            auto phig = torus_rep::moment_map(ws, torus_rep::act(ws, g, z));
            for (std::size_t l = 0; l < phi.size(); ++l)
                equi = std::max(equi, std::abs(phig[l] - phi[l]) / (1.0 + n2));
        }
        report.homogeneity_residual = hom;
        report.equivariance_residual = equi;
    }

    // Per-stratum dimension estimates and sampled neighborhood ledgers.
    for (std::size_t i = 0; i < p.strata.size(); ++i) {
        const auto& st = p.strata[i];
        StratumCheck sc;
        sc.stratum = static_cast<int>(i);
        sc.predicted_dim = st.dimension;

        Support rep = st.supports.front();
        for (const auto& s : st.supports)
            if (s.size() > rep.size()) rep = s;
        Support rep_ambient = rep;
        for (int j : p.free_coords) rep_ambient.push_back(j);
        std::sort(rep_ambient.begin(), rep_ambient.end());

        const bool sphere = p.kind == Kind::contact_sphere;
        if (rep_ambient.empty()) {
            // Origin stratum of a fixed-point-free symplectic system: a point.
            sc.estimated_dim = 0;
        } else {
            std::size_t want = budget.take(300, 60);
            if (want >= 50) {
                Point center = representative_point(ws, rep_ambient, sphere);
                SampleBatch local = sample_near(ws, rep_ambient, center, kLocalRadius, want,
                                                rng.derive(100 + i).u64(), sphere);
                sc.estimated_dim = estimate_local_dimension(ws, local, center, kLocalRadius);
            }
        }

        // Predicted neighborhood dims from the local model.
        const auto& node = tree.nodes[i];
        sc.predicted_neighbor_dims.push_back(node.fixed_dim);
        if (node.link_partition)
            for (const auto& lst : node.link_partition->strata)
                sc.predicted_neighbor_dims.push_back(node.fixed_dim + 1 + lst.dimension);
        std::sort(sc.predicted_neighbor_dims.begin(), sc.predicted_neighbor_dims.end());

        // Sampled neighborhood: for every stratum owning a support containing
        // the representative, realize a nearby zero-level point and classify it.
        for (std::size_t t = 0; t < p.strata.size(); ++t) {
            for (const auto& sup : p.strata[t].supports) {
                if (!std::includes(sup.begin(), sup.end(), rep.begin(), rep.end())) continue;
                Support amb = sup;
                for (int j : p.free_coords) amb.push_back(j);
                std::sort(amb.begin(), amb.end());
                Point zc = representative_point(ws, amb, false);
                Point zr = representative_point(ws, rep_ambient, false);
                Point blend;
                blend.coords.resize(ws.n());
                const double delta = 1e-5;
                for (std::size_t j = 0; j < ws.n(); ++j) {
                    double mag = std::norm(zr.coords[j]) + delta * std::norm(zc.coords[j]);
                    blend.coords[j] = std::sqrt(mag);
                }
                check_level(ws, blend);
                Support observed = point_support(blend, 1e-9);
                if (observed == amb) {
                    sc.sampled_neighbor_dims.push_back(p.strata[t].dimension);
                    break;
                }
            }
        }
        std::sort(sc.sampled_neighbor_dims.begin(), sc.sampled_neighbor_dims.end());
        sc.ledger_ok = sc.sampled_neighbor_dims == sc.predicted_neighbor_dims;
        report.strata.push_back(std::move(sc));
    }

    // Link connectivity, recursively.
    for (std::size_t i = 0; i < tree.nodes.size(); ++i)
        check_links_recursive(tree.nodes[i], "root/s" + std::to_string(i) + "/link", report,
                              budget, rng, eps_scale);

    // Density of the principal stratum.
    {
        std::size_t want = budget.take(20000, 2000);
        if (want > 0 && !p.strata.empty())
            report.density = density_fraction(ws, p, want, rng.derive(7).u64());
        else
            report.density = 1.0;
    }

    report.incomplete = budget.exhausted;
    bool ok = report.homogeneity_residual <= 1e-9 && report.equivariance_residual <= 1e-6 &&
              report.density >= 0.99;
    for (const auto& sc : report.strata)
        ok = ok && sc.ledger_ok &&
             (sc.estimated_dim < 0 || sc.estimated_dim == sc.predicted_dim);
    for (const auto& lc : report.links) ok = ok && lc.components == 1;
    report.pass = ok && !report.incomplete;
    return report;
}

}  // namespace stratforge::sampler
