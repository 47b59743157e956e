#pragma once

// Monte Carlo verification of the combinatorial engine: samples the zero
// level, estimates local dimensions by PCA, counts components of epsilon
// graphs in the quotient metric, and measures the density of the principal
// stratum.  Everything is deterministic given the seed.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "stratforge/local_model.hpp"

namespace stratforge::sampler {

using local_model::LinkTree;
using strat::Kind;
using strat::Partition;
using strat::Support;
using torus_rep::Point;
using torus_rep::WeightSystem;

constexpr double kLevelTol = 1e-8;    // ||Phi(z)|| on sampled points
constexpr double kThetaDim = 1e-3;    // PCA singular-value threshold
constexpr double kLocalRadius = 1e-4; // default local-cloud radius
constexpr double kEpsScale = 3.0;     // eps-graph scale over median NN distance

// Deterministic random stream; bit-identical across platforms (raw
// mt19937_64 output mapped to doubles explicitly, no std distributions).
class Rng {
  public:
    explicit Rng(uint64_t seed) : g_(seed) {}
    uint64_t u64() { return g_(); }
    double uniform() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    double gauss();
    Rng derive(uint64_t stream) const;

  private:
    std::mt19937_64 g_;
    bool have_spare_ = false;
    double spare_ = 0;
};

struct SampleBatch {
    std::vector<Point> points;
    uint64_t seed = 0;
    bool sphere = false;
    std::map<Support, int> support_histogram;
};

// Uniform-ish samples of {z : support(z) = S, Phi(z) = 0} (intersected with
// the unit sphere when sphere = true): hit-and-run over the magnitude
// polytope, independent uniform phases.
SampleBatch sample_zero_level(const WeightSystem& ws, const Support& S,
                              std::size_t count, uint64_t seed, bool sphere = false);

// A deterministic representative point of the piece (LP solution, zero phases).
Point representative_point(const WeightSystem& ws, const Support& S, bool sphere);

// Local cloud on the same piece within `radius` of `center` (which must have
// support S and lie on the zero level).
SampleBatch sample_near(const WeightSystem& ws, const Support& S, const Point& center,
                        double radius, std::size_t count, uint64_t seed, bool sphere);

// PCA dimension of the quotient at `center`: group-orbit directions are
// projected out, singular values above kThetaDim * sigma_max are counted.
// Needs >= 50 batch points within `radius`.
int estimate_local_dimension(const WeightSystem& ws, const SampleBatch& batch,
                             const Point& center, double radius);

// Number of connected components of the eps-graph in the quotient metric
// d([z],[w]) = min_g ||z - g w|| (group grid).  eps <= 0 selects
// eps_scale * median nearest-neighbor distance.
int quotient_connectivity(const WeightSystem& ws, const SampleBatch& batch,
                          double eps = 0.0, double eps_scale = kEpsScale);

// Fraction of volume-weighted zero-level samples landing in the principal
// stratum.
double density_fraction(const WeightSystem& ws, const Partition& p, std::size_t count,
                        uint64_t seed);

struct StratumCheck {
    int stratum = -1;
    int predicted_dim = 0;
    int estimated_dim = -1;  // -1: not estimated (budget ran out)
    double spectral_gap = 0;  // sigma ratio across the counted/uncounted split
    std::vector<int> predicted_neighbor_dims;
    std::vector<int> sampled_neighbor_dims;
    bool ledger_ok = false;
};

struct LinkCheck {
    std::string path;  // e.g. "root/s0/link/s1"
    int components = 0;
    double eps = 0;
    int samples = 0;
};

struct VerificationReport {
    uint64_t seed = 0;
    double density = 0;
    double homogeneity_residual = 0;
    double equivariance_residual = 0;
    std::vector<StratumCheck> strata;
    std::vector<LinkCheck> links;
    bool incomplete = false;
    bool pass = false;
    // reported parameters
    double theta_dim = kThetaDim;
    double eps_scale = kEpsScale;
    std::size_t budget = 0;
};

// Full verification pass over a link tree: dimension estimates, link
// connectivity, density, residuals, and the sampled neighborhood ledger.
// `budget` caps the total number of sampled points; exhaustion flags the
// report incomplete instead of failing.
VerificationReport verify_ledgers(const WeightSystem& ws, const LinkTree& tree,
                                  std::size_t budget, uint64_t seed,
                                  double eps_scale = kEpsScale);

}  // namespace stratforge::sampler
