#include "stratforge/torus_rep.hpp"

#include <cmath>
#include <numbers>

namespace stratforge::torus_rep {

WeightSystem::WeightSystem(std::size_t k, std::vector<Int> mods, IntMatrix w, IntMatrix fc)
    : torus_rank(k), moduli(std::move(mods)), weights(std::move(w)),
      finite_chars(std::move(fc)) {
    if (weights.rows() != torus_rank)
        throw input_error("WeightSystem: weight matrix must have torus_rank rows");
    if (finite_chars.rows() != moduli.size())
        throw input_error("WeightSystem: one finite character row per modulus required");
    if (finite_chars.cols() != weights.cols())
        throw input_error("WeightSystem: weight and character column counts differ");
    for (const Int& m : moduli)
        if (m < 2) throw input_error("WeightSystem: moduli must be >= 2");
    for (std::size_t i = 0; i < moduli.size(); ++i)
        for (std::size_t j = 0; j < finite_chars.cols(); ++j) {
            Int r;
            mpz_fdiv_r(r.get_mpz_t(), finite_chars.at(i, j).get_mpz_t(),
                       moduli[i].get_mpz_t());
            finite_chars.at(i, j) = r;
        }
}

std::vector<Int> WeightSystem::weight_of(std::size_t j) const {
    std::vector<Int> w(torus_rank);
    for (std::size_t i = 0; i < torus_rank; ++i) w[i] = weights.at(i, j);
    return w;
}

std::vector<Int> WeightSystem::finite_char_of(std::size_t j) const {
    std::vector<Int> c(moduli.size());
    for (std::size_t i = 0; i < moduli.size(); ++i) c[i] = finite_chars.at(i, j);
    return c;
}

double Point::norm() const {
    double s = 0;
    for (const auto& z : coords) s += std::norm(z);
    return std::sqrt(s);
}

MomentValue moment_map(const WeightSystem& ws, const Point& z) {
    if (z.coords.size() != ws.n())
        throw input_error("moment_map: point dimension does not match weight system");
    MomentValue phi(ws.torus_rank, 0.0);
    for (std::size_t j = 0; j < ws.n(); ++j) {
        const double r2 = std::norm(z.coords[j]);
        for (std::size_t i = 0; i < ws.torus_rank; ++i)
            phi[i] += 0.5 * ws.weights.at(i, j).get_d() * r2;
    }
    return phi;
}

MomentValue contactization_moment(const WeightSystem& ws, const Point& z) {
    if (!z.t) throw input_error("contactization_moment: point has no t coordinate");
    return moment_map(ws, z);
}

MomentValue symplectization_moment(const MomentValue& phi, double t) {
    MomentValue psi(phi.size());
    const double s = -std::exp(t);
    for (std::size_t i = 0; i < phi.size(); ++i) psi[i] = s * phi[i];
    return psi;
}

MomentValue sphere_contact_moment(const WeightSystem& ws, const Point& z) {
    if (z.coords.size() != ws.n())
        throw input_error("sphere_contact_moment: point dimension mismatch");
    if (std::abs(z.norm() - 1.0) > kSphereTol)
        throw input_error("sphere_contact_moment: point is not on the unit sphere");
    return moment_map(ws, z);
}

std::pair<std::vector<int>, std::vector<int>> fixed_subspace(const WeightSystem& ws,
                                                             const GroupDescriptor& H) {
    if (H.ambient_torus_rank != ws.torus_rank || H.ambient_moduli != ws.moduli)
        throw input_error("fixed_subspace: subgroup belongs to a different ambient group");
    std::vector<int> fixed, moving;
    for (std::size_t j = 0; j < ws.n(); ++j) {
        auto chi = intlin::restrict_character(ws.weight_of(j), ws.finite_char_of(j), H);
        (chi.trivial() ? fixed : moving).push_back(static_cast<int>(j));
    }
    return {fixed, moving};
}

GroupDescriptor full_group(const WeightSystem& ws) {
    IntMatrix empty_w(ws.torus_rank, 0), empty_c(ws.moduli.size(), 0);
    return intlin::subgroup_structure(empty_w, empty_c, ws.moduli);
}

Point act(const WeightSystem& ws, const GroupElement& g, const Point& z) {
    if (g.torus.size() != ws.torus_rank || g.finite.size() != ws.moduli.size())
        throw input_error("act: group element does not match weight system");
    if (z.coords.size() != ws.n()) throw input_error("act: point dimension mismatch");
    Point out = z;
    for (std::size_t j = 0; j < ws.n(); ++j) {
        double angle = 0;
        for (std::size_t i = 0; i < ws.torus_rank; ++i)
            angle += ws.weights.at(i, j).get_d() * g.torus[i];
        for (std::size_t i = 0; i < ws.moduli.size(); ++i)
            angle += ws.finite_chars.at(i, j).get_d() * static_cast<double>(g.finite[i]) /
                     ws.moduli[i].get_d();
        out.coords[j] *= std::polar(1.0, 2.0 * std::numbers::pi * angle);
    }
    return out;
}

}  // namespace stratforge::torus_rep
