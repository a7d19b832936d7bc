#pragma once

// Deformation theory of tangent bundles: graded Ext groups, the obstruction
// comparison with cohomology of restricted divisors on the invariant prime
// divisors, and Fano unobstructedness.

#include "tvb/cohomology.hpp"

#include <map>
#include <memory>
#include <utility>

namespace tvb {

/// Is the (smooth complete) fan Fano, i.e. is the anticanonical divisor
/// ample? Checked by strict convexity across walls: for each maximal cone
/// with vertex covector m (pairing 1 with each cone ray), every other fan
/// ray must pair strictly below 1.
inline bool is_fano(const Fan& fan) {
    if (!fan.is_smooth() || !fan.is_complete())
        throw std::invalid_argument("is_fano: smooth complete fan required");
    for (std::size_t c = 0; c < fan.maximal_cones().size(); ++c) {
        const auto idx = fan.cone_ray_indices(c);
        QMat rows(idx.size(), fan.lattice_rank());
        QVec rhs(idx.size(), Rat(1));
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < fan.lattice_rank(); ++j)
                rows(i, j) = Rat(fan.rays()[idx[i]][j]);
        const auto m = rows.solve(rhs);
        if (!m) throw std::invalid_argument("is_fano: degenerate maximal cone");
        for (std::size_t r = 0; r < fan.rays().size(); ++r) {
            if (std::find(idx.begin(), idx.end(), static_cast<int>(r)) != idx.end()) continue;
            if (dot(*m, to_q(fan.rays()[r])) >= 1) return false;
        }
    }
    return true;
}

/// Graded dimensions of Ext^i(T_X, T_X) on a smooth complete fan.
inline GradedDims tangent_ext(std::shared_ptr<const Fan> fan, int i) {
    const auto t = tangent(std::move(fan));
    return ext_graded(t, t, i);
}

/// The right-hand side of the obstruction comparison: for every ordered pair
/// of distinct rays (rho, gamma), the total dimension of
/// H^{i-1}(D_rho, O_{D_rho}(D_gamma)).
struct ObstructionRhs {
    std::map<std::pair<int, int>, std::size_t> entries;  ///< (rho, gamma) -> dim
    std::size_t total = 0;
};

inline ObstructionRhs obstruction_rhs(const Fan& fan, int i) {
    if (i < 2) throw std::invalid_argument("obstruction_rhs: i >= 2 required");
    if (!is_fano(fan)) throw std::invalid_argument("obstruction_rhs: Fano fan required");
    const std::size_t n = fan.lattice_rank();
    const std::size_t nrays = fan.rays().size();

    ObstructionRhs out;
    for (std::size_t ri = 0; ri < nrays; ++ri) {
        const ZVec& rho = fan.rays()[ri];
        ZMat proj(0, 0);
        const auto star = std::make_shared<Fan>(fan.star_fan(rho, &proj));
        const bool degree_too_high = static_cast<std::size_t>(i - 1) > star->lattice_rank();

        // Identify each star ray with the wall it came from: the unique fan
        // ray rho_tau spanning a two-dimensional cone with rho, together
        // with a maximal cone containing both.
        std::vector<int> wall_ray(star->rays().size(), -1);
        std::vector<int> wall_cone(star->rays().size(), -1);
        for (std::size_t s = 0; s < star->rays().size(); ++s) {
            for (std::size_t c = 0; c < fan.maximal_cones().size() && wall_ray[s] < 0; ++c) {
                const auto idx = fan.cone_ray_indices(c);
                if (std::find(idx.begin(), idx.end(), static_cast<int>(ri)) == idx.end())
                    continue;
                for (int other : idx) {
                    if (other == static_cast<int>(ri)) continue;
                    if (proj.apply(fan.rays()[other]) == star->rays()[s]) {
                        wall_ray[s] = other;
                        wall_cone[s] = static_cast<int>(c);
                        break;
                    }
                }
            }
            if (wall_ray[s] < 0)
                throw std::invalid_argument("obstruction_rhs: unmatched star ray");
        }

        for (std::size_t gi = 0; gi < nrays; ++gi) {
            if (gi == ri) continue;
            if (degree_too_high) {
                out.entries[{static_cast<int>(ri), static_cast<int>(gi)}] = 0;
                continue;
            }
            // Restrict D_gamma to D_rho via Cartier data: on each maximal
            // cone pick the covector m with <m, ray> = 1 at gamma and 0 at
            // the other cone rays; the restricted coefficient on the star
            // ray from the wall through rho_tau is -<m, rho_tau>.
            DivisorData coeffs;
            for (std::size_t s = 0; s < star->rays().size(); ++s) {
                const auto idx = fan.cone_ray_indices(wall_cone[s]);
                QMat rows(idx.size(), n);
                QVec rhs(idx.size(), Rat(0));
                for (std::size_t k = 0; k < idx.size(); ++k) {
                    for (std::size_t j = 0; j < n; ++j)
                        rows(k, j) = Rat(fan.rays()[idx[k]][j]);
                    if (idx[k] == static_cast<int>(gi)) rhs[k] = 1;
                }
                const auto m = rows.solve(rhs);
                if (!m) throw std::invalid_argument("obstruction_rhs: no Cartier data");
                const Rat val = dot(*m, to_q(fan.rays()[wall_ray[s]]));
                if (boost::multiprecision::denominator(val) != 1)
                    throw std::invalid_argument("obstruction_rhs: non-integral restriction");
                coeffs.push_back(-boost::multiprecision::numerator(val));
            }
            const auto lb = line_bundle(star, coeffs);
            const std::size_t h = cech_cohomology(lb, i - 1).total();
            out.entries[{static_cast<int>(ri), static_cast<int>(gi)}] = h;
            out.total += h;
        }
    }
    return out;
}

/// True iff every invariant prime divisor is itself Fano, which makes the
/// versal deformation of the tangent bundle smooth.
inline bool unobstructed_fano(const Fan& fan) {
    if (!is_fano(fan)) throw std::invalid_argument("unobstructed_fano: Fano fan required");
    for (const auto& rho : fan.rays())
        if (!is_fano(fan.star_fan(rho))) return false;
    return true;
}

struct ObstructionReport {
    GradedDims lhs;      ///< Ext^i(T_X, T_X)
    ObstructionRhs rhs;  ///< per-(rho, gamma) divisor cohomology dims
    bool match = false;  ///< totals agree
};

inline ObstructionReport obstruction_report(std::shared_ptr<const Fan> fan, int i) {
    ObstructionReport rep;
    rep.lhs = tangent_ext(fan, i);
    rep.rhs = obstruction_rhs(*fan, i);
    rep.match = rep.lhs.total() == rep.rhs.total;
    return rep;
}

}  // namespace tvb
