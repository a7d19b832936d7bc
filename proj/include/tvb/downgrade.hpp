#pragma once

// Toric downgrade: reinterpret a toric variety / bundle as equivariant for
// a subtorus. From a fan in N' and a surjection mu: N' -> N̄ this computes
// the dimension-preserving subfan, the contracted-ray set H, the quotient
// stacky prefan with its stabilizers, and downgraded bundle data.

#include "tvb/fan.hpp"
#include "tvb/filtration.hpp"
#include "tvb/prefan.hpp"

#include <algorithm>
#include <memory>
#include <vector>

namespace tvb {

struct ProjectionData {
    ZMat mu;      ///< surjective integer matrix N' -> N̄
    ZMat kernel;  ///< saturated row basis of ker(mu) = N
};

/// Validates surjectivity and computes the kernel lattice.
inline ProjectionData make_projection(ZMat mu) {
    const auto f = invariant_factors(mu);
    if (f.size() != mu.rows())
        throw std::invalid_argument("make_projection: matrix is not surjective");
    for (const auto& d : f)
        if (d != 1) throw std::invalid_argument("make_projection: matrix is not surjective");
    ZMat kernel = integer_kernel(mu);
    return {std::move(mu), std::move(kernel)};
}

struct DowngradeResult {
    /// Cones of the dimension-preserving subfan Σ' (in N'), parallel to the
    /// elements of the quotient prefan; element 0 is the zero cone.
    std::vector<Cone> sigma_prime;
    /// Primitive generators (in N') of the rays contracted by mu.
    std::vector<ZVec> contracted;
    std::shared_ptr<const StackyPrefan> quotient;
    /// Stabilizer invariant factors (> 1) per quotient element.
    std::vector<std::vector<Int>> stabilizers;
    /// For each quotient ray element (in ray_elements() order), the index of
    /// the corresponding ray in the original fan.
    std::vector<int> ray_origin;
};

inline DowngradeResult downgrade_fan(const Fan& fan, const ProjectionData& proj) {
    const std::size_t n = fan.lattice_rank();
    const std::size_t nbar = proj.mu.rows();
    if (proj.mu.cols() != n) throw std::invalid_argument("downgrade_fan: shape mismatch");

    auto mu_apply = [&](const ZVec& v) { return proj.mu.apply(v); };

    // Collect all faces of all maximal cones that keep their dimension.
    std::vector<Cone> selected;
    selected.push_back(Cone::zero(n));
    for (const auto& mc : fan.maximal_cones())
        for (const auto& face : mc.faces()) {
            std::vector<ZVec> rays;
            for (int i : face) rays.push_back(mc.rays()[i]);
            Cone c(rays, n);
            if (c.dim() == 0) continue;
            std::vector<ZVec> image;
            for (const auto& r : c.rays()) image.push_back(mu_apply(r));
            if (Subspace::span_z(image, nbar).dim() != c.dim()) continue;
            if (std::find(selected.begin(), selected.end(), c) == selected.end())
                selected.push_back(std::move(c));
        }
    // Deterministic order: by dimension, then by sorted primitive ray lists.
    std::sort(selected.begin(), selected.end(), [](const Cone& a, const Cone& b) {
        if (a.dim() != b.dim()) return a.dim() < b.dim();
        auto ra = a.rays();
        auto rb = b.rays();
        std::sort(ra.begin(), ra.end());
        std::sort(rb.begin(), rb.end());
        return ra < rb;
    });

    // Contracted rays.
    std::vector<ZVec> contracted;
    for (const auto& r : fan.rays())
        if (tvb::is_zero(mu_apply(r))) contracted.push_back(r);

    // Quotient prefan: same poset (face relation inside Σ), cones mapped
    // through mu. Gluing happens only along common faces in Σ.
    std::vector<Cone> qcones;
    for (const auto& c : selected) {
        std::vector<ZVec> image;
        for (const auto& r : c.rays()) image.push_back(mu_apply(r));
        qcones.emplace_back(image, nbar);
    }
    std::vector<std::pair<int, int>> less;
    for (std::size_t a = 0; a < selected.size(); ++a)
        for (std::size_t b = 0; b < selected.size(); ++b)
            if (a != b && selected[b].has_face(selected[a]))
                less.emplace_back(static_cast<int>(a), static_cast<int>(b));
    Prefan prefan(nbar, qcones, std::move(less));

    // Stacky structure: Σ0(sigma) = mu(N'_sigma).
    std::vector<ZMat> subs;
    for (const auto& c : selected) {
        if (c.rays().empty()) {
            subs.emplace_back(0, nbar);
            continue;
        }
        const ZMat nprime = saturation(ZMat::from_rows(c.rays(), n));
        std::vector<ZVec> image;
        for (std::size_t i = 0; i < nprime.rows(); ++i) image.push_back(mu_apply(nprime.row(i)));
        subs.push_back(hermite_normal_form(ZMat::from_rows(image, nbar)));
    }
    auto quotient = std::make_shared<StackyPrefan>(std::move(prefan), std::move(subs));

    DowngradeResult out;
    out.sigma_prime = std::move(selected);
    out.contracted = std::move(contracted);
    for (std::size_t e = 0; e < quotient->size(); ++e)
        out.stabilizers.push_back(quotient->stabilizer(e));
    for (int e : quotient->prefan().ray_elements()) {
        const Cone& orig = out.sigma_prime[e];
        out.ray_origin.push_back(fan.ray_index(orig.rays()[0]));
    }
    out.quotient = std::move(quotient);
    return out;
}

/// One contracted ray gamma with the induced filtration by sub-bundles:
/// level j carries the families {E^rho(i) ∩ E^gamma(j)} re-coordinatized on
/// the subspace E^gamma(j).
struct HFamily {
    ZVec gamma;                 ///< primitive contracted ray (N' coordinates)
    std::vector<int> levels;    ///< jump levels of E^gamma, increasing
    std::vector<Subspace> spaces;  ///< E^gamma(j) in ambient coordinates
    std::vector<KlyachkoBundle> bundles;  ///< per level: stacky sub-bundle
};

struct DowngradedBundle {
    DowngradeResult geometry;
    KlyachkoBundle stacky_bundle;
    std::vector<HFamily> h_filtrations;
};

namespace detail {

/// Coordinates of subspace `w` (required ⊆ span of `basis` rows) in that
/// basis, as a subspace of Q^{rows(basis)}.
inline Subspace coordinates_in(const Subspace& w, const QMat& basis) {
    QMat bt(basis.cols(), basis.rows());
    for (std::size_t i = 0; i < basis.rows(); ++i)
        for (std::size_t j = 0; j < basis.cols(); ++j) bt(j, i) = basis(i, j);
    std::vector<QVec> rows;
    for (std::size_t i = 0; i < w.dim(); ++i) {
        const auto c = bt.solve(w.basis().row(i));
        if (!c) throw std::invalid_argument("coordinates_in: subspace escapes the basis span");
        rows.push_back(*c);
    }
    return Subspace::span(rows, basis.rows());
}

}  // namespace detail

inline DowngradedBundle downgrade_bundle(const KlyachkoBundle& v, const ProjectionData& proj) {
    if (!v.on_fan()) throw std::invalid_argument("downgrade_bundle: fan base required");
    const Fan& fan = *v.fan();
    DowngradeResult geo = downgrade_fan(fan, proj);

    // Surviving rays keep their filtrations verbatim (levels refer to the
    // generator mu(rho), which is primitive in the ray's sublattice).
    std::vector<Filtration> fs;
    for (int orig : geo.ray_origin) fs.push_back(v.filtration(orig));
    KlyachkoBundle stacky(geo.quotient, v.rank(), std::move(fs));

    std::vector<HFamily> hfams;
    for (const auto& gamma : geo.contracted) {
        const int gi = fan.ray_index(gamma);
        const Filtration& fg = v.filtration(gi);
        HFamily fam;
        fam.gamma = gamma;
        for (const auto& [j, space] : fg.steps()) {
            fam.levels.push_back(j);
            fam.spaces.push_back(space);
            std::vector<Filtration> sub_fs;
            for (int orig : geo.ray_origin) {
                const Filtration& fr = v.filtration(orig);
                std::vector<std::pair<int, Subspace>> steps;
                for (int lvl = fr.min_level(); lvl <= fr.max_level(); ++lvl)
                    steps.emplace_back(
                        lvl, detail::coordinates_in(fr.evaluate(lvl).meet(space), space.basis()));
                sub_fs.emplace_back(space.dim(), std::move(steps));
            }
            fam.bundles.emplace_back(geo.quotient, space.dim(), std::move(sub_fs));
        }
        hfams.push_back(std::move(fam));
    }
    return {std::move(geo), std::move(stacky), std::move(hfams)};
}

struct LineSummand {
    std::vector<int> jumps;  ///< per quotient ray element, the jump level
    Subspace line;           ///< generating line inside the original fiber E
};

/// Decompose the downgraded stacky bundle into line summands by running the
/// global graded decomposition over all quotient rays simultaneously.
/// Throws if the bundle does not decompose into lines.
inline std::vector<LineSummand> line_summand_profile(const DowngradedBundle& d) {
    const auto& v = d.stacky_bundle;
    const auto res = graded_decompose(v.filtrations());
    if (!res.ok())
        throw std::invalid_argument("line_summand_profile: bundle is not a sum of line bundles");
    std::vector<LineSummand> out;
    for (const auto& [u, sp] : res.decomposition->pieces)
        for (std::size_t i = 0; i < sp.dim(); ++i)
            out.push_back({u, Subspace::span({sp.basis().row(i)}, v.rank())});
    std::sort(out.begin(), out.end(), [](const LineSummand& a, const LineSummand& b) {
        if (a.jumps != b.jumps) return a.jumps < b.jumps;
        for (std::size_t j = 0; j < a.line.basis().cols(); ++j) {
            const Rat x = a.line.basis()(0, j), y = b.line.basis()(0, j);
            if (x != y) return x < y;
        }
        return false;
    });
    return out;
}

}  // namespace tvb
