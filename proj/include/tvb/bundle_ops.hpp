#pragma once

// Constructors and functorial operations on ray-filtered bundles: direct
// sum, tensor, exterior and symmetric powers, dual, line bundles from
// invariant divisors, tangent and canonical bundles.
//
// Sign convention, used consistently everywhere: the line bundle of the
// divisor D = Σ a_ρ D_ρ has its filtration jump at level -a_ρ on ray ρ
// (the filtration is full for i <= -a_ρ and zero above). Consequently the
// graded sections of degree u survive at ρ exactly when <u,ρ> <= -a_ρ.

#include "tvb/filtration.hpp"
#include "tvb/multilinear.hpp"

#include <map>
#include <memory>
#include <vector>

namespace tvb {

/// Per-ray integer divisor coefficients, parallel to fan.rays().
using DivisorData = std::vector<Int>;

namespace detail {

/// Rebuild a bundle with the same base but new filtrations.
inline KlyachkoBundle rebase(const KlyachkoBundle& model, std::size_t rank,
                             std::vector<Filtration> fs) {
    if (model.on_fan()) return KlyachkoBundle(model.fan(), rank, std::move(fs));
    return KlyachkoBundle(model.stacky(), rank, std::move(fs));
}

inline void require_same_base(const KlyachkoBundle& v, const KlyachkoBundle& w) {
    if (!v.same_base(w)) throw std::invalid_argument("bundle operation: base mismatch");
}

}  // namespace detail

inline KlyachkoBundle direct_sum(const KlyachkoBundle& v, const KlyachkoBundle& w) {
    detail::require_same_base(v, w);
    const std::size_t rv = v.rank(), rw = w.rank(), r = rv + rw;
    std::vector<Filtration> fs;
    for (std::size_t i = 0; i < v.nrays(); ++i) {
        const Filtration& a = v.filtration(i);
        const Filtration& b = w.filtration(i);
        const int lo = std::min(a.min_level(), b.min_level());
        const int hi = std::max(a.max_level(), b.max_level());
        std::vector<std::pair<int, Subspace>> steps;
        for (int lvl = lo; lvl <= hi; ++lvl) {
            const Subspace sa = a.evaluate(lvl);
            const Subspace sb = b.evaluate(lvl);
            std::vector<QVec> gens;
            for (std::size_t k = 0; k < sa.dim(); ++k) {
                QVec x(r, Rat(0));
                for (std::size_t j = 0; j < rv; ++j) x[j] = sa.basis()(k, j);
                gens.push_back(std::move(x));
            }
            for (std::size_t k = 0; k < sb.dim(); ++k) {
                QVec x(r, Rat(0));
                for (std::size_t j = 0; j < rw; ++j) x[rv + j] = sb.basis()(k, j);
                gens.push_back(std::move(x));
            }
            steps.emplace_back(lvl, Subspace::span(gens, r));
        }
        fs.emplace_back(r, std::move(steps));
    }
    return detail::rebase(v, r, std::move(fs));
}

inline KlyachkoBundle tensor(const KlyachkoBundle& v, const KlyachkoBundle& w) {
    detail::require_same_base(v, w);
    const std::size_t r = v.rank() * w.rank();
    std::vector<Filtration> fs;
    for (std::size_t i = 0; i < v.nrays(); ++i) {
        const Filtration& a = v.filtration(i);
        const Filtration& b = w.filtration(i);
        const int lo = a.min_level() + b.min_level();
        const int hi = a.max_level() + b.max_level();
        std::vector<std::pair<int, Subspace>> steps;
        for (int lvl = lo; lvl <= hi; ++lvl) {
            Subspace g = Subspace::zero(r);
            for (int s = a.min_level(); s <= a.max_level(); ++s)
                g = g.join(tensor_subspace(a.evaluate(s), b.evaluate(lvl - s)));
            steps.emplace_back(lvl, g);
        }
        fs.emplace_back(r, std::move(steps));
    }
    return detail::rebase(v, r, std::move(fs));
}

inline KlyachkoBundle dual(const KlyachkoBundle& v) {
    const std::size_t r = v.rank();
    std::vector<Filtration> fs;
    for (std::size_t i = 0; i < v.nrays(); ++i) {
        const Filtration& a = v.filtration(i);
        const int lo = -a.max_level();  // ann(E(1-lo)) = ann(0) = full
        const int hi = 1 - a.min_level();
        std::vector<std::pair<int, Subspace>> steps;
        for (int lvl = lo; lvl <= hi; ++lvl)
            steps.emplace_back(lvl, a.evaluate(1 - lvl).annihilator());
        fs.emplace_back(r, std::move(steps));
    }
    return detail::rebase(v, r, std::move(fs));
}

inline KlyachkoBundle wedge(const KlyachkoBundle& v, int k) {
    if (k < 0) throw std::invalid_argument("wedge: negative power");
    const std::size_t n = v.rank();
    const std::size_t r = binomial(n, k);
    std::vector<Filtration> fs;
    for (std::size_t i = 0; i < v.nrays(); ++i) {
        const Filtration& a = v.filtration(i);
        const int lo = k * a.min_level();
        const int hi = k * a.max_level();
        // Level tuples: weakly increasing k-tuples of levels in jump range.
        const int span = a.max_level() - a.min_level() + 1;
        const auto tuples = k_multisets(span, k);
        std::vector<std::pair<int, Subspace>> steps;
        for (int lvl = lo; lvl <= hi; ++lvl) {
            Subspace g = Subspace::zero(r);
            for (const auto& t : tuples) {
                int sum = 0;
                for (int x : t) sum += x + a.min_level();
                if (sum != lvl) continue;
                std::vector<Subspace> parts;
                for (int x : t) parts.push_back(a.evaluate(x + a.min_level()));
                g = g.join(wedge_product_subspace(parts, n));
            }
            steps.emplace_back(lvl, g);
        }
        fs.emplace_back(r, std::move(steps));
    }
    return detail::rebase(v, r, std::move(fs));
}

inline KlyachkoBundle sym(const KlyachkoBundle& v, int k) {
    if (k < 0) throw std::invalid_argument("sym: negative power");
    const std::size_t n = v.rank();
    const std::size_t r = binomial(n + k - 1, k);
    std::vector<Filtration> fs;
    for (std::size_t i = 0; i < v.nrays(); ++i) {
        const Filtration& a = v.filtration(i);
        const int lo = k * a.min_level();
        const int hi = k * a.max_level();
        const int span = a.max_level() - a.min_level() + 1;
        const auto tuples = k_multisets(span, k);
        std::vector<std::pair<int, Subspace>> steps;
        for (int lvl = lo; lvl <= hi; ++lvl) {
            Subspace g = Subspace::zero(r);
            for (const auto& t : tuples) {
                int sum = 0;
                for (int x : t) sum += x + a.min_level();
                if (sum != lvl) continue;
                std::vector<Subspace> parts;
                for (int x : t) parts.push_back(a.evaluate(x + a.min_level()));
                g = g.join(sym_product_subspace(parts, n));
            }
            steps.emplace_back(lvl, g);
        }
        fs.emplace_back(r, std::move(steps));
    }
    return detail::rebase(v, r, std::move(fs));
}

/// O(D) for D = Σ a_ρ D_ρ: rank one, jump at -a_ρ on ray ρ.
inline KlyachkoBundle line_bundle(std::shared_ptr<const Fan> fan, const DivisorData& coeffs) {
    if (coeffs.size() != fan->rays().size())
        throw std::invalid_argument("line_bundle: one coefficient per ray required");
    std::vector<Filtration> fs;
    for (const auto& a : coeffs) fs.push_back(Filtration::line(static_cast<int>(-a)));
    return KlyachkoBundle(std::move(fan), 1, std::move(fs));
}

inline KlyachkoBundle trivial_bundle(std::shared_ptr<const Fan> fan) {
    const std::size_t n = fan->rays().size();
    return line_bundle(std::move(fan), DivisorData(n, Int(0)));
}

/// Tangent bundle of a smooth fan: full for i <= 0, the ray line at i = 1,
/// zero above.
inline KlyachkoBundle tangent(std::shared_ptr<const Fan> fan) {
    if (!fan->is_smooth()) throw std::invalid_argument("tangent: fan must be smooth");
    const std::size_t n = fan->lattice_rank();
    std::vector<Filtration> fs;
    for (const auto& r : fan->rays()) {
        std::vector<std::pair<int, Subspace>> steps;
        steps.emplace_back(0, Subspace::full(n));
        steps.emplace_back(1, Subspace::span({to_q(r)}, n));
        fs.emplace_back(n, std::move(steps));
    }
    return KlyachkoBundle(std::move(fan), n, std::move(fs));
}

/// Canonical bundle of a smooth fan: rank one with jump -1 at every ray
/// (the line bundle of Σ D_ρ).
inline KlyachkoBundle canonical(std::shared_ptr<const Fan> fan) {
    if (!fan->is_smooth()) throw std::invalid_argument("canonical: fan must be smooth");
    const std::size_t n = fan->rays().size();
    return line_bundle(std::move(fan), DivisorData(n, Int(1)));
}

}  // namespace tvb
