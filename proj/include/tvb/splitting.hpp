#pragma once

// Equivariant splitting into line bundles: a bundle on a smooth complete fan
// splits if and only if all its ray filtrations diagonalize simultaneously;
// the decomposition, when it exists, is produced together with the divisor
// of each summand and verified against the original filtrations.

#include "tvb/bundle_ops.hpp"
#include "tvb/filtration.hpp"

#include <optional>
#include <vector>

namespace tvb {

struct SplitSummand {
    DivisorData divisor;     ///< coefficient a_rho per fan ray (a_rho = -jump)
    std::vector<int> jumps;  ///< jump level per fan ray
    Subspace line;           ///< generating line inside the fiber
};

struct SplittingResult {
    std::optional<std::vector<SplitSummand>> summands;
    /// Meaningful iff not split: the first failed decomposition identity.
    DecomposeFailure witness;
    bool split() const { return summands.has_value(); }
};

inline SplittingResult split_into_line_bundles(const KlyachkoBundle& v) {
    if (!v.on_fan())
        throw std::invalid_argument("split_into_line_bundles: fan base required");
    if (!v.fan()->is_smooth() || !v.fan()->is_complete())
        throw std::invalid_argument("split_into_line_bundles: smooth complete fan required");

    const auto res = graded_decompose(v.filtrations());
    SplittingResult out;
    if (!res.ok()) {
        out.witness = res.failure;
        return out;
    }

    std::vector<SplitSummand> summands;
    for (const auto& [u, sp] : res.decomposition->pieces)
        for (std::size_t i = 0; i < sp.dim(); ++i) {
            SplitSummand s;
            s.jumps = u;
            for (int j : u) s.divisor.push_back(Int(-j));
            s.line = Subspace::span({sp.basis().row(i)}, v.rank());
            summands.push_back(std::move(s));
        }

    // Mandatory reconstruction verification: the lines are independent and
    // span the fiber, and at every ray and level the summands with a high
    // enough jump reproduce the filtration exactly.
    Subspace all = Subspace::zero(v.rank());
    for (const auto& s : summands) all = all.join(s.line);
    if (all.dim() != summands.size() || !all.is_full()) {
        out.witness = {-1, 0};
        return out;
    }
    for (std::size_t r = 0; r < v.nrays(); ++r) {
        const Filtration& f = v.filtration(r);
        for (int lvl = f.min_level(); lvl <= f.max_level() + 1; ++lvl) {
            Subspace sum = Subspace::zero(v.rank());
            std::size_t count = 0;
            for (const auto& s : summands)
                if (s.jumps[r] >= lvl) {
                    sum = sum.join(s.line);
                    ++count;
                }
            if (sum.dim() != count || sum != f.evaluate(lvl)) {
                out.witness = {static_cast<int>(r), lvl};
                return out;
            }
        }
    }
    out.summands = std::move(summands);
    return out;
}

inline bool is_split(const KlyachkoBundle& v) { return split_into_line_bundles(v).split(); }

}  // namespace tvb
