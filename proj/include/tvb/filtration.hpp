#pragma once

// Full decreasing filtrations of a fixed Q-vector space, ray-indexed bundle
// data over fans or stacky prefans, the greedy simultaneous graded
// decomposition, and the compatibility decision procedure.

#include "tvb/fan.hpp"
#include "tvb/prefan.hpp"
#include "tvb/subspace.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tvb {

/// A full decreasing filtration of Q^ambient. Steps store each distinct
/// subspace together with the LAST level at which it occurs, so evaluation
/// at i returns the space of the smallest stored level >= i (full space
/// below all levels, zero above all).
class Filtration {
  public:
    Filtration() = default;

    /// Normalizing constructor: levels may repeat a space (the last level
    /// wins); spaces must be weakly decreasing with increasing level and
    /// start at the full space for the smallest level.
    Filtration(std::size_t ambient, std::vector<std::pair<int, Subspace>> steps)
        : ambient_(ambient) {
        std::sort(steps.begin(), steps.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& [lvl, sp] : steps) {
            if (sp.ambient_dim() != ambient)
                throw std::invalid_argument("Filtration: ambient mismatch");
            if (sp.is_zero()) continue;  // zero tail is implicit
            if (!steps_.empty()) {
                if (steps_.back().first == lvl)
                    throw std::invalid_argument("Filtration: duplicate level");
                if (steps_.back().second == sp) {
                    steps_.back().first = lvl;  // same space persists to a later level
                    continue;
                }
                if (!steps_.back().second.contains(sp))
                    throw std::invalid_argument("Filtration: not decreasing");
            }
            steps_.emplace_back(lvl, sp);
        }
        if (steps_.empty() || !steps_.front().second.is_full())
            throw std::invalid_argument("Filtration: must start with the full space");
    }

    /// The filtration of a one-dimensional space with a single jump:
    /// full for i <= j, zero above.
    static Filtration line(int j) {
        return Filtration(1, {{j, Subspace::full(1)}});
    }

    /// Trivial filtration: full at level 0, zero above.
    static Filtration trivial(std::size_t ambient) {
        return Filtration(ambient, {{0, Subspace::full(ambient)}});
    }

    std::size_t ambient_dim() const { return ambient_; }
    const std::vector<std::pair<int, Subspace>>& steps() const { return steps_; }

    int min_level() const { return steps_.front().first; }
    int max_level() const { return steps_.back().first; }

    Subspace evaluate(int i) const {
        for (const auto& [lvl, sp] : steps_)
            if (lvl >= i) return sp;
        return Subspace::zero(ambient_);
    }

    bool operator==(const Filtration& o) const {
        return ambient_ == o.ambient_ && steps_ == o.steps_;
    }

  private:
    std::size_t ambient_ = 0;
    std::vector<std::pair<int, Subspace>> steps_;
};

// ---------------------------------------------------------------------------
// Graded decomposition

struct GradedDecomposition {
    /// piece multi-index -> nonzero subspace; indices are parallel to the
    /// input filtration sequence.
    std::map<std::vector<int>, Subspace> pieces;
};

struct DecomposeFailure {
    int filtration = -1;  ///< index j of the first violated filtration
    int level = 0;        ///< level i with evaluate(F_j, i) != ⊕_{u_j >= i} piece
};

struct DecomposeResult {
    std::optional<GradedDecomposition> decomposition;
    DecomposeFailure failure;  ///< meaningful iff !decomposition
    bool ok() const { return decomposition.has_value(); }
};

/// Greedy simultaneous diagonalization of several filtrations of the same
/// space. Pieces are assigned at multi-indices in descending order; the
/// result is verified against every filtration level and rejected wholesale
/// if any identity fails.
inline DecomposeResult graded_decompose(
    const std::vector<Filtration>& filtrations,
    const std::function<bool(const std::vector<int>&)>& allowed = nullptr) {
    if (filtrations.empty()) throw std::invalid_argument("graded_decompose: no filtrations");
    const std::size_t ambient = filtrations[0].ambient_dim();
    for (const auto& f : filtrations)
        if (f.ambient_dim() != ambient)
            throw std::invalid_argument("graded_decompose: ambient mismatch");
    const std::size_t k = filtrations.size();

    std::vector<int> lo(k), hi(k);
    for (std::size_t j = 0; j < k; ++j) {
        lo[j] = filtrations[j].min_level();
        hi[j] = filtrations[j].max_level();
    }

    auto eval = [&](const std::vector<int>& u) {
        Subspace s = Subspace::full(ambient);
        for (std::size_t j = 0; j < k; ++j) s = s.meet(filtrations[j].evaluate(u[j]));
        return s;
    };

    // All integer multi-indices in the jump box, in a descending linear
    // extension of the componentwise order (sum descending, then lex).
    std::vector<std::vector<int>> box;
    {
        std::vector<int> u = lo;
        while (true) {
            box.push_back(u);
            std::size_t j = 0;
            while (j < k && u[j] == hi[j]) {
                u[j] = lo[j];
                ++j;
            }
            if (j == k) break;
            ++u[j];
        }
        std::sort(box.begin(), box.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
            long sa = 0, sb = 0;
            for (int x : a) sa += x;
            for (int x : b) sb += x;
            if (sa != sb) return sa > sb;
            return a > b;
        });
    }

    GradedDecomposition dec;
    for (const auto& u : box) {
        if (allowed && !allowed(u)) continue;
        const Subspace iu = eval(u);
        if (iu.is_zero()) continue;
        Subspace bu = Subspace::zero(ambient);
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<int> up = u;
            ++up[j];
            bu = bu.join(eval(up));
        }
        const Subspace piece = bu.meet(iu).complement_in(iu);
        if (!piece.is_zero()) dec.pieces.emplace(u, piece);
    }

    // Mandatory verification: evaluate(F_j, i) = ⊕_{u_j >= i} piece(u)
    // for every filtration and every level from below the box to above it.
    for (std::size_t j = 0; j < k; ++j) {
        for (int i = lo[j]; i <= hi[j] + 1; ++i) {
            Subspace sum = Subspace::zero(ambient);
            std::size_t dim_total = 0;
            for (const auto& [u, sp] : dec.pieces) {
                if (u[j] < i) continue;
                sum = sum.join(sp);
                dim_total += sp.dim();
            }
            if (sum.dim() != dim_total || sum != filtrations[j].evaluate(i)) {
                DecomposeResult r;
                r.failure = {static_cast<int>(j), i};
                return r;
            }
        }
    }
    DecomposeResult r;
    r.decomposition = std::move(dec);
    return r;
}

// ---------------------------------------------------------------------------
// Bundles

/// Ray-indexed filtration data over a fan or a stacky prefan. For fans the
/// filtrations are parallel to fan.rays(); for stacky prefans they are
/// parallel to prefan.ray_elements(), with levels referring to the ray
/// generator that is primitive in the ray's own sublattice.
class KlyachkoBundle {
  public:
    KlyachkoBundle(std::shared_ptr<const Fan> fan, std::size_t rank,
                   std::vector<Filtration> filtrations)
        : fan_(std::move(fan)), rank_(rank), filtrations_(std::move(filtrations)) {
        if (filtrations_.size() != fan_->rays().size())
            throw std::invalid_argument("KlyachkoBundle: one filtration per ray required");
        check_ranks();
    }

    KlyachkoBundle(std::shared_ptr<const StackyPrefan> prefan, std::size_t rank,
                   std::vector<Filtration> filtrations)
        : prefan_(std::move(prefan)), rank_(rank), filtrations_(std::move(filtrations)) {
        if (filtrations_.size() != prefan_->prefan().ray_elements().size())
            throw std::invalid_argument("KlyachkoBundle: one filtration per ray required");
        check_ranks();
    }

    bool on_fan() const { return static_cast<bool>(fan_); }
    const std::shared_ptr<const Fan>& fan() const { return fan_; }
    const std::shared_ptr<const StackyPrefan>& stacky() const { return prefan_; }
    std::size_t rank() const { return rank_; }
    std::size_t nrays() const { return filtrations_.size(); }
    const std::vector<Filtration>& filtrations() const { return filtrations_; }
    const Filtration& filtration(std::size_t ray) const { return filtrations_.at(ray); }

    /// Primitive generator (in N̄) of the i-th indexed ray.
    ZVec ray_vector(std::size_t i) const {
        if (on_fan()) return fan_->rays().at(i);
        const auto res = prefan_->prefan().ray_elements();
        return prefan_->prefan().cone(res.at(i)).rays()[0];
    }

    bool same_base(const KlyachkoBundle& o) const {
        return fan_ == o.fan_ && prefan_ == o.prefan_;
    }

  private:
    void check_ranks() const {
        for (const auto& f : filtrations_)
            if (f.ambient_dim() != rank_)
                throw std::invalid_argument("KlyachkoBundle: filtration ambient != rank");
    }

    std::shared_ptr<const Fan> fan_;
    std::shared_ptr<const StackyPrefan> prefan_;
    std::size_t rank_ = 0;
    std::vector<Filtration> filtrations_;
};

struct CompatibilityResult {
    /// Per maximal cone (fan) or maximal element (stacky prefan), in order.
    std::vector<GradedDecomposition> per_cone;
    bool compatible = false;
    int failing_cone = -1;
    DecomposeFailure failure;
};

/// The `allowed` predicate for a cone: a tuple t is allowed iff some
/// character u of the relevant lattice evaluates to t on the (appropriately
/// primitive) ray generators. Rows of C are the evaluation coefficients.
inline std::function<bool(const std::vector<int>&)> evaluation_image_predicate(ZMat c) {
    return [c = std::move(c)](const std::vector<int>& t) {
        ZVec b(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) b[i] = t[i];
        return solve_integer(c, b).has_value();
    };
}

/// Decide the compatibility condition: for every maximal cone there must be
/// a grading of E by admissible characters refining all ray filtrations.
inline CompatibilityResult check_compatibility(const KlyachkoBundle& v) {
    CompatibilityResult result;
    if (v.on_fan()) {
        const Fan& fan = *v.fan();
        for (std::size_t c = 0; c < fan.maximal_cones().size(); ++c) {
            const auto idx = fan.cone_ray_indices(c);
            std::vector<Filtration> fs;
            ZMat rows(idx.size(), fan.lattice_rank());
            for (std::size_t i = 0; i < idx.size(); ++i) {
                fs.push_back(v.filtration(idx[i]));
                const ZVec r = fan.rays()[idx[i]];
                for (std::size_t j = 0; j < fan.lattice_rank(); ++j) rows(i, j) = r[j];
            }
            auto res = graded_decompose(fs, evaluation_image_predicate(rows));
            if (!res.ok()) {
                result.failing_cone = static_cast<int>(c);
                result.failure = res.failure;
                return result;
            }
            result.per_cone.push_back(std::move(*res.decomposition));
        }
    } else {
        const StackyPrefan& sp = *v.stacky();
        const auto ray_elems = sp.prefan().ray_elements();
        for (int m : sp.prefan().maximal_elements()) {
            // Rays of the maximal element = ray elements below it.
            std::vector<int> local;  // indices into the bundle's ray list
            for (std::size_t i = 0; i < ray_elems.size(); ++i)
                if (sp.prefan().leq(ray_elems[i], m)) local.push_back(static_cast<int>(i));
            if (local.empty()) {
                result.per_cone.emplace_back();
                continue;
            }
            std::vector<Filtration> fs;
            const ZMat& sub = sp.sublattice(m);
            // Coefficient matrix: row i = coordinates of the N0-primitive ray
            // generator in the basis of N0_m; characters of N0_m act by
            // arbitrary integer covectors in these coordinates.
            ZMat coeff(local.size(), sub.rows());
            QMat subt(sp.ambient_dim(), sub.rows());
            for (std::size_t i = 0; i < sub.rows(); ++i)
                for (std::size_t j = 0; j < sp.ambient_dim(); ++j) subt(j, i) = Rat(sub(i, j));
            for (std::size_t i = 0; i < local.size(); ++i) {
                fs.push_back(v.filtration(local[i]));
                const int re = ray_elems[local[i]];
                const Int d = sp.ray_multiplicity(re);
                const ZVec r = sp.prefan().cone(re).rays()[0];
                QVec dr(r.size());
                for (std::size_t j = 0; j < r.size(); ++j) dr[j] = Rat(d * r[j]);
                const auto x = subt.solve(dr);
                if (!x) throw std::invalid_argument("check_compatibility: ray escapes sublattice");
                for (std::size_t j = 0; j < sub.rows(); ++j) {
                    if (boost::multiprecision::denominator((*x)[j]) != 1)
                        throw std::invalid_argument(
                            "check_compatibility: ray not integral in sublattice");
                    coeff(i, j) = boost::multiprecision::numerator((*x)[j]);
                }
            }
            auto res = graded_decompose(fs, evaluation_image_predicate(coeff));
            if (!res.ok()) {
                result.failing_cone = m;
                result.failure = res.failure;
                return result;
            }
            result.per_cone.push_back(std::move(*res.decomposition));
        }
    }
    result.compatible = true;
    return result;
}

}  // namespace tvb
