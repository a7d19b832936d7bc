#pragma once

// Graded global sections, Čech cohomology over the nerve of the cover by
// maximal cones, Ext groups, and degree-region bookkeeping.

#include "tvb/bundle_ops.hpp"
#include "tvb/filtration.hpp"

#include <map>
#include <vector>

namespace tvb {

/// Character-graded dimensions; zero entries are never stored.
struct GradedDims {
    std::map<ZVec, std::size_t> entries;

    std::size_t total() const {
        std::size_t t = 0;
        for (const auto& [u, d] : entries) t += d;
        return t;
    }
    std::size_t at(const ZVec& u) const {
        const auto it = entries.find(u);
        return it == entries.end() ? 0 : it->second;
    }
};

namespace detail {

/// Integer points of the rational polyhedron {u : A u <= b}, found through
/// exact vertex enumeration and a bounding box. Throws if unbounded.
inline std::vector<ZVec> polytope_lattice_points(const ZMat& a, const QVec& b) {
    const std::size_t m = a.rows(), n = a.cols();
    if (n == 0) return {ZVec{}};
    // Boundedness: the recession cone {u : A u <= 0} must be {0}.
    {
        // A line in the recession cone lies in the kernel of A itself.
        if (m == 0 || a.to_q().kernel().rows() > 0)
            throw std::invalid_argument("polytope_lattice_points: unbounded region");
        // Otherwise the recession cone is pointed, and any nonzero element
        // implies an extreme ray: a 1-dimensional kernel of n-1 rows.
        std::vector<int> cur;
        auto rec = [&](auto&& self, int start, int need) -> void {
            if (need == 0) {
                std::vector<ZVec> rows;
                for (int i : cur) rows.push_back(a.row(i));
                const QMat k = rows.empty() ? QMat::identity(n)
                                            : ZMat::from_rows(rows, n).to_q().kernel();
                if (k.rows() != 1) return;
                for (int sgn : {1, -1}) {
                    QVec v = k.row(0);
                    if (sgn < 0)
                        for (auto& x : v) x = -x;
                    bool feasible = true;
                    for (std::size_t i = 0; i < m; ++i)
                        if (dot(to_q(a.row(i)), v) > 0) {
                            feasible = false;
                            break;
                        }
                    if (feasible)
                        throw std::invalid_argument("polytope_lattice_points: unbounded region");
                }
                return;
            }
            for (int i = start; i <= static_cast<int>(m) - need; ++i) {
                cur.push_back(i);
                self(self, i + 1, need - 1);
                cur.pop_back();
            }
        };
        rec(rec, 0, static_cast<int>(n) - 1);
    }
    // Vertices: feasible solutions of full-rank n-subsets of tight rows.
    QVec lo(n), hi(n);
    bool any_vertex = false;
    std::vector<int> cur;
    auto visit = [&](const std::vector<int>& s) {
        QMat sys(n, n);
        QVec rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) sys(i, j) = Rat(a(s[i], j));
            rhs[i] = b[s[i]];
        }
        if (sys.rank() != n) return;
        const auto x = sys.solve(rhs);
        if (!x) return;
        for (std::size_t i = 0; i < m; ++i)
            if (dot(to_q(a.row(i)), *x) > b[i]) return;
        for (std::size_t j = 0; j < n; ++j) {
            if (!any_vertex || (*x)[j] < lo[j]) lo[j] = (*x)[j];
            if (!any_vertex || (*x)[j] > hi[j]) hi[j] = (*x)[j];
        }
        any_vertex = true;
    };
    auto rec2 = [&](auto&& self, int start, int need) -> void {
        if (need == 0) {
            visit(cur);
            return;
        }
        for (int i = start; i <= static_cast<int>(m) - need; ++i) {
            cur.push_back(i);
            self(self, i + 1, need - 1);
            cur.pop_back();
        }
    };
    rec2(rec2, 0, static_cast<int>(n));
    std::vector<ZVec> points;
    if (!any_vertex) return points;  // empty polytope
    // Integer bounding box.
    auto ifloor = [](const Rat& x) {
        const Int num = boost::multiprecision::numerator(x);
        const Int den = boost::multiprecision::denominator(x);
        Int q = num / den;
        if (num % den != 0 && num < 0) --q;
        return q;
    };
    ZVec ilo(n), ihi(n);
    for (std::size_t j = 0; j < n; ++j) {
        ilo[j] = ifloor(lo[j]);
        ihi[j] = -ifloor(-hi[j]);
    }
    ZVec u = ilo;
    while (true) {
        bool feasible = true;
        for (std::size_t i = 0; i < m; ++i) {
            Rat s = 0;
            for (std::size_t j = 0; j < n; ++j) s += Rat(a(i, j)) * Rat(u[j]);
            if (s > b[i]) {
                feasible = false;
                break;
            }
        }
        if (feasible) points.push_back(u);
        std::size_t j = 0;
        while (j < n && u[j] == ihi[j]) {
            u[j] = ilo[j];
            ++j;
        }
        if (j == n) break;
        ++u[j];
    }
    return points;
}

}  // namespace detail

/// Largest level with a nonzero space, per ray: the bounds of the degree
/// polytope {u : <u, rho> <= i_rho} supporting nonzero global sections.
inline std::vector<int> degree_box(const KlyachkoBundle& v) {
    std::vector<int> out;
    for (std::size_t i = 0; i < v.nrays(); ++i) out.push_back(v.filtration(i).max_level());
    return out;
}

/// Degree-u global sections of a fan-based bundle.
inline Subspace sections_degree(const KlyachkoBundle& v, const ZVec& u) {
    if (!v.on_fan()) throw std::invalid_argument("sections_degree: fan base required");
    const Fan& fan = *v.fan();
    Subspace s = Subspace::full(v.rank());
    for (std::size_t i = 0; i < v.nrays(); ++i) {
        const Int lvl = dot(u, fan.rays()[i]);
        s = s.meet(v.filtration(i).evaluate(static_cast<int>(lvl)));
        if (s.is_zero()) break;
    }
    return s;
}

/// All graded global sections, found by enumerating the degree polytope.
inline GradedDims global_sections(const KlyachkoBundle& v) {
    if (!v.on_fan()) throw std::invalid_argument("global_sections: fan base required");
    const Fan& fan = *v.fan();
    const std::size_t n = fan.lattice_rank();
    const auto box = degree_box(v);
    ZMat a(v.nrays(), n);
    QVec b(v.nrays());
    for (std::size_t i = 0; i < v.nrays(); ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = fan.rays()[i][j];
        b[i] = box[i];
    }
    GradedDims out;
    for (const auto& u : detail::polytope_lattice_points(a, b)) {
        const Subspace s = sections_degree(v, u);
        if (!s.is_zero()) out.entries[u] = s.dim();
    }
    return out;
}

namespace detail {

/// Per-degree Čech complex data for the cover by maximal cones.
class CechEngine {
  public:
    explicit CechEngine(const KlyachkoBundle& v) : v_(v), fan_(*v.fan()) {
        const std::size_t m = fan_.maximal_cones().size();
        // Enumerate the nerve: ray-index sets of all intersections of
        // nonempty subsets of maximal cones, grouped by cardinality - 1.
        std::vector<std::pair<std::vector<int>, Cone>> frontier;
        for (std::size_t c = 0; c < m; ++c)
            frontier.emplace_back(std::vector<int>{static_cast<int>(c)},
                                  fan_.maximal_cones()[c]);
        while (!frontier.empty()) {
            std::vector<std::vector<int>> level_sets;
            std::vector<std::vector<int>> level_rays;
            for (const auto& [s, cone] : frontier) {
                level_sets.push_back(s);
                std::vector<int> rays;
                for (const auto& r : cone.rays()) rays.push_back(fan_.ray_index(r));
                std::sort(rays.begin(), rays.end());
                level_rays.push_back(std::move(rays));
            }
            nerve_sets_.push_back(std::move(level_sets));
            nerve_rays_.push_back(std::move(level_rays));
            std::vector<std::pair<std::vector<int>, Cone>> next;
            for (const auto& [s, cone] : frontier)
                for (int c = s.back() + 1; c < static_cast<int>(m); ++c) {
                    std::vector<int> ns = s;
                    ns.push_back(c);
                    next.emplace_back(std::move(ns),
                                      cone.intersection(fan_.maximal_cones()[c]));
                }
            frontier = std::move(next);
        }
    }

    /// All cohomology dimensions h^0..h^{top} at degree u.
    std::vector<std::size_t> cohomology_at(const ZVec& u) const {
        const std::size_t depth = nerve_sets_.size();
        // Spaces E_S(u) per nerve element.
        std::vector<std::vector<Subspace>> spaces(depth);
        for (std::size_t p = 0; p < depth; ++p)
            for (const auto& rays : nerve_rays_[p]) {
                Subspace s = Subspace::full(v_.rank());
                for (int ri : rays) {
                    const Int lvl = dot(u, fan_.rays()[ri]);
                    s = s.meet(v_.filtration(ri).evaluate(static_cast<int>(lvl)));
                }
                spaces[p].push_back(std::move(s));
            }
        std::vector<std::size_t> cdim(depth, 0);
        for (std::size_t p = 0; p < depth; ++p)
            for (const auto& s : spaces[p]) cdim[p] += s.dim();
        // Ranks of the differentials C^p -> C^{p+1} (signed inclusions).
        std::vector<std::size_t> rank_d(depth, 0);
        const std::size_t r = v_.rank();
        for (std::size_t p = 0; p + 1 < depth; ++p) {
            if (cdim[p] == 0 || cdim[p + 1] == 0) continue;
            // Matrix rows: one block of ambient coordinates per target set.
            QMat mat(nerve_sets_[p + 1].size() * r, cdim[p]);
            std::size_t col = 0;
            for (std::size_t src = 0; src < nerve_sets_[p].size(); ++src) {
                const auto& sset = nerve_sets_[p][src];
                const Subspace& ss = spaces[p][src];
                for (std::size_t bb = 0; bb < ss.dim(); ++bb, ++col) {
                    const QVec vec = ss.basis().row(bb);
                    // Targets: supersets of sset with one extra cone.
                    for (std::size_t tgt = 0; tgt < nerve_sets_[p + 1].size(); ++tgt) {
                        const auto& tset = nerve_sets_[p + 1][tgt];
                        int extra = -1, pos = -1;
                        {
                            std::size_t ai = 0;
                            bool super = true;
                            for (std::size_t bi = 0; bi < tset.size(); ++bi) {
                                if (ai < sset.size() && sset[ai] == tset[bi]) {
                                    ++ai;
                                } else if (extra < 0) {
                                    extra = tset[bi];
                                    pos = static_cast<int>(bi);
                                } else {
                                    super = false;
                                    break;
                                }
                            }
                            if (!super || ai != sset.size() || extra < 0) continue;
                        }
                        const int sign = (pos % 2 == 0) ? 1 : -1;
                        for (std::size_t j = 0; j < r; ++j)
                            mat(tgt * r + j, col) += Rat(sign) * vec[j];
                    }
                }
            }
            rank_d[p] = mat.rank();
        }
        std::vector<std::size_t> h(depth, 0);
        for (std::size_t p = 0; p < depth; ++p) {
            const std::size_t below = p == 0 ? 0 : rank_d[p - 1];
            h[p] = cdim[p] - rank_d[p] - below;
        }
        return h;
    }

    const Fan& fan() const { return fan_; }

  private:
    const KlyachkoBundle& v_;
    const Fan& fan_;
    std::vector<std::vector<std::vector<int>>> nerve_sets_;  ///< [p][elem] cone ids
    std::vector<std::vector<std::vector<int>>> nerve_rays_;  ///< [p][elem] ray ids
};

/// Candidate degrees: {u : lo_rho - inflate <= <u,rho> <= hi_rho + inflate}.
inline std::vector<ZVec> degree_region(const KlyachkoBundle& v, int inflate) {
    const Fan& fan = *v.fan();
    const std::size_t n = fan.lattice_rank();
    ZMat a(2 * v.nrays(), n);
    QVec b(2 * v.nrays());
    for (std::size_t i = 0; i < v.nrays(); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a(2 * i, j) = fan.rays()[i][j];
            a(2 * i + 1, j) = -fan.rays()[i][j];
        }
        b[2 * i] = v.filtration(i).max_level() + inflate;
        b[2 * i + 1] = -(v.filtration(i).min_level() - inflate);
    }
    return polytope_lattice_points(a, b);
}

}  // namespace detail

/// All graded Čech cohomology dimensions in position i over the cover by
/// maximal cones. The enumeration region is the jump box inflated by one,
/// with an outer-shell vanishing check that enlarges the region on demand.
inline std::vector<GradedDims> cech_cohomology_all(const KlyachkoBundle& v) {
    if (!v.on_fan()) throw std::invalid_argument("cech_cohomology: fan base required");
    if (!v.fan()->is_complete())
        throw std::invalid_argument("cech_cohomology: complete fan required");
    const detail::CechEngine engine(v);
    const std::size_t n = v.fan()->lattice_rank();
    std::vector<GradedDims> out(n + 1);
    int inflate = 1;
    std::map<ZVec, std::vector<std::size_t>> computed;
    while (true) {
        // Newly visited degrees at inflation > 1 form the outer shell of the
        // previous region; the loop stops once a whole shell vanishes.
        bool shell_hit = false;
        for (const auto& u : detail::degree_region(v, inflate)) {
            auto it = computed.find(u);
            if (it != computed.end()) continue;
            it = computed.emplace(u, engine.cohomology_at(u)).first;
            if (inflate > 1)
                for (const auto d : it->second)
                    if (d != 0) shell_hit = true;
        }
        if (inflate > 1 && !shell_hit) break;
        ++inflate;
        if (inflate > 16)
            throw std::runtime_error("cech_cohomology: degree region failed to stabilize");
    }
    for (const auto& [u, h] : computed)
        for (std::size_t i = 0; i <= n && i < h.size(); ++i)
            if (h[i] != 0) out[i].entries[u] = h[i];
    return out;
}

inline GradedDims cech_cohomology(const KlyachkoBundle& v, int i) {
    const auto all = cech_cohomology_all(v);
    if (i < 0 || i >= static_cast<int>(all.size())) return {};
    return all[static_cast<std::size_t>(i)];
}

/// Graded dims of Ext^i(V, W) = H^i(X, V* ⊗ W).
inline GradedDims ext_graded(const KlyachkoBundle& v, const KlyachkoBundle& w, int i) {
    return cech_cohomology(tensor(dual(v), w), i);
}

struct EulerCharacteristic {
    std::map<ZVec, long long> entries;  ///< signed per-degree totals (zeros omitted)
    long long total = 0;
};

inline EulerCharacteristic euler_characteristic(const KlyachkoBundle& v) {
    const auto all = cech_cohomology_all(v);
    EulerCharacteristic chi;
    for (std::size_t i = 0; i < all.size(); ++i)
        for (const auto& [u, d] : all[i].entries) {
            const long long signed_d =
                (i % 2 == 0) ? static_cast<long long>(d) : -static_cast<long long>(d);
            chi.entries[u] += signed_d;
            chi.total += signed_d;
        }
    for (auto it = chi.entries.begin(); it != chi.entries.end();)
        it = it->second == 0 ? chi.entries.erase(it) : std::next(it);
    return chi;
}

}  // namespace tvb
