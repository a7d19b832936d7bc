#pragma once

// Strongly convex rational polyhedral cones given by ray generators, with
// exact facet enumeration, face lattices, and membership tests.

#include "tvb/matrix.hpp"
#include "tvb/subspace.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

namespace tvb {

class Cone {
  public:
    Cone() = default;

    /// Construct from ray generators (any integer vectors; they are
    /// primitivized and deduplicated, order of first appearance kept).
    Cone(std::vector<ZVec> generators, std::size_t ambient) : ambient_(ambient) {
        for (auto& g : generators) {
            if (g.size() != ambient) throw std::invalid_argument("Cone: ray dimension mismatch");
            ZVec p = primitive(std::move(g));
            if (tvb::is_zero(p)) continue;
            if (std::find(rays_.begin(), rays_.end(), p) == rays_.end())
                rays_.push_back(std::move(p));
        }
        compute();
    }

    static Cone zero(std::size_t ambient) { return Cone({}, ambient); }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return dim_; }
    const std::vector<ZVec>& rays() const { return rays_; }
    std::size_t nrays() const { return rays_.size(); }

    bool strongly_convex() const { return strongly_convex_; }
    bool simplicial() const { return strongly_convex_ && rays_.size() == dim_; }

    /// Do the primitive generators extend to a Z-basis of N?
    bool smooth() const {
        if (!simplicial()) return false;
        if (rays_.empty()) return true;
        const auto f = invariant_factors(ZMat::from_rows(rays_, ambient_));
        for (const auto& d : f)
            if (d != 1) return false;
        return true;
    }

    /// Supporting facet normals (primitive, >= 0 on the cone, within the span).
    const std::vector<ZVec>& facet_normals() const { return facet_normals_; }

    /// Primitive covectors vanishing on the span of the cone.
    const std::vector<ZVec>& span_equations() const { return span_equations_; }

    /// Faces as sorted ray-index subsets (includes the origin {} and, as the
    /// top face, the full index set). Only meaningful for strongly convex cones.
    const std::vector<std::vector<int>>& faces() const { return faces_; }

    /// Facets = faces of dimension dim-1, as ray-index subsets.
    std::vector<std::vector<int>> facets() const {
        std::vector<std::vector<int>> out;
        for (const auto& f : faces_)
            if (face_dim(f) + 1 == dim_) out.push_back(f);
        return out;
    }

    std::size_t face_dim(const std::vector<int>& face) const {
        if (face.empty()) return 0;
        std::vector<ZVec> rs;
        for (int i : face) rs.push_back(rays_[i]);
        return ZMat::from_rows(rs, ambient_).to_q().rank();
    }

    bool contains(const QVec& x) const {
        for (const auto& e : span_equations_)
            if (dot(to_q(e), x) != 0) return false;
        if (dim_ == 0) {
            for (const auto& c : x)
                if (c != 0) return false;
            return true;
        }
        if (dim_ == 1) {
            // x = lambda * ray, lambda >= 0
            const ZVec& r = rays_[0];
            for (std::size_t j = 0; j < ambient_; ++j)
                if (r[j] != 0) return x[j] / Rat(r[j]) >= 0;
            return false;
        }
        for (const auto& n : facet_normals_)
            if (dot(to_q(n), x) < 0) return false;
        return true;
    }

    bool contains(const ZVec& x) const { return contains(to_q(x)); }

    /// Is `other` (a cone with the same ambient lattice) a face of this cone?
    bool has_face(const Cone& other) const {
        std::vector<int> idx;
        for (const auto& r : other.rays()) {
            auto it = std::find(rays_.begin(), rays_.end(), r);
            if (it == rays_.end()) return false;
            idx.push_back(static_cast<int>(it - rays_.begin()));
        }
        std::sort(idx.begin(), idx.end());
        return std::find(faces_.begin(), faces_.end(), idx) != faces_.end();
    }

    Subspace span() const { return Subspace::span_z(rays_, ambient_); }

    bool operator==(const Cone& o) const {
        if (ambient_ != o.ambient_ || rays_.size() != o.rays_.size()) return false;
        auto a = rays_;
        auto b = o.rays_;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        return a == b;
    }

    /// Intersection with another cone (exact, via combined H-representations
    /// and brute-force extreme ray enumeration). Both cones must be strongly
    /// convex; the result is then strongly convex as well.
    Cone intersection(const Cone& o) const;

  private:
    void compute() {
        const ZMat rm = rays_.empty() ? ZMat(0, ambient_) : ZMat::from_rows(rays_, ambient_);
        dim_ = rays_.empty() ? 0 : rm.to_q().rank();

        // Covectors vanishing on the span.
        {
            QMat rt(ambient_, rays_.size());
            for (std::size_t i = 0; i < rays_.size(); ++i)
                for (std::size_t j = 0; j < ambient_; ++j) rt(j, i) = Rat(rays_[i][j]);
            const QMat k = rays_.empty() ? QMat::identity(ambient_) : rt.transposed().kernel();
            for (std::size_t i = 0; i < k.rows(); ++i)
                span_equations_.push_back(primitive(k.row(i)));
        }

        if (dim_ <= 1) {
            strongly_convex_ = rays_.size() <= 1;
            faces_.push_back({});
            if (rays_.size() == 1) faces_.push_back({0});
            return;
        }

        // Facet candidates: normals of hyperplanes spanned by (dim-1)-subsets
        // of the generators, oriented nonnegatively on all generators.
        std::set<ZVec> normals;
        std::vector<int> subset;
        enumerate_subsets(static_cast<int>(rays_.size()), static_cast<int>(dim_) - 1, subset,
                          [&](const std::vector<int>& s) {
                              std::vector<ZVec> rs;
                              for (int i : s) rs.push_back(rays_[i]);
                              const ZMat sub = ZMat::from_rows(rs, ambient_);
                              if (sub.to_q().rank() + 1 != dim_) return;
                              // Covectors vanishing on the subset.
                              QMat st(ambient_, s.size());
                              for (std::size_t i = 0; i < s.size(); ++i)
                                  for (std::size_t j = 0; j < ambient_; ++j)
                                      st(j, i) = Rat(rays_[s[i]][j]);
                              const QMat k = st.transposed().kernel();
                              for (std::size_t i = 0; i < k.rows(); ++i) {
                                  ZVec u = primitive(k.row(i));
                                  // Skip covectors vanishing on the whole span.
                                  bool on_span = true;
                                  for (const auto& r : rays_)
                                      if (dot(u, r) != 0) {
                                          on_span = false;
                                          break;
                                      }
                                  if (on_span) continue;
                                  int sign = 0;
                                  bool ok = true;
                                  for (const auto& r : rays_) {
                                      const Int d = dot(u, r);
                                      if (d == 0) continue;
                                      const int sg = d > 0 ? 1 : -1;
                                      if (sign == 0) sign = sg;
                                      else if (sign != sg) {
                                          ok = false;
                                          break;
                                      }
                                  }
                                  if (!ok) continue;
                                  if (sign < 0) u = negated(std::move(u));
                                  normals.insert(std::move(u));
                              }
                          });
        facet_normals_.assign(normals.begin(), normals.end());

        // Strong convexity: the H-representation must pin down the origin.
        {
            std::vector<ZVec> all = facet_normals_;
            all.insert(all.end(), span_equations_.begin(), span_equations_.end());
            strongly_convex_ =
                !all.empty() && ZMat::from_rows(all, ambient_).to_q().rank() == ambient_;
            if (facet_normals_.empty()) strongly_convex_ = false;
        }

        // Faces: closures of intersections of facet zero-sets.
        if (strongly_convex_) {
            std::vector<std::vector<int>> zero_sets;
            for (const auto& n : facet_normals_) {
                std::vector<int> z;
                for (std::size_t i = 0; i < rays_.size(); ++i)
                    if (dot(n, rays_[i]) == 0) z.push_back(static_cast<int>(i));
                zero_sets.push_back(std::move(z));
            }
            std::set<std::vector<int>> fs;
            std::vector<int> top(rays_.size());
            for (std::size_t i = 0; i < rays_.size(); ++i) top[i] = static_cast<int>(i);
            fs.insert(top);
            bool grew = true;
            while (grew) {
                grew = false;
                for (const auto& f : std::vector<std::vector<int>>(fs.begin(), fs.end()))
                    for (const auto& z : zero_sets) {
                        std::vector<int> inter;
                        std::set_intersection(f.begin(), f.end(), z.begin(), z.end(),
                                              std::back_inserter(inter));
                        if (fs.insert(inter).second) grew = true;
                    }
            }
            fs.insert({});
            faces_.assign(fs.begin(), fs.end());
        }
    }

    template <typename F>
    static void enumerate_subsets(int n, int k, std::vector<int>& cur, F&& f, int start = 0) {
        if (static_cast<int>(cur.size()) == k) {
            f(cur);
            return;
        }
        for (int i = start; i <= n - (k - static_cast<int>(cur.size())); ++i) {
            cur.push_back(i);
            enumerate_subsets(n, k, cur, f, i + 1);
            cur.pop_back();
        }
    }

    std::size_t ambient_ = 0;
    std::size_t dim_ = 0;
    bool strongly_convex_ = true;
    std::vector<ZVec> rays_;
    std::vector<ZVec> facet_normals_;
    std::vector<ZVec> span_equations_;
    std::vector<std::vector<int>> faces_;
};

inline Cone Cone::intersection(const Cone& o) const {
    if (ambient_ != o.ambient_) throw std::invalid_argument("Cone::intersection: ambient mismatch");
    const std::size_t n = ambient_;
    // Combined constraint system: equalities from both spans, inequalities
    // from both facet descriptions. Low-dimensional cones contribute ray
    // half-space descriptions directly.
    std::vector<ZVec> eqs, ineqs;
    auto add_cone = [&](const Cone& c) {
        eqs.insert(eqs.end(), c.span_equations_.begin(), c.span_equations_.end());
        if (c.dim_ == 1) {
            ineqs.push_back(c.rays_[0]);  // <r, x> >= 0 cuts the ray out of its span
        } else {
            ineqs.insert(ineqs.end(), c.facet_normals_.begin(), c.facet_normals_.end());
        }
    };
    add_cone(*this);
    add_cone(o);

    const std::size_t total = eqs.size() + ineqs.size();
    std::vector<ZVec> all = eqs;
    all.insert(all.end(), ineqs.begin(), ineqs.end());
    if (all.empty()) return Cone::zero(n);
    const QMat cm = ZMat::from_rows(all, n).to_q();

    // Extreme rays: 1-dimensional kernels of active subsets.
    std::set<ZVec> found;
    std::vector<int> subset;
    const int need = static_cast<int>(n) - 1 - static_cast<int>(eqs.size());
    auto try_active = [&](const std::vector<int>& extra) {
        std::vector<ZVec> act = eqs;
        for (int i : extra) act.push_back(ineqs[i]);
        const QMat k = ZMat::from_rows(act, n).to_q().kernel();
        if (k.rows() != 1) return;
        for (int sgn : {1, -1}) {
            QVec v = k.row(0);
            if (sgn < 0)
                for (auto& x : v) x = -x;
            bool feas = true;
            for (const auto& u : ineqs)
                if (dot(to_q(u), v) < 0) {
                    feas = false;
                    break;
                }
            if (feas) found.insert(primitive(v));
        }
    };
    if (need <= 0) {
        try_active({});
    }
    for (int k = std::max(need, 1); k <= static_cast<int>(ineqs.size()); ++k) {
        enumerate_subsets(static_cast<int>(ineqs.size()), k, subset, try_active);
    }
    (void)total;
    (void)cm;
    return Cone(std::vector<ZVec>(found.begin(), found.end()), n);
}

}  // namespace tvb
