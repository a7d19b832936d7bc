#pragma once

// Fans of strongly convex cones: ray bookkeeping, validity / smoothness /
// completeness diagnostics, star fans, and the standard example fans.

#include "tvb/cone.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace tvb {

struct FanDiagnostics {
    bool valid = false;     ///< pairwise intersections are common faces
    bool smooth = false;
    bool simplicial = false;
    bool complete = false;
    std::string detail;     ///< human-readable reason when not valid
};

class Fan {
  public:
    Fan(std::size_t lattice_rank, std::vector<std::vector<ZVec>> maximal_cone_rays)
        : rank_(lattice_rank) {
        for (auto& rs : maximal_cone_rays) cones_.emplace_back(std::move(rs), lattice_rank);
        collect_rays();
    }

    Fan(std::size_t lattice_rank, std::vector<Cone> maximal_cones)
        : rank_(lattice_rank), cones_(std::move(maximal_cones)) {
        for (const auto& c : cones_)
            if (c.ambient_dim() != rank_)
                throw std::invalid_argument("Fan: cone ambient mismatch");
        collect_rays();
    }

    std::size_t lattice_rank() const { return rank_; }
    const std::vector<Cone>& maximal_cones() const { return cones_; }
    const std::vector<ZVec>& rays() const { return rays_; }
    std::size_t nrays() const { return rays_.size(); }

    /// Index of a primitive ray generator in rays(); -1 if absent.
    int ray_index(const ZVec& r) const {
        for (std::size_t i = 0; i < rays_.size(); ++i)
            if (rays_[i] == r) return static_cast<int>(i);
        return -1;
    }

    /// Ray indices of the given maximal cone, in rays() order.
    std::vector<int> cone_ray_indices(std::size_t cone_id) const {
        std::vector<int> out;
        for (const auto& r : cones_[cone_id].rays()) out.push_back(ray_index(r));
        std::sort(out.begin(), out.end());
        return out;
    }

    FanDiagnostics validate() const {
        FanDiagnostics d;
        d.valid = true;
        for (const auto& c : cones_) {
            if (!c.strongly_convex()) {
                d.valid = false;
                d.detail = "cone is not strongly convex";
                return d;
            }
        }
        // Separatedness: every pairwise intersection must be a common face.
        for (std::size_t a = 0; a < cones_.size() && d.valid; ++a)
            for (std::size_t b = a + 1; b < cones_.size() && d.valid; ++b) {
                const Cone inter = cones_[a].intersection(cones_[b]);
                if (!cones_[a].has_face(inter) || !cones_[b].has_face(inter)) {
                    d.valid = false;
                    d.detail = "cones " + std::to_string(a) + " and " + std::to_string(b) +
                               " do not meet in a common face";
                    return d;
                }
            }
        d.simplicial = true;
        d.smooth = true;
        for (const auto& c : cones_) {
            d.simplicial = d.simplicial && c.simplicial();
            d.smooth = d.smooth && c.smooth();
        }
        d.complete = check_complete();
        return d;
    }

    bool is_smooth() const { return validate().smooth; }
    bool is_complete() const { return validate().complete; }

    /// The fan of the invariant divisor of ray r: cones containing r,
    /// projected to N/<r>. The projection matrix is returned alongside.
    Fan star_fan(const ZVec& ray, ZMat* projection_out = nullptr) const;

  private:
    void collect_rays() {
        for (const auto& c : cones_)
            for (const auto& r : c.rays())
                if (ray_index(r) < 0) rays_.push_back(r);
    }

    /// Exact completeness test for full-dimensional maximal cones: every
    /// facet of every maximal cone must be shared with exactly one other.
    bool check_complete() const {
        if (cones_.empty()) return rank_ == 0;
        for (const auto& c : cones_)
            if (c.dim() != rank_) return false;
        // A facet is identified by its sorted primitive ray set.
        std::map<std::vector<ZVec>, int> facet_count;
        for (const auto& c : cones_) {
            for (const auto& f : c.facets()) {
                std::vector<ZVec> key;
                for (int i : f) key.push_back(c.rays()[i]);
                std::sort(key.begin(), key.end());
                ++facet_count[key];
            }
        }
        for (const auto& [key, n] : facet_count)
            if (n != 2) return false;
        return !facet_count.empty() || rank_ <= 1;
    }

    std::size_t rank_ = 0;
    std::vector<Cone> cones_;
    std::vector<ZVec> rays_;
};

inline Fan Fan::star_fan(const ZVec& ray, ZMat* projection_out) const {
    const ZVec r = primitive(ZVec(ray));
    if (ray_index(r) < 0) throw std::invalid_argument("star_fan: not a ray of the fan");
    // Projection N -> N/<r>: a basis of the quotient lattice via SNF of r.
    // Write r = U^{-1} D V^{-1} e_1 style: take SNF of the 1 x n matrix r.
    ZMat rm(1, rank_);
    for (std::size_t j = 0; j < rank_; ++j) rm(0, j) = r[j];
    const SmithResult s = smith_normal_form(rm);
    // U r V = (1,0,...,0) with r primitive, so V^T r = ±e_1 and rows 2..n of
    // V^T give a surjective map N -> Z^{n-1} whose kernel is exactly Z r.
    ZMat proj(rank_ - 1, rank_);
    for (std::size_t i = 1; i < rank_; ++i)
        for (std::size_t j = 0; j < rank_; ++j) proj(i - 1, j) = s.v(j, i);
    if (projection_out) *projection_out = proj;

    auto project = [&](const ZVec& v) {
        ZVec w(rank_ - 1);
        for (std::size_t i = 0; i + 1 < rank_; ++i) {
            Int acc = 0;
            for (std::size_t j = 0; j < rank_; ++j) acc += proj(i, j) * v[j];
            w[i] = acc;
        }
        return w;
    };

    std::vector<Cone> star_cones;
    for (const auto& c : cones_) {
        bool has = false;
        for (const auto& cr : c.rays())
            if (cr == r) has = true;
        if (!has) continue;
        std::vector<ZVec> gens;
        for (const auto& cr : c.rays())
            if (cr != r) gens.push_back(project(cr));
        star_cones.emplace_back(std::move(gens), rank_ - 1);
    }
    return Fan(rank_ - 1, std::move(star_cones));
}

// ---- standard fans -------------------------------------------------------

namespace fans {

inline Fan p1() {
    return Fan(1, std::vector<std::vector<ZVec>>{{{Int(1)}}, {{Int(-1)}}});
}

inline Fan from_rays_and_cones(std::size_t rank, const std::vector<ZVec>& rays,
                               const std::vector<std::vector<int>>& cones) {
    std::vector<std::vector<ZVec>> cs;
    for (const auto& c : cones) {
        std::vector<ZVec> g;
        for (int i : c) g.push_back(rays.at(i));
        cs.push_back(std::move(g));
    }
    return Fan(rank, std::move(cs));
}

inline Fan p2() {
    const std::vector<ZVec> r = {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-1), Int(-1)}};
    return from_rays_and_cones(2, r, {{0, 1}, {1, 2}, {2, 0}});
}

inline Fan p1xp1() {
    const std::vector<ZVec> r = {
        {Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-1), Int(0)}, {Int(0), Int(-1)}};
    return from_rays_and_cones(2, r, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

inline Fan bl1p2() {
    const std::vector<ZVec> r = {
        {Int(1), Int(0)}, {Int(1), Int(1)}, {Int(0), Int(1)}, {Int(-1), Int(-1)}};
    return from_rays_and_cones(2, r, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

inline Fan bl2p2() {
    const std::vector<ZVec> r = {{Int(1), Int(0)},
                                 {Int(1), Int(1)},
                                 {Int(0), Int(1)},
                                 {Int(-1), Int(-1)},
                                 {Int(0), Int(-1)}};
    return from_rays_and_cones(2, r, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
}

inline Fan bl3p2() {
    const std::vector<ZVec> r = {{Int(1), Int(0)},  {Int(1), Int(1)},   {Int(0), Int(1)},
                                 {Int(-1), Int(0)}, {Int(-1), Int(-1)}, {Int(0), Int(-1)}};
    return from_rays_and_cones(2, r, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
}

inline Fan hirzebruch(int a) {
    const std::vector<ZVec> r = {
        {Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-1), Int(a)}, {Int(0), Int(-1)}};
    return from_rays_and_cones(2, r, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

/// Fan of projective n-space: rays e_1..e_n and -(e_1+...+e_n); maximal
/// cones are all n-subsets of the n+1 rays.
inline Fan pn(std::size_t n) {
    std::vector<ZVec> r;
    for (std::size_t i = 0; i < n; ++i) {
        ZVec e(n, Int(0));
        e[i] = 1;
        r.push_back(std::move(e));
    }
    r.push_back(ZVec(n, Int(-1)));
    std::vector<std::vector<int>> cones;
    for (std::size_t omit = 0; omit <= n; ++omit) {
        std::vector<int> c;
        for (std::size_t i = 0; i <= n; ++i)
            if (i != omit) c.push_back(static_cast<int>(i));
        cones.push_back(std::move(c));
    }
    return from_rays_and_cones(n, r, cones);
}

}  // namespace fans

}  // namespace tvb
