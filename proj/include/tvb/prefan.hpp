#pragma once

// Prefans: finite posets of cones allowing repeated geometric images (the
// combinatorial model of possibly non-separated toric quotients), and their
// stacky refinement carrying finite-index sublattice data per element.

#include "tvb/cone.hpp"
#include "tvb/fan.hpp"

#include <map>
#include <string>
#include <vector>

namespace tvb {

/// A finite poset with a unique minimal element together with a cone for
/// each element. Distinct elements may carry the same cone; the poset is the
/// primary datum and is never reconstructed from geometry.
class Prefan {
  public:
    Prefan(std::size_t ambient, std::vector<Cone> cones, std::vector<std::pair<int, int>> less)
        : ambient_(ambient), cones_(std::move(cones)) {
        const std::size_t n = cones_.size();
        leq_.assign(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i) leq_[i][i] = true;
        for (auto [a, b] : less) leq_.at(a).at(b) = true;
        // Transitive closure.
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                if (leq_[i][k])
                    for (std::size_t j = 0; j < n; ++j)
                        if (leq_[k][j]) leq_[i][j] = true;
    }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t size() const { return cones_.size(); }
    const Cone& cone(std::size_t e) const { return cones_.at(e); }
    bool leq(std::size_t a, std::size_t b) const { return leq_.at(a).at(b); }

    std::vector<int> down_set(std::size_t e) const {
        std::vector<int> out;
        for (std::size_t i = 0; i < size(); ++i)
            if (leq_[i][e]) out.push_back(static_cast<int>(i));
        return out;
    }

    std::vector<int> maximal_elements() const {
        std::vector<int> out;
        for (std::size_t i = 0; i < size(); ++i) {
            bool maximal = true;
            for (std::size_t j = 0; j < size(); ++j)
                if (j != i && leq_[i][j]) maximal = false;
            if (maximal) out.push_back(static_cast<int>(i));
        }
        return out;
    }

    /// Elements whose cone is one-dimensional.
    std::vector<int> ray_elements() const {
        std::vector<int> out;
        for (std::size_t i = 0; i < size(); ++i)
            if (cones_[i].dim() == 1) out.push_back(static_cast<int>(i));
        return out;
    }

    int minimal_element() const {
        int min = -1;
        for (std::size_t i = 0; i < size(); ++i) {
            bool is_min = true;
            for (std::size_t j = 0; j < size(); ++j)
                if (j != i && leq_[j][i]) is_min = false;
            // A minimal element must lie below everything for uniqueness;
            // here we just report an element with nothing strictly below.
            if (is_min) {
                if (min >= 0) return -1;  // not unique
                min = static_cast<int>(i);
            }
        }
        return min;
    }

    /// Checks the prefan axioms: antisymmetry, unique minimal element mapped
    /// to the zero cone, and for each element an order isomorphism between
    /// its down-set and the face lattice of its cone.
    bool validate(std::string* why = nullptr) const {
        auto fail = [&](const std::string& msg) {
            if (why) *why = msg;
            return false;
        };
        const std::size_t n = size();
        if (n == 0) return fail("empty prefan");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && leq_[i][j] && leq_[j][i]) return fail("poset not antisymmetric");
        const int min = minimal_element();
        if (min < 0) return fail("minimal element not unique");
        for (std::size_t i = 0; i < n; ++i)
            if (!leq_[min][i]) return fail("minimal element not below all elements");
        if (cones_[min].dim() != 0) return fail("minimal element must carry the zero cone");

        for (std::size_t e = 0; e < n; ++e) {
            if (!cones_[e].strongly_convex() && cones_[e].dim() > 0)
                return fail("cone not strongly convex");
            // Down-set must be in order-preserving bijection with the face
            // lattice of cone(e), matching each element to its cone.
            const auto down = down_set(e);
            const auto& faces = cones_[e].faces();
            if (down.size() != faces.size()) return fail("down-set size mismatch at element");
            std::vector<int> face_of(down.size(), -1);
            std::vector<bool> used(faces.size(), false);
            for (std::size_t a = 0; a < down.size(); ++a) {
                // The element's cone must be a face of cone(e); identify it.
                const Cone& ca = cones_[down[a]];
                int match = -1;
                for (std::size_t f = 0; f < faces.size(); ++f) {
                    if (used[f]) continue;
                    std::vector<ZVec> frays;
                    for (int ri : faces[f]) frays.push_back(cones_[e].rays()[ri]);
                    if (Cone(frays, ambient_) == ca) {
                        match = static_cast<int>(f);
                        break;
                    }
                }
                if (match < 0) return fail("down-set element is not a face of the cone");
                used[match] = true;
                face_of[a] = match;
            }
            // Order-preservation: poset order below e must agree with face
            // containment (ray-subset inclusion).
            for (std::size_t a = 0; a < down.size(); ++a)
                for (std::size_t b = 0; b < down.size(); ++b) {
                    const bool po = leq_[down[a]][down[b]];
                    const auto& fa = faces[face_of[a]];
                    const auto& fb = faces[face_of[b]];
                    const bool fo = std::includes(fb.begin(), fb.end(), fa.begin(), fa.end());
                    if (po != fo) return fail("down-set order does not match face lattice");
                }
        }
        return true;
    }

  private:
    std::size_t ambient_ = 0;
    std::vector<Cone> cones_;
    std::vector<std::vector<bool>> leq_;
};

/// A prefan together with a finite-index sublattice N0_sigma of
/// N_sigma = span(cone) ∩ N for every element, stored as an HNF row basis.
class StackyPrefan {
  public:
    StackyPrefan(Prefan prefan, std::vector<ZMat> sublattices)
        : prefan_(std::move(prefan)), sub_(std::move(sublattices)) {
        if (sub_.size() != prefan_.size())
            throw std::invalid_argument("StackyPrefan: one sublattice per element required");
        for (auto& m : sub_) m = hermite_normal_form(m);
    }

    const Prefan& prefan() const { return prefan_; }
    std::size_t ambient_dim() const { return prefan_.ambient_dim(); }
    std::size_t size() const { return prefan_.size(); }

    /// HNF basis of N0_sigma (rows, in N̄ coordinates).
    const ZMat& sublattice(std::size_t e) const { return sub_.at(e); }

    /// HNF basis of N_sigma = span(cone(e)) ∩ N̄.
    ZMat saturated_lattice(std::size_t e) const {
        const Cone& c = prefan_.cone(e);
        if (c.rays().empty()) return ZMat(0, ambient_dim());
        return saturation(ZMat::from_rows(c.rays(), ambient_dim()));
    }

    /// Invariant factors (> 1) of the stabilizer G_sigma = N_sigma / N0_sigma.
    std::vector<Int> stabilizer(std::size_t e) const {
        const ZMat sat = saturated_lattice(e);
        const ZMat& sub = sub_.at(e);
        // Express each basis vector of N0 in the basis of N_sigma.
        QMat satq(ambient_dim(), sat.rows());
        for (std::size_t i = 0; i < sat.rows(); ++i)
            for (std::size_t j = 0; j < ambient_dim(); ++j) satq(j, i) = Rat(sat(i, j));
        ZMat coords(sub.rows(), sat.rows());
        for (std::size_t i = 0; i < sub.rows(); ++i) {
            const auto x = satq.solve(to_q(sub.row(i)));
            if (!x) throw std::invalid_argument("stabilizer: sublattice escapes the span");
            for (std::size_t j = 0; j < sat.rows(); ++j) {
                if (boost::multiprecision::denominator((*x)[j]) != 1)
                    throw std::invalid_argument("stabilizer: non-integral coordinates");
                coords(i, j) = boost::multiprecision::numerator((*x)[j]);
            }
        }
        std::vector<Int> out;
        for (const auto& f : invariant_factors(coords))
            if (f > 1) out.push_back(f);
        return out;
    }

    /// Smallest d > 0 with d * (primitive generator of ray element e) in N0_e;
    /// d * r is then the primitive generator with respect to N0.
    Int ray_multiplicity(std::size_t e) const {
        const Cone& c = prefan_.cone(e);
        if (c.dim() != 1) throw std::invalid_argument("ray_multiplicity: not a ray element");
        const ZVec r = c.rays()[0];
        const auto facs = stabilizer(e);
        Int d = 1;
        for (const auto& f : facs) d *= f;  // rank-1 quotient is cyclic
        // Sanity: d * r must lie in the sublattice.
        ZVec dr(r.size());
        for (std::size_t j = 0; j < r.size(); ++j) dr[j] = d * r[j];
        const ZMat& sub = sub_.at(e);
        ZMat subt(ambient_dim(), sub.rows());
        for (std::size_t i = 0; i < sub.rows(); ++i)
            for (std::size_t j = 0; j < ambient_dim(); ++j) subt(j, i) = sub(i, j);
        if (!solve_integer(subt, dr))
            throw std::invalid_argument("ray_multiplicity: inconsistent sublattice");
        return d;
    }

    bool validate(std::string* why = nullptr) const {
        auto fail = [&](const std::string& msg) {
            if (why) *why = msg;
            return false;
        };
        if (!prefan_.validate(why)) return false;
        for (std::size_t e = 0; e < size(); ++e) {
            const ZMat sat = saturated_lattice(e);
            if (sub_[e].rows() != sat.rows()) return fail("sublattice rank mismatch");
            if (sub_[e].rows() > 0 &&
                lattice_intersection(sub_[e], sat) != hermite_normal_form(sub_[e]))
                return fail("sublattice not contained in N_sigma");
            // Order compatibility: N0_tau = N_tau ∩ N0_sigma for tau <= sigma.
            for (std::size_t t = 0; t < size(); ++t) {
                if (t == e || !prefan_.leq(t, e)) continue;
                const ZMat expected = lattice_intersection(saturated_lattice(t), sub_[e]);
                if (expected != sub_[t]) return fail("sublattice order compatibility fails");
            }
        }
        return true;
    }

  private:
    Prefan prefan_;
    std::vector<ZMat> sub_;
};

/// The trivial stacky structure on a prefan: N0_sigma = N_sigma everywhere.
inline StackyPrefan trivial_stacky(Prefan p) {
    std::vector<ZMat> subs;
    for (std::size_t e = 0; e < p.size(); ++e) {
        const Cone& c = p.cone(e);
        if (c.rays().empty())
            subs.emplace_back(0, p.ambient_dim());
        else
            subs.push_back(saturation(ZMat::from_rows(c.rays(), p.ambient_dim())));
    }
    return StackyPrefan(std::move(p), std::move(subs));
}

/// View a fan as a prefan: elements are all distinct faces of all maximal
/// cones, ordered by inclusion.
inline Prefan fan_to_prefan(const Fan& fan) {
    std::vector<Cone> cones;
    auto find_or_add = [&](const Cone& c) {
        for (std::size_t i = 0; i < cones.size(); ++i)
            if (cones[i] == c) return static_cast<int>(i);
        cones.push_back(c);
        return static_cast<int>(cones.size()) - 1;
    };
    find_or_add(Cone::zero(fan.lattice_rank()));
    for (const auto& mc : fan.maximal_cones())
        for (const auto& f : mc.faces()) {
            std::vector<ZVec> rays;
            for (int i : f) rays.push_back(mc.rays()[i]);
            find_or_add(Cone(rays, fan.lattice_rank()));
        }
    std::vector<std::pair<int, int>> less;
    for (std::size_t a = 0; a < cones.size(); ++a)
        for (std::size_t b = 0; b < cones.size(); ++b)
            if (a != b && cones[b].has_face(cones[a]))
                less.emplace_back(static_cast<int>(a), static_cast<int>(b));
    return Prefan(fan.lattice_rank(), std::move(cones), std::move(less));
}

}  // namespace tvb
