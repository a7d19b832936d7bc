#pragma once

// Global vector fields on complete rational complexity-one torus varieties:
// per-degree section spaces on (weighted) projective-line quotients, the
// bridge from a rank-one toric downgrade, chart intersection for
// non-separated quotients, and the total graded dimension.

#include "tvb/cohomology.hpp"
#include "tvb/downgrade.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tvb {

namespace detail {

inline Int rat_floor(const Rat& x) {
    const Int num = boost::multiprecision::numerator(x);
    const Int den = boost::multiprecision::denominator(x);
    Int q = num / den;
    if (num % den != 0 && ((num < 0) != (den < 0))) q -= 1;
    return q;
}

/// h^0(P^1, O(D)) for a divisor of the given degree.
inline std::size_t h0_p1(const Int& deg) {
    if (deg < 0) return 0;
    return static_cast<std::size_t>(deg + 1);
}

}  // namespace detail

/// One marked point of the quotient projective line: either a finite
/// rational coordinate or infinity, with its attached vector v_P in N⊗Q.
struct C1Point {
    bool at_infinity = false;
    Rat coord = 0;  ///< meaningful iff !at_infinity
    QVec v;         ///< v_P, length = rank of N

    /// Smallest positive integer n with n * v_P in N.
    Int n_p() const {
        Int n = 1;
        for (const auto& c : v) n = n / igcd(n, boost::multiprecision::denominator(c)) *
                                    boost::multiprecision::denominator(c);
        return n;
    }
};

struct C1Data {
    std::size_t rank = 0;         ///< rank m of the lattice N
    std::vector<C1Point> points;  ///< marked points, pairwise distinct
    std::vector<ZVec> h;          ///< contracted set H: primitive vectors in N

    void validate() const {
        for (std::size_t a = 0; a < points.size(); ++a) {
            if (points[a].v.size() != rank)
                throw std::invalid_argument("C1Data: v_P length mismatch");
            for (std::size_t b = a + 1; b < points.size(); ++b) {
                const bool same =
                    points[a].at_infinity == points[b].at_infinity &&
                    (points[a].at_infinity || points[a].coord == points[b].coord);
                if (same) throw std::invalid_argument("C1Data: repeated marked point");
            }
        }
        for (const auto& g : h)
            if (g.size() != rank) throw std::invalid_argument("C1Data: H vector length mismatch");
    }
};

/// The combinatorial data of a degree u: alpha values, the divisor gamma(u),
/// the integrality split of the point set, and the vector v(u).
struct AlphaGamma {
    std::vector<Rat> alpha;       ///< alpha_P(u) per point
    std::vector<Int> gamma;       ///< floor(alpha_P(u)) per point
    std::vector<int> p_integral;  ///< indices with alpha integral (the set P(u))
    std::vector<int> p_rest;      ///< complement (the set P-bar(u))
    QVec v_u;                     ///< sum of v_P over P(u)
};

inline AlphaGamma alpha_gamma(const C1Data& data, const ZVec& u) {
    data.validate();
    if (u.size() != data.rank) throw std::invalid_argument("alpha_gamma: degree length mismatch");
    AlphaGamma out;
    out.v_u.assign(data.rank, Rat(0));
    for (std::size_t i = 0; i < data.points.size(); ++i) {
        const auto& p = data.points[i];
        const Int n = p.n_p();
        Rat a = Rat(1 - n, n);
        for (std::size_t j = 0; j < data.rank; ++j) a -= Rat(u[j]) * p.v[j];
        out.alpha.push_back(a);
        out.gamma.push_back(detail::rat_floor(a));
        if (boost::multiprecision::denominator(a) == 1) {
            out.p_integral.push_back(static_cast<int>(i));
            for (std::size_t j = 0; j < data.rank; ++j) out.v_u[j] += p.v[j];
        } else {
            out.p_rest.push_back(static_cast<int>(i));
        }
    }
    return out;
}

/// The degree-u space of global vector fields, per the four-case formula.
struct VfSections {
    std::size_t dim = 0;
    int case_id = 4;  ///< 1: P(u)=P and v(u)!=0; 2: generic; 3: boundary u(rho)=1; 4: zero
    std::size_t horizontal_dim = 0;  ///< sections tensored with V(u) / N / the boundary ray
    std::size_t vertical_dim = 0;    ///< sections multiplying e(u) (and y e(u) - d_v)
    std::vector<std::string> basis;  ///< symbolic description of the generators
};

inline VfSections vf_sections_degree(const C1Data& data, const ZVec& u,
                                     const std::optional<QMat>& hyperplane = std::nullopt,
                                     const std::optional<int>& eps_point = std::nullopt) {
    const AlphaGamma ag = alpha_gamma(data, u);
    const std::size_t m = data.rank;

    // Degree of L^{-u} = O(sum floor(-u(v_P)) P).
    Int deg_l = 0;
    for (const auto& p : data.points) {
        Rat x = 0;
        for (std::size_t j = 0; j < m; ++j) x -= Rat(u[j]) * p.v[j];
        deg_l += detail::rat_floor(x);
    }
    Int deg_gamma = 0;
    for (const auto& g : ag.gamma) deg_gamma += g;

    // Classify u against the contracted set H.
    std::size_t at_one = 0, above_one = 0;
    for (const auto& g : data.h) {
        Int val = 0;
        for (std::size_t j = 0; j < m; ++j) val += u[j] * g[j];
        if (val == 1)
            ++at_one;
        else if (val > 1)
            ++above_one;
    }

    // Validate the epsilon choice: a finite point of P-bar(u).
    if (eps_point) {
        const auto& rest = ag.p_rest;
        if (std::find(rest.begin(), rest.end(), *eps_point) == rest.end() ||
            data.points[*eps_point].at_infinity)
            throw std::invalid_argument("vf_sections_degree: invalid epsilon choice");
    }

    VfSections out;
    if (above_one > 0 || at_one > 1) {
        out.case_id = 4;
        return out;
    }
    if (at_one == 1) {
        out.case_id = 3;
        out.horizontal_dim = detail::h0_p1(deg_l);
        out.dim = out.horizontal_dim;
        for (std::size_t k = 0; k < out.horizontal_dim; ++k)
            out.basis.push_back("f_" + std::to_string(k) + " * d_rho");
        return out;
    }

    const bool full_integral = ag.p_rest.empty();
    bool v_nonzero = false;
    for (const auto& c : ag.v_u)
        if (c != 0) v_nonzero = true;
    if (full_integral && v_nonzero) {
        out.case_id = 1;
        // Validate the hyperplane choice: codimension one, missing v(u).
        if (hyperplane) {
            if (hyperplane->rows() + 1 != m || hyperplane->cols() != m)
                throw std::invalid_argument("vf_sections_degree: hyperplane shape mismatch");
            QMat ext(m, m);
            for (std::size_t i = 0; i + 1 < m; ++i)
                for (std::size_t j = 0; j < m; ++j) ext(i, j) = (*hyperplane)(i, j);
            for (std::size_t j = 0; j < m; ++j) ext(m - 1, j) = ag.v_u[j];
            if (hyperplane->rank() != m - 1 || ext.rank() != m)
                throw std::invalid_argument("vf_sections_degree: hyperplane contains v(u)");
        }
        out.horizontal_dim = detail::h0_p1(deg_l) * (m - 1);
        out.vertical_dim = 2 * detail::h0_p1(deg_gamma + 1);
        for (std::size_t k = 0; k < detail::h0_p1(deg_l); ++k)
            for (std::size_t j = 0; j + 1 < m; ++j)
                out.basis.push_back("f_" + std::to_string(k) + " * d_V" + std::to_string(j));
        for (std::size_t k = 0; k < detail::h0_p1(deg_gamma + 1); ++k) {
            out.basis.push_back("g_" + std::to_string(k) + " * e(u)");
            out.basis.push_back("g_" + std::to_string(k) + " * (y e(u) - d_v(u))");
        }
    } else {
        out.case_id = 2;
        out.horizontal_dim = detail::h0_p1(deg_l) * m;
        out.vertical_dim = detail::h0_p1(deg_gamma + 2);
        for (std::size_t k = 0; k < detail::h0_p1(deg_l); ++k)
            for (std::size_t j = 0; j < m; ++j)
                out.basis.push_back("f_" + std::to_string(k) + " * d_N" + std::to_string(j));
        for (std::size_t k = 0; k < detail::h0_p1(deg_gamma + 2); ++k)
            out.basis.push_back("g_" + std::to_string(k) + " * e(u)");
    }
    out.dim = out.horizontal_dim + out.vertical_dim;
    return out;
}

/// Total graded dimension of the global vector fields: enumerate the degree
/// region {u(rho) <= 1 for rho in H} ∩ {u(sum v_P) <= 2} and sum the
/// per-degree dimensions. Throws if the region is unbounded.
inline GradedDims total_vf(const C1Data& data) {
    data.validate();
    const std::size_t m = data.rank;
    QVec vsum(m, Rat(0));
    for (const auto& p : data.points)
        for (std::size_t j = 0; j < m; ++j) vsum[j] += p.v[j];
    Int den = 1;
    for (const auto& c : vsum) {
        const Int d = boost::multiprecision::denominator(c);
        den = den / igcd(den, d) * d;
    }
    ZMat a(data.h.size() + 1, m);
    QVec b(data.h.size() + 1);
    for (std::size_t i = 0; i < data.h.size(); ++i) {
        for (std::size_t j = 0; j < m; ++j) a(i, j) = data.h[i][j];
        b[i] = 1;
    }
    for (std::size_t j = 0; j < m; ++j) {
        const Rat scaled = vsum[j] * den;
        a(data.h.size(), j) = boost::multiprecision::numerator(scaled);
    }
    b[data.h.size()] = Rat(2 * den);

    GradedDims out;
    for (const auto& u : detail::polytope_lattice_points(a, b)) {
        const auto s = vf_sections_degree(data, u);
        if (s.dim > 0) out.entries[u] = s.dim;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Chart intersection for non-separated quotients

/// A finite-dimensional space of rational functions in the shared coordinate
/// y: basis numerators over the common denominator prod (y - p)^order.
struct RationalFunctionSpace {
    std::vector<std::pair<Rat, int>> poles;       ///< distinct finite poles with orders
    std::vector<std::vector<Rat>> numerators;     ///< basis, coefficients by ascending power
};

namespace detail {

inline std::vector<Rat> poly_mul(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Rat> out(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

inline std::vector<Rat> poly_from_roots(const std::vector<std::pair<Rat, int>>& roots) {
    std::vector<Rat> p = {Rat(1)};
    for (const auto& [r, mult] : roots)
        for (int k = 0; k < mult; ++k) p = poly_mul(p, {-r, Rat(1)});
    return p;
}

}  // namespace detail

/// Dimension of the intersection of several rational-function spaces, all
/// expressed in the same coordinate.
inline std::size_t chart_intersect(const std::vector<RationalFunctionSpace>& spaces) {
    if (spaces.empty()) throw std::invalid_argument("chart_intersect: no charts");
    std::map<Rat, int> common;
    for (const auto& s : spaces) {
        std::map<Rat, int> own;
        for (const auto& [p, ord] : s.poles) {
            if (ord <= 0 || own.count(p))
                throw std::invalid_argument("chart_intersect: malformed pole divisor");
            own[p] = ord;
            common[p] = std::max(common[p], ord);
        }
    }
    // Rescale each basis to the common denominator and intersect the spans.
    std::vector<std::vector<std::vector<Rat>>> scaled;
    std::size_t width = 1;
    for (const auto& s : spaces) {
        std::map<Rat, int> own;
        for (const auto& [p, ord] : s.poles) own[p] = ord;
        std::vector<std::pair<Rat, int>> missing;
        for (const auto& [p, ord] : common) {
            const int have = own.count(p) ? own[p] : 0;
            if (ord > have) missing.emplace_back(p, ord - have);
        }
        const auto factor = detail::poly_from_roots(missing);
        std::vector<std::vector<Rat>> rows;
        for (const auto& n : s.numerators) {
            rows.push_back(detail::poly_mul(n, factor));
            width = std::max(width, rows.back().size());
        }
        scaled.push_back(std::move(rows));
    }
    std::optional<Subspace> meet;
    for (auto& rows : scaled) {
        std::vector<QVec> padded;
        for (auto& r : rows) {
            r.resize(width, Rat(0));
            padded.push_back(r);
        }
        const Subspace s = Subspace::span(padded, width);
        meet = meet ? meet->meet(s) : s;
    }
    return meet->dim();
}

// ---------------------------------------------------------------------------
// Bridge from a toric downgrade

/// Translate a rank-one toric downgrade with separated quotient into
/// complexity-one data: the ray element with positive image becomes the
/// point 0, the negative one becomes infinity, v_P = rho/d - s(image sign)
/// in kernel coordinates, and the contracted rays form H.
inline C1Data c1_from_downgrade(const DowngradeResult& geo, const ProjectionData& proj) {
    if (proj.mu.rows() != 1)
        throw std::invalid_argument("c1_from_downgrade: rank-one quotient required");
    const std::size_t n = proj.mu.cols();
    const std::size_t m = proj.kernel.rows();

    // Integral section s of mu.
    const auto s = solve_integer(proj.mu, ZVec{Int(1)});
    if (!s) throw std::invalid_argument("c1_from_downgrade: projection not surjective");

    // Coordinates in the kernel basis.
    QMat kt(n, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) kt(j, i) = Rat(proj.kernel(i, j));
    auto kernel_coords = [&](const QVec& w) {
        const auto c = kt.solve(w);
        if (!c) throw std::invalid_argument("c1_from_downgrade: vector outside the kernel");
        return *c;
    };

    C1Data data;
    data.rank = m;
    const auto rays = geo.quotient->prefan().ray_elements();
    bool seen_pos = false, seen_neg = false;
    for (int e : rays) {
        const ZVec rho = geo.sigma_prime[e].rays()[0];
        const Int image = proj.mu.apply(rho)[0];
        const Int d = image < 0 ? -image : image;
        const int sign = image < 0 ? -1 : 1;
        if (sign > 0) {
            if (seen_pos)
                throw std::invalid_argument("c1_from_downgrade: non-separated quotient");
            seen_pos = true;
        } else {
            if (seen_neg)
                throw std::invalid_argument("c1_from_downgrade: non-separated quotient");
            seen_neg = true;
        }
        QVec w(n);
        for (std::size_t j = 0; j < n; ++j) w[j] = Rat(rho[j], d) - Rat(sign * (*s)[j]);
        C1Point p;
        p.at_infinity = sign < 0;
        p.coord = 0;
        p.v = kernel_coords(w);
        data.points.push_back(std::move(p));
    }
    for (const auto& g : geo.contracted) {
        const auto c = kernel_coords(to_q(g));
        ZVec zc(m);
        for (std::size_t j = 0; j < m; ++j) {
            if (boost::multiprecision::denominator(c[j]) != 1)
                throw std::invalid_argument("c1_from_downgrade: non-integral contracted ray");
            zc[j] = boost::multiprecision::numerator(c[j]);
        }
        data.h.push_back(std::move(zc));
    }
    data.validate();
    return data;
}

}  // namespace tvb
