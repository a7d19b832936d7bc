#include <doctest.h>

#include "tvb/cone.hpp"
#include "tvb/fan.hpp"
#include "tvb/matrix.hpp"
#include "tvb/subspace.hpp"

#include <random>

using namespace tvb;

namespace {

ZVec zv(std::initializer_list<int> xs) {
    ZVec v;
    for (int x : xs) v.emplace_back(x);
    return v;
}

QVec qv(std::initializer_list<int> xs) {
    QVec v;
    for (int x : xs) v.emplace_back(x);
    return v;
}

ZMat zmat(std::initializer_list<std::initializer_list<int>> rows) {
    std::vector<ZVec> rs;
    std::size_t cols = 0;
    for (auto& r : rows) {
        rs.push_back(zv(r));
        cols = rs.back().size();
    }
    return ZMat::from_rows(rs, cols);
}

bool is_unimodular(const ZMat& m) {
    return m.rows() == m.cols() && abs(boost::multiprecision::numerator(m.to_q().det())) == 1 &&
           boost::multiprecision::denominator(m.to_q().det()) == 1;
}

void check_snf(const ZMat& a) {
    const auto s = smith_normal_form(a);
    CHECK(s.u * a * s.v == s.d);
    CHECK(is_unimodular(s.u));
    CHECK(is_unimodular(s.v));
    Int prev = 0;
    for (std::size_t t = 0; t < std::min(a.rows(), a.cols()); ++t) {
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (j != t) CHECK(s.d(t, j) == 0);
        const Int cur = s.d(t, t);
        CHECK(cur >= 0);
        if (prev != 0) CHECK(cur % prev == 0);
        prev = cur;
    }
}

}  // namespace

TEST_CASE("smith normal form: pinned examples") {
    {
        const auto s = smith_normal_form(zmat({{1}}));
        CHECK(s.d(0, 0) == 1);
    }
    {
        const auto s = smith_normal_form(zmat({{0, 1}, {1, 0}}));
        CHECK(s.d(0, 0) == 1);
        CHECK(s.d(1, 1) == 1);
    }
    {
        // Oracle: d1 = gcd of all entries, d1*d2 = |det|.
        const ZMat a = zmat({{2, 0}, {0, 3}});
        const auto s = smith_normal_form(a);
        CHECK(s.d(0, 0) == igcd(igcd(a(0, 0), a(0, 1)), igcd(a(1, 0), a(1, 1))));
        CHECK(s.d(0, 0) * s.d(1, 1) ==
              abs(boost::multiprecision::numerator(a.to_q().det())));
        CHECK(s.d(0, 0) == 1);
        CHECK(s.d(1, 1) == 6);
        check_snf(a);
    }
}

TEST_CASE("smith normal form: random property suite") {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> dim(1, 4), val(-9, 9);
    for (int trial = 0; trial < 60; ++trial) {
        ZMat a(dim(rng), dim(rng));
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = val(rng);
        check_snf(a);
    }
}

TEST_CASE("integer solving and lattices") {
    // 2x = 4 solvable, 2x = 3 not.
    CHECK(solve_integer(zmat({{2}}), zv({4})).has_value());
    CHECK(!solve_integer(zmat({{2}}), zv({3})).has_value());
    {
        const ZMat a = zmat({{1, 0}, {1, 2}});
        const auto x = solve_integer(a, zv({3, 5}));
        REQUIRE(x.has_value());
        CHECK(a.apply(*x) == zv({3, 5}));
        CHECK(!solve_integer(a, zv({0, 1})).has_value());
    }
    // Saturation of a full-rank sublattice is the whole ambient lattice.
    {
        const ZMat sat = saturation(zmat({{2, 2}, {2, -2}}));
        CHECK(sat == ZMat::identity(2));
    }
    // Saturation of <(2,2)> is <(1,1)>.
    {
        const ZMat sat = saturation(zmat({{2, 2}}));
        CHECK(sat == hermite_normal_form(zmat({{1, 1}})));
    }
    // Kernel of (1,1,1): contains (1,-1,0) and (0,1,-1), saturated.
    {
        const ZMat k = integer_kernel(zmat({{1, 1, 1}}));
        CHECK(k.rows() == 2);
        for (std::size_t i = 0; i < k.rows(); ++i) {
            const ZVec r = k.row(i);
            CHECK(r[0] + r[1] + r[2] == 0);
        }
        // The saturated kernel must contain (1,-1,0) as an integer combination.
        ZMat kt(3, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 3; ++j) kt(j, i) = k(i, j);
        CHECK(solve_integer(kt, zv({1, -1, 0})).has_value());
    }
    // Intersection of 2Z^2 with the diagonal lattice <(1,1)> is <(2,2)>.
    {
        const ZMat inter = lattice_intersection(zmat({{2, 0}, {0, 2}}), zmat({{1, 1}}));
        CHECK(inter == hermite_normal_form(zmat({{2, 2}})));
    }
}

TEST_CASE("hermite normal form canonicalizes row lattices") {
    const ZMat a = hermite_normal_form(zmat({{1, 2}, {3, 4}}));
    const ZMat b = hermite_normal_form(zmat({{3, 4}, {4, 6}}));  // same lattice
    CHECK(a == b);
}

TEST_CASE("subspace meet/join/complement") {
    const auto e1 = Subspace::span({qv({1, 0})}, 2);
    const auto e2 = Subspace::span({qv({0, 1})}, 2);
    const auto diag = Subspace::span({qv({1, 1})}, 2);

    CHECK(e1.meet(e2) == Subspace::zero(2));
    CHECK(Subspace::full(2).meet(diag) == diag);
    {
        const auto a = Subspace::span({qv({1, 0, 0}), qv({0, 1, 0})}, 3);
        const auto b = Subspace::span({qv({0, 1, 0}), qv({0, 0, 1})}, 3);
        CHECK(a.meet(b) == Subspace::span({qv({0, 1, 0})}, 3));
    }
    CHECK(e1.join(e2) == Subspace::full(2));
    CHECK(e1.join(Subspace::zero(2)) == e1);
    CHECK(diag.join(Subspace::span({qv({1, -1})}, 2)) == Subspace::full(2));

    CHECK(Subspace::zero(2).complement_in(Subspace::full(2)) == Subspace::full(2));
    CHECK(e1.complement_in(Subspace::full(2)) == e2);
    {
        const auto c = diag.complement_in(Subspace::full(2));
        CHECK(c.dim() == 1);
        CHECK(c.meet(diag) == Subspace::zero(2));
        CHECK(c.join(diag) == Subspace::full(2));
    }
    CHECK_THROWS_AS(e1.complement_in(e2), std::invalid_argument);
    CHECK_THROWS_AS((void)e1.meet(Subspace::full(3)), std::invalid_argument);
}

TEST_CASE("subspace dimension modular law on random instances") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> val(-3, 3), cnt(0, 3);
    const std::size_t n = 4;
    auto random_space = [&]() {
        std::vector<QVec> rows;
        const int k = cnt(rng);
        for (int i = 0; i < k; ++i) {
            QVec v(n);
            for (auto& x : v) x = val(rng);
            rows.push_back(std::move(v));
        }
        return Subspace::span(rows, n);
    };
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = random_space();
        const auto b = random_space();
        CHECK(a.meet(b).dim() + a.join(b).dim() == a.dim() + b.dim());
        const auto c = a.meet(b).complement_in(a);
        CHECK(c.join(a.meet(b)) == a);
        CHECK(c.meet(a.meet(b)).dim() == 0);
    }
}

TEST_CASE("cones: dimensions, smoothness, membership") {
    const Cone quadrant({zv({1, 0}), zv({0, 1})}, 2);
    CHECK(quadrant.dim() == 2);
    CHECK(quadrant.smooth());
    CHECK(quadrant.simplicial());
    CHECK(quadrant.contains(zv({3, 5})));
    CHECK(!quadrant.contains(zv({-1, 0})));
    CHECK(quadrant.faces().size() == 4);  // 0, two rays, the cone

    const Cone singular({zv({1, 0}), zv({1, 2})}, 2);
    CHECK(singular.dim() == 2);
    CHECK(singular.simplicial());
    CHECK(!singular.smooth());  // index 2

    const Cone halfplane({zv({1, 0}), zv({-1, 0}), zv({0, 1})}, 2);
    CHECK(!halfplane.strongly_convex());

    const Cone ray({zv({2, 4})}, 2);
    CHECK(ray.dim() == 1);
    CHECK(ray.rays()[0] == zv({1, 2}));  // primitivized
    CHECK(ray.contains(zv({3, 6})));
    CHECK(!ray.contains(zv({-1, -2})));
    CHECK(!ray.contains(zv({1, 1})));

    const Cone octant({zv({1, 0, 0}), zv({0, 1, 0}), zv({0, 0, 1})}, 3);
    CHECK(octant.dim() == 3);
    CHECK(octant.smooth());
    CHECK(octant.faces().size() == 8);
    CHECK(octant.facets().size() == 3);
    // Non-simplicial: cone over a square.
    const Cone sq({zv({1, 0, 1}), zv({0, 1, 1}), zv({-1, 0, 1}), zv({0, -1, 1})}, 3);
    CHECK(sq.dim() == 3);
    CHECK(!sq.simplicial());
    CHECK(sq.facets().size() == 4);
    CHECK(sq.strongly_convex());
}

TEST_CASE("cone intersection") {
    const Cone a({zv({1, 0}), zv({0, 1})}, 2);
    const Cone b({zv({0, 1}), zv({-1, 0})}, 2);
    const Cone inter = a.intersection(b);
    CHECK(inter.dim() == 1);
    CHECK(inter.rays()[0] == zv({0, 1}));
    // Cones meeting only at the origin.
    const Cone c({zv({-1, -1}), zv({0, -1})}, 2);
    CHECK(a.intersection(c).dim() == 0);
    // Overlapping interiors give a 2-dimensional intersection.
    const Cone wide({zv({1, 1}), zv({-1, 1})}, 2);
    const Cone overlap = a.intersection(wide);
    CHECK(overlap.dim() == 2);
    CHECK(overlap == Cone({zv({1, 1}), zv({0, 1})}, 2));
}

TEST_CASE("fan validation") {
    {
        const auto d = fans::p2().validate();
        CHECK(d.valid);
        CHECK(d.smooth);
        CHECK(d.simplicial);
        CHECK(d.complete);
    }
    for (const Fan& f : {fans::p1(), fans::p1xp1(), fans::bl1p2(), fans::bl2p2(), fans::bl3p2(),
                         fans::hirzebruch(2), fans::pn(3)}) {
        const auto d = f.validate();
        CHECK(d.valid);
        CHECK(d.smooth);
        CHECK(d.complete);
    }
    {
        // Singular cone: valid fan, not smooth.
        const Fan f(2, std::vector<std::vector<ZVec>>{{zv({1, 0}), zv({1, 2})}});
        const auto d = f.validate();
        CHECK(d.valid);
        CHECK(!d.smooth);
        CHECK(d.simplicial);
        CHECK(!d.complete);
    }
    {
        // Two 2-cones sharing interior: invalid.
        const Fan f(2, std::vector<std::vector<ZVec>>{{zv({1, 0}), zv({0, 1})},
                                                      {zv({1, 1}), zv({-1, 1})}});
        CHECK(!f.validate().valid);
    }
}

TEST_CASE("star fans") {
    {
        // P^2 star at e1 is the fan of P^1.
        const Fan s = fans::p2().star_fan(zv({1, 0}));
        CHECK(s.lattice_rank() == 1);
        CHECK(s.maximal_cones().size() == 2);
        CHECK(s.validate().complete);
        std::vector<ZVec> rays = s.rays();
        std::sort(rays.begin(), rays.end());
        CHECK(rays == std::vector<ZVec>{zv({-1}), zv({1})});
    }
    {
        const Fan s = fans::p1xp1().star_fan(zv({1, 0}));
        CHECK(s.validate().complete);
        CHECK(s.maximal_cones().size() == 2);
    }
    {
        // Single smooth cone: star is a half-line fan.
        const Fan f(2, std::vector<std::vector<ZVec>>{{zv({1, 0}), zv({0, 1})}});
        const Fan s = f.star_fan(zv({1, 0}));
        CHECK(s.lattice_rank() == 1);
        CHECK(s.maximal_cones().size() == 1);
        CHECK(s.rays().size() == 1);
        CHECK(!s.validate().complete);
    }
    {
        // P^3 star at e1 is a complete surface fan (P^2).
        const Fan s = fans::pn(3).star_fan(zv({1, 0, 0}));
        CHECK(s.lattice_rank() == 2);
        CHECK(s.validate().complete);
        CHECK(s.maximal_cones().size() == 3);
    }
    CHECK_THROWS_AS((void)fans::p2().star_fan(zv({5, 7})), std::invalid_argument);
}

TEST_CASE("star fan ray count matches adjacent 2-cones") {
    for (const Fan& f : {fans::p2(), fans::p1xp1(), fans::bl1p2(), fans::bl3p2()}) {
        for (const auto& r : f.rays()) {
            int adjacent = 0;
            for (const auto& c : f.maximal_cones())
                for (const auto& cr : c.rays())
                    if (cr == r) ++adjacent;
            const Fan s = f.star_fan(r);
            CHECK(s.rays().size() == static_cast<std::size_t>(adjacent));
            CHECK(s.validate().complete);
        }
    }
}
