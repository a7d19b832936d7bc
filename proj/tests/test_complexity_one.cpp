#include <doctest.h>

#include "tvb/complexity_one.hpp"
#include "tvb/bundle_ops.hpp"

#include <memory>

using namespace tvb;

namespace {

ZVec zv(std::initializer_list<int> xs) {
    ZVec v;
    for (int x : xs) v.emplace_back(x);
    return v;
}

QVec qv(std::initializer_list<Rat> xs) { return QVec(xs); }

ZMat zm(std::initializer_list<std::initializer_list<int>> rows) {
    std::vector<ZVec> rs;
    std::size_t cols = 0;
    for (const auto& r : rows) {
        rs.push_back(zv(r));
        cols = rs.back().size();
    }
    return ZMat::from_rows(rs, cols);
}

C1Point pt(Rat coord, QVec v) {
    C1Point p;
    p.coord = coord;
    p.v = std::move(v);
    return p;
}

C1Point pt_inf(QVec v) {
    C1Point p;
    p.at_infinity = true;
    p.v = std::move(v);
    return p;
}

/// Total toric vector-field dimension used as the oracle.
std::size_t toric_oracle(const Fan& fan) {
    const auto f = std::make_shared<Fan>(fan);
    return global_sections(tangent(f)).total();
}

std::size_t downgraded_total(const Fan& fan, const ZMat& mu) {
    const auto proj = make_projection(mu);
    const auto geo = downgrade_fan(fan, proj);
    const auto data = c1_from_downgrade(geo, proj);
    return total_vf(data).total();
}

}  // namespace

TEST_CASE("alpha and gamma") {
    C1Data d;
    d.rank = 1;
    d.points = {pt(0, qv({Rat(1)})), pt_inf(qv({Rat(1, 2)}))};
    d.h = {};
    {
        // Lattice point: alpha = -u(v_P); half point: alpha = -u/2 - 1/2.
        const auto ag = alpha_gamma(d, zv({1}));
        CHECK(ag.alpha[0] == Rat(-1));
        CHECK(ag.alpha[1] == Rat(-1));  // -1/2 + (1-2)/2
        CHECK(ag.gamma[0] == -1);
        CHECK(ag.gamma[1] == -1);
        CHECK(ag.p_integral.size() == 2);
        CHECK(ag.p_rest.empty());
        CHECK(ag.v_u == qv({Rat(3, 2)}));
    }
    {
        // At u = 0 the weighted point is non-integral.
        const auto ag = alpha_gamma(d, zv({0}));
        CHECK(ag.alpha[0] == Rat(0));
        CHECK(ag.alpha[1] == Rat(-1, 2));
        CHECK(ag.p_integral == std::vector<int>{0});
        CHECK(ag.p_rest == std::vector<int>{1});
        CHECK(ag.v_u == qv({Rat(1)}));
    }
    {
        // u = 0 with all lattice points: P(u) = P, gamma = 0, v(u) = sum v_P.
        C1Data lat;
        lat.rank = 1;
        lat.points = {pt(0, qv({Rat(2)})), pt_inf(qv({Rat(-1)}))};
        const auto ag = alpha_gamma(lat, zv({0}));
        CHECK(ag.p_integral.size() == 2);
        for (const auto& g : ag.gamma) CHECK(g == 0);
        CHECK(ag.v_u == qv({Rat(1)}));
    }
}

TEST_CASE("per-degree dimensions: the four cases") {
    {
        // Degenerate v(u) = 0 branch: rank one, one point with v = 0.
        C1Data d;
        d.rank = 1;
        d.points = {pt(0, qv({Rat(0)}))};
        const auto s = vf_sections_degree(d, zv({3}));
        CHECK(s.case_id == 2);
        CHECK(s.horizontal_dim == 1);
        CHECK(s.vertical_dim == 3);
        CHECK(s.dim == 4);
    }
    {
        // u above 1 on some contracted ray, or 1 twice: zero.
        C1Data d;
        d.rank = 1;
        d.points = {pt(0, qv({Rat(0)})), pt_inf(qv({Rat(0)}))};
        d.h = {zv({1}), zv({-1})};
        CHECK(vf_sections_degree(d, zv({2})).dim == 0);
        CHECK(vf_sections_degree(d, zv({2})).case_id == 4);
        // No degree pairs to 1 with both of +1 and -1, so fabricate:
        C1Data dd = d;
        dd.h = {zv({1}), zv({1})};
        CHECK(vf_sections_degree(dd, zv({1})).dim == 0);
    }
    {
        // Boundary case: u(rho) = 1 for exactly one contracted ray.
        C1Data d;
        d.rank = 1;
        d.points = {pt(0, qv({Rat(0)})), pt_inf(qv({Rat(0)}))};
        d.h = {zv({1}), zv({-1})};
        const auto s = vf_sections_degree(d, zv({1}));
        CHECK(s.case_id == 3);
        CHECK(s.dim == 1);
    }
}

TEST_CASE("bridge and totals on the three separated surface downgrades") {
    {
        // P1 x P1, projecting out the first factor: dims 4 at u=0, 1 at ±1.
        const auto proj = make_projection(zm({{0, 1}}));
        const auto geo = downgrade_fan(fans::p1xp1(), proj);
        const auto data = c1_from_downgrade(geo, proj);
        CHECK(data.rank == 1);
        CHECK(data.points.size() == 2);
        CHECK(data.h.size() == 2);
        const auto total = total_vf(data);
        CHECK(total.total() == 6);
        CHECK(total.at(zv({0})) == 4);
        CHECK(total.at(zv({1})) == 1);
        CHECK(total.at(zv({-1})) == 1);
        CHECK(total.total() == toric_oracle(fans::p1xp1()));
    }
    {
        // Blow-up of the plane along mu = (1,-1): automorphism dimension 6.
        CHECK(downgraded_total(fans::bl1p2(), zm({{1, -1}})) == 6);
        CHECK(toric_oracle(fans::bl1p2()) == 6);
    }
    {
        // P2 along mu = (0,1): automorphism dimension 8.
        CHECK(downgraded_total(fans::p2(), zm({{0, 1}})) == 8);
        CHECK(toric_oracle(fans::p2()) == 8);
    }
}

TEST_CASE("oracle equivalence across separated downgrades") {
    const std::vector<std::pair<Fan, ZMat>> cases = {
        {fans::p2(), zm({{0, 1}})},        {fans::p2(), zm({{1, 0}})},
        {fans::p2(), zm({{1, -1}})},       {fans::p1xp1(), zm({{0, 1}})},
        {fans::p1xp1(), zm({{1, 0}})},     {fans::bl1p2(), zm({{1, -1}})},
        {fans::hirzebruch(2), zm({{1, 0}})}, {fans::hirzebruch(3), zm({{1, 0}})},
    };
    for (const auto& [fan, mu] : cases)
        CHECK(downgraded_total(fan, mu) == toric_oracle(fan));
}

TEST_CASE("non-separated downgrades are rejected by the bridge") {
    const auto proj = make_projection(zm({{0, 1}}));
    const auto geo = downgrade_fan(fans::bl1p2(), proj);  // doubled origin
    CHECK_THROWS_AS(c1_from_downgrade(geo, proj), std::invalid_argument);
}

TEST_CASE("hyperplane choice independence and validation") {
    // Rank two with v(u) = (1,1) at u = 0: first case of the formula.
    C1Data d;
    d.rank = 2;
    d.points = {pt(0, qv({Rat(1), Rat(0)})), pt_inf(qv({Rat(0), Rat(1)}))};
    const ZVec u = zv({0, 0});
    REQUIRE(vf_sections_degree(d, u).case_id == 1);
    std::vector<QMat> good;
    {
        QMat h1(1, 2);
        h1(0, 0) = 1;
        good.push_back(h1);
        QMat h2(1, 2);
        h2(0, 1) = 1;
        good.push_back(h2);
        QMat h3(1, 2);
        h3(0, 0) = 1;
        h3(0, 1) = -1;
        good.push_back(h3);
    }
    const auto base = vf_sections_degree(d, u);
    for (const auto& h : good) CHECK(vf_sections_degree(d, u, h).dim == base.dim);
    QMat bad(1, 2);
    bad(0, 0) = 1;
    bad(0, 1) = 1;  // contains v(u)
    CHECK_THROWS_AS(vf_sections_degree(d, u, bad), std::invalid_argument);
}

TEST_CASE("epsilon choice independence and validation") {
    C1Data d;
    d.rank = 1;
    d.points = {pt(0, qv({Rat(0)})), pt(1, qv({Rat(1, 2)})), pt(2, qv({Rat(1, 2)}))};
    const ZVec u = zv({0});
    const auto ag = alpha_gamma(d, u);
    REQUIRE(ag.p_rest.size() == 2);  // both weighted points are non-integral
    const auto base = vf_sections_degree(d, u);
    CHECK(base.case_id == 2);
    for (int choice : ag.p_rest)
        CHECK(vf_sections_degree(d, u, std::nullopt, choice).dim == base.dim);
    CHECK_THROWS_AS(vf_sections_degree(d, u, std::nullopt, 0), std::invalid_argument);
}

TEST_CASE("chart intersection") {
    auto one = std::vector<Rat>{Rat(1)};
    {
        // Identical charts keep their dimension.
        RationalFunctionSpace s;
        s.numerators = {{Rat(1)}, {Rat(0), Rat(1)}};
        CHECK(chart_intersect({s, s}) == 2);
    }
    {
        // Doubled-origin line: functions with a pole at one chart's origin
        // against functions regular there; only constants survive.
        RationalFunctionSpace a;
        a.poles = {{Rat(0), 1}};
        a.numerators = {{Rat(1)}, {Rat(0), Rat(1)}};  // 1/y and 1
        RationalFunctionSpace b;
        b.numerators = {{Rat(1)}, {Rat(0), Rat(1)}};  // 1 and y
        CHECK(chart_intersect({a, b}) == 1);
    }
    {
        // Two three-dimensional polynomial spaces meeting in the constants.
        RationalFunctionSpace a;
        a.numerators = {{Rat(1)}, {Rat(0), Rat(1)}, {Rat(0), Rat(0), Rat(1)}};
        RationalFunctionSpace b;
        b.numerators = {one, {Rat(0), Rat(0), Rat(0), Rat(1)},
                        {Rat(0), Rat(0), Rat(0), Rat(0), Rat(1)}};
        CHECK(chart_intersect({a, b}) == 1);
    }
    {
        RationalFunctionSpace bad;
        bad.poles = {{Rat(0), 1}, {Rat(0), 2}};  // duplicated pole position
        bad.numerators = {one};
        CHECK_THROWS_AS(chart_intersect({bad}), std::invalid_argument);
        CHECK_THROWS_AS(chart_intersect({}), std::invalid_argument);
    }
}

TEST_CASE("unbounded degree regions are rejected") {
    C1Data d;
    d.rank = 1;
    d.points = {pt(0, qv({Rat(0)}))};
    CHECK_THROWS_AS(total_vf(d), std::invalid_argument);
}
