#include <doctest.h>

#include "tvb/deformation.hpp"

#include <memory>

using namespace tvb;

namespace {

ZVec zv(std::initializer_list<int> xs) {
    ZVec v;
    for (int x : xs) v.emplace_back(x);
    return v;
}

Fan p1p1p1() {
    const std::vector<ZVec> r = {zv({1, 0, 0}),  zv({0, 1, 0}),  zv({0, 0, 1}),
                                 zv({-1, 0, 0}), zv({0, -1, 0}), zv({0, 0, -1})};
    std::vector<std::vector<int>> cones;
    for (int a : {0, 3})
        for (int b : {1, 4})
            for (int c : {2, 5}) cones.push_back({a, b, c});
    return fans::from_rays_and_cones(3, r, cones);
}

}  // namespace

TEST_CASE("Fano recognition") {
    CHECK(is_fano(fans::p1()));
    CHECK(is_fano(fans::p2()));
    CHECK(is_fano(fans::p1xp1()));
    CHECK(is_fano(fans::bl1p2()));
    CHECK(is_fano(fans::bl2p2()));
    CHECK(is_fano(fans::bl3p2()));
    CHECK(is_fano(fans::pn(3)));
    CHECK(is_fano(p1p1p1()));
    CHECK_FALSE(is_fano(fans::hirzebruch(2)));
    CHECK_FALSE(is_fano(fans::hirzebruch(3)));
    // F_1 = Bl_1 P^2 is Fano.
    CHECK(is_fano(fans::hirzebruch(1)));
    // Preconditions: singular or incomplete fans are rejected.
    const Fan sing = fans::from_rays_and_cones(
        2, {zv({1, 0}), zv({-1, 2}), zv({0, -1})}, {{0, 1}, {1, 2}, {2, 0}});
    CHECK_THROWS_AS(is_fano(sing), std::invalid_argument);
    const Fan affine = fans::from_rays_and_cones(2, {zv({1, 0}), zv({0, 1})}, {{0, 1}});
    CHECK_THROWS_AS(is_fano(affine), std::invalid_argument);
}

TEST_CASE("tangent Ext wrapper reproduces the known dimensions") {
    CHECK(tangent_ext(std::make_shared<Fan>(fans::p2()), 1).total() == 0);
    const auto e1 = tangent_ext(std::make_shared<Fan>(fans::p1xp1()), 1);
    CHECK(e1.total() == 6);
    const auto b1 = tangent_ext(std::make_shared<Fan>(fans::bl1p2()), 1);
    CHECK(b1.at(zv({0, 0})) == 1);
    CHECK(b1.at(zv({1, 0})) == 1);
}

TEST_CASE("obstruction comparison on the Fano surfaces") {
    for (auto base : {fans::p2(), fans::p1xp1(), fans::bl1p2(), fans::bl2p2(), fans::bl3p2()}) {
        const auto f = std::make_shared<Fan>(std::move(base));
        const auto rep = obstruction_report(f, 2);
        CHECK(rep.match);
        CHECK(rep.lhs.total() == 0);
        CHECK(rep.rhs.total == 0);
        // Every restriction is a divisor on P^1; each entry is present.
        CHECK(rep.rhs.entries.size() == f->rays().size() * (f->rays().size() - 1));
        for (const auto& [key, d] : rep.rhs.entries) CHECK(d == 0);
    }
}

TEST_CASE("obstruction comparison on a Fano threefold") {
    const auto f = std::make_shared<Fan>(fans::pn(3));
    for (int i : {2, 3}) {
        const auto rep = obstruction_report(f, i);
        CHECK(rep.match);
    }
}

TEST_CASE("obstructions vanish above the dimension") {
    const auto f = std::make_shared<Fan>(fans::p2());
    CHECK(obstruction_rhs(*f, 4).total == 0);
    CHECK(tangent_ext(f, 2).total() == 0);
}

TEST_CASE("non-Fano fans are rejected") {
    CHECK_THROWS_AS(obstruction_rhs(fans::hirzebruch(2), 2), std::invalid_argument);
    CHECK_THROWS_AS(unobstructed_fano(fans::hirzebruch(2)), std::invalid_argument);
    CHECK_THROWS_AS(obstruction_rhs(fans::p2(), 1), std::invalid_argument);
}

TEST_CASE("Fano unobstructedness of the divisors") {
    CHECK(unobstructed_fano(fans::p2()));
    CHECK(unobstructed_fano(fans::p1xp1()));
    CHECK(unobstructed_fano(fans::bl1p2()));
    CHECK(unobstructed_fano(fans::pn(3)));
    CHECK(unobstructed_fano(p1p1p1()));
}

TEST_CASE("higher tangent cohomology vanishes on Fano fans") {
    for (auto base : {fans::p2(), fans::p1xp1(), fans::bl1p2(), fans::bl3p2()}) {
        const auto f = std::make_shared<Fan>(std::move(base));
        const auto t = tangent(f);
        CHECK(cech_cohomology(t, 1).total() == 0);
        CHECK(cech_cohomology(t, 2).total() == 0);
    }
}
