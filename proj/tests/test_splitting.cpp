#include <doctest.h>

#include "tvb/splitting.hpp"

#include <algorithm>
#include <memory>
#include <random>

using namespace tvb;

namespace {

QVec qv(std::initializer_list<int> xs) {
    QVec v;
    for (int x : xs) v.emplace_back(x);
    return v;
}

std::vector<DivisorData> sorted_divisors(const std::vector<SplitSummand>& ss) {
    std::vector<DivisorData> out;
    for (const auto& s : ss) out.push_back(s.divisor);
    std::sort(out.begin(), out.end());
    return out;
}

/// A rank-2 bundle that is the direct sum of two line bundles after rotating
/// the coordinate summands onto the given lines.
KlyachkoBundle conjugated_sum(const std::shared_ptr<const Fan>& fan, const DivisorData& a,
                              const DivisorData& b, const QVec& l1, const QVec& l2) {
    std::vector<Filtration> fs;
    for (std::size_t r = 0; r < fan->rays().size(); ++r) {
        const int ja = -static_cast<int>(a[r]);
        const int jb = -static_cast<int>(b[r]);
        std::vector<std::pair<int, Subspace>> steps;
        steps.emplace_back(std::min(ja, jb), Subspace::full(2));
        if (ja < jb)
            steps.emplace_back(jb, Subspace::span({l2}, 2));
        else if (jb < ja)
            steps.emplace_back(ja, Subspace::span({l1}, 2));
        fs.emplace_back(2, std::move(steps));
    }
    return KlyachkoBundle(fan, 2, std::move(fs));
}

}  // namespace

TEST_CASE("splitting round-trip on sums of line bundles") {
    std::mt19937 rng(909);
    std::uniform_int_distribution<int> coeff(-2, 2);
    for (auto base : {fans::p2(), fans::p1xp1(), fans::bl1p2()}) {
        const auto f = std::make_shared<Fan>(std::move(base));
        for (int trial = 0; trial < 5; ++trial) {
            DivisorData d1, d2;
            for (std::size_t i = 0; i < f->rays().size(); ++i) {
                d1.push_back(coeff(rng));
                d2.push_back(coeff(rng));
            }
            const auto v = direct_sum(line_bundle(f, d1), line_bundle(f, d2));
            const auto res = split_into_line_bundles(v);
            REQUIRE(res.split());
            auto want = std::vector<DivisorData>{d1, d2};
            std::sort(want.begin(), want.end());
            CHECK(sorted_divisors(*res.summands) == want);
        }
    }
}

TEST_CASE("splitting recovers a conjugated decomposition") {
    const auto f = std::make_shared<Fan>(fans::p2());
    const DivisorData a = {Int(1), Int(0), Int(-1)};
    const DivisorData b = {Int(-1), Int(0), Int(0)};
    const QVec l1 = qv({1, 1}), l2 = qv({1, -1});
    const auto v = conjugated_sum(f, a, b, l1, l2);
    const auto res = split_into_line_bundles(v);
    REQUIRE(res.split());
    REQUIRE(res.summands->size() == 2);
    CHECK(sorted_divisors(*res.summands) == std::vector<DivisorData>{b, a});
    for (const auto& s : *res.summands) {
        const Subspace want =
            s.divisor == a ? Subspace::span({l1}, 2) : Subspace::span({l2}, 2);
        CHECK(s.line == want);
    }
}

TEST_CASE("tangent bundles: split and non-split cases") {
    {
        const auto f = std::make_shared<Fan>(fans::p2());
        const auto res = split_into_line_bundles(tangent(f));
        CHECK_FALSE(res.split());
        CHECK(res.witness.filtration >= 0);  // a concrete witness is recorded
    }
    {
        const auto f = std::make_shared<Fan>(fans::bl1p2());
        CHECK_FALSE(is_split(tangent(f)));
    }
    {
        const auto f = std::make_shared<Fan>(fans::p1xp1());
        const auto res = split_into_line_bundles(tangent(f));
        REQUIRE(res.split());
        // O(2,0) + O(0,2): each summand jumps at level 1 on one pair of
        // opposite rays (ray order (1,0),(0,1),(-1,0),(0,-1)).
        const auto want = std::vector<DivisorData>{
            {Int(-1), Int(0), Int(-1), Int(0)}, {Int(0), Int(-1), Int(0), Int(-1)}};
        auto got = sorted_divisors(*res.summands);
        auto sorted_want = want;
        std::sort(sorted_want.begin(), sorted_want.end());
        CHECK(got == sorted_want);
    }
}

TEST_CASE("splitting preconditions") {
    {
        // Singular complete fan: rejected.
        const Fan sing = fans::from_rays_and_cones(
            2, {{Int(1), Int(0)}, {Int(-1), Int(2)}, {Int(0), Int(-1)}},
            {{0, 1}, {1, 2}, {2, 0}});
        const auto f = std::make_shared<Fan>(sing);
        CHECK_THROWS_AS(is_split(trivial_bundle(f)), std::invalid_argument);
    }
    {
        // Smooth non-complete fan: rejected.
        const Fan affine =
            fans::from_rays_and_cones(2, {{Int(1), Int(0)}, {Int(0), Int(1)}}, {{0, 1}});
        const auto f = std::make_shared<Fan>(affine);
        CHECK_THROWS_AS(is_split(trivial_bundle(f)), std::invalid_argument);
    }
}

TEST_CASE("every compatible rank-2 bundle on the P3 fan splits") {
    const auto f = std::make_shared<Fan>(fans::pn(3));
    std::mt19937 rng(31337);
    std::uniform_int_distribution<int> base_level(-1, 1);
    std::uniform_int_distribution<int> gap(1, 2);
    std::uniform_int_distribution<int> pick(0, 5);
    const std::vector<QVec> pool = {qv({1, 0}), qv({0, 1}), qv({1, 1}),
                                    qv({1, -1}), qv({1, 2}), qv({2, 1})};

    int compatible_found = 0, attempts = 0;
    while (compatible_found < 50 && attempts < 5000) {
        ++attempts;
        std::vector<Filtration> fs;
        for (std::size_t r = 0; r < f->rays().size(); ++r) {
            const int j0 = base_level(rng);
            std::vector<std::pair<int, Subspace>> steps;
            steps.emplace_back(j0, Subspace::full(2));
            if (pick(rng) < 4)  // two thirds of the rays get a line step
                steps.emplace_back(j0 + gap(rng), Subspace::span({pool[pick(rng)]}, 2));
            fs.emplace_back(2, std::move(steps));
        }
        const KlyachkoBundle v(f, 2, std::move(fs));
        if (!check_compatibility(v).compatible) continue;
        ++compatible_found;
        const auto res = split_into_line_bundles(v);
        CHECK(res.split());
    }
    CHECK(compatible_found >= 50);
}

TEST_CASE("tensoring by a line bundle shifts the summand divisors") {
    const auto f = std::make_shared<Fan>(fans::p1xp1());
    const auto t = tangent(f);
    const DivisorData d = {Int(2), Int(-1), Int(0), Int(1)};
    const auto twisted = tensor(t, line_bundle(f, d));
    const auto before = split_into_line_bundles(t);
    const auto after = split_into_line_bundles(twisted);
    REQUIRE(before.split());
    REQUIRE(after.split());
    auto shifted = sorted_divisors(*before.summands);
    for (auto& div : shifted)
        for (std::size_t i = 0; i < div.size(); ++i) div[i] += d[i];
    std::sort(shifted.begin(), shifted.end());
    CHECK(sorted_divisors(*after.summands) == shifted);
}
