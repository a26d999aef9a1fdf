#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace rankone;

TEST(Integral, Examples) {
    EXPECT_EQ(integral(SpacerMap{0, 1, 0}), (std::vector<Int>{0, 0, 1}));
    EXPECT_EQ(integral(SpacerMap{2, 3, 5}), (std::vector<Int>{0, 2, 5}));
    EXPECT_EQ(stage_C(SpacerMap{0, 1, 0}, 4), make_set({0, 4, 9}));
}

TEST(Diamond, Example) {
    const auto d = diamond(SpacerMap{0, 1}, SpacerMap{2, 0});
    EXPECT_EQ(d, (SpacerMap{0, 3, 0, 1}));
    EXPECT_EQ(stage_C(d, 1), make_set({0, 1, 5, 6}));
}

TEST(Diamond, ZeroRightFactorAddsTopOnly) {
    const SpacerMap a{1, 2, 3};
    const auto d = diamond(a, SpacerMap::zeros(3));
    EXPECT_EQ(d, (SpacerMap{1, 2, 3, 1, 2, 3, 1, 2, 3}));
}

TEST(Diamond, LengthLaw) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<std::size_t> R(1, 6);
    for (int it = 0; it < 100; ++it) {
        auto a = oracle::random_map(rng, R(rng), 4), b = oracle::random_map(rng, R(rng), 4);
        EXPECT_EQ(diamond(a, b).r(), a.r() * b.r());
    }
}

TEST(Diamond, Associative) {
    std::mt19937_64 rng(22);
    std::uniform_int_distribution<std::size_t> R(1, 4);
    for (int it = 0; it < 100; ++it) {
        auto a = oracle::random_map(rng, R(rng), 4), b = oracle::random_map(rng, R(rng), 4),
             c = oracle::random_map(rng, R(rng), 4);
        EXPECT_EQ(diamond(diamond(a, b), c), diamond(a, diamond(b, c)));
    }
}

// Realizing a<>b over height h equals C_a(h) + C_b(h_a), checked by materializing the sumset.
TEST(Diamond, RealizesAsSumset) {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<std::size_t> R(1, 5);
    std::uniform_int_distribution<long> H(1, 7);
    for (int it = 0; it < 200; ++it) {
        auto a = oracle::random_map(rng, R(rng), 5), b = oracle::random_map(rng, R(rng), 5);
        const Int h = H(rng);
        const Int ha = stage_height(a, h);
        EXPECT_EQ(stage_C(diamond(a, b), h), sumset(stage_C(a, h), stage_C(b, ha)));
        EXPECT_EQ(stage_height(diamond(a, b), h), stage_height(b, ha));
    }
}

TEST(Periodic, Examples) {
    EXPECT_TRUE(is_periodic(SpacerMap{1, 1, 1, 0}, 1));
    EXPECT_TRUE(is_periodic(SpacerMap{1, 2, 1, 2, 1, 9}, 2));
    EXPECT_FALSE(is_periodic(SpacerMap{1, 2, 1, 3, 1, 9}, 2));
    // the top value never takes part
    EXPECT_TRUE(is_periodic(SpacerMap{4, 4, 4, 7}, 2));
}

TEST(Periodic, RangeChecked) {
    for (std::size_t i : {std::size_t{0}, std::size_t{3}}) {
        try {
            is_periodic(SpacerMap{1, 1, 1, 0}, i);
            FAIL() << i;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::OutOfRange);
        }
    }
}

namespace {
// Maps with values from a tiny alphabet so that periodicity actually happens.
SpacerMap tiny(std::mt19937_64& rng, std::size_t r, long vmax) { return oracle::random_map(rng, r, vmax); }
}  // namespace

TEST(Periodic, LiftsThroughDiamond) {
    std::mt19937_64 rng(24);
    std::uniform_int_distribution<std::size_t> R(2, 5), T(3, 7);
    int hits = 0;
    for (int it = 0; it < 2000; ++it) {
        auto a = tiny(rng, R(rng), 2), b = tiny(rng, T(rng), 1);
        for (std::size_t i = 1; i + 2 <= b.r(); ++i)
            if (is_periodic(b, i)) {
                ++hits;
                EXPECT_TRUE(is_periodic(diamond(a, b), a.r() * i));
            }
    }
    EXPECT_GT(hits, 50);
}

TEST(Periodic, TwoPeriodsGiveTheirDifference) {
    std::mt19937_64 rng(25);
    std::uniform_int_distribution<std::size_t> R(5, 12);
    int hits = 0;
    for (int it = 0; it < 4000; ++it) {
        auto a = tiny(rng, R(rng), 1);
        const std::size_t r = a.r();
        for (std::size_t i = 1; i + 2 <= r; ++i)
            for (std::size_t j = i + 1; j + 2 <= r && i + j < r; ++j)
                if (is_periodic(a, i) && is_periodic(a, j)) {
                    ++hits;
                    EXPECT_TRUE(is_periodic(a, j - i));
                }
    }
    EXPECT_GT(hits, 20);
}

TEST(Periodic, ShortPeriodOfProductForcesConstantRightFactor) {
    std::mt19937_64 rng(26);
    std::uniform_int_distribution<std::size_t> R(2, 4), T(2, 5);
    std::bernoulli_distribution constant_a(0.5);
    int hits = 0;
    for (int it = 0; it < 3000; ++it) {
        const std::size_t r = R(rng);
        SpacerMap a = constant_a(rng) ? SpacerMap(std::vector<Int>(r, Int(1))) : tiny(rng, r, 1);
        auto b = tiny(rng, T(rng), 1);
        const auto d = diamond(a, b);
        for (std::size_t i = 1; i < a.r() && i + 2 <= d.r(); ++i)
            if (is_periodic(d, i)) {
                ++hits;
                for (std::size_t k = 2; k < b.r(); ++k) EXPECT_EQ(b(k), b(1));
            }
    }
    EXPECT_GT(hits, 20);
}

TEST(Adapted, Chacon2) {
    auto res = adapted_transform(ParamSpec::chacon2(), 3);
    EXPECT_FALSE(res.stabilized);
    ASSERT_EQ(res.spec.prefix.size(), 3u);
    EXPECT_EQ(res.spec.prefix[0], (SpacerMap{0, 0}));
    EXPECT_EQ(res.spec.prefix[1], (SpacerMap{1, 0}));
    EXPECT_EQ(res.spec.prefix[2], (SpacerMap{2, 0}));
    EXPECT_TRUE(is_adapted(res.spec, 3));
    EXPECT_FALSE(is_adapted(ParamSpec::chacon2(), 3));
}

TEST(Adapted, ZeroTopCycleStaysCyclic) {
    auto res = adapted_transform(ParamSpec::chacon3(), 5);
    EXPECT_TRUE(res.stabilized);
    EXPECT_EQ(res.spec, ParamSpec::chacon3());
}

TEST(Adapted, PreservesCSequence) {
    std::mt19937_64 rng(27);
    for (int it = 0; it < 60; ++it) {
        auto s = oracle::random_spec(rng);
        auto res = adapted_transform(s, 8);
        EXPECT_TRUE(is_adapted(res.spec, 8));
        auto a = realize(s, 8), b = realize(res.spec, 8);
        for (std::size_t n = 0; n < 8; ++n) EXPECT_EQ(a[n].C, b[n].C) << canonical(s) << " stage " << n + 1;
    }
}
