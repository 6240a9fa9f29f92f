#include "moebius/core_maps.hpp"
#include "moebius/errors.hpp"
#include "moebius/oracle.hpp"

#include "support.hpp"

#include <limits>

using namespace moebius;
using moebius::test::check_close;
using moebius::test::hw;

TEST_CASE("canonicalize applies the seam identification") {
    const auto a = canonicalize(two_pi, 0.3);
    CHECK(a.t == 0.0);
    CHECK(a.r == -0.3);

    const auto b = canonicalize(-pi / 2, 1.0);
    CHECK(b.t == doctest::Approx(3 * pi / 2).epsilon(1e-15));
    CHECK(b.r == -1.0);

    const auto c = canonicalize(4 * pi, 0.3);
    CHECK(c.t == 0.0);
    CHECK(c.r == 0.3);

    CHECK_THROWS_AS(canonicalize(std::numeric_limits<double>::quiet_NaN(), 0.0), DomainError);
    CHECK_THROWS_AS(canonicalize(0.0, std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("canonicalize is idempotent and lands in [0, 2pi)") {
    for (std::uint64_t i = 0; i < 20000; ++i) {
        const double t = -50.0 + 100.0 * SplitMix64::unit_at(11, 2 * i);
        const double r = -3.0 + 6.0 * SplitMix64::unit_at(11, 2 * i + 1);
        const auto p = canonicalize(t, r);
        REQUIRE(p.t >= 0.0);
        REQUIRE(p.t < two_pi);
        CHECK(std::abs(p.r) == std::abs(r));
        CHECK(canonicalize(p.t, p.r) == p);
        const auto q = canonicalize(p.t + two_pi, -p.r);
        CHECK(param_distance(p, q) <= 1e-12);
    }
}

TEST_CASE("simple map values") {
    for (double r : {-1.5, 0.0, 0.25, 2.0}) check_close(eval_simple({0.0, r}), {1.0 + r, 0.0, 0.0}, 1e-15);
    check_close(eval_simple({pi, 1.0}), {-1.0, 1.0, 1.0}, 1e-15);
    check_close(eval_simple({pi / 3, -std::sqrt(3.0)}), {-1.0, 0.0, -std::sqrt(3.0) / 2}, 1e-15);
}

TEST_CASE("common map values") {
    for (double z : {-3.0, -0.5, 0.0, 1.0, 4.0}) check_close(eval_common({pi, z}), {-1.0, 0.0, z}, 1e-15);
    check_close(eval_common({0.0, -2.0}), {-1.0, 0.0, 0.0}, 0.0);
    check_close(eval_common({0.0, 0.7}), {1.7, 0.0, 0.0}, 0.0);
    CHECK(evaluate(RealizationKind::common, {1.0, 0.5}) == eval_common({1.0, 0.5}));
    CHECK(evaluate(RealizationKind::simple, {1.0, 0.5}) == eval_simple({1.0, 0.5}));
}

TEST_CASE("param_distance respects the seam") {
    CHECK(param_distance({0.0, 0.5}, {two_pi - 1e-6, -0.5}) == doctest::Approx(1e-6).epsilon(1e-6));
    CHECK(param_distance({1.0, 0.2}, {1.0, 0.2}) == 0.0);
    CHECK(param_distance({0.1, 0.0}, {0.2, 0.0}) == doctest::Approx(0.1).epsilon(1e-12));
    for (std::uint64_t i = 0; i < 2000; ++i) {
        const ParamPoint p{two_pi * SplitMix64::unit_at(5, 4 * i), SplitMix64::unit_at(5, 4 * i + 1) - 0.5};
        const ParamPoint q{two_pi * SplitMix64::unit_at(5, 4 * i + 2), SplitMix64::unit_at(5, 4 * i + 3) - 0.5};
        CHECK(param_distance(p, q) == param_distance(q, p));
    }
}

TEST_CASE("moving segment") {
    const auto [a, b] = moving_segment(0.0, hw(1.0), RealizationKind::simple);
    check_close(a, {0.0, 0.0, 0.0}, 0.0);
    check_close(b, {2.0, 0.0, 0.0}, 0.0);

    const auto [c, d] = moving_segment(pi, hw(1.0), RealizationKind::common);
    check_close(c, {-1.0, 0.0, -1.0}, 1e-15);
    check_close(d, {-1.0, 0.0, 1.0}, 1e-15);

    CHECK_THROWS_AS(moving_segment(0.0, HalfWidth::infinite(), RealizationKind::simple), DomainError);
}

TEST_CASE("simple segment direction has equal y and z components") {
    for (int i = 0; i < 1000; ++i) {
        const double t = two_pi * i / 1000.0;
        const auto [lo, hi] = moving_segment(t, hw(1.3), RealizationKind::simple);
        const Point3 d = hi - lo;
        CHECK(std::abs(d.y - d.z) <= 1e-15);
    }
}

TEST_CASE("seam continuity and centerline") {
    for (auto kind : {RealizationKind::simple, RealizationKind::common}) {
        for (int j = -10; j <= 10; ++j) {
            const double r = 0.2 * j;
            check_close(evaluate(kind, {two_pi - 1e-8, r}), evaluate(kind, {0.0, -r}), 1e-6);
        }
        for (int i = 0; i < 100; ++i) {
            const double t = two_pi * i / 100.0;
            check_close(evaluate(kind, {t, 0.0}), {std::cos(t), std::sin(t), 0.0}, 1e-15);
        }
    }
}

TEST_CASE("half-width and kind parsing") {
    CHECK_THROWS_AS(HalfWidth::finite(0.0), DomainError);
    CHECK_THROWS_AS(HalfWidth::finite(-1.0), DomainError);
    CHECK_THROWS_AS(HalfWidth::finite(std::numeric_limits<double>::infinity()), DomainError);
    CHECK(HalfWidth::infinite().is_infinite());
    CHECK_THROWS_AS(HalfWidth::infinite().value(), DomainError);
    CHECK(hw(0.6).value() == 0.6);
    CHECK(parse_realization_kind("simple") == RealizationKind::simple);
    CHECK(parse_realization_kind("common") == RealizationKind::common);
    CHECK_FALSE(parse_realization_kind("SIMPLE").has_value());
    CHECK(to_string(RealizationKind::common) == "common");
}
