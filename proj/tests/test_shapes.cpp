#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "wulff/errors.hpp"
#include "wulff/shapes.hpp"

using namespace wulff;

TEST_CASE("closed-form shape values") {
    CHECK(eval_shape(ShapeModel::cone(0.5), -4.0) == doctest::Approx(2.0));
    CHECK(eval_shape(ShapeModel::parabola(0.25), 2.0) == doctest::Approx(1.0));
    CHECK(eval_shape(ShapeModel::semicircle(0.5), 1.0) ==
          doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-12));
    CHECK(std::abs(eval_shape(ShapeModel::sos_wulff(5.0, 0.125), 0.0)) < 1e-12);
}

TEST_CASE("evaluation outside the support is a domain error") {
    const auto circle = ShapeModel::semicircle(0.5);
    CHECK(circle.support_radius() == doctest::Approx(2.0));
    CHECK_THROWS_AS(circle.eval(2.5), DomainError);
    CHECK_THROWS_AS(circle.eval(-2.0), DomainError);
    const auto sos = ShapeModel::sos_wulff(5.0, 0.125);
    CHECK_THROWS_AS(sos.eval(40.5), DomainError);
    CHECK_NOTHROW(ShapeModel::parabola(1.0).eval(1e6));
}

TEST_CASE("invalid shape parameters") {
    CHECK_THROWS_AS(ShapeModel::cone(0.0), ArgumentError);
    CHECK_THROWS_AS(ShapeModel::parabola(-1.0), ArgumentError);
    CHECK_THROWS_AS(ShapeModel::sos_wulff(5.0, 0.0), ArgumentError);
    CHECK_THROWS_AS(build_sos_wulff_profile(5.0, 1.0, 1), ArgumentError);
    CHECK_THROWS_AS(shape_kind_from_string("ellipse"), ArgumentError);
}

TEST_CASE("SOS Wulff profile table") {
    const auto p = build_sos_wulff_profile(5.0, 0.125);
    CHECK(p.support_radius() == doctest::Approx(40.0));
    CHECK(p.max_x() >= 0.999 * 40.0);
    CHECK(p.xs()[0] == 0.0);
    CHECK(p.ws()[0] == 0.0);
    for (std::size_t i = 1; i < p.xs().size(); ++i) {
        REQUIRE(p.xs()[i] > p.xs()[i - 1]);
        REQUIRE(p.ws()[i] > p.ws()[i - 1]);
    }

    SUBCASE("nodes sit on the closed-form shape") {
        for (std::size_t i = 0; i < p.xs().size(); i += 7) {
            // Compared as x(W): W(x) is ill-conditioned next to the support edge.
            const double x_of_w = 40.0 * std::sqrt(-std::expm1(-0.125 * p.ws()[i]));
            CHECK(p.xs()[i] == doctest::Approx(x_of_w).epsilon(1e-12).scale(1.0));
        }
    }
    SUBCASE("interpolation between nodes") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.0, 0.9999);
        double worst = 0.0;
        for (int s = 0; s < 2000; ++s) {
            const double x = 40.0 * u(rng);
            const double ref = oracle::sos_wulff_closed_form(5.0, 0.125, x);
            worst = std::max(worst, std::abs(p.eval(x) - ref) / std::max(1.0, ref));
        }
        CHECK(worst < 1e-8);
    }
    SUBCASE("slope table is dW/dx") {
        for (double x : {0.0, 1.0, 10.0, 30.0, 39.0}) {
            const double h = 1e-5;
            const double fd = (oracle::sos_wulff_closed_form(5.0, 0.125, x + h) -
                               oracle::sos_wulff_closed_form(5.0, 0.125, std::abs(x - h))) /
                              (x == 0.0 ? h : 2 * h);
            CHECK(p.slope(x) == doctest::Approx(x == 0.0 ? 0.0 : fd).epsilon(1e-5).scale(1.0));
        }
    }
}

TEST_CASE("SOS Wulff scaling W_K(x) = W_1(K x) / K") {
    const auto ref = ShapeModel::sos_wulff(5.0, 1.0);
    const auto scaled = ShapeModel::sos_wulff(5.0, 0.25);
    CHECK(scaled.support_radius() == doctest::Approx(20.0));
    for (int i = 0; i < 100; ++i) {
        const double x = 0.99 * 20.0 * i / 99.0;
        const double lhs = scaled.eval(x);
        const double rhs = ref.eval(0.25 * x) / 0.25;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("shape invariants: even, W(0)=0, increasing, convex") {
    const std::vector<ShapeModel> shapes = {
        ShapeModel::cone(0.7), ShapeModel::parabola(0.3), ShapeModel::semicircle(0.2),
        ShapeModel::sos_wulff(5.0, 0.125), ShapeModel::sos_wulff(30.0, 2.0)};
    for (const auto& s : shapes) {
        CAPTURE(s.describe());
        CHECK(s.eval(0.0) == 0.0);
        const double r = std::isfinite(s.reach()) ? 0.999 * s.reach() : 50.0;
        const int steps = 2000;
        const double dx = r / steps;
        double prev = 0.0;
        for (int i = 1; i <= steps; ++i) {
            const double x = i * dx;
            const double w = s.eval(x);
            REQUIRE(w == doctest::Approx(s.eval(-x)).epsilon(1e-14));
            REQUIRE(w > prev);
            prev = w;
        }
        if (s.strictly_convex()) {
            for (int i = -steps + 1; i < steps; ++i) {
                const double x = i * dx;
                const double second = s.eval(x - dx) - 2.0 * s.eval(x) + s.eval(x + dx);
                REQUIRE(second >= -1e-9);
            }
        }
    }
}

TEST_CASE("two-point shape examples") {
    SUBCASE("parabola symmetric anchors") {
        const auto t = two_point_shape(ShapeModel::parabola(1.0), 0, 1, 2, 1);
        CHECK(t.apex_x() == doctest::Approx(1.0));
        CHECK(t.apex_h() == doctest::Approx(0.0));
        CHECK(eval_two_point(t, 1.0) == doctest::Approx(0.0));
    }
    SUBCASE("parabola skewed anchors") {
        const auto shape = ShapeModel::parabola(0.5);
        const auto t = two_point_shape(shape, 0, 0, 3, 3);
        CHECK(t.apex_x() == doctest::Approx(0.5));
        CHECK(t.apex_h() == doctest::Approx(-0.125));
        CHECK(eval_two_point(t, 1.0) == doctest::Approx(0.0));
        CHECK(eval_two_point(t, 3.0) == doctest::Approx(3.0));
        // Apex form agrees with the product form.
        CHECK(t.apex_h() + shape.eval(1.0 - t.apex_x()) == doctest::Approx(0.0));
        const auto b = two_point_shape_bisect(shape, 0, 0, 3, 3);
        CHECK(b.apex_x() == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(b.eval(1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    }
    SUBCASE("cone") {
        const auto t = two_point_shape(ShapeModel::cone(0.5), 0, 2, 4, 0);
        CHECK(eval_two_point(t, 2.0) == doctest::Approx(1.0));
        CHECK(eval_two_point(t, 0.0) == doctest::Approx(2.0));
        CHECK(eval_two_point(t, 4.0) == doctest::Approx(0.0));
    }
    SUBCASE("degenerate anchors give the single-contact shape") {
        const auto shape = ShapeModel::sos_wulff(5.0, 0.125);
        const auto t = two_point_shape(shape, 3, 1.5, 3, 1.5);
        CHECK(t.apex_x() == 3.0);
        CHECK(t.eval(5.0) == doctest::Approx(1.5 + shape.eval(2.0)));
        CHECK(two_point_shape(ShapeModel::parabola(2.0), 1, 1, 1, 1).eval(2.0) ==
              doctest::Approx(3.0));
        CHECK(two_point_shape(ShapeModel::cone(2.0), 1, 1, 1, 1).eval(-1.0) ==
              doctest::Approx(5.0));
    }
    SUBCASE("anchor order") {
        CHECK_THROWS_AS(two_point_shape(ShapeModel::parabola(1.0), 2, 0, 1, 0), ArgumentError);
    }
}

TEST_CASE("unreachable pairs") {
    const auto circle = ShapeModel::semicircle(0.5);  // radius 2
    CHECK_THROWS_AS(two_point_shape(circle, 0, 0, 5, 0), UnreachablePair);
    // Rise larger than the radius cannot be bridged over a short gap.
    CHECK_THROWS_AS(two_point_shape(circle, 0, 0, 1, 3), UnreachablePair);
    const auto sos = ShapeModel::sos_wulff(30.0, 2.0);  // a = 15
    CHECK_THROWS_AS(two_point_shape(sos, 0, 0, 31, 0), UnreachablePair);
    CHECK_NOTHROW(two_point_shape(sos, 0, 0, 29, 0));
    try {
        two_point_shape(circle, 0, 1, 5, 2);
        FAIL("expected UnreachablePair");
    } catch (const UnreachablePair& e) {
        CHECK(e.j() == 0.0);
        CHECK(e.hk() == 2.0);
    }
}

TEST_CASE("property: anchors are reproduced") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> height(0.0, 6.0);
    std::uniform_int_distribution<int> pos(-50, 50);
    std::uniform_int_distribution<int> gap(1, 20);
    const std::vector<ShapeModel> closed = {ShapeModel::parabola(0.1), ShapeModel::cone(0.3)};
    const auto sos = ShapeModel::sos_wulff(5.0, 0.125);
    const auto circle = ShapeModel::semicircle(0.05);
    for (int s = 0; s < 500; ++s) {
        const double j = pos(rng);
        const double k = j + gap(rng);
        const double hj = height(rng);
        const double hk = height(rng);
        const auto p = two_point_shape(closed[0], j, hj, k, hk);
        CHECK(std::abs(p.eval(j) - hj) < 1e-8);
        CHECK(std::abs(p.eval(k) - hk) < 1e-8);
        // The cone only passes through both anchors when the rise fits its slope.
        if (std::abs(hk - hj) <= 0.3 * (k - j)) {
            const auto c = two_point_shape(closed[1], j, hj, k, hk);
            CHECK(std::abs(c.eval(j) - hj) < 1e-8);
            CHECK(std::abs(c.eval(k) - hk) < 1e-8);
            CHECK(std::abs(c.apex_h() + 0.3 * std::abs(j - c.apex_x()) - hj) < 1e-8);
        }
        const auto w = two_point_shape(sos, j, hj, k, hk);
        CHECK(std::abs(w.eval(j) - hj) < 1e-7);
        CHECK(std::abs(w.eval(k) - hk) < 1e-7);
        const auto c = two_point_shape(circle, j, hj, k, hk);
        CHECK(std::abs(c.eval(j) - hj) < 1e-8);
        CHECK(std::abs(c.eval(k) - hk) < 1e-8);
        const auto cb = two_point_shape_bisect(circle, j, hj, k, hk);
        CHECK(cb.apex_x() == doctest::Approx(c.apex_x()).epsilon(1e-8).scale(1.0));
        CHECK(cb.apex_h() == doctest::Approx(c.apex_h()).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("property: parabola bisection path agrees with the closed form") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> height(0.0, 8.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto shape = ShapeModel::parabola(0.1);
    for (int s = 0; s < 100; ++s) {
        const double j = std::floor(40 * unit(rng));
        const double k = j + 1 + std::floor(30 * unit(rng));
        const double hj = height(rng);
        const double hk = height(rng);
        const auto fast = two_point_shape(shape, j, hj, k, hk);
        const auto slow = two_point_shape_bisect(shape, j, hj, k, hk);
        for (int p = 0; p < 100; ++p) {
            const double x = j - 5 + (k - j + 10) * unit(rng);
            REQUIRE(std::abs(fast.eval(x) - slow.eval(x)) < 1e-7 * std::max(1.0, std::abs(fast.eval(x))));
        }
    }
}

TEST_CASE("property: two translates cross at most once") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const std::vector<ShapeModel> shapes = {ShapeModel::parabola(0.2), ShapeModel::semicircle(0.1),
                                            ShapeModel::sos_wulff(5.0, 0.125)};
    for (const auto& shape : shapes) {
        const double a = std::isfinite(shape.reach()) ? shape.reach() : 20.0;
        for (int s = 0; s < 200; ++s) {
            const double x1 = 0.4 * a * unit(rng);
            const double x2 = 0.4 * a * unit(rng);
            const double h1 = 3.0 * unit(rng);
            const double h2 = 3.0 * unit(rng);
            const double lo = std::max(x1, x2) - 0.999 * a;
            const double hi = std::min(x1, x2) + 0.999 * a;
            int changes = 0;
            int last_sign = 0;
            for (int g = 0; g <= 4000; ++g) {
                const double x = lo + (hi - lo) * g / 4000.0;
                const double d = (h1 + shape.eval(x - x1)) - (h2 + shape.eval(x - x2));
                const int sign = d > 1e-12 ? 1 : (d < -1e-12 ? -1 : 0);
                if (sign != 0) {
                    if (last_sign != 0 && sign != last_sign) ++changes;
                    last_sign = sign;
                }
            }
            REQUIRE(changes <= 1);
        }
    }
}
