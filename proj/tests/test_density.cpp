#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "wulff/density.hpp"
#include "wulff/errors.hpp"
#include "wulff/necklace.hpp"

using namespace wulff;

namespace {

// Reference values from 30-digit quadrature of the same integral and the
// closed-form bounds (computed offline, frozen here).
struct Frozen {
    double lambda, lower, exact, upper;
};
constexpr Frozen kCone[] = {
    {0.5, 0.185151093, 0.283735759, 0.309497741},
    {0.2, 0.068672784, 0.105274065, 0.110688165},
    {0.05, 0.016683446, 0.025316490, 0.025635548},
    {0.01, 0.004072981, 0.005012531, 0.005025084},
};

}  // namespace

TEST_CASE("cone density against a direct Simpson oracle") {
    for (double lambda : {0.5, 0.2, 0.05}) {
        CAPTURE(lambda);
        const double ref = oracle::simpson(
            [&](double y) { return oracle::cone_integrand_direct(y, lambda); }, 0.0, 1.0, 20000);
        CHECK(cone_density_exact(lambda) == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("cone density and bounds against frozen references") {
    for (const auto& f : kCone) {
        CAPTURE(f.lambda);
        CHECK(cone_density_exact(f.lambda) == doctest::Approx(f.exact).epsilon(3e-9).scale(1.0));
        CHECK(cone_density_upper(f.lambda) == doctest::Approx(f.upper).epsilon(3e-9).scale(1.0));
        CHECK(cone_density_lower(f.lambda) == doctest::Approx(f.lower).epsilon(3e-9).scale(1.0));
        CHECK(cone_density_lower(f.lambda) <= cone_density_exact(f.lambda));
        CHECK(cone_density_exact(f.lambda) <= cone_density_upper(f.lambda));
    }
    CHECK(cone_density_upper(0.1) == doctest::Approx(0.0525854587).epsilon(1e-9).scale(1.0));
    CHECK(cone_density_upper(1e-4) / 1e-4 == doctest::Approx(0.500025).epsilon(1e-6));
    CHECK(cone_density_lower(1e-4) / 1e-4 == doctest::Approx(0.4958016).epsilon(1e-6));
}

TEST_CASE("small-lambda limit of the cone density") {
    const double r = cone_density_exact(1e-4) / 1e-4;
    CHECK(r > 0.49);
    CHECK(r < 0.51);
    CHECK(cone_density_exact(1e-3) / 1e-3 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("property: cone density is increasing in lambda and below 1") {
    double prev = 0.0;
    for (double lambda = 0.01; lambda < 5.0; lambda *= 1.5) {
        const double p = cone_density_exact(lambda);
        CHECK(p > prev);
        CHECK(p < 1.0);
        prev = p;
    }
}

TEST_CASE("parabola upper bound") {
    CHECK(parabola_density_upper(0.04) == doctest::Approx(0.4373256754).epsilon(1e-9).scale(1.0));
    CHECK(parabola_density_upper(0.01) == doctest::Approx(0.1907846228).epsilon(1e-9).scale(1.0));
    // Leading order 3 sqrt(lambda / pi).
    const double l = 1e-6;
    CHECK(parabola_density_upper(l) / (3.0 * std::sqrt(l / std::acos(-1.0))) ==
          doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("density argument errors") {
    CHECK_THROWS_AS(cone_density_exact(0.0), ArgumentError);
    CHECK_THROWS_AS(cone_density_exact(-1.0), ArgumentError);
    CHECK_THROWS_AS(cone_density_lower(1.0), ArgumentError);
    CHECK_THROWS_AS(parabola_density_upper(0.8), ArgumentError);
    CHECK_THROWS_AS(empirical_density(ShapeModel::cone(0.5), 100, 0, 1), ArgumentError);
    // Margin eats the whole window.
    CHECK_THROWS_AS(empirical_density(ShapeModel::cone(0.01), 100, 5, 1), ArgumentError);
}

TEST_CASE("empirical density") {
    const auto shape = ShapeModel::cone(0.5);
    const auto one = empirical_density(shape, 4000, 40, 2024, 1);
    const auto many = empirical_density(shape, 4000, 40, 2024, 5);
    CHECK(one.p_hat == many.p_hat);
    CHECK(one.se == many.se);
    CHECK(one.samples == 40);
    CHECK(one.n == 4000);
    CHECK(one.margin == interior_margin(shape, 4000));
    CHECK(one.sites_used == 4000 - 2 * one.margin);
    CHECK(one.shape == "cone");
    CHECK(std::abs(one.p_hat - cone_density_exact(0.5)) < 4.0 * one.se);

    const auto other = empirical_density(shape, 4000, 40, 2025, 1);
    CHECK(other.p_hat != one.p_hat);
}
