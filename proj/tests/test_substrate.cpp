#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "wulff/errors.hpp"
#include "wulff/heat_bath.hpp"
#include "wulff/seeding.hpp"
#include "wulff/substrate.hpp"

using namespace wulff;

TEST_CASE("substrate validation") {
    CHECK_THROWS_AS(Substrate({1.0}, Boundary::Window), ArgumentError);
    CHECK_THROWS_AS(Substrate({1.0, -0.5}, Boundary::Window), ArgumentError);
    CHECK_THROWS_AS(Substrate({1.0, NAN}, Boundary::Window), ArgumentError);
    CHECK_THROWS_AS(gen_iid_exponential(1, 3), ArgumentError);
    CHECK_THROWS_AS(gen_sos_substrate(10, {1.0, 0.0, 10, 10}, 3), ArgumentError);

    const Substrate s({1.0, 2.0, 3.0}, Boundary::Window);
    const auto r = s.rotated(1);
    CHECK(r[0] == 3.0);
    CHECK(r[1] == 1.0);
    CHECK(r[2] == 2.0);
    CHECK(s.with_boundary(Boundary::Periodic).boundary() == Boundary::Periodic);
    CHECK(to_string(Boundary::Periodic) == "periodic");
}

TEST_CASE("iid exponential substrate") {
    const auto a = gen_iid_exponential(100000, 99);
    const auto b = gen_iid_exponential(100000, 99);
    const auto c = gen_iid_exponential(100000, 100);
    CHECK(std::equal(a.heights().begin(), a.heights().end(), b.heights().begin()));
    CHECK_FALSE(std::equal(a.heights().begin(), a.heights().end(), c.heights().begin()));
    CHECK(a.provenance().seed == 99);
    CHECK(a.boundary() == Boundary::Window);

    const double mean = std::accumulate(a.heights().begin(), a.heights().end(), 0.0) / 1e5;
    CHECK(std::abs(mean - 1.0) < 5.0 / std::sqrt(1e5));
    const std::vector<double> h(a.heights().begin(), a.heights().end());
    const double d = oracle::ks_statistic(h, [](double x) { return -std::expm1(-x); });
    CHECK(d < oracle::ks_critical_1pct(h.size()));
}

namespace {

struct Case {
    double left, right, coupling, pressure, floor;
};

}  // namespace

TEST_CASE("piecewise exponential conditional law") {
    const std::vector<Case> cases = {
        {1.0, 3.0, 1.0, 0.5, 0.0},  {3.0, 1.0, 1.0, 0.5, 0.0},  {2.0, 2.0, 2.0, 0.3, 0.0},
        {1.0, 3.0, 1.0, 0.5, 2.0},  {1.0, 3.0, 1.0, 0.5, 4.0},  {0.5, 6.0, 30.0, 2.0, 1.0},
        {1.0, 3.0, 0.0, 0.5, 0.7},  {1.0, 3.0, 0.2, 3.0, 0.0},  {10.0, 12.0, 0.1, 0.05, 0.0}};
    for (const auto& c : cases) {
        CAPTURE(c.left);
        CAPTURE(c.right);
        CAPTURE(c.coupling);
        CAPTURE(c.floor);
        const PiecewiseExponential p(c.left, c.right, c.coupling, c.pressure, c.floor);
        CHECK(p.segment_count() >= 1);
        CHECK(p.segment_count() <= 3);
        CHECK(p.cdf(c.floor) == doctest::Approx(0.0).scale(1.0));
        CHECK(p.cdf(c.floor - 1.0) == 0.0);

        // Kinks sit at the neighbour heights; the rate beyond them is 2J + K.
        const double far = std::max({c.left, c.right, c.floor}) + 60.0 / (2.0 * c.coupling + c.pressure);
        double prev = 0.0;
        for (int k = 1; k <= 12; ++k) {
            const double x = c.floor + (far - c.floor) * k / 12.0 * 0.5;
            // Simpson per kink-free piece.
            auto f = [&](double h) { return std::exp(p.log_density(h) - p.log_density(c.floor)); };
            auto piecewise = [&](double lo, double hi) {
                std::vector<double> cuts{lo, hi};
                for (double kink : {c.left, c.right}) {
                    if (kink > lo && kink < hi) cuts.push_back(kink);
                }
                std::sort(cuts.begin(), cuts.end());
                double s = 0.0;
                for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                    s += oracle::simpson(f, cuts[i], cuts[i + 1], 2000);
                }
                return s;
            };
            const double ref = piecewise(c.floor, x) / piecewise(c.floor, far);
            const double got = p.cdf(x);
            CHECK(got == doctest::Approx(ref).epsilon(1e-7).scale(1.0));
            CHECK(got >= prev);
            prev = got;
        }
        CHECK(p.cdf(far + 100.0) == doctest::Approx(1.0));

        // Inversion: cdf(sample(u, v)) is uniform in the joint draw.
        std::vector<double> draws;
        Rng rng(derive_seed(17, static_cast<std::uint64_t>(c.left * 100 + c.floor)));
        for (int i = 0; i < 20000; ++i) {
            const double x = p.sample(rng);
            REQUIRE(x >= c.floor);
            draws.push_back(x);
        }
        const double d = oracle::ks_statistic(draws, [&](double x) { return p.cdf(x); });
        CHECK(d < oracle::ks_critical_1pct(draws.size()));
        CHECK(p.sample(0.0, 0.0) == doctest::Approx(c.floor));
    }
}

TEST_CASE("piecewise exponential rejects bad parameters") {
    CHECK_THROWS_AS(PiecewiseExponential(1.0, 2.0, -1.0, 0.5, 0.0), ArgumentError);
    CHECK_THROWS_AS(PiecewiseExponential(1.0, 2.0, 1.0, 0.0, 0.0), ArgumentError);
}

TEST_CASE("heat bath on two periodic sites matches the exact stationary mean") {
    // With n = 2 both neighbours are the other site, so the joint law is
    // exp(-2J|h0 - h1| - K(h0 + h1)) on h >= 0, giving
    // E[h0] = (1/(2J + K) + 1/K) / 2.
    const double j = 1.0;
    const double k = 0.5;
    const double expected = 0.5 * (1.0 / (2.0 * j + k) + 1.0 / k);
    std::vector<double> h{1.0, 1.0};
    const std::vector<double> floor{0.0, 0.0};
    Rng rng(123);
    for (int s = 0; s < 1000; ++s) heat_bath_sweep(h, floor, j, k, rng);
    const int batches = 50;
    const int per_batch = 10000;
    std::vector<double> means;
    for (int b = 0; b < batches; ++b) {
        double acc = 0.0;
        for (int s = 0; s < per_batch; ++s) {
            heat_bath_sweep(h, floor, j, k, rng);
            acc += 0.5 * (h[0] + h[1]);
        }
        means.push_back(acc / per_batch);
    }
    const double m = std::accumulate(means.begin(), means.end(), 0.0) / batches;
    double var = 0.0;
    for (double x : means) var += (x - m) * (x - m);
    const double se = std::sqrt(var / (batches - 1) / batches);
    CHECK(std::abs(m - expected) < 4.0 * se);
}

TEST_CASE("heat bath respects the floor and decouples at J = 0") {
    const std::size_t n = 2000;
    std::vector<double> floor(n);
    Rng frng(5);
    for (auto& f : floor) f = 3.0 * uniform01(frng);
    std::vector<double> h = floor;
    Rng rng(6);
    double acc = 0.0;
    for (int s = 0; s < 50; ++s) {
        heat_bath_sweep(h, floor, 0.0, 2.0, rng);
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE(h[i] >= floor[i]);
            acc += h[i] - floor[i];
        }
    }
    CHECK(acc / (50.0 * n) == doctest::Approx(0.5).epsilon(0.02));

    std::vector<double> g(n, 0.0);
    for (int s = 0; s < 20; ++s) {
        heat_bath_sweep(g, floor, 5.0, 0.5, rng);
        for (std::size_t i = 0; i < n; ++i) REQUIRE(g[i] >= floor[i]);
    }
}

TEST_CASE("SOS substrate generation") {
    const SosParams params;
    CHECK(params.j1 == 1.0);
    CHECK(params.k1 == 0.5);
    const auto a = gen_sos_substrate(256, params, 8);
    const auto b = gen_sos_substrate(256, params, 8);
    CHECK(a.boundary() == Boundary::Periodic);
    CHECK(std::equal(a.heights().begin(), a.heights().end(), b.heights().begin()));
    for (double h : a.heights()) CHECK(h >= 0.0);
    CHECK(a.provenance().generator == "sos-heat-bath");

    // J1 = 0: heights are iid Exponential with mean 1/K1.
    SosParams free{0.0, 0.25, 1, 0};
    const auto f = gen_sos_substrate(50000, free, 9);
    const std::vector<double> h(f.heights().begin(), f.heights().end());
    const double d = oracle::ks_statistic(h, [](double x) { return -std::expm1(-0.25 * x); });
    CHECK(d < oracle::ks_critical_1pct(h.size()));

    // Coupling smooths the profile relative to the uncoupled one.
    const auto smooth = gen_sos_substrate(4096, {2.0, 0.5, 10, 200}, 10);
    const auto rough = gen_sos_substrate(4096, {0.0, 0.5, 10, 200}, 10);
    auto mean_step = [](const Substrate& s) {
        double acc = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) acc += std::abs(s[(i + 1) % s.size()] - s[i]);
        return acc / static_cast<double>(s.size());
    };
    CHECK(mean_step(smooth) < 0.5 * mean_step(rough));
}
