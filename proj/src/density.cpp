#include "wulff/density.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "wulff/errors.hpp"
#include "wulff/necklace.hpp"
#include "wulff/seeding.hpp"
#include "wulff/substrate.hpp"

namespace wulff {

namespace {

void require_positive_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw ArgumentError("lambda must be positive and finite");
    }
}

// Terms y q^i below this go to the power-series tail.
constexpr double kSeriesSwitch = 0.05;

// 2 * sum_{i>=1} log(1 - y q^i), q = e^{-lambda}. Explicit terms while
// y q^i >= kSeriesSwitch; the rest is summed exactly as
//   -sum_{m>=1} (y q^M)^m / (m (1 - q^m)).
double log_product_squared(double y, double lambda) {
    double sum = 0.0;
    std::size_t i = 1;
    double term = y * std::exp(-lambda);
    while (term >= kSeriesSwitch) {
        sum += std::log1p(-term);
        ++i;
        term = y * std::exp(-lambda * static_cast<double>(i));
    }
    double power = term;
    for (int m = 1; m < 200; ++m) {
        const double md = static_cast<double>(m);
        const double contrib = power / (md * -std::expm1(-lambda * md));
        sum -= contrib;
        if (contrib < 1e-18 * std::max(1.0, std::abs(sum))) break;
        power *= term;
    }
    return 2.0 * sum;
}

}  // namespace

double cone_density_exact(double lambda) {
    require_positive_lambda(lambda);
    // prod (1 - y q^i)^2 <= exp(-2 y c) with c = q/(1-q); past y_cut the
    // remaining mass is below exp(-2 y_cut c)/(2c) <= 1e-14.
    const double c = std::exp(-lambda) / -std::expm1(-lambda);
    double y_cut = 1.0;
    if (c > 0.0) {
        const double needed = std::log(1.0 / (2.0 * c * 1e-14)) / (2.0 * c);
        if (needed > 0.0) y_cut = std::min(1.0, needed);
    }
    auto integrand = [lambda](double y) { return std::exp(log_product_squared(y, lambda)); };
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, 0.0, y_cut, 20, 1e-13, &error);
    // Boost reports the error of each panel before rescaling to its width,
    // so this overstates the absolute error on [0, y_cut] with y_cut <= 1.
    const double abs_error = error;
    if (!(abs_error <= 1e-10) || !std::isfinite(value)) {
        throw NumericError("cone density quadrature did not converge: estimate " +
                           std::to_string(value) + ", error " + std::to_string(abs_error));
    }
    return value;
}

double cone_density_upper(double lambda) {
    require_positive_lambda(lambda);
    const double q = std::exp(-lambda);
    const double one_minus_q = -std::expm1(-lambda);
    return one_minus_q / (2.0 * q) * -std::expm1(-2.0 * q / one_minus_q);
}

double cone_density_lower(double lambda) {
    require_positive_lambda(lambda);
    if (!(lambda < 1.0)) throw ArgumentError("cone lower bound needs lambda < 1");
    const double q = std::exp(-lambda);
    const double one_minus_q = -std::expm1(-lambda);
    const double ll = lambda * std::log(1.0 / lambda);
    const double q2 = std::exp(-2.0 * lambda);
    const double one_minus_q2 = -std::expm1(-2.0 * lambda);
    return one_minus_q / (2.0 * q) * -std::expm1(-2.0 * ll * q / one_minus_q) *
           std::exp(-2.0 * ll * ll * q2 / one_minus_q2);
}

double parabola_density_upper(double lambda) {
    require_positive_lambda(lambda);
    constexpr double pi = std::numbers::pi;
    if (!(lambda < pi / 4.0)) throw ArgumentError("parabola upper bound needs lambda < pi/4");
    const double r = std::sqrt(lambda / pi);
    return 3.0 * r * (1.0 + std::exp(2.0 - std::sqrt(pi / lambda)) / 3.0) / (1.0 - 2.0 * r);
}

DensityEstimate empirical_density(const ShapeModel& shape, std::size_t n, std::size_t samples,
                                  std::uint64_t master_seed, unsigned workers) {
    if (samples == 0) throw ArgumentError("samples must be positive");
    if (n < 2) throw ArgumentError("substrate length must be at least 2");
    const std::size_t margin = interior_margin(shape, n);
    if (2 * margin >= n) {
        throw ArgumentError("no interior sites left after trimming a margin of " +
                            std::to_string(margin) + " from each end; increase n above " +
                            std::to_string(2 * margin));
    }
    const std::size_t lo = margin;
    const std::size_t hi = n - margin;  // exclusive
    const std::size_t used = hi - lo;

    std::vector<double> fraction(samples, 0.0);
    parallel_for(samples, workers, [&](std::size_t s) {
        const Substrate sub = gen_iid_exponential(n, derive_seed(master_seed, s));
        const auto idx = window_contacts(sub.heights(), shape);
        std::size_t hits = 0;
        for (std::size_t i : idx) {
            if (i >= lo && i < hi) ++hits;
        }
        fraction[s] = static_cast<double>(hits) / static_cast<double>(used);
    });

    double mean = 0.0;
    for (double f : fraction) mean += f;
    mean /= static_cast<double>(samples);
    double se;
    if (samples >= 2) {
        double ss = 0.0;
        for (double f : fraction) ss += (f - mean) * (f - mean);
        se = std::sqrt(ss / static_cast<double>(samples - 1) / static_cast<double>(samples));
    } else {
        se = std::sqrt(mean * (1.0 - mean) / static_cast<double>(used));
    }

    DensityEstimate est;
    est.shape = to_string(shape.kind());
    est.lambda = shape.kind() == ShapeKind::SosWulff ? 0.0 : shape.lambda();
    est.p_hat = mean;
    est.se = se;
    est.samples = samples;
    est.n = n;
    est.sites_used = used;
    est.margin = margin;
    est.seed = master_seed;
    return est;
}

}  // namespace wulff
