#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "wulff/parallel.hpp"
#include "wulff/shapes.hpp"

namespace wulff {

/// P(0 in B) for the cone W = lambda |x| on iid Exponential(1) heights:
///
///   int_0^inf e^{-x} prod_{i>=1} (1 - e^{-x - lambda i})^2 dx
///
/// by adaptive Gauss-Kronrod quadrature in y = e^{-x}. Absolute error
/// below 1e-10; throws NumericError otherwise.
double cone_density_exact(double lambda);

/// Closed-form upper bound on the cone density,
/// (1 - e^{-l}) / (2 e^{-l}) * (1 - exp(-2 e^{-l} / (1 - e^{-l}))).
double cone_density_upper(double lambda);

/// Closed-form lower bound on the cone density; needs 0 < lambda < 1.
double cone_density_lower(double lambda);

/// Upper bound on the parabola density,
/// 3 sqrt(l/pi) (1 + e^{2 - sqrt(pi/l)} / 3) / (1 - 2 sqrt(l/pi)),
/// valid for 0 < lambda < pi/4.
double parabola_density_upper(double lambda);

struct DensityEstimate {
    std::string shape;
    double lambda = 0.0;
    double p_hat = 0.0;
    double se = 0.0;
    std::size_t samples = 0;
    std::size_t n = 0;
    std::size_t sites_used = 0;  // interior sites per sample
    std::size_t margin = 0;
    std::uint64_t seed = 0;
};

/// Fraction of interior sites that are contacts, over `samples`
/// independent iid-exponential substrates of length n. Sample s uses
/// derive_seed(master_seed, s). The standard error treats per-sample
/// fractions as iid replicates. Result does not depend on `workers`.
DensityEstimate empirical_density(const ShapeModel& shape, std::size_t n, std::size_t samples,
                                  std::uint64_t master_seed,
                                  unsigned workers = default_worker_count());

}  // namespace wulff
