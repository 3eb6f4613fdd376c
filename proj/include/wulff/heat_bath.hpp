#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "wulff/seeding.hpp"

namespace wulff {

/// Conditional law of one SOS column given its two neighbours:
///
///   p(h) ~ exp(-J (|h - a| + |h - b|) - K h),   h >= floor.
///
/// The log-density is piecewise linear with kinks at the neighbour heights,
/// so the law is a mixture of at most three truncated exponentials. Segment
/// masses are kept in log space; sampling is exact inversion per segment.
class PiecewiseExponential {
public:
    PiecewiseExponential(double left, double right, double coupling, double pressure,
                         double floor);

    double sample(Rng& rng) const;
    /// Sample from two uniforms in [0, 1): one picks the segment, one the
    /// position inside it.
    double sample(double u_segment, double u_position) const;
    double cdf(double h) const;
    /// Unnormalised log-density.
    double log_density(double h) const;
    std::size_t segment_count() const noexcept { return count_; }

private:
    struct Segment {
        double start;
        double width;  // +inf for the last segment
        double slope;  // d log p / dh
        double log_mass;
        double prob;
        double cum;  // probability mass before this segment
    };

    double coupling_;
    double pressure_;
    double left_;
    double right_;
    double floor_;
    std::array<Segment, 3> segments_{};
    std::size_t count_ = 0;
};

/// One sequential heat-bath sweep over a periodic chain: each site is
/// redrawn from its exact conditional, constrained to h[i] >= floor[i].
void heat_bath_sweep(std::span<double> heights, std::span<const double> floor, double coupling,
                     double pressure, Rng& rng);

}  // namespace wulff
