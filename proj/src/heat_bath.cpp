#include "wulff/heat_bath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wulff/errors.hpp"

namespace wulff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log of the integral of exp(slope * x) over [0, width].
double log_segment_integral(double slope, double width) {
    if (std::isinf(width)) return -std::log(-slope);
    if (slope == 0.0) return std::log(width);
    if (slope < 0.0) return std::log(-std::expm1(slope * width)) - std::log(-slope);
    return slope * width + std::log(-std::expm1(-slope * width)) - std::log(slope);
}

// Inverse CDF of the density ~ exp(slope * x) on [0, width] at u in [0, 1).
double invert_segment(double slope, double width, double u) {
    if (slope == 0.0) return u * width;
    if (std::isinf(width)) return -std::log1p(-u) / (-slope);
    if (slope < 0.0) {
        const double r = -slope;
        return std::clamp(-std::log1p(u * std::expm1(-r * width)) / r, 0.0, width);
    }
    // Mirror image of a decaying exponential.
    const double x = -std::log1p((1.0 - u) * std::expm1(-slope * width)) / slope;
    return std::clamp(width - x, 0.0, width);
}

// Fraction of the segment mass below offset x.
double segment_cdf(double slope, double width, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= width) return 1.0;
    if (slope == 0.0) return x / width;
    if (std::isinf(width)) return -std::expm1(slope * x);
    if (slope < 0.0) return std::expm1(slope * x) / std::expm1(slope * width);
    return std::exp(-slope * (width - x)) * std::expm1(-slope * x) / std::expm1(-slope * width);
}

}  // namespace

PiecewiseExponential::PiecewiseExponential(double left, double right, double coupling,
                                           double pressure, double floor)
    : coupling_(coupling), pressure_(pressure), left_(left), right_(right), floor_(floor) {
    if (!(pressure > 0.0)) throw ArgumentError("pressure must be positive");
    if (!(coupling >= 0.0)) throw ArgumentError("coupling must be nonnegative");
    const double lo = std::min(left, right);
    const double hi = std::max(left, right);

    std::array<double, 4> cuts{};
    std::size_t ncuts = 0;
    cuts[ncuts++] = floor;
    if (lo > floor) cuts[ncuts++] = lo;
    if (hi > floor && hi > lo) cuts[ncuts++] = hi;
    cuts[ncuts++] = kInf;

    double max_log = -kInf;
    for (std::size_t s = 0; s + 1 < ncuts; ++s) {
        const double start = cuts[s];
        const double width = cuts[s + 1] - start;
        // Slope just right of `start`.
        double slope = -pressure;
        if (start < lo) {
            slope += 2.0 * coupling;
        } else if (start >= hi) {
            slope -= 2.0 * coupling;
        }
        Segment seg{};
        seg.start = start;
        seg.width = width;
        seg.slope = slope;
        seg.log_mass = log_density(start) + log_segment_integral(slope, width);
        segments_[count_++] = seg;
        max_log = std::max(max_log, seg.log_mass);
    }
    double total = 0.0;
    for (std::size_t s = 0; s < count_; ++s) {
        segments_[s].prob = std::exp(segments_[s].log_mass - max_log);
        total += segments_[s].prob;
    }
    double cum = 0.0;
    for (std::size_t s = 0; s < count_; ++s) {
        segments_[s].prob /= total;
        segments_[s].cum = cum;
        cum += segments_[s].prob;
    }
}

double PiecewiseExponential::log_density(double h) const {
    return -coupling_ * (std::abs(h - left_) + std::abs(h - right_)) - pressure_ * h;
}

double PiecewiseExponential::sample(double u_segment, double u_position) const {
    std::size_t s = 0;
    while (s + 1 < count_ && u_segment >= segments_[s].cum + segments_[s].prob) ++s;
    const Segment& seg = segments_[s];
    return seg.start + invert_segment(seg.slope, seg.width, u_position);
}

double PiecewiseExponential::sample(Rng& rng) const {
    const double u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return sample(u1, u2);
}

double PiecewiseExponential::cdf(double h) const {
    if (h <= floor_) return 0.0;
    double acc = 0.0;
    for (std::size_t s = 0; s < count_; ++s) {
        const Segment& seg = segments_[s];
        if (h >= seg.start + seg.width) {
            acc += seg.prob;
        } else {
            acc += seg.prob * segment_cdf(seg.slope, seg.width, h - seg.start);
            break;
        }
    }
    return std::min(acc, 1.0);
}

void heat_bath_sweep(std::span<double> heights, std::span<const double> floor, double coupling,
                     double pressure, Rng& rng) {
    const std::size_t n = heights.size();
    if (floor.size() != n) throw ArgumentError("floor and heights differ in length");
    if (n < 2) throw ArgumentError("heat-bath chain needs at least 2 sites");
    for (std::size_t i = 0; i < n; ++i) {
        const double left = heights[(i + n - 1) % n];
        const double right = heights[(i + 1) % n];
        if (coupling == 0.0) {
            // Decoupled column: floor + Exponential(pressure).
            heights[i] = floor[i] + standard_exponential(rng) / pressure;
            continue;
        }
        PiecewiseExponential cond(left, right, coupling, pressure, floor[i]);
        heights[i] = cond.sample(rng);
    }
}

}  // namespace wulff
