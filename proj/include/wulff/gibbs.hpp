#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wulff/parallel.hpp"
#include "wulff/shapes.hpp"

namespace wulff {

/// Contact pattern on [0, L]: N gaps l_1..l_N summing to L and contact
/// heights x_0..x_N.
struct GibbsPattern {
    std::vector<int> gaps;
    std::vector<double> heights;

    int length() const;
    /// Throws ArgumentError unless gaps >= 1, heights >= 0 and sizes agree.
    void validate() const;
};

/// Probability that iid Exponential(1) heights at the sites strictly between
/// two contacts (0, x0) and (l1, x1) all lie below the shape through them.
/// Sites where the shape is at or below zero make the factor 0.
double factor_F(const ShapeModel& shape, double x0, int l1, double x1);

/// 1 when x0 is at or above the shape through (-l0, x_prev) and (l1, x_next).
int factor_G(const ShapeModel& shape, double x_prev, int l0, double x0, int l1, double x_next);

/// prod e^{-x_n} prod F prod G: the density of the pattern with respect to
/// counting measure on gaps times Lebesgue measure on heights.
double gibbs_weight(const ShapeModel& shape, const GibbsPattern& pattern);

struct McEstimate {
    double value = 0.0;
    double se = 0.0;
    std::size_t samples = 0;
};

/// All compositions of L (ordered gap lists summing to L), lexicographic.
std::vector<std::vector<int>> compositions(int length);

/// Probability of a fixed gap signature: the integral of gibbs_weight over
/// the heights, estimated with the Exponential(1) prior as proposal so each
/// draw contributes prod F prod G.
McEstimate pattern_probability(const ShapeModel& shape, std::span<const int> gaps,
                               std::size_t mc_samples, std::uint64_t seed,
                               unsigned workers = default_worker_count());

/// Sum of pattern_probability over all compositions of L; composition c
/// uses derive_seed(seed, c). L = 1 is exact.
McEstimate partition_function(const ShapeModel& shape, int length, std::size_t mc_samples,
                              std::uint64_t seed, unsigned workers = default_worker_count());

struct SignatureFrequency {
    std::vector<int> gaps;
    double p = 0.0;
    double se = 0.0;
};

/// Gap-signature frequencies of the window contact set over `substrates`
/// iid-exponential substrates on [0, L], in compositions(L) order.
std::vector<SignatureFrequency> empirical_signatures(const ShapeModel& shape, int length,
                                                     std::size_t substrates, std::uint64_t seed,
                                                     unsigned workers = default_worker_count());

}  // namespace wulff
