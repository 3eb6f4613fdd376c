#include "wulff/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wulff/errors.hpp"
#include "wulff/necklace.hpp"
#include "wulff/seeding.hpp"

namespace wulff {

namespace {

// Monte-Carlo draws are split into this many fixed chunks so results do not
// depend on the worker count.
constexpr std::size_t kChunks = 64;

constexpr int kMaxLength = 24;

void require_length(int length) {
    if (length < 1 || length > kMaxLength) {
        throw ArgumentError("window length L must be in [1, " + std::to_string(kMaxLength) + "]");
    }
}

// F and G over a pattern, without the e^{-x} prior.
double likelihood_ratio(const ShapeModel& shape, std::span<const int> gaps,
                        std::span<const double> x) {
    const std::size_t n = gaps.size();
    for (std::size_t k = 1; k < n; ++k) {
        if (!factor_G(shape, x[k - 1], gaps[k - 1], x[k], gaps[k], x[k + 1])) return 0.0;
    }
    double w = 1.0;
    for (std::size_t k = 0; k < n && w > 0.0; ++k) w *= factor_F(shape, x[k], gaps[k], x[k + 1]);
    return w;
}

}  // namespace

int GibbsPattern::length() const { return std::accumulate(gaps.begin(), gaps.end(), 0); }

void GibbsPattern::validate() const {
    if (gaps.empty()) throw ArgumentError("pattern needs at least one gap");
    if (heights.size() != gaps.size() + 1) {
        throw ArgumentError("pattern needs one more height than gaps");
    }
    for (int l : gaps) {
        if (l < 1) throw ArgumentError("gaps must be positive");
    }
    for (double x : heights) {
        if (!(x >= 0.0)) throw ArgumentError("contact heights must be nonnegative");
    }
}

double factor_F(const ShapeModel& shape, double x0, int l1, double x1) {
    if (l1 < 1) throw ArgumentError("gap must be positive");
    if (l1 == 1) return 1.0;
    const TwoPointShape tps = two_point_shape(shape, 0.0, x0, static_cast<double>(l1), x1);
    double f = 1.0;
    for (int i = 1; i < l1; ++i) {
        const double w = tps.eval(static_cast<double>(i));
        if (w <= 0.0) return 0.0;
        f *= -std::expm1(-w);
    }
    return f;
}

int factor_G(const ShapeModel& shape, double x_prev, int l0, double x0, int l1, double x_next) {
    if (l0 < 1 || l1 < 1) throw ArgumentError("gaps must be positive");
    const double w =
        two_point_value(shape, -static_cast<double>(l0), x_prev, static_cast<double>(l1), x_next, 0.0);
    return x0 >= w ? 1 : 0;
}

double gibbs_weight(const ShapeModel& shape, const GibbsPattern& pattern) {
    pattern.validate();
    double prior = 0.0;
    for (double x : pattern.heights) prior += x;
    return std::exp(-prior) * likelihood_ratio(shape, pattern.gaps, pattern.heights);
}

std::vector<std::vector<int>> compositions(int length) {
    require_length(length);
    std::vector<std::vector<int>> out;
    std::vector<int> current;
    auto recurse = [&](auto&& self, int remaining) -> void {
        if (remaining == 0) {
            out.push_back(current);
            return;
        }
        for (int l = 1; l <= remaining; ++l) {
            current.push_back(l);
            self(self, remaining - l);
            current.pop_back();
        }
    };
    recurse(recurse, length);
    return out;
}

McEstimate pattern_probability(const ShapeModel& shape, std::span<const int> gaps,
                               std::size_t mc_samples, std::uint64_t seed, unsigned workers) {
    if (gaps.empty()) throw ArgumentError("gap signature must be nonempty");
    for (int l : gaps) {
        if (l < 1) throw ArgumentError("gaps must be positive");
    }
    if (mc_samples == 0) throw ArgumentError("mc_samples must be positive");

    // A single gap has no G factor and an empty F when l = 1: weight 1.
    if (gaps.size() == 1 && gaps[0] == 1) return {1.0, 0.0, mc_samples};

    const std::vector<int> g(gaps.begin(), gaps.end());
    const std::size_t chunks = std::min(kChunks, mc_samples);
    std::vector<double> sums(chunks, 0.0);
    std::vector<double> squares(chunks, 0.0);
    parallel_for(chunks, workers, [&](std::size_t c) {
        const std::size_t begin = mc_samples * c / chunks;
        const std::size_t end = mc_samples * (c + 1) / chunks;
        Rng rng(derive_seed(seed, c));
        std::vector<double> x(g.size() + 1);
        double s = 0.0;
        double s2 = 0.0;
        for (std::size_t m = begin; m < end; ++m) {
            for (double& v : x) v = standard_exponential(rng);
            const double w = likelihood_ratio(shape, g, x);
            s += w;
            s2 += w * w;
        }
        sums[c] = s;
        squares[c] = s2;
    });
    double s = 0.0;
    double s2 = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) {
        s += sums[c];
        s2 += squares[c];
    }
    const double m = static_cast<double>(mc_samples);
    const double mean = s / m;
    const double var = mc_samples > 1 ? std::max(0.0, (s2 - m * mean * mean) / (m - 1.0)) : 0.0;
    return {mean, std::sqrt(var / m), mc_samples};
}

McEstimate partition_function(const ShapeModel& shape, int length, std::size_t mc_samples,
                              std::uint64_t seed, unsigned workers) {
    if (length > 8) throw ArgumentError("partition function is limited to L <= 8");
    const auto comps = compositions(length);
    McEstimate total{0.0, 0.0, mc_samples};
    double var = 0.0;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        const McEstimate e =
            pattern_probability(shape, comps[c], mc_samples, derive_seed(seed, c), workers);
        total.value += e.value;
        var += e.se * e.se;
    }
    total.se = std::sqrt(var);
    return total;
}

std::vector<SignatureFrequency> empirical_signatures(const ShapeModel& shape, int length,
                                                     std::size_t substrates, std::uint64_t seed,
                                                     unsigned workers) {
    require_length(length);
    if (substrates == 0) throw ArgumentError("substrates must be positive");
    const auto comps = compositions(length);
    // Interior contact positions as a bitmask -> composition index.
    std::vector<std::size_t> index_of_mask(std::size_t{1} << (length - 1), 0);
    for (std::size_t c = 0; c < comps.size(); ++c) {
        std::size_t mask = 0;
        int pos = 0;
        for (std::size_t k = 0; k + 1 < comps[c].size(); ++k) {
            pos += comps[c][k];
            mask |= std::size_t{1} << (pos - 1);
        }
        index_of_mask[mask] = c;
    }

    const std::size_t chunks = std::min(kChunks, substrates);
    std::vector<std::vector<std::size_t>> counts(chunks,
                                                 std::vector<std::size_t>(comps.size(), 0));
    parallel_for(chunks, workers, [&](std::size_t c) {
        const std::size_t begin = substrates * c / chunks;
        const std::size_t end = substrates * (c + 1) / chunks;
        Rng rng(derive_seed(seed, c));
        std::vector<double> h(static_cast<std::size_t>(length) + 1);
        for (std::size_t s = begin; s < end; ++s) {
            for (double& v : h) v = standard_exponential(rng);
            const auto idx = window_contacts(h, shape);
            std::size_t mask = 0;
            for (std::size_t i : idx) {
                if (i > 0 && i < static_cast<std::size_t>(length)) mask |= std::size_t{1} << (i - 1);
            }
            ++counts[c][index_of_mask[mask]];
        }
    });

    std::vector<SignatureFrequency> out;
    const double total = static_cast<double>(substrates);
    for (std::size_t k = 0; k < comps.size(); ++k) {
        std::size_t hits = 0;
        for (std::size_t c = 0; c < chunks; ++c) hits += counts[c][k];
        const double p = static_cast<double>(hits) / total;
        out.push_back({comps[k], p, std::sqrt(p * (1.0 - p) / total)});
    }
    return out;
}

}  // namespace wulff
