#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "wulff/shapes.hpp"
#include "wulff/substrate.hpp"

namespace wulff {

struct FilmRunConfig {
    double j2 = 30.0;
    double k2 = 2.0;
    int burn_in = 10000;
    int measure = 100000;
    /// Batches for batch-means error bars; must divide into `measure`.
    int batches = 20;
};

/// SOS film h2 >= h1 over a quenched periodic substrate, thermalised by
/// heat-bath sweeps of exp(-J2 sum|h2_i - h2_{i+1}| - K2 sum h2_i).
class FilmState {
public:
    const Substrate& substrate() const noexcept { return substrate_; }
    double j2() const noexcept { return j2_; }
    double k2() const noexcept { return k2_; }
    long sweeps() const noexcept { return sweeps_; }

    /// Final configuration.
    const std::vector<double>& heights() const noexcept { return h2_; }
    /// Thermal averages over the measurement sweeps.
    const std::vector<double>& mean() const noexcept { return mean_; }
    /// Batch-means standard error of each site average.
    const std::vector<double>& mean_se() const noexcept { return mean_se_; }
    const std::vector<double>& min_height() const noexcept { return min_; }
    const std::vector<double>& max_height() const noexcept { return max_; }
    /// Smallest h2_i - h1_i seen at any site during the run.
    double min_clearance() const noexcept { return min_clearance_; }
    /// Spatial average of the film and its batch-means standard error.
    double average_height() const noexcept { return average_; }
    double average_height_se() const noexcept { return average_se_; }

private:
    friend FilmState film_heat_bath_run(const Substrate&, const FilmRunConfig&, std::uint64_t);
    explicit FilmState(Substrate substrate) : substrate_(std::move(substrate)) {}

    Substrate substrate_;
    double j2_ = 0.0;
    double k2_ = 0.0;
    long sweeps_ = 0;
    std::vector<double> h2_;
    std::vector<double> mean_;
    std::vector<double> mean_se_;
    std::vector<double> min_;
    std::vector<double> max_;
    double min_clearance_ = 0.0;
    double average_ = 0.0;
    double average_se_ = 0.0;
};

/// Starts from h2 = h1, discards burn_in sweeps, then averages over
/// `measure` sweeps. The substrate is treated as periodic.
FilmState film_heat_bath_run(const Substrate& substrate, const FilmRunConfig& config,
                             std::uint64_t seed);

struct DeviationStats {
    std::size_t sites = 0;
    double median_abs = 0.0;
    double mean = 0.0;
    double max_abs = 0.0;
};

struct FilmComparison {
    std::vector<double> envelope;   // I(i)
    std::vector<double> deviation;  // d_i = mean h2_i - I(i)
    std::vector<bool> excluded;     // I(i) - h1_i < threshold
    DeviationStats all;
    DeviationStats outside;  // sites not excluded
    double exclusion_threshold = 1.0;
    std::string method;  // "necklace" or "bruteforce"
};

/// Per-site deviation of the thermal film from the periodic Wulff necklace
/// of its substrate. `shape` must be SosWulff with the film's (j2, k2).
FilmComparison compare_film_to_necklace(const FilmState& film, const ShapeModel& shape,
                                        double exclusion_threshold = 1.0);

}  // namespace wulff
