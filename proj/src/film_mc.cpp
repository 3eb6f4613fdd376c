#include "wulff/film_mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wulff/errors.hpp"
#include "wulff/heat_bath.hpp"
#include "wulff/necklace.hpp"
#include "wulff/seeding.hpp"

namespace wulff {

FilmState film_heat_bath_run(const Substrate& substrate, const FilmRunConfig& config,
                             std::uint64_t seed) {
    if (!(config.k2 > 0.0)) throw ArgumentError("k2 must be positive");
    if (!(config.j2 >= 0.0)) throw ArgumentError("j2 must be nonnegative");
    if (config.burn_in < 0) throw ArgumentError("burn_in must be nonnegative");
    if (config.measure <= 0) throw ArgumentError("measure must be positive");
    if (config.batches < 2 || config.batches > config.measure) {
        throw ArgumentError("batches must be in [2, measure]");
    }

    FilmState st(substrate.with_boundary(Boundary::Periodic));
    st.j2_ = config.j2;
    st.k2_ = config.k2;
    const std::size_t n = substrate.size();
    const auto floor = st.substrate_.heights();
    st.h2_.assign(floor.begin(), floor.end());
    st.min_.assign(n, std::numeric_limits<double>::infinity());
    st.max_.assign(n, -std::numeric_limits<double>::infinity());
    st.min_clearance_ = std::numeric_limits<double>::infinity();

    Rng rng(seed);
    for (int s = 0; s < config.burn_in; ++s) {
        heat_bath_sweep(st.h2_, floor, config.j2, config.k2, rng);
    }

    const auto batches = static_cast<std::size_t>(config.batches);
    std::vector<double> batch_sum(n * batches, 0.0);
    std::vector<std::size_t> batch_len(batches, 0);
    for (int s = 0; s < config.measure; ++s) {
        heat_bath_sweep(st.h2_, floor, config.j2, config.k2, rng);
        const std::size_t b = static_cast<std::size_t>(s) * batches /
                              static_cast<std::size_t>(config.measure);
        ++batch_len[b];
        double* row = batch_sum.data() + b * n;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = st.h2_[i];
            row[i] += v;
            st.min_[i] = std::min(st.min_[i], v);
            st.max_[i] = std::max(st.max_[i], v);
            st.min_clearance_ = std::min(st.min_clearance_, v - floor[i]);
        }
    }
    st.sweeps_ = static_cast<long>(config.burn_in) + config.measure;

    const double nb = static_cast<double>(batches);
    st.mean_.assign(n, 0.0);
    st.mean_se_.assign(n, 0.0);
    std::vector<double> batch_avg(batches, 0.0);  // spatial average per batch
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (std::size_t b = 0; b < batches; ++b) total += batch_sum[b * n + i];
        st.mean_[i] = total / static_cast<double>(config.measure);
        double ss = 0.0;
        for (std::size_t b = 0; b < batches; ++b) {
            const double m = batch_sum[b * n + i] / static_cast<double>(batch_len[b]);
            ss += (m - st.mean_[i]) * (m - st.mean_[i]);
            batch_avg[b] += m / static_cast<double>(n);
        }
        st.mean_se_[i] = std::sqrt(ss / (nb - 1.0) / nb);
    }
    double avg = 0.0;
    for (double v : st.mean_) avg += v;
    st.average_ = avg / static_cast<double>(n);
    double ss = 0.0;
    for (double m : batch_avg) ss += (m - st.average_) * (m - st.average_);
    st.average_se_ = std::sqrt(ss / (nb - 1.0) / nb);
    return st;
}

namespace {

DeviationStats summarize(const std::vector<double>& d, const std::vector<bool>* skip) {
    std::vector<double> abs_d;
    double sum = 0.0;
    double max_abs = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (skip && (*skip)[i]) continue;
        abs_d.push_back(std::abs(d[i]));
        sum += d[i];
        max_abs = std::max(max_abs, std::abs(d[i]));
    }
    DeviationStats st;
    st.sites = abs_d.size();
    if (abs_d.empty()) return st;
    std::sort(abs_d.begin(), abs_d.end());
    const std::size_t m = abs_d.size();
    st.median_abs = m % 2 ? abs_d[m / 2] : 0.5 * (abs_d[m / 2 - 1] + abs_d[m / 2]);
    st.mean = sum / static_cast<double>(m);
    st.max_abs = max_abs;
    return st;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

}  // namespace

FilmComparison compare_film_to_necklace(const FilmState& film, const ShapeModel& shape,
                                        double exclusion_threshold) {
    if (shape.kind() != ShapeKind::SosWulff || !close(shape.j2(), film.j2()) ||
        !close(shape.k2(), film.k2())) {
        throw ArgumentError("film comparison needs the SOS Wulff shape of the film's (j2, k2)");
    }
    const Substrate& sub = film.substrate();
    const std::size_t n = sub.size();

    FilmComparison out;
    out.exclusion_threshold = exclusion_threshold;
    out.envelope.resize(n);
    try {
        const Necklace neck = periodic_contact_set(sub, shape);
        for (std::size_t i = 0; i < n; ++i) out.envelope[i] = neck.envelope(static_cast<double>(i));
        out.method = "necklace";
    } catch (const UnreachablePair&) {
        // Gaps wider than the support: fall back to the direct infimum over
        // translates on three periodic copies.
        std::vector<double> tiled(3 * n);
        for (std::size_t c = 0; c < 3; ++c) {
            std::copy(sub.heights().begin(), sub.heights().end(), tiled.begin() + c * n);
        }
        const auto env = envelope_bruteforce(Substrate(std::move(tiled), Boundary::Window), shape, 0.05);
        for (std::size_t i = 0; i < n; ++i) out.envelope[i] = env.value(static_cast<double>(n + i));
        out.method = "bruteforce";
    }

    out.deviation.resize(n);
    out.excluded.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.deviation[i] = film.mean()[i] - out.envelope[i];
        out.excluded[i] = out.envelope[i] - sub[i] < exclusion_threshold;
    }
    out.all = summarize(out.deviation, nullptr);
    out.outside = summarize(out.deviation, &out.excluded);
    return out;
}

}  // namespace wulff
