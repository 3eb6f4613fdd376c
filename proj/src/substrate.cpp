#include "wulff/substrate.hpp"

#include <cmath>

#include "wulff/errors.hpp"
#include "wulff/heat_bath.hpp"
#include "wulff/seeding.hpp"

namespace wulff {

std::string to_string(Boundary boundary) {
    return boundary == Boundary::Periodic ? "periodic" : "window";
}

Substrate::Substrate(std::vector<double> heights, Boundary boundary, Provenance provenance)
    : heights_(std::move(heights)), boundary_(boundary), provenance_(std::move(provenance)) {
    if (heights_.size() < 2) throw ArgumentError("substrate needs at least 2 sites");
    for (double h : heights_) {
        if (!(h >= 0.0) || !std::isfinite(h)) {
            throw ArgumentError("substrate heights must be finite and nonnegative");
        }
    }
}

Substrate Substrate::with_boundary(Boundary boundary) const {
    return Substrate(heights_, boundary, provenance_);
}

Substrate Substrate::rotated(std::size_t shift) const {
    const std::size_t n = heights_.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[(i + shift) % n] = heights_[i];
    return Substrate(std::move(out), boundary_, provenance_);
}

Substrate gen_iid_exponential(std::size_t n, std::uint64_t seed, Boundary boundary) {
    if (n < 2) throw ArgumentError("substrate length must be at least 2");
    Rng rng(seed);
    std::vector<double> h(n);
    for (auto& v : h) v = standard_exponential(rng);
    return Substrate(std::move(h), boundary, {"iid-exponential", {{"mean", 1.0}}, seed});
}

Substrate gen_sos_substrate(std::size_t n, const SosParams& params, std::uint64_t seed) {
    if (n < 2) throw ArgumentError("substrate length must be at least 2");
    if (!(params.j1 >= 0.0)) throw ArgumentError("j1 must be nonnegative");
    if (!(params.k1 > 0.0)) throw ArgumentError("k1 must be positive");
    if (params.sweeps <= 0) throw ArgumentError("sweeps must be positive");
    if (params.burn_in < 0) throw ArgumentError("burn_in must be nonnegative");

    Rng rng(seed);
    std::vector<double> h(n);
    for (auto& v : h) v = standard_exponential(rng) / params.k1;
    const std::vector<double> floor(n, 0.0);
    const int total = params.burn_in + params.sweeps;
    for (int s = 0; s < total; ++s) heat_bath_sweep(h, floor, params.j1, params.k1, rng);
    return Substrate(std::move(h), Boundary::Periodic,
                     {"sos-heat-bath",
                      {{"j1", params.j1},
                       {"k1", params.k1},
                       {"sweeps", static_cast<double>(params.sweeps)},
                       {"burn_in", static_cast<double>(params.burn_in)}},
                      seed});
}

}  // namespace wulff
