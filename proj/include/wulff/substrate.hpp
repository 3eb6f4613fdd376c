#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wulff {

enum class Boundary { Window, Periodic };

std::string to_string(Boundary boundary);

struct Provenance {
    std::string generator;
    std::vector<std::pair<std::string, double>> params;
    std::uint64_t seed = 0;
};

/// Nonnegative column heights h_i on sites 0..n-1. The substrate set is
/// {(i, z) : z <= h_i}.
class Substrate {
public:
    Substrate(std::vector<double> heights, Boundary boundary, Provenance provenance = {});

    std::size_t size() const noexcept { return heights_.size(); }
    double operator[](std::size_t i) const { return heights_[i]; }
    std::span<const double> heights() const noexcept { return heights_; }
    Boundary boundary() const noexcept { return boundary_; }
    const Provenance& provenance() const noexcept { return provenance_; }

    Substrate with_boundary(Boundary boundary) const;
    /// Cyclic shift: result[(i + shift) mod n] = h[i].
    Substrate rotated(std::size_t shift) const;

private:
    std::vector<double> heights_;
    Boundary boundary_;
    Provenance provenance_;
};

/// n iid Exponential(mean 1) heights, a deterministic function of `seed`.
Substrate gen_iid_exponential(std::size_t n, std::uint64_t seed,
                              Boundary boundary = Boundary::Window);

struct SosParams {
    double j1 = 1.0;
    double k1 = 0.5;
    int sweeps = 10;
    int burn_in = 100;
};

/// Periodic substrate drawn from exp(-J1 sum|h_i - h_{i+1}| - K1 sum h_i),
/// h_i >= 0, by heat-bath sweeps: burn_in sweeps followed by `sweeps`
/// more; the final configuration is returned.
Substrate gen_sos_substrate(std::size_t n, const SosParams& params, std::uint64_t seed);

}  // namespace wulff
