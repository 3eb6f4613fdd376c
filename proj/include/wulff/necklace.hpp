#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wulff/shapes.hpp"
#include "wulff/substrate.hpp"

namespace wulff {

struct Contact {
    std::int64_t site;
    double height;
};

/// Contact points b_n of the envelope with the substrate, and the envelope
/// itself as one two-point shape per gap.
///
/// In Window mode the first and last sites are always contacts and the
/// envelope is defined on [first_site, last_site]. In Periodic mode the
/// contacts lie in [0, n) and the chain carries one guard contact on each
/// side (the neighbouring periodic images), so the envelope is defined on
/// the whole circle.
class Necklace {
public:
    Necklace(ShapeModel shape, Boundary boundary, std::int64_t first_site,
             std::int64_t last_site, std::vector<Contact> chain, std::size_t lead,
             std::size_t count);

    const ShapeModel& shape() const noexcept { return shape_; }
    Boundary boundary() const noexcept { return boundary_; }
    std::int64_t first_site() const noexcept { return first_site_; }
    std::int64_t last_site() const noexcept { return last_site_; }

    std::span<const Contact> contacts() const noexcept {
        return std::span<const Contact>(chain_).subspan(lead_, count_);
    }
    /// Contacts including periodic guards.
    std::span<const Contact> chain() const noexcept { return chain_; }
    std::vector<std::int64_t> sites() const;
    /// l_n = b_n - b_{n-1} over the in-window contacts.
    std::vector<std::int64_t> gaps() const;

    /// Envelope I(x). Exact h_{b_n} at contact sites.
    double envelope(double x) const;
    /// Two-point shape spanning chain gap g (between chain[g] and chain[g+1]).
    const TwoPointShape& gap_shape(std::size_t g) const { return gap_shapes_.at(g); }

private:
    ShapeModel shape_;
    Boundary boundary_;
    std::int64_t first_site_;
    std::int64_t last_site_;
    std::vector<Contact> chain_;
    std::size_t lead_;
    std::size_t count_;
    std::vector<TwoPointShape> gap_shapes_;
};

inline double envelope_eval(const Necklace& necklace, double x) { return necklace.envelope(x); }

// --- Contact indices on a window [0, n) ------------------------------------
// All return sorted site indices and always include 0 and n - 1. A site is a
// contact when its height is >= every two-point shape over it (ties count).

/// Dispatches to the tent scan (Cone), the hull scan (Parabola) or the stack scan.
std::vector<std::size_t> window_contacts(std::span<const double> h, const ShapeModel& shape);
/// Left-to-right stack scan with two-point shapes. Any shape with a
/// two-point construction. For SosWulff unreachable pairs never cover a
/// site; for Semicircle an unreachable pair throws UnreachablePair.
std::vector<std::size_t> stack_contacts(std::span<const double> h, const ShapeModel& shape);
/// Parabola: vertices (with collinear points) of the upper concave hull of
/// (i, h_i - lambda i^2).
std::vector<std::size_t> hull_contacts(std::span<const double> h, double lambda);
/// Cone: interior i is a contact iff h_i >= h_j - lambda |i - j| for all j.
std::vector<std::size_t> tent_contacts(std::span<const double> h, double lambda);
/// Every interior site checked against every pair j < i < k. Pairs with no
/// two-point translate (finite support) impose no constraint.
std::vector<std::size_t> bruteforce_contacts(std::span<const double> h, const ShapeModel& shape);

inline constexpr std::size_t kBruteforceCap = 400;

// --- Necklaces ---------------------------------------------------------------

/// Contact set and envelope. Window substrates use window_contacts;
/// Periodic substrates go through periodic_contact_set.
Necklace contact_set(const Substrate& substrate, const ShapeModel& shape);
/// Same result by exhaustive pair checks; window only, length <= cap.
Necklace contact_set_bruteforce(const Substrate& substrate, const ShapeModel& shape,
                                std::size_t cap = kBruteforceCap);
/// Contact set of a periodic substrate: the window algorithm runs on three
/// copies and contacts of the middle copy are kept. Exact whenever the
/// neighbouring copies already contain contacts the middle copy cannot see
/// past, which holds once the period is much longer than typical gaps.
Necklace periodic_contact_set(const Substrate& substrate, const ShapeModel& shape);

/// Violations of the interior condition (every non-contact strictly below
/// its gap shape) and local stability (every interior contact at or above
/// the shape through its two neighbours). Empty when the necklace is valid.
std::vector<std::string> check_local_conditions(const Necklace& necklace,
                                                const Substrate& substrate);

/// Sites closer than this to a window edge are excluded from statistics:
/// ceil(W^{-1}(ln n + 10)), i.e. (ln n + 10)/lambda for the cone and
/// sqrt((ln n + 10)/lambda) for the parabola.
std::size_t interior_margin(const ShapeModel& shape, std::size_t n);

/// Envelope from its definition: lower a translate above each grid apex x*
/// until it touches the substrate, then take the pointwise infimum.
class SampledEnvelope {
public:
    SampledEnvelope(ShapeModel shape, std::vector<double> apex_x, std::vector<double> apex_h);

    double value(double x) const;
    double operator()(double x) const { return value(x); }
    std::span<const double> apex_x() const noexcept { return apex_x_; }
    std::span<const double> apex_h() const noexcept { return apex_h_; }

private:
    ShapeModel shape_;
    std::vector<double> apex_x_;
    std::vector<double> apex_h_;
};

SampledEnvelope envelope_bruteforce(const Substrate& substrate, const ShapeModel& shape,
                                    double grid_step);

}  // namespace wulff
