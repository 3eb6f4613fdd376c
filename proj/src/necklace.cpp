#include "wulff/necklace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wulff/errors.hpp"

namespace wulff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_window(std::span<const double> h) {
    if (h.size() < 2) throw ArgumentError("contact scan needs at least 2 sites");
}

double to_d(std::size_t i) { return static_cast<double>(i); }

// Smallest d with W(d) >= level, or +inf when the shape never gets there.
double inverse_shape(const ShapeModel& shape, double level) {
    switch (shape.kind()) {
        case ShapeKind::Cone: return level / shape.lambda();
        case ShapeKind::Parabola: return std::sqrt(level / shape.lambda());
        default: break;
    }
    const double reach = shape.reach();
    if (shape.eval(std::nextafter(reach, 0.0)) < level) return kInf;
    double lo = 0.0;
    double hi = std::nextafter(reach, 0.0);
    for (int it = 0; it < 200 && hi - lo > 1e-12 * reach; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (shape.eval(mid) < level) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

}  // namespace

// ---------------------------------------------------------------------------
// Necklace

Necklace::Necklace(ShapeModel shape, Boundary boundary, std::int64_t first_site,
                   std::int64_t last_site, std::vector<Contact> chain, std::size_t lead,
                   std::size_t count)
    : shape_(std::move(shape)),
      boundary_(boundary),
      first_site_(first_site),
      last_site_(last_site),
      chain_(std::move(chain)),
      lead_(lead),
      count_(count) {
    if (lead_ + count_ > chain_.size()) throw ArgumentError("necklace contact range out of bounds");
    gap_shapes_.reserve(chain_.empty() ? 0 : chain_.size() - 1);
    for (std::size_t g = 0; g + 1 < chain_.size(); ++g) {
        const Contact& a = chain_[g];
        const Contact& b = chain_[g + 1];
        if (!(b.site > a.site)) throw ArgumentError("necklace contacts must be strictly increasing");
        gap_shapes_.push_back(two_point_shape(shape_, static_cast<double>(a.site), a.height,
                                              static_cast<double>(b.site), b.height));
    }
}

std::vector<std::int64_t> Necklace::sites() const {
    std::vector<std::int64_t> out;
    out.reserve(count_);
    for (const Contact& c : contacts()) out.push_back(c.site);
    return out;
}

std::vector<std::int64_t> Necklace::gaps() const {
    std::vector<std::int64_t> out;
    const auto cs = contacts();
    for (std::size_t n = 1; n < cs.size(); ++n) out.push_back(cs[n].site - cs[n - 1].site);
    return out;
}

double Necklace::envelope(double x) const {
    if (boundary_ == Boundary::Periodic) {
        const double period = static_cast<double>(last_site_ - first_site_ + 1);
        x = first_site_ + std::fmod(std::fmod(x - first_site_, period) + period, period);
    } else if (!(x >= static_cast<double>(first_site_) && x <= static_cast<double>(last_site_))) {
        std::ostringstream os;
        os << "x=" << x << " outside necklace window [" << first_site_ << ", " << last_site_
           << "]";
        throw DomainError(os.str());
    }
    // First chain contact with site > x.
    auto it = std::upper_bound(chain_.begin(), chain_.end(), x,
                               [](double v, const Contact& c) { return v < c.site; });
    if (it != chain_.begin() && static_cast<double>(std::prev(it)->site) == x) {
        return std::prev(it)->height;
    }
    if (it == chain_.begin() || it == chain_.end()) {
        throw DomainError("x outside the contact chain");
    }
    const std::size_t gap = static_cast<std::size_t>(it - chain_.begin()) - 1;
    return gap_shapes_[gap].eval(x);
}

// ---------------------------------------------------------------------------
// Window scans

std::vector<std::size_t> stack_contacts(std::span<const double> h, const ShapeModel& shape) {
    require_window(h);
    std::vector<std::size_t> stack;
    stack.reserve(h.size());
    stack.push_back(0);
    for (std::size_t k = 1; k < h.size(); ++k) {
        while (stack.size() >= 2) {
            const std::size_t m = stack[stack.size() - 1];
            const std::size_t p = stack[stack.size() - 2];
            // An unreachable pair imposes no constraint on m. The scan stays
            // exact only when W is unbounded on its support, since then
            // reachability depends on distance alone.
            double w;
            try {
                if (shape.finite_support() && to_d(k - p) >= 2.0 * shape.reach()) {
                    throw UnreachablePair(to_d(p), h[p], to_d(k), h[k],
                                          "gap exceeds the support diameter");
                }
                w = two_point_value(shape, to_d(p), h[p], to_d(k), h[k], to_d(m));
            } catch (const UnreachablePair&) {
                if (shape.kind() != ShapeKind::SosWulff) throw;
                break;
            }
            if (h[m] < w) {
                stack.pop_back();
            } else {
                break;
            }
        }
        stack.push_back(k);
    }
    return stack;
}

std::vector<std::size_t> hull_contacts(std::span<const double> h, double lambda) {
    require_window(h);
    const std::size_t n = h.size();
    // Centre the abscissa to keep lambda i^2 small.
    const double centre = 0.5 * to_d(n - 1);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = to_d(i) - centre;
        y[i] = h[i] - lambda * u * u;
    }
    std::vector<std::size_t> hull;
    hull.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        while (hull.size() >= 2) {
            const std::size_t m = hull[hull.size() - 1];
            const std::size_t p = hull[hull.size() - 2];
            // Pop m when it lies strictly below the chord p-k.
            const double lhs = (y[m] - y[p]) * to_d(k - p);
            const double rhs = (y[k] - y[p]) * to_d(m - p);
            if (lhs < rhs) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(k);
    }
    return hull;
}

std::vector<std::size_t> tent_contacts(std::span<const double> h, double lambda) {
    require_window(h);
    const std::size_t n = h.size();
    // best_left[i]: argmax over j < i of h_j + lambda j.
    std::vector<std::size_t> best_left(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t prev = best_left[i - 1];
        const std::size_t cand = i - 1;
        best_left[i] = (i == 1 || h[cand] + lambda * to_d(cand) > h[prev] + lambda * to_d(prev))
                           ? cand
                           : prev;
    }
    std::vector<std::size_t> best_right(n, n - 1);
    for (std::size_t i = n - 1; i-- > 0;) {
        const std::size_t prev = best_right[i + 1];
        const std::size_t cand = i + 1;
        best_right[i] =
            (i == n - 2 || h[cand] - lambda * to_d(cand) > h[prev] - lambda * to_d(prev)) ? cand
                                                                                        : prev;
    }
    std::vector<std::size_t> out;
    out.push_back(0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const std::size_t j = best_left[i];
        const std::size_t k = best_right[i];
        const double w = std::max(h[j] - lambda * (to_d(i) - to_d(j)),
                                  h[k] + lambda * (to_d(i) - to_d(k)));
        if (h[i] >= w) out.push_back(i);
    }
    out.push_back(n - 1);
    return out;
}

std::vector<std::size_t> window_contacts(std::span<const double> h, const ShapeModel& shape) {
    switch (shape.kind()) {
        case ShapeKind::Cone: return tent_contacts(h, shape.lambda());
        case ShapeKind::Parabola: return hull_contacts(h, shape.lambda());
        default: return stack_contacts(h, shape);
    }
}

std::vector<std::size_t> bruteforce_contacts(std::span<const double> h, const ShapeModel& shape) {
    require_window(h);
    const std::size_t n = h.size();
    std::vector<std::size_t> out;
    out.push_back(0);
    // Pairs at least a support diameter apart are unreachable.
    const double span = shape.finite_support() ? 2.0 * shape.reach() : kInf;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        bool contact = true;
        for (std::size_t j = 0; j < i && contact; ++j) {
            for (std::size_t k = i + 1; k < n; ++k) {
                if (to_d(k - j) >= span) break;
                double w;
                try {
                    w = two_point_value(shape, to_d(j), h[j], to_d(k), h[k], to_d(i));
                } catch (const UnreachablePair&) {
                    continue;
                }
                if (h[i] < w) {
                    contact = false;
                    break;
                }
            }
        }
        if (contact) out.push_back(i);
    }
    out.push_back(n - 1);
    return out;
}

// ---------------------------------------------------------------------------
// Necklace builders

namespace {

Necklace window_necklace(const Substrate& substrate, const ShapeModel& shape,
                         const std::vector<std::size_t>& idx) {
    std::vector<Contact> chain;
    chain.reserve(idx.size());
    for (std::size_t i : idx) chain.push_back({static_cast<std::int64_t>(i), substrate[i]});
    const std::size_t count = chain.size();
    return Necklace(shape, Boundary::Window, 0, static_cast<std::int64_t>(substrate.size()) - 1,
                    std::move(chain), 0, count);
}

}  // namespace

Necklace contact_set(const Substrate& substrate, const ShapeModel& shape) {
    if (substrate.boundary() == Boundary::Periodic) return periodic_contact_set(substrate, shape);
    return window_necklace(substrate, shape, window_contacts(substrate.heights(), shape));
}

Necklace contact_set_bruteforce(const Substrate& substrate, const ShapeModel& shape,
                                std::size_t cap) {
    if (substrate.size() > cap) {
        throw ArgumentError("brute-force contact set limited to " + std::to_string(cap) +
                            " sites, got " + std::to_string(substrate.size()));
    }
    return window_necklace(substrate, shape, bruteforce_contacts(substrate.heights(), shape));
}

Necklace periodic_contact_set(const Substrate& substrate, const ShapeModel& shape) {
    if (substrate.boundary() != Boundary::Periodic) {
        throw ArgumentError("periodic_contact_set needs a periodic substrate");
    }
    const std::size_t n = substrate.size();
    std::vector<double> tiled(3 * n);
    for (std::size_t c = 0; c < 3; ++c) {
        std::copy(substrate.heights().begin(), substrate.heights().end(), tiled.begin() + c * n);
    }
    const auto idx = window_contacts(tiled, shape);

    std::vector<Contact> chain;
    std::size_t lead = 0;
    std::size_t count = 0;
    const auto nn = static_cast<std::int64_t>(n);
    // Last contact of the left copy, the middle copy, first contact of the right copy.
    auto first_mid = std::lower_bound(idx.begin(), idx.end(), n);
    auto first_right = std::lower_bound(idx.begin(), idx.end(), 2 * n);
    if (first_mid != idx.begin()) {
        const std::size_t g = *std::prev(first_mid);
        chain.push_back({static_cast<std::int64_t>(g) - nn, tiled[g]});
        lead = 1;
    }
    for (auto it = first_mid; it != first_right; ++it) {
        chain.push_back({static_cast<std::int64_t>(*it) - nn, tiled[*it]});
        ++count;
    }
    if (first_right != idx.end()) {
        chain.push_back({static_cast<std::int64_t>(*first_right) - nn, tiled[*first_right]});
    }
    return Necklace(shape, Boundary::Periodic, 0, nn - 1, std::move(chain), lead, count);
}

std::vector<std::string> check_local_conditions(const Necklace& necklace,
                                                const Substrate& substrate) {
    std::vector<std::string> issues;
    const auto n = static_cast<std::int64_t>(substrate.size());
    auto height = [&](std::int64_t site) {
        const std::int64_t i = ((site % n) + n) % n;
        return substrate[static_cast<std::size_t>(i)];
    };
    const auto chain = necklace.chain();
    for (std::size_t g = 0; g + 1 < chain.size(); ++g) {
        const TwoPointShape& tps = necklace.gap_shape(g);
        for (std::int64_t i = chain[g].site + 1; i < chain[g + 1].site; ++i) {
            const double w = tps.eval(static_cast<double>(i));
            if (!(height(i) < w)) {
                std::ostringstream os;
                os << "site " << i << " (h=" << height(i) << ") not below gap shape " << w
                   << " between contacts " << chain[g].site << " and " << chain[g + 1].site;
                issues.push_back(os.str());
            }
        }
    }
    for (std::size_t c = 1; c + 1 < chain.size(); ++c) {
        const Contact& p = chain[c - 1];
        const Contact& m = chain[c];
        const Contact& k = chain[c + 1];
        const double w = two_point_value(necklace.shape(), static_cast<double>(p.site), p.height,
                                         static_cast<double>(k.site), k.height,
                                         static_cast<double>(m.site));
        if (m.height < w) {
            std::ostringstream os;
            os << "contact " << m.site << " (h=" << m.height
               << ") below the shape through its neighbours (" << w << ")";
            issues.push_back(os.str());
        }
    }
    return issues;
}

std::size_t interior_margin(const ShapeModel& shape, std::size_t n) {
    const double level = std::log(static_cast<double>(std::max<std::size_t>(n, 2))) + 10.0;
    const double d = inverse_shape(shape, level);
    if (!std::isfinite(d)) return static_cast<std::size_t>(std::ceil(shape.reach())) + 1;
    return static_cast<std::size_t>(std::ceil(d));
}

// ---------------------------------------------------------------------------
// Sampled envelope

SampledEnvelope::SampledEnvelope(ShapeModel shape, std::vector<double> apex_x,
                                 std::vector<double> apex_h)
    : shape_(std::move(shape)), apex_x_(std::move(apex_x)), apex_h_(std::move(apex_h)) {}

double SampledEnvelope::value(double x) const {
    const double reach = shape_.reach();
    double best = kInf;
    for (std::size_t m = 0; m < apex_x_.size(); ++m) {
        const double dx = x - apex_x_[m];
        if (!(std::abs(dx) < reach)) continue;
        best = std::min(best, apex_h_[m] + shape_.eval(dx));
    }
    return best;
}

SampledEnvelope envelope_bruteforce(const Substrate& substrate, const ShapeModel& shape,
                                    double grid_step) {
    if (!(grid_step > 0.0)) throw ArgumentError("grid_step must be positive");
    const auto h = substrate.heights();
    const std::size_t n = h.size();
    const auto [lo_it, hi_it] = std::minmax_element(h.begin(), h.end());
    const double rise = *hi_it - *lo_it;

    // A resting translate with its apex farther than `pad` beyond the window
    // is never lower than one with its apex inside the padded range: its
    // slope over the window already exceeds the height range.
    double pad;
    if (shape.finite_support()) {
        pad = std::ceil(shape.reach());
    } else if (shape.kind() == ShapeKind::Cone) {
        pad = 1.0;
    } else {
        double d = 1.0;
        while (shape.eval(d) <= d * (rise + 1.0) && d < 1e7) d *= 2.0;
        pad = std::ceil(d) + 1.0;
    }

    const double origin = -pad;
    const double span = to_d(n - 1) + 2.0 * pad;
    const auto count = static_cast<std::size_t>(std::floor(span / grid_step + 1e-9)) + 1;
    const double reach = shape.reach();

    std::vector<double> ax;
    std::vector<double> ah;
    ax.reserve(count);
    ah.reserve(count);
    for (std::size_t m = 0; m < count; ++m) {
        const double xs = origin + static_cast<double>(m) * grid_step;
        const auto first = static_cast<std::int64_t>(std::max(0.0, std::ceil(xs - reach)));
        const auto last =
            static_cast<std::int64_t>(std::min(to_d(n - 1), std::floor(xs + reach)));
        double hs = -kInf;
        for (std::int64_t i = first; i <= last; ++i) {
            const double dx = static_cast<double>(i) - xs;
            if (!(std::abs(dx) < reach)) continue;
            hs = std::max(hs, h[static_cast<std::size_t>(i)] - shape.eval(dx));
        }
        // No site under the support: this translate could drop forever.
        if (hs == -kInf) continue;
        ax.push_back(xs);
        ah.push_back(hs);
    }
    return SampledEnvelope(shape, std::move(ax), std::move(ah));
}

}  // namespace wulff
