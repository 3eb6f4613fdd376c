#include "wulff/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wulff/errors.hpp"

namespace wulff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Tabulation stops once K x / J = tanh(phi/2) is within this of 1.
constexpr double kEdgeGap = 1e-9;

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ArgumentError(std::string(name) + " must be positive and finite");
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::string to_string(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::Cone: return "cone";
        case ShapeKind::Parabola: return "parabola";
        case ShapeKind::Semicircle: return "semicircle";
        case ShapeKind::SosWulff: return "sos-wulff";
    }
    return "unknown";
}

ShapeKind shape_kind_from_string(const std::string& name) {
    if (name == "cone") return ShapeKind::Cone;
    if (name == "parabola") return ShapeKind::Parabola;
    if (name == "semicircle") return ShapeKind::Semicircle;
    if (name == "sos-wulff" || name == "sos") return ShapeKind::SosWulff;
    throw ArgumentError("unknown shape '" + name + "' (cone, parabola, semicircle, sos-wulff)");
}

// ---------------------------------------------------------------------------
// WulffProfile

WulffProfile WulffProfile::build(double j2, double k2, std::size_t node_count) {
    require_positive(j2, "j2");
    require_positive(k2, "k2");
    if (node_count < 2) throw ArgumentError("node_count must be at least 2");

    WulffProfile p;
    p.j2_ = j2;
    p.k2_ = k2;
    p.xs_.resize(node_count);
    p.ws_.resize(node_count);
    p.slopes_.resize(node_count);

    // Slopes t = sinh(phi)/J with phi uniform: evenly spaced near the apex,
    // geometric in t towards the support edge where curvature concentrates.
    const double phi_max = std::log((2.0 - kEdgeGap) / kEdgeGap);
    const double last = static_cast<double>(node_count - 1);
    for (std::size_t n = 0; n < node_count; ++n) {
        const double phi = phi_max * static_cast<double>(n) / last;
        const double t = std::sinh(phi) / j2;
        const double y = j2 * t;
        const double root = std::sqrt(1.0 + y * y);
        // f(t) = sqrt(1 + (J t)^2) - 1, written without cancellation.
        const double f = y * y / (root + 1.0);
        // d(sigma)/dt = f'(t) (1 - 1/(f + 2)) with f'(t) = J^2 t / (f + 1).
        const double df = j2 * j2 * t / (f + 1.0);
        const double dsigma = df * (f + 1.0) / (f + 2.0);
        // t * dsigma/dt equals f identically, so sigma - t dsigma/dt reduces
        // to -log((f + 2)/J); the unreduced difference loses every digit at
        // large t.
        const double legendre = -std::log((f + 2.0) / j2);
        const double x = std::abs(-dsigma / k2);
        const double z = -legendre / k2;
        p.xs_[n] = x;
        p.ws_[n] = z - std::log(2.0 / j2) / k2;
        p.slopes_[n] = t;
    }
    p.ws_[0] = 0.0;

    for (std::size_t n = 1; n < node_count; ++n) {
        if (!(p.xs_[n] > p.xs_[n - 1]) || !(p.ws_[n] > p.ws_[n - 1])) {
            throw NumericError("Wulff profile tabulation is not monotone at node " +
                               std::to_string(n) + " (x=" + fmt(p.xs_[n]) + ")");
        }
    }
    if (p.xs_.back() < 0.999 * p.support_radius()) {
        throw NumericError("Wulff profile table stops short of the support edge");
    }
    return p;
}

WulffProfile build_sos_wulff_profile(double j2, double k2, std::size_t node_count) {
    return WulffProfile::build(j2, k2, node_count);
}

std::size_t WulffProfile::locate(double x) const {
    if (!(x >= 0.0) || x > xs_.back()) {
        throw DomainError("x=" + fmt(x) + " outside tabulated Wulff profile [0, " +
                          fmt(xs_.back()) + "] (support radius " + fmt(support_radius()) +
                          ")");
    }
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
    if (hi >= xs_.size()) hi = xs_.size() - 1;
    return hi - 1;
}

namespace {

struct HermiteCoeffs {
    double h, dl, dr, delta;
};

// Fritsch-Carlson limiting of endpoint slopes for monotone data.
HermiteCoeffs limited(double x0, double x1, double w0, double w1, double d0, double d1) {
    const double h = x1 - x0;
    const double delta = (w1 - w0) / h;
    if (delta > 0.0) {
        const double a = d0 / delta;
        const double b = d1 / delta;
        const double s = a * a + b * b;
        if (s > 9.0) {
            const double tau = 3.0 / std::sqrt(s);
            d0 = tau * a * delta;
            d1 = tau * b * delta;
        }
    }
    return {h, d0, d1, delta};
}

}  // namespace

double WulffProfile::eval(double x) const {
    const std::size_t i = locate(x);
    const auto c = limited(xs_[i], xs_[i + 1], ws_[i], ws_[i + 1], slopes_[i], slopes_[i + 1]);
    const double s = (x - xs_[i]) / c.h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * ws_[i] + h10 * c.h * c.dl + h01 * ws_[i + 1] + h11 * c.h * c.dr;
}

double WulffProfile::slope(double x) const {
    const std::size_t i = locate(x);
    const auto c = limited(xs_[i], xs_[i + 1], ws_[i], ws_[i + 1], slopes_[i], slopes_[i + 1]);
    const double s = (x - xs_[i]) / c.h;
    const double s2 = s * s;
    const double d00 = 6 * s2 - 6 * s;
    const double d10 = 3 * s2 - 4 * s + 1;
    const double d01 = -6 * s2 + 6 * s;
    const double d11 = 3 * s2 - 2 * s;
    return (d00 * ws_[i] + d01 * ws_[i + 1]) / c.h + d10 * c.dl + d11 * c.dr;
}

// ---------------------------------------------------------------------------
// ShapeModel

ShapeModel ShapeModel::cone(double lambda) {
    require_positive(lambda, "lambda");
    return ShapeModel(ShapeKind::Cone, lambda, 0.0, 0.0, kInf);
}

ShapeModel ShapeModel::parabola(double lambda) {
    require_positive(lambda, "lambda");
    return ShapeModel(ShapeKind::Parabola, lambda, 0.0, 0.0, kInf);
}

ShapeModel ShapeModel::semicircle(double lambda) {
    require_positive(lambda, "lambda");
    return ShapeModel(ShapeKind::Semicircle, lambda, 0.0, 0.0, 1.0 / lambda);
}

ShapeModel ShapeModel::sos_wulff(double j2, double k2, std::size_t node_count) {
    ShapeModel s(ShapeKind::SosWulff, 0.0, j2, k2, 0.0);
    s.profile_ = std::make_shared<const WulffProfile>(WulffProfile::build(j2, k2, node_count));
    s.support_ = s.profile_->support_radius();
    return s;
}

bool ShapeModel::finite_support() const noexcept { return std::isfinite(support_); }

double ShapeModel::reach() const noexcept {
    if (kind_ == ShapeKind::SosWulff) return profile_->max_x();
    return support_;
}

double ShapeModel::eval(double x) const {
    const double ax = std::abs(x);
    switch (kind_) {
        case ShapeKind::Cone: return lambda_ * ax;
        case ShapeKind::Parabola: return lambda_ * x * x;
        case ShapeKind::Semicircle: {
            if (!(ax < support_)) {
                throw DomainError("x=" + fmt(x) + " outside semicircle support radius " +
                                  fmt(support_));
            }
            const double r = support_;
            // r - sqrt(r^2 - x^2) without cancellation near the apex.
            return x * x / (r + std::sqrt((r - ax) * (r + ax)));
        }
        case ShapeKind::SosWulff: return profile_->eval(ax);
    }
    return 0.0;
}

std::string ShapeModel::describe() const {
    if (kind_ == ShapeKind::SosWulff) {
        return "sos-wulff(j2=" + fmt(j2_) + ",k2=" + fmt(k2_) + ")";
    }
    return to_string(kind_) + "(lambda=" + fmt(lambda_) + ")";
}

// ---------------------------------------------------------------------------
// Two-point shapes

namespace {

void check_anchor_order(double j, double k) {
    if (!(j <= k)) throw ArgumentError("two-point shape requires j <= k");
}

double cone_value(double lambda, double j, double hj, double k, double hk, double x) {
    return std::max(hj - lambda * (x - j), hk + lambda * (x - k));
}

double parabola_value(double lambda, double j, double hj, double k, double hk, double x) {
    if (j == k) return hj + lambda * (x - j) * (x - j);
    return lambda * (x - j) * (x - k) + (k - x) / (k - j) * hj + (j - x) / (j - k) * hk;
}

TwoPointShape semicircle_two_point(const ShapeModel& shape, double j, double hj, double k,
                                   double hk) {
    const double r = shape.support_radius();
    const double dx = k - j;
    const double dy = hk - hj;
    const double d = std::hypot(dx, dy);
    if (d > 2.0 * r) throw UnreachablePair(j, hj, k, hk, "anchors farther apart than the diameter");
    const double ux = dx / d;
    const double uy = dy / d;
    const double off = std::sqrt(std::max(0.0, r * r - 0.25 * d * d));
    // Upward normal; the other circle would carry the anchors on its upper half.
    const double cx = 0.5 * (j + k) - off * uy;
    const double cy = 0.5 * (hj + hk) + off * ux;
    if (hj > cy || hk > cy || !(std::abs(j - cx) < r) || !(std::abs(k - cx) < r)) {
        throw UnreachablePair(j, hj, k, hk, "anchors do not fit on the lower half-circle");
    }
    return TwoPointShape(shape, cx, cy - r, {j, hj}, {k, hk});
}

}  // namespace

TwoPointShape two_point_shape_bisect(const ShapeModel& shape, double j, double hj, double k,
                                     double hk) {
    check_anchor_order(j, k);
    if (!shape.strictly_convex()) {
        throw ArgumentError("bisection two-point construction needs a strictly convex shape");
    }
    if (j == k) return TwoPointShape(shape, j, hj, {j, hj}, {k, hk});

    const double dh = hk - hj;
    // g is strictly decreasing in the apex position for strictly convex W.
    auto g = [&](double xs) { return shape.eval(k - xs) - shape.eval(j - xs) - dh; };

    double lo;
    double hi;
    if (shape.finite_support()) {
        const double reach = shape.reach();
        if (!(k - j < 2.0 * reach)) {
            throw UnreachablePair(j, hj, k, hk, "gap exceeds the support diameter");
        }
        const double eps = 1e-12 * std::max(1.0, reach);
        lo = k - reach + eps;
        hi = j + reach - eps;
        if (!(lo < hi)) throw UnreachablePair(j, hj, k, hk, "gap exceeds the support diameter");
        if (g(lo) < 0.0 || g(hi) > 0.0) {
            throw UnreachablePair(j, hj, k, hk, "height difference exceeds the shape's rise");
        }
    } else {
        const double mid = 0.5 * (j + k);
        double step = std::max(1.0, k - j);
        lo = mid - step;
        hi = mid + step;
        int expansions = 0;
        while ((g(lo) < 0.0 || g(hi) > 0.0) && expansions < 200) {
            step *= 2.0;
            lo = mid - step;
            hi = mid + step;
            ++expansions;
        }
        if (g(lo) < 0.0 || g(hi) > 0.0) {
            throw NumericError("apex bracket expansion failed: [" + fmt(lo) + ", " + fmt(hi) +
                               "]");
        }
    }

    int iterations = 0;
    while (hi - lo > kApexTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (g(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (++iterations > 400) {
            throw NumericError("apex bisection did not converge: bracket [" + fmt(lo) + ", " +
                               fmt(hi) + "], g(lo)=" + fmt(g(lo)) + ", g(hi)=" + fmt(g(hi)));
        }
    }
    const double xs = 0.5 * (lo + hi);
    // Split the residual between both anchors.
    const double hs = 0.5 * ((hj - shape.eval(j - xs)) + (hk - shape.eval(k - xs)));
    return TwoPointShape(shape, xs, hs, {j, hj}, {k, hk});
}

TwoPointShape two_point_shape(const ShapeModel& shape, double j, double hj, double k, double hk) {
    check_anchor_order(j, k);
    switch (shape.kind()) {
        case ShapeKind::Cone: {
            const double lam = shape.lambda();
            const double xs = (hj - hk + lam * (j + k)) / (2.0 * lam);
            return TwoPointShape(shape, xs, hj - lam * (xs - j), {j, hj}, {k, hk});
        }
        case ShapeKind::Parabola: {
            if (j == k) return TwoPointShape(shape, j, hj, {j, hj}, {k, hk});
            const double lam = shape.lambda();
            const double xs = 0.5 * (j + k) - (hk - hj) / (2.0 * lam * (k - j));
            return TwoPointShape(shape, xs, hj - lam * (j - xs) * (j - xs), {j, hj}, {k, hk});
        }
        case ShapeKind::Semicircle:
            if (j == k) return TwoPointShape(shape, j, hj, {j, hj}, {k, hk});
            return semicircle_two_point(shape, j, hj, k, hk);
        case ShapeKind::SosWulff: return two_point_shape_bisect(shape, j, hj, k, hk);
    }
    throw ArgumentError("unknown shape kind");
}

double TwoPointShape::eval(double x) const {
    switch (shape_.kind()) {
        case ShapeKind::Cone:
            return cone_value(shape_.lambda(), left_.x, left_.h, right_.x, right_.h, x);
        case ShapeKind::Parabola:
            return parabola_value(shape_.lambda(), left_.x, left_.h, right_.x, right_.h, x);
        default: return apex_h_ + shape_.eval(x - apex_x_);
    }
}

double two_point_value(const ShapeModel& shape, double j, double hj, double k, double hk,
                       double x) {
    switch (shape.kind()) {
        case ShapeKind::Cone: return cone_value(shape.lambda(), j, hj, k, hk, x);
        case ShapeKind::Parabola: return parabola_value(shape.lambda(), j, hj, k, hk, x);
        default: return two_point_shape(shape, j, hj, k, hk).eval(x);
    }
}

}  // namespace wulff
