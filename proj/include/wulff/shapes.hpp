#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wulff {

enum class ShapeKind { Cone, Parabola, Semicircle, SosWulff };

std::string to_string(ShapeKind kind);
ShapeKind shape_kind_from_string(const std::string& name);

/// Tabulated half-profile of the Wulff shape of the continuous-height SOS
/// film with coupling `j2` and pressure `k2`.
///
/// Nodes are parametrised by the slope t = tan(theta) and run from (0, 0)
/// up to x close to the support radius j2/k2. The slope dW/dx at a node is
/// t itself, so the table carries exact derivatives and evaluation uses
/// cubic Hermite interpolation with Fritsch-Carlson limiting.
class WulffProfile {
public:
    static constexpr std::size_t kDefaultNodes = 4096;

    static WulffProfile build(double j2, double k2, std::size_t node_count = kDefaultNodes);

    double j2() const noexcept { return j2_; }
    double k2() const noexcept { return k2_; }
    double support_radius() const noexcept { return j2_ / k2_; }
    /// Largest tabulated abscissa; evaluation beyond it is a domain error.
    double max_x() const noexcept { return xs_.back(); }

    std::span<const double> xs() const noexcept { return xs_; }
    std::span<const double> ws() const noexcept { return ws_; }
    std::span<const double> slopes() const noexcept { return slopes_; }

    /// W(x) for 0 <= x <= max_x().
    double eval(double x) const;
    /// dW/dx for 0 <= x <= max_x().
    double slope(double x) const;

private:
    WulffProfile() = default;
    std::size_t locate(double x) const;

    double j2_ = 0.0;
    double k2_ = 0.0;
    std::vector<double> xs_;
    std::vector<double> ws_;
    std::vector<double> slopes_;
};

WulffProfile build_sos_wulff_profile(double j2, double k2,
                                     std::size_t node_count = WulffProfile::kDefaultNodes);

/// A symmetric convex profile W with W(0) = 0. Immutable and cheap to copy;
/// SosWulff shares its table between copies.
class ShapeModel {
public:
    static ShapeModel cone(double lambda);
    static ShapeModel parabola(double lambda);
    static ShapeModel semicircle(double lambda);
    static ShapeModel sos_wulff(double j2, double k2,
                                std::size_t node_count = WulffProfile::kDefaultNodes);

    ShapeKind kind() const noexcept { return kind_; }
    double lambda() const noexcept { return lambda_; }
    double j2() const noexcept { return j2_; }
    double k2() const noexcept { return k2_; }
    /// Radius a of the open support ]-a, a[; +inf for Cone and Parabola.
    double support_radius() const noexcept { return support_; }
    bool finite_support() const noexcept;
    bool strictly_convex() const noexcept { return kind_ != ShapeKind::Cone; }
    /// Largest |x| accepted by eval(): the support radius, or the last
    /// tabulated node for SosWulff.
    double reach() const noexcept;
    const WulffProfile* profile() const noexcept { return profile_.get(); }

    /// W(x). Throws DomainError outside the support.
    double eval(double x) const;
    double operator()(double x) const { return eval(x); }

    /// Short description, e.g. "parabola(lambda=0.1)".
    std::string describe() const;

private:
    ShapeModel(ShapeKind kind, double lambda, double j2, double k2, double support)
        : kind_(kind), lambda_(lambda), j2_(j2), k2_(k2), support_(support) {}

    ShapeKind kind_;
    double lambda_;
    double j2_;
    double k2_;
    double support_;
    std::shared_ptr<const WulffProfile> profile_;
};

inline double eval_shape(const ShapeModel& shape, double x) { return shape.eval(x); }

struct Anchor {
    double x;
    double h;
};

/// The translate x -> h* + W(x - x*) of a shape pinned at two points.
class TwoPointShape {
public:
    TwoPointShape(ShapeModel shape, double apex_x, double apex_h, Anchor left, Anchor right)
        : shape_(std::move(shape)), apex_x_(apex_x), apex_h_(apex_h), left_(left), right_(right) {}

    const ShapeModel& shape() const noexcept { return shape_; }
    double apex_x() const noexcept { return apex_x_; }
    double apex_h() const noexcept { return apex_h_; }
    Anchor left() const noexcept { return left_; }
    Anchor right() const noexcept { return right_; }

    double eval(double x) const;
    double operator()(double x) const { return eval(x); }

private:
    ShapeModel shape_;
    double apex_x_;
    double apex_h_;
    Anchor left_;
    Anchor right_;
};

/// Absolute tolerance on the apex position for the bisection path.
inline constexpr double kApexTolerance = 1e-10;

/// The unique translate of `shape` through (j, hj) and (k, hk), j <= k.
/// Closed forms for Cone, Parabola and Semicircle; bisection otherwise.
/// j == k gives the single-contact shape with apex at (j, hj).
TwoPointShape two_point_shape(const ShapeModel& shape, double j, double hj, double k, double hk);

/// Same as two_point_shape but always solves W(k-x*) - W(j-x*) = hk - hj by
/// bisection. Requires a strictly convex shape.
TwoPointShape two_point_shape_bisect(const ShapeModel& shape, double j, double hj, double k,
                                     double hk);

inline double eval_two_point(const TwoPointShape& tps, double x) { return tps.eval(x); }

/// Value at x of the two-point shape through (j, hj), (k, hk) without
/// materialising a TwoPointShape. Hot path for contact-set scans.
double two_point_value(const ShapeModel& shape, double j, double hj, double k, double hk,
                       double x);

}  // namespace wulff
