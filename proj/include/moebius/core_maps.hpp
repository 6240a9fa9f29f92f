#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string_view>
#include <utility>

namespace moebius {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double sqrt2 = std::numbers::sqrt2;

/// Half the strip width. Either a positive finite value or the distinguished
/// infinite width (the union of all strips).
class HalfWidth {
public:
    /// Throws DomainError unless value is finite and > 0.
    static HalfWidth finite(double value);
    static HalfWidth infinite() noexcept { return HalfWidth{}; }

    bool is_infinite() const noexcept { return !value_.has_value(); }

    /// Throws DomainError for the infinite half-width.
    double value() const;

    friend bool operator==(const HalfWidth&, const HalfWidth&) = default;

private:
    HalfWidth() = default;
    explicit HalfWidth(double v) : value_(v) {}

    std::optional<double> value_;
};

/// A point (t, r) of the parameter rectangle. Canonical points have t in [0, 2pi).
struct ParamPoint {
    double t = 0.0;
    double r = 0.0;

    friend bool operator==(const ParamPoint&, const ParamPoint&) = default;
};

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point3&, const Point3&) = default;

    Point3& operator+=(const Point3& o) noexcept {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    Point3& operator-=(const Point3& o) noexcept {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    Point3& operator*=(double s) noexcept {
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }
    friend Point3 operator+(Point3 a, const Point3& b) noexcept { return a += b; }
    friend Point3 operator-(Point3 a, const Point3& b) noexcept { return a -= b; }
    friend Point3 operator*(Point3 a, double s) noexcept { return a *= s; }
    friend Point3 operator*(double s, Point3 a) noexcept { return a *= s; }

    double norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }
    bool is_finite() const noexcept {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline double distance(const Point3& a, const Point3& b) noexcept { return (a - b).norm(); }

/// Which realization map: COMMON is the classical revolving-segment strip,
/// SIMPLE the map whose segment stays parallel to the plane y = z.
enum class RealizationKind { common, simple };

std::string_view to_string(RealizationKind kind) noexcept;
/// Accepts "common" or "simple".
std::optional<RealizationKind> parse_realization_kind(std::string_view text) noexcept;

/// Reduces (t, r) to t in [0, 2pi) by applying (t, r) -> (t - 2pi, -r) or its
/// inverse; r flips sign once per 2pi shift. Throws DomainError on non-finite input.
ParamPoint canonicalize(double t, double r);

/// (cos t + r cos(t/2), sin t + r sin(t/2), r sin(t/2))
Point3 eval_simple(ParamPoint p);

/// ((1 + r cos(t/2)) cos t, (1 + r cos(t/2)) sin t, r sin(t/2))
Point3 eval_common(ParamPoint p);

Point3 evaluate(RealizationKind kind, ParamPoint p);

/// Distance in the parameter plane respecting the seam gluing: the minimum
/// Euclidean distance from p1 to the representatives (t2, r2), (t2 + 2pi, -r2)
/// and (t2 - 2pi, -r2) of p2.
double param_distance(ParamPoint p1, ParamPoint p2) noexcept;

/// Endpoints (eval(t, -delta), eval(t, +delta)) of the ruling segment at angle t.
std::pair<Point3, Point3> moving_segment(double t, HalfWidth delta, RealizationKind kind);

}  // namespace moebius
