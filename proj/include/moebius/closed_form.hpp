#pragma once

#include "moebius/core_maps.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace moebius {

/// Self-intersection set of the simple map: {(-1, 0, s) : s_min <= |s| < 1}.
/// Half-open at |s| = 1.
struct SelfIntersectionSet {
    double s_min = 1.0;
    bool empty = true;

    bool contains(double z) const noexcept;
};

/// Intersection of the simple-map image with the vertical line through
/// (-1, 0, 0): the closed segment {(-1, 0, z) : |z| <= sigma}.
struct AxisSegment {
    double sigma = 0.0;

    bool contains(double z) const noexcept { return std::abs(z) <= sigma; }
};

/// Two distinct parameter points glued together by the simple map.
struct GluedPair {
    ParamPoint p1;
    ParamPoint p2;
    int k = 0;
    Point3 image;
};

/// Vertical cross-section {z : (x, y, z) on the surface}.
class CrossSection {
public:
    struct Empty {
        friend bool operator==(const Empty&, const Empty&) = default;
    };
    struct Finite {
        std::vector<double> values;  // strictly increasing
        friend bool operator==(const Finite&, const Finite&) = default;
    };
    struct Interval {
        double lo = 0.0;
        double hi = 0.0;
        bool closed = true;
        friend bool operator==(const Interval&, const Interval&) = default;
    };
    struct AllReals {
        friend bool operator==(const AllReals&, const AllReals&) = default;
    };
    using Value = std::variant<Empty, Finite, Interval, AllReals>;

    static CrossSection empty() { return CrossSection{Empty{}}; }
    /// Sorts and merges exact duplicates.
    static CrossSection finite(std::vector<double> values);
    static CrossSection interval(double lo, double hi, bool closed = true);
    static CrossSection all_reals() { return CrossSection{AllReals{}}; }

    const Value& value() const noexcept { return value_; }

    bool is_empty() const noexcept { return std::holds_alternative<Empty>(value_); }
    bool is_finite() const noexcept { return std::holds_alternative<Finite>(value_); }
    bool is_interval() const noexcept { return std::holds_alternative<Interval>(value_); }
    bool is_all_reals() const noexcept { return std::holds_alternative<AllReals>(value_); }

    /// Cardinality; nullopt stands for infinitely many points.
    std::optional<std::size_t> cardinality() const noexcept;

    const std::vector<double>& finite_values() const;
    const Interval& as_interval() const;

    friend bool operator==(const CrossSection&, const CrossSection&) = default;

private:
    explicit CrossSection(Value v) : value_(std::move(v)) {}
    Value value_;
};

/// Signed polar coordinates with theta in [0, pi): (x, y) = rho (cos theta, sin theta).
struct PolarCoords {
    double rho = 0.0;
    double theta = 0.0;
};

/// s = 2c sqrt(1 - c^2) with c = min(1, max(delta, sqrt2) / 2).
double s_delta(HalfWidth delta);

/// sigma = 2b sqrt(1 - b^2) with b = min(delta, sqrt2) / 2.
double sigma_delta(HalfWidth delta);

SelfIntersectionSet self_intersection_set(HalfWidth delta);
AxisSegment axis_intersection(HalfWidth delta);

/// Parameters of the glued-pair family for branch k, without any admissibility
/// test: t2 = (2k+1)pi - t1, r1 = -2cos(t1/2), r2 = (-1)^(k+1) 2 sin(t1/2).
/// p2 is reduced to t in [0, 2pi) through the seam identification.
std::pair<ParamPoint, ParamPoint> glued_parameters(double t1, int k);

/// The glued partner of t1 on branch k, when s_delta <= |sin t1| < 1 and both
/// points fit in the strip. Throws DomainError if t1 is outside [0, 2pi) or k
/// is not 0 or 1.
std::optional<GluedPair> glued_partner(double t1, int k, HalfWidth delta);

/// The rational function whose graph is the simple-map image off the axis:
/// y (x^2 + y^2 - 1) / ((x + 1)^2 + y^2). Throws SingularPointError at (-1, 0).
double graph_height(double x, double y);

/// (x^2 + y^2 - 1)^2 / ((x + 1)^2 + y^2); equals r^2 of the preimage of (x, y).
/// Throws SingularPointError at (-1, 0).
double graph_offset_sq(double x, double y);

/// Membership in the graph domain {g <= delta^2} minus (-1, 0). Every point but
/// (-1, 0) belongs for the infinite half-width.
bool in_region(double x, double y, HalfWidth delta);

/// Preimage (t, r) under the simple map of the graph point (x, y, f(x, y)).
/// Returns (0, x - 1) on the x-axis, otherwise t = 2 arccot((x + 1) / y).
ParamPoint invert_graph(double x, double y);

/// Throws DomainError at the origin.
PolarCoords polar_coords(double x, double y);

CrossSection cross_section_simple(double x, double y, HalfWidth delta);

/// Cross-section of the common map over the infinite-width strip.
CrossSection cross_section_common(double x, double y);

/// -y + x^2 y + y^3 - 2xz - 2x^2 z - 2y^2 z + y z^2; vanishes on the common strip.
double cubic_residual(const Point3& p) noexcept;

/// inf over theta in (0, pi) of max(((rho-1)/cos(theta/2))^2, ((rho+1)/sin(theta/2))^2),
/// which is 2 + 2 rho^2.
double min_max_r_squared(double rho) noexcept;

/// SIMPLE: delta <= sqrt2. COMMON: delta < 2. Compared exactly.
bool is_embedding(HalfWidth delta, RealizationKind kind);

}  // namespace moebius
