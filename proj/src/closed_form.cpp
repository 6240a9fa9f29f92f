#include "moebius/closed_form.hpp"

#include "moebius/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace moebius {

namespace {

void require_regular(double x, double y, const char* op) {
    if (x == -1.0 && y == 0.0) {
        throw SingularPointError(std::string(op) + ": undefined at the singular point (-1, 0)");
    }
}

// x^2 + y^2 - 1 written as (x - 1)(x + 1) + y^2; exact factor near x = -1.
double circle_defect(double x, double y) noexcept { return (x - 1.0) * (x + 1.0) + y * y; }

}  // namespace

bool SelfIntersectionSet::contains(double z) const noexcept {
    const double a = std::abs(z);
    return !empty && s_min <= a && a < 1.0;
}

CrossSection CrossSection::finite(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return CrossSection{Finite{std::move(values)}};
}

CrossSection CrossSection::interval(double lo, double hi, bool closed) {
    return CrossSection{Interval{lo, hi, closed}};
}

std::optional<std::size_t> CrossSection::cardinality() const noexcept {
    if (is_empty()) return 0;
    if (const auto* f = std::get_if<Finite>(&value_)) return f->values.size();
    if (const auto* i = std::get_if<Interval>(&value_); i && i->lo == i->hi && i->closed) return 1;
    return std::nullopt;
}

const std::vector<double>& CrossSection::finite_values() const {
    if (const auto* f = std::get_if<Finite>(&value_)) return f->values;
    throw std::logic_error("cross-section is not a finite set");
}

const CrossSection::Interval& CrossSection::as_interval() const {
    if (const auto* i = std::get_if<Interval>(&value_)) return *i;
    throw std::logic_error("cross-section is not an interval");
}

double s_delta(HalfWidth delta) {
    const double d = delta.value();
    if (d <= sqrt2) return 1.0;
    if (d >= 2.0) return 0.0;
    const double c = 0.5 * d;
    return 2.0 * c * std::sqrt((1.0 - c) * (1.0 + c));
}

double sigma_delta(HalfWidth delta) {
    const double d = delta.value();
    if (d >= sqrt2) return 1.0;
    const double b = 0.5 * d;
    return 2.0 * b * std::sqrt((1.0 - b) * (1.0 + b));
}

SelfIntersectionSet self_intersection_set(HalfWidth delta) {
    const double s = s_delta(delta);
    return {s, delta.value() <= sqrt2};
}

AxisSegment axis_intersection(HalfWidth delta) { return {sigma_delta(delta)}; }

std::pair<ParamPoint, ParamPoint> glued_parameters(double t1, int k) {
    const double half = 0.5 * t1;
    const double t2 = (2 * k + 1) * pi - t1;
    const double r1 = -2.0 * std::cos(half);
    const double r2 = (k == 0 ? -2.0 : 2.0) * std::sin(half);
    return {ParamPoint{t1, r1}, canonicalize(t2, r2)};
}

std::optional<GluedPair> glued_partner(double t1, int k, HalfWidth delta) {
    if (!(t1 >= 0.0 && t1 < two_pi)) {
        throw DomainError("glued_partner: t1 must lie in [0, 2pi)");
    }
    if (k != 0 && k != 1) {
        throw DomainError("glued_partner: branch index must be 0 or 1");
    }
    const double d = delta.value();
    const double sine = std::sin(t1);
    const double abs_sine = std::abs(sine);
    if (!(s_delta(delta) <= abs_sine && abs_sine < 1.0)) return std::nullopt;

    const auto [p1, p2] = glued_parameters(t1, k);
    if (std::abs(p1.r) > d || std::abs(p2.r) > d || p1 == p2) return std::nullopt;

    const Point3 image{-1.0, 0.0, -sine};
    if (distance(eval_simple(p1), eval_simple(p2)) > 1e-12 ||
        distance(eval_simple(p1), image) > 1e-12) {
        throw std::logic_error("glued_partner: glued images disagree");
    }
    return GluedPair{p1, p2, k, image};
}

double graph_height(double x, double y) {
    require_regular(x, y, "graph_height");
    const double den = (x + 1.0) * (x + 1.0) + y * y;
    return y * circle_defect(x, y) / den;
}

double graph_offset_sq(double x, double y) {
    require_regular(x, y, "graph_offset_sq");
    if (y == 0.0) return (x - 1.0) * (x - 1.0);
    const double q = circle_defect(x, y);
    return q * q / ((x + 1.0) * (x + 1.0) + y * y);
}

bool in_region(double x, double y, HalfWidth delta) {
    if (x == -1.0 && y == 0.0) return false;
    if (delta.is_infinite()) return true;
    const double d = delta.value();
    return graph_offset_sq(x, y) <= d * d;
}

ParamPoint invert_graph(double x, double y) {
    require_regular(x, y, "invert_graph");
    if (y == 0.0) return {0.0, x - 1.0};
    // Half angle alpha = arccot((x + 1) / y) in (0, pi), taken through atan2 so
    // that sin(alpha) = |y| / h and cos(alpha) = (x + 1) sign(y) / h.
    const double sign = y > 0.0 ? 1.0 : -1.0;
    const double alpha = std::atan2(std::abs(y), (x + 1.0) * sign);
    const double h = std::hypot(x + 1.0, y);
    // r = (y - sin t) / sin(t/2), simplified to sign(y) (x^2 + y^2 - 1) / h.
    return {2.0 * alpha, sign * circle_defect(x, y) / h};
}

PolarCoords polar_coords(double x, double y) {
    if (x == 0.0 && y == 0.0) {
        throw DomainError("polar_coords: undefined at the origin");
    }
    double theta = std::atan2(y, x);
    double rho = std::hypot(x, y);
    if (theta < 0.0) {
        theta += pi;
        rho = -rho;
    }
    if (theta >= pi) {
        theta -= pi;
        rho = -rho;
    }
    return {rho, theta};
}

CrossSection cross_section_simple(double x, double y, HalfWidth delta) {
    if (x == -1.0 && y == 0.0) {
        const double sigma = delta.is_infinite() ? 1.0 : sigma_delta(delta);
        return CrossSection::interval(-sigma, sigma, true);
    }
    if (!in_region(x, y, delta)) return CrossSection::empty();
    return CrossSection::finite({graph_height(x, y)});
}

CrossSection cross_section_common(double x, double y) {
    if (y == 0.0) {
        if (x == -1.0 || x == 0.0) return CrossSection::all_reals();
        return CrossSection::finite({0.0});
    }
    const PolarCoords pc = polar_coords(x, y);
    const double rho = pc.rho;
    // rho + x = rho (1 + cos theta); use rho + x = y^2 / (rho - x) when the terms cancel.
    const double s = (x * rho >= 0.0) ? rho + x : y * y / (rho - x);
    const double z1 = (rho - 1.0) * y / s;  // (rho - 1) tan(theta/2)
    if (x == -1.0) return CrossSection::finite({z1});
    const double z2 = (rho + 1.0) * s / y;  // (rho + 1) cot(theta/2)
    return CrossSection::finite({z1, z2});
}

double cubic_residual(const Point3& p) noexcept {
    const double x = p.x;
    const double y = p.y;
    const double z = p.z;
    return -y + x * x * y + y * y * y - 2.0 * x * z - 2.0 * x * x * z - 2.0 * y * y * z + y * z * z;
}

double min_max_r_squared(double rho) noexcept { return 2.0 + 2.0 * rho * rho; }

bool is_embedding(HalfWidth delta, RealizationKind kind) {
    const double d = delta.value();
    return kind == RealizationKind::simple ? d <= sqrt2 : d < 2.0;
}

}  // namespace moebius
