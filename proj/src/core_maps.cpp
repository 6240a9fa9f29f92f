#include "moebius/core_maps.hpp"

#include "moebius/errors.hpp"

#include <algorithm>
#include <tuple>
#include <string>

namespace moebius {

HalfWidth HalfWidth::finite(double value) {
    if (!std::isfinite(value) || !(value > 0.0)) {
        throw DomainError("half-width must be finite and positive, got " + std::to_string(value));
    }
    return HalfWidth{value};
}

double HalfWidth::value() const {
    if (!value_) {
        throw DomainError("operation requires a finite half-width");
    }
    return *value_;
}

std::string_view to_string(RealizationKind kind) noexcept {
    return kind == RealizationKind::common ? "common" : "simple";
}

std::optional<RealizationKind> parse_realization_kind(std::string_view text) noexcept {
    if (text == "common") return RealizationKind::common;
    if (text == "simple") return RealizationKind::simple;
    return std::nullopt;
}

ParamPoint canonicalize(double t, double r) {
    if (!std::isfinite(t) || !std::isfinite(r)) {
        throw DomainError("canonicalize: non-finite parameter");
    }
    double shifts = std::floor(t / two_pi);
    double reduced = t - shifts * two_pi;
    // Rounding can leave reduced just outside [0, 2pi).
    if (reduced >= two_pi) {
        reduced -= two_pi;
        shifts += 1.0;
    } else if (reduced < 0.0) {
        reduced += two_pi;
        shifts -= 1.0;
    }
    const bool odd = std::fmod(std::fabs(shifts), 2.0) == 1.0;
    return {reduced, odd ? -r : r};
}

Point3 eval_simple(ParamPoint p) {
    const double half = 0.5 * p.t;
    const double ch = std::cos(half);
    const double sh = std::sin(half);
    return {std::cos(p.t) + p.r * ch, std::sin(p.t) + p.r * sh, p.r * sh};
}

Point3 eval_common(ParamPoint p) {
    const double half = 0.5 * p.t;
    const double radial = 1.0 + p.r * std::cos(half);
    return {radial * std::cos(p.t), radial * std::sin(p.t), p.r * std::sin(half)};
}

Point3 evaluate(RealizationKind kind, ParamPoint p) {
    return kind == RealizationKind::common ? eval_common(p) : eval_simple(p);
}

double param_distance(ParamPoint p1, ParamPoint p2) noexcept {
    // A fixed argument order makes the rounding, and so the result, symmetric.
    if (std::tie(p2.t, p2.r) < std::tie(p1.t, p1.r)) std::swap(p1, p2);
    const double direct = std::hypot(p1.t - p2.t, p1.r - p2.r);
    const double ahead = std::hypot(p1.t - (p2.t + two_pi), p1.r + p2.r);
    const double behind = std::hypot(p1.t - (p2.t - two_pi), p1.r + p2.r);
    return std::min({direct, ahead, behind});
}

std::pair<Point3, Point3> moving_segment(double t, HalfWidth delta, RealizationKind kind) {
    const double d = delta.value();
    return {evaluate(kind, {t, -d}), evaluate(kind, {t, d})};
}

}  // namespace moebius
