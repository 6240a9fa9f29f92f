#pragma once

#include "moebius/core_maps.hpp"

#include "doctest.h"

namespace moebius::test {

inline void check_close(const Point3& a, const Point3& b, double tol) {
    INFO("a = (" << a.x << ", " << a.y << ", " << a.z << "), b = (" << b.x << ", " << b.y << ", " << b.z << ")");
    CHECK(distance(a, b) <= tol);
}

inline HalfWidth hw(double v) { return HalfWidth::finite(v); }

}  // namespace moebius::test
