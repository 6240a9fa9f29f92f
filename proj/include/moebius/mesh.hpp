#pragma once

#include "moebius/core_maps.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace moebius {

struct SurfaceMesh {
    std::vector<Point3> vertices;
    std::vector<ParamPoint> params;  // parallel to vertices; raw (unreduced) parameters
    std::vector<std::array<std::uint32_t, 3>> faces;
    bool welded = false;
};

struct MeshTopology {
    std::size_t vertices = 0;
    std::size_t edges = 0;
    std::size_t faces = 0;
    long long euler_characteristic = 0;
    std::vector<std::size_t> boundary_loop_lengths;  // in edges
    std::size_t non_manifold_edges = 0;              // edges with more than two faces
};

/// Counts V, E, F and walks boundary loops (edges with exactly one incident face).
MeshTopology analyze_topology(const SurfaceMesh& mesh);

/// Grid tessellation over [0, 2pi] x [-delta, delta] with t_i = 2pi i / nt and
/// r_j = -delta + 2 delta j / nr. Each quad (i, j)-(i+1, j+1) is split along that
/// diagonal. With weld, column nt is identified with column 0 in reversed r order,
/// so the mesh is a Moebius band (Euler characteristic 0, one boundary loop).
/// Throws UsageError for nt < 3, nr < 1, or odd nr with weld.
SurfaceMesh tessellate(RealizationKind kind, HalfWidth delta, std::size_t nt, std::size_t nr, bool weld);

/// One of the four parameter rectangles that frame the self-intersection set.
struct PatchSpec {
    std::string name;  // S1_bot, S1_top, S2_bot, S2_top
    double t_lo = 0.0;
    double t_hi = 0.0;
    bool t_hi_open = false;
    double r_lo = 0.0;
    double r_hi = 0.0;
    double h2 = 0.0;
    double h3 = 0.0;

    bool contains(ParamPoint p) const noexcept;
};

/// Throws PreconditionError unless delta > sqrt2.
std::vector<PatchSpec> figure_patch_specs(HalfWidth delta);

/// Simple-map meshes over each patch rectangle (closed ranges), nt x nr cells each.
std::vector<SurfaceMesh> figure_patches(HalfWidth delta, std::size_t nt = 48, std::size_t nr = 16);

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point2&, const Point2&) = default;
};

struct Polyline2 {
    std::vector<Point2> points;
    bool closed = false;
};

struct BBox2 {
    double x_min = -3.0;
    double x_max = 5.0;
    double y_min = -4.0;
    double y_max = 4.0;
};

/// Marching squares on the level set g(x, y) = delta^2 over `resolution` cells
/// per axis. Edge crossings start from linear interpolation and are polished on
/// the edge until |g - delta^2| <= 1e-3 delta^2. The cell holding (-1, 0) is
/// split 4 x 4, and sub-cells touching that point emit nothing. Segments are
/// oriented with the region on their left. Throws UsageError if resolution < 16.
std::vector<Polyline2> region_boundary(HalfWidth delta, const BBox2& bbox, std::size_t resolution);

/// Wavefront OBJ: "v x y z" (9 significant digits), then "f i j k" (1-based), LF endings.
void write_obj(std::ostream& out, const SurfaceMesh& mesh);
std::string export_obj(const SurfaceMesh& mesh);

/// Reads the "v" and "f" records written by write_obj. Throws UsageError on malformed input.
SurfaceMesh read_obj(std::istream& in);

/// Header "x,y", one point per row (9 significant digits), a blank line between
/// polylines; closed polylines repeat their first point.
void write_polylines_csv(std::ostream& out, const std::vector<Polyline2>& lines);

/// printf("%.*g")-style decimal, locale independent; -0 prints as 0.
std::string format_number(double value, int significant_digits);

}  // namespace moebius
