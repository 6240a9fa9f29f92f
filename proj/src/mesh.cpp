#include "moebius/mesh.hpp"

#include "moebius/closed_form.hpp"
#include "moebius/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace moebius {

// ---------------------------------------------------------------- topology

MeshTopology analyze_topology(const SurfaceMesh& mesh) {
    MeshTopology topo;
    topo.vertices = mesh.vertices.size();
    topo.faces = mesh.faces.size();

    std::map<std::pair<std::uint32_t, std::uint32_t>, int> edge_faces;
    for (const auto& f : mesh.faces) {
        for (int k = 0; k < 3; ++k) {
            std::uint32_t a = f[k];
            std::uint32_t b = f[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            ++edge_faces[{a, b}];
        }
    }
    topo.edges = edge_faces.size();
    topo.euler_characteristic = static_cast<long long>(topo.vertices) - static_cast<long long>(topo.edges) +
                                static_cast<long long>(topo.faces);

    // Boundary edges have exactly one incident face.
    std::unordered_multimap<std::uint32_t, std::uint32_t> boundary_adj;
    std::map<std::pair<std::uint32_t, std::uint32_t>, bool> visited;
    for (const auto& [edge, count] : edge_faces) {
        if (count > 2) ++topo.non_manifold_edges;
        if (count != 1) continue;
        boundary_adj.emplace(edge.first, edge.second);
        boundary_adj.emplace(edge.second, edge.first);
        visited[edge] = false;
    }
    auto key = [](std::uint32_t a, std::uint32_t b) { return a < b ? std::pair{a, b} : std::pair{b, a}; };
    for (auto& [edge, seen] : visited) {
        if (seen) continue;
        seen = true;
        std::size_t length = 1;
        const std::uint32_t start = edge.first;
        std::uint32_t current = edge.second;
        while (current != start) {
            bool advanced = false;
            const auto [lo, hi] = boundary_adj.equal_range(current);
            for (auto it = lo; it != hi; ++it) {
                bool& flag = visited[key(current, it->second)];
                if (flag) continue;
                flag = true;
                current = it->second;
                ++length;
                advanced = true;
                break;
            }
            if (!advanced) break;  // open chain on a non-manifold boundary
        }
        topo.boundary_loop_lengths.push_back(length);
    }
    return topo;
}

// ---------------------------------------------------------------- tessellation

SurfaceMesh tessellate(RealizationKind kind, HalfWidth delta, std::size_t nt, std::size_t nr, bool weld) {
    if (nt < 3 || nr < 1) throw UsageError("tessellate: need nt >= 3 and nr >= 1");
    if (weld && nr % 2 != 0) throw UsageError("tessellate: welding needs an even nr");
    const double d = delta.value();

    SurfaceMesh mesh;
    mesh.welded = weld;
    const std::size_t rows = nr + 1;
    const std::size_t columns = weld ? nt : nt + 1;
    mesh.vertices.reserve(columns * rows);
    mesh.params.reserve(columns * rows);
    for (std::size_t i = 0; i < columns; ++i) {
        const double t = two_pi * static_cast<double>(i) / static_cast<double>(nt);
        for (std::size_t j = 0; j < rows; ++j) {
            const ParamPoint p{t, -d + 2.0 * d * static_cast<double>(j) / static_cast<double>(nr)};
            mesh.params.push_back(p);
            mesh.vertices.push_back(evaluate(kind, p));
        }
    }

    auto vid = [&](std::size_t i, std::size_t j) -> std::uint32_t {
        if (weld && i == nt) return static_cast<std::uint32_t>(nr - j);  // (2pi, r) ~ (0, -r)
        return static_cast<std::uint32_t>(i * rows + j);
    };
    mesh.faces.reserve(2 * nt * nr);
    for (std::size_t i = 0; i < nt; ++i) {
        for (std::size_t j = 0; j < nr; ++j) {
            const auto a = vid(i, j);
            const auto b = vid(i + 1, j);
            const auto c = vid(i + 1, j + 1);
            const auto e = vid(i, j + 1);
            mesh.faces.push_back({a, b, c});
            mesh.faces.push_back({a, c, e});
        }
    }
    return mesh;
}

// ---------------------------------------------------------------- figure patches

bool PatchSpec::contains(ParamPoint p) const noexcept {
    const bool t_ok = p.t >= t_lo && (t_hi_open ? p.t < t_hi : p.t <= t_hi);
    return t_ok && p.r >= r_lo && p.r <= r_hi;
}

std::vector<PatchSpec> figure_patch_specs(HalfWidth delta) {
    const double d = delta.value();
    if (!(d > sqrt2)) {
        throw PreconditionError("figure patches need delta > sqrt2 (nonempty self-intersection set)");
    }
    // sin h2 = c and cos h2 = sqrt(1 - c^2) are used directly so that the
    // rectangles stay inside the strip without rounding slop.
    const double c = std::min(d, 2.0) / 2.0;
    const double cos_h2 = std::sqrt((1.0 - c) * (1.0 + c));
    const double h2 = std::asin(c);
    const double h3 = pi - h2;
    const double half_pi = 0.5 * pi;
    return {
        {"S1_bot", half_pi, 2.0 * h2, false, -sqrt2, -2.0 * cos_h2, h2, h3},
        {"S1_top", 2.0 * h3, 3.0 * half_pi, false, 2.0 * cos_h2, sqrt2, h2, h3},
        {"S2_bot", pi - 2.0 * h2, half_pi, false, -2.0 * c, -sqrt2, h2, h3},
        {"S2_top", 3.0 * half_pi, 3.0 * pi - 2.0 * h3, true, sqrt2, 2.0 * c, h2, h3},
    };
}

std::vector<SurfaceMesh> figure_patches(HalfWidth delta, std::size_t nt, std::size_t nr) {
    if (nt < 1 || nr < 1) throw UsageError("figure_patches: need nt >= 1 and nr >= 1");
    std::vector<SurfaceMesh> meshes;
    for (const PatchSpec& spec : figure_patch_specs(delta)) {
        SurfaceMesh mesh;
        const std::size_t rows = nr + 1;
        for (std::size_t i = 0; i <= nt; ++i) {
            const double t = spec.t_lo + (spec.t_hi - spec.t_lo) * static_cast<double>(i) / static_cast<double>(nt);
            for (std::size_t j = 0; j < rows; ++j) {
                const double r =
                    spec.r_lo + (spec.r_hi - spec.r_lo) * static_cast<double>(j) / static_cast<double>(nr);
                mesh.params.push_back({t, r});
                mesh.vertices.push_back(eval_simple({t, r}));
            }
        }
        for (std::size_t i = 0; i < nt; ++i) {
            for (std::size_t j = 0; j < nr; ++j) {
                const auto a = static_cast<std::uint32_t>(i * rows + j);
                const auto b = static_cast<std::uint32_t>((i + 1) * rows + j);
                mesh.faces.push_back({a, b, b + 1});
                mesh.faces.push_back({a, b + 1, a + 1});
            }
        }
        meshes.push_back(std::move(mesh));
    }
    return meshes;
}

// ---------------------------------------------------------------- region boundary

namespace {

// Edge identity: orientation (0 horizontal, 1 vertical), lattice level
// (0 coarse, 1 refined), and the lower-left node on that lattice.
using EdgeKey = std::tuple<int, int, long, long>;

struct Segment {
    EdgeKey from;
    EdgeKey to;
};

class LevelSetTracer {
public:
    LevelSetTracer(double level, const BBox2& box, std::size_t n)
        : level_(level), box_(box), n_(n), tol_(1e-3 * level) {}

    std::vector<Polyline2> run() {
        const double hx = (box_.x_max - box_.x_min) / static_cast<double>(n_);
        const double hy = (box_.y_max - box_.y_min) / static_cast<double>(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                const double x0 = box_.x_min + hx * static_cast<double>(i);
                const double y0 = box_.y_min + hy * static_cast<double>(j);
                const double x1 = box_.x_min + hx * static_cast<double>(i + 1);
                const double y1 = box_.y_min + hy * static_cast<double>(j + 1);
                if (x0 <= -1.0 && -1.0 <= x1 && y0 <= 0.0 && 0.0 <= y1) {
                    refine_cell(i, j, x0, y0, x1, y1);
                } else {
                    cell(0, static_cast<long>(i), static_cast<long>(j), x0, y0, x1, y1);
                }
            }
        }
        return link();
    }

private:
    static constexpr int refine = 4;

    double phi(double x, double y) const {
        if (x == -1.0 && y == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return graph_offset_sq(x, y) - level_;
    }

    void refine_cell(std::size_t i, std::size_t j, double x0, double y0, double x1, double y1) {
        for (int a = 0; a < refine; ++a) {
            for (int b = 0; b < refine; ++b) {
                const double sx0 = x0 + (x1 - x0) * a / refine;
                const double sx1 = a + 1 == refine ? x1 : x0 + (x1 - x0) * (a + 1) / refine;
                const double sy0 = y0 + (y1 - y0) * b / refine;
                const double sy1 = b + 1 == refine ? y1 : y0 + (y1 - y0) * (b + 1) / refine;
                if (sx0 <= -1.0 && -1.0 <= sx1 && sy0 <= 0.0 && 0.0 <= sy1) continue;
                cell(1, static_cast<long>(i) * refine + a, static_cast<long>(j) * refine + b, sx0, sy0, sx1, sy1);
            }
        }
    }

    // Crossing on the edge between corners p and q; cached so both cells sharing
    // the edge see the same point.
    void crossing(const EdgeKey& key, Point2 p, double fp, Point2 q, double fq) {
        if (points_.count(key)) return;
        // Orient so the search runs from the inside corner to the outside corner.
        if (fp > 0.0) {
            std::swap(p, q);
            std::swap(fp, fq);
        }
        double lo = 0.0, hi = 1.0, flo = fp, fhi = fq;
        double s = flo / (flo - fhi);
        auto at = [&](double u) { return Point2{p.x + (q.x - p.x) * u, p.y + (q.y - p.y) * u}; };
        int side = 0;
        for (int it = 0; it < 100; ++it) {
            const Point2 m = at(s);
            const double fm = phi(m.x, m.y);
            if (std::abs(fm) <= tol_ || !std::isfinite(fm)) break;
            // Illinois variant of regula falsi.
            if (fm <= 0.0) {
                lo = s;
                flo = fm;
                if (side == -1) fhi *= 0.5;
                side = -1;
            } else {
                hi = s;
                fhi = fm;
                if (side == 1) flo *= 0.5;
                side = 1;
            }
            s = (flo == fhi) ? 0.5 * (lo + hi) : lo + (hi - lo) * flo / (flo - fhi);
        }
        points_[key] = at(s);
    }

    void cell(int level, long i, long j, double x0, double y0, double x1, double y1) {
        const std::array<Point2, 4> c{Point2{x0, y0}, Point2{x1, y0}, Point2{x1, y1}, Point2{x0, y1}};
        std::array<double, 4> f{};
        for (int k = 0; k < 4; ++k) {
            f[k] = phi(c[k].x, c[k].y);
            if (!std::isfinite(f[k])) return;
        }
        // Counterclockwise edges c0c1, c1c2, c2c3, c3c0.
        const std::array<EdgeKey, 4> keys{EdgeKey{0, level, i, j}, EdgeKey{1, level, i + 1, j},
                                          EdgeKey{0, level, i, j + 1}, EdgeKey{1, level, i, j}};
        struct Crossing {
            int edge;
            bool exit;  // inside -> outside along the counterclockwise walk
        };
        std::vector<Crossing> xs;
        for (int k = 0; k < 4; ++k) {
            const bool in_a = f[k] <= 0.0;
            const bool in_b = f[(k + 1) % 4] <= 0.0;
            if (in_a == in_b) continue;
            crossing(keys[k], c[k], f[k], c[(k + 1) % 4], f[(k + 1) % 4]);
            xs.push_back({k, in_a});
        }
        if (xs.empty()) return;
        if (xs.size() == 2) {
            const auto& exit = xs[0].exit ? xs[0] : xs[1];
            const auto& entry = xs[0].exit ? xs[1] : xs[0];
            segments_.push_back({keys[exit.edge], keys[entry.edge]});
            return;
        }
        // Saddle: four crossings alternating exit/entry. A connected inside
        // (center inside) pairs each exit with the next entry, otherwise with
        // the previous one.
        const double center = phi(0.5 * (x0 + x1), 0.5 * (y0 + y1));
        const bool center_inside = std::isfinite(center) && center <= 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            if (!xs[k].exit) continue;
            const auto& partner = center_inside ? xs[(k + 1) % 4] : xs[(k + 3) % 4];
            segments_.push_back({keys[xs[k].edge], keys[partner.edge]});
        }
    }

    std::vector<Polyline2> link() const {
        std::map<EdgeKey, std::size_t> by_start;
        std::map<EdgeKey, bool> has_predecessor;
        for (std::size_t s = 0; s < segments_.size(); ++s) {
            by_start.emplace(segments_[s].from, s);
            has_predecessor[segments_[s].to] = true;
        }
        std::vector<bool> used(segments_.size(), false);
        std::vector<Polyline2> lines;

        auto push_point = [](Polyline2& line, const Point2& p) {
            if (line.points.empty() || !(line.points.back() == p)) line.points.push_back(p);
        };
        auto trace = [&](std::size_t first) {
            Polyline2 line;
            std::size_t s = first;
            push_point(line, points_.at(segments_[s].from));
            while (true) {
                used[s] = true;
                const EdgeKey& next_key = segments_[s].to;
                const auto it = by_start.find(next_key);
                if (it == by_start.end()) {
                    push_point(line, points_.at(next_key));
                    break;
                }
                if (it->second == first) {
                    line.closed = true;
                    break;
                }
                if (used[it->second]) {
                    push_point(line, points_.at(next_key));
                    break;
                }
                s = it->second;
                push_point(line, points_.at(segments_[s].from));
            }
            if (line.closed && line.points.size() > 1 && line.points.front() == line.points.back()) {
                line.points.pop_back();
            }
            if (line.points.size() >= 2) lines.push_back(std::move(line));
        };

        // Open chains first (their first segment has no predecessor), then loops.
        for (std::size_t s = 0; s < segments_.size(); ++s) {
            if (!used[s] && !has_predecessor.count(segments_[s].from)) trace(s);
        }
        for (std::size_t s = 0; s < segments_.size(); ++s) {
            if (!used[s]) trace(s);
        }
        return lines;
    }

    double level_;
    BBox2 box_;
    std::size_t n_;
    double tol_;
    std::map<EdgeKey, Point2> points_;
    std::vector<Segment> segments_;
};

}  // namespace

std::vector<Polyline2> region_boundary(HalfWidth delta, const BBox2& bbox, std::size_t resolution) {
    if (resolution < 16) throw UsageError("region_boundary: resolution must be at least 16");
    if (!(bbox.x_max > bbox.x_min) || !(bbox.y_max > bbox.y_min)) {
        throw UsageError("region_boundary: empty bounding box");
    }
    const double d = delta.value();
    return LevelSetTracer(d * d, bbox, resolution).run();
}

// ---------------------------------------------------------------- text formats

std::string format_number(double value, int significant_digits) {
    if (value == 0.0) value = 0.0;  // drop the sign of -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, significant_digits);
    return std::string(buf, res.ptr);
}

void write_obj(std::ostream& out, const SurfaceMesh& mesh) {
    for (const auto& v : mesh.vertices) {
        out << "v " << format_number(v.x, 9) << ' ' << format_number(v.y, 9) << ' ' << format_number(v.z, 9)
            << '\n';
    }
    for (const auto& f : mesh.faces) {
        out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    }
}

std::string export_obj(const SurfaceMesh& mesh) {
    std::ostringstream out;
    write_obj(out, mesh);
    return out.str();
}

SurfaceMesh read_obj(std::istream& in) {
    SurfaceMesh mesh;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            Point3 p;
            if (!(ls >> p.x >> p.y >> p.z)) throw UsageError("read_obj: bad vertex on line " + std::to_string(line_no));
            mesh.vertices.push_back(p);
        } else if (tag == "f") {
            std::array<std::uint32_t, 3> face{};
            for (auto& idx : face) {
                std::string token;
                if (!(ls >> token)) throw UsageError("read_obj: bad face on line " + std::to_string(line_no));
                const long value = std::stol(token.substr(0, token.find('/')));
                if (value < 1) throw UsageError("read_obj: face index out of range on line " + std::to_string(line_no));
                idx = static_cast<std::uint32_t>(value - 1);
            }
            mesh.faces.push_back(face);
        }
    }
    for (const auto& f : mesh.faces) {
        for (const auto idx : f) {
            if (idx >= mesh.vertices.size()) throw UsageError("read_obj: face index out of range");
        }
    }
    return mesh;
}

void write_polylines_csv(std::ostream& out, const std::vector<Polyline2>& lines) {
    out << "x,y\n";
    for (std::size_t k = 0; k < lines.size(); ++k) {
        if (k > 0) out << '\n';
        const auto& pts = lines[k].points;
        for (const auto& p : pts) out << format_number(p.x, 9) << ',' << format_number(p.y, 9) << '\n';
        if (lines[k].closed && !pts.empty()) {
            out << format_number(pts.front().x, 9) << ',' << format_number(pts.front().y, 9) << '\n';
        }
    }
}

}  // namespace moebius
