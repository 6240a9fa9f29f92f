// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include "moebius/closed_form.hpp"
#include "moebius/mesh.hpp"
#include "moebius/oracle.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace moebius;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

HalfWidth hw(double v) { return HalfWidth::finite(v); }

unsigned threads() { return resolve_threads(0); }

std::string num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

Verdict graph_identity() {
    bool pass = true;
    double worst = 0.0;
    for (double d : {0.5, 1.0, sqrt2, 1.97, 3.0}) {
        const auto report = verify_graph_identity(hw(d), 1'000'000, 7, threads());
        pass = pass && report.pass;
        worst = std::max(worst, report.worst_residual);
    }
    return {pass, "worst residual " + num(worst) + " over 5 x 10^6 samples"};
}

Verdict self_intersection_profile() {
    const auto cloud = build_cloud(RealizationKind::simple, hw(1.97), 2048, 512, threads());
    const auto pairs = detect_collisions(cloud, 1e-3, default_eps_param, threads());
    const auto profile = collision_z_profile(pairs);
    if (!profile) return {false, "no collisions"};
    const bool on_axis = profile->max_axis_deviation <= 2e-3;
    const bool z_min = std::abs(profile->z_min_abs - 0.34) <= 2e-3;
    const bool z_max = profile->z_max_abs < 1.0;
    return {on_axis && z_min && z_max, std::to_string(pairs.size()) + " pairs, axis deviation " +
                                           num(profile->max_axis_deviation) + ", min |z| " +
                                           num(profile->z_min_abs) + ", max |z| " + num(profile->z_max_abs)};
}

Verdict simple_threshold() {
    EmbeddingScanOptions opts;
    opts.threads = threads();
    const std::vector<double> deltas{1.0, 1.41, 1.5, 1.97, 2.5};
    const auto report = verify_embedding_threshold(RealizationKind::simple, deltas, opts);
    std::string detail = "collisions";
    for (const auto& e : report.params["deltas"]) {
        detail += " " + num(e["delta"].get<double>()) + ":" + std::to_string(e["collisions"].get<std::size_t>());
    }
    return {report.pass, detail};
}

Verdict common_threshold() {
    EmbeddingScanOptions opts;
    opts.threads = threads();
    const std::vector<double> deltas{1.9, 2.0, 2.5};
    const auto report = verify_embedding_threshold(RealizationKind::common, deltas, opts);

    const auto cloud = build_cloud(RealizationKind::common, hw(2.0), opts.nt, opts.nr, threads());
    const auto pairs = detect_collisions(cloud, opts.eps_space, opts.eps_param, threads());
    bool exact = false;
    for (const auto& p : pairs) {
        if (p.a == ParamPoint{0.0, -2.0} && p.b == ParamPoint{pi, 0.0} && p.spatial_gap <= 1e-12) exact = true;
    }
    return {report.pass && exact,
            std::string("threshold report ") + (report.pass ? "agrees" : "disagrees") + ", pair (0,-2)/(pi,0) " +
                (exact ? "found" : "missing")};
}

Verdict axis_segment() {
    bool pass = true;
    double worst = 0.0;
    for (double d : {0.1, 1.0, sqrt2, 2.0}) {
        const auto report = verify_axis_segment(hw(d), 1'000'000, 512, threads());
        pass = pass && report.pass;
        worst = std::max(worst, report.worst_residual);
    }
    return {pass, "worst range error " + num(worst)};
}

Verdict cubic_surface() {
    double worst = 0.0;
    bool pass = true;
    for (std::uint64_t i = 0; i < 100'000; ++i) {
        const double t = two_pi * SplitMix64::unit_at(7, 2 * i);
        const double r = 3.0 * (2.0 * SplitMix64::unit_at(7, 2 * i + 1) - 1.0);
        const double residual = std::abs(cubic_residual(eval_common({t, r})));
        const double scaled = residual / std::pow(1 + std::abs(r), 3);
        worst = std::max(worst, scaled);
        pass = pass && scaled <= 1e-9;
    }
    return {pass, "worst scaled residual " + num(worst)};
}

// Whether (x, y, z) is hit by one of the two parameter candidates of the
// vertical line through (x, y).
bool realized_by_common(double x, double y, double z) {
    double theta = std::atan2(y, x);
    if (theta < 0) theta += pi;
    if (theta >= pi) theta -= pi;
    const double rho = std::abs(std::sin(theta)) > 0.5 ? y / std::sin(theta) : x / std::cos(theta);
    const std::array<ParamPoint, 2> candidates{ParamPoint{theta, (rho - 1) / std::cos(theta / 2)},
                                               ParamPoint{theta + pi, (rho + 1) / std::sin(theta / 2)}};
    for (const auto& p : candidates) {
        if (distance(eval_common(p), {x, y, z}) <= 1e-9 * (1 + std::abs(z))) return true;
    }
    return false;
}

Verdict common_cross_sections() {
    bool pass = cross_section_common(0.0, 1.0) == CrossSection::finite({0.0, 2.0});
    std::size_t checked = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const double u = -3.0 + 6.0 * SplitMix64::unit_at(7, 2 * i);
        const double v = -3.0 + 6.0 * SplitMix64::unit_at(7, 2 * i + 1);
        double x = u, y = v;
        std::optional<std::size_t> expected = 2;
        switch (i % 4) {
            case 0: break;
            case 1: x = -1.0; expected = 1; break;
            case 2: y = 0.0; expected = 1; break;
            default:
                x = (i % 8 == 3) ? -1.0 : 0.0;
                y = 0.0;
                expected = std::nullopt;
        }
        const auto cs = cross_section_common(x, y);
        pass = pass && cs.cardinality() == expected;
        if (cs.is_finite()) {
            for (double z : cs.finite_values()) {
                const bool ok = y == 0.0 ? distance(eval_common({0.0, x - 1}), {x, y, z}) <= 1e-9
                                         : realized_by_common(x, y, z);
                pass = pass && ok;
                ++checked;
            }
        }
    }
    return {pass, std::to_string(checked) + " values re-realized"};
}

Verdict min_max() {
    const std::vector<double> rhos{0.0, 0.1, 1.0, 2.0};
    const auto report = verify_min_max(rhos, 100'000);
    return {report.pass, "worst difference " + num(report.worst_residual)};
}

Verdict mesh_topology() {
    bool pass = true;
    std::string detail;
    const std::array<std::pair<std::size_t, std::size_t>, 3> grids{{{8, 2}, {64, 8}, {256, 16}}};
    for (const auto& [nt, nr] : grids) {
        const auto welded = analyze_topology(tessellate(RealizationKind::simple, hw(0.6), nt, nr, true));
        const auto open = analyze_topology(tessellate(RealizationKind::simple, hw(0.6), nt, nr, false));
        pass = pass && welded.euler_characteristic == 0 && welded.boundary_loop_lengths.size() == 1 &&
               welded.boundary_loop_lengths[0] == 2 * nt && open.euler_characteristic == 1;
        detail += "(" + std::to_string(nt) + "," + std::to_string(nr) + ") chi " +
                  std::to_string(welded.euler_characteristic) + "/" + std::to_string(open.euler_characteristic) + " ";
    }
    return {pass, detail + "welded/open"};
}

Verdict region() {
    const std::array<double, 5> deltas{0.5, 1.0, sqrt2, 2.0, 3.0};
    bool nested = true;
    for (std::uint64_t i = 0; i < 10'000; ++i) {
        const double x = -3.0 + 8.0 * SplitMix64::unit_at(7, 2 * i);
        const double y = -4.0 + 8.0 * SplitMix64::unit_at(7, 2 * i + 1);
        for (std::size_t k = 0; k + 1 < deltas.size(); ++k) {
            if (in_region(x, y, hw(deltas[k])) && !in_region(x, y, hw(deltas[k + 1]))) nested = false;
        }
    }
    std::vector<double> xs;
    for (const auto& line : region_boundary(hw(0.5), BBox2{}, 256)) {
        const std::size_t n = line.points.size();
        for (std::size_t i = 0; i < (line.closed ? n : n - 1); ++i) {
            const auto& a = line.points[i];
            const auto& b = line.points[(i + 1) % n];
            if ((a.y <= 0.0) != (b.y <= 0.0)) xs.push_back(a.x + (b.x - a.x) * a.y / (a.y - b.y));
        }
    }
    std::sort(xs.begin(), xs.end());
    const bool crossings =
        xs.size() == 2 && std::abs(xs[0] - 0.5) <= 1e-3 && std::abs(xs[1] - 1.5) <= 1e-3;
    std::string detail = std::string(nested ? "nested" : "not nested") + ", crossings";
    for (double x : xs) detail += " " + num(x);
    return {nested && crossings, detail};
}

Verdict hash_self_check() {
    struct Case {
        RealizationKind kind;
        double delta;
        std::size_t nt, nr;
        double eps_space, eps_param;
    };
    const std::array<Case, 5> cases{{
        {RealizationKind::simple, 1.97, 200, 24, 0.05, 0.1},
        {RealizationKind::simple, 2.5, 125, 39, 0.08, 0.3},
        {RealizationKind::simple, 1.0, 250, 19, 0.02, 0.05},
        {RealizationKind::common, 2.0, 64, 4, 1e-3, 0.1},
        {RealizationKind::common, 2.5, 120, 40, 0.06, 0.2},
    }};
    bool pass = true;
    std::size_t total = 0;
    for (const auto& c : cases) {
        const auto cloud = build_cloud(c.kind, hw(c.delta), c.nt, c.nr);
        const auto reference = detect_collisions_all_pairs(cloud, c.eps_space, c.eps_param);
        pass = pass && cloud.size() <= 5000 && detect_collisions(cloud, c.eps_space, c.eps_param, threads()) == reference;
        total += reference.size();
    }
    return {pass, std::to_string(total) + " pairs compared"};
}

std::string run_binary(const std::string& threads_env, int& status) {
    const std::string command =
        "MOEBIUS_THREADS=" + threads_env + " '" MOEBIUS_BINARY "' verify --suite all --delta 1.97 --seed 7";
    std::string output;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
        status = -1;
        return output;
    }
    std::array<char, 4096> buffer{};
    std::size_t n = 0;
    while ((n = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) output.append(buffer.data(), n);
    status = pclose(pipe);
    return output;
}

Verdict determinism() {
    int s1 = 0, s1b = 0, s4 = 0;
    const std::string a = run_binary("1", s1);
    const std::string b = run_binary("1", s1b);
    const std::string c = run_binary("4", s4);
    const bool identical = !a.empty() && a == b && a == c;
    return {identical, std::to_string(a.size()) + " bytes, " + (identical ? "identical" : "differ") +
                           ", exit statuses " + std::to_string(s1) + "/" + std::to_string(s1b) + "/" +
                           std::to_string(s4)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"graph identity", graph_identity},
        {"self-intersection profile", self_intersection_profile},
        {"simple-map embedding threshold", simple_threshold},
        {"common-map embedding threshold", common_threshold},
        {"axis segment", axis_segment},
        {"cubic surface", cubic_surface},
        {"common cross-sections", common_cross_sections},
        {"min-max identity", min_max},
        {"mesh topology", mesh_topology},
        {"region monotonicity and boundary", region},
        {"spatial hash self-check", hash_self_check},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v{false, ""};
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!v.pass) ++failures;
        std::cout << (v.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << v.detail
                  << " (" << num(secs) << " s)" << std::endl;
    }
    std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
