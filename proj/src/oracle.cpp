#include "moebius/oracle.hpp"

#include "moebius/closed_form.hpp"
#include "moebius/errors.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <thread>
#include <tuple>

namespace moebius {

namespace {

constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix_finalize(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

bool param_less(const ParamPoint& a, const ParamPoint& b) noexcept {
    return std::tie(a.t, a.r) < std::tie(b.t, b.r);
}

bool pair_less(const CollisionPair& p, const CollisionPair& q) noexcept {
    return std::tie(p.a.t, p.a.r, p.b.t, p.b.r) < std::tie(q.a.t, q.a.r, q.b.t, q.b.r);
}

double axis_deviation(const Point3& p) noexcept { return std::hypot(p.x + 1.0, p.y); }

// Shared pair predicate of the spatial hash and the all-pairs reference.
class PairTest {
public:
    PairTest(const SampleCloud& cloud, double eps_space, double eps_param)
        : cloud_(cloud), eps_sq_(eps_space * eps_space), eps_param_(eps_param) {}

    void operator()(std::size_t i, std::size_t j, std::vector<CollisionPair>& out) const {
        const Point3& pi_ = cloud_.points[i];
        const Point3& pj = cloud_.points[j];
        const Point3 d = pi_ - pj;
        const double d2 = d.x * d.x + d.y * d.y + d.z * d.z;
        if (d2 > eps_sq_) return;
        ParamPoint a = cloud_.params[i];
        ParamPoint b = cloud_.params[j];
        const double gap = param_distance(a, b);
        if (gap < eps_param_) return;
        if (param_less(b, a)) std::swap(a, b);
        out.push_back({a, b, std::sqrt(d2), gap, (pi_ + pj) * 0.5});
    }

private:
    const SampleCloud& cloud_;
    double eps_sq_;
    double eps_param_;
};

void validate_eps(double eps_space, double eps_param) {
    if (!(eps_space > 0.0) || !(eps_param > 0.0) || !std::isfinite(eps_space) ||
        !std::isfinite(eps_param)) {
        throw UsageError("collision tolerances must be positive and finite");
    }
}

constexpr int cell_bits = 21;
constexpr std::int64_t cell_offset = std::int64_t{1} << (cell_bits - 1);

std::uint64_t pack_cell(std::int64_t cx, std::int64_t cy, std::int64_t cz) noexcept {
    return (static_cast<std::uint64_t>(cx + cell_offset) << (2 * cell_bits)) |
           (static_cast<std::uint64_t>(cy + cell_offset) << cell_bits) |
           static_cast<std::uint64_t>(cz + cell_offset);
}

struct Cell {
    std::uint64_t key;
    std::uint32_t begin;
    std::uint32_t end;
};

// The 13 offsets lexicographically after (0, 0, 0); together with the cell
// itself they visit each neighboring cell pair exactly once.
constexpr auto forward_offsets = [] {
    std::array<std::array<int, 3>, 13> out{};
    std::size_t n = 0;
    for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dz = -1; dz <= 1; ++dz)
                if (std::tie(dx, dy, dz) > std::make_tuple(0, 0, 0)) out[n++] = {dx, dy, dz};
    return out;
}();

}  // namespace

std::uint64_t SplitMix64::next() noexcept {
    state_ += golden_gamma;
    return splitmix_finalize(state_);
}

std::uint64_t SplitMix64::at(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix_finalize(seed + (index + 1) * golden_gamma);
}

nlohmann::ordered_json VerificationReport::to_json() const {
    nlohmann::ordered_json j;
    j["check"] = check;
    j["pass"] = pass;
    j["worst_residual"] = worst_residual;
    j["params"] = params;
    j["n_samples"] = n_samples;
    return j;
}

unsigned resolve_threads(unsigned requested) noexcept {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

SampleCloud build_cloud(RealizationKind kind, HalfWidth delta, std::size_t nt, std::size_t nr,
                        unsigned threads) {
    if (nt < 4 || nr < 1) throw UsageError("build_cloud: need nt >= 4 and nr >= 1");
    const double d = delta.value();
    SampleCloud cloud;
    cloud.kind = kind;
    cloud.delta = d;
    cloud.nt = nt;
    cloud.nr = nr;
    const std::size_t rows = nr + 1;
    cloud.params.resize(nt * rows);
    cloud.points.resize(nt * rows);
    detail::parallel_chunks(nt, resolve_threads(threads), [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t i = begin; i < end; ++i) {
            const double t = two_pi * static_cast<double>(i) / static_cast<double>(nt);
            for (std::size_t j = 0; j < rows; ++j) {
                const double r = -d + 2.0 * d * static_cast<double>(j) / static_cast<double>(nr);
                const ParamPoint p{t, r};
                cloud.params[i * rows + j] = p;
                cloud.points[i * rows + j] = evaluate(kind, p);
            }
        }
    });
    return cloud;
}

std::vector<CollisionPair> detect_collisions(const SampleCloud& cloud, double eps_space,
                                             double eps_param, unsigned threads) {
    validate_eps(eps_space, eps_param);
    const std::size_t n = cloud.size();
    if (n > std::numeric_limits<std::uint32_t>::max()) throw UsageError("cloud too large");

    std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(n);
    const double inv = 1.0 / eps_space;
    for (std::size_t i = 0; i < n; ++i) {
        const Point3& p = cloud.points[i];
        const double fx = std::floor(p.x * inv);
        const double fy = std::floor(p.y * inv);
        const double fz = std::floor(p.z * inv);
        constexpr double limit = static_cast<double>(cell_offset - 2);
        if (!(std::abs(fx) < limit && std::abs(fy) < limit && std::abs(fz) < limit)) {
            throw UsageError("detect_collisions: cloud extent too large for eps_space");
        }
        keyed[i] = {pack_cell(static_cast<std::int64_t>(fx), static_cast<std::int64_t>(fy),
                              static_cast<std::int64_t>(fz)),
                    static_cast<std::uint32_t>(i)};
    }
    std::sort(keyed.begin(), keyed.end());

    std::vector<Cell> cells;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && keyed[j].first == keyed[i].first) ++j;
        cells.push_back({keyed[i].first, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
        i = j;
    }

    std::array<std::int64_t, 13> key_deltas{};
    for (std::size_t k = 0; k < forward_offsets.size(); ++k) {
        const auto& o = forward_offsets[k];
        key_deltas[k] = (static_cast<std::int64_t>(o[0]) << (2 * cell_bits)) +
                        (static_cast<std::int64_t>(o[1]) << cell_bits) + o[2];
    }

    const PairTest test(cloud, eps_space, eps_param);
    const unsigned workers = resolve_threads(threads);
    std::vector<std::vector<CollisionPair>> found(detail::chunk_count(cells.size(), workers));
    detail::parallel_chunks(cells.size(), workers, [&](std::size_t begin, std::size_t end, unsigned w) {
        auto& out = found[w];
        for (std::size_t c = begin; c < end; ++c) {
            const Cell& cell = cells[c];
            for (std::uint32_t a = cell.begin; a < cell.end; ++a)
                for (std::uint32_t b = a + 1; b < cell.end; ++b) test(keyed[a].second, keyed[b].second, out);
            for (const std::int64_t dk : key_deltas) {
                const std::uint64_t nk = static_cast<std::uint64_t>(static_cast<std::int64_t>(cell.key) + dk);
                const auto it = std::lower_bound(cells.begin(), cells.end(), nk,
                                                 [](const Cell& x, std::uint64_t key) { return x.key < key; });
                if (it == cells.end() || it->key != nk) continue;
                for (std::uint32_t a = cell.begin; a < cell.end; ++a)
                    for (std::uint32_t b = it->begin; b < it->end; ++b)
                        test(keyed[a].second, keyed[b].second, out);
            }
        }
    });

    std::vector<CollisionPair> pairs;
    for (auto& chunk : found) pairs.insert(pairs.end(), chunk.begin(), chunk.end());
    std::sort(pairs.begin(), pairs.end(), pair_less);
    return pairs;
}

std::vector<CollisionPair> detect_collisions_all_pairs(const SampleCloud& cloud, double eps_space,
                                                       double eps_param) {
    validate_eps(eps_space, eps_param);
    const PairTest test(cloud, eps_space, eps_param);
    std::vector<CollisionPair> pairs;
    for (std::size_t i = 0; i < cloud.size(); ++i)
        for (std::size_t j = i + 1; j < cloud.size(); ++j) test(i, j, pairs);
    std::sort(pairs.begin(), pairs.end(), pair_less);
    return pairs;
}

std::optional<CollisionProfile> collision_z_profile(std::span<const CollisionPair> pairs) {
    if (pairs.empty()) return std::nullopt;
    CollisionProfile profile;
    profile.count = pairs.size();
    profile.z_min_abs = std::numeric_limits<double>::infinity();
    for (const auto& p : pairs) {
        const double z = std::abs(p.midpoint.z);
        profile.z_min_abs = std::min(profile.z_min_abs, z);
        profile.z_max_abs = std::max(profile.z_max_abs, z);
        profile.max_axis_deviation = std::max(profile.max_axis_deviation, axis_deviation(p.midpoint));
    }
    return profile;
}

double glued_family_mismatch(const CollisionPair& pair, double dt, double dr, double search_cells) {
    constexpr int steps_per_cell = 20;
    const int half_steps = static_cast<int>(std::ceil(search_cells * steps_per_cell));
    double best = std::numeric_limits<double>::infinity();

    // Normalized distance between q and the closest seam representative of target.
    auto cells_apart = [dt, dr](const ParamPoint& q, const ParamPoint& target) {
        const std::array<ParamPoint, 3> reps{target, ParamPoint{target.t + two_pi, -target.r},
                                             ParamPoint{target.t - two_pi, -target.r}};
        double out = std::numeric_limits<double>::infinity();
        for (const auto& rep : reps) {
            out = std::min(out, std::max(std::abs(q.t - rep.t) / dt, std::abs(q.r - rep.r) / dr));
        }
        return out;
    };

    for (const auto& [first, second] : {std::pair{pair.a, pair.b}, std::pair{pair.b, pair.a}}) {
        for (int k = 0; k <= 1; ++k) {
            for (int s = -half_steps; s <= half_steps; ++s) {
                const double t1 = first.t + dt * static_cast<double>(s) / steps_per_cell;
                const auto [p1, p2] = glued_parameters(t1, k);
                const double m = std::max(cells_apart(first, p1), cells_apart(second, p2));
                best = std::min(best, m);
            }
        }
    }
    return best;
}

VerificationReport verify_graph_identity(HalfWidth delta, std::size_t n_samples, std::uint64_t seed,
                                         unsigned threads) {
    constexpr double height_tol = 1e-9;
    constexpr double region_tol = 1e-9;
    constexpr double axis_skip = 1e-6;
    const double d = delta.value();

    struct Tally {
        double worst_height = 0.0;
        double worst_excess = 0.0;
        std::size_t skipped = 0;
        void add(const ParamPoint& p, double d) {
            const Point3 q = eval_simple(p);
            if (std::abs(q.x + 1.0) + std::abs(q.y) < axis_skip) {
                ++skipped;
                return;
            }
            const double h = std::abs(graph_height(q.x, q.y) - q.z) / (1.0 + std::abs(q.z));
            const double e = std::max(0.0, graph_offset_sq(q.x, q.y) - d * d);
            worst_height = std::max(worst_height, h);
            worst_excess = std::max(worst_excess, e);
        }
        void merge(const Tally& o) {
            worst_height = std::max(worst_height, o.worst_height);
            worst_excess = std::max(worst_excess, o.worst_excess);
            skipped += o.skipped;
        }
    };

    const unsigned workers = resolve_threads(threads);
    std::vector<Tally> tallies(detail::chunk_count(n_samples, workers));
    detail::parallel_chunks(n_samples, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
        for (std::size_t i = begin; i < end; ++i) {
            const double u = SplitMix64::unit_at(seed, 2 * i);
            const double v = SplitMix64::unit_at(seed, 2 * i + 1);
            tallies[w].add({two_pi * u, -d + 2.0 * d * v}, d);
        }
    });
    Tally total;
    for (const auto& t : tallies) total.merge(t);

    // Samples hugging the seam from both sides.
    constexpr int seam_rows = 11;
    std::size_t n_seam = 0;
    for (const double t : {two_pi - 1e-7, 1e-7}) {
        for (int j = 0; j < seam_rows; ++j) {
            total.add({t, -d + 2.0 * d * j / (seam_rows - 1)}, d);
            ++n_seam;
        }
    }

    VerificationReport report;
    report.check = "graph_identity";
    report.pass = total.worst_height <= height_tol && total.worst_excess <= region_tol;
    report.worst_residual = std::max(total.worst_height, total.worst_excess);
    report.n_samples = n_samples + n_seam;
    report.params = {{"delta", d},
                     {"seed", seed},
                     {"n_random", n_samples},
                     {"n_seam", n_seam},
                     {"skipped_near_axis", total.skipped},
                     {"worst_height_residual", total.worst_height},
                     {"worst_region_excess", total.worst_excess},
                     {"height_tolerance", height_tol},
                     {"region_tolerance", region_tol}};
    return report;
}

VerificationReport verify_axis_segment(HalfWidth delta, std::size_t n_scan, std::size_t cloud_grid,
                                       unsigned threads) {
    constexpr double range_tol = 1e-6;
    constexpr double on_axis_tol = 1e-4;
    constexpr double cloud_margin = 1e-3;
    if (n_scan < 16) throw UsageError("verify_axis_segment: n_scan must be at least 16");
    const double d = delta.value();

    auto admissible = [d](double t) { return 2.0 * std::abs(std::cos(0.5 * t)) <= d; };
    double z_lo = std::numeric_limits<double>::infinity();
    double z_hi = -std::numeric_limits<double>::infinity();
    double worst_off_axis = 0.0;
    std::size_t hits = 0;
    auto visit = [&](double t) {
        // The axis preimage construction: r = -2cos(t/2).
        const Point3 q = eval_simple({t, -2.0 * std::cos(0.5 * t)});
        worst_off_axis = std::max(worst_off_axis, axis_deviation(q));
        z_lo = std::min(z_lo, q.z);
        z_hi = std::max(z_hi, q.z);
        ++hits;
    };

    auto node = [n_scan](std::size_t i) { return two_pi * static_cast<double>(i) / static_cast<double>(n_scan); };
    for (std::size_t i = 0; i < n_scan; ++i) {
        const double t = node(i);
        const bool inside = admissible(t);
        if (inside) visit(t);
        if (i + 1 < n_scan && inside != admissible(node(i + 1))) {
            // Bisect the membership boundary and keep the admissible end.
            double in = inside ? t : node(i + 1);
            double out = inside ? node(i + 1) : t;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (in + out);
                (admissible(mid) ? in : out) = mid;
            }
            visit(in);
        }
    }

    const double sigma = sigma_delta(delta);
    double range_error = std::numeric_limits<double>::infinity();
    if (hits > 0) range_error = std::max(std::abs(z_hi - sigma), std::abs(z_lo + sigma));

    const SampleCloud cloud = build_cloud(RealizationKind::simple, delta, cloud_grid, cloud_grid, threads);
    std::size_t on_axis = 0;
    double cloud_excess = 0.0;
    for (const auto& p : cloud.points) {
        if (axis_deviation(p) > on_axis_tol) continue;
        ++on_axis;
        cloud_excess = std::max(cloud_excess, std::abs(p.z) - sigma);
    }
    const bool cloud_ok = cloud_excess <= cloud_margin;

    VerificationReport report;
    report.check = "axis_segment";
    report.pass = range_error <= range_tol && worst_off_axis <= 1e-12 && cloud_ok;
    report.worst_residual = std::max({range_error, worst_off_axis, std::max(0.0, cloud_excess)});
    report.n_samples = hits + cloud.size();
    report.params = {{"delta", d},
                     {"n_scan", n_scan},
                     {"sigma", sigma},
                     {"z_min", z_lo},
                     {"z_max", z_hi},
                     {"range_error", range_error},
                     {"range_tolerance", range_tol},
                     {"construction_axis_deviation", worst_off_axis},
                     {"cloud_grid", cloud_grid},
                     {"cloud_points_on_axis", on_axis},
                     {"cloud_on_axis_tolerance", on_axis_tol},
                     {"cloud_worst_excess", std::max(0.0, cloud_excess)},
                     {"cloud_margin", cloud_margin}};
    return report;
}

VerificationReport verify_embedding_threshold(RealizationKind kind, std::span<const double> deltas,
                                              const EmbeddingScanOptions& options) {
    const double threshold = kind == RealizationKind::simple ? sqrt2 : 2.0;
    const double dt = two_pi / static_cast<double>(options.nt);

    VerificationReport report;
    report.check = "embedding_threshold";
    report.pass = true;
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    double worst_mismatch = 0.0;
    for (const double value : deltas) {
        const HalfWidth delta = HalfWidth::finite(value);
        const SampleCloud cloud = build_cloud(kind, delta, options.nt, options.nr, options.threads);
        const auto pairs = detect_collisions(cloud, options.eps_space, options.eps_param, options.threads);
        report.n_samples += cloud.size();

        const bool embedding = is_embedding(delta, kind);
        const bool found = !pairs.empty();
        const bool agree = found != embedding;
        // Shallow intersections just past the threshold are below grid resolution.
        const bool hard = !(value > threshold && value - threshold < near_threshold_window);

        double mismatch = 0.0;
        bool family_ok = true;
        if (kind == RealizationKind::simple) {
            const double dr = 2.0 * value / static_cast<double>(options.nr);
            for (const auto& p : pairs) mismatch = std::max(mismatch, glued_family_mismatch(p, dt, dr));
            family_ok = mismatch <= family_tolerance_cells;
        }
        if (hard) {
            report.pass = report.pass && agree && family_ok;
            worst_mismatch = std::max(worst_mismatch, mismatch);
        }

        nlohmann::ordered_json entry = {{"delta", value},
                                        {"expected_embedding", embedding},
                                        {"collisions", pairs.size()},
                                        {"agree", agree},
                                        {"hard_assertion", hard}};
        if (kind == RealizationKind::simple) {
            entry["family_mismatch_cells"] = mismatch;
            entry["family_ok"] = family_ok;
        }
        if (const auto profile = collision_z_profile(pairs)) {
            entry["z_min_abs"] = profile->z_min_abs;
            entry["z_max_abs"] = profile->z_max_abs;
            entry["max_axis_deviation"] = profile->max_axis_deviation;
        }
        entries.push_back(std::move(entry));
    }
    report.worst_residual = worst_mismatch;
    report.params = {{"kind", std::string(to_string(kind))},
                     {"nt", options.nt},
                     {"nr", options.nr},
                     {"eps_space", options.eps_space},
                     {"eps_param", options.eps_param},
                     {"threshold", threshold},
                     {"near_threshold_window", near_threshold_window},
                     {"family_tolerance_cells", family_tolerance_cells},
                     {"deltas", std::move(entries)}};
    return report;
}

double min_max_by_search(double rho, std::size_t n_theta) {
    const double a = (rho - 1.0) * (rho - 1.0);
    const double b = (rho + 1.0) * (rho + 1.0);
    auto objective = [a, b](double theta) {
        const double c = std::cos(0.5 * theta);
        const double s = std::sin(0.5 * theta);
        return std::max(a / (c * c), b / (s * s));
    };
    // Midpoint nodes keep every evaluation inside the open interval (0, pi).
    auto scan = [&](double lo, double hi, double& best_theta) {
        double best = std::numeric_limits<double>::infinity();
        const double step = (hi - lo) / static_cast<double>(n_theta);
        for (std::size_t i = 0; i < n_theta; ++i) {
            const double theta = lo + step * (static_cast<double>(i) + 0.5);
            const double v = objective(theta);
            if (v < best) {
                best = v;
                best_theta = theta;
            }
        }
        return best;
    };
    double theta = 0.0;
    const double coarse = scan(0.0, pi, theta);
    const double step = pi / static_cast<double>(n_theta);
    const double fine = scan(std::max(0.0, theta - step), std::min(pi, theta + step), theta);
    return std::min(coarse, fine);
}

VerificationReport verify_min_max(std::span<const double> rhos, std::size_t n_theta) {
    constexpr double tol = 1e-6;
    if (n_theta < 1000) throw UsageError("verify_min_max: n_theta must be at least 1000");
    VerificationReport report;
    report.check = "min_max";
    report.pass = true;
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const double rho : rhos) {
        const double searched = min_max_by_search(rho, n_theta);
        const double closed = min_max_r_squared(rho);
        const double diff = std::abs(searched - closed);
        report.pass = report.pass && diff <= tol;
        report.worst_residual = std::max(report.worst_residual, diff);
        report.n_samples += 2 * n_theta;
        entries.push_back({{"rho", rho}, {"search", searched}, {"closed_form", closed}, {"diff", diff}});
    }
    report.params = {{"n_theta", n_theta}, {"tolerance", tol}, {"rhos", std::move(entries)}};
    return report;
}

}  // namespace moebius
