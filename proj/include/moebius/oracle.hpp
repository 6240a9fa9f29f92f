#pragma once

// Brute-force numerical checks of the closed forms. Nothing here derives
// expected values from the closed-form module; closed forms are only the
// quantities under test.

#include "moebius/core_maps.hpp"

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace moebius {

/// splitmix64: state += 0x9e3779b97f4a7c15, then the standard finalizer.
/// The i-th output depends only on (seed, i), so streams split across threads
/// reproduce the sequential stream.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept;
    /// Uniform double in [0, 1) from the top 53 bits.
    double next_unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Output number `index` (0-based) of a fresh generator seeded with `seed`.
    static std::uint64_t at(std::uint64_t seed, std::uint64_t index) noexcept;
    static double unit_at(std::uint64_t seed, std::uint64_t index) noexcept {
        return static_cast<double>(at(seed, index) >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

struct SampleCloud {
    RealizationKind kind = RealizationKind::simple;
    double delta = 0.0;
    std::size_t nt = 0;
    std::size_t nr = 0;
    std::vector<ParamPoint> params;  // index i * (nr + 1) + j
    std::vector<Point3> points;

    std::size_t size() const noexcept { return points.size(); }
};

struct CollisionPair {
    ParamPoint a;  // a precedes b in (t, r) order
    ParamPoint b;
    double spatial_gap = 0.0;
    double param_gap = 0.0;
    Point3 midpoint;

    friend bool operator==(const CollisionPair&, const CollisionPair&) = default;
};

struct CollisionProfile {
    std::size_t count = 0;
    double z_min_abs = 0.0;
    double z_max_abs = 0.0;
    double max_axis_deviation = 0.0;  // distance of midpoints from the line (-1, 0, .)
};

struct VerificationReport {
    std::string check;
    bool pass = false;
    double worst_residual = 0.0;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    std::size_t n_samples = 0;

    nlohmann::ordered_json to_json() const;
};

inline constexpr double default_eps_space = 1e-3;
inline constexpr double default_eps_param = 0.1;
inline constexpr std::size_t default_oracle_grid = 1024;
/// Distance from a threshold (sqrt2 or 2) below which embedding checks are informational.
inline constexpr double near_threshold_window = 0.02;
/// Collision parameters must sit within this many grid cells of the glued-pair family.
inline constexpr double family_tolerance_cells = 8.0;

/// 0 selects std::thread::hardware_concurrency().
unsigned resolve_threads(unsigned requested) noexcept;

/// t_i = 2pi i / nt (i < nt), r_j = -delta + 2 delta j / nr (j <= nr).
/// Throws UsageError if nt < 4 or nr < 1.
SampleCloud build_cloud(RealizationKind kind, HalfWidth delta, std::size_t nt, std::size_t nr,
                        unsigned threads = 1);

/// All pairs with 3D distance <= eps_space and param_distance >= eps_param,
/// found with a uniform spatial hash of cell size eps_space. Sorted by
/// (a.t, a.r, b.t, b.r).
std::vector<CollisionPair> detect_collisions(const SampleCloud& cloud, double eps_space,
                                             double eps_param, unsigned threads = 1);

/// Quadratic all-pairs reference for detect_collisions.
std::vector<CollisionPair> detect_collisions_all_pairs(const SampleCloud& cloud, double eps_space,
                                                       double eps_param);

/// nullopt for an empty pair list.
std::optional<CollisionProfile> collision_z_profile(std::span<const CollisionPair> pairs);

/// Smallest normalized distance, in grid cells, from the pair's parameters to an
/// exact member of the glued-pair family (any branch, either ordering). Searches
/// t1 within `search_cells` cells of each sample.
double glued_family_mismatch(const CollisionPair& pair, double dt, double dr,
                             double search_cells = 2.0 * family_tolerance_cells);

/// Seeded check that the simple map lands on the graph of the rational function
/// inside its domain. Adds fixed samples next to the seam.
VerificationReport verify_graph_identity(HalfWidth delta, std::size_t n_samples,
                                         std::uint64_t seed, unsigned threads = 1);

/// Scans t with r = -2cos(t/2) over {2|cos(t/2)| <= delta}; compares the attained
/// z range with the closed-form axis segment. Also checks that cloud points
/// landing on the axis stay inside it.
VerificationReport verify_axis_segment(HalfWidth delta, std::size_t n_scan,
                                       std::size_t cloud_grid = 512, unsigned threads = 1);

struct EmbeddingScanOptions {
    std::size_t nt = default_oracle_grid;
    std::size_t nr = default_oracle_grid;
    double eps_space = default_eps_space;
    double eps_param = default_eps_param;
    unsigned threads = 1;
};

/// Compares collision emptiness with the closed-form embedding predicate for each
/// delta. SIMPLE collisions must also match the glued-pair family.
VerificationReport verify_embedding_threshold(RealizationKind kind, std::span<const double> deltas,
                                              const EmbeddingScanOptions& options = {});

/// Grid-minimizes max(((rho-1)/cos(theta/2))^2, ((rho+1)/sin(theta/2))^2) over
/// (0, pi), refines once around the best node, compares with the closed form.
/// Throws UsageError if n_theta < 1000.
VerificationReport verify_min_max(std::span<const double> rhos, std::size_t n_theta);

/// Closed-form-free minimizer used by verify_min_max.
double min_max_by_search(double rho, std::size_t n_theta);

}  // namespace moebius
