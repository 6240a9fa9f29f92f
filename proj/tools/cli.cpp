#include "moebius/cli.hpp"

#include "moebius/closed_form.hpp"
#include "moebius/errors.hpp"
#include "moebius/mesh.hpp"
#include "moebius/oracle.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace moebius::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double default_delta = 0.6;

double parse_atom(std::string_view text) {
    if (text == "pi") return pi;
    if (text == "sqrt2") return sqrt2;
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (text.empty() || res.ec != std::errc{} || res.ptr != end || !std::isfinite(value)) {
        throw UsageError("not a number: '" + std::string(text) + "'");
    }
    return value;
}

// Integral doubles print as JSON integers, so {0, 2} reads [0,2].
ordered_json json_number(double v) {
    if (v == std::trunc(v) && std::abs(v) < 0x1.0p53) return static_cast<std::int64_t>(v);
    return v;
}

ordered_json cross_section_json(const CrossSection& cs) {
    return std::visit(
        [](const auto& value) -> ordered_json {
            using T = std::decay_t<decltype(value)>;
            if constexpr (std::is_same_v<T, CrossSection::Empty>) {
                return {{"empty", true}};
            } else if constexpr (std::is_same_v<T, CrossSection::Finite>) {
                ordered_json arr = ordered_json::array();
                for (const double z : value.values) arr.push_back(json_number(z));
                return {{"finite", arr}};
            } else if constexpr (std::is_same_v<T, CrossSection::Interval>) {
                return {{"interval", {{"lo", json_number(value.lo)}, {"hi", json_number(value.hi)}, {"closed", value.closed}}}};
            } else {
                return {{"all_reals", true}};
            }
        },
        cs.value());
}

HalfWidth parse_delta(const std::string& text, bool allow_infinite) {
    if (text == "inf" || text == "infinite") {
        if (!allow_infinite) throw UsageError("this command needs a finite --delta");
        return HalfWidth::infinite();
    }
    return HalfWidth::finite(parse_number(text));
}

RealizationKind parse_kind(const std::string& text) {
    if (const auto kind = parse_realization_kind(text)) return *kind;
    throw UsageError("--kind must be 'simple' or 'common'");
}

unsigned parse_threads(const Environment& env) {
    if (!env.threads) return resolve_threads(0);
    const std::string& s = *env.threads;
    unsigned value = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || value == 0) {
        throw UsageError("MOEBIUS_THREADS must be a positive integer");
    }
    return value;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
    if (out.empty()) throw UsageError("empty list");
    return out;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot open output file '" + path + "'");
    return file;
}

std::string fmt12(double v) { return format_number(v, 12); }

ordered_json mesh_summary(const SurfaceMesh& mesh) {
    const MeshTopology topo = analyze_topology(mesh);
    return {{"vertices", topo.vertices},
            {"edges", topo.edges},
            {"faces", topo.faces},
            {"euler_characteristic", topo.euler_characteristic},
            {"boundary_loops", topo.boundary_loop_lengths},
            {"welded", mesh.welded}};
}

ordered_json mesh_json(const SurfaceMesh& mesh) {
    ordered_json vertices = ordered_json::array();
    for (const auto& v : mesh.vertices) vertices.push_back({v.x, v.y, v.z});
    return {{"vertices", std::move(vertices)}, {"faces", mesh.faces}};
}

void write_mesh(std::ostream& out, const SurfaceMesh& mesh, const std::string& format) {
    if (format == "json") {
        out << mesh_json(mesh).dump() << '\n';
    } else {
        write_obj(out, mesh);
    }
}

struct VerifyConfig {
    std::string suite = "all";
    std::string delta = "0.6";
    std::string kind = "simple";
    std::uint64_t seed = 7;
    std::size_t samples = 1'000'000;
    std::size_t grid = default_oracle_grid;
    std::size_t n_scan = 100'000;
    std::size_t n_theta = 100'000;
    std::string deltas;
    std::string rhos = "0,0.1,1,2";
};

int cmd_verify(const VerifyConfig& cfg, unsigned threads, std::ostream& out) {
    static const std::vector<std::string> suites{"graph", "axis", "embedding", "minmax", "all"};
    if (std::find(suites.begin(), suites.end(), cfg.suite) == suites.end()) {
        throw UsageError("--suite must be one of graph, axis, embedding, minmax, all");
    }
    const HalfWidth delta = parse_delta(cfg.delta, false);
    const RealizationKind kind = parse_kind(cfg.kind);
    const bool all = cfg.suite == "all";

    std::vector<VerificationReport> reports;
    if (all || cfg.suite == "graph") reports.push_back(verify_graph_identity(delta, cfg.samples, cfg.seed, threads));
    if (all || cfg.suite == "axis") reports.push_back(verify_axis_segment(delta, cfg.n_scan, 512, threads));
    if (all || cfg.suite == "embedding") {
        std::vector<double> deltas;
        if (!cfg.deltas.empty()) {
            deltas = parse_list(cfg.deltas);
        } else if (kind == RealizationKind::simple) {
            deltas = {1.0, 1.41, 1.5, 1.97, 2.5};
        } else {
            deltas = {1.9, 2.0, 2.5};
        }
        EmbeddingScanOptions opts;
        opts.nt = opts.nr = cfg.grid;
        opts.threads = threads;
        reports.push_back(verify_embedding_threshold(kind, deltas, opts));
    }
    if (all || cfg.suite == "minmax") {
        const auto rhos = parse_list(cfg.rhos);
        reports.push_back(verify_min_max(rhos, cfg.n_theta));
    }

    bool pass = true;
    ordered_json list = ordered_json::array();
    for (const auto& r : reports) {
        pass = pass && r.pass;
        list.push_back(r.to_json());
    }
    ordered_json doc;
    doc["suite"] = cfg.suite;
    doc["pass"] = pass;
    doc["delta"] = delta.value();
    doc["seed"] = cfg.seed;
    doc["reports"] = std::move(list);
    if (all) {
        // Informational: simple-map collision profile at the requested delta.
        const SampleCloud cloud = build_cloud(RealizationKind::simple, delta, cfg.grid, cfg.grid, threads);
        const auto pairs = detect_collisions(cloud, default_eps_space, default_eps_param, threads);
        ordered_json profile = {{"grid", cfg.grid},
                                {"eps_space", default_eps_space},
                                {"eps_param", default_eps_param},
                                {"s_delta", s_delta(delta)},
                                {"count", pairs.size()}};
        if (const auto p = collision_z_profile(pairs)) {
            profile["z_min_abs"] = p->z_min_abs;
            profile["z_max_abs"] = p->z_max_abs;
            profile["max_axis_deviation"] = p->max_axis_deviation;
        }
        doc["collision_profile"] = std::move(profile);
    }
    out << doc.dump(2) << '\n';
    return pass ? success : verification_failed;
}

}  // namespace

double parse_number(std::string_view text) {
    // term (('*' | '/') term)*, term := ['-' | '+'] atom
    double result = 1.0;
    char op = '*';
    std::size_t pos = 0;
    bool any = false;
    while (pos <= text.size()) {
        const std::size_t next = text.find_first_of("*/", pos);
        std::string_view term = text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
        double sign = 1.0;
        if (!term.empty() && (term.front() == '-' || term.front() == '+') &&
            (term.substr(1) == "pi" || term.substr(1) == "sqrt2")) {
            sign = term.front() == '-' ? -1.0 : 1.0;
            term.remove_prefix(1);
        }
        const double value = sign * parse_atom(term);
        if (op == '*') {
            result *= value;
        } else {
            if (value == 0.0) throw UsageError("division by zero in '" + std::string(text) + "'");
            result /= value;
        }
        any = true;
        if (next == std::string_view::npos) break;
        op = text[next];
        pos = next + 1;
    }
    if (!any) throw UsageError("empty number");
    return result;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env) {
    CLI::App app{"Moebius strip realizations: evaluation, closed forms, numerical verification, meshes"};
    app.name("moebius");
    app.require_subcommand(1);

    std::string kind = "simple";
    std::string t_text, r_text, x_text, y_text;
    std::string delta_text = "0.6";
    std::string out_path;
    std::string format;
    std::size_t nt = 0, nr = 0, resolution = 256;
    bool weld = false;
    std::string bbox_text = "-3,5,-4,4";
    VerifyConfig vcfg;

    auto* eval = app.add_subcommand("eval", "Evaluate a realization map at (t, r)");
    eval->add_option("--kind", kind, "simple or common")->capture_default_str();
    eval->add_option("--t", t_text, "angle t")->required();
    eval->add_option("--r", r_text, "offset r")->required();

    auto* verify = app.add_subcommand("verify", "Run numerical verification suites; JSON report");
    verify->add_option("--suite", vcfg.suite, "graph, axis, embedding, minmax or all")->capture_default_str();
    verify->add_option("--delta", vcfg.delta, "half-width")->capture_default_str();
    verify->add_option("--kind", vcfg.kind, "map for the embedding suite")->capture_default_str();
    verify->add_option("--seed", vcfg.seed, "sampling seed")->capture_default_str();
    verify->add_option("--samples", vcfg.samples, "graph-identity samples")->capture_default_str();
    verify->add_option("--grid", vcfg.grid, "oracle grid size (nt = nr)")->capture_default_str();
    verify->add_option("--n-scan", vcfg.n_scan, "axis scan nodes")->capture_default_str();
    verify->add_option("--n-theta", vcfg.n_theta, "min-max grid nodes")->capture_default_str();
    verify->add_option("--deltas", vcfg.deltas, "comma-separated half-widths for the embedding suite");
    verify->add_option("--rhos", vcfg.rhos, "comma-separated rho values for the min-max suite")->capture_default_str();

    auto* mesh = app.add_subcommand("mesh", "Tessellate a realization");
    mesh->add_option("--kind", kind)->capture_default_str();
    mesh->add_option("--delta", delta_text)->capture_default_str();
    mesh->add_option("--nt", nt, "columns (default 256)");
    mesh->add_option("--nr", nr, "rows (default 16)");
    mesh->add_flag("--weld", weld, "identify the seam (Moebius topology)");
    mesh->add_option("--out", out_path, "output file (stdout when omitted)");
    mesh->add_option("--format", format, "obj or json")->check(CLI::IsMember({"obj", "json"}));

    auto* patches = app.add_subcommand("patches", "Meshes of the four patches around the self-intersection set");
    patches->add_option("--delta", delta_text)->capture_default_str();
    patches->add_option("--nt", nt, "columns per patch (default 48)");
    patches->add_option("--nr", nr, "rows per patch (default 16)");
    patches->add_option("--out", out_path, "file prefix; writes <prefix>_<patch>.<format>");
    patches->add_option("--format", format, "obj or json")->check(CLI::IsMember({"obj", "json"}));

    auto* region = app.add_subcommand("region", "Boundary polylines of the graph domain {g <= delta^2}");
    region->add_option("--delta", delta_text)->capture_default_str();
    region->add_option("--bbox", bbox_text, "xmin,xmax,ymin,ymax")->capture_default_str();
    region->add_option("--resolution", resolution, "cells per axis")->capture_default_str();
    region->add_option("--out", out_path, "output file (stdout when omitted)");
    region->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* cross = app.add_subcommand("cross-section", "Vertical cross-section Z(x, y) as JSON");
    cross->add_option("--kind", kind)->capture_default_str();
    cross->add_option("--x", x_text)->required();
    cross->add_option("--y", y_text)->required();
    cross->add_option("--delta", delta_text, "half-width for the simple map; 'inf' for the unbounded strip")
        ->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return usage_error;
    }

    try {
        const unsigned threads = parse_threads(env);

        if (eval->parsed()) {
            const RealizationKind k = parse_kind(kind);
            const Point3 p = evaluate(k, {parse_number(t_text), parse_number(r_text)});
            out << fmt12(p.x) << ' ' << fmt12(p.y) << ' ' << fmt12(p.z) << '\n';
            return success;
        }
        if (verify->parsed()) return cmd_verify(vcfg, threads, out);

        if (mesh->parsed()) {
            const SurfaceMesh m = tessellate(parse_kind(kind), parse_delta(delta_text, false), nt ? nt : 256,
                                             nr ? nr : 16, weld);
            const std::string fmt = format.empty() ? "obj" : format;
            if (out_path.empty()) {
                write_mesh(out, m, fmt);
            } else {
                auto file = open_output(out_path);
                write_mesh(file, m, fmt);
                ordered_json summary = mesh_summary(m);
                summary["out"] = out_path;
                out << summary.dump() << '\n';
            }
            return success;
        }

        if (patches->parsed()) {
            const HalfWidth delta = parse_delta(delta_text, false);
            const auto specs = figure_patch_specs(delta);
            const auto meshes = figure_patches(delta, nt ? nt : 48, nr ? nr : 16);
            const std::string fmt = format.empty() ? "obj" : format;
            ordered_json doc = ordered_json::array();
            for (std::size_t k = 0; k < specs.size(); ++k) {
                const auto& s = specs[k];
                ordered_json entry = {{"name", s.name},
                                      {"t_range", {s.t_lo, s.t_hi}},
                                      {"t_hi_open", s.t_hi_open},
                                      {"r_range", {s.r_lo, s.r_hi}},
                                      {"h2", s.h2},
                                      {"h3", s.h3}};
                if (!out_path.empty()) {
                    const std::string path = out_path + "_" + s.name + "." + fmt;
                    auto file = open_output(path);
                    write_mesh(file, meshes[k], fmt);
                    entry["out"] = path;
                }
                doc.push_back(std::move(entry));
            }
            out << doc.dump() << '\n';
            return success;
        }

        if (region->parsed()) {
            const auto box = parse_list(bbox_text);
            if (box.size() != 4) throw UsageError("--bbox needs four numbers: xmin,xmax,ymin,ymax");
            const auto lines =
                region_boundary(parse_delta(delta_text, false), BBox2{box[0], box[1], box[2], box[3]}, resolution);
            std::ostringstream body;
            if (format == "json") {
                ordered_json doc = ordered_json::array();
                for (const auto& line : lines) {
                    ordered_json pts = ordered_json::array();
                    for (const auto& p : line.points) pts.push_back({p.x, p.y});
                    doc.push_back({{"closed", line.closed}, {"points", std::move(pts)}});
                }
                body << doc.dump() << '\n';
            } else {
                write_polylines_csv(body, lines);
            }
            if (out_path.empty()) {
                out << body.str();
            } else {
                auto file = open_output(out_path);
                file << body.str();
                out << ordered_json{{"polylines", lines.size()}, {"out", out_path}}.dump() << '\n';
            }
            return success;
        }

        if (cross->parsed()) {
            const double x = parse_number(x_text);
            const double y = parse_number(y_text);
            const RealizationKind k = parse_kind(kind);
            const CrossSection cs = k == RealizationKind::common
                                        ? cross_section_common(x, y)
                                        : cross_section_simple(x, y, parse_delta(delta_text, true));
            out << cross_section_json(cs).dump() << '\n';
            return success;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    }
    err << app.help();
    return usage_error;
}

}  // namespace moebius::cli
