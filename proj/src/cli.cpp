#include "pearl/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pearl/coding.hpp"
#include "pearl/error.hpp"
#include "pearl/fibration.hpp"
#include "pearl/homogeneity.hpp"
#include "pearl/io.hpp"

namespace pearl::cli {

using nlohmann::json;

namespace {

Point read_point(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(what + " must be an array of three numbers");
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError(what + " must be an array of three numbers");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <class T>
T field(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("bad value for \"") + key + "\"");
    }
}

NecklaceSpec read_necklace(const json& j) {
    if (!j.is_object() || j.size() != 1) {
        throw ConfigError("necklace must have exactly one of spheres, circle, polygon");
    }
    const auto& [key, body] = *j.items().begin();
    if (key == "spheres") {
        if (!body.is_array()) throw ConfigError("spheres must be an array");
        SphereList list;
        for (const auto& s : body) {
            if (!s.is_object() || !s.contains("c") || !s.contains("r") || !s["r"].is_number()) {
                throw ConfigError("each sphere needs \"c\" and \"r\"");
            }
            try {
                list.spheres.emplace_back(read_point(s["c"], "sphere center"), s["r"].get<double>());
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
        return list;
    }
    if (key == "circle") {
        if (!body.is_object()) throw ConfigError("circle must be an object");
        return CircleSpec{field(body, "n", 6), field(body, "R", 1.0)};
    }
    if (key == "polygon") {
        if (!body.is_object()) throw ConfigError("polygon must be an object");
        PolygonSpec poly;
        if (body.contains("vertices") == body.contains("torus_knot")) {
            throw ConfigError("polygon needs exactly one of vertices, torus_knot");
        }
        if (body.contains("vertices")) {
            if (!body["vertices"].is_array()) throw ConfigError("vertices must be an array");
            for (const auto& v : body["vertices"]) poly.vertices.push_back(read_point(v, "vertex"));
        } else {
            const json& t = body["torus_knot"];
            TorusKnotSpec d;
            poly.torus_knot = TorusKnotSpec{field(t, "p", d.p),         field(t, "q", d.q),
                                            field(t, "major", d.major), field(t, "minor", d.minor),
                                            field(t, "samples", d.samples), field(t, "phase", d.phase),
                                            field(t, "pearls", d.pearls)};
        }
        return poly;
    }
    throw ConfigError("unknown necklace kind \"" + key + "\"");
}

std::ostream& sink(const RunConfig& config, std::ostream& out, std::ofstream& file) {
    if (config.out.empty()) return out;
    file.open(config.out, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file " + config.out);
    return file;
}

json point_json(const Point& p) { return json::array({p.x, p.y, p.z}); }

void report_error(std::ostream& err, const std::string& name, const std::string& message,
                  const std::vector<int>& indices = {}) {
    err << json{{"error", name}, {"message", message}, {"indices", indices}}.dump() << '\n';
}

std::vector<Point> read_ply_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return io::read_ply(in);
    } catch (const std::runtime_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig c;
    if (!doc.contains("necklace")) throw ConfigError("config has no necklace");
    c.necklace = read_necklace(doc["necklace"]);
    c.tolerance = field(doc, "tolerance", c.tolerance);
    c.epsilon = field(doc, "epsilon", c.epsilon);
    c.max_depth = field(doc, "max_depth", c.max_depth);
    c.budget = field(doc, "budget", c.budget);
    if (doc.contains("output")) {
        const json& o = doc["output"];
        c.out = field(o, "path", std::string{});
        c.format = field(o, "format", std::string{});
    }
    if (!(c.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    if (!(c.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (c.max_depth < 1) throw ConfigError("max_depth must be at least 1");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(doc);
}

Necklace build_necklace(const RunConfig& config) {
    return std::visit(
        [&](const auto& spec) -> Necklace {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, SphereList>) {
                return validate(spec.spheres, config.tolerance);
            } else if constexpr (std::is_same_v<T, CircleSpec>) {
                return unknot_necklace(spec.n, spec.radius);
            } else {
                try {
                    if (spec.torus_knot) {
                        const auto& t = *spec.torus_knot;
                        const auto curve = torus_knot_curve(t.p, t.q, t.major, t.minor, t.samples, t.phase);
                        return necklace_from_polygon(resample_equal_chords(curve, t.pearls), config.tolerance);
                    }
                    return necklace_from_polygon(PolygonalKnot(spec.vertices), config.tolerance);
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(e.what());
                }
            }
        },
        config.necklace);
}

unsigned thread_cap() {
    const char* env = std::getenv("PEARL_THREADS");
    if (env == nullptr || *env == '\0') return 0;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 1024) throw ConfigError("PEARL_THREADS must be a positive integer");
    return static_cast<unsigned>(v);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pearl necklace limit sets: stages, clouds, codings and fiber counts", "pearl"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_path;
    std::optional<double> epsilon;
    std::optional<int> depth;
    std::optional<std::uint64_t> budget;
    std::optional<double> tol;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "Output file (default: standard output)");
    app.add_option("--epsilon", epsilon, "Pruning radius for clouds")->check(CLI::PositiveNumber);
    app.add_option("--depth", depth, "Maximum depth for clouds, resolution for homog")
        ->check(CLI::PositiveNumber);
    app.add_option("--budget", budget, "Node budget")->check(CLI::PositiveNumber);
    app.add_option("--tol", tol, "Tangency tolerance")->check(CLI::PositiveNumber);

    auto* validate_cmd = app.add_subcommand("validate", "Check the necklace and list its tangencies");
    int stage_k = 1;
    auto* stage_cmd = app.add_subcommand("stage", "Stage pearl counts, parity and nesting");
    stage_cmd->add_option("k", stage_k, "Stage")->required()->check(CLI::PositiveNumber);
    std::string format;
    auto* cloud_cmd = app.add_subcommand("cloud", "Point cloud of the limit set (PLY or XYZ)");
    cloud_cmd->add_option("--format", format, "ply or xyz")->check(CLI::IsMember({"ply", "xyz"}));
    int template_k = 1;
    auto* template_cmd = app.add_subcommand("template", "Stage template polyline as OBJ");
    template_cmd->add_option("k", template_k, "Stage")->required()->check(CLI::PositiveNumber);
    int coords_k = 1;
    auto* coords_cmd = app.add_subcommand("coords", "Necklace coordinates of stage pearls as CSV");
    coords_cmd->add_option("k", coords_k, "Stage")->required()->check(CLI::PositiveNumber);
    std::string homog_p;
    std::string homog_q;
    std::size_t samples = 500;
    auto* homog_cmd = app.add_subcommand("homog", "Limit set map sending point_of(p) to point_of(q)");
    homog_cmd->add_option("p", homog_p, "Source address, e.g. 1.2")->required();
    homog_cmd->add_option("q", homog_q, "Target address")->required();
    homog_cmd->add_option("--samples", samples, "Sample count for the checks");
    int fiber_n = 3;
    int fiber_g = 1;
    int fiber_k = 1;
    auto* fiber_cmd = app.add_subcommand("fiber", "Fiber surface bookkeeping");
    fiber_cmd->add_option("n", fiber_n, "Pearls")->required();
    fiber_cmd->add_option("g", fiber_g, "Genus of the base fiber")->required();
    fiber_cmd->add_option("k", fiber_k, "Stage")->required();
    std::string ply_a;
    std::string ply_b;
    auto* hausdorff_cmd = app.add_subcommand("hausdorff", "Hausdorff distance of two PLY clouds");
    hausdorff_cmd->add_option("a", ply_a, "First PLY file")->required()->check(CLI::ExistingFile);
    hausdorff_cmd->add_option("b", ply_b, "Second PLY file")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        report_error(err, "ConfigError", e.what());
        return 2;
    }

    try {
        RunConfig config;
        if (!config_path.empty()) config = load_config(config_path);
        if (!out_path.empty()) config.out = out_path;
        if (epsilon) config.epsilon = *epsilon;
        if (depth) config.max_depth = *depth;
        if (budget) config.budget = *budget;
        if (tol) config.tolerance = *tol;
        if (!format.empty()) config.format = format;

        std::ofstream file;

        if (*fiber_cmd) {
            const FiberStats s = fiber_stats(fiber_n, fiber_g, fiber_k);
            sink(config, out, file) << json{{"k", s.k},
                                            {"plain", s.copies_plain},
                                            {"mirror", s.copies_mirror},
                                            {"total", s.total_copies},
                                            {"euler_char", s.euler_char},
                                            {"genus", s.genus},
                                            {"base_genus", s.base_genus},
                                            {"arcs", arc_count(fiber_n, fiber_k)}}
                                           .dump()
                                    << '\n';
            return 0;
        }
        if (*hausdorff_cmd) {
            const auto a = read_ply_file(ply_a);
            const auto b = read_ply_file(ply_b);
            sink(config, out, file) << io::format_double(hausdorff(a, b)) << '\n';
            return 0;
        }

        const Necklace nk = build_necklace(config);

        if (*validate_cmd) {
            json tangencies = json::array();
            for (int i = 0; i < nk.size(); ++i) {
                tangencies.push_back({{"pearls", {i, (i + 1) % nk.size()}},
                                      {"point", point_json(nk.tangency_points()[static_cast<std::size_t>(i)])}});
            }
            sink(config, out, file) << json{{"valid", true},
                                            {"pearls", nk.size()},
                                            {"tolerance", nk.tolerance()},
                                            {"tangencies", tangencies}}
                                           .dump(2)
                                    << '\n';
        } else if (*stage_cmd) {
            const StageNecklace st = stage(nk, stage_k, config.budget);
            const ParityCounts parity = parity_counts(nk, stage_k);
            const NestingReport nest = nesting_check(nk, stage_k, config.tolerance, config.budget);
            sink(config, out, file)
                << json{{"k", stage_k},
                        {"pearls", st.nodes.size()},
                        {"parity", {{"plain", parity.plain}, {"mirror", parity.mirror}, {"total", parity.total()}}},
                        {"max_radius", max_radius(nk, stage_k, config.budget)},
                        {"nesting",
                         {{"ok", nest.ok()},
                          {"children_checked", nest.children_checked},
                          {"containment_violations", nest.containment_violations},
                          {"max_containment_violation", nest.max_containment_violation},
                          {"tangent_pairs", nest.tangent_pairs},
                          {"degree_violations", nest.degree_violations},
                          {"overlapping_pairs", nest.overlapping_pairs}}}}
                       .dump(2)
                << '\n';
        } else if (*cloud_cmd) {
            EnumerateOptions opts;
            opts.epsilon = config.epsilon;
            opts.max_depth = config.max_depth;
            opts.budget = config.budget;
            opts.threads = thread_cap();
            const LimitCloud cloud = enumerate_pruned(nk, opts);
            std::string fmt = config.format;
            if (fmt.empty()) {
                fmt = config.out.size() >= 4 && config.out.substr(config.out.size() - 4) == ".xyz" ? "xyz" : "ply";
            }
            if (fmt != "ply" && fmt != "xyz") throw ConfigError("unknown cloud format " + fmt);
            std::ostream& o = sink(config, out, file);
            if (fmt == "xyz") {
                io::write_xyz(o, cloud.points);
            } else {
                io::write_ply(o, cloud.points);
            }
        } else if (*template_cmd) {
            std::vector<Point> polyline;
            for (const auto& p : oriented_stage(nk, template_k, config.budget)) polyline.push_back(p.entry);
            io::write_obj_polyline(sink(config, out, file), polyline);
        } else if (*coords_cmd) {
            std::ostream& o = sink(config, out, file);
            io::write_csv_row(o, {"address", "position", "count", "lo", "hi", "x", "y", "z"});
            for (const auto& p : oriented_stage(nk, coords_k, config.budget)) {
                const Point x = point_from_coordinate(nk, p.interval.midpoint(), coords_k);
                io::write_csv_row(o, {to_string(p.address), std::to_string(p.interval.position),
                                      std::to_string(p.interval.count), io::format_double(p.interval.lo_value()),
                                      io::format_double(p.interval.hi_value()), io::format_double(x.x),
                                      io::format_double(x.y), io::format_double(x.z)});
            }
        } else if (*homog_cmd) {
            const int resolution = depth.value_or(6);
            const Point p = point_of(nk, parse_address(homog_p));
            const Point q = point_of(nk, parse_address(homog_q));
            const LambdaHomeo h = lambda_homeo(nk, p, q, resolution, config.tolerance);
            const HomeoReport r = verify_homeo(nk, h, samples, config.tolerance);
            out << json{{"source", point_json(p)},
                        {"target", point_json(q)},
                        {"image_of_source", point_json(apply(nk, h, p, config.tolerance))},
                        {"delta", {{"num", h.delta.num()}, {"den", h.delta.den()}}},
                        {"depth", r.depth},
                        {"samples", r.samples},
                        {"intervals", r.intervals},
                        {"intervals_checked", r.intervals_checked},
                        {"in_limit_failures", r.in_limit_failures},
                        {"injectivity_failures", r.injectivity_failures},
                        {"surjectivity_failures", r.surjectivity_failures},
                        {"adjacency_failures", r.adjacency_failures},
                        {"passed", r.passed()}}
                       .dump(2)
                << '\n';
            if (!config.out.empty()) {
                std::ostream& o = sink(config, out, file);
                io::write_csv_row(o, {"theta", "x", "y", "z", "hx", "hy", "hz"});
                for (std::size_t i = 0; i < samples; ++i) {
                    const Coordinate theta = sample_coordinate(i);
                    const Point x = point_from_coordinate(nk, theta, resolution);
                    const Point y = apply(nk, h, x, config.tolerance);
                    io::write_csv_row(o, {std::to_string(theta.num()) + "/" + std::to_string(theta.den()),
                                          io::format_double(x.x), io::format_double(x.y), io::format_double(x.z),
                                          io::format_double(y.x), io::format_double(y.y), io::format_double(y.z)});
                }
            }
        }
        if (file.is_open()) {
            file.close();
            if (!file) throw ConfigError("failed writing " + config.out);
        }
        return 0;
    } catch (const ConfigError& e) {
        report_error(err, e.name(), e.what(), e.indices());
        return 2;
    } catch (const Error& e) {
        report_error(err, e.name(), e.what(), e.indices());
        return 1;
    } catch (const std::invalid_argument& e) {
        report_error(err, "InvalidArgument", e.what());
        return 2;
    }
}

}  // namespace pearl::cli
