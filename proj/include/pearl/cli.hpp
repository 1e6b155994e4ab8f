#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pearl/geom.hpp"
#include "pearl/necklace.hpp"
#include "pearl/orbit.hpp"

namespace pearl::cli {

struct SphereList {
    std::vector<Sphere> spheres;
};

struct CircleSpec {
    int n = 6;
    double radius = 1.0;
};

struct TorusKnotSpec {
    int p = 2;
    int q = 3;
    double major = 2.0;
    double minor = 1.0;
    int samples = 4000;
    double phase = 0.0;
    int pearls = 40;
};

struct PolygonSpec {
    std::vector<Point> vertices;         // used when torus_knot is empty
    std::optional<TorusKnotSpec> torus_knot;
};

using NecklaceSpec = std::variant<SphereList, CircleSpec, PolygonSpec>;

struct RunConfig {
    NecklaceSpec necklace = CircleSpec{};
    double tolerance = 1e-9;
    double epsilon = 1e-2;
    int max_depth = 40;
    std::uint64_t budget = kDefaultBudget;
    std::string out;     // empty: standard output
    std::string format;  // "ply" or "xyz" for clouds; empty: from the extension
};

// Reads a config document; throws ConfigError on anything malformed.
// Layout:
//   {"necklace": {"spheres": [{"c": [x, y, z], "r": r}, ...]}
//              | {"circle": {"n": 6, "R": 1}}
//              | {"polygon": {"vertices": [[x, y, z], ...]}}
//              | {"polygon": {"torus_knot": {"p", "q", "major", "minor",
//                                            "samples", "phase", "pearls"}}},
//    "tolerance": 1e-9, "epsilon": 1e-2, "max_depth": 40, "budget": 10000000,
//    "output": {"path": "cloud.ply", "format": "ply"}}
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

Necklace build_necklace(const RunConfig& config);

// Worker cap from PEARL_THREADS; 0 (hardware concurrency) when unset.
unsigned thread_cap();

// Entry point of the `pearl` tool. Errors go to `err` as
// {"error": name, "message": text, "indices": [...]}.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pearl::cli
