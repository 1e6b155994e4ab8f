#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "pearl/cli.hpp"
#include "pearl/error.hpp"
#include "pearl/io.hpp"

using namespace pearl;
using nlohmann::json;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run_tool(std::vector<std::string> args) {
    args.insert(args.begin(), "pearl");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() /
                ("pearl_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(file(name)) << text;
        return file(name);
    }

private:
    std::filesystem::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class ScopedEnv {
public:
    ScopedEnv(const char* name, const char* value) : name_(name) {
        if (const char* old = std::getenv(name)) old_ = old;
        if (value) {
            ::setenv(name, value, 1);
        } else {
            ::unsetenv(name);
        }
    }
    ~ScopedEnv() {
        if (old_) {
            ::setenv(name_, old_->c_str(), 1);
        } else {
            ::unsetenv(name_);
        }
    }

private:
    const char* name_;
    std::optional<std::string> old_;
};

}  // namespace

TEST(ParseConfig, Circle) {
    const auto c = cli::parse_config(json::parse(R"({"necklace": {"circle": {"n": 8, "R": 2.5}}, "epsilon": 0.001})"));
    const auto& spec = std::get<cli::CircleSpec>(c.necklace);
    EXPECT_EQ(spec.n, 8);
    EXPECT_DOUBLE_EQ(spec.radius, 2.5);
    EXPECT_DOUBLE_EQ(c.epsilon, 1e-3);
    EXPECT_DOUBLE_EQ(c.tolerance, 1e-9);
    EXPECT_EQ(c.max_depth, 40);
}

TEST(ParseConfig, SpheresAndOutput) {
    const auto c = cli::parse_config(json::parse(R"({
        "necklace": {"spheres": [{"c": [0, 0, 0], "r": 1}, {"c": [2, 0, 0], "r": 1}, {"c": [1, 1.7320508075688772, 0], "r": 1}]},
        "tolerance": 1e-6, "max_depth": 12, "budget": 1000,
        "output": {"path": "a.xyz", "format": "xyz"}})"));
    EXPECT_EQ(std::get<cli::SphereList>(c.necklace).spheres.size(), 3u);
    EXPECT_EQ(c.max_depth, 12);
    EXPECT_EQ(c.budget, 1000u);
    EXPECT_EQ(c.out, "a.xyz");
    EXPECT_EQ(c.format, "xyz");
    EXPECT_EQ(cli::build_necklace(c).size(), 3);
}

TEST(ParseConfig, TorusKnotPolygon) {
    const auto c = cli::parse_config(
        json::parse(R"({"necklace": {"polygon": {"torus_knot": {"p": 2, "q": 3, "pearls": 40, "phase": 0.1}}}})"));
    const auto& poly = std::get<cli::PolygonSpec>(c.necklace);
    ASSERT_TRUE(poly.torus_knot.has_value());
    EXPECT_EQ(poly.torus_knot->pearls, 40);
    EXPECT_EQ(poly.torus_knot->samples, 4000);
    EXPECT_EQ(cli::build_necklace(c).size(), 40);
}

TEST(ParseConfig, Malformed) {
    for (const char* text : {
             R"([])",
             R"({})",
             R"({"necklace": {}})",
             R"({"necklace": {"circle": {"n": 6}, "spheres": []}})",
             R"({"necklace": {"spheres": [{"c": [0, 0], "r": 1}]}})",
             R"({"necklace": {"spheres": [{"c": [0, 0, 0], "r": "x"}]}})",
             R"({"necklace": {"polygon": {"vertices": [[0,0,0]], "torus_knot": {}}}})",
             R"({"necklace": {"circle": {"n": 6}}, "tolerance": -1})",
             R"({"necklace": {"circle": {"n": 6}}, "epsilon": 0})",
             R"({"necklace": {"circle": {"n": 6}}, "max_depth": 0})",
         }) {
        EXPECT_THROW(cli::parse_config(json::parse(text)), ConfigError) << text;
    }
}

TEST(LoadConfig, MissingOrInvalidFile) {
    TempDir dir;
    EXPECT_THROW(cli::load_config(dir.file("absent.json")), ConfigError);
    EXPECT_THROW(cli::load_config(dir.write("bad.json", "{not json")), ConfigError);
}

TEST(ThreadCap, ReadsEnvironment) {
    {
        ScopedEnv env("PEARL_THREADS", nullptr);
        EXPECT_EQ(cli::thread_cap(), 0u);
    }
    {
        ScopedEnv env("PEARL_THREADS", "3");
        EXPECT_EQ(cli::thread_cap(), 3u);
    }
    {
        ScopedEnv env("PEARL_THREADS", "three");
        EXPECT_THROW(cli::thread_cap(), ConfigError);
    }
}

TEST(Run, Fiber) {
    const Result r = run_tool({"fiber", "3", "1", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["plain"], 7);
    EXPECT_EQ(j["mirror"], 3);
    EXPECT_EQ(j["total"], 10);
    EXPECT_EQ(j["genus"], 10);
    EXPECT_EQ(j["euler_char"], -19);
    EXPECT_EQ(j["arcs"], 9);
}

TEST(Run, StageOnDefaultCircle) {
    const Result r = run_tool({"stage", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["pearls"], 30);
    EXPECT_EQ(j["parity"]["total"], 1 + 6 + 30);
    EXPECT_TRUE(j["nesting"]["ok"].get<bool>());
}

TEST(Run, ValidateReportsTangencies) {
    TempDir dir;
    const auto cfg = dir.write("c.json", R"({"necklace": {"circle": {"n": 5, "R": 1}}})");
    const Result r = run_tool({"--config", cfg, "validate"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_TRUE(j["valid"].get<bool>());
    ASSERT_EQ(j["tangencies"].size(), 5u);
    const auto p = j["tangencies"][0]["point"];
    EXPECT_NEAR(std::hypot(p[0].get<double>(), p[1].get<double>()), 1.0, 1e-12);
}

TEST(Run, InvalidNecklaceIsStructuredError) {
    TempDir dir;
    const auto cfg = dir.write("c.json", R"({"necklace": {"spheres": [
        {"c": [1, 0, 0], "r": 0.5}, {"c": [0.5, 0.8660254037844386, 0], "r": 0.5},
        {"c": [-0.5, 0.8660254037844386, 0], "r": 0.4}, {"c": [-1, 0, 0], "r": 0.5},
        {"c": [-0.5, -0.8660254037844386, 0], "r": 0.5}, {"c": [0.5, -0.8660254037844386, 0], "r": 0.5}]}})");
    const Result r = run_tool({"--config", cfg, "validate"});
    EXPECT_EQ(r.code, 1);
    const json e = json::parse(r.err);
    EXPECT_EQ(e["error"], "NotTangent");
    EXPECT_EQ(e["indices"], json::array({1, 2}));
}

TEST(Run, BadArgumentsExitTwo) {
    EXPECT_EQ(run_tool({}).code, 2);
    EXPECT_EQ(run_tool({"bogus"}).code, 2);
    EXPECT_EQ(run_tool({"stage", "0"}).code, 2);
    const Result r = run_tool({"fiber", "2", "1", "1"});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(json::parse(r.err).contains("error"));
}

TEST(Run, CloudIsDeterministicAcrossThreadCounts) {
    TempDir dir;
    std::string reference;
    for (const char* threads : {"1", "4", "1"}) {
        ScopedEnv env("PEARL_THREADS", threads);
        const auto path = dir.file(std::string("cloud_") + threads + ".ply");
        const Result r = run_tool({"--epsilon", "0.01", "cloud", "--out", path});
        ASSERT_EQ(r.code, 0) << r.err;
        const std::string bytes = slurp(path);
        if (reference.empty()) reference = bytes;
        EXPECT_EQ(bytes, reference);
    }
    std::istringstream in(reference);
    EXPECT_GT(io::read_ply(in).size(), 100u);
}

TEST(Run, CloudXyzByExtension) {
    TempDir dir;
    const auto path = dir.file("c.xyz");
    ASSERT_EQ(run_tool({"--out", path, "--epsilon", "0.05", "cloud"}).code, 0);
    std::istringstream in(slurp(path));
    double x, y, z;
    ASSERT_TRUE(in >> x >> y >> z);
}

TEST(Run, TemplateAndCoords) {
    const Result t = run_tool({"template", "2"});
    ASSERT_EQ(t.code, 0) << t.err;
    std::istringstream obj(t.out);
    EXPECT_EQ(io::read_obj_polyline(obj).size(), 30u);

    const Result c = run_tool({"coords", "2"});
    ASSERT_EQ(c.code, 0) << c.err;
    std::istringstream csv(c.out);
    const auto rows = io::read_csv(csv);
    ASSERT_EQ(rows.size(), 31u);
    EXPECT_EQ(rows[0][0], "address");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i][1], std::to_string(i - 1));
        EXPECT_EQ(rows[i][2], "30");
    }
}

TEST(Run, Homog) {
    TempDir dir;
    const auto pairs = dir.file("pairs.csv");
    const Result r = run_tool({"--depth", "3", "--out", pairs, "homog", "1.2", "4.6.1", "--samples", "64"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_EQ(j["samples"], 64);
    std::istringstream csv(slurp(pairs));
    EXPECT_EQ(io::read_csv(csv).size(), 65u);
}

TEST(Run, HausdorffOfFiles) {
    TempDir dir;
    const auto a = dir.file("a.ply");
    const auto b = dir.file("b.ply");
    {
        std::ofstream fa(a);
        io::write_ply(fa, {{0, 0, 0}, {1, 0, 0}});
        std::ofstream fb(b);
        io::write_ply(fb, {{0, 0, 0}, {1, 0, 2}});
    }
    const Result r = run_tool({"hausdorff", a, b});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_DOUBLE_EQ(std::stod(r.out), 2.0);
}

TEST(Io, PlyRoundTripIsExact) {
    oracle::Rng rng(71);
    std::vector<Point> pts;
    for (int i = 0; i < 500; ++i) pts.push_back(rng.point(-1e3, 1e3) * rng.uniform(1e-9, 1));
    std::stringstream s;
    io::write_ply(s, pts);
    const auto back = io::read_ply(s);
    ASSERT_EQ(back.size(), pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        EXPECT_EQ(back[i].x, pts[i].x);
        EXPECT_EQ(back[i].y, pts[i].y);
        EXPECT_EQ(back[i].z, pts[i].z);
    }
}

TEST(Io, PlyRejectsGarbage) {
    std::istringstream in("not a ply\n");
    EXPECT_THROW(io::read_ply(in), std::runtime_error);
}

TEST(Io, ObjRoundTrip) {
    const std::vector<Point> v{{0, 0, 0}, {1, 0.5, 0}, {0.25, 1, -3}};
    std::stringstream s;
    io::write_obj_polyline(s, v);
    EXPECT_NE(s.str().find("l 1 2 3 1"), std::string::npos);
    const auto back = io::read_obj_polyline(s);
    ASSERT_EQ(back.size(), 3u);
    EXPECT_EQ(back[2].z, -3.0);
}

TEST(Io, CsvQuotingRoundTrip) {
    const std::vector<std::string> row{"plain", "with,comma", "with \"quote\"", "line\nbreak", ""};
    std::stringstream s;
    io::write_csv_row(s, row);
    io::write_csv_row(s, {"a", "b"});
    EXPECT_EQ(io::csv_field("a,b"), "\"a,b\"");
    const auto rows = io::read_csv(s);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], row);
    EXPECT_EQ(rows[1], (std::vector<std::string>{"a", "b"}));
}

TEST(Io, FormatDoubleRoundTrips) {
    oracle::Rng rng(72);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.uniform(-1, 1) * std::pow(10.0, rng.integer(-300, 300));
        EXPECT_EQ(std::stod(io::format_double(v)), v);
    }
    EXPECT_EQ(io::format_double(0.5), "0.5");
}
