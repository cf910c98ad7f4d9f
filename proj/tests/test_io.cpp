#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "evolutoid/io.hpp"

using namespace evolutoid;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("evolutoid_io_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_config(const fs::path& dir, const json& j) {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << j.dump(2);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " \"" EVOLUTOID_CLI_PATH "\" " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

int run_cfg(const std::string& sub, const fs::path& cfg, const fs::path& out, const std::string& extra = "",
            const std::string& env = "") {
    return run(sub + " --config \"" + cfg.string() + "\" --out \"" + out.string() + "\" " + extra, env);
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

json torus_cfg() {
    return {{"surface", "torus"}, {"params", {{"R", 2}, {"rho", 1}}}, {"alpha", kPi / 4}, {"grid", {{"nu", 16}, {"nv", 16}}}};
}

json ridge_cfg() {
    return {{"monge",
             {{"k1", 2}, {"k2", 1}, {"a30", 0.3}, {"a21", -0.4}, {"a12", 0.5}, {"a03", 0}, {"a40", 0.2},
              {"a31", -0.1}, {"a22", 0.3}, {"a13", 0.1}, {"a04", -0.2}}},
            {"alpha", kPi / 4},
            {"seed", {0, 0}}};
}

json a2_cfg() {
    return {{"monge", {{"k1", 2}, {"k2", 1}, {"a12", -1}, {"a03", 1}, {"a31", 0.4}}}, {"alpha", kPi / 4}};
}

std::vector<std::string> split(const std::string& l) {
    std::vector<std::string> out;
    std::istringstream in(l);
    for (std::string f; std::getline(in, f, ',');) out.push_back(f);
    return out;
}

}  // namespace

TEST(Config, ParsesNamedAndListParams) {
    const auto a = io::parse_config(torus_cfg());
    EXPECT_EQ(a.surface.name, "torus");
    EXPECT_EQ(a.surface.params, (std::vector<double>{2, 1}));
    const auto b = io::parse_config({{"surface", {{"name", "sphere"}, {"params", {3}}}}, {"branch", "betahalf"}});
    EXPECT_EQ(b.surface.params, std::vector<double>{3});
    EXPECT_EQ(b.branch, Branch::BetaHalfPi);
    const auto c = io::parse_config(a2_cfg());
    ASSERT_TRUE(c.surface.monge.has_value());
    EXPECT_EQ(c.surface.monge->a31, 0.4);
    EXPECT_EQ(c.surface.monge->a03, 1.0);
}

TEST(Config, Rejections) {
    auto code = [](const json& j) {
        try {
            io::parse_config(j);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::AssertionFailure;
    };
    EXPECT_EQ(code(json::array()), ErrorCode::ConfigError);
    EXPECT_EQ(code({{"alpha", 0.5}}), ErrorCode::ConfigError);
    EXPECT_EQ(code({{"surface", "torus"}, {"params", {2, 1}}, {"branch", "sideways"}}), ErrorCode::ConfigError);
    EXPECT_EQ(code({{"monge", {{"k1", 2}, {"k2", 1}, {"a99", 1}}}}), ErrorCode::ConfigError);
    EXPECT_EQ(code({{"surface", "klein"}, {"params", json::object()}}), ErrorCode::UnknownSurface);
    EXPECT_EQ(code({{"surface", "torus"}, {"params", {2, 1}}, {"tol", {{"bogus", 1}}}}), ErrorCode::ConfigError);
}

TEST(Config, GridInvariants) {
    const auto dom = torus_chart(2, 1).domain();
    io::GridConfig g;
    g.nu = 1;
    EXPECT_THROW(io::make_grid(g, dom), Error);
    g.nu = 4;
    const auto grid = io::make_grid(g, dom);
    EXPECT_TRUE(grid.wrap_u);
    EXPECT_DOUBLE_EQ(grid.u[1], kPi / 2);
    const auto sor = surface_of_revolution_chart({2, 0, 1}, {0, 1}, -1, 1).domain();
    io::GridConfig h;
    h.nu = 3;
    h.nv = 2;
    h.u_range = std::array<double, 2>{-2, 0};
    EXPECT_THROW(io::make_grid(h, sor), Error);
    h.u_range = std::array<double, 2>{-1, 1};
    EXPECT_EQ(io::make_grid(h, sor).u, (std::vector<double>{-1, 0, 1}));
}

TEST(Format, SeventeenSignificantDigits) {
    EXPECT_EQ(io::fmt17(3.0), "3.0000000000000000e+00");
    EXPECT_EQ(std::stod(io::fmt17(0.1)), 0.1);
    EXPECT_EQ(std::stod(io::fmt17(kPi)), kPi);
}

TEST(Mesh, TorusVertexAndSkipLog) {
    auto cfg = io::parse_config(torus_cfg());
    cfg.threads = 2;
    const auto m = io::build_mesh(cfg);
    EXPECT_LE(m.vertex_count, 256u);
    std::size_t skipped = 0;
    for (const auto& n : m.nodes) skipped += !n.ok;
    EXPECT_EQ(m.vertex_count + skipped, 256u);
    const auto& node = m.nodes[4 * 16 + 0];  // u = pi/2, v = 0
    ASSERT_TRUE(node.ok);
    EXPECT_NEAR(norm(node.point - Vec3d{0, 0, 3}), 0, 1e-12);
    for (const auto& f : m.faces)
        for (auto k : f) {
            EXPECT_GE(k, 1u);
            EXPECT_LE(k, m.vertex_count);
        }
    const json log = io::skiplog_json(m);
    EXPECT_EQ(log["skipped"].size(), skipped);
    for (const auto& s : log["skipped"]) EXPECT_FALSE(s["reason"].get<std::string>().empty());
}

TEST(Cli, MeshTorus) {
    const auto dir = scratch("mesh");
    const auto cfg = write_config(dir, torus_cfg());
    ASSERT_EQ(run_cfg("mesh", cfg, dir / "a"), 0);
    for (const char* f : {"evolutoid.obj", "base.obj", "skiplog.json", "attributes.csv"}) EXPECT_TRUE(fs::exists(dir / "a" / f));
    const auto obj = lines(slurp(dir / "a" / "evolutoid.obj"));
    int verts = 0;
    bool found = false;
    for (const auto& l : obj)
        if (l.rfind("v ", 0) == 0) {
            ++verts;
            std::istringstream in(l.substr(2));
            double x, y, z;
            in >> x >> y >> z;
            found |= std::abs(x) < 1e-12 && std::abs(y) < 1e-12 && std::abs(z - 3) < 1e-12;
        }
    EXPECT_LE(verts, 256);
    EXPECT_TRUE(found);
    const json log = json::parse(slurp(dir / "a" / "skiplog.json"));
    EXPECT_EQ(log["vertices"].get<int>(), verts);
    EXPECT_EQ(verts + static_cast<int>(log["skipped"].size()), 256);
    const auto attr = lines(slurp(dir / "a" / "attributes.csv"));
    EXPECT_EQ(static_cast<int>(attr.size()), verts + 1);
}

TEST(Cli, MeshGridOfOneIsConfigError) {
    const auto dir = scratch("mesh_bad");
    json j = torus_cfg();
    j["grid"]["nu"] = 1;
    EXPECT_EQ(run_cfg("mesh", write_config(dir, j), dir / "o"), 2);
}

TEST(Cli, ParameterAndChartErrors) {
    const auto dir = scratch("chart");
    json j = torus_cfg();
    j["params"] = {{"R", 1}, {"rho", 2}};
    EXPECT_EQ(run_cfg("mesh", write_config(dir, j), dir / "o"), 2);
    const json g = {{"surface", "surface_of_revolution"},
                    {"params", {{"u0", -1}, {"u1", 1}, {"x", {2, 0, 1}}, {"z", {0, 1}}}},
                    {"alpha", 0.6},
                    {"seed", {5, 0}}};
    EXPECT_EQ(run_cfg("singular", write_config(dir, g), dir / "o"), 3);
}

TEST(Cli, BadAlphaIsConfigError) {
    const auto dir = scratch("alpha");
    EXPECT_EQ(run_cfg("mesh", write_config(dir, torus_cfg()), dir / "o", "--alpha 2"), 2);
}

TEST(Cli, MeshDeterministicAcrossRunsAndThreads) {
    const auto dir = scratch("mesh_det");
    const auto cfg = write_config(dir, torus_cfg());
    ASSERT_EQ(run_cfg("mesh", cfg, dir / "a", "", "EVOLUTOID_THREADS=1"), 0);
    ASSERT_EQ(run_cfg("mesh", cfg, dir / "b", "", "EVOLUTOID_THREADS=1"), 0);
    ASSERT_EQ(run_cfg("mesh", cfg, dir / "c", "", "EVOLUTOID_THREADS=8"), 0);
    for (const char* f : {"evolutoid.obj", "base.obj", "skiplog.json", "attributes.csv"}) {
        EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
        EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "c" / f)) << f;
    }
}

TEST(Cli, SingularRidgeInstance) {
    const auto dir = scratch("sing");
    ASSERT_EQ(run_cfg("singular", write_config(dir, ridge_cfg()), dir / "o"), 0);
    const json rep = json::parse(slurp(dir / "o" / "report.json"));
    EXPECT_EQ(rep["seed_sample"]["class"], "CuspidalEdge");
    EXPECT_EQ(rep["seed_sample"]["t"].get<double>(), 0.0);
    const auto csv = lines(slurp(dir / "o" / "singular.csv"));
    ASSERT_FALSE(csv.empty());
    EXPECT_EQ(csv[0], "t,u,v,lambda,mu,mu_dot,class");
    EXPECT_EQ(csv.size() - 1, rep["samples"].get<std::size_t>());
    bool seed_row = false;
    for (std::size_t k = 1; k < csv.size(); ++k) {
        const auto f = split(csv[k]);
        ASSERT_EQ(f.size(), 7u);
        if (std::stod(f[0]) == 0.0) seed_row = f[6] == "CuspidalEdge";
    }
    EXPECT_TRUE(seed_row);
}

TEST(Cli, SingularSeedFlagOverridesConfig) {
    const auto dir = scratch("sing_flag");
    json j = ridge_cfg();
    j.erase("seed");
    const auto cfg = write_config(dir, j);
    EXPECT_EQ(run_cfg("singular", cfg, dir / "o"), 2);
    EXPECT_EQ(run_cfg("singular", cfg, dir / "o", "--seed 0,0"), 0);
    EXPECT_EQ(run_cfg("singular", cfg, dir / "o", "--seed '0;0'"), 2);
}

TEST(Cli, SingularRegularSeedExitsFour) {
    const auto dir = scratch("sing_regular");
    const json j = {{"surface", "surface_of_revolution"},
                    {"params", {{"u0", -1}, {"u1", 1}, {"x", {2, 0, 1}}, {"z", {0, 1}}}},
                    {"alpha", 0.6},
                    {"branch", "betahalf"},
                    {"seed", {0.3, 0.2}}};
    EXPECT_EQ(run_cfg("singular", write_config(dir, j), dir / "o"), 4);
}

TEST(Cli, SingularNormalForm) {
    const auto dir = scratch("sing_nf");
    const json j = {{"normal_form", "swallowtail"}, {"seed", {0, 0}}};
    ASSERT_EQ(run_cfg("singular", write_config(dir, j), dir / "o"), 0);
    EXPECT_EQ(json::parse(slurp(dir / "o" / "report.json"))["seed_sample"]["class"], "Swallowtail");
}

TEST(Cli, SingularDeterministicAcrossThreads) {
    const auto dir = scratch("sing_det");
    const auto cfg = write_config(dir, ridge_cfg());
    ASSERT_EQ(run_cfg("singular", cfg, dir / "a", "", "EVOLUTOID_THREADS=1"), 0);
    ASSERT_EQ(run_cfg("singular", cfg, dir / "b", "", "EVOLUTOID_THREADS=8"), 0);
    EXPECT_EQ(slurp(dir / "a" / "singular.csv"), slurp(dir / "b" / "singular.csv"));
    EXPECT_EQ(slurp(dir / "a" / "report.json"), slurp(dir / "b" / "report.json"));
}

TEST(Cli, ClassifyA2) {
    const auto dir = scratch("cls");
    ASSERT_EQ(run_cfg("classify", write_config(dir, a2_cfg()), dir / "o"), 0);
    const json rep = json::parse(slurp(dir / "o" / "report.json"));
    EXPECT_EQ(rep["height_class"], "A2");
    EXPECT_EQ(rep["regularity"], "Regular");
    for (const char* k : {"subparabolic", "asymptotic_residual", "parabolic_gradient", "witnesses", "local_expansion"})
        EXPECT_TRUE(rep.contains(k)) << k;
    EXPECT_TRUE(rep["witnesses"].contains("a31"));
}

TEST(Cli, ClassifySingularRidge) {
    const auto dir = scratch("cls_ridge");
    const json j = {{"monge", {{"k1", 2}, {"k2", 1}, {"a03", 0}}}, {"alpha", 0.7}};
    ASSERT_EQ(run_cfg("classify", write_config(dir, j), dir / "o"), 0);
    EXPECT_EQ(json::parse(slurp(dir / "o" / "report.json"))["regularity"], "SingularRidge");
}

TEST(Cli, ClassifyToleranceOverride) {
    const auto dir = scratch("cls_tol");
    const json j = {{"monge", {{"k1", 2}, {"k2", 1}, {"a03", 1e-4}}}, {"alpha", 0.5}};
    const auto cfg = write_config(dir, j);
    ASSERT_EQ(run_cfg("classify", cfg, dir / "a"), 0);
    EXPECT_EQ(json::parse(slurp(dir / "a" / "report.json"))["regularity"], "Regular");
    ASSERT_EQ(run_cfg("classify", cfg, dir / "b", "--tol classifier=1e-3"), 0);
    EXPECT_EQ(json::parse(slurp(dir / "b" / "report.json"))["regularity"], "SingularRidge");
    EXPECT_EQ(run_cfg("classify", cfg, dir / "c", "--tol classifier"), 2);
}

TEST(Cli, ClassifyMalformedJson) {
    const auto dir = scratch("cls_bad");
    std::ofstream(dir / "bad.json") << "{\"monge\": {\"k1\": 2,";
    EXPECT_EQ(run_cfg("classify", dir / "bad.json", dir / "o"), 2);
    EXPECT_EQ(run_cfg("classify", dir / "missing.json", dir / "o"), 2);
}

TEST(Cli, ClassifyUmbilicIsConfigError) {
    const auto dir = scratch("cls_umb");
    const json j = {{"monge", {{"k1", 1}, {"k2", 1}, {"a03", 1}}}, {"alpha", 0.7}};
    EXPECT_EQ(run_cfg("classify", write_config(dir, j), dir / "o"), 2);
}

TEST(Cli, SweepFocalLimit) {
    const auto dir = scratch("sweep");
    json j = {{"surface", "torus"},
              {"params", {{"R", 2}, {"rho", 1}, {"orientation", 1}}},
              {"grid", {{"u", {0.3, 1.2}}, {"v", {0.0, 1.0}}, {"nu", 4}, {"nv", 5}}}};
    json alphas = json::array();
    for (int k = 2; k <= 5; ++k) alphas.push_back(kPi / 2 - std::pow(10.0, -k));
    j["alphas"] = alphas;
    ASSERT_EQ(run_cfg("sweep-alpha", write_config(dir, j), dir / "o"), 0);
    const auto csv = lines(slurp(dir / "o" / "summary.csv"));
    ASSERT_EQ(csv.size(), 5u);
    EXPECT_EQ(csv[0], "alpha,max_residual,max_focal_distance,admissible,skipped");
    std::vector<double> d;
    for (std::size_t k = 1; k < csv.size(); ++k) {
        const auto f = split(csv[k]);
        EXPECT_EQ(f[3], "20");
        EXPECT_LT(std::stod(f[1]), 1e-9);
        d.push_back(std::stod(f[2]));
    }
    for (std::size_t k = 1; k < d.size(); ++k) {
        EXPECT_GE(d[k - 1] / d[k], 8);
        EXPECT_LE(d[k - 1] / d[k], 12);
    }
}

TEST(Cli, SweepOutwardTorusMatchesInward) {
    // the focal sheet follows the branch curvature, not the sorted index
    const auto chart = torus_chart(2, 1);
    const std::vector<std::array<double, 2>> pts = {{0.5, 0.1}, {2.5, 0.3}, {4.0, 1.0}};
    const auto r5 = io::sweep_alpha_row(chart, pts, kPi / 2 - 1e-5, Branch::Beta0);
    const auto r4 = io::sweep_alpha_row(chart, pts, kPi / 2 - 1e-4, Branch::Beta0);
    EXPECT_EQ(r5.admissible, 3);
    EXPECT_NEAR(r4.max_focal_distance / r5.max_focal_distance, 10, 2);
    const auto h = io::sweep_alpha_row(chart, pts, kPi / 2 - 1e-5, Branch::BetaHalfPi);
    EXPECT_LT(h.max_focal_distance, 1e-3);
}

TEST(Cli, SweepEmptyAndSingle) {
    const auto dir = scratch("sweep_edge");
    json j = torus_cfg();
    j["alphas"] = json::array();
    EXPECT_EQ(run_cfg("sweep-alpha", write_config(dir, j), dir / "o"), 2);
    j["alphas"] = {0.5};
    ASSERT_EQ(run_cfg("sweep-alpha", write_config(dir, j), dir / "o"), 0);
    EXPECT_EQ(lines(slurp(dir / "o" / "summary.csv")).size(), 2u);
    j["alphas"] = json::array();
    ASSERT_EQ(run_cfg("sweep-alpha", write_config(dir, j), dir / "p", "--alphas 0.4 0.6"), 0);
    EXPECT_EQ(lines(slurp(dir / "p" / "summary.csv")).size(), 3u);
}

TEST(Cli, UnknownSubcommandOrFlag) {
    EXPECT_EQ(run("render"), 2);
    EXPECT_EQ(run(""), 2);
    const auto dir = scratch("flags");
    EXPECT_EQ(run_cfg("mesh", write_config(dir, torus_cfg()), dir / "o", "--branch sideways"), 2);
}
