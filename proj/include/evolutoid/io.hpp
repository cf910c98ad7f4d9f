#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "evolutoid.hpp"
#include "geometry.hpp"
#include "jets.hpp"
#include "local_classify.hpp"
#include "monge.hpp"
#include "singular_set.hpp"

namespace evolutoid::io {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kConfig = 2, kChart = 3, kSeed = 4 };

inline int exit_code_for(ErrorCode c) {
    switch (c) {
        case ErrorCode::ConfigError:
        case ErrorCode::UnknownSurface:
        case ErrorCode::InvalidParams:
        case ErrorCode::AlphaOutOfRange:
        case ErrorCode::InadmissibleMonge:
            return kConfig;
        case ErrorCode::SeedNotSingular:
        case ErrorCode::GradientVanished:
        case ErrorCode::HypothesesNotMet:
        case ErrorCode::PreconditionViolated:
        case ErrorCode::RidgePoint:
        case ErrorCode::AssumptionViolated:
        case ErrorCode::AssertionFailure:
            return kSeed;
        default:
            return kChart;
    }
}

[[noreturn]] inline void config_error(const std::string& what) { fail(ErrorCode::ConfigError, what); }

struct SurfaceSpec {
    std::string name;
    std::vector<double> params;
    bool swap_uv = false;
    std::optional<MongeCoefficients> monge;
    double half_width = kDefaultMongeHalfWidth;
    std::optional<NormalForm> normal_form;
};

struct GridConfig {
    std::optional<std::array<double, 2>> u_range, v_range;
    int nu = 16, nv = 16;
};

struct RunConfig {
    SurfaceSpec surface;
    double alpha = std::numbers::pi / 4;
    std::vector<double> alphas;
    Branch branch = Branch::Beta0;
    GridConfig grid;
    std::optional<std::array<double, 2>> seed;
    TraceOptions trace;
    std::optional<double> classifier_eps;
    std::string out = ".";
    std::optional<int> threads;
};

namespace detail {

inline double number(const json& j, const std::string& what) {
    if (!j.is_number()) config_error(what + " must be a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) config_error(what + " must be finite");
    return x;
}

inline std::vector<double> numbers(const json& j, const std::string& what) {
    if (!j.is_array()) config_error(what + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(number(x, what));
    return out;
}

inline std::array<double, 2> pair(const json& j, const std::string& what) {
    const auto v = numbers(j, what);
    if (v.size() != 2) config_error(what + " must have two entries");
    return {v[0], v[1]};
}

inline const char* const kMongeKeys[] = {"a30", "a21", "a12", "a03", "a40", "a31", "a22", "a13", "a04", "a41"};

inline MongeCoefficients monge_from_json(const json& j) {
    if (!j.is_object()) config_error("monge coefficients must be an object");
    MongeCoefficients mc;
    if (!j.contains("k1") || !j.contains("k2")) config_error("monge coefficients need k1 and k2");
    for (const auto& [key, val] : j.items()) {
        if (key == "k1") mc.k1 = number(val, key);
        else if (key == "k2") mc.k2 = number(val, key);
        else if (key == "half_width") continue;
        else {
            bool known = false;
            for (std::size_t k = 0; k < MongeCoefficients::kIndices.size(); ++k)
                if (key == kMongeKeys[k]) {
                    mc.a(MongeCoefficients::kIndices[k].first, MongeCoefficients::kIndices[k].second) = number(val, key);
                    known = true;
                }
            if (!known) config_error("unknown monge coefficient " + key);
        }
    }
    return mc;
}

/// Named parameters of a catalog family, flattened to the catalog list layout.
inline std::vector<double> params_from_object(const std::string& name, const json& p) {
    auto get = [&](const char* key) {
        if (!p.contains(key)) config_error(name + " needs parameter " + key);
        return number(p.at(key), key);
    };
    if (name == "torus") {
        std::vector<double> out{get("R"), get("rho")};
        if (p.contains("orientation")) out.push_back(get("orientation"));
        return out;
    }
    if (name == "sphere") return {get("radius")};
    if (name == "surface_of_revolution") {
        if (!p.contains("x") || !p.contains("z")) config_error("surface_of_revolution needs x and z");
        const auto x = numbers(p.at("x"), "x"), z = numbers(p.at("z"), "z");
        std::vector<double> out{get("u0"), get("u1"), static_cast<double>(x.size())};
        out.insert(out.end(), x.begin(), x.end());
        out.insert(out.end(), z.begin(), z.end());
        return out;
    }
    if (name == "graph_surface") {
        std::vector<double> out{get("half_width")};
        if (!p.contains("terms") || !p.at("terms").is_array()) config_error("graph_surface needs terms");
        for (const auto& t : p.at("terms")) {
            const auto v = numbers(t, "term");
            if (v.size() != 3) config_error("each term is [i, j, c]");
            out.insert(out.end(), v.begin(), v.end());
        }
        return out;
    }
    fail(ErrorCode::UnknownSurface, name);
}

inline std::optional<NormalForm> normal_form_from_name(const std::string& s) {
    if (s == "cross_cap") return NormalForm::CrossCap;
    if (s == "cuspidal_edge") return NormalForm::CuspidalEdge;
    if (s == "swallowtail") return NormalForm::Swallowtail;
    return std::nullopt;
}

}  // namespace detail

inline Branch parse_branch(const std::string& s) {
    if (s == "beta0") return Branch::Beta0;
    if (s == "betahalf") return Branch::BetaHalfPi;
    config_error("branch must be beta0 or betahalf");
}

/// Applies one NAME=VALUE tolerance override.
inline void apply_tolerance(RunConfig& cfg, const std::string& name, double value) {
    if (!std::isfinite(value)) config_error("tolerance " + name + " must be finite");
    if (name == "trace_capture") cfg.trace.tol = value;
    else if (name == "mu") cfg.trace.mu_tol = value;
    else if (name == "whitney") cfg.trace.whitney_tol = value;
    else if (name == "rank") cfg.trace.rank_tol = value;
    else if (name == "step") cfg.trace.step = value;
    else if (name == "classifier") cfg.classifier_eps = value;
    else config_error("unknown tolerance " + name);
}

inline RunConfig parse_config(const json& j) {
    if (!j.is_object()) config_error("config must be a JSON object");
    RunConfig cfg;
    if (j.contains("monge")) {
        cfg.surface.name = "monge_patch";
        cfg.surface.monge = detail::monge_from_json(j.at("monge"));
        if (j.at("monge").contains("half_width"))
            cfg.surface.half_width = detail::number(j.at("monge").at("half_width"), "half_width");
    }
    if (j.contains("normal_form")) {
        if (!j.at("normal_form").is_string()) config_error("normal_form must be a string");
        cfg.surface.normal_form = detail::normal_form_from_name(j.at("normal_form").get<std::string>());
        if (!cfg.surface.normal_form) config_error("unknown normal form");
        cfg.surface.name = j.at("normal_form").get<std::string>();
    }
    if (j.contains("surface")) {
        const json& s = j.at("surface");
        json params = j.contains("params") ? j.at("params") : json::array();
        if (s.is_string()) {
            cfg.surface.name = s.get<std::string>();
        } else if (s.is_object()) {
            if (!s.contains("name") || !s.at("name").is_string()) config_error("surface.name must be a string");
            cfg.surface.name = s.at("name").get<std::string>();
            if (s.contains("params")) params = s.at("params");
            if (s.contains("swap_uv")) {
                if (!s.at("swap_uv").is_boolean()) config_error("swap_uv must be a boolean");
                cfg.surface.swap_uv = s.at("swap_uv").get<bool>();
            }
        } else {
            config_error("surface must be a name or an object");
        }
        if (cfg.surface.name == "monge_patch" && params.is_object()) {
            cfg.surface.monge = detail::monge_from_json(params);
            if (params.contains("half_width")) cfg.surface.half_width = detail::number(params.at("half_width"), "half_width");
        } else if (params.is_object()) {
            cfg.surface.params = detail::params_from_object(cfg.surface.name, params);
        } else {
            cfg.surface.params = detail::numbers(params, "params");
        }
    }
    if (cfg.surface.name.empty()) config_error("config needs a surface, monge or normal_form entry");
    if (j.contains("alpha")) cfg.alpha = detail::number(j.at("alpha"), "alpha");
    if (j.contains("alphas")) cfg.alphas = detail::numbers(j.at("alphas"), "alphas");
    if (j.contains("branch")) {
        if (!j.at("branch").is_string()) config_error("branch must be a string");
        cfg.branch = parse_branch(j.at("branch").get<std::string>());
    }
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (!g.is_object()) config_error("grid must be an object");
        if (g.contains("u")) cfg.grid.u_range = detail::pair(g.at("u"), "grid.u");
        if (g.contains("v")) cfg.grid.v_range = detail::pair(g.at("v"), "grid.v");
        auto count = [&](const char* key, int& dst) {
            if (!g.contains(key)) return;
            if (!g.at(key).is_number_integer()) config_error(std::string("grid.") + key + " must be an integer");
            dst = g.at(key).get<int>();
        };
        count("nu", cfg.grid.nu);
        count("nv", cfg.grid.nv);
    }
    if (j.contains("seed")) cfg.seed = detail::pair(j.at("seed"), "seed");
    if (j.contains("trace")) {
        const json& t = j.at("trace");
        if (!t.is_object()) config_error("trace must be an object");
        if (t.contains("step")) cfg.trace.step = detail::number(t.at("step"), "trace.step");
        if (t.contains("max_steps")) {
            if (!t.at("max_steps").is_number_integer()) config_error("trace.max_steps must be an integer");
            cfg.trace.max_steps = t.at("max_steps").get<int>();
        }
    }
    if (j.contains("tol")) {
        if (!j.at("tol").is_object()) config_error("tol must be an object");
        for (const auto& [k, v] : j.at("tol").items()) apply_tolerance(cfg, k, detail::number(v, "tol." + k));
    }
    if (j.contains("out")) {
        if (!j.at("out").is_string()) config_error("out must be a string");
        cfg.out = j.at("out").get<std::string>();
    }
    if (j.contains("threads")) {
        if (!j.at("threads").is_number_integer()) config_error("threads must be an integer");
        cfg.threads = j.at("threads").get<int>();
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot read config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        config_error(std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

inline SurfaceChart build_chart(const SurfaceSpec& s) {
    if (s.normal_form) config_error("a normal form is not a surface chart");
    SurfaceChart chart = s.monge ? monge_patch_chart(*s.monge, s.half_width) : chart_from_catalog(s.name, s.params);
    return s.swap_uv ? swapped_chart(chart) : chart;
}

inline void check_alpha_config(double alpha) {
    if (!(alpha > 0.0 && alpha < std::numbers::pi / 2)) config_error("alpha must lie in (0, pi/2)");
}

/// Grid nodes of one axis: inclusive for closed ranges, endpoint excluded
/// when the axis spans a whole period.
inline std::vector<double> axis_nodes(double a, double b, int n, bool periodic_full) {
    std::vector<double> x(static_cast<std::size_t>(n));
    const double d = periodic_full ? (b - a) / n : (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = a + d * i;
    return x;
}

struct Grid {
    std::vector<double> u, v;
    bool wrap_u = false, wrap_v = false;
};

inline Grid make_grid(const GridConfig& g, const ParameterDomain& dom) {
    if (g.nu < 2 || g.nv < 2) config_error("grid counts must be at least 2");
    Grid grid;
    auto axis = [&](const std::optional<std::array<double, 2>>& r, double lo, double hi, bool periodic, int n,
                    std::vector<double>& out, bool& wrap) {
        const double a = r ? (*r)[0] : lo, b = r ? (*r)[1] : hi;
        if (!(a < b)) config_error("grid range must be increasing");
        const bool full = periodic && !r;
        if (!periodic && (a < lo - 1e-12 || b > hi + 1e-12)) config_error("grid range outside the chart domain");
        out = axis_nodes(a, b, n, full);
        wrap = full;
    };
    axis(g.u_range, dom.u0, dom.u1, dom.periodic_u, g.nu, grid.u, grid.wrap_u);
    axis(g.v_range, dom.v0, dom.v1, dom.periodic_v, g.nv, grid.v, grid.wrap_v);
    return grid;
}

inline std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

inline int thread_count(const std::optional<int>& requested) {
    int n = requested ? *requested : 0;
    if (n <= 0) {
        if (const char* env = std::getenv("EVOLUTOID_THREADS")) n = std::atoi(env);
    }
    if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return n;
}

/// Runs body(row) for every row on up to `threads` workers; rows are
/// independent and results are stored by index.
template <typename Body>
void parallel_rows(int rows, int threads, Body body) {
    threads = std::max(1, std::min(threads, rows));
    if (threads == 1) {
        for (int r = 0; r < rows; ++r) body(r);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (int r = t; r < rows; r += threads) body(r);
        });
    for (auto& th : pool) th.join();
}

inline void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) config_error("cannot create output directory " + dir);
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) config_error("cannot write " + p.string());
    out << content;
}

struct MeshVertex {
    bool ok = false;
    Vec3d base, point;
    double residual = 0.0, lambda = 0.0, gauss = 0.0;
    std::string reason;
};

struct MeshOutput {
    Grid grid;
    std::vector<MeshVertex> nodes;  ///< row-major, u outer
    std::vector<std::array<std::size_t, 4>> faces;  ///< 1-based emitted indices
    std::vector<std::size_t> index;                 ///< node -> emitted index (0 = skipped)
    std::size_t vertex_count = 0;
};

inline MeshVertex mesh_node(const SurfaceChart& chart, double u, double v, double alpha, Branch branch) {
    MeshVertex mv;
    try {
        const EvolutoidSample s = evolutoid_point(chart, u, v, alpha, branch);
        mv.base = s.base;
        mv.point = s.point;
        mv.residual = s.residual;
        const JetPoint e = evolutoid_jet(chart, u, v, alpha, branch, 2);
        const Vec3d X = cross(e.partial(1, 0), e.partial(0, 1));
        const Vec3d N = fundamental_forms(eval_jet(chart, u, v, 2)).N;
        mv.lambda = dot(X, N) < 0 ? -norm(X) : norm(X);
        mv.gauss = gauss_curvature_series(e.series).value();
        mv.ok = true;
    } catch (const Error& err) {
        mv.reason = std::string(to_string(err.code()));
    }
    return mv;
}

inline MeshOutput build_mesh(const RunConfig& cfg) {
    check_alpha_config(cfg.alpha);
    const SurfaceChart chart = build_chart(cfg.surface);
    MeshOutput m;
    m.grid = make_grid(cfg.grid, chart.domain());
    const int nu = static_cast<int>(m.grid.u.size()), nv = static_cast<int>(m.grid.v.size());
    m.nodes.resize(static_cast<std::size_t>(nu * nv));
    parallel_rows(nu, thread_count(cfg.threads), [&](int i) {
        for (int j = 0; j < nv; ++j)
            m.nodes[static_cast<std::size_t>(i * nv + j)] =
                mesh_node(chart, m.grid.u[static_cast<std::size_t>(i)], m.grid.v[static_cast<std::size_t>(j)], cfg.alpha,
                          cfg.branch);
    });
    m.index.assign(m.nodes.size(), 0);
    for (std::size_t k = 0; k < m.nodes.size(); ++k)
        if (m.nodes[k].ok) m.index[k] = ++m.vertex_count;
    const int iu = m.grid.wrap_u ? nu : nu - 1, iv = m.grid.wrap_v ? nv : nv - 1;
    for (int i = 0; i < iu; ++i)
        for (int j = 0; j < iv; ++j) {
            const int i1 = (i + 1) % nu, j1 = (j + 1) % nv;
            const std::array<std::size_t, 4> q = {m.index[static_cast<std::size_t>(i * nv + j)],
                                                  m.index[static_cast<std::size_t>(i1 * nv + j)],
                                                  m.index[static_cast<std::size_t>(i1 * nv + j1)],
                                                  m.index[static_cast<std::size_t>(i * nv + j1)]};
            if (std::all_of(q.begin(), q.end(), [](std::size_t x) { return x != 0; })) m.faces.push_back(q);
        }
    return m;
}

inline std::string obj_text(const MeshOutput& m, bool base) {
    std::string s = base ? "# base surface\n" : "# evolutoid\n";
    for (const auto& n : m.nodes)
        if (n.ok) {
            const Vec3d& p = base ? n.base : n.point;
            s += "v " + fmt17(p[0]) + " " + fmt17(p[1]) + " " + fmt17(p[2]) + "\n";
        }
    for (const auto& f : m.faces)
        s += "f " + std::to_string(f[0]) + " " + std::to_string(f[1]) + " " + std::to_string(f[2]) + " " +
             std::to_string(f[3]) + "\n";
    return s;
}

inline std::string attributes_csv(const MeshOutput& m) {
    std::string s = "vertex,u,v,residual,lambda,gauss_curvature\n";
    const std::size_t nv = m.grid.v.size();
    for (std::size_t k = 0; k < m.nodes.size(); ++k)
        if (m.nodes[k].ok)
            s += std::to_string(m.index[k]) + "," + fmt17(m.grid.u[k / nv]) + "," + fmt17(m.grid.v[k % nv]) + "," +
                 fmt17(m.nodes[k].residual) + "," + fmt17(m.nodes[k].lambda) + "," + fmt17(m.nodes[k].gauss) + "\n";
    return s;
}

inline json skiplog_json(const MeshOutput& m) {
    json skipped = json::array();
    const std::size_t nv = m.grid.v.size();
    for (std::size_t k = 0; k < m.nodes.size(); ++k)
        if (!m.nodes[k].ok)
            skipped.push_back({{"i", k / nv}, {"j", k % nv}, {"u", m.grid.u[k / nv]}, {"v", m.grid.v[k % nv]},
                               {"reason", m.nodes[k].reason}});
    return {{"grid", {{"nu", m.grid.u.size()}, {"nv", nv}}}, {"vertices", m.vertex_count}, {"faces", m.faces.size()},
            {"skipped", skipped}};
}

inline int cmd_mesh(const RunConfig& cfg) {
    const MeshOutput m = build_mesh(cfg);
    ensure_dir(cfg.out);
    const std::filesystem::path dir(cfg.out);
    write_file(dir / "evolutoid.obj", obj_text(m, false));
    write_file(dir / "base.obj", obj_text(m, true));
    write_file(dir / "attributes.csv", attributes_csv(m));
    write_file(dir / "skiplog.json", skiplog_json(m).dump(2) + "\n");
    return kOk;
}

inline json vec_json(const Vec3d& v) { return json::array({v[0], v[1], v[2]}); }

inline std::string singular_csv(const std::vector<SingularitySample>& samples) {
    std::string s = "t,u,v,lambda,mu,mu_dot,class\n";
    for (const auto& x : samples)
        s += fmt17(x.t) + "," + fmt17(x.uv[0]) + "," + fmt17(x.uv[1]) + "," + fmt17(x.lambda) + "," + fmt17(x.mu) +
             "," + fmt17(x.mu_dot) + "," + to_string(x.cls.kind) + "\n";
    return s;
}

inline json sample_json(const SingularitySample& s) {
    return {{"t", s.t},
            {"uv", {s.uv[0], s.uv[1]}},
            {"lambda", s.lambda},
            {"grad_lambda", {s.grad_lambda[0], s.grad_lambda[1]}},
            {"eta", {s.eta[0], s.eta[1]}},
            {"nu", vec_json(s.nu)},
            {"frontal", s.frontal},
            {"mu", s.mu},
            {"mu_dot", s.mu_dot},
            {"class", to_string(s.cls.kind)},
            {"whitney", s.cls.whitney},
            {"whitney_normalized", s.cls.whitney_normalized},
            {"rank_ratio", s.cls.rank_ratio}};
}

inline std::vector<SingularitySample> run_singular(const RunConfig& cfg) {
    if (!cfg.seed) config_error("singular needs a seed");
    if (cfg.trace.step <= 0 || cfg.trace.max_steps < 0) config_error("trace step must be positive");
    if (cfg.surface.normal_form) return singular_samples(normal_form_map(*cfg.surface.normal_form), *cfg.seed, cfg.trace);
    check_alpha_config(cfg.alpha);
    return singular_samples(evolutoid_map(build_chart(cfg.surface), cfg.alpha, cfg.branch), *cfg.seed, cfg.trace);
}

inline int cmd_singular(const RunConfig& cfg) {
    const auto samples = run_singular(cfg);
    ensure_dir(cfg.out);
    const std::filesystem::path dir(cfg.out);
    write_file(dir / "singular.csv", singular_csv(samples));
    std::map<std::string, int> counts;
    for (const auto& s : samples) ++counts[to_string(s.cls.kind)];
    json report = {{"surface", cfg.surface.name},
                   {"alpha", cfg.alpha},
                   {"branch", to_string(cfg.branch)},
                   {"seed", {(*cfg.seed)[0], (*cfg.seed)[1]}},
                   {"samples", samples.size()},
                   {"seed_sample", sample_json(sample_at_seed(samples))},
                   {"class_counts", counts}};
    write_file(dir / "report.json", report.dump(2) + "\n");
    return kOk;
}

inline json classify_report(const RunConfig& cfg) {
    if (!cfg.surface.monge) config_error("classify needs Monge coefficients");
    check_alpha_config(cfg.alpha);
    const MongeCoefficients& mc = *cfg.surface.monge;
    const double a = cfg.alpha;
    try {
        mc.validate_for_evolutoid();
    } catch (const Error& e) {
        config_error(e.what());
    }
    const double eps = cfg.classifier_eps ? *cfg.classifier_eps : default_classifier_eps(mc);
    json rep, wit, errors = json::object();
    const auto reg = classify_regularity(mc, a, eps);
    rep["regularity"] = to_string(reg.cls);
    wit["a03"] = mc.a03;
    wit["regularity_factor"] = reg.factor;
    wit["eps"] = eps;
    const LocalExpansion le = local_expansion(mc, a);
    rep["local_expansion"] = {{"b100", le.b100}, {"b110", le.b110}, {"b101", le.b101}, {"b220", le.b220},
                              {"b202", le.b202}, {"b300", le.b300}, {"b310", le.b310}, {"b301", le.b301}};
    auto attempt = [&](const char* key, auto fn) {
        try {
            rep[key] = fn();
        } catch (const Error& e) {
            rep[key] = nullptr;
            errors[key] = e.what();
        }
    };
    attempt("subparabolic", [&] { return evolutoid_parabolic_test(mc, eps); });
    attempt("asymptotic_residual", [&] { return asymptotic_residual(mc, a); });
    attempt("parabolic_gradient", [&] {
        const auto pg = parabolic_set_gradient(mc, a, eps);
        wit["parabolic_gradient_closed_form"] = {pg.closed_form[0], pg.closed_form[1]};
        return json::array({pg.gradient[0], pg.gradient[1]});
    });
    attempt("height_class", [&] {
        const auto hs = height_singularity(mc, a, eps);
        wit["a31"] = hs.a31;
        wit["a41"] = hs.a41;
        wit["gauss_curvature"] = hs.gauss_curvature;
        wit["g20"] = hs.g20;
        wit["g04"] = hs.g04;
        return std::string(to_string(hs.cls));
    });
    attempt("geodesic_curvature", [&] { return gauss_geodesic_curvature(mc, a, eps); });
    if (rep["geodesic_curvature"].is_null()) rep.erase("geodesic_curvature");
    wit["errors"] = errors;
    rep["witnesses"] = wit;
    return rep;
}

inline int cmd_classify(const RunConfig& cfg) {
    const json rep = classify_report(cfg);
    ensure_dir(cfg.out);
    write_file(std::filesystem::path(cfg.out) / "report.json", rep.dump(2) + "\n");
    return kOk;
}

struct SweepRow {
    double alpha = 0.0;
    double max_residual = 0.0;
    double max_focal_distance = 0.0;
    int admissible = 0, skipped = 0;
};

/// Per-alpha envelope residual and distance to the focal sheet over the given
/// parameter points.
inline SweepRow sweep_alpha_row(const SurfaceChart& chart, const std::vector<std::array<double, 2>>& pts, double alpha,
                                Branch branch) {
    SweepRow row;
    row.alpha = alpha;
    for (const auto& p : pts) {
        try {
            const EvolutoidSample s = evolutoid_point(chart, p[0], p[1], alpha, branch);
            const JetPoint j = eval_jet(chart, p[0], p[1], 2);
            const FundamentalForms ff = fundamental_forms(j);
            // focal sheet of the curvature along the branch's curvature line
            const double k = branch == Branch::Beta0 ? ff.g / ff.G : ff.e / ff.E;
            if (std::abs(k) < 1e-12) fail(ErrorCode::ParabolicDirection, "focal point at infinity");
            const Vec3d focal = j.position() + ff.N / k;
            row.max_residual = std::max(row.max_residual, s.residual);
            row.max_focal_distance = std::max(row.max_focal_distance, norm(s.point - focal));
            ++row.admissible;
        } catch (const Error&) {
            ++row.skipped;
        }
    }
    return row;
}

inline int cmd_sweep_alpha(const RunConfig& cfg) {
    if (cfg.alphas.empty()) config_error("alphas must be a non-empty list");
    for (double a : cfg.alphas) check_alpha_config(a);
    const SurfaceChart chart = build_chart(cfg.surface);
    const Grid g = make_grid(cfg.grid, chart.domain());
    std::vector<std::array<double, 2>> pts;
    for (double u : g.u)
        for (double v : g.v) pts.push_back({u, v});
    std::string s = "alpha,max_residual,max_focal_distance,admissible,skipped\n";
    for (double a : cfg.alphas) {
        const SweepRow r = sweep_alpha_row(chart, pts, a, cfg.branch);
        s += fmt17(r.alpha) + "," + fmt17(r.max_residual) + "," + fmt17(r.max_focal_distance) + "," +
             std::to_string(r.admissible) + "," + std::to_string(r.skipped) + "\n";
    }
    ensure_dir(cfg.out);
    write_file(std::filesystem::path(cfg.out) / "summary.csv", s);
    return kOk;
}

/// Runs a command, mapping errors to exit codes and messages on stderr.
template <typename Fn>
int guarded(Fn fn) {
    try {
        return fn();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    }
}

}  // namespace evolutoid::io
