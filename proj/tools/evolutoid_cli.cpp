#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "evolutoid/io.hpp"

using namespace evolutoid;
namespace eio = evolutoid::io;

namespace {

struct Flags {
    std::string config;
    std::optional<double> alpha;
    std::string branch;
    std::string out;
    std::string seed;
    std::vector<std::string> tol;
    std::vector<double> alphas;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON run configuration")->required();
    sub->add_option("--alpha", f.alpha, "angle with the tangent plane, in (0, pi/2)");
    sub->add_option("--branch", f.branch, "beta0 or betahalf");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--tol", f.tol, "tolerance override NAME=VAL (repeatable)");
}

std::array<double, 2> parse_seed(const std::string& s) {
    std::array<double, 2> out{};
    char comma = 0;
    std::istringstream in(s);
    if (!(in >> out[0] >> comma >> out[1]) || comma != ',' || !in.eof()) eio::config_error("--seed expects U,V");
    return out;
}

eio::RunConfig resolve(const Flags& f) {
    eio::RunConfig cfg = eio::load_config(f.config);
    if (f.alpha) cfg.alpha = *f.alpha;
    if (!f.branch.empty()) cfg.branch = eio::parse_branch(f.branch);
    if (!f.out.empty()) cfg.out = f.out;
    if (!f.seed.empty()) cfg.seed = parse_seed(f.seed);
    if (!f.alphas.empty()) cfg.alphas = f.alphas;
    for (const auto& t : f.tol) {
        const auto eq = t.find('=');
        if (eq == std::string::npos) eio::config_error("--tol expects NAME=VAL");
        double v = 0;
        try {
            v = std::stod(t.substr(eq + 1));
        } catch (const std::exception&) {
            eio::config_error("--tol value is not a number");
        }
        eio::apply_tolerance(cfg, t.substr(0, eq), v);
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolutoids of surfaces: meshes, singular curves and local classification"};
    app.require_subcommand(1);
    Flags f;
    auto* mesh = app.add_subcommand("mesh", "evolutoid and base OBJ meshes over a parameter grid");
    auto* singular = app.add_subcommand("singular", "trace and classify the singular curve through a seed");
    auto* classify = app.add_subcommand("classify", "Monge-coefficient classification report");
    auto* sweep = app.add_subcommand("sweep-alpha", "envelope residual and focal distance per alpha");
    for (auto* s : {mesh, singular, classify, sweep}) add_common(s, f);
    singular->add_option("--seed", f.seed, "seed point U,V");
    sweep->add_option("--alphas", f.alphas, "list of alphas");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : eio::kConfig;
    }
    return eio::guarded([&] {
        const eio::RunConfig cfg = resolve(f);
        if (mesh->parsed()) return eio::cmd_mesh(cfg);
        if (singular->parsed()) return eio::cmd_singular(cfg);
        if (classify->parsed()) return eio::cmd_classify(cfg);
        return eio::cmd_sweep_alpha(cfg);
    });
}
