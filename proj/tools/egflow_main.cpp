// Command-line front end: hyperbolicity analysis, config-driven solves, the
// worked example scenarios, and classification maps.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "egf/companion.hpp"
#include "egf/config.hpp"
#include "egf/errors.hpp"
#include "egf/flows.hpp"
#include "egf/scenarios.hpp"
#include "egf/symmetric.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitNotHyperbolic = 3;
constexpr int kExitBlowupTruncated = 4;

struct CommonArgs {
    std::string grid;
    double t_end = -1.0;
    long t_samples = 0;
    int orientation = 0;
    std::string scheme = "auto";
    std::string out_dir;
    std::string config_path;
    std::string flow;
    unsigned seed = 0;
    bool parallel = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--grid", args.grid, "Grid as x_min,x_max,cells");
    cmd->add_option("--t-end", args.t_end, "Final time");
    cmd->add_option("--t-samples", args.t_samples, "Number of stored time samples");
    cmd->add_option("--orientation", args.orientation, "Orientation of N: +1 or -1");
    cmd->add_option("--scheme", args.scheme,
                    "Solver scheme: characteristics|conservation|fd|auto");
    cmd->add_option("--out", args.out_dir, "Output directory for CSV/JSON files");
    cmd->add_option("--config", args.config_path, "Key-value config file");
    cmd->add_option("--flow", args.flow, "Flow preset, e.g. ricci, ent:1, psi:lambda");
    cmd->add_option("--seed", args.seed, "Reserved for randomized sweeps");
    cmd->add_flag("--parallel", args.parallel, "Parallel map sweep");
}

egf::ScenarioConfig build_config(const CommonArgs& args, const egf::ConfigMap& file) {
    egf::ScenarioConfig cfg;
    const std::string grid_text =
        !args.grid.empty() ? args.grid : egf::config_string(file, "grid", "");
    if (!grid_text.empty()) {
        const auto g = egf::parse_grid_spec(grid_text);
        cfg.x_min = g.x_min;
        cfg.x_max = g.x_max;
        cfg.cells = g.cells;
    }
    cfg.t_end = args.t_end >= 0.0 ? args.t_end : egf::config_double(file, "t_end", -1.0);
    cfg.t_samples = args.t_samples > 0
                        ? static_cast<std::size_t>(args.t_samples)
                        : static_cast<std::size_t>(egf::config_long(file, "t_samples", 0));
    cfg.orientation = args.orientation != 0
                          ? args.orientation
                          : static_cast<int>(egf::config_long(file, "orientation", 0));
    cfg.scheme = args.scheme != "auto" ? args.scheme
                                       : egf::config_string(file, "scheme", "auto");
    cfg.out_dir = !args.out_dir.empty() ? args.out_dir
                                        : egf::config_string(file, "out", "");
    cfg.flow = !args.flow.empty() ? args.flow : egf::config_string(file, "flow", "");
    cfg.seed = args.seed;
    cfg.parallel = args.parallel;
    return cfg;
}

int report_outcome(const egf::RunReport& report, bool quiet) {
    if (!quiet) std::cout << report.to_json_string() << "\n";
    if (report.blowup_truncated) return kExitBlowupTruncated;
    return kExitOk;
}

std::vector<double> parse_numbers(const std::string& text) {
    std::vector<double> out;
    for (const auto& part : egf::split(text, ',')) out.push_back(std::stod(part));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extrinsic geometric flows on codimension-one foliations"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Classify the truncated system at a state");
    CommonArgs an_args;
    add_common(analyze, an_args);
    long an_n = 0;
    std::string an_tau, an_sigma, an_roots;
    analyze->add_option("--n", an_n, "Leaf dimension");
    analyze->add_option("--tau", an_tau, "Power sums tau_1..tau_n, comma separated");
    analyze->add_option("--sigma", an_sigma, "Symmetric functions sigma_1..sigma_n");
    analyze->add_option("--roots", an_roots, "Principal curvatures k_1..k_n");

    // solve
    auto* solve = app.add_subcommand("solve", "Evolve tau fields from a config file");
    CommonArgs so_args;
    add_common(solve, so_args);

    // scenario
    auto* scenario = app.add_subcommand("scenario", "Run a named worked example");
    CommonArgs sc_args;
    add_common(scenario, sc_args);
    std::string sc_name;
    scenario->add_option("name", sc_name, "Scenario name")->required();

    // map
    auto* map_cmd = app.add_subcommand("map", "Hyperbolicity classification over a grid");
    CommonArgs mp_args;
    add_common(map_cmd, mp_args);
    long mp_n = 3;
    std::string mp_a = "-4,4,100", mp_b = "-1.5,1.5,100";
    map_cmd->add_option("--n", mp_n, "Leaf dimension (2 or 3)");
    map_cmd->add_option("--a-range", mp_a, "First axis as min,max,cells");
    map_cmd->add_option("--b-range", mp_b, "Second axis as min,max,cells");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze) {
            const egf::ConfigMap file = an_args.config_path.empty()
                                            ? egf::ConfigMap{}
                                            : egf::parse_config_file(an_args.config_path);
            const std::string flow = !an_args.flow.empty()
                                         ? an_args.flow
                                         : egf::config_string(file, "flow", "");
            if (flow.empty()) throw egf::InvalidInput("analyze: --flow is required");
            std::vector<double> tau;
            std::size_t n = an_n > 0 ? static_cast<std::size_t>(an_n) : 0;
            if (!an_roots.empty()) {
                const auto roots = parse_numbers(an_roots);
                n = n ? n : roots.size();
                tau = egf::profile_from_roots(roots, roots.size()).tau;
            } else if (!an_sigma.empty()) {
                const auto sigma = parse_numbers(an_sigma);
                n = n ? n : sigma.size();
                tau = egf::tau_from_sigma(sigma, sigma.size());
            } else if (!an_tau.empty()) {
                tau = parse_numbers(an_tau);
                n = n ? n : tau.size();
            } else {
                throw egf::InvalidInput("analyze: provide --tau, --sigma or --roots");
            }
            if (n == 0 || tau.size() < n)
                throw egf::InvalidInput("analyze: inconsistent state size");
            const auto family = egf::parse_flow(flow, n);
            const auto sys = egf::assemble_type_b(family, tau, 0.0);
            const auto cls = egf::classify_hyperbolicity(sys);
            nlohmann::json j;
            j["flow"] = family.name();
            j["n"] = n;
            j["classification"] = egf::to_string(cls.kind);
            j["eigenvalues"] = cls.eigenvalues;
            if (!cls.detail.empty()) j["detail"] = cls.detail;
            const auto m = sys.matrix();
            std::vector<std::vector<double>> rows(n, std::vector<double>(n));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k) rows[i][k] = m(i, k);
            j["matrix"] = rows;
            std::cout << j.dump(2) << "\n";
            return cls.kind == egf::Hyperbolicity::NotHyperbolic ? kExitNotHyperbolic
                                                                 : kExitOk;
        }
        if (*solve) {
            const egf::ConfigMap file = so_args.config_path.empty()
                                            ? egf::ConfigMap{}
                                            : egf::parse_config_file(so_args.config_path);
            const auto cfg = build_config(so_args, file);
            return report_outcome(egf::run_generic_solve(cfg, file), false);
        }
        if (*scenario) {
            const egf::ConfigMap file = sc_args.config_path.empty()
                                            ? egf::ConfigMap{}
                                            : egf::parse_config_file(sc_args.config_path);
            auto cfg = build_config(sc_args, file);
            cfg.name = sc_name;
            return report_outcome(egf::run_scenario(cfg), false);
        }
        if (*map_cmd) {
            const std::string flow = mp_args.flow.empty() ? "ricci" : mp_args.flow;
            const auto a = egf::parse_grid_spec(mp_a);
            const auto b = egf::parse_grid_spec(mp_b);
            const auto map = egf::hyperbolicity_map(
                flow, static_cast<std::size_t>(mp_n), a.x_min, a.x_max, a.cells, b.x_min,
                b.x_max, b.cells, mp_args.parallel);
            nlohmann::json j;
            j["flow"] = flow;
            j["n"] = mp_n;
            j["a_axis"] = map.a_axis;
            j["b_axis"] = map.b_axis;
            j["disagreements"] = map.disagreements;
            std::size_t strict = 0, hyp = 0, nonh = 0;
            for (auto k : map.cells) {
                if (k == egf::Hyperbolicity::Strictly) ++strict;
                else if (k == egf::Hyperbolicity::Hyperbolic) ++hyp;
                else ++nonh;
            }
            j["counts"] = {{"strictly-hyperbolic", strict},
                           {"hyperbolic", hyp},
                           {"not-hyperbolic", nonh}};
            std::cout << j.dump(2) << "\n";
            if (!mp_args.out_dir.empty()) {
                namespace fs = std::filesystem;
                fs::create_directories(mp_args.out_dir);
                const auto path = fs::path(mp_args.out_dir) / "classification_map.csv";
                std::ofstream out(path, std::ios::binary);
                out << "x,t,value\n";
                char buf[96];
                for (std::size_t ai = 0; ai < map.a_axis.size(); ++ai)
                    for (std::size_t bi = 0; bi < map.b_axis.size(); ++bi) {
                        const auto kind = map.cells[ai * map.b_axis.size() + bi];
                        const double code = kind == egf::Hyperbolicity::Strictly ? 2.0
                                            : kind == egf::Hyperbolicity::Hyperbolic ? 1.0
                                                                                     : 0.0;
                        std::snprintf(buf, sizeof(buf), "%.15g,%.15g,%.15g\n",
                                      map.a_axis[ai], map.b_axis[bi], code);
                        out << buf;
                    }
            }
            return kExitOk;
        }
    } catch (const egf::NotHyperbolicError& e) {
        std::cerr << "not hyperbolic: " << e.what() << "\n";
        return kExitNotHyperbolic;
    } catch (const egf::BlowupError& e) {
        std::cerr << "blow-up: " << e.what() << " (T = " << e.blowup_time() << ")\n";
        return kExitBlowupTruncated;
    } catch (const egf::InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    }
    return kExitOk;
}
