#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "egf/config.hpp"
#include "egf/field.hpp"
#include "egf/flows.hpp"

namespace egf {

struct ScenarioConfig {
    std::string name;
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t cells = 0;
    double t_end = -1.0;       ///< negative = scenario default
    std::size_t t_samples = 0; ///< zero = scenario default
    int orientation = 0;       ///< zero = scenario default
    std::string scheme = "auto";
    std::string flow;          ///< preset spec; empty = scenario default
    std::string out_dir;       ///< empty = no files written
    unsigned seed = 0;         ///< reserved for randomized sweeps
    bool parallel = false;

    void validate() const;
};

struct MetricResult {
    double max_abs_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct RunReport {
    std::string scenario;
    std::string classification;
    double blowup_time = 0.0; ///< +inf when no blow-up is predicted
    double achieved_t = 0.0;
    bool blowup_truncated = false;
    std::map<std::string, MetricResult> metrics;
    std::vector<std::string> files;

    bool all_pass() const;
    std::string to_json_string() const;
};

/// The worked examples: cone, circles, pseudosphere, reeb_i, reeb_ii,
/// ricci_n2, ricci_n3_map, ent_wave, umbilical_burgers.
RunReport run_scenario(const ScenarioConfig& config);

std::vector<std::string> scenario_names();

/// Generic config-driven evolution (CLI `solve`). Reads n, flow, scheme,
/// per-field initial profiles tau1_init..taun_init (or lambda_init for n=1).
RunReport run_generic_solve(const ScenarioConfig& config, const ConfigMap& extra);

/// Hyperbolicity classification over a parameter grid.
/// n = 3: axes (sigma1, sigma3) at sigma2 = 0; n = 2: axes (tau1, tau2).
struct HyperbolicityMap {
    std::vector<double> a_axis;
    std::vector<double> b_axis;
    std::vector<Hyperbolicity> cells; ///< row-major, b fastest
    std::size_t disagreements = 0;    ///< strict region vs discriminant sign (n = 3)
};
HyperbolicityMap hyperbolicity_map(const std::string& flow, std::size_t n, double a_min,
                                   double a_max, std::size_t a_cells, double b_min,
                                   double b_max, std::size_t b_cells, bool parallel = false);

/// One CSV per field, columns exactly `x,t,value`.
void write_field_csv(const std::string& path, const FieldHistory& history);
void write_report_json(const std::string& path, const RunReport& report);

} // namespace egf
