#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "egf/flows.hpp"

namespace egf {

/// Flat `key = value` text config; '#' starts a comment.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_file(const std::string& path);
ConfigMap parse_config_text(const std::string& text);

double config_double(const ConfigMap& m, const std::string& key, double fallback);
long config_long(const ConfigMap& m, const std::string& key, long fallback);
std::string config_string(const ConfigMap& m, const std::string& key,
                          const std::string& fallback);

/// "a,b,cells" -> grid bounds.
struct GridSpec {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t cells = 0;
};
GridSpec parse_grid_spec(const std::string& text);

/// Small analytic profile language for initial data, e.g.
/// "sin:amp=0.2,freq=1,phase=0,offset=1".
/// Names: const, sin, cos, linear, inv, gauss.
std::function<double(double)> parse_profile(const std::string& spec);

/// Flow preset spec: "ricci", "ent:1", "power:2", "constant:0.5",
/// "psi:lambda" | "psi:lambda2" | "psi-poly:c0,c1,..." (n = 1 scalar flows),
/// "monomial:coeff=1;alpha=1,0".
GeneratingFamily parse_flow(const std::string& spec, std::size_t n);

std::vector<std::string> split(const std::string& text, char sep);

} // namespace egf
