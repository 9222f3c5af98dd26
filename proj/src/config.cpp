#include "egf/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "egf/errors.hpp"

namespace egf {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::map<std::string, double> parse_params(const std::string& text,
                                           const std::map<std::string, double>& defaults) {
    auto out = defaults;
    if (text.empty()) return out;
    for (const auto& part : split(text, ',')) {
        const auto eq = part.find('=');
        if (eq == std::string::npos)
            throw InvalidInput("profile parameter must look like key=value: " + part);
        const std::string key = trim(part.substr(0, eq));
        if (!out.count(key)) throw InvalidInput("unknown profile parameter: " + key);
        out[key] = std::stod(trim(part.substr(eq + 1)));
    }
    return out;
}

} // namespace

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap out;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidInput("config line " + std::to_string(lineno) +
                               ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw InvalidInput("config line " + std::to_string(lineno) +
                                            ": empty key");
        out[key] = value;
    }
    return out;
}

ConfigMap parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

double config_double(const ConfigMap& m, const std::string& key, double fallback) {
    auto it = m.find(key);
    if (it == m.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw InvalidInput("config key '" + key + "': not a number: " + it->second);
    }
}

long config_long(const ConfigMap& m, const std::string& key, long fallback) {
    auto it = m.find(key);
    if (it == m.end()) return fallback;
    try {
        return std::stol(it->second);
    } catch (const std::exception&) {
        throw InvalidInput("config key '" + key + "': not an integer: " + it->second);
    }
}

std::string config_string(const ConfigMap& m, const std::string& key,
                          const std::string& fallback) {
    auto it = m.find(key);
    return it == m.end() ? fallback : it->second;
}

GridSpec parse_grid_spec(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw InvalidInput("grid spec must be 'min,max,cells': " + text);
    GridSpec g;
    g.x_min = std::stod(parts[0]);
    g.x_max = std::stod(parts[1]);
    const long cells = std::stol(parts[2]);
    if (cells < 16) throw InvalidInput("grid spec: need at least 16 cells");
    if (!(g.x_max > g.x_min)) throw InvalidInput("grid spec: max must exceed min");
    g.cells = static_cast<std::size_t>(cells);
    return g;
}

std::function<double(double)> parse_profile(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = trim(colon == std::string::npos ? spec : spec.substr(0, colon));
    const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (name == "const") {
        const auto p = parse_params(args, {{"value", 0.0}});
        const double v = p.at("value");
        return [v](double) { return v; };
    }
    if (name == "sin" || name == "cos") {
        const auto p = parse_params(args, {{"amp", 1.0}, {"freq", 1.0}, {"phase", 0.0},
                                           {"offset", 0.0}});
        const double a = p.at("amp"), f = p.at("freq"), ph = p.at("phase"), b = p.at("offset");
        if (name == "sin")
            return [a, f, ph, b](double x) { return b + a * std::sin(f * x + ph); };
        return [a, f, ph, b](double x) { return b + a * std::cos(f * x + ph); };
    }
    if (name == "linear") {
        const auto p = parse_params(args, {{"slope", 1.0}, {"offset", 0.0}});
        const double s = p.at("slope"), b = p.at("offset");
        return [s, b](double x) { return b + s * x; };
    }
    if (name == "inv") {
        const auto p = parse_params(args, {{"scale", 1.0}});
        const double s = p.at("scale");
        return [s](double x) { return s / x; };
    }
    if (name == "gauss") {
        const auto p = parse_params(args, {{"amp", 1.0}, {"center", 0.0}, {"width", 1.0},
                                           {"offset", 0.0}});
        const double a = p.at("amp"), c = p.at("center"), w = p.at("width"), b = p.at("offset");
        return [a, c, w, b](double x) {
            const double z = (x - c) / w;
            return b + a * std::exp(-0.5 * z * z);
        };
    }
    throw InvalidInput("unknown profile: " + name);
}

GeneratingFamily parse_flow(const std::string& spec, std::size_t n) {
    const auto colon = spec.find(':');
    const std::string name = trim(colon == std::string::npos ? spec : spec.substr(0, colon));
    const std::string args = colon == std::string::npos ? "" : trim(spec.substr(colon + 1));
    if (name == "ricci") return ricci_family(n);
    if (name == "ent") return ent_family(static_cast<std::size_t>(std::stol(args)), n);
    if (name == "power") return power_family(static_cast<std::size_t>(std::stol(args)), n);
    if (name == "constant") return constant_family(std::stod(args), n);
    if (name == "psi") {
        if (args == "lambda")
            return scalar_psi_family([](double l) { return l; }, [](double) { return 1.0; },
                                     "psi:lambda");
        if (args == "lambda2")
            return scalar_psi_family([](double l) { return l * l; },
                                     [](double l) { return 2.0 * l; }, "psi:lambda2");
        throw InvalidInput("psi flow: expected 'lambda' or 'lambda2'");
    }
    if (name == "psi-poly") {
        std::vector<double> coeffs;
        for (const auto& part : split(args, ',')) coeffs.push_back(std::stod(part));
        if (coeffs.empty()) throw InvalidInput("psi-poly: no coefficients");
        auto psi = [coeffs](double l) {
            double acc = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * l + coeffs[k];
            return acc;
        };
        auto dpsi = [coeffs](double l) {
            double acc = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 1;)
                acc = acc * l + coeffs[k] * static_cast<double>(k);
            return acc;
        };
        return scalar_psi_family(psi, dpsi, "psi-poly");
    }
    if (name == "monomial") {
        double coeff = 1.0;
        std::vector<unsigned> alpha;
        for (const auto& kv : split(args, ';')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw InvalidInput("monomial flow: expected coeff=..;alpha=..");
            const std::string key = trim(kv.substr(0, eq));
            const std::string val = trim(kv.substr(eq + 1));
            if (key == "coeff") {
                coeff = std::stod(val);
            } else if (key == "alpha") {
                for (const auto& part : split(val, ','))
                    alpha.push_back(static_cast<unsigned>(std::stoul(part)));
            } else {
                throw InvalidInput("monomial flow: unknown key " + key);
            }
        }
        if (alpha.size() != n) throw InvalidInput("monomial flow: alpha must list n exponents");
        return monomial_b1_family(coeff, alpha, n);
    }
    throw InvalidInput("unknown flow: " + name);
}

} // namespace egf
