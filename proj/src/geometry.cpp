#include "egf/geometry.hpp"

#include <cmath>

#include "egf/errors.hpp"
#include "egf/solvers.hpp"
#include "egf/symmetric.hpp"

namespace egf {

WeingartenData weingarten_from_metric(const BiregularMetric& metric) {
    const Grid& grid = metric.g00.grid();
    const std::size_t n = metric.leaf_dim;
    if (n == 0) throw InvalidInput("weingarten_from_metric: leaf_dim is zero");
    for (std::size_t i = 0; i < metric.g00.size(); ++i)
        if (metric.g00[i] <= 0.0)
            throw InvalidInput("weingarten_from_metric: g00 must be positive");

    WeingartenData out;
    if (metric.diagonal()) {
        if (metric.leaf_diag.size() != n)
            throw InvalidInput("weingarten_from_metric: wrong number of diagonal fields");
        std::vector<ScalarField> dg;
        dg.reserve(n);
        for (const auto& gii : metric.leaf_diag) dg.push_back(gii.derivative());
        std::vector<std::vector<double>> b(n, std::vector<double>(grid.count));
        std::vector<std::vector<double>> k(n, std::vector<double>(grid.count));
        std::vector<std::vector<double>> tau(n, std::vector<double>(grid.count, 0.0));
        for (std::size_t i = 0; i < grid.count; ++i) {
            const double root = std::sqrt(metric.g00[i]);
            for (std::size_t c = 0; c < n; ++c) {
                const double gii = metric.leaf_diag[c][i];
                if (gii <= 0.0)
                    throw InvalidInput("weingarten_from_metric: leaf metric not positive");
                b[c][i] = -0.5 * dg[c][i] / root;
                k[c][i] = b[c][i] / gii;
            }
            for (std::size_t m = 1; m <= n; ++m) {
                double s = 0.0;
                for (std::size_t c = 0; c < n; ++c)
                    s += std::pow(k[c][i], static_cast<double>(m));
                tau[m - 1][i] = s;
            }
        }
        for (auto& v : b) out.b_diag.emplace_back(grid, std::move(v));
        for (auto& v : k) out.principal.emplace_back(grid, std::move(v));
        for (auto& v : tau) out.tau.emplace_back(grid, std::move(v));
        return out;
    }

    if (metric.leaf_full.size() != n * n)
        throw InvalidInput("weingarten_from_metric: wrong number of leaf fields");
    std::vector<ScalarField> dg;
    dg.reserve(n * n);
    for (const auto& gij : metric.leaf_full) dg.push_back(gij.derivative());
    std::vector<std::vector<double>> k(n, std::vector<double>(grid.count));
    std::vector<std::vector<double>> tau(n, std::vector<double>(grid.count, 0.0));
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double root = std::sqrt(metric.g00[i]);
        Mat gmat(n), bmat(n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                gmat(r, c) = metric.leaf_full[r * n + c][i];
                bmat(r, c) = -0.5 * dg[r * n + c][i] / root;
            }
        // A = G^{-1/2}-conjugated problem: eigenvalues of B v = k G v
        const auto vals = generalized_sym_eigenvalues(bmat, gmat);
        for (std::size_t c = 0; c < n; ++c) k[c][i] = vals[c];
        for (std::size_t m = 1; m <= n; ++m) {
            double s = 0.0;
            for (double kv : vals) s += std::pow(kv, static_cast<double>(m));
            tau[m - 1][i] = s;
        }
    }
    for (auto& v : k) out.principal.emplace_back(grid, std::move(v));
    for (auto& v : tau) out.tau.emplace_back(grid, std::move(v));
    return out;
}

ScalarField conformal_exponent(const std::function<double(double, double)>& psi,
                               const FieldHistory& lambda_history, double t) {
    if (lambda_history.empty()) throw InvalidInput("conformal_exponent: empty history");
    const Grid& grid = lambda_history.fields.front().grid();
    std::vector<double> acc(grid.count, 0.0);
    double prev_t = lambda_history.times.front();
    std::vector<double> prev(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i)
        prev[i] = psi(lambda_history.fields.front()[i], prev_t);
    for (std::size_t k = 1; k < lambda_history.times.size() && prev_t < t; ++k) {
        const double tk = std::min(lambda_history.times[k], t);
        const ScalarField lam = lambda_history.at_time(tk);
        const double h = tk - prev_t;
        for (std::size_t i = 0; i < grid.count; ++i) {
            const double cur = psi(lam[i], tk);
            acc[i] += 0.5 * h * (prev[i] + cur);
            prev[i] = cur;
        }
        prev_t = tk;
    }
    return ScalarField(grid, std::move(acc));
}

std::vector<ScalarField> evolve_conformal(const std::vector<ScalarField>& leaf0,
                                          const std::function<double(double, double)>& psi,
                                          const FieldHistory& lambda_history, double t) {
    const ScalarField expo = conformal_exponent(psi, lambda_history, t);
    std::vector<ScalarField> out;
    out.reserve(leaf0.size());
    for (const auto& g0 : leaf0) {
        std::vector<double> v(g0.size());
        for (std::size_t i = 0; i < g0.size(); ++i) v[i] = g0[i] * std::exp(expo[i]);
        out.emplace_back(g0.grid(), std::move(v));
    }
    return out;
}

RotationalMetric evolve_rotational(const RotationalMetric& g0,
                                   const std::function<double(double, double)>& psi,
                                   const FieldHistory& lambda_history, double t) {
    const ScalarField expo = conformal_exponent(psi, lambda_history, t);
    std::vector<double> v(g0.phi.size());
    for (std::size_t i = 0; i < g0.phi.size(); ++i)
        v[i] = g0.phi[i] * std::exp(0.5 * expo[i]);
    return RotationalMetric{ScalarField(g0.phi.grid(), std::move(v))};
}

ScalarField gauss_curvature_rotational(const RotationalMetric& g) {
    const ScalarField& phi = g.phi;
    const ScalarField dd = phi.second_derivative();
    std::vector<double> out(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (phi[i] <= 0.0)
            throw InvalidInput("gauss_curvature_rotational: phi must be positive");
        out[i] = -dd[i] / phi[i];
    }
    return ScalarField(phi.grid(), std::move(out));
}

namespace {

ScalarField metric_root(const SurfaceMetric& m) {
    std::vector<double> w(m.e.size());
    for (std::size_t i = 0; i < m.e.size(); ++i) {
        const double det = m.e[i] * m.g[i] - m.f[i] * m.f[i];
        if (det <= 0.0) throw InvalidInput("surface metric: EG - F^2 must be positive");
        w[i] = std::sqrt(det);
    }
    return ScalarField(m.e.grid(), std::move(w));
}

} // namespace

ScalarField gauss_curvature_efg(const SurfaceMetric& m) {
    const ScalarField w = metric_root(m);
    const ScalarField gx = m.g.derivative();
    std::vector<double> inner(m.g.size());
    for (std::size_t i = 0; i < m.g.size(); ++i) inner[i] = gx[i] / w[i];
    const ScalarField douter = ScalarField(m.g.grid(), std::move(inner)).derivative();
    std::vector<double> out(m.g.size());
    for (std::size_t i = 0; i < m.g.size(); ++i) out[i] = -douter[i] / (2.0 * w[i]);
    return ScalarField(m.g.grid(), std::move(out));
}

ScalarField gauss_curvature_brioschi(const SurfaceMetric& m) {
    const std::size_t count = m.e.size();
    const ScalarField ex = m.e.derivative(), fx = m.f.derivative(), gx = m.g.derivative();
    const ScalarField gxx = m.g.second_derivative();
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double E = m.e[i], F = m.f[i], G = m.g[i];
        const double det = E * G - F * F;
        if (det <= 0.0) throw InvalidInput("surface metric: EG - F^2 must be positive");
        // y-independent coefficients: all y-derivatives vanish
        const double m1[3][3] = {
            {-0.5 * gxx[i], 0.5 * ex[i], fx[i]},
            {-0.5 * gx[i], E, F},
            {0.0, F, G},
        };
        const double m2[3][3] = {
            {0.0, 0.0, 0.5 * gx[i]},
            {0.0, E, F},
            {0.5 * gx[i], F, G},
        };
        auto det3 = [](const double a[3][3]) {
            return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                   a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                   a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        };
        out[i] = (det3(m1) - det3(m2)) / (det * det);
    }
    return ScalarField(m.e.grid(), std::move(out));
}

ScalarField gauss_curvature_flow(const ScalarField& psi_integral, const ScalarField& w,
                                 const ScalarField& lambda_t, const ScalarField& n_lambda) {
    const std::size_t count = psi_integral.size();
    std::vector<double> weighted(count);
    for (std::size_t i = 0; i < count; ++i)
        weighted[i] = std::exp(-0.5 * psi_integral[i]) * w[i];
    const ScalarField div_inner = ScalarField(w.grid(), std::move(weighted)).derivative();
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = std::exp(-0.5 * psi_integral[i]) * div_inner[i] + n_lambda[i] -
                 lambda_t[i] * lambda_t[i];
    return ScalarField(w.grid(), std::move(out));
}

double volume_rate(const ScalarField& psi_values, const ScalarField& dvol) {
    if (psi_values.size() != dvol.size()) throw InvalidInput("volume_rate: size mismatch");
    std::vector<double> prod(psi_values.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = psi_values[i] * dvol[i];
    return 0.5 * integrate(ScalarField(psi_values.grid(), std::move(prod)));
}

UmbilicalFlowResult umbilical_flow(const GeneratingFamily& family, const ScalarField& lambda0,
                                   double t, int orientation, std::size_t time_samples) {
    ScalarFlux flux;
    flux.psi = [&family](double lam) { return umbilical_psi(family, lam, 0.0); };
    flux.dpsi = [&family](double lam) { return umbilical_psi_derivative(family, lam, 0.0); };

    UmbilicalFlowResult out;
    out.blowup_time = blowup_time_conservation(flux, lambda0, orientation);
    if (t >= out.blowup_time)
        throw BlowupError("umbilical_flow: requested time at or past blow-up", out.blowup_time);

    FieldHistory history;
    const std::size_t samples = std::max<std::size_t>(2, time_samples);
    history.times.reserve(samples);
    history.fields.reserve(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        const double s = t * static_cast<double>(k) / static_cast<double>(samples - 1);
        history.times.push_back(s);
        history.fields.push_back(solve_conservation_law(flux, lambda0, s, orientation));
    }
    out.lambda_t = history.fields.back();
    auto psi_of = [&family](double lam, double) { return umbilical_psi(family, lam, 0.0); };
    out.conformal_factor = conformal_exponent(psi_of, history, t)
                               .map([](double v) { return std::exp(v); });
    return out;
}

} // namespace egf
