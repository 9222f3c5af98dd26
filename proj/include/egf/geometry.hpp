#pragma once

#include <functional>
#include <vector>

#include "egf/field.hpp"
#include "egf/flows.hpp"
#include "egf/matrix.hpp"

namespace egf {

/// Metric in biregular coordinates: g = g00 dx0^2 + leaf part. The leaf part
/// is either diagonal (per-direction fields) or a full symmetric matrix per
/// grid point (row-major, n x n).
struct BiregularMetric {
    ScalarField g00;
    std::vector<ScalarField> leaf_diag;    ///< diagonal leaf metric, if used
    std::vector<ScalarField> leaf_full;    ///< n*n fields, row-major; empty for diagonal
    std::size_t leaf_dim = 0;

    bool diagonal() const { return leaf_full.empty(); }
};

/// Warped product g = dx0^2 + phi(x0)^2 ds_n^2.
struct RotationalMetric {
    ScalarField phi;
};

/// Surface metric E dx^2 + 2F dx dy + G dy^2 with y-independent coefficients.
struct SurfaceMetric {
    ScalarField e, f, g;
};

struct WeingartenData {
    std::vector<ScalarField> b_diag;        ///< second fundamental form (diagonal case)
    std::vector<ScalarField> principal;     ///< principal curvature fields k_i
    std::vector<ScalarField> tau;           ///< power sums tau_1..tau_n
};

/// Extract extrinsic curvature data: b = -(1/2) d0 g / sqrt(g00),
/// A = -(1/(2 sqrt(g00))) (d0 g) g^{-1}, tau_m = tr(A^m).
WeingartenData weingarten_from_metric(const BiregularMetric& metric);

/// Conformal factor exp(int_0^t psi(lambda_s, s) ds) on the grid, trapezoid
/// over the stored history samples up to t.
ScalarField conformal_exponent(const std::function<double(double, double)>& psi,
                               const FieldHistory& lambda_history, double t);

/// Evolved leaf metric g_t = g_0 * exp(int psi).
std::vector<ScalarField> evolve_conformal(const std::vector<ScalarField>& leaf0,
                                          const std::function<double(double, double)>& psi,
                                          const FieldHistory& lambda_history, double t);

/// Warping function phi_t = phi_0 * exp((1/2) int psi).
RotationalMetric evolve_rotational(const RotationalMetric& g0,
                                   const std::function<double(double, double)>& psi,
                                   const FieldHistory& lambda_history, double t);

/// K = -phi'' / phi.
ScalarField gauss_curvature_rotational(const RotationalMetric& g);

/// Reduced formula for y-independent coefficients:
/// K = -(1/(2 sqrt(EG - F^2))) d/dx ( dG/dx / sqrt(EG - F^2) ).
ScalarField gauss_curvature_efg(const SurfaceMetric& m);

/// Full Brioschi determinant formula, y-derivatives dropped; validation twin
/// of gauss_curvature_efg.
ScalarField gauss_curvature_brioschi(const SurfaceMetric& m);

/// Curvature of the evolving surface from the transported normal field:
/// K = div_t(e^{-I} V) + N(lambda) - lambda^2 with I = int psi and
/// w the x-component of V = nabla^0_N N; the time-t divergence weights by
/// the evolving area element, div_t = e^{-I/2} d/dx (e^{-I/2} w).
ScalarField gauss_curvature_flow(const ScalarField& psi_integral, const ScalarField& w,
                                 const ScalarField& lambda_t, const ScalarField& n_lambda);

/// (1/2) int psi dvol by trapezoid quadrature.
double volume_rate(const ScalarField& psi_values, const ScalarField& dvol);

struct UmbilicalFlowResult {
    ScalarField lambda_t;
    ScalarField conformal_factor; ///< exp(int_0^t psi(lambda_s) ds)
    double blowup_time = 0.0;
};

/// Totally umbilical evolution: single curvature field lambda driven by the
/// conservation law with flux psi from the family, leaf metric scaled
/// conformally. Exact pre-blow-up solve.
UmbilicalFlowResult umbilical_flow(const GeneratingFamily& family, const ScalarField& lambda0,
                                   double t, int orientation = +1,
                                   std::size_t time_samples = 257);

} // namespace egf
