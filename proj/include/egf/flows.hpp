#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "egf/matrix.hpp"

namespace egf {

enum class FamilyKind {
    SpaceTime,      ///< coefficients f_j(x, t) known along the curve
    StateDependent, ///< coefficients f_j(tau, t)
};

/// The generating coefficients f_0..f_{n-1} of a flow, with their
/// tau-partials. Missing analytic partials fall back to central differences.
class GeneratingFamily {
public:
    using Eval = std::function<double(std::size_t j, const std::vector<double>& tau, double t)>;
    using Partial = std::function<double(std::size_t j, std::size_t s,
                                         const std::vector<double>& tau, double t)>;

    GeneratingFamily() = default;
    GeneratingFamily(std::size_t n, FamilyKind kind, Eval eval, Partial partial = nullptr,
                     std::string name = {});

    std::size_t n() const { return n_; }
    FamilyKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    bool has_analytic_partials() const { return static_cast<bool>(partial_); }

    double f(std::size_t j, const std::vector<double>& tau, double t) const;
    /// d f_j / d tau_s, s in [1, n]
    double f_partial(std::size_t j, std::size_t s, const std::vector<double>& tau,
                     double t) const;

private:
    std::size_t n_ = 0;
    FamilyKind kind_ = FamilyKind::StateDependent;
    Eval eval_;
    Partial partial_;
    std::string name_;
};

// ---- presets -------------------------------------------------------------

/// Extrinsic Ricci flow. n = 2 uses the closed conformal form f_0 = tau_2 - tau_1^2;
/// n >= 3 uses f_1 = -2 tau_1, f_2 = 2.
GeneratingFamily ricci_family(std::size_t n);

/// Newton-transformation flow T_s: f_j = (-1)^j sigma_{s-j}, j = 0..s; requires s < n.
GeneratingFamily ent_family(std::size_t s, std::size_t n);

/// f_j = delta_{jm}; requires m < n.
GeneratingFamily power_family(std::size_t m, std::size_t n);

/// f_0 = c.
GeneratingFamily constant_family(double c, std::size_t n);

/// n = 1 flow d/dt g = psi(lambda) g with scalar psi and its derivative.
GeneratingFamily scalar_psi_family(std::function<double(double)> psi,
                                   std::function<double(double)> dpsi,
                                   std::string name = "psi");

/// Single monomial f = coeff * prod_j tau_j^alpha_j (flow along b_1).
GeneratingFamily monomial_b1_family(double coeff, const std::vector<unsigned>& alpha,
                                    std::size_t n);

// ---- truncated systems ---------------------------------------------------

enum class Hyperbolicity { Strictly, Hyperbolic, NotHyperbolic };

std::string to_string(Hyperbolicity h);

struct Classification {
    Hyperbolicity kind = Hyperbolicity::NotHyperbolic;
    std::vector<double> eigenvalues; ///< empty when the spectrum is not real
    std::string detail;
};

struct ClassifyOptions {
    double imag_tol_rel = 1e-8;
    double distinct_tol_rel = 1e-9;
    double zero_tol_rel = 1e-12;
};

/// The n-by-n closed evolution system d/dt tau + (A + B) d/dx tau = source.
struct TruncatedSystem {
    Mat a_tilde;
    Mat b_tilde;
    std::vector<double> source;

    Mat matrix() const { return a_tilde + b_tilde; }
    std::size_t n() const { return a_tilde.n(); }
};

TruncatedSystem assemble_type_b(const GeneratingFamily& family,
                                const std::vector<double>& tau, double t);

/// Space-time coefficient system; `normal_df[j]` holds N(f_j) at the point.
TruncatedSystem assemble_type_a(const GeneratingFamily& family,
                                const std::vector<double>& tau, double t,
                                const std::vector<double>& normal_df);

Classification classify_matrix(const Mat& m, const ClassifyOptions& opt = {});
Classification classify_hyperbolicity(const TruncatedSystem& sys,
                                      const ClassifyOptions& opt = {});

// ---- flow-specific results ------------------------------------------------

/// Cubic discriminant of the n = 3 extrinsic Ricci system together with the
/// honest classification of the system matrix.
struct RicciDiscriminant {
    double d = 0.0;
    Classification classification;
};
RicciDiscriminant ricci_discriminant_n3(double sigma1, double sigma2, double sigma3);

/// Variational rate d/dt sigma_m given the state and the normal derivatives
/// of tau_1..tau_n.
double sigma_evolution_rhs(const GeneratingFamily& family, const std::vector<double>& tau,
                           const std::vector<double>& normal_dtau, double t, std::size_t m);

/// psi(lambda, t) = sum_j f_j(n lambda, ..., n lambda^n; t) lambda^j.
double umbilical_psi(const GeneratingFamily& family, double lambda, double t);
double umbilical_psi_derivative(const GeneratingFamily& family, double lambda, double t);

/// d/dt k_i = N(k_i (tau_1 - k_i)) expanded with the supplied N(k_i).
std::vector<double> ricci_curvature_rhs(const std::vector<double>& k,
                                        const std::vector<double>& normal_dk);

} // namespace egf
