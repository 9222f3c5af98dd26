#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "egf/field.hpp"
#include "egf/flows.hpp"
#include "egf/matrix.hpp"

namespace egf {

inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

/// Simple wave: values shifted by speed*t, cubic interpolation.
ScalarField solve_transport(double speed, const ScalarField& initial, double t);

/// Scalar flux psi with derivative, for d/dt u + (s/2) d/dx psi(u) = 0
/// where s is the orientation of N along the grid axis.
struct ScalarFlux {
    std::function<double(double)> psi;
    std::function<double(double)> dpsi;
};

/// Life span of the classical solution: -2 / min_x s * d/dx psi'(lambda0(x)),
/// infinity when that slope field is nonnegative.
double blowup_time_conservation(const ScalarFlux& flux, const ScalarField& lambda0,
                                int orientation = +1);

/// Implicit pre-blow-up solution lambda(x, t) = lambda0(xi),
/// x = xi + (s/2) psi'(lambda0(xi)) t. Throws BlowupError for t >= life span.
ScalarField solve_conservation_law(const ScalarFlux& flux, const ScalarField& lambda0,
                                   double t, int orientation = +1);

/// Foot of the characteristic through (x, t), solved by guarded Newton.
double conservation_characteristic_foot(const ScalarFlux& flux, const ScalarField& lambda0,
                                        double x, double t, int orientation = +1);

/// One term c * prod_j tau_j^alpha_j of a monomial coefficient function.
struct MonomialTerm {
    double coeff = 0.0;
    std::vector<unsigned> alpha;
};

/// Life span for the b_1 flow driven by a sum of monomials of joint degree m
/// and weight l: T = -(2/(l+1)) / min N(f0) (infinity when N(f0) >= 0).
double blowup_time_monomial(const std::vector<MonomialTerm>& terms,
                            const std::vector<ScalarField>& tau0, unsigned m, unsigned l,
                            int orientation = +1);

/// Life span of the umbilical extrinsic Ricci flow from the normal curvature:
/// 1 / ((n-1) sup N(lambda0^2)), infinity when N(lambda0^2) <= 0.
double ricci_umbilical_blowup_time(const ScalarField& lambda0, std::size_t n,
                                   int orientation = +1);

// ---- method of characteristics for d/dt g = f(tau) b_1 ---------------------

/// Scalar coefficient function of the state with partial derivatives.
struct StateFunction {
    std::function<double(const std::vector<double>&)> value;
    /// d value / d tau_s, s in [1, n]; optional (central differences otherwise)
    std::function<double(const std::vector<double>&, std::size_t)> partial;

    double eval(const std::vector<double>& tau) const { return value(tau); }
    double d(const std::vector<double>& tau, std::size_t s) const;
};

struct FdResult;

/// Exact solution operator built from the two characteristic families
/// of the b_1 flow. Construction checks the hyperbolicity condition on the
/// initial data and that tau_1 has no zeros (the ratio invariants divide by it).
class CharacteristicSolution {
public:
    enum class Method { Transport, ScalarConservation, HomogeneousLines, FdFallback };

    CharacteristicSolution(StateFunction f, std::vector<ScalarField> tau0);

    std::size_t n() const { return tau0_.size(); }
    Method method() const { return method_; }
    /// Estimated life span (exact for the transport/scalar/homogeneous paths).
    double validity_time() const { return validity_time_; }
    /// Degree and weight when the coefficient is a homogeneous monomial sum.
    std::pair<int, int> homogeneity() const { return {degree_m_, weight_l_}; }

    /// Full state at a point; exact on the closed-form paths.
    std::vector<double> evaluate(double x, double t) const;
    /// State sampled on the initial grid.
    std::vector<ScalarField> fields_at(double t) const;

    /// Characteristic speeds at a point: family 1 carries the first integral,
    /// family 2 the tau_m / tau_1^m ratios.
    double speed_first_family(double x, double t) const;
    double speed_second_family(double x, double t) const;

    /// First integral u = sum_s f_{,tau_s} tau_s evaluated on the state.
    double first_integral(const std::vector<double>& tau) const;

    /// Trace x(t) from (x0, 0) with RK4; returns sampled positions.
    std::vector<double> trace(int family, double x0,
                              const std::vector<double>& times) const;

private:
    std::vector<double> state_at(double x, double t) const;
    double line_foot(double x, double t) const;
    double f0_at(double xi) const;

    StateFunction f_;
    std::vector<ScalarField> tau0_;
    ScalarField f0_field_;                 // f on the initial data
    std::vector<ScalarField> ratio0_;      // tau_m / tau_1^m, m >= 2
    Method method_ = Method::FdFallback;
    double const_speed_ = 0.0;             // Transport path
    int degree_m_ = -1, weight_l_ = -1;    // HomogeneousLines path
    double validity_time_ = kInfiniteTime;
    mutable std::shared_ptr<FdResult> fallback_; // dense oracle for the general path
};

/// Convenience wrapper matching the one-shot use: solve and sample at t.
std::vector<ScalarField> solve_characteristics_b1(const StateFunction& f,
                                                  const std::vector<ScalarField>& tau0,
                                                  double t);

// ---- finite-difference oracle ----------------------------------------------

/// Time-stamped bundle of tau-fields.
struct FlowState {
    double t = 0.0;
    std::vector<ScalarField> tau;
};

/// Fills the quasilinear system  d/dt tau = -M d/dx tau + source  at a point.
using SystemCallback = std::function<void(const std::vector<double>& tau, double x, double t,
                                          Mat& matrix, std::vector<double>& source)>;

struct FdOptions {
    double cfl = 0.9;
    std::size_t store_samples = 65;       ///< stored time levels including both ends
    double gradient_stop_factor = 1e6;    ///< empirical blow-up heuristic
    std::size_t max_steps = 5'000'000;
    bool check_hyperbolic = true;
    double imag_tol_rel = 1e-8;
};

struct FdResult {
    std::vector<FlowState> trajectory;
    bool blew_up = false;
    double stop_time = 0.0;                ///< last valid time reached
    std::string stop_reason;               ///< empty when t_end was reached
    std::vector<std::pair<double, double>> gradient_history; ///< (t, max gradient)
    /// Gradient-catastrophe time extrapolated from the resolved part of the
    /// gradient history (1/max-gradient decays linearly to zero); infinity
    /// when no consistent growth was seen.
    double empirical_blowup_estimate = kInfiniteTime;

    FieldHistory component_history(std::size_t comp) const;
};

/// Local Lax-Friedrichs scheme in nonconservative form.
FdResult solve_fd(const SystemCallback& system_at, const std::vector<ScalarField>& tau0,
                  double t_end, const FdOptions& options = {});

/// Type-(b) family as a system callback (x-independent coefficients).
SystemCallback make_type_b_callback(const GeneratingFamily& family);

/// Scalar conservation-law callback: matrix (s/2) psi'(u).
SystemCallback make_conservation_callback(const ScalarFlux& flux, int orientation = +1);

/// RK4 integration of dx/dt = speed(x, t) sampled at the given times
/// (times must be increasing, starting at the launch time).
std::vector<double> integrate_curve(const std::function<double(double, double)>& speed,
                                    double x0, const std::vector<double>& times,
                                    std::size_t substeps_per_interval = 16);

} // namespace egf
