#include "egf/solvers.hpp"

#include <algorithm>
#include <cmath>

#include "egf/errors.hpp"
#include "egf/symmetric.hpp"

namespace egf {

ScalarField solve_transport(double speed, const ScalarField& initial, double t) {
    if (t < 0.0) throw InvalidInput("solve_transport: negative time");
    const Grid& g = initial.grid();
    std::vector<double> out(initial.size());
    for (std::size_t i = 0; i < initial.size(); ++i)
        out[i] = initial.sample(g.x(i) - speed * t);
    return ScalarField(g, std::move(out));
}

namespace {

// rounding noise of a centered difference of an (almost) flat field
double slope_noise_floor(double field_scale, double dx) {
    return 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, field_scale) / dx;
}

} // namespace

double blowup_time_conservation(const ScalarFlux& flux, const ScalarField& lambda0,
                                int orientation) {
    if (!flux.dpsi) throw InvalidInput("blowup_time_conservation: missing psi'");
    ScalarField w = lambda0.map(flux.dpsi);
    ScalarField slope = w.derivative();
    double mn = 0.0;
    for (std::size_t i = 0; i < slope.size(); ++i)
        mn = std::min(mn, orientation * slope[i]);
    if (mn >= -slope_noise_floor(w.max_abs(), lambda0.grid().dx)) return kInfiniteTime;
    return -2.0 / mn;
}

namespace {

// Guarded Newton for an increasing g; numeric derivative, bisection fallback.
double solve_increasing(const std::function<double(double)>& g, double seed, double span,
                        double tol) {
    double lo = seed, hi = seed;
    double glo = g(lo), ghi = glo;
    double step = std::max(span, tol);
    for (int k = 0; k < 70 && glo > 0.0; ++k) {
        lo -= step;
        step *= 2.0;
        glo = g(lo);
    }
    step = std::max(span, tol);
    for (int k = 0; k < 70 && ghi < 0.0; ++k) {
        hi += step;
        step *= 2.0;
        ghi = g(hi);
    }
    if (glo > 0.0 || ghi < 0.0)
        throw NumericalError("characteristic foot: failed to bracket");
    double xi = std::clamp(seed, lo, hi);
    for (int it = 0; it < 50; ++it) {
        const double gx = g(xi);
        if (std::abs(gx) < tol) return xi;
        if (gx > 0.0) hi = xi;
        else lo = xi;
        const double h = 1e-7 * (1.0 + std::abs(xi));
        const double d = (g(xi + h) - g(xi - h)) / (2.0 * h);
        double next = (d > 0.0) ? xi - gx / d : lo;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        xi = next;
    }
    if (std::abs(g(xi)) < tol * 100.0) return xi; // near-stationary tails converge slowly
    throw NumericalError("characteristic foot: Newton did not converge");
}

} // namespace

double conservation_characteristic_foot(const ScalarFlux& flux, const ScalarField& lambda0,
                                        double x, double t, int orientation) {
    const double half = 0.5 * orientation * t;
    auto g = [&](double xi) {
        return xi + half * flux.dpsi(lambda0.sample(xi)) - x;
    };
    const double tol = 1e-12 * (1.0 + std::abs(x));
    return solve_increasing(g, x, lambda0.grid().dx, tol);
}

ScalarField solve_conservation_law(const ScalarFlux& flux, const ScalarField& lambda0,
                                   double t, int orientation) {
    if (t < 0.0) throw InvalidInput("solve_conservation_law: negative time");
    const double life = blowup_time_conservation(flux, lambda0, orientation);
    if (t >= life)
        throw BlowupError("solve_conservation_law: requested time at or past blow-up", life);
    const Grid& g = lambda0.grid();
    std::vector<double> out(lambda0.size());
    for (std::size_t i = 0; i < lambda0.size(); ++i) {
        const double xi = conservation_characteristic_foot(flux, lambda0, g.x(i), t,
                                                           orientation);
        out[i] = lambda0.sample(xi);
    }
    return ScalarField(g, std::move(out));
}

double blowup_time_monomial(const std::vector<MonomialTerm>& terms,
                            const std::vector<ScalarField>& tau0, unsigned m, unsigned l,
                            int orientation) {
    if (terms.empty() || tau0.empty()) throw InvalidInput("blowup_time_monomial: empty input");
    const std::size_t n = tau0.size();
    for (const auto& term : terms) {
        if (term.alpha.size() != n)
            throw InvalidInput("blowup_time_monomial: alpha length mismatch");
        unsigned deg = 0, wt = 0;
        for (std::size_t j = 0; j < n; ++j) {
            deg += term.alpha[j];
            wt += static_cast<unsigned>(j + 1) * term.alpha[j];
        }
        if (deg != m || wt != l)
            throw InvalidInput("blowup_time_monomial: term outside J_{m,l}");
    }
    const Grid& g = tau0[0].grid();
    std::vector<double> f0(g.count, 0.0);
    for (std::size_t i = 0; i < g.count; ++i) {
        double acc = 0.0;
        for (const auto& term : terms) {
            double v = term.coeff;
            for (std::size_t j = 0; j < n; ++j)
                v *= std::pow(tau0[j][i], static_cast<double>(term.alpha[j]));
            acc += v;
        }
        f0[i] = acc;
    }
    ScalarField field(g, std::move(f0));
    ScalarField slope = field.derivative();
    double mn = 0.0;
    for (std::size_t i = 0; i < slope.size(); ++i)
        mn = std::min(mn, orientation * slope[i]);
    if (mn >= -slope_noise_floor(field.max_abs(), g.dx)) return kInfiniteTime;
    return -(2.0 / (static_cast<double>(l) + 1.0)) / mn;
}

double ricci_umbilical_blowup_time(const ScalarField& lambda0, std::size_t n,
                                   int orientation) {
    if (n < 2) throw InvalidInput("ricci_umbilical_blowup_time: needs n >= 2");
    // N(lambda^2) = 2 lambda N(lambda); the chain-rule form keeps one-sided
    // boundary stencils exact on linear data
    ScalarField dl = lambda0.derivative();
    double mx = 0.0;
    for (std::size_t i = 0; i < dl.size(); ++i)
        mx = std::max(mx, orientation * 2.0 * lambda0[i] * dl[i]);
    const double sq_scale = lambda0.max_abs() * lambda0.max_abs();
    if (mx <= slope_noise_floor(sq_scale, lambda0.grid().dx)) return kInfiniteTime;
    return 1.0 / ((static_cast<double>(n) - 1.0) * mx);
}

double StateFunction::d(const std::vector<double>& tau, std::size_t s) const {
    if (partial) return partial(tau, s);
    const double h = 1e-6 * (1.0 + std::abs(tau[s - 1]));
    std::vector<double> tp = tau, tm = tau;
    tp[s - 1] += h;
    tm[s - 1] -= h;
    return (value(tp) - value(tm)) / (2.0 * h);
}

// ---- CharacteristicSolution -------------------------------------------------

namespace {

std::vector<double> grid_state(const std::vector<ScalarField>& fields, std::size_t i) {
    std::vector<double> tau(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) tau[c] = fields[c][i];
    return tau;
}

std::vector<double> sampled_state(const std::vector<ScalarField>& fields, double x) {
    std::vector<double> tau(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) tau[c] = fields[c].sample(x);
    return tau;
}

} // namespace

CharacteristicSolution::CharacteristicSolution(StateFunction f, std::vector<ScalarField> tau0)
    : f_(std::move(f)), tau0_(std::move(tau0)) {
    if (tau0_.empty()) throw InvalidInput("characteristics: no fields");
    const std::size_t n = tau0_.size();
    const Grid& g = tau0_[0].grid();
    for (const auto& fld : tau0_)
        if (fld.size() != g.count) throw InvalidInput("characteristics: grid mismatch");

    std::vector<double> f0(g.count);
    double fmax = 0.0;
    for (std::size_t i = 0; i < g.count; ++i) {
        f0[i] = f_.eval(grid_state(tau0_, i));
        fmax = std::max(fmax, std::abs(f0[i]));
    }
    f0_field_ = ScalarField(g, std::move(f0));

    // hyperbolicity of the rank-one structure (condition H2): the trace of the
    // first-order part must be either nowhere zero or identically zero.
    // Scalar problems are hyperbolic unconditionally.
    double state_scale = 1.0;
    for (const auto& fld : tau0_) state_scale = std::max(state_scale, fld.max_abs());
    const double tol = 1e-10 * std::max(1.0, fmax);
    if (n >= 2) {
        bool any_zero_trace = false, all_zero_trace = true;
        for (std::size_t i = 0; i < g.count; ++i) {
            const auto tau = grid_state(tau0_, i);
            double tr = 0.0;
            for (std::size_t s = 1; s <= n; ++s)
                tr += 0.5 * static_cast<double>(s) * tau[s - 1] * f_.d(tau, s);
            if (std::abs(tr) <= tol) any_zero_trace = true;
            else all_zero_trace = false;
        }
        if (any_zero_trace && !all_zero_trace)
            throw NotHyperbolicError("characteristics: trace of the first-order part "
                                     "vanishes at isolated points of the initial data");
    }

    // constant-coefficient transport?
    bool flat_partials = true;
    for (std::size_t i = 0; i < g.count && flat_partials; i += std::max<std::size_t>(1, g.count / 16)) {
        const auto tau = grid_state(tau0_, i);
        for (std::size_t s = 1; s <= n; ++s)
            if (std::abs(f_.d(tau, s)) > 1e-12 * std::max(1.0, fmax)) {
                flat_partials = false;
                break;
            }
    }
    const double frange = f0_field_.max() - f0_field_.min();
    if (flat_partials && frange <= 1e-12 * std::max(1.0, fmax)) {
        method_ = Method::Transport;
        const_speed_ = 0.5 * f0_field_[0];
        validity_time_ = kInfiniteTime;
        return;
    }

    if (n == 1) {
        method_ = Method::ScalarConservation;
        ScalarFlux flux;
        auto fn = f_;
        flux.psi = [fn](double lam) { return lam * fn.eval({lam}); };
        flux.dpsi = [fn](double lam) { return fn.eval({lam}) + lam * fn.d({lam}, 1); };
        validity_time_ = blowup_time_conservation(flux, tau0_[0]);
        return;
    }

    // the ratio invariants tau_m / tau_1^m need tau_1 bounded away from zero
    double min_abs_tau1 = kInfiniteTime;
    for (std::size_t i = 0; i < g.count; ++i)
        min_abs_tau1 = std::min(min_abs_tau1, std::abs(tau0_[0][i]));
    if (min_abs_tau1 <= 1e-12 * state_scale)
        throw InvalidInput("characteristics: tau_1 vanishes, ratio invariants undefined");
    ratio0_.reserve(n - 1);
    for (std::size_t m = 2; m <= n; ++m) {
        std::vector<double> r(g.count);
        for (std::size_t i = 0; i < g.count; ++i)
            r[i] = tau0_[m - 1][i] / std::pow(tau0_[0][i], static_cast<double>(m));
        ratio0_.emplace_back(g, std::move(r));
    }

    // detect a homogeneous coefficient: u = m f and sum_s s f_s tau_s = l f
    bool homogeneous = true;
    double m_est = 0.0, l_est = 0.0;
    int votes = 0;
    for (std::size_t k = 0; k < 10 && homogeneous; ++k) {
        auto tau = grid_state(tau0_, (k * g.count) / 10);
        const double scale = 0.9 + 0.03 * static_cast<double>(k);
        for (double& v : tau) v *= scale;
        const double fv = f_.eval(tau);
        if (std::abs(fv) < 1e-9 * std::max(1.0, fmax)) continue;
        double u = 0.0, w = 0.0;
        for (std::size_t s = 1; s <= n; ++s) {
            const double ds = f_.d(tau, s);
            u += ds * tau[s - 1];
            w += static_cast<double>(s) * ds * tau[s - 1];
        }
        const double mr = u / fv, lr = w / fv;
        if (votes == 0) {
            m_est = mr;
            l_est = lr;
        } else if (std::abs(mr - m_est) > 1e-6 || std::abs(lr - l_est) > 1e-6) {
            homogeneous = false;
        }
        ++votes;
    }
    const double m_round = std::round(m_est), l_round = std::round(l_est);
    if (homogeneous && votes >= 3 && std::abs(m_est - m_round) < 1e-6 &&
        std::abs(l_est - l_round) < 1e-6 && m_round >= 1.0 && l_round >= m_round) {
        method_ = Method::HomogeneousLines;
        degree_m_ = static_cast<int>(m_round);
        weight_l_ = static_cast<int>(l_round);
        ScalarField slope = f0_field_.derivative();
        const double mn = slope.min();
        validity_time_ = (mn >= 0.0)
                             ? kInfiniteTime
                             : -(2.0 / (static_cast<double>(weight_l_) + 1.0)) / mn;
        return;
    }

    method_ = Method::FdFallback;
}

double CharacteristicSolution::f0_at(double xi) const { return f0_field_.sample(xi); }

double CharacteristicSolution::line_foot(double x, double t) const {
    const double half = 0.5 * (static_cast<double>(weight_l_) + 1.0) * t;
    auto g = [&](double xi) { return xi + half * f0_at(xi) - x; };
    return solve_increasing(g, x, tau0_[0].grid().dx, 1e-12 * (1.0 + std::abs(x)));
}

double CharacteristicSolution::first_integral(const std::vector<double>& tau) const {
    double u = 0.0;
    for (std::size_t s = 1; s <= tau.size(); ++s) u += f_.d(tau, s) * tau[s - 1];
    return u;
}

std::vector<double> CharacteristicSolution::state_at(double x, double t) const {
    const std::size_t n = tau0_.size();
    switch (method_) {
    case Method::Transport: {
        std::vector<double> out(n);
        for (std::size_t c = 0; c < n; ++c) out[c] = tau0_[c].sample(x - const_speed_ * t);
        return out;
    }
    case Method::ScalarConservation: {
        auto fn = f_;
        ScalarFlux flux;
        flux.dpsi = [fn](double lam) { return fn.eval({lam}) + lam * fn.d({lam}, 1); };
        const double xi = conservation_characteristic_foot(flux, tau0_[0], x, t);
        return {tau0_[0].sample(xi)};
    }
    case Method::HomogeneousLines: {
        if (validity_time_ < kInfiniteTime && t >= validity_time_)
            throw BlowupError("characteristics: past blow-up", validity_time_);
        const double fval = f0_at(line_foot(x, t));
        // trace the slow family back to t = 0 through the known f field
        const std::size_t steps =
            std::max<std::size_t>(128, static_cast<std::size_t>(256.0 * t));
        double pos = x;
        const double ds = t / static_cast<double>(steps);
        auto speed = [&](double px, double ps) { return 0.5 * f0_at(line_foot(px, ps)); };
        for (std::size_t k = 0; k < steps; ++k) {
            const double s1 = t - static_cast<double>(k) * ds;
            const double k1 = speed(pos, s1);
            const double k2 = speed(pos - 0.5 * ds * k1, s1 - 0.5 * ds);
            const double k3 = speed(pos - 0.5 * ds * k2, s1 - 0.5 * ds);
            const double k4 = speed(pos - ds * k3, s1 - ds);
            pos -= ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        const double foot2 = pos;
        std::vector<double> unit(n, 1.0);
        for (std::size_t m = 2; m <= n; ++m) unit[m - 1] = ratio0_[m - 2].sample(foot2);
        const double k_coef = f_.eval(unit);
        if (std::abs(k_coef) < 1e-300)
            throw NumericalError("characteristics: degenerate ratio state");
        const double ratio = fval / k_coef;
        double tau1;
        if (weight_l_ % 2 == 1) {
            tau1 = std::copysign(std::pow(std::abs(ratio), 1.0 / weight_l_), ratio);
        } else {
            if (ratio < 0.0)
                throw NumericalError("characteristics: inconsistent branch for even weight");
            tau1 = std::copysign(std::pow(ratio, 1.0 / weight_l_), tau0_[0].sample(foot2));
        }
        std::vector<double> out(n);
        out[0] = tau1;
        for (std::size_t m = 2; m <= n; ++m)
            out[m - 1] = unit[m - 1] * std::pow(tau1, static_cast<double>(m));
        return out;
    }
    case Method::FdFallback:
    default: {
        if (!fallback_ || fallback_->stop_time < t) {
            auto self_f = f_;
            const std::size_t nn = n;
            SystemCallback cb = [self_f, nn](const std::vector<double>& tau, double, double,
                                             Mat& m, std::vector<double>& src) {
                const double fv = self_f.eval(tau);
                for (std::size_t i = 1; i <= nn; ++i)
                    for (std::size_t j = 1; j <= nn; ++j)
                        m(i - 1, j - 1) = 0.5 * static_cast<double>(i) * tau[i - 1] *
                                              self_f.d(tau, j) +
                                          (i == j ? 0.5 * fv : 0.0);
                std::fill(src.begin(), src.end(), 0.0);
            };
            FdOptions opt;
            opt.store_samples = std::max<std::size_t>(129, static_cast<std::size_t>(64 * t) + 1);
            fallback_ = std::make_shared<FdResult>(solve_fd(cb, tau0_, t, opt));
        }
        std::vector<double> out(n);
        for (std::size_t c = 0; c < n; ++c)
            out[c] = fallback_->component_history(c).value_at(x, t);
        return out;
    }
    }
}

std::vector<double> CharacteristicSolution::evaluate(double x, double t) const {
    if (t < 0.0) throw InvalidInput("characteristics: negative time");
    if (t == 0.0) return sampled_state(tau0_, x);
    return state_at(x, t);
}

std::vector<ScalarField> CharacteristicSolution::fields_at(double t) const {
    const Grid& g = tau0_[0].grid();
    std::vector<std::vector<double>> vals(n(), std::vector<double>(g.count));
    for (std::size_t i = 0; i < g.count; ++i) {
        const auto tau = evaluate(g.x(i), t);
        for (std::size_t c = 0; c < n(); ++c) vals[c][i] = tau[c];
    }
    std::vector<ScalarField> out;
    out.reserve(n());
    for (auto& v : vals) out.emplace_back(g, std::move(v));
    return out;
}

double CharacteristicSolution::speed_first_family(double x, double t) const {
    const auto tau = evaluate(x, t);
    double tr = 0.0;
    for (std::size_t s = 1; s <= tau.size(); ++s)
        tr += 0.5 * static_cast<double>(s) * tau[s - 1] * f_.d(tau, s);
    return tr + 0.5 * f_.eval(tau);
}

double CharacteristicSolution::speed_second_family(double x, double t) const {
    return 0.5 * f_.eval(evaluate(x, t));
}

std::vector<double> CharacteristicSolution::trace(int family, double x0,
                                                  const std::vector<double>& times) const {
    auto speed = [&](double x, double t) {
        return family == 1 ? speed_first_family(x, t) : speed_second_family(x, t);
    };
    return integrate_curve(speed, x0, times);
}

std::vector<ScalarField> solve_characteristics_b1(const StateFunction& f,
                                                  const std::vector<ScalarField>& tau0,
                                                  double t) {
    CharacteristicSolution sol(f, tau0);
    return sol.fields_at(t);
}

// ---- finite differences ------------------------------------------------------

FieldHistory FdResult::component_history(std::size_t comp) const {
    FieldHistory h;
    h.times.reserve(trajectory.size());
    h.fields.reserve(trajectory.size());
    for (const auto& st : trajectory) {
        h.times.push_back(st.t);
        h.fields.push_back(st.tau[comp]);
    }
    return h;
}

namespace {

// Least-squares intercept of 1/max-gradient against time over the window where
// the growth is pronounced but the profile is still grid-resolved.
double extrapolate_catastrophe(const std::vector<std::pair<double, double>>& history) {
    if (history.size() < 8) return kInfiniteTime;
    const double base = std::max(history.front().second, 1e-12);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (const auto& [t, m] : history) {
        if (m < 4.0 * base || m > 64.0 * base) continue;
        const double y = 1.0 / m;
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++count;
    }
    if (count < 4) return kInfiniteTime;
    const double denom = count * sxx - sx * sx;
    if (denom <= 0.0) return kInfiniteTime;
    const double slope = (count * sxy - sx * sy) / denom;
    const double inter = (sy - slope * sx) / count;
    if (slope >= 0.0) return kInfiniteTime;
    return -inter / slope;
}

} // namespace

namespace {

double neighbor(const std::vector<double>& u, long i, long count, Boundary bc) {
    if (i >= 0 && i < count) return u[static_cast<std::size_t>(i)];
    if (bc == Boundary::Periodic) {
        long k = i % count;
        if (k < 0) k += count;
        return u[static_cast<std::size_t>(k)];
    }
    if (i < 0) return 2.0 * u[0] - u[1]; // linear ghost
    return 2.0 * u[count - 1] - u[count - 2];
}

} // namespace

FdResult solve_fd(const SystemCallback& system_at, const std::vector<ScalarField>& tau0,
                  double t_end, const FdOptions& options) {
    if (tau0.empty()) throw InvalidInput("solve_fd: no fields");
    if (!(options.cfl > 0.0) || options.cfl > 0.9)
        throw InvalidInput("solve_fd: cfl must lie in (0, 0.9]");
    const std::size_t n = tau0.size();
    const Grid& g = tau0[0].grid();
    const long count = static_cast<long>(g.count);
    const double dx = g.dx;

    std::vector<std::vector<double>> cur(n), nxt(n);
    for (std::size_t c = 0; c < n; ++c) {
        cur[c] = tau0[c].values();
        nxt[c].assign(g.count, 0.0);
    }

    FdResult result;
    const std::size_t samples = std::max<std::size_t>(2, options.store_samples);
    std::vector<double> sample_times(samples);
    for (std::size_t k = 0; k < samples; ++k)
        sample_times[k] = t_end * static_cast<double>(k) / static_cast<double>(samples - 1);

    auto record = [&](double t) {
        FlowState st;
        st.t = t;
        st.tau.reserve(n);
        for (std::size_t c = 0; c < n; ++c) st.tau.emplace_back(g, cur[c]);
        result.trajectory.push_back(std::move(st));
    };

    auto max_gradient = [&]() {
        double m = 0.0;
        for (std::size_t c = 0; c < n; ++c)
            for (long i = 0; i < count; ++i) {
                const double d = (neighbor(cur[c], i + 1, count, g.boundary) -
                                  neighbor(cur[c], i - 1, count, g.boundary)) /
                                 (2.0 * dx);
                m = std::max(m, std::abs(d));
            }
        return m;
    };

    const double grad0 = std::max(max_gradient(), 1e-12);
    record(0.0);
    result.gradient_history.push_back({0.0, grad0});
    std::size_t next_sample = 1;

    // per-point matrices and interface speeds, reused across steps
    std::vector<double> mats(g.count * n * n);
    std::vector<double> srcs(g.count * n);
    std::vector<double> alphas(g.count);
    Mat m_buf(n);
    std::vector<double> src_buf(n), tau_buf(n);

    double t = 0.0;
    for (std::size_t step = 0; step < options.max_steps && t < t_end; ++step) {
        double max_speed = 0.0;
        for (long i = 0; i < count; ++i) {
            for (std::size_t c = 0; c < n; ++c) tau_buf[c] = cur[c][static_cast<std::size_t>(i)];
            system_at(tau_buf, g.x(static_cast<std::size_t>(i)), t, m_buf, src_buf);
            for (std::size_t r = 0; r < n; ++r) {
                srcs[static_cast<std::size_t>(i) * n + r] = src_buf[r];
                for (std::size_t c2 = 0; c2 < n; ++c2)
                    mats[(static_cast<std::size_t>(i) * n + r) * n + c2] = m_buf(r, c2);
            }
            double local = 0.0;
            bool complex_speeds = false;
            if (n == 1) {
                local = std::abs(m_buf(0, 0));
            } else if (n == 2) {
                // closed form keeps the hot loop free of allocations
                const double tr = m_buf(0, 0) + m_buf(1, 1);
                const double det = m_buf(0, 0) * m_buf(1, 1) - m_buf(0, 1) * m_buf(1, 0);
                const double disc = tr * tr - 4.0 * det;
                const double scale = tr * tr + 4.0 * std::abs(det);
                if (disc >= -options.imag_tol_rel * std::max(scale, 1e-30)) {
                    const double root = std::sqrt(std::max(disc, 0.0));
                    local = 0.5 * (std::abs(tr) + root);
                } else {
                    complex_speeds = true;
                    local = std::sqrt(std::abs(det));
                }
            } else {
                const auto roots = polynomial_roots(characteristic_polynomial(m_buf));
                double rad = 0.0;
                for (const auto& z : roots) rad = std::max(rad, std::abs(z));
                for (const auto& z : roots)
                    if (std::abs(z.imag()) > options.imag_tol_rel * std::max(rad, 1e-30))
                        complex_speeds = true;
                local = rad;
            }
            if (complex_speeds && options.check_hyperbolic)
                throw NotHyperbolicError(
                    "solve_fd: complex characteristic speeds",
                    "x = " + std::to_string(g.x(static_cast<std::size_t>(i))) +
                        ", t = " + std::to_string(t));
            alphas[static_cast<std::size_t>(i)] = local;
            max_speed = std::max(max_speed, local);
        }

        double dt = (max_speed > 1e-14) ? options.cfl * dx / max_speed : (t_end - t);
        dt = std::min(dt, t_end - t);
        if (next_sample < samples) dt = std::min(dt, sample_times[next_sample] - t);
        if (dt <= 0.0) dt = 1e-15 * std::max(1.0, t);

        const double r = dt / (2.0 * dx);
        for (long i = 0; i < count; ++i) {
            const std::size_t iu = static_cast<std::size_t>(i);
            const double a_plus = std::max(alphas[iu],
                                           alphas[static_cast<std::size_t>(
                                               (i + 1 < count) ? i + 1
                                               : (g.boundary == Boundary::Periodic ? 0 : i))]);
            const double a_minus = std::max(alphas[iu],
                                            alphas[static_cast<std::size_t>(
                                                (i > 0) ? i - 1
                                                : (g.boundary == Boundary::Periodic ? count - 1
                                                                                    : i))]);
            for (std::size_t rrow = 0; rrow < n; ++rrow) {
                double adv = 0.0;
                for (std::size_t c2 = 0; c2 < n; ++c2) {
                    const double up = neighbor(cur[c2], i + 1, count, g.boundary);
                    const double dn = neighbor(cur[c2], i - 1, count, g.boundary);
                    adv += mats[(iu * n + rrow) * n + c2] * (up - dn);
                }
                const double up = neighbor(cur[rrow], i + 1, count, g.boundary);
                const double dn = neighbor(cur[rrow], i - 1, count, g.boundary);
                const double here = cur[rrow][iu];
                const double diff = a_plus * (up - here) - a_minus * (here - dn);
                nxt[rrow][iu] = here - r * adv + r * diff + dt * srcs[iu * n + rrow];
            }
        }
        cur.swap(nxt);
        t += dt;

        bool finite = true;
        for (std::size_t c = 0; c < n && finite; ++c)
            for (double v : cur[c])
                if (!std::isfinite(v)) {
                    finite = false;
                    break;
                }
        if (!finite)
            throw NumericalError("solve_fd: solution left the representable range", t - dt);

        const double grad = max_gradient();
        result.gradient_history.push_back({t, grad});
        if (grad > options.gradient_stop_factor * grad0) {
            result.blew_up = true;
            result.stop_time = t;
            result.stop_reason = "gradient growth exceeded stop factor";
            result.empirical_blowup_estimate = extrapolate_catastrophe(result.gradient_history);
            record(t);
            return result;
        }
        while (next_sample < samples && t >= sample_times[next_sample] - 1e-14) {
            record(sample_times[next_sample]);
            ++next_sample;
        }
    }
    result.stop_time = t;
    result.empirical_blowup_estimate = extrapolate_catastrophe(result.gradient_history);
    if (t < t_end) {
        result.stop_reason = "step limit reached";
        record(t);
    }
    return result;
}

SystemCallback make_type_b_callback(const GeneratingFamily& family) {
    return [family](const std::vector<double>& tau, double, double t, Mat& m,
                    std::vector<double>& src) {
        const TruncatedSystem sys = assemble_type_b(family, tau, t);
        m = sys.matrix();
        src = sys.source;
    };
}

SystemCallback make_conservation_callback(const ScalarFlux& flux, int orientation) {
    return [flux, orientation](const std::vector<double>& tau, double, double, Mat& m,
                               std::vector<double>& src) {
        m(0, 0) = 0.5 * orientation * flux.dpsi(tau[0]);
        src[0] = 0.0;
    };
}

std::vector<double> integrate_curve(const std::function<double(double, double)>& speed,
                                    double x0, const std::vector<double>& times,
                                    std::size_t substeps_per_interval) {
    if (times.empty()) return {};
    std::vector<double> out;
    out.reserve(times.size());
    double x = x0;
    out.push_back(x);
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double h = (times[k] - times[k - 1]) / static_cast<double>(substeps_per_interval);
        double tcur = times[k - 1];
        for (std::size_t s = 0; s < substeps_per_interval; ++s) {
            const double k1 = speed(x, tcur);
            const double k2 = speed(x + 0.5 * h * k1, tcur + 0.5 * h);
            const double k3 = speed(x + 0.5 * h * k2, tcur + 0.5 * h);
            const double k4 = speed(x + h * k3, tcur + h);
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            tcur += h;
        }
        out.push_back(x);
    }
    return out;
}

} // namespace egf
