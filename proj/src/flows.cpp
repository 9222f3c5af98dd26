#include "egf/flows.hpp"

#include <algorithm>
#include <cmath>

#include "egf/companion.hpp"
#include "egf/errors.hpp"
#include "egf/symmetric.hpp"

namespace egf {

GeneratingFamily::GeneratingFamily(std::size_t n, FamilyKind kind, Eval eval, Partial partial,
                                   std::string name)
    : n_(n), kind_(kind), eval_(std::move(eval)), partial_(std::move(partial)),
      name_(std::move(name)) {
    if (n_ == 0) throw InvalidInput("GeneratingFamily: n must be positive");
    if (!eval_) throw InvalidInput("GeneratingFamily: missing evaluator");
}

double GeneratingFamily::f(std::size_t j, const std::vector<double>& tau, double t) const {
    if (j >= n_) throw InvalidInput("GeneratingFamily: coefficient index out of range");
    return eval_(j, tau, t);
}

double GeneratingFamily::f_partial(std::size_t j, std::size_t s,
                                   const std::vector<double>& tau, double t) const {
    if (j >= n_ || s < 1 || s > n_)
        throw InvalidInput("GeneratingFamily: partial index out of range");
    if (partial_) return partial_(j, s, tau, t);
    const double h = 1e-6 * (1.0 + std::abs(tau[s - 1]));
    std::vector<double> tp = tau, tm = tau;
    tp[s - 1] += h;
    tm[s - 1] -= h;
    return (eval_(j, tp, t) - eval_(j, tm, t)) / (2.0 * h);
}

GeneratingFamily ricci_family(std::size_t n) {
    if (n < 2) throw InvalidInput("ricci_family: needs n >= 2");
    if (n == 2) {
        auto eval = [](std::size_t j, const std::vector<double>& tau, double) {
            return j == 0 ? tau[1] - tau[0] * tau[0] : 0.0;
        };
        auto part = [](std::size_t j, std::size_t s, const std::vector<double>& tau, double) {
            if (j != 0) return 0.0;
            return s == 1 ? -2.0 * tau[0] : 1.0;
        };
        return GeneratingFamily(2, FamilyKind::StateDependent, eval, part, "ricci");
    }
    auto eval = [](std::size_t j, const std::vector<double>& tau, double) {
        if (j == 1) return -2.0 * tau[0];
        if (j == 2) return 2.0;
        return 0.0;
    };
    auto part = [](std::size_t j, std::size_t s, const std::vector<double>&, double) {
        return (j == 1 && s == 1) ? -2.0 : 0.0;
    };
    return GeneratingFamily(n, FamilyKind::StateDependent, eval, part, "ricci");
}

GeneratingFamily ent_family(std::size_t s, std::size_t n) {
    if (s >= n) throw InvalidInput("ent_family: requires s < n");
    auto eval = [s, n](std::size_t j, const std::vector<double>& tau, double) -> double {
        if (j > s) return 0.0;
        const double sign = (j % 2) ? -1.0 : 1.0;
        const std::size_t idx = s - j;
        if (idx == 0) return sign;
        auto sj = sigma_from_tau(std::vector<double>(tau.begin(), tau.begin() + n));
        return sign * sj[idx - 1];
    };
    auto part = [s, n](std::size_t j, std::size_t q, const std::vector<double>& tau,
                       double) -> double {
        if (j > s) return 0.0;
        const std::size_t idx = s - j;
        if (idx == 0) return 0.0;
        const double sign = (j % 2) ? -1.0 : 1.0;
        auto sj = sigma_from_tau_with_jacobian(
            std::vector<double>(tau.begin(), tau.begin() + n));
        return sign * sj.dsigma(idx, q, n);
    };
    return GeneratingFamily(n, FamilyKind::StateDependent, eval, part,
                            "ent" + std::to_string(s));
}

GeneratingFamily power_family(std::size_t m, std::size_t n) {
    if (m >= n) throw InvalidInput("power_family: requires m < n");
    auto eval = [m](std::size_t j, const std::vector<double>&, double) {
        return j == m ? 1.0 : 0.0;
    };
    auto part = [](std::size_t, std::size_t, const std::vector<double>&, double) {
        return 0.0;
    };
    return GeneratingFamily(n, FamilyKind::StateDependent, eval, part,
                            "power" + std::to_string(m));
}

GeneratingFamily constant_family(double c, std::size_t n) {
    auto eval = [c](std::size_t j, const std::vector<double>&, double) {
        return j == 0 ? c : 0.0;
    };
    auto part = [](std::size_t, std::size_t, const std::vector<double>&, double) {
        return 0.0;
    };
    return GeneratingFamily(n, FamilyKind::StateDependent, eval, part, "constant");
}

GeneratingFamily scalar_psi_family(std::function<double(double)> psi,
                                   std::function<double(double)> dpsi, std::string name) {
    if (!psi) throw InvalidInput("scalar_psi_family: missing psi");
    auto eval = [psi](std::size_t, const std::vector<double>& tau, double) {
        return psi(tau[0]);
    };
    GeneratingFamily::Partial part;
    if (dpsi)
        part = [dpsi](std::size_t, std::size_t, const std::vector<double>& tau, double) {
            return dpsi(tau[0]);
        };
    return GeneratingFamily(1, FamilyKind::StateDependent, eval, part, std::move(name));
}

GeneratingFamily monomial_b1_family(double coeff, const std::vector<unsigned>& alpha,
                                    std::size_t n) {
    if (alpha.size() != n) throw InvalidInput("monomial_b1_family: alpha length != n");
    if (n < 2) throw InvalidInput("monomial_b1_family: needs n >= 2 (f multiplies b_1)");
    auto value = [alpha, coeff](const std::vector<double>& tau) {
        double v = coeff;
        for (std::size_t j = 0; j < alpha.size(); ++j)
            v *= std::pow(tau[j], static_cast<double>(alpha[j]));
        return v;
    };
    auto eval = [value](std::size_t j, const std::vector<double>& tau, double) {
        return j == 1 ? value(tau) : 0.0;
    };
    auto part = [alpha, coeff](std::size_t j, std::size_t s, const std::vector<double>& tau,
                               double) -> double {
        if (j != 1 || alpha[s - 1] == 0) return 0.0;
        double v = coeff * alpha[s - 1];
        for (std::size_t q = 0; q < alpha.size(); ++q) {
            const unsigned a = (q == s - 1) ? alpha[q] - 1 : alpha[q];
            v *= std::pow(tau[q], static_cast<double>(a));
        }
        return v;
    };
    return GeneratingFamily(n, FamilyKind::StateDependent, eval, part, "monomial");
}

std::string to_string(Hyperbolicity h) {
    switch (h) {
    case Hyperbolicity::Strictly: return "strictly-hyperbolic";
    case Hyperbolicity::Hyperbolic: return "hyperbolic";
    default: return "not-hyperbolic";
    }
}

namespace {

double tau_index(const std::vector<double>& tau_ext, std::size_t n, std::size_t j) {
    if (j == 0) return static_cast<double>(n);
    return tau_ext[j - 1];
}

void check_finite(const std::vector<double>& tau) {
    for (double v : tau)
        if (!std::isfinite(v)) throw InvalidInput("assemble: non-finite tau");
}

} // namespace

TruncatedSystem assemble_type_b(const GeneratingFamily& family,
                                const std::vector<double>& tau, double t) {
    const std::size_t n = family.n();
    if (tau.size() < n) throw InvalidInput("assemble_type_b: tau shorter than n");
    check_finite(tau);
    std::vector<double> tau_n(tau.begin(), tau.begin() + n);
    const auto tau_ext = extend_tau(tau_n, std::max<std::size_t>(n, 2 * n - 1));
    const auto sigma = sigma_from_tau(tau_n);

    TruncatedSystem sys;
    sys.a_tilde = Mat(n);
    sys.b_tilde = Mat(n);
    sys.source.assign(n, 0.0);

    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j) {
            double acc = 0.0;
            for (std::size_t m = 0; m < n; ++m) {
                const double fp = family.f_partial(m, j, tau_n, t);
                if (fp != 0.0) acc += tau_index(tau_ext, n, i + m - 1) * fp;
            }
            sys.a_tilde(i - 1, j - 1) = 0.5 * static_cast<double>(i) * acc;
        }

    for (std::size_t m = 1; m < n; ++m) {
        const double fm = family.f(m, tau_n, t);
        if (fm == 0.0) continue;
        Mat contrib = b_nm(sigma, static_cast<unsigned>(m - 1));
        contrib *= fm;
        sys.b_tilde += contrib;
    }
    return sys;
}

TruncatedSystem assemble_type_a(const GeneratingFamily& family,
                                const std::vector<double>& tau, double t,
                                const std::vector<double>& normal_df) {
    const std::size_t n = family.n();
    if (tau.size() < n) throw InvalidInput("assemble_type_a: tau shorter than n");
    if (normal_df.size() != n)
        throw InvalidInput("assemble_type_a: need one N(f_j) per coefficient");
    check_finite(tau);
    std::vector<double> tau_n(tau.begin(), tau.begin() + n);
    const auto tau_ext = extend_tau(tau_n, std::max<std::size_t>(n, 2 * n - 1));
    const auto sigma = sigma_from_tau(tau_n);

    TruncatedSystem sys;
    sys.a_tilde = Mat(n);
    sys.b_tilde = Mat(n);
    sys.source.assign(n, 0.0);

    for (std::size_t j = 1; j < n; ++j) {
        const double fj = family.f(j, tau_n, t);
        if (fj == 0.0) continue;
        Mat contrib = b_nm(sigma, static_cast<unsigned>(j - 1));
        contrib *= fj;
        sys.b_tilde += contrib;
    }
    for (std::size_t i = 1; i <= n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            acc += normal_df[j] * tau_index(tau_ext, n, i + j - 1);
        sys.source[i - 1] = -0.5 * static_cast<double>(i) * acc;
    }
    return sys;
}

Classification classify_matrix(const Mat& m, const ClassifyOptions& opt) {
    Classification out;
    const std::size_t n = m.n();
    if (n == 1) {
        out.kind = Hyperbolicity::Strictly;
        out.eigenvalues = {m(0, 0)};
        return out;
    }
    const auto dec = analyze_spectrum(m, opt.imag_tol_rel, opt.distinct_tol_rel);
    if (!dec.real_spectrum) {
        out.kind = Hyperbolicity::NotHyperbolic;
        out.detail = "complex eigenvalues";
        return out;
    }
    out.eigenvalues = dec.eigenvalues;
    if (dec.distinct) {
        out.kind = Hyperbolicity::Strictly;
    } else if (dec.complete_basis) {
        out.kind = Hyperbolicity::Hyperbolic;
        out.detail = "repeated eigenvalues with complete eigenbasis";
    } else {
        out.kind = Hyperbolicity::NotHyperbolic;
        out.detail = "defective eigenvalue";
    }
    return out;
}

Classification classify_hyperbolicity(const TruncatedSystem& sys, const ClassifyOptions& opt) {
    const std::size_t n = sys.n();
    if (n == 1) return classify_matrix(sys.matrix(), opt);

    // rank-1 A plus scalar B admits a closed decision (conditions H1/H2):
    // spectrum {c (n-1 times), c + tr A}, diagonalizable iff tr A != 0 or A = 0.
    const double scale = std::max({sys.a_tilde.max_abs(), sys.b_tilde.max_abs(), 1e-30});
    const double tol = opt.zero_tol_rel * scale;
    bool b_scalar = true;
    const double c = sys.b_tilde(0, 0);
    for (std::size_t i = 0; i < n && b_scalar; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double want = (i == j) ? c : 0.0;
            if (std::abs(sys.b_tilde(i, j) - want) > tol) {
                b_scalar = false;
                break;
            }
        }
    if (b_scalar && shifted_rank(sys.a_tilde, 0.0, opt.zero_tol_rel) <= 1) {
        const double tr = sys.a_tilde.trace();
        Classification out;
        if (std::abs(tr) <= tol) {
            const bool a_zero = sys.a_tilde.max_abs() <= tol;
            out.eigenvalues.assign(n, c);
            if (a_zero) {
                out.kind = Hyperbolicity::Hyperbolic;
                out.detail = "pure transport";
            } else {
                out.kind = Hyperbolicity::NotHyperbolic;
                out.detail = "nilpotent first-order part";
            }
            return out;
        }
        out.eigenvalues.assign(n, c);
        out.eigenvalues.back() = c + tr;
        std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
        out.kind = (n == 2) ? Hyperbolicity::Strictly : Hyperbolicity::Hyperbolic;
        return out;
    }
    return classify_matrix(sys.matrix(), opt);
}

RicciDiscriminant ricci_discriminant_n3(double sigma1, double sigma2, double sigma3) {
    // characteristic polynomial x^3 + 2 sigma1 x^2 + sigma1^2 x + 4 sigma3
    RicciDiscriminant out;
    out.d = 4.0 / 27.0 * sigma3 * (27.0 * sigma3 - sigma1 * sigma1 * sigma1);
    if (out.d < 0.0) {
        auto roots = polynomial_roots({4.0 * sigma3, sigma1 * sigma1, 2.0 * sigma1});
        out.classification.kind = Hyperbolicity::Strictly;
        for (auto& z : roots) out.classification.eigenvalues.push_back(z.real());
        std::sort(out.classification.eigenvalues.begin(),
                  out.classification.eigenvalues.end());
        return out;
    }
    if (out.d > 0.0) {
        out.classification.kind = Hyperbolicity::NotHyperbolic;
        out.classification.detail = "complex characteristic speeds";
        return out;
    }
    // boundary: a repeated speed whose eigenspace decides the classification
    const double p = -sigma1 * sigma1 / 3.0;
    const double q = 4.0 * sigma3 - 2.0 * sigma1 * sigma1 * sigma1 / 27.0;
    const auto tau = tau_from_sigma({sigma1, sigma2, sigma3}, 3);
    const Mat m = assemble_type_b(ricci_family(3), tau, 0.0).matrix();
    double rep;
    std::size_t mult;
    if (p == 0.0 && q == 0.0) {
        rep = -2.0 * sigma1 / 3.0;
        mult = 3;
        out.classification.eigenvalues = {rep, rep, rep};
    } else {
        rep = -1.5 * q / p - 2.0 * sigma1 / 3.0;
        mult = 2;
        const double simple = 3.0 * q / p - 2.0 * sigma1 / 3.0;
        out.classification.eigenvalues = {simple, rep, rep};
        std::sort(out.classification.eigenvalues.begin(),
                  out.classification.eigenvalues.end());
    }
    const std::size_t dim = 3 - shifted_rank(m, rep);
    out.classification.kind =
        dim == mult ? Hyperbolicity::Hyperbolic : Hyperbolicity::NotHyperbolic;
    out.classification.detail = "repeated characteristic speed";
    return out;
}

double sigma_evolution_rhs(const GeneratingFamily& family, const std::vector<double>& tau,
                           const std::vector<double>& normal_dtau, double t, std::size_t m) {
    const std::size_t n = family.n();
    if (m < 1 || m > n) throw InvalidInput("sigma_evolution_rhs: m outside [1, n]");
    if (tau.size() < n || normal_dtau.size() < n)
        throw InvalidInput("sigma_evolution_rhs: short state");
    std::vector<double> tau_n(tau.begin(), tau.begin() + n);
    const auto sigma = sigma_from_tau(tau_n);
    const std::size_t ext_len = std::max<std::size_t>(n, n + m - 1);
    const auto tau_ext = extend_tau(tau_n, ext_len);

    auto sigma_at = [&](std::size_t j) -> double {
        if (j == 0) return 1.0;
        return sigma[j - 1];
    };
    // N(tau_q) for q > n through the closure decomposition
    auto normal_tau = [&](std::size_t q) -> double {
        if (q <= n) return normal_dtau[q - 1];
        const auto cs = dtau_decomposition(n, q - n, sigma);
        double s = 0.0;
        for (std::size_t i = 1; i <= n; ++i) s += cs[i - 1] * normal_dtau[i - 1];
        return static_cast<double>(q) * s;
    };
    auto normal_f = [&](std::size_t j) {
        double s = 0.0;
        for (std::size_t q = 1; q <= n; ++q)
            s += family.f_partial(j, q, tau_n, t) * normal_dtau[q - 1];
        return s;
    };

    const double nf0 = normal_f(0);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double inner = nf0 * tau_index(tau_ext, n, i);
        for (std::size_t j = 1; j < n; ++j) {
            const double fj = family.f(j, tau_n, t);
            const double nfj = normal_f(j);
            if (fj == 0.0 && nfj == 0.0) continue;
            inner += nfj * tau_index(tau_ext, n, i + j) +
                     static_cast<double>(j) / static_cast<double>(i + j) * fj *
                         normal_tau(i + j);
        }
        const double sign = ((i + 1) % 2) ? -1.0 : 1.0;
        total += 0.5 * sign * sigma_at(m - i - 1) * inner;
    }
    return total;
}

double umbilical_psi(const GeneratingFamily& family, double lambda, double t) {
    const std::size_t n = family.n();
    std::vector<double> tau(n);
    double pw = lambda;
    for (std::size_t j = 0; j < n; ++j) {
        tau[j] = static_cast<double>(n) * pw;
        pw *= lambda;
    }
    double psi = 0.0;
    double lam_j = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        psi += family.f(j, tau, t) * lam_j;
        lam_j *= lambda;
    }
    return psi;
}

double umbilical_psi_derivative(const GeneratingFamily& family, double lambda, double t) {
    const std::size_t n = family.n();
    std::vector<double> tau(n);
    double pw = lambda;
    for (std::size_t j = 0; j < n; ++j) {
        tau[j] = static_cast<double>(n) * pw;
        pw *= lambda;
    }
    double d = 0.0;
    double lam_j = 1.0; // lambda^j
    for (std::size_t j = 0; j < n; ++j) {
        const double fj = family.f(j, tau, t);
        double chain = 0.0;
        for (std::size_t s = 1; s <= n; ++s)
            chain += family.f_partial(j, s, tau, t) * static_cast<double>(n) *
                     static_cast<double>(s) * std::pow(lambda, static_cast<double>(s - 1));
        d += chain * lam_j;
        if (j >= 1) d += fj * static_cast<double>(j) * std::pow(lambda, static_cast<double>(j - 1));
        lam_j *= lambda;
    }
    return d;
}

std::vector<double> ricci_curvature_rhs(const std::vector<double>& k,
                                        const std::vector<double>& normal_dk) {
    if (k.size() != normal_dk.size())
        throw InvalidInput("ricci_curvature_rhs: size mismatch");
    double tau1 = 0.0, sum_dk = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        tau1 += k[i];
        sum_dk += normal_dk[i];
    }
    std::vector<double> out(k.size());
    for (std::size_t i = 0; i < k.size(); ++i)
        out[i] = (tau1 - 2.0 * k[i]) * normal_dk[i] + k[i] * sum_dk;
    return out;
}

} // namespace egf
