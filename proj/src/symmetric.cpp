#include "egf/symmetric.hpp"

#include <cmath>

#include "egf/errors.hpp"

namespace egf {

double SymmetricProfile::tau_at(std::size_t j) const {
    if (j == 0) return static_cast<double>(n);
    if (j > tau.size()) throw InvalidInput("SymmetricProfile: tau index beyond extension");
    return tau[j - 1];
}

SymmetricProfile profile_from_roots(const std::vector<double>& roots, std::size_t extend_to) {
    const std::size_t n = roots.size();
    if (n == 0) throw InvalidInput("profile_from_roots: no roots");
    if (extend_to < n) throw InvalidInput("profile_from_roots: extend_to < n");
    SymmetricProfile p;
    p.n = n;
    p.tau.assign(extend_to, 0.0);
    for (std::size_t j = 1; j <= extend_to; ++j) {
        double s = 0.0;
        for (double k : roots) s += std::pow(k, static_cast<double>(j));
        p.tau[j - 1] = s;
    }
    // elementary symmetric functions by incremental polynomial expansion
    std::vector<double> e(n + 1, 0.0);
    e[0] = 1.0;
    std::size_t used = 0;
    for (double k : roots) {
        ++used;
        for (std::size_t j = used; j >= 1; --j) e[j] += k * e[j - 1];
    }
    p.sigma.assign(e.begin() + 1, e.end());
    return p;
}

std::vector<double> sigma_from_tau(const std::vector<double>& tau) {
    const std::size_t n = tau.size();
    if (n == 0) throw InvalidInput("sigma_from_tau: empty tau");
    // j*sigma_j = sum_{i=1..j} (-1)^{i-1} sigma_{j-i} tau_i, sigma_0 = 1
    std::vector<double> sig(n + 1, 0.0);
    sig[0] = 1.0;
    for (std::size_t j = 1; j <= n; ++j) {
        double s = 0.0;
        double sign = 1.0;
        for (std::size_t i = 1; i <= j; ++i) {
            s += sign * sig[j - i] * tau[i - 1];
            sign = -sign;
        }
        sig[j] = s / static_cast<double>(j);
    }
    return {sig.begin() + 1, sig.end()};
}

std::vector<double> tau_from_sigma(const std::vector<double>& sigma, std::size_t count) {
    if (count == 0) throw InvalidInput("tau_from_sigma: count must be >= 1");
    const std::size_t n = sigma.size();
    auto sig = [&](std::size_t j) -> double { return j <= n ? sigma[j - 1] : 0.0; };
    // tau_k = sum_{i=1..k-1} (-1)^{i-1} sigma_i tau_{k-i} + (-1)^{k-1} k sigma_k
    std::vector<double> tau(count, 0.0);
    for (std::size_t k = 1; k <= count; ++k) {
        double s = 0.0;
        double sign = 1.0;
        for (std::size_t i = 1; i < k; ++i) {
            s += sign * sig(i) * tau[k - i - 1];
            sign = -sign;
        }
        s += sign * static_cast<double>(k) * sig(k);
        tau[k - 1] = s;
    }
    return tau;
}

std::vector<double> extend_tau(const std::vector<double>& tau, std::size_t count) {
    if (count <= tau.size()) return {tau.begin(), tau.begin() + count};
    auto sigma = sigma_from_tau(tau);
    auto full = tau_from_sigma(sigma, count);
    // keep the given entries bit-exact
    for (std::size_t i = 0; i < tau.size(); ++i) full[i] = tau[i];
    return full;
}

SigmaJacobian sigma_from_tau_with_jacobian(const std::vector<double>& tau) {
    const std::size_t n = tau.size();
    SigmaJacobian out;
    out.sigma.assign(n, 0.0);
    out.d.assign(n * n, 0.0);
    std::vector<double> sig(n + 1, 0.0);
    sig[0] = 1.0;
    // dsig[j][s] = d sigma_j / d tau_s
    std::vector<std::vector<double>> dsig(n + 1, std::vector<double>(n + 1, 0.0));
    for (std::size_t j = 1; j <= n; ++j) {
        double s = 0.0;
        double sign = 1.0;
        for (std::size_t i = 1; i <= j; ++i) {
            s += sign * sig[j - i] * tau[i - 1];
            for (std::size_t q = 1; q <= n; ++q)
                dsig[j][q] += sign * dsig[j - i][q] * tau[i - 1];
            dsig[j][i] += sign * sig[j - i];
            sign = -sign;
        }
        sig[j] = s / static_cast<double>(j);
        for (std::size_t q = 1; q <= n; ++q) dsig[j][q] /= static_cast<double>(j);
        out.sigma[j - 1] = sig[j];
        for (std::size_t q = 1; q <= n; ++q) out.d[(j - 1) * n + (q - 1)] = dsig[j][q];
    }
    return out;
}

double beta_coefficient(std::size_t n, std::size_t m, std::size_t i,
                        const std::vector<double>& sigma) {
    if (i < 1 || i > n) throw InvalidInput("beta_coefficient: index i outside [1, n]");
    if (m < 1) throw InvalidInput("beta_coefficient: m must be >= 1");
    auto sig = [&](std::size_t j) -> double {
        return (j >= 1 && j <= sigma.size()) ? sigma[j - 1] : 0.0;
    };
    // beta_{n,1,i} = sigma_{n-i+1};
    // beta_{n,m,i} = beta_{n,m-1,n} sigma_{n-i+1} - beta_{n,m-1,i-1}, beta_{.,.,0} = 0
    std::vector<double> cur(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) cur[k] = sig(n - k + 1);
    for (std::size_t level = 2; level <= m; ++level) {
        std::vector<double> next(n + 1, 0.0);
        for (std::size_t k = 1; k <= n; ++k)
            next[k] = cur[n] * sig(n - k + 1) - cur[k - 1];
        cur.swap(next);
    }
    return cur[i];
}

std::vector<double> dtau_decomposition(std::size_t n, std::size_t m,
                                       const std::vector<double>& sigma) {
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        const double sign = ((n - i) % 2) ? -1.0 : 1.0;
        c[i - 1] = sign * beta_coefficient(n, m, i, sigma) / static_cast<double>(i);
    }
    return c;
}

} // namespace egf
