#include "egf/companion.hpp"

#include <cmath>

#include "egf/errors.hpp"
#include "egf/symmetric.hpp"

namespace egf {

Mat build_companion(const CompanionSpec& spec) {
    const std::size_t n = spec.p.size();
    if (n == 0 || spec.c.size() != n)
        throw InvalidInput("build_companion: p and c must have equal positive length");
    if (spec.c[0] != 1.0) throw InvalidInput("build_companion: c_1 must equal 1");
    for (double ci : spec.c)
        if (ci == 0.0) throw InvalidInput("build_companion: zero weight");
    auto c = [&](std::size_t i) { return spec.c[i - 1]; };
    auto p = [&](std::size_t i) { return spec.p[i - 1]; };
    Mat m(n);
    if (spec.form == CompanionForm::Upper) {
        for (std::size_t i = 1; i < n; ++i) m(i - 1, i) = c(n - i) / c(n - i + 1);
        for (std::size_t j = 1; j <= n; ++j) m(n - 1, j - 1) = c(n - j + 1) * p(n - j + 1);
    } else {
        for (std::size_t j = 1; j <= n; ++j) m(0, j - 1) = c(j) * p(j);
        for (std::size_t i = 2; i <= n; ++i) m(i - 1, i - 2) = c(i - 1) / c(i);
    }
    return m;
}

std::vector<double> b_family_weights(std::size_t n) {
    std::vector<double> c(n);
    for (std::size_t i = 1; i <= n; ++i)
        c[i - 1] = static_cast<double>(n) / static_cast<double>(n - i + 1);
    return c;
}

std::vector<double> p_from_sigma(const std::vector<double>& sigma) {
    std::vector<double> p(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i)
        p[i] = ((i % 2) ? -1.0 : 1.0) * sigma[i];
    return p;
}

Mat b_n1(const std::vector<double>& sigma) {
    const std::size_t n = sigma.size();
    if (n == 0) throw InvalidInput("b_n1: empty sigma");
    Mat m(n);
    for (std::size_t i = 1; i < n; ++i)
        m(i - 1, i) = static_cast<double>(i) / static_cast<double>(i + 1);
    for (std::size_t j = 1; j <= n; ++j) {
        const double sign = ((n - j) % 2) ? -1.0 : 1.0;
        m(n - 1, j - 1) = sign * static_cast<double>(n) / static_cast<double>(j) * sigma[n - j];
    }
    return m;
}

Mat b_nm(const std::vector<double>& sigma, unsigned m) {
    Mat b = b_n1(sigma).power(m);
    b *= (static_cast<double>(m) + 1.0) / 2.0;
    return b;
}

Mat b_nm_entrywise(const std::vector<double>& sigma, unsigned m) {
    const std::size_t n = sigma.size();
    Mat out(n);
    if (m == 0) {
        for (std::size_t i = 0; i < n; ++i) out(i, i) = 0.5;
        return out;
    }
    for (std::size_t i = 1; i <= n; ++i) {
        if (i + m <= n) {
            out(i - 1, (i + m) - 1) = static_cast<double>(i) * (m + 1.0) /
                                      (2.0 * static_cast<double>(i + m));
        } else {
            for (std::size_t j = 1; j <= n; ++j) {
                const double sign = ((n - j) % 2) ? -1.0 : 1.0;
                out(i - 1, j - 1) = sign * static_cast<double>(i) * (m + 1.0) /
                                    (2.0 * static_cast<double>(j)) *
                                    beta_coefficient(n, i + m - n, j, sigma);
            }
        }
    }
    return out;
}

namespace {

EigenPair make_pair(const Mat& m, double value, std::vector<double> v) {
    EigenPair p;
    p.value = value;
    const auto mv = m.apply(v);
    double res = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        res = std::max(res, std::abs(mv[i] - value * v[i]));
    p.vector = std::move(v);
    p.residual = res;
    return p;
}

} // namespace

std::vector<EigenPair> b_family_eigensystem(const std::vector<double>& roots, unsigned m) {
    const std::size_t n = roots.size();
    auto sigma = profile_from_roots(roots, n).sigma;
    const Mat mat = b_nm(sigma, m);
    std::vector<EigenPair> out;
    out.reserve(n);
    for (double lam : roots) {
        std::vector<double> v(n);
        double pw = 1.0;
        for (std::size_t i = 1; i <= n; ++i) {
            v[i - 1] = static_cast<double>(i) * pw;
            pw *= lam;
        }
        const double value = (static_cast<double>(m) + 1.0) / 2.0 *
                             std::pow(lam, static_cast<double>(m));
        out.push_back(make_pair(mat, value, std::move(v)));
    }
    return out;
}

std::vector<EigenPair> companion_eigensystem(const CompanionSpec& spec,
                                             const std::vector<double>& roots) {
    const std::size_t n = spec.c.size();
    const Mat mat = build_companion(spec);
    auto c = [&](std::size_t i) { return spec.c[i - 1]; };
    std::vector<EigenPair> out;
    out.reserve(roots.size());
    for (double lam : roots) {
        std::vector<double> v(n);
        double pw = 1.0;
        for (std::size_t i = 1; i <= n; ++i) {
            v[i - 1] = c(n) / c(n - i + 1) * pw;
            pw *= lam;
        }
        if (spec.form == CompanionForm::Lower) {
            // index-reversed form carries the reversed eigenvector
            std::vector<double> w(v.rbegin(), v.rend());
            v.swap(w);
        }
        out.push_back(make_pair(mat, lam, std::move(v)));
    }
    return out;
}

std::size_t eigenspace_dimension(const Mat& m, double value, double tol_rel) {
    return m.n() - shifted_rank(m, value, tol_rel);
}

} // namespace egf
