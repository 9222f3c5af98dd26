#include "egf/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "egf/errors.hpp"

namespace egf {

Mat Mat::identity(std::size_t n) {
    Mat m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::operator*(const Mat& rhs) const {
    Mat out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const double v = (*this)(i, k);
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < n_; ++j) out(i, j) += v * rhs(k, j);
        }
    return out;
}

Mat Mat::operator+(const Mat& rhs) const {
    Mat out = *this;
    out += rhs;
    return out;
}

Mat Mat::operator-(const Mat& rhs) const {
    Mat out = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] -= rhs.a_[i];
    return out;
}

Mat& Mat::operator+=(const Mat& rhs) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += rhs.a_[i];
    return *this;
}

Mat& Mat::operator*=(double s) {
    for (double& v : a_) v *= s;
    return *this;
}

std::vector<double> Mat::apply(const std::vector<double>& v) const {
    std::vector<double> out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
}

double Mat::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

Mat Mat::power(unsigned m) const {
    Mat acc = Mat::identity(n_);
    for (unsigned k = 0; k < m; ++k) acc = acc * (*this);
    return acc;
}

double Mat::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

double Mat::max_abs_diff(const Mat& a, const Mat& b) {
    if (a.n() != b.n()) throw InvalidInput("Mat::max_abs_diff: size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.n(); ++i)
        for (std::size_t j = 0; j < a.n(); ++j)
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

std::string Mat::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < n_; ++i) {
        os << (i == 0 ? "[" : " ") << "[";
        for (std::size_t j = 0; j < n_; ++j) os << (j ? ", " : "") << (*this)(i, j);
        os << "]" << (i + 1 == n_ ? "]" : "\n");
    }
    return os.str();
}

std::vector<double> characteristic_polynomial(const Mat& m) {
    const std::size_t n = m.n();
    // power sums of eigenvalues are traces of matrix powers
    std::vector<double> tau(n + 1, 0.0);
    Mat p = m;
    for (std::size_t j = 1; j <= n; ++j) {
        tau[j] = p.trace();
        if (j < n) p = p * m;
    }
    // Newton: j*e_j = sum_{i=1..j} (-1)^{i-1} e_{j-i} tau_i
    std::vector<double> e(n + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t j = 1; j <= n; ++j) {
        double s = 0.0;
        double sign = 1.0;
        for (std::size_t i = 1; i <= j; ++i) {
            s += sign * e[j - i] * tau[i];
            sign = -sign;
        }
        e[j] = s / static_cast<double>(j);
    }
    // p(x) = sum_k (-1)^{n-k} e_{n-k} x^k, monic; return low-to-high without x^n
    std::vector<double> c(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = n - k;
        c[k] = ((j % 2) ? -1.0 : 1.0) * e[j];
    }
    return c;
}

namespace {

std::vector<std::complex<double>> quadratic_roots(double c0, double c1) {
    // x^2 + c1 x + c0
    const double disc = c1 * c1 - 4.0 * c0;
    if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        const double q = -0.5 * (c1 + std::copysign(r, c1));
        double x1, x2;
        if (q != 0.0) {
            x1 = q;
            x2 = c0 / q;
        } else {
            x1 = 0.5 * (-c1 + r);
            x2 = 0.5 * (-c1 - r);
        }
        return {x1, x2};
    }
    const double re = -0.5 * c1, im = 0.5 * std::sqrt(-disc);
    return {{re, im}, {re, -im}};
}

std::vector<std::complex<double>> cubic_roots(double c0, double c1, double c2) {
    // x^3 + c2 x^2 + c1 x + c0, depressed via x = y - c2/3
    const double shift = c2 / 3.0;
    const double p = c1 - c2 * c2 / 3.0;
    const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    const double disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
    std::vector<std::complex<double>> roots;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        const double u = std::cbrt(-q / 2.0 + s);
        const double v = std::cbrt(-q / 2.0 - s);
        const double y1 = u + v;
        roots.push_back(y1 - shift);
        // remaining pair from the quadratic factor y^2 + y1*y + (y1^2 + p)
        auto rest = quadratic_roots(y1 * y1 + p, y1);
        roots.push_back(rest[0] - shift);
        roots.push_back(rest[1] - shift);
    } else if (disc == 0.0) {
        const double u = std::cbrt(-q / 2.0);
        roots = {2.0 * u - shift, -u - shift, -u - shift};
    } else {
        // three real roots, trigonometric form
        const double r = std::sqrt(-p / 3.0);
        const double phi = std::acos(std::clamp(-q / (2.0 * r * r * r), -1.0, 1.0));
        for (int k = 0; k < 3; ++k)
            roots.push_back(2.0 * r * std::cos((phi + 2.0 * std::numbers::pi * k) / 3.0) -
                            shift);
    }
    return roots;
}

} // namespace

std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& c) {
    const std::size_t n = c.size();
    if (n == 0) return {};
    if (n == 1) return {-c[0]};
    if (n == 2) return quadratic_roots(c[0], c[1]);
    if (n == 3) return cubic_roots(c[0], c[1], c[2]);

    // Durand-Kerner for the rest
    double scale = 1.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    const double radius = 1.0 + scale;
    std::vector<std::complex<double>> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double ang = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.25) /
                           static_cast<double>(n);
        z[k] = std::polar(radius, ang);
    }
    auto eval = [&](std::complex<double> x) {
        std::complex<double> acc(1.0, 0.0);
        for (std::size_t k = n; k-- > 0;) acc = acc * x + c[k];
        return acc;
    };
    for (int iter = 0; iter < 400; ++iter) {
        double step = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<double> denom(1.0, 0.0);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom *= (z[i] - z[j]);
            if (std::abs(denom) < 1e-300) denom = 1e-300;
            const std::complex<double> d = eval(z[i]) / denom;
            z[i] -= d;
            step = std::max(step, std::abs(d));
        }
        if (step < 1e-14 * radius) break;
    }
    return z;
}

EigenDecision analyze_spectrum(const Mat& m, double imag_tol_rel, double distinct_tol_rel) {
    EigenDecision out;
    const std::size_t n = m.n();
    if (n == 0) return out;
    auto roots = polynomial_roots(characteristic_polynomial(m));
    double rad = 0.0;
    for (auto& z : roots) rad = std::max(rad, std::abs(z));
    const double imag_tol = imag_tol_rel * std::max(rad, 1e-30);
    out.real_spectrum = true;
    for (auto& z : roots)
        if (std::abs(z.imag()) > imag_tol) out.real_spectrum = false;
    if (!out.real_spectrum) return out;

    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = roots[i].real();
    std::sort(vals.begin(), vals.end());
    out.eigenvalues = vals;

    const double sep_tol = distinct_tol_rel * std::max(rad, 1e-30);
    // cluster into distinct eigenvalues with multiplicities
    std::vector<std::pair<double, std::size_t>> clusters;
    for (double v : vals) {
        if (!clusters.empty() && std::abs(v - clusters.back().first) <= sep_tol)
            clusters.back().second++;
        else
            clusters.push_back({v, 1});
    }
    out.distinct = clusters.size() == n;
    out.complete_basis = true;
    if (!out.distinct) {
        for (auto& [lam, mult] : clusters) {
            if (mult == 1) continue;
            const std::size_t r = shifted_rank(m, lam);
            if (r != n - mult) {
                out.complete_basis = false;
                break;
            }
        }
    }
    return out;
}

std::size_t shifted_rank(const Mat& m, double lambda, double tol_rel) {
    const std::size_t n = m.n();
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            a[i][j] = m(i, j) - (i == j ? lambda : 0.0);
            norm = std::max(norm, std::abs(a[i][j]));
        }
    const double tol = tol_rel * std::max(norm, 1e-30);
    std::size_t rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < n; ++col) {
        std::size_t piv = row;
        for (std::size_t i = row + 1; i < n; ++i)
            if (std::abs(a[i][col]) > std::abs(a[piv][col])) piv = i;
        if (std::abs(a[piv][col]) <= tol) continue;
        std::swap(a[piv], a[row]);
        for (std::size_t i = row + 1; i < n; ++i) {
            const double f = a[i][col] / a[row][col];
            for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[row][j];
        }
        ++row;
        ++rank;
    }
    return rank;
}

std::vector<double> generalized_sym_eigenvalues(const Mat& b, const Mat& g) {
    const std::size_t n = b.n();
    // Cholesky G = L L^T
    std::vector<std::vector<double>> L(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = g(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
            if (i == j) {
                if (s <= 0.0) throw InvalidInput("generalized eigenvalues: metric not positive definite");
                L[i][i] = std::sqrt(s);
            } else {
                L[i][j] = s / L[j][j];
            }
        }
    }
    // C = L^{-1} B L^{-T}, via forward substitutions
    auto fwd = [&](std::vector<double> rhs) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < i; ++k) rhs[i] -= L[i][k] * rhs[k];
            rhs[i] /= L[i][i];
        }
        return rhs;
    };
    std::vector<std::vector<double>> c(n, std::vector<double>(n));
    // first Y = L^{-1} B (column-wise), then C = (L^{-1} Y^T)^T
    std::vector<std::vector<double>> y(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = b(i, j);
        col = fwd(col);
        for (std::size_t i = 0; i < n; ++i) y[i][j] = col[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(n);
        for (std::size_t j = 0; j < n; ++j) row[j] = y[i][j];
        row = fwd(row);
        for (std::size_t j = 0; j < n; ++j) c[i][j] = row[j];
    }
    // Jacobi rotations
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(c[p][q]));
        if (off < 1e-14) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(c[p][q]) < 1e-300) continue;
                const double theta = 0.5 * std::atan2(2.0 * c[p][q], c[q][q] - c[p][p]);
                const double cs = std::cos(theta), sn = std::sin(theta);
                for (std::size_t k = 0; k < n; ++k) {
                    const double cpk = c[p][k], cqk = c[q][k];
                    c[p][k] = cs * cpk - sn * cqk;
                    c[q][k] = sn * cpk + cs * cqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double ckp = c[k][p], ckq = c[k][q];
                    c[k][p] = cs * ckp - sn * ckq;
                    c[k][q] = sn * ckp + cs * ckq;
                }
            }
    }
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = c[i][i];
    std::sort(vals.begin(), vals.end());
    return vals;
}

} // namespace egf
