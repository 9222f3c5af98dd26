#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace egf {

/// Dense square matrix, sized for the small truncated systems (n <= ~8).
class Mat {
public:
    Mat() = default;
    explicit Mat(std::size_t n) : n_(n), a_(n * n, 0.0) {}
    static Mat identity(std::size_t n);

    std::size_t n() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    Mat operator*(const Mat& rhs) const;
    Mat operator+(const Mat& rhs) const;
    Mat operator-(const Mat& rhs) const;
    Mat& operator+=(const Mat& rhs);
    Mat& operator*=(double s);
    friend Mat operator*(double s, Mat m) { m *= s; return m; }

    std::vector<double> apply(const std::vector<double>& v) const;
    double trace() const;
    Mat power(unsigned m) const; // m = 0 gives the identity
    double max_abs() const;

    static double max_abs_diff(const Mat& a, const Mat& b);

    std::string str() const;

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

/// Coefficients of the monic characteristic polynomial,
/// p(x) = x^n + c[n-1] x^(n-1) + ... + c[0],
/// from power sums of eigenvalues (Faddeev-LeVerrier via traces).
std::vector<double> characteristic_polynomial(const Mat& m);

/// All complex roots of a monic polynomial x^n + c[n-1]x^(n-1) + ... + c[0].
/// Closed forms for n <= 3, Durand-Kerner iteration above that.
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& monic_low_to_high);

struct EigenDecision {
    bool real_spectrum = false;     ///< imaginary parts below tolerance
    bool complete_basis = false;    ///< geometric multiplicities match algebraic ones
    bool distinct = false;          ///< all eigenvalues simple
    std::vector<double> eigenvalues; ///< real parts, sorted, only meaningful if real_spectrum
};

/// Spectral analysis used by the hyperbolicity checks.
/// `imag_tol_rel` truncates imaginary parts below tol*spectral_radius;
/// `distinct_tol_rel` separates clustered eigenvalues.
EigenDecision analyze_spectrum(const Mat& m, double imag_tol_rel = 1e-8,
                               double distinct_tol_rel = 1e-9);

/// Rank of (m - lambda*I) by row elimination with partial pivoting.
std::size_t shifted_rank(const Mat& m, double lambda, double tol_rel = 1e-8);

/// Solve the symmetric generalized problem B v = k G v with G positive
/// definite (Cholesky + Jacobi). Returns eigenvalues ascending.
std::vector<double> generalized_sym_eigenvalues(const Mat& b, const Mat& g);

} // namespace egf
