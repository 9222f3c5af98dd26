#pragma once

#include <cstddef>
#include <vector>

namespace egf {

/// Paired power sums and elementary symmetric functions of the n principal
/// curvatures. tau may be extended past n; tau_0 = n is implicit.
struct SymmetricProfile {
    std::size_t n = 0;
    std::vector<double> tau;   ///< tau_1 .. tau_L, L >= n
    std::vector<double> sigma; ///< sigma_1 .. sigma_n

    /// tau_j for j >= 0 (tau_0 = n).
    double tau_at(std::size_t j) const;
};

/// Exact profile of explicit roots, tau extended to length L.
SymmetricProfile profile_from_roots(const std::vector<double>& roots, std::size_t extend_to);

/// sigma_1..sigma_n from tau_1..tau_n by the triangular Newton recurrence.
std::vector<double> sigma_from_tau(const std::vector<double>& tau);

/// tau_1..tau_L from sigma (sigma_j = 0 past its length).
std::vector<double> tau_from_sigma(const std::vector<double>& sigma, std::size_t count);

/// Extend an n-truncated tau vector to length L using its own sigma closure.
std::vector<double> extend_tau(const std::vector<double>& tau, std::size_t count);

/// sigma together with the Jacobian d sigma_i / d tau_j (both 1-based
/// conceptually, stored row-major j-fastest).
struct SigmaJacobian {
    std::vector<double> sigma;
    std::vector<double> d; // d[(i-1)*n + (j-1)] = d sigma_i / d tau_j
    double dsigma(std::size_t i, std::size_t j, std::size_t n) const {
        return d[(i - 1) * n + (j - 1)];
    }
};
SigmaJacobian sigma_from_tau_with_jacobian(const std::vector<double>& tau);

/// beta_{n,m,i} closure coefficients; sigma entries past the vector are zero.
double beta_coefficient(std::size_t n, std::size_t m, std::size_t i,
                        const std::vector<double>& sigma);

/// Coefficients c with (1/(n+m)) d tau_{n+m} = sum_i c_i d tau_i,
/// c_i = (-1)^(n-i) beta_{n,m,i} / i.
std::vector<double> dtau_decomposition(std::size_t n, std::size_t m,
                                       const std::vector<double>& sigma);

} // namespace egf
