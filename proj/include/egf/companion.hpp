#pragma once

#include <vector>

#include "egf/matrix.hpp"

namespace egf {

enum class CompanionForm { Upper, Lower };

/// Generalized companion matrix of P_n = x^n - p_1 x^(n-1) - ... - p_n,
/// with scaling weights c (c_1 = 1, c_i != 0).
struct CompanionSpec {
    std::vector<double> p;
    std::vector<double> c;
    CompanionForm form = CompanionForm::Upper;
};

Mat build_companion(const CompanionSpec& spec);

/// Scaling weights c_i = n/(n-i+1) that produce the B-family.
std::vector<double> b_family_weights(std::size_t n);

/// p-coefficients of the characteristic polynomial from sigma: p_i = (-1)^(i-1) sigma_i.
std::vector<double> p_from_sigma(const std::vector<double>& sigma);

/// The closure matrix: superdiagonal i/(i+1), last row (-1)^(n-j) (n/j) sigma_{n-j+1}.
Mat b_n1(const std::vector<double>& sigma);

/// B_{n,m} = ((m+1)/2) * (B_{n,1})^m.
Mat b_nm(const std::vector<double>& sigma, unsigned m);

/// Same matrix assembled entrywise from the beta closure coefficients;
/// an independent construction used to cross-check b_nm.
Mat b_nm_entrywise(const std::vector<double>& sigma, unsigned m);

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
    double residual = 0.0; ///< max-norm of M v - value * v
};

/// Closed-form eigenpairs of B_{n,m} generated by the given real roots:
/// values ((m+1)/2) root^m, vectors (1, 2 root, ..., n root^(n-1)).
std::vector<EigenPair> b_family_eigensystem(const std::vector<double>& roots, unsigned m);

/// Closed-form eigenpairs of a generalized companion matrix for its roots.
std::vector<EigenPair> companion_eigensystem(const CompanionSpec& spec,
                                             const std::vector<double>& roots);

/// Dimension of the eigenspace of `m` for eigenvalue `value`.
std::size_t eigenspace_dimension(const Mat& m, double value, double tol_rel = 1e-8);

} // namespace egf
