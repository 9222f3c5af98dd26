#include <doctest.h>

#include <cmath>
#include <random>

#include "egf/companion.hpp"
#include "egf/errors.hpp"
#include "egf/symmetric.hpp"

using namespace egf;

namespace {

std::vector<double> random_sigma(std::mt19937& rng, std::size_t n, double bound) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    std::vector<double> s(n);
    for (double& v : s) v = dist(rng);
    return s;
}

} // namespace

TEST_CASE("generalized companion matrices") {
    SUBCASE("classical form") {
        const double s1 = 1.3, s2 = -0.4;
        CompanionSpec spec{{s1, -s2}, {1.0, 1.0}, CompanionForm::Upper};
        const Mat m = build_companion(spec);
        CHECK(m(0, 0) == 0.0);
        CHECK(m(0, 1) == 1.0);
        CHECK(m(1, 0) == doctest::Approx(-s2));
        CHECK(m(1, 1) == doctest::Approx(s1));
    }
    SUBCASE("scaled weights reproduce the closure matrix") {
        const auto sigma = std::vector<double>{3.0, 2.0};
        CompanionSpec spec{p_from_sigma(sigma), b_family_weights(2), CompanionForm::Upper};
        const Mat m = build_companion(spec);
        CHECK(m(0, 1) == doctest::Approx(0.5));
        CHECK(m(1, 0) == doctest::Approx(-4.0));
        CHECK(m(1, 1) == doctest::Approx(3.0));
        CHECK(Mat::max_abs_diff(m, b_n1(sigma)) < 1e-14);
    }
    SUBCASE("both forms share the characteristic polynomial") {
        std::mt19937 rng(11);
        for (int trial = 0; trial < 60; ++trial) {
            const std::size_t n = 2 + rng() % 5;
            const auto sigma = random_sigma(rng, n, 10.0);
            CompanionSpec up{p_from_sigma(sigma), b_family_weights(n), CompanionForm::Upper};
            CompanionSpec lo = up;
            lo.form = CompanionForm::Lower;
            const auto cu = characteristic_polynomial(build_companion(up));
            const auto cl = characteristic_polynomial(build_companion(lo));
            for (std::size_t k = 0; k < n; ++k)
                CHECK(std::abs(cu[k] - cl[k]) <= 1e-9 * (1.0 + std::abs(cu[k])));
        }
    }
    SUBCASE("characteristic polynomial matches the generating one") {
        std::mt19937 rng(12);
        for (int trial = 0; trial < 60; ++trial) {
            const std::size_t n = 1 + rng() % 6;
            const auto sigma = random_sigma(rng, n, 10.0);
            // p(x) = x^n - p_1 x^{n-1} - ... - p_n with p_i = (-1)^{i-1} sigma_i;
            // the monic low-to-high coefficient of x^{n-k} is -p_k
            const auto p = p_from_sigma(sigma);
            const auto c = characteristic_polynomial(b_n1(sigma));
            for (std::size_t k = 1; k <= n; ++k)
                CHECK(std::abs(c[n - k] + p[k - 1]) <= 1e-9 * (1.0 + std::abs(p[k - 1])));
        }
    }
    SUBCASE("invalid weights") {
        CHECK_THROWS_AS(build_companion({{1.0, 1.0}, {1.0, 0.0}, CompanionForm::Upper}),
                        InvalidInput);
        CHECK_THROWS_AS(build_companion({{1.0, 1.0}, {2.0, 1.0}, CompanionForm::Upper}),
                        InvalidInput);
    }
}

TEST_CASE("closure matrix entries as displayed") {
    SUBCASE("n = 1") {
        const Mat m = b_n1({4.2});
        CHECK(m.n() == 1);
        CHECK(m(0, 0) == doctest::Approx(4.2));
    }
    SUBCASE("n = 2") {
        const double s1 = 0.7, s2 = -1.1;
        const Mat m = b_n1({s1, s2});
        CHECK(m(0, 0) == 0.0);
        CHECK(m(0, 1) == doctest::Approx(0.5));
        CHECK(m(1, 0) == doctest::Approx(-2.0 * s2));
        CHECK(m(1, 1) == doctest::Approx(s1));
    }
    SUBCASE("n = 3") {
        const double s1 = 1.0, s2 = -2.0, s3 = 0.5;
        const Mat m = b_n1({s1, s2, s3});
        CHECK(m(0, 1) == doctest::Approx(0.5));
        CHECK(m(1, 2) == doctest::Approx(2.0 / 3.0));
        CHECK(m(2, 0) == doctest::Approx(3.0 * s3));
        CHECK(m(2, 1) == doctest::Approx(-1.5 * s2));
        CHECK(m(2, 2) == doctest::Approx(s1));
        CHECK(m(0, 0) == 0.0);
        CHECK(m(0, 2) == 0.0);
        CHECK(m(1, 0) == 0.0);
    }
    SUBCASE("eigenvalues are the generating roots") {
        const auto prof = profile_from_roots({1.0, 2.0}, 2);
        const auto roots = polynomial_roots(characteristic_polynomial(b_n1(prof.sigma)));
        std::vector<double> re{roots[0].real(), roots[1].real()};
        std::sort(re.begin(), re.end());
        CHECK(re[0] == doctest::Approx(1.0));
        CHECK(re[1] == doctest::Approx(2.0));
        CHECK(std::abs(roots[0].imag()) < 1e-12);
    }
}

TEST_CASE("matrix powers against the entrywise construction") {
    SUBCASE("m = 0 is half the identity") {
        const Mat m = b_nm({1.0, 2.0, 3.0}, 0);
        CHECK(Mat::max_abs_diff(m, 0.5 * Mat::identity(3)) < 1e-15);
    }
    SUBCASE("displayed n = 3, m = 2 entries") {
        std::mt19937 rng(31);
        const auto s = random_sigma(rng, 3, 5.0);
        const Mat m = b_nm(s, 2);
        Mat want(3);
        want(0, 2) = 0.5;
        want(1, 0) = 3.0 * s[2];
        want(1, 1) = -1.5 * s[1];
        want(1, 2) = s[0];
        want(2, 0) = 4.5 * s[0] * s[2];
        want(2, 1) = 2.25 * (s[2] - s[0] * s[1]);
        want(2, 2) = 1.5 * (s[0] * s[0] - s[1]);
        CHECK(Mat::max_abs_diff(m, want) < 1e-12);
    }
    SUBCASE("displayed n = 4, m = 2 entries") {
        std::mt19937 rng(32);
        const auto s = random_sigma(rng, 4, 5.0);
        const Mat m = b_nm(s, 2);
        Mat want(4);
        want(0, 2) = 0.5;
        want(1, 3) = 0.75;
        want(2, 0) = -4.5 * s[3];
        want(2, 1) = 2.25 * s[2];
        want(2, 2) = -1.5 * s[1];
        want(2, 3) = 1.125 * s[0];
        want(3, 0) = -6.0 * s[0] * s[3];
        want(3, 1) = 3.0 * (s[0] * s[2] - s[3]);
        want(3, 2) = 2.0 * (s[2] - s[0] * s[1]);
        want(3, 3) = 1.5 * (s[0] * s[0] - s[1]);
        CHECK(Mat::max_abs_diff(m, want) < 1e-12);
    }
    SUBCASE("power route equals entrywise route") {
        std::mt19937 rng(33);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = 1 + rng() % 6;
            const unsigned m = rng() % (n + 1);
            const auto s = random_sigma(rng, n, 5.0);
            CHECK(Mat::max_abs_diff(b_nm(s, m), b_nm_entrywise(s, m)) < 1e-10);
        }
    }
}

TEST_CASE("closed-form eigenpairs") {
    SUBCASE("two distinct roots") {
        const auto pairs = b_family_eigensystem({1.0, 2.0}, 1);
        CHECK(pairs[0].value == doctest::Approx(1.0));
        CHECK(pairs[0].vector == std::vector<double>{1.0, 2.0});
        CHECK(pairs[1].value == doctest::Approx(2.0));
        CHECK(pairs[1].vector == std::vector<double>{1.0, 4.0});
        CHECK(pairs[0].residual < 1e-12);
        CHECK(pairs[1].residual < 1e-12);
    }
    SUBCASE("squared speeds for m = 2") {
        const std::vector<double> roots{0.5, -1.0, 2.0};
        const auto pairs = b_family_eigensystem(roots, 2);
        for (std::size_t j = 0; j < roots.size(); ++j) {
            CHECK(pairs[j].value == doctest::Approx(1.5 * roots[j] * roots[j]));
            CHECK(pairs[j].residual < 1e-10);
        }
    }
    SUBCASE("repeated nonzero root is defective") {
        const auto prof = profile_from_roots({1.5, 1.5}, 2);
        const Mat m = b_n1(prof.sigma);
        CHECK(eigenspace_dimension(m, 1.5) == 1);
    }
    SUBCASE("companion eigenvectors for scaled weights") {
        const std::vector<double> roots{0.3, -0.8, 1.9};
        const auto prof = profile_from_roots(roots, 3);
        CompanionSpec spec{p_from_sigma(prof.sigma), b_family_weights(3),
                           CompanionForm::Upper};
        for (const auto& pair : companion_eigensystem(spec, roots))
            CHECK(pair.residual < 1e-10);
        spec.form = CompanionForm::Lower;
        for (const auto& pair : companion_eigensystem(spec, roots))
            CHECK(pair.residual < 1e-10);
    }
}
