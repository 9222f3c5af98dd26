#include <doctest.h>

#include <cmath>
#include <random>

#include "egf/companion.hpp"
#include "egf/errors.hpp"
#include "egf/flows.hpp"
#include "egf/symmetric.hpp"

using namespace egf;

namespace {

// Direct evaluation of the untruncated evolution right-hand side, using a
// finite-difference Jacobian of the tau-extension; independent of the closure
// coefficients the assembly relies on.
std::vector<double> direct_rhs(const GeneratingFamily& family, const std::vector<double>& tau,
                               const std::vector<double>& ndt, double t) {
    const std::size_t n = family.n();
    const std::size_t ext = 2 * n - 1;
    auto extend = [&](const std::vector<double>& tv) { return extend_tau(tv, ext); };
    const auto tau_ext = extend(tau);
    // N(tau_q) for q > n via d tau_q / d tau_j finitely differenced
    std::vector<double> ndt_ext(ext, 0.0);
    for (std::size_t q = 0; q < n; ++q) ndt_ext[q] = ndt[q];
    const double h = 1e-3; // fourth-order stencil keeps the oracle below 1e-12
    for (std::size_t j = 0; j < n; ++j) {
        auto t1 = tau, t2 = tau, t3 = tau, t4 = tau;
        t1[j] += 2.0 * h;
        t2[j] += h;
        t3[j] -= h;
        t4[j] -= 2.0 * h;
        const auto e1 = extend(t1), e2 = extend(t2), e3 = extend(t3), e4 = extend(t4);
        for (std::size_t q = n; q < ext; ++q)
            ndt_ext[q] +=
                (-e1[q] + 8.0 * e2[q] - 8.0 * e3[q] + e4[q]) / (12.0 * h) * ndt[j];
    }
    auto tau_at = [&](std::size_t j) {
        return j == 0 ? static_cast<double>(n) : tau_ext[j - 1];
    };
    auto ndt_at = [&](std::size_t j) { return ndt_ext[j - 1]; };
    auto normal_f = [&](std::size_t j) {
        double s = 0.0;
        for (std::size_t q = 1; q <= n; ++q)
            s += family.f_partial(j, q, tau, t) * ndt[q - 1];
        return s;
    };
    std::vector<double> rhs(n, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        double acc = tau_at(i - 1) * normal_f(0);
        for (std::size_t j = 1; j < n; ++j) {
            acc += static_cast<double>(j) * family.f(j, tau, t) /
                       static_cast<double>(i + j - 1) * ndt_at(i + j - 1) +
                   tau_at(i + j - 1) * normal_f(j);
        }
        rhs[i - 1] = -0.5 * static_cast<double>(i) * acc;
    }
    return rhs;
}

} // namespace

TEST_CASE("extrinsic Ricci system for n = 2") {
    const GeneratingFamily fam = ricci_family(2);
    const auto prof = profile_from_roots({1.0, 2.0}, 2);
    const auto sys = assemble_type_b(fam, prof.tau, 0.0);
    const Mat m = sys.matrix();
    CHECK(m(0, 0) == doctest::Approx(-6.0));
    CHECK(m(0, 1) == doctest::Approx(1.0));
    CHECK(m(1, 0) == doctest::Approx(-18.0));
    CHECK(m(1, 1) == doctest::Approx(3.0));

    const auto cls = classify_hyperbolicity(sys);
    CHECK(cls.kind == Hyperbolicity::Strictly);
    REQUIRE(cls.eigenvalues.size() == 2);
    CHECK(cls.eigenvalues[0] == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(cls.eigenvalues[1] == doctest::Approx(0.0).epsilon(1e-12));

    // minimal data: nilpotent first-order part
    const auto degenerate = assemble_type_b(fam, {0.0, 2.0}, 0.0);
    CHECK(classify_hyperbolicity(degenerate).kind == Hyperbolicity::NotHyperbolic);
}

TEST_CASE("extrinsic Ricci system for n = 3") {
    const GeneratingFamily fam = ricci_family(3);
    const auto prof = profile_from_roots({1.0, 2.0, 3.0}, 3);
    const auto tau = prof.tau; // (6, 14, 36)
    const auto sys = assemble_type_b(fam, tau, 0.0);
    const Mat m = sys.matrix();
    const double t1 = tau[0], t2 = tau[1], t3 = tau[2];
    CHECK(m(0, 0) == doctest::Approx(-2.0 * t1));
    CHECK(m(0, 1) == doctest::Approx(1.0));
    CHECK(m(0, 2) == doctest::Approx(0.0));
    CHECK(m(1, 0) == doctest::Approx(-2.0 * t2));
    CHECK(m(1, 1) == doctest::Approx(-t1));
    CHECK(m(1, 2) == doctest::Approx(4.0 / 3.0));
    CHECK(m(2, 0) == doctest::Approx(t1 * t1 * t1 - t3 - 3.0 * t1 * t2));
    CHECK(m(2, 1) == doctest::Approx(1.5 * (t2 - t1 * t1)));
    CHECK(m(2, 2) == doctest::Approx(t1));
    CHECK(classify_hyperbolicity(sys).kind == Hyperbolicity::Strictly);

    // replacing tau by sigma gives P3 = x^3 + 2 s1 x^2 + s1^2 x + 4 s3
    const auto cp = characteristic_polynomial(m);
    const double s1 = prof.sigma[0], s3 = prof.sigma[2];
    CHECK(cp[2] == doctest::Approx(2.0 * s1));
    CHECK(cp[1] == doctest::Approx(s1 * s1));
    CHECK(cp[0] == doctest::Approx(4.0 * s3));
}

TEST_CASE("Newton transformation flow") {
    const GeneratingFamily fam = ent_family(1, 3);
    const auto prof = profile_from_roots({0.5, 1.0, 1.5}, 3);
    CHECK(fam.f(0, prof.tau, 0.0) == doctest::Approx(prof.tau[0])); // sigma_1
    CHECK(fam.f(1, prof.tau, 0.0) == doctest::Approx(-1.0));
    CHECK(fam.f(2, prof.tau, 0.0) == doctest::Approx(0.0));

    const auto sys = assemble_type_b(fam, prof.tau, 0.0);
    const auto cls = classify_hyperbolicity(sys);
    CHECK(cls.kind == Hyperbolicity::Hyperbolic);
    REQUIRE(cls.eigenvalues.size() == 3);
    // speeds {-1/2, -1/2, (n-1)/2}
    CHECK(cls.eigenvalues[0] == doctest::Approx(-0.5));
    CHECK(cls.eigenvalues[1] == doctest::Approx(-0.5));
    CHECK(cls.eigenvalues[2] == doctest::Approx(1.0));

    CHECK_THROWS_AS(ent_family(3, 3), InvalidInput);
}

TEST_CASE("power flows") {
    SUBCASE("first power is half the identity") {
        const GeneratingFamily fam = power_family(1, 3);
        const auto sys = assemble_type_b(fam, {1.0, 2.0, 3.0}, 0.0);
        CHECK(Mat::max_abs_diff(sys.matrix(), 0.5 * Mat::identity(3)) < 1e-14);
        CHECK(sys.a_tilde.max_abs() == 0.0);
        CHECK(classify_hyperbolicity(sys).kind == Hyperbolicity::Hyperbolic);
    }
    SUBCASE("higher powers stay hyperbolic on distinct roots") {
        std::mt19937 rng(77);
        std::uniform_real_distribution<double> dist(-2.0, 2.0);
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t n = 3 + rng() % 3;
            std::vector<double> roots(n);
            bool ok = true;
            for (std::size_t i = 0; i < n; ++i) {
                roots[i] = dist(rng);
                for (std::size_t j = 0; j < i; ++j)
                    if (std::abs(roots[i] - roots[j]) < 0.1) ok = false;
            }
            if (!ok) continue;
            const auto prof = profile_from_roots(roots, n);
            for (std::size_t m = 2; m < n; ++m) {
                const auto sys = assemble_type_b(power_family(m, n), prof.tau, 0.0);
                const auto cls = classify_hyperbolicity(sys);
                CHECK(cls.kind != Hyperbolicity::NotHyperbolic);
                // matrix equals the closed power family matrix
                CHECK(Mat::max_abs_diff(sys.matrix(),
                                        b_nm(prof.sigma, static_cast<unsigned>(m - 1))) <
                      1e-10);
            }
        }
    }
    SUBCASE("coefficient index out of range") {
        CHECK_THROWS_AS(power_family(2, 2), InvalidInput);
        CHECK_THROWS_AS(power_family(3, 3), InvalidInput);
    }
}

TEST_CASE("space-time coefficient assembly") {
    const auto prof = profile_from_roots({0.5, -1.0, 2.0}, 3);
    SUBCASE("pure transport") {
        const auto sys = assemble_type_a(power_family(1, 3), prof.tau, 0.0, {0.0, 0.0, 0.0});
        CHECK(Mat::max_abs_diff(sys.matrix(), 0.5 * Mat::identity(3)) < 1e-14);
        for (double s : sys.source) CHECK(s == 0.0);
    }
    SUBCASE("second power gives the closure matrix") {
        const auto sys = assemble_type_a(power_family(2, 3), prof.tau, 0.0, {0.0, 0.0, 0.0});
        CHECK(Mat::max_abs_diff(sys.matrix(), b_n1(prof.sigma)) < 1e-12);
    }
    SUBCASE("third power") {
        const auto sys = assemble_type_a(power_family(2, 4),
                                         profile_from_roots({0.5, -1.0, 2.0, 1.0}, 4).tau,
                                         0.0, {0.0, 0.0, 0.0, 0.0});
        const auto prof4 = profile_from_roots({0.5, -1.0, 2.0, 1.0}, 4);
        CHECK(Mat::max_abs_diff(sys.matrix(), b_n1(prof4.sigma)) < 1e-12);
    }
    SUBCASE("source vector") {
        const std::vector<double> ndf{0.3, -0.2, 0.1};
        const auto sys = assemble_type_a(power_family(1, 3), prof.tau, 0.0, ndf);
        const auto ext = extend_tau(prof.tau, 5);
        auto tau_at = [&](std::size_t j) { return j == 0 ? 3.0 : ext[j - 1]; };
        for (std::size_t i = 1; i <= 3; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < 3; ++j) acc += ndf[j] * tau_at(i + j - 1);
            CHECK(sys.source[i - 1] == doctest::Approx(-0.5 * i * acc));
        }
    }
}

TEST_CASE("single-coefficient assemblies match their displayed shapes") {
    const auto prof = profile_from_roots({0.7, 1.9, -0.4}, 3);
    SUBCASE("conformal coefficient fills only the first-order part") {
        auto eval = [](std::size_t j, const std::vector<double>& tau, double) {
            return j == 0 ? tau[0] * tau[1] : 0.0;
        };
        auto part = [](std::size_t j, std::size_t s, const std::vector<double>& tau,
                       double) -> double {
            if (j != 0) return 0.0;
            if (s == 1) return tau[1];
            if (s == 2) return tau[0];
            return 0.0;
        };
        const GeneratingFamily fam(3, FamilyKind::StateDependent, eval, part);
        const auto sys = assemble_type_b(fam, prof.tau, 0.0);
        CHECK(sys.b_tilde.max_abs() == 0.0);
        auto tau_at = [&](std::size_t j) { return j == 0 ? 3.0 : prof.tau[j - 1]; };
        for (std::size_t i = 1; i <= 3; ++i)
            for (std::size_t j = 1; j <= 3; ++j)
                CHECK(sys.a_tilde(i - 1, j - 1) ==
                      doctest::Approx(0.5 * i * tau_at(i - 1) *
                                      part(0, j, prof.tau, 0.0)));
    }
    SUBCASE("first-power coefficient adds a scalar zero-order part") {
        auto eval = [](std::size_t j, const std::vector<double>& tau, double) {
            return j == 1 ? tau[0] + 2.0 * tau[2] : 0.0;
        };
        auto part = [](std::size_t j, std::size_t s, const std::vector<double>&,
                       double) -> double {
            if (j != 1) return 0.0;
            if (s == 1) return 1.0;
            if (s == 3) return 2.0;
            return 0.0;
        };
        const GeneratingFamily fam(3, FamilyKind::StateDependent, eval, part);
        const auto sys = assemble_type_b(fam, prof.tau, 0.0);
        const double f = prof.tau[0] + 2.0 * prof.tau[2];
        CHECK(Mat::max_abs_diff(sys.b_tilde, 0.5 * f * Mat::identity(3)) < 1e-14);
        for (std::size_t i = 1; i <= 3; ++i)
            for (std::size_t j = 1; j <= 3; ++j)
                CHECK(sys.a_tilde(i - 1, j - 1) ==
                      doctest::Approx(0.5 * i * prof.tau[i - 1] *
                                      part(1, j, prof.tau, 0.0)));
    }
}

TEST_CASE("assembled matrix reproduces the untruncated right-hand side") {
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    int tested = 0;
    for (int trial = 0; trial < 400 && tested < 200; ++trial) {
        const std::size_t n = 2 + rng() % 3;
        std::vector<double> roots(n);
        for (double& r : roots) r = dist(rng);
        const auto prof = profile_from_roots(roots, n);
        std::vector<double> ndt(n);
        for (double& v : ndt) v = dist(rng);

        GeneratingFamily fam = (trial % 3 == 0)   ? ricci_family(n)
                               : (trial % 3 == 1) ? ent_family(1 + rng() % (n - 1), n)
                                                  : power_family(1 + rng() % (n - 1), n);
        const auto sys = assemble_type_b(fam, prof.tau, 0.0);
        const Mat m = sys.matrix();
        std::vector<double> via_matrix(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) via_matrix[i] -= m(i, j) * ndt[j];
        const auto direct = direct_rhs(fam, prof.tau, ndt, 0.0);
        double scale = 1e-9;
        for (double v : direct) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(via_matrix[i] - direct[i]) <= 1e-9 * scale);
        ++tested;
    }
    CHECK(tested == 200);
}

TEST_CASE("cubic discriminant of the n = 3 Ricci system") {
    SUBCASE("distinct real speeds") {
        const auto prof = profile_from_roots({1.0, 2.0, 3.0}, 3);
        const auto r = ricci_discriminant_n3(prof.sigma[0], prof.sigma[1], prof.sigma[2]);
        CHECK(r.d == doctest::Approx(-48.0));
        CHECK(r.classification.kind == Hyperbolicity::Strictly);
    }
    SUBCASE("umbilic boundary") {
        const auto prof = profile_from_roots({1.0, 1.0, 1.0}, 3);
        const auto r = ricci_discriminant_n3(prof.sigma[0], prof.sigma[1], prof.sigma[2]);
        CHECK(r.d == doctest::Approx(0.0));
        CHECK(r.classification.kind != Hyperbolicity::Strictly);
    }
    SUBCASE("degenerate branch") {
        const auto r = ricci_discriminant_n3(2.0, 1.0, 0.0);
        CHECK(r.d == doctest::Approx(0.0));
        CHECK(r.classification.kind != Hyperbolicity::Strictly);
    }
    SUBCASE("sign agrees with a root count over random samples") {
        std::mt19937 rng(123);
        std::uniform_real_distribution<double> dist(-3.0, 3.0);
        for (int trial = 0; trial < 500; ++trial) {
            const double s1 = dist(rng), s2 = dist(rng), s3 = dist(rng);
            if (std::abs(s3 * (27.0 * s3 - s1 * s1 * s1)) < 1e-3) continue; // off boundary
            const auto r = ricci_discriminant_n3(s1, s2, s3);
            const auto roots =
                polynomial_roots({4.0 * s3, s1 * s1, 2.0 * s1});
            int real_distinct = 0;
            double rad = 0.0;
            for (auto z : roots) rad = std::max(rad, std::abs(z));
            bool all_real = true;
            for (auto z : roots)
                if (std::abs(z.imag()) > 1e-8 * rad) all_real = false;
            if (all_real) {
                real_distinct = 3;
                for (int a = 0; a < 3; ++a)
                    for (int b = a + 1; b < 3; ++b)
                        if (std::abs(roots[a].real() - roots[b].real()) < 1e-6 * rad)
                            real_distinct = 1;
            }
            CHECK((r.d < 0.0) == (all_real && real_distinct == 3));
        }
    }
}

TEST_CASE("mean curvature evolution rates") {
    SUBCASE("first symmetric function rides a linear wave") {
        for (std::size_t n = 2; n <= 4; ++n) {
            const GeneratingFamily fam = ent_family(1, n);
            std::vector<double> roots(n);
            for (std::size_t i = 0; i < n; ++i) roots[i] = 0.3 * (i + 1.0);
            const auto prof = profile_from_roots(roots, n);
            std::vector<double> ndt(n, 0.0);
            ndt[0] = 0.7; // N(sigma_1) = N(tau_1)
            const double rate = sigma_evolution_rhs(fam, prof.tau, ndt, 0.0, 1);
            CHECK(rate == doctest::Approx(-0.5 * (n - 1.0) * 0.7));
        }
    }
    SUBCASE("flat data does not move") {
        const GeneratingFamily fam = ricci_family(3);
        const auto prof = profile_from_roots({0.4, 0.9, 1.3}, 3);
        for (std::size_t m = 1; m <= 3; ++m)
            CHECK(sigma_evolution_rhs(fam, prof.tau, {0.0, 0.0, 0.0}, 0.0, m) == 0.0);
    }
    SUBCASE("extrinsic scalar curvature transports for n = 2") {
        const GeneratingFamily fam = ricci_family(2);
        std::mt19937 rng(55);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            const std::vector<double> tau{2.0 + dist(rng), 3.0 + dist(rng)};
            const std::vector<double> ndt{dist(rng), dist(rng)};
            const double got = sigma_evolution_rhs(fam, tau, ndt, 0.0, 2);
            const double nsigma2 = tau[0] * ndt[0] - 0.5 * ndt[1];
            CHECK(got == doctest::Approx(tau[0] * nsigma2).epsilon(1e-9));
        }
    }
}

TEST_CASE("umbilical reduction of the flow coefficients") {
    SUBCASE("Ricci collapses to a square") {
        for (std::size_t n : {2, 3, 4}) {
            const GeneratingFamily fam = ricci_family(n);
            for (double lam : {-1.0, 0.3, 2.0})
                CHECK(umbilical_psi(fam, lam, 0.0) ==
                      doctest::Approx(2.0 * (1.0 - static_cast<double>(n)) * lam * lam));
        }
    }
    SUBCASE("constant and linear flows") {
        CHECK(umbilical_psi(constant_family(0.7, 3), 1.9, 0.0) == doctest::Approx(0.7));
        CHECK(umbilical_psi(power_family(1, 3), 1.9, 0.0) == doctest::Approx(1.9));
    }
    SUBCASE("derivative consistent with finite differences") {
        const GeneratingFamily fam = ricci_family(3);
        for (double lam : {-0.8, 0.5, 1.7}) {
            const double h = 1e-6;
            const double fd = (umbilical_psi(fam, lam + h, 0.0) -
                               umbilical_psi(fam, lam - h, 0.0)) /
                              (2.0 * h);
            CHECK(umbilical_psi_derivative(fam, lam, 0.0) ==
                  doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("principal curvature rates under the Ricci flow") {
    SUBCASE("n = 2 slots agree") {
        const std::vector<double> k{0.7, 1.4};
        const std::vector<double> dk{0.2, -0.5};
        const auto rhs = ricci_curvature_rhs(k, dk);
        const double dprod = k[1] * dk[0] + k[0] * dk[1];
        CHECK(rhs[0] == doctest::Approx(dprod));
        CHECK(rhs[1] == doctest::Approx(dprod));
    }
    SUBCASE("frozen data") {
        const auto rhs = ricci_curvature_rhs({0.7, 1.4, -0.2}, {0.0, 0.0, 0.0});
        for (double v : rhs) CHECK(v == 0.0);
    }
    SUBCASE("umbilical slots") {
        const double lam = 0.9, dlam = -0.3;
        const auto rhs = ricci_curvature_rhs({lam, lam, lam}, {dlam, dlam, dlam});
        for (double v : rhs) CHECK(v == doctest::Approx(2.0 * 2.0 * lam * dlam));
    }
}

TEST_CASE("preset partials agree with central finite differences") {
    std::mt19937 rng(909);
    std::uniform_real_distribution<double> dist(0.3, 2.5);
    std::vector<GeneratingFamily> families;
    families.push_back(ricci_family(2));
    families.push_back(ricci_family(3));
    families.push_back(ent_family(1, 3));
    families.push_back(ent_family(2, 3));
    families.push_back(monomial_b1_family(0.7, {1, 2, 0}, 3));
    for (const auto& fam : families) {
        const std::size_t n = fam.n();
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> tau(n);
            for (double& v : tau) v = dist(rng);
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t s2 = 1; s2 <= n; ++s2) {
                    const double h = 1e-6 * (1.0 + std::abs(tau[s2 - 1]));
                    auto tp = tau, tm = tau;
                    tp[s2 - 1] += h;
                    tm[s2 - 1] -= h;
                    const double fd =
                        (fam.f(j, tp, 0.0) - fam.f(j, tm, 0.0)) / (2.0 * h);
                    const double an = fam.f_partial(j, s2, tau, 0.0);
                    CHECK(std::abs(an - fd) <= 1e-5 * (1.0 + std::abs(fd)));
                }
        }
    }
}

TEST_CASE("defective closure matrices are rejected by the classifier") {
    // equal nonzero roots leave a single eigendirection
    const auto prof = profile_from_roots({1.5, 1.5}, 2);
    const auto cls = classify_matrix(b_n1(prof.sigma));
    CHECK(cls.kind == Hyperbolicity::NotHyperbolic);
    // equal zero roots collapse to the nilpotent shift block
    const auto zero = classify_matrix(b_n1({0.0, 0.0}));
    CHECK(zero.kind == Hyperbolicity::NotHyperbolic);
    // a scalar matrix is hyperbolic but never strict for n >= 2
    Mat half = 0.5 * Mat::identity(3);
    CHECK(classify_matrix(half).kind == Hyperbolicity::Hyperbolic);
}

TEST_CASE("finite-difference partials kick in when analytic ones are absent") {
    auto eval = [](std::size_t j, const std::vector<double>& tau, double) {
        return j == 0 ? std::sin(tau[0]) * tau[1] : 0.0;
    };
    const GeneratingFamily fam(2, FamilyKind::StateDependent, eval);
    CHECK_FALSE(fam.has_analytic_partials());
    const std::vector<double> tau{0.6, 1.1};
    CHECK(fam.f_partial(0, 1, tau, 0.0) ==
          doctest::Approx(std::cos(0.6) * 1.1).epsilon(1e-5));
    CHECK(fam.f_partial(0, 2, tau, 0.0) == doctest::Approx(std::sin(0.6)).epsilon(1e-5));
}
