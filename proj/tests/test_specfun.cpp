#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "gk_oracle.hpp"
#include "sphcurve/specfun.hpp"

using namespace sphcurve::specfun;
constexpr double kPi = std::numbers::pi;

TEST(EllipticModulus, ComplementSquaresToOne) {
    for (double p : {0.0, 1e-8, 0.3, 0.5, 0.999999, 1.0}) {
        EllipticModulus m(p);
        EXPECT_NEAR(m.p * m.p + m.p_prime * m.p_prime, 1.0, 1e-15);
    }
    EXPECT_THROW(EllipticModulus(-0.1), std::invalid_argument);
    EXPECT_THROW(EllipticModulus(1.1), std::invalid_argument);
}

TEST(CompleteK, KnownValues) {
    EXPECT_NEAR(complete_K(EllipticModulus(0.0)), kPi / 2, 1e-15);
    const double p = 1e-4;
    EXPECT_NEAR(complete_K(EllipticModulus(p)), kPi / 2 * (1 + p * p / 4), 1e-10);
    // K(1/sqrt 2) = Gamma(1/4)^2 / (4 sqrt(pi))
    EXPECT_NEAR(complete_K(EllipticModulus(std::sqrt(0.5))), 1.8540746773013719, 2e-15);
    EXPECT_THROW(complete_K(EllipticModulus(1.0)), std::domain_error);
}

TEST(CompleteK, MatchesQuadratureOracle) {
    const double oracle = testsupport::ellip_F(kPi / 2, 0.5);
    EXPECT_NEAR(oracle, 1.6857503548125961, 1e-15);
    EXPECT_NEAR(complete_K(EllipticModulus(0.5)), 1.6857503548125961, 1e-13 * 1.69);
}

TEST(CompleteE, Endpoints) {
    EXPECT_NEAR(complete_E(EllipticModulus(0.0)), kPi / 2, 1e-15);
    EXPECT_NEAR(complete_E(EllipticModulus(1.0)), 1.0, 1e-15);
}

TEST(IncompleteF, TrivialAndDerived) {
    for (double phi : {-2.0, 0.3, 1.0, 5.0}) EXPECT_NEAR(incomplete_F(phi, EllipticModulus(0.0)), phi, 1e-14);
    const EllipticModulus m(0.7);
    EXPECT_NEAR(incomplete_F(kPi / 2, m), complete_K(m), 1e-14);
    EXPECT_NEAR(testsupport::ellip_F(0.7, 0.8), 0.73805852075077711, 1e-15);
    EXPECT_NEAR(incomplete_F(0.7, EllipticModulus(0.8)), 0.73805852075077711, 1e-13);
}

TEST(IncompleteF, OddAndQuasiPeriodic) {
    const EllipticModulus m(0.9);
    const double K = complete_K(m);
    for (double phi : {0.1, 0.8, 1.5, 2.7, -4.0}) {
        EXPECT_NEAR(incomplete_F(-phi, m), -incomplete_F(phi, m), 1e-14);
        EXPECT_NEAR(incomplete_F(phi + kPi, m), incomplete_F(phi, m) + 2 * K, 1e-13);
    }
}

TEST(IncompleteF, UnitModulus) {
    const EllipticModulus m(1.0);
    // F(phi, 1) = atanh(sin phi)
    EXPECT_NEAR(incomplete_F(0.9, m), std::atanh(std::sin(0.9)), 1e-14);
    EXPECT_THROW(incomplete_F(2.0, m), std::domain_error);
}

TEST(IncompleteE, TrivialAndDerived) {
    for (double phi : {-2.0, 0.3, 1.0}) EXPECT_NEAR(incomplete_E(phi, EllipticModulus(0.0)), phi, 1e-14);
    EXPECT_NEAR(incomplete_E(kPi / 2, EllipticModulus(1.0)), 1.0, 1e-15);
    EXPECT_NEAR(testsupport::ellip_E(0.9, 0.5), 0.87351770097061154, 1e-15);
    EXPECT_NEAR(incomplete_E(0.9, EllipticModulus(0.5)), 0.87351770097061154, 1e-13);
    const EllipticModulus m(0.6);
    EXPECT_NEAR(incomplete_E(1.1 + kPi, m), incomplete_E(1.1, m) + 2 * complete_E(m), 1e-13);
    EXPECT_NEAR(incomplete_E(-1.1, m), -incomplete_E(1.1, m), 1e-15);
}

TEST(InverseE, RoundTrip) {
    for (double p : {0.0, 0.3, 0.7071, 0.99}) {
        const EllipticModulus m(p);
        for (double phi : {-3.0, -0.5, 0.0, 0.4, 1.5, 6.0})
            EXPECT_NEAR(inverse_incomplete_E(incomplete_E(phi, m), m), phi, 1e-12);
    }
}

TEST(Jacobi, DegenerateModuli) {
    for (double u : {-3.0, -0.2, 0.0, 0.7, 2.5}) {
        const auto j0 = jacobi(u, EllipticModulus(0.0));
        EXPECT_NEAR(j0.sn, std::sin(u), 1e-15);
        EXPECT_NEAR(j0.cn, std::cos(u), 1e-15);
        EXPECT_NEAR(j0.dn, 1.0, 1e-15);
        const auto j1 = jacobi(u, EllipticModulus(1.0));
        EXPECT_NEAR(j1.sn, std::tanh(u), 1e-15);
        EXPECT_NEAR(j1.cn, 1.0 / std::cosh(u), 1e-15);
        EXPECT_NEAR(j1.dn, 1.0 / std::cosh(u), 1e-15);
    }
}

TEST(Jacobi, QuarterPeriod) {
    for (double p : {0.2, 0.6, 0.95}) {
        const EllipticModulus m(p);
        const auto j = jacobi(complete_K(m), m);
        EXPECT_NEAR(j.sn, 1.0, 1e-14);
        EXPECT_NEAR(j.cn, 0.0, 1e-14);
        EXPECT_NEAR(j.dn, m.p_prime, 1e-14);
    }
}

TEST(Jacobi, DerivedTriple) {
    // Reference: amplitude by bisection on the quadrature F, then sin/cos.
    const double am = testsupport::amplitude(1.3, 0.6);
    EXPECT_NEAR(am, 1.2058962114431399, 1e-14);
    const auto j = jacobi(1.3, EllipticModulus(0.6));
    EXPECT_NEAR(j.am, 1.2058962114431399, 1e-12);
    EXPECT_NEAR(j.sn, 0.93415941025948359, 1e-12);
    EXPECT_NEAR(j.cn, 0.35685598807313550, 1e-12);
    EXPECT_NEAR(j.dn, 0.82815737069745106, 1e-12);
    EXPECT_NEAR(j.sn, std::sin(am), 1e-12);
    EXPECT_NEAR(j.dn, std::sqrt(1 - 0.36 * std::sin(am) * std::sin(am)), 1e-12);
}

TEST(Specfun, NaNPropagates) {
    const EllipticModulus m(0.5);
    EXPECT_TRUE(std::isnan(incomplete_F(NAN, m)));
    EXPECT_TRUE(std::isnan(incomplete_E(NAN, m)));
    EXPECT_TRUE(std::isnan(jacobi(NAN, m).sn));
    EXPECT_TRUE(std::isnan(complete_K(EllipticModulus(NAN))));
}

// Property tests, fixed seed.
class SpecfunProperty : public ::testing::Test {
protected:
    std::mt19937_64 rng{20240917};
    double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
};

TEST_F(SpecfunProperty, PythagoreanIdentities) {
    for (int i = 0; i < 500; ++i) {
        const EllipticModulus m(uni(0.0, 1.0));
        const double K = complete_K(m);
        const auto j = jacobi(uni(-4 * K, 4 * K), m);
        EXPECT_NEAR(j.sn * j.sn + j.cn * j.cn, 1.0, 1e-12);
        EXPECT_NEAR(j.dn * j.dn + m.p * m.p * j.sn * j.sn, 1.0, 1e-12);
        EXPECT_NEAR(j.sn, std::sin(j.am), 1e-12);
        EXPECT_NEAR(j.cn, std::cos(j.am), 1e-12);
    }
}

TEST_F(SpecfunProperty, AmplitudeInvertsF) {
    for (int i = 0; i < 500; ++i) {
        const EllipticModulus m(uni(0.0, 0.999));
        const double phi = uni(-kPi / 2, kPi / 2);
        EXPECT_NEAR(jacobi(incomplete_F(phi, m), m).am, phi, 1e-11);
    }
}

TEST_F(SpecfunProperty, FourKPeriodic) {
    for (int i = 0; i < 200; ++i) {
        const EllipticModulus m(uni(0.0, 0.99));
        const double K = complete_K(m);
        const double u = uni(-4 * K, 4 * K);
        const auto a = jacobi(u, m), b = jacobi(u + 4 * K, m);
        EXPECT_NEAR(a.sn, b.sn, 1e-10);
        EXPECT_NEAR(a.cn, b.cn, 1e-10);
        EXPECT_NEAR(a.dn, b.dn, 1e-10);
    }
}

TEST_F(SpecfunProperty, AmplitudeDerivativeIsDn) {
    const double h = 1e-5;
    for (int i = 0; i < 200; ++i) {
        const EllipticModulus m(uni(0.0, 0.99));
        const double u = uni(-5.0, 5.0);
        const double d = (jacobi(u + h, m).am - jacobi(u - h, m).am) / (2 * h);
        EXPECT_NEAR(d, jacobi(u, m).dn, 1e-8);
    }
}

TEST_F(SpecfunProperty, IntegralsMatchQuadratureOracle) {
    for (int i = 0; i < 100; ++i) {
        const double p = uni(0.0, 0.98);
        const double phi = uni(-kPi / 2, kPi / 2);
        const EllipticModulus m(p);
        EXPECT_NEAR(incomplete_F(phi, m), testsupport::ellip_F(phi, p), 1e-12);
        EXPECT_NEAR(incomplete_E(phi, m), testsupport::ellip_E(phi, p), 1e-12);
    }
}
