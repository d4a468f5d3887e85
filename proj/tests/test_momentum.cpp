#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "sphcurve/families.hpp"
#include "sphcurve/momentum.hpp"
#include "sphcurve/reconstruct.hpp"

using namespace sphcurve;

TEST(CurvatureLaw, RejectsBadParameters) {
    EXPECT_THROW(CurvatureLaw::linear_elastica(0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(CurvatureLaw::loxo_sub(1.0), std::invalid_argument);
    EXPECT_THROW(CurvatureLaw::loxo_one(0.0), std::invalid_argument);
    EXPECT_THROW(CurvatureLaw::loxo_super(1.0), std::invalid_argument);
    EXPECT_THROW(CurvatureLaw::catenary(0.5), std::invalid_argument);
    EXPECT_THROW(CurvatureLaw::sn_family(1.0), std::invalid_argument);
    EXPECT_THROW(CurvatureLaw::clelia(0.0), std::invalid_argument);
}

TEST(CurvatureLaw, NaNOutsideDomain) {
    EXPECT_TRUE(std::isnan(CurvatureLaw::catenary(0.3)(0.0)));
    EXPECT_TRUE(std::isnan(CurvatureLaw::loxo_one(0.5)(0.8)));
    EXPECT_TRUE(std::isnan(CurvatureLaw::constant(1.0)(1.5)));
}

TEST(Antiderivative, ClosedForms) {
    const MomentumLaw g = antiderivative(CurvatureLaw::constant(0.0), 0.4);
    for (double z : {-0.9, 0.0, 0.7}) EXPECT_DOUBLE_EQ(g(z), 0.4);
    const MomentumLaw s = antiderivative(CurvatureLaw::linear_elastica(0.6, 0.0), -0.6);
    for (double z : {-0.9, 0.1, 0.7}) EXPECT_NEAR(s(z), 0.6 * z * z - 0.6, 1e-15);
    const MomentumLaw c = antiderivative(CurvatureLaw::catenary(0.3), 0.0);
    for (double z : {-0.9, 0.2, 0.7}) EXPECT_NEAR(c(z), -0.3 / z, 1e-15);
    const MomentumLaw v = antiderivative(CurvatureLaw::viviani(), 0.0);
    for (double z : {-0.9, 0.2, 0.7}) EXPECT_NEAR(v(z), (z * z - 1) / std::sqrt(2 - z * z), 1e-15);
}

TEST(Antiderivative, BakedConstantsRejectOffset) {
    EXPECT_THROW(antiderivative(CurvatureLaw::catenary(0.3), 0.1), std::invalid_argument);
    EXPECT_THROW(antiderivative(CurvatureLaw::loxo_sub(0.5), -0.2), std::invalid_argument);
    EXPECT_THROW(antiderivative(CurvatureLaw::constant(0.0), NAN), std::invalid_argument);
}

TEST(Antiderivative, CustomLawIntegratesFromZero) {
    const CurvatureLaw law = CurvatureLaw::custom([](double z) { return 3 * z * z; }, {{-1, 1, true, true}});
    const MomentumLaw K = antiderivative(law, 0.25);
    for (double z : {-0.8, 0.0, 0.5}) EXPECT_NEAR(K(z), z * z * z + 0.25, 1e-13);
}

TEST(MomentumProperty, DerivativeIsKappa) {
    std::mt19937_64 rng(77);
    const std::vector<std::pair<Family, Params>> laws = {
        {Family::Elastica, {{"a", 0.8}, {"b", 0.3}, {"c", 0.1}}},
        {Family::Loxodrome, {{"a", 0.5}}},
        {Family::LoxoOne, {{"a", 0.5}}},
        {Family::LoxoSuper, {{"a", 2.0}}},
        {Family::Catenary, {{"a", 0.3}}},
        {Family::SnFamily, {{"p", 0.6}}},
        {Family::Viviani, {}},
        {Family::Clelia, {{"n", 0.5}}},
    };
    const double h = 1e-4, margin = 0.02;
    for (const auto& [f, p] : laws) {
        const MomentumLaw K = momentum_for(f, p);
        const CurvatureLaw& law = K.base();
        int checked = 0;
        while (checked < 100) {
            const double z = std::uniform_real_distribution<double>(-0.95, 0.95)(rng);
            // Away from the singular edge, where the stencil error grows without bound.
            if (!law.in_domain(z - margin) || !law.in_domain(z + margin)) continue;
            if (f == Family::Catenary && std::abs(z) < 0.05) continue;
            const double d = (K(z - 2 * h) - 8 * K(z - h) + 8 * K(z + h) - K(z + 2 * h)) / (12 * h);
            EXPECT_NEAR(d, law(z), 1e-7 * std::max(1.0, std::abs(law(z)))) << law.name() << " z=" << z;
            ++checked;
        }
    }
}

TEST(AdmissibleIntervals, ConstantMomentum) {
    const auto I = admissible_intervals(antiderivative(CurvatureLaw::constant(0.0), 0.6));
    ASSERT_EQ(I.size(), 1u);
    EXPECT_NEAR(I[0].z_lo, -0.8, 1e-12);
    EXPECT_NEAR(I[0].z_hi, 0.8, 1e-12);
    EXPECT_EQ(I[0].lo_kind, EndpointKind::TurningPoint);
    EXPECT_EQ(I[0].hi_kind, EndpointKind::TurningPoint);
    ASSERT_TRUE(I[0].period_s.has_value());
    EXPECT_NEAR(*I[0].period_s, 2 * M_PI, 1e-10);
    EXPECT_TRUE(admissible_intervals(antiderivative(CurvatureLaw::constant(0.0), 1.2)).empty());
}

TEST(AdmissibleIntervals, SeiffertPolePassages) {
    const auto I = admissible_intervals(antiderivative(CurvatureLaw::linear_elastica(0.8, 0.0), -0.8));
    // Seiffert momentum vanishes at z = 0 as well; the pieces meet there.
    ASSERT_FALSE(I.empty());
    EXPECT_DOUBLE_EQ(I.front().z_lo, -1.0);
    EXPECT_DOUBLE_EQ(I.back().z_hi, 1.0);
    EXPECT_EQ(I.front().lo_kind, EndpointKind::PolePassage);
    EXPECT_EQ(I.back().hi_kind, EndpointKind::PolePassage);
    EXPECT_FALSE(I.front().lo_singular);
}

TEST(AdmissibleIntervals, CatenaryBand) {
    const double a = 0.3, r = std::sqrt(1 - 4 * a * a);
    const auto I = admissible_intervals(antiderivative(CurvatureLaw::catenary(a), 0.0));
    int upper = 0;
    for (const auto& i : I) {
        if (i.z_lo <= 0) continue;
        ++upper;
        EXPECT_NEAR(2 * i.z_lo * i.z_lo, 1 - r, 1e-11);
        EXPECT_NEAR(2 * i.z_hi * i.z_hi, 1 + r, 1e-11);
        EXPECT_EQ(i.lo_kind, EndpointKind::TurningPoint);
        EXPECT_EQ(i.hi_kind, EndpointKind::TurningPoint);
    }
    EXPECT_EQ(upper, 1);
}

TEST(AdmissibleIntervals, BorderlineAsymptote) {
    const auto I = admissible_intervals(momentum_for(Family::Borderline, {{"a", 2.0}}));
    ASSERT_EQ(I.size(), 2u);
    EXPECT_EQ(I[1].lo_kind, EndpointKind::Asymptote);
    EXPECT_NEAR(I[1].z_hi, std::sqrt(3.0) / 2, 1e-12);
}

TEST(AdmissibleIntervals, LoxodromeSingularPoles) {
    const auto I = admissible_intervals(momentum_for(Family::Loxodrome, {{"a", 0.5}}));
    ASSERT_EQ(I.size(), 1u);
    EXPECT_EQ(I[0].lo_kind, EndpointKind::PolePassage);
    EXPECT_TRUE(I[0].lo_singular);
    EXPECT_TRUE(I[0].hi_singular);
}

TEST(AdmissibleIntervals, LoxoOneOpenBoundary) {
    const auto I = admissible_intervals(momentum_for(Family::LoxoOne, {{"a", 0.5}}));
    ASSERT_EQ(I.size(), 1u);
    EXPECT_NEAR(I[0].z_hi, std::sqrt(0.5), 1e-12);
    EXPECT_EQ(I[0].hi_kind, EndpointKind::OpenBoundary);
}

TEST(AdmissibleIntervals, EndpointResidualsAndInterior) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 60; ++i) {
        const double a = std::uniform_real_distribution<double>(0.2, 2.0)(rng);
        const double b = std::uniform_real_distribution<double>(-0.5, 0.5)(rng);
        const double c = std::uniform_real_distribution<double>(-1.0, 0.5)(rng);
        const MomentumLaw K = antiderivative(CurvatureLaw::linear_elastica(a, b), c);
        for (const auto& I : admissible_intervals(K)) {
            EXPECT_GT(K.discriminant(0.5 * (I.z_lo + I.z_hi)), 0.0);
            if (I.lo_kind != EndpointKind::OpenBoundary) EXPECT_LE(std::abs(K.discriminant(I.z_lo)), 1e-10);
            if (I.hi_kind != EndpointKind::OpenBoundary) EXPECT_LE(std::abs(K.discriminant(I.z_hi)), 1e-10);
        }
    }
}

TEST(MomentumFromTrace, MeridianGreatCircleSeiffert) {
    ReconstructionConfig cfg;
    cfg.s_span = 6.0;
    cfg.n_samples = 601;
    const CurveTrace m = reconstruct_family(Family::GreatCircle, {{"c", 0.0}}, cfg);
    for (double k : momentum_from_trace(m)) EXPECT_NEAR(k, 0.0, 1e-8);
    const CurveTrace g = reconstruct_family(Family::GreatCircle, {{"c", 0.5}}, cfg);
    for (double k : momentum_from_trace(g)) EXPECT_NEAR(k, 0.5, 1e-8);
    const CurveTrace s = reconstruct_family(Family::Seiffert, {{"p", 0.6}}, cfg);
    const auto K = momentum_from_trace(s);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(K[i], 0.6 * (s.z[i] * s.z[i] - 1), 1e-6);
    EXPECT_THROW(momentum_from_trace(CurveTrace{}), std::invalid_argument);
}

TEST(MomentumFromTrace, GeographicIdentity) {
    ReconstructionConfig cfg;
    cfg.s_span = 4.0;
    cfg.n_samples = 801;
    const CurveTrace t = reconstruct_family(Family::Elastica, {{"a", 0.8}, {"b", 0.3}, {"c", 0.1}}, cfg);
    const auto K = momentum_from_trace(t);
    const auto ld = fd::first(t.lambda, t.meta.ds);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double cphi = std::cos(t.phi[i]);
        EXPECT_NEAR(K[i], -ld[i] * cphi * cphi, 1e-6);
    }
}
