#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "sphcurve/families.hpp"
#include "sphcurve/oracle.hpp"
#include "sphcurve/verify.hpp"

using namespace sphcurve;
constexpr double kPi = std::numbers::pi;

namespace {
FrenetState start_of(const ClosedFormCurve& cf) {
    FrenetState st{cf.eval(0.0).xi, cf.tangent(0.0)};
    st.t -= st.t.dot(st.xi) * st.xi;
    st.t.normalize();
    return st;
}
}  // namespace

TEST(FrenetState, Validation) {
    EXPECT_NO_THROW(check_frenet_state(FrenetState{}));
    EXPECT_THROW(check_frenet_state(FrenetState{{1, 0, 0}, {1, 0, 0}}), std::invalid_argument);
    EXPECT_THROW(check_frenet_state(FrenetState{{2, 0, 0}, {0, 1, 0}}), std::invalid_argument);
    EXPECT_THROW(frenet_integrate(CurvatureLaw::constant(0), FrenetState{}, 1.0, 1e-2), std::invalid_argument);
    EXPECT_THROW(frenet_integrate(CurvatureLaw::constant(0), FrenetState{}, 1.0, 1e-3, 10), std::invalid_argument);
}

TEST(Frenet, Meridian) {
    const CurveTrace t = frenet_integrate(CurvatureLaw::constant(0.0), FrenetState{}, 2 * kPi, 1e-3);
    double worst = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        worst = std::max(worst, (t.xi[i] - Eigen::Vector3d(std::cos(t.s[i]), 0, std::sin(t.s[i]))).norm());
    EXPECT_LE(worst, 1e-8);
    EXPECT_NEAR(t.s.back(), kPi, 1e-12);
}

TEST(Frenet, SmallCircleFixedAxis) {
    OracleStats st;
    const CurveTrace t = frenet_integrate(CurvatureLaw::constant(1.0), FrenetState{}, 20.0, 1e-3, 0, &st);
    // Axis of the circle: the initial principal normal direction combination.
    const Eigen::Vector3d axis = (FrenetState{}.xi + FrenetState{}.xi.cross(FrenetState{}.t)).normalized();
    const double d0 = t.xi[t.size() / 2].dot(axis);
    for (const auto& x : t.xi) EXPECT_NEAR(x.dot(axis), d0, 1e-7);
    EXPECT_LE(st.max_projection, 1e-12);
    EXPECT_EQ(st.steps, 20000);
}

TEST(Frenet, SeiffertMatchesClosedForm) {
    const ClosedFormCurve cf = closed_form(Family::Seiffert, {{"p", 0.5}});
    const CurveTrace t = frenet_integrate(law_for(Family::Seiffert, {{"p", 0.5}}), start_of(cf), 8.0, 1e-4, 801);
    ASSERT_EQ(t.size(), 801u);
    for (std::size_t i = 0; i < t.size(); ++i) EXPECT_LE((t.xi[i] - cf.eval(t.s[i]).xi).norm(), 1e-6);
}

TEST(Frenet, FourthOrderConvergence) {
    const Params sc{{"k0", 10.0}, {"c", 0.5}};
    const ClosedFormCurve cf = closed_form(Family::SmallCircle, sc);
    auto err = [&](double ds) {
        const CurveTrace t = frenet_integrate(law_for(Family::SmallCircle, sc), start_of(cf), 10.0, ds, 3);
        return (t.xi.back() - cf.eval(t.s.back()).xi).norm();
    };
    const double e1 = err(1e-3), e2 = err(5e-4), e3 = err(2.5e-4);
    EXPECT_NEAR(e1 / e2, 16.0, 3.2);
    EXPECT_NEAR(e2 / e3, 16.0, 3.2);
}

TEST(Frenet, GridMatchesReconstruct) {
    const CurveTrace t = frenet_integrate(CurvatureLaw::constant(0.0), FrenetState{}, 6.0, 1e-3, 301);
    ReconstructionConfig cfg;
    cfg.s_span = 6.0;
    cfg.n_samples = 301;
    const CurveTrace r = reconstruct_family(Family::GreatCircle, {{"c", 0.0}}, cfg);
    ASSERT_EQ(t.size(), r.size());
    for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(t.s[i], r.s[i], 1e-12);
}

TEST(Frenet, HaltsWhereKappaUndefined) {
    // Catenary kappa is undefined at z = 0; start on the equator.
    const CurveTrace t = frenet_integrate(CurvatureLaw::catenary(0.3), FrenetState{}, 2.0, 1e-3);
    EXPECT_TRUE(t.meta.truncated);
    EXPECT_NE(t.meta.truncation_reason.find("kappa"), std::string::npos);
    EXPECT_EQ(t.size(), 1u);
}

TEST(Frenet, MomentumConserved) {
    const double a = 0.8, b = 0.3, c = 0.1;
    const MomentumLaw K = antiderivative(CurvatureLaw::linear_elastica(a, b), c);
    const FamilyGauge g = reconstruction_gauge(Family::Elastica, {{"a", a}, {"b", b}, {"c", c}});
    const FrenetState st = state_from_momentum(K, g.z0, 1, 0.0);
    const double span = 10.0;
    const CurveTrace t = frenet_integrate(K.base(), st, span, 1e-4, 2001);
    const auto Kt = momentum_from_trace(t);
    double drift = 0;
    for (std::size_t i = 0; i < t.size(); ++i) drift = std::max(drift, std::abs(Kt[i] - K(t.z[i])));
    EXPECT_LE(drift / span, 1e-7);
}

TEST(Frenet, StateFromMomentumIsTangent) {
    const MomentumLaw K = antiderivative(CurvatureLaw::constant(0.0), 0.6);
    const FrenetState st = state_from_momentum(K, 0.0, 1, 0.0);
    EXPECT_NO_THROW(check_frenet_state(st));
    EXPECT_NEAR(st.t.z(), 0.8, 1e-15);
    EXPECT_THROW(state_from_momentum(K, 1.0, 1, 0.0), std::invalid_argument);
}

TEST(CurvatureFromTrace, Families) {
    const CurveTrace g = closed_form(Family::GreatCircle, {{"c", 0.4}}).sample(6, 601);
    const auto kg = curvature_from_trace(g);
    EXPECT_TRUE(std::isnan(kg[0]) && std::isnan(kg[1]) && std::isnan(kg[599]) && std::isnan(kg[600]));
    for (std::size_t i = 2; i + 2 < kg.size(); ++i) EXPECT_NEAR(kg[i], 0.0, 1e-6);

    const CurveTrace s = closed_form(Family::SmallCircle, {{"k0", 1.7}, {"c", 0.2}}).sample(6, 601);
    const auto ks = curvature_from_trace(s);
    for (std::size_t i = 2; i + 2 < ks.size(); ++i) EXPECT_NEAR(ks[i], 1.7, 1e-5);

    const double alpha = kPi / 3;
    const CurveTrace l = closed_form(Family::Loxodrome, {{"alpha", alpha}}).sample(3, 601);
    const auto kl = curvature_from_trace(l);
    for (std::size_t i = 2; i + 2 < kl.size(); ++i)
        EXPECT_NEAR(kl[i], std::cos(alpha) * std::tan(std::sin(alpha) * l.s[i]), 1e-5);
}

TEST(CurvatureFromTrace, Errors) {
    CurveTrace t = closed_form(Family::GreatCircle, {{"c", 0.4}}).sample(6, 11);
    t.s[3] += 1e-3;
    EXPECT_THROW(curvature_from_trace(t), std::invalid_argument);
    EXPECT_THROW(curvature_from_trace(closed_form(Family::GreatCircle, {{"c", 0.4}}).sample(1, 4)),
                 std::invalid_argument);
}
