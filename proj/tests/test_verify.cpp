#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sphcurve/families.hpp"
#include "sphcurve/verify.hpp"

using namespace sphcurve;

namespace {
CurveTrace rotated(const CurveTrace& t, double th) {
    CurveTrace r = t;
    const double c = std::cos(th), s = std::sin(th);
    for (auto& x : r.xi) x = Eigen::Vector3d(c * x.x() - s * x.y(), s * x.x() + c * x.y(), x.z());
    return r;
}

CurveTrace seiffert(double p, double span = 8.0) {
    ReconstructionConfig cfg;
    cfg.s_span = span;
    cfg.n_samples = 801;
    return reconstruct_family(Family::Seiffert, {{"p", p}}, cfg);
}
}  // namespace

TEST(Verify, SeiffertPasses) {
    const Params p{{"p", 0.5}};
    const DiagnosticsReport r = verify_trace(seiffert(0.5), law_for(Family::Seiffert, p), momentum_for(Family::Seiffert, p));
    EXPECT_TRUE(r.verdict.pass());
    EXPECT_LE(r.max_sphere_residual, 1e-5);
    EXPECT_LE(r.max_speed_residual, 1e-5);
    EXPECT_LE(r.max_curvature_residual, 1e-5);
    EXPECT_LE(r.max_momentum_residual, 1e-5);
    ASSERT_TRUE(r.el_residual && r.energy_residual);
    EXPECT_LE(*r.el_residual, 1e-5);
    EXPECT_EQ(r.n_samples, 801);
}

TEST(Verify, CorruptedHeightFails) {
    const Params p{{"p", 0.5}};
    CurveTrace t = seiffert(0.5);
    double zmax = 0;
    for (auto& z : t.z) {
        zmax = std::max(zmax, std::abs(z));
        z *= 1.01;
    }
    const DiagnosticsReport r = verify_trace(t, law_for(Family::Seiffert, p), momentum_for(Family::Seiffert, p));
    EXPECT_FALSE(r.verdict.pass());
    EXPECT_FALSE(r.verdict.sphere);
    EXPECT_NEAR(r.max_sphere_residual, 0.01 * zmax, 2e-4);
}

TEST(Verify, GreatCircleCurvature) {
    const Params p{{"c", 0.6}};
    ReconstructionConfig cfg;
    const CurveTrace t = reconstruct_family(Family::GreatCircle, p, cfg);
    const DiagnosticsReport r = verify_trace(t, law_for(Family::GreatCircle, p), momentum_for(Family::GreatCircle, p));
    EXPECT_LE(r.max_curvature_residual, 1e-6);
    EXPECT_TRUE(r.verdict.pass());
    EXPECT_FALSE(r.el_residual.has_value());
}

TEST(Verify, NaNFailsWithoutThrowing) {
    const Params p{{"p", 0.5}};
    CurveTrace t = seiffert(0.5);
    t.xi[400].x() = NAN;
    DiagnosticsReport r;
    EXPECT_NO_THROW(r = verify_trace(t, law_for(Family::Seiffert, p), momentum_for(Family::Seiffert, p)));
    EXPECT_TRUE(std::isnan(r.max_sphere_residual));
    EXPECT_FALSE(r.verdict.pass());
    CurveTrace shortt;
    EXPECT_NO_THROW(r = verify_trace(shortt, law_for(Family::Seiffert, p), momentum_for(Family::Seiffert, p)));
    EXPECT_FALSE(r.verdict.pass());
}

TEST(Verify, Deterministic) {
    const Params p{{"a", 1.5}, {"b", -0.4}, {"c", 0.0}};
    ReconstructionConfig cfg;
    const CurveTrace t = reconstruct_family(Family::Elastica, p, cfg);
    const auto a = verify_trace(t, law_for(Family::Elastica, p), momentum_for(Family::Elastica, p));
    const auto b = verify_trace(t, law_for(Family::Elastica, p), momentum_for(Family::Elastica, p));
    EXPECT_EQ(a.max_curvature_residual, b.max_curvature_residual);
    EXPECT_EQ(*a.el_residual, *b.el_residual);
    EXPECT_EQ(a.verdict.pass(), b.verdict.pass());
}

TEST(Compare, RotationRemoved) {
    const CurveTrace t = seiffert(0.3);
    EXPECT_LE(compare_traces(rotated(t, 1.234), t), 1e-12);
    EXPECT_NEAR(optimal_z_rotation(t, rotated(t, 1.234)), 1.234, 1e-12);
}

TEST(Compare, VivianiPipelines) {
    ReconstructionConfig cfg;
    cfg.s_span = 12.0;
    const CurveTrace r = reconstruct_family(Family::Viviani, {}, cfg);
    const CurveTrace c = closed_form(Family::Viviani, {}).sample(12.0, cfg.n_samples);
    EXPECT_LE(compare_traces(r, c), 1e-6);
}

TEST(Compare, Sensitivity) { EXPECT_GT(compare_traces(seiffert(0.3), seiffert(0.31)), 1e-3); }

TEST(Compare, GridMismatch) {
    ReconstructionConfig cfg;
    cfg.n_samples = 101;
    const CurveTrace a = reconstruct_family(Family::Viviani, {}, cfg);
    cfg.n_samples = 103;
    const CurveTrace b = reconstruct_family(Family::Viviani, {}, cfg);
    EXPECT_THROW(compare_traces(a, b), std::invalid_argument);
}

TEST(Compare, PseudometricProperties) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.2, 0.95);
    for (int i = 0; i < 20; ++i) {
        const double p = u(rng), q = u(rng);
        const CurveTrace a = seiffert(p), b = rotated(seiffert(q), u(rng) * 5);
        EXPECT_NEAR(compare_traces(a, b), compare_traces(b, a), 1e-12);
        EXPECT_LE(compare_traces(a, rotated(a, u(rng) * 6)), 1e-12);
    }
}
