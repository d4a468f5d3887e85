#include "sphcurve/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Geometry>

#include "sphcurve/families.hpp"
#include "sphcurve/oracle.hpp"

namespace sphcurve {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Running sup that keeps a NaN once seen.
void sup(double& acc, double v) {
    if (std::isnan(acc)) return;
    if (std::isnan(v) || v > acc) acc = v;
}

bool within(double r, double tol) { return r <= tol; }  // false for NaN

void check_grids(const CurveTrace& a, const CurveTrace& b) {
    if (a.size() != b.size() || a.size() == 0)
        throw std::invalid_argument("compare: traces have different or empty s-grids");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(std::abs(a.s[i] - b.s[i]) <= 1e-9 * (1.0 + std::abs(a.s[i]))))
            throw std::invalid_argument("compare: traces have different s-grids");
}

}  // namespace

DiagnosticsReport verify_trace(const CurveTrace& trace, const CurvatureLaw& law,
                               const MomentumLaw& K, const Thresholds& th) {
    DiagnosticsReport r;
    const std::size_t n = trace.size();
    r.n_samples = static_cast<int>(n);
    const bool elastica = law.kind() == LawKind::LinearElastica;

    double h = 0.0;
    bool grid_ok = n >= 5 && trace.xi.size() == n && trace.z.size() == n;
    if (grid_ok) {
        try {
            h = uniform_spacing(trace.s);
        } catch (const std::exception&) {
            grid_ok = false;
        }
    }
    if (!grid_ok) {
        r.max_sphere_residual = r.max_speed_residual = kNaN;
        r.max_curvature_residual = r.max_momentum_residual = kNaN;
        if (elastica) r.el_residual = r.energy_residual = kNaN;
        r.verdict = Verdict{false, false, false, false, !elastica, !elastica};
        return r;
    }

    CurveTrace pts = trace;
    for (std::size_t i = 0; i < n; ++i) pts.xi[i].z() = trace.z[i];

    std::vector<double> comp[3];
    for (int c = 0; c < 3; ++c) {
        std::vector<double> f(n);
        for (std::size_t i = 0; i < n; ++i) f[i] = pts.xi[i][c];
        comp[c] = fd::first(f, h);
    }
    const std::vector<double> kfd = curvature_from_trace(pts);
    const std::vector<double> kmom = momentum_from_trace(pts);

    std::vector<double> klaw(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = trace.z[i];
        sup(r.max_sphere_residual, std::abs(pts.xi[i].norm() - 1.0));
        const Eigen::Vector3d d(comp[0][i], comp[1][i], comp[2][i]);
        sup(r.max_speed_residual, std::abs(d.norm() - 1.0));
        klaw[i] = law(z);
        if (i >= 2 && i + 2 < n) sup(r.max_curvature_residual, std::abs(kfd[i] - klaw[i]));
        sup(r.max_momentum_residual, std::abs(kmom[i] - K(z)));
    }

    if (elastica) {
        const ElasticaParams ep = ElasticaParams::from(law.param("a"), law.param("b"), K.c());
        r.el_residual = el_residual(klaw, ep, h);
        std::vector<double> kd = fd::first(klaw, h);
        // The one-sided end stencils are a different (worse) differencing
        // error than the interior; leave them out like el_residual does.
        for (std::size_t i = 0; i < n; ++i)
            if (i < 2 || i + 2 >= n) kd[i] = kNaN;
        bool any_nan = false;
        for (double k : klaw) any_nan = any_nan || std::isnan(k);
        r.energy_residual = any_nan ? kNaN : energy_residual(klaw, kd, ep);
    }

    r.verdict.sphere = within(r.max_sphere_residual, th.sphere);
    r.verdict.speed = within(r.max_speed_residual, th.speed);
    r.verdict.curvature = within(r.max_curvature_residual, th.curvature);
    r.verdict.momentum = within(r.max_momentum_residual, th.momentum);
    if (r.el_residual) r.verdict.el = within(*r.el_residual, th.el);
    if (r.energy_residual) r.verdict.energy = within(*r.energy_residual, th.energy);
    return r;
}

double optimal_z_rotation(const CurveTrace& a, const CurveTrace& b) {
    check_grids(a, b);
    double cr = 0.0, dt = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Eigen::Vector3d& p = a.xi[i];
        const Eigen::Vector3d& q = b.xi[i];
        dt += p.x() * q.x() + p.y() * q.y();
        cr += p.x() * q.y() - p.y() * q.x();
    }
    return std::atan2(cr, dt);
}

double compare_traces(const CurveTrace& a, const CurveTrace& b) {
    const double th = optimal_z_rotation(a, b);
    const double c = std::cos(th), s = std::sin(th);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Eigen::Vector3d& p = a.xi[i];
        const Eigen::Vector3d r(c * p.x() - s * p.y(), s * p.x() + c * p.y(), p.z());
        sup(worst, (r - b.xi[i]).norm());
    }
    return worst;
}

}  // namespace sphcurve
