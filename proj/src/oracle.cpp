#include "sphcurve/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Geometry>

namespace sphcurve {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// |kappa| * ds above this and the step no longer resolves the turning.
constexpr double kMaxTurnPerStep = 0.05;

struct Deriv {
    Eigen::Vector3d dxi, dt;
    double kappa;
};

Deriv rhs(const CurvatureLaw& law, const Eigen::Vector3d& xi, const Eigen::Vector3d& t) {
    // Intermediate stages leave the sphere slightly; kappa is read at the
    // height clamped back into [-1, 1].
    const double k = law(std::clamp(xi.z(), -1.0, 1.0));
    return {t, -xi + k * xi.cross(t), k};
}

double project(FrenetState& st) {
    const double nx = st.xi.norm();
    st.xi /= nx;
    const Eigen::Vector3d t0 = st.t;
    st.t -= st.t.dot(st.xi) * st.xi;
    st.t.normalize();
    return std::max(std::abs(nx - 1.0), (st.t - t0).norm());
}

// One RK4 step; returns false if kappa misbehaves at any stage.
bool step(const CurvatureLaw& law, FrenetState& st, double h, double& kmax) {
    const Deriv k1 = rhs(law, st.xi, st.t);
    const Deriv k2 = rhs(law, st.xi + 0.5 * h * k1.dxi, st.t + 0.5 * h * k1.dt);
    const Deriv k3 = rhs(law, st.xi + 0.5 * h * k2.dxi, st.t + 0.5 * h * k2.dt);
    const Deriv k4 = rhs(law, st.xi + h * k3.dxi, st.t + h * k3.dt);
    kmax = 0.0;
    for (double k : {k1.kappa, k2.kappa, k3.kappa, k4.kappa}) {
        if (!std::isfinite(k)) {
            kmax = kNaN;
            return false;
        }
        kmax = std::max(kmax, std::abs(k));
    }
    if (kmax * std::abs(h) > kMaxTurnPerStep) return false;
    st.xi += h / 6.0 * (k1.dxi + 2.0 * k2.dxi + 2.0 * k3.dxi + k4.dxi);
    st.t += h / 6.0 * (k1.dt + 2.0 * k2.dt + 2.0 * k3.dt + k4.dt);
    return true;
}

struct Half {
    std::vector<FrenetState> states;
    std::vector<double> s;
    std::string stop;
};

Half march(const CurvatureLaw& law, FrenetState st, long n_steps, double h, int stride,
           OracleStats& stats) {
    Half out;
    out.states.push_back(st);
    out.s.push_back(0.0);
    for (long i = 1; i <= n_steps; ++i) {
        double kmax = 0.0;
        if (!step(law, st, h, kmax)) {
            std::ostringstream msg;
            msg.precision(10);
            msg << (std::isnan(kmax) ? "kappa undefined" : "kappa too large for the step")
                << " near s=" << (i - 1) * h << ", z=" << st.xi.z();
            out.stop = msg.str();
            break;
        }
        stats.max_projection = std::max(stats.max_projection, project(st));
        ++stats.steps;
        if (i % stride == 0) {
            out.states.push_back(st);
            out.s.push_back(i * h);
        }
    }
    return out;
}

}  // namespace

void check_frenet_state(const FrenetState& st, double tol) {
    if (!(std::abs(st.xi.norm() - 1.0) <= tol) || !(std::abs(st.t.norm() - 1.0) <= tol) ||
        !(std::abs(st.xi.dot(st.t)) <= tol))
        throw std::invalid_argument("Frenet state: need |xi| = |t| = 1 and <xi, t> = 0");
}

FrenetState state_from_momentum(const MomentumLaw& K, double z, int dz_sign, double lambda) {
    const double cz = std::sqrt((1.0 - z) * (1.0 + z));
    if (!(cz > 0.0)) throw std::invalid_argument("state_from_momentum: z must avoid the poles");
    const double k = K(z);
    const double P = std::max(0.0, K.discriminant(z));
    const double zd = (dz_sign < 0 ? -1.0 : 1.0) * std::sqrt(P);
    const double ld = k / (z * z - 1.0);
    const double cl = std::cos(lambda), sl = std::sin(lambda);
    FrenetState st;
    st.xi = {cz * cl, cz * sl, z};
    const double czd = -z * zd / cz;
    st.t = {czd * cl - cz * sl * ld, czd * sl + cz * cl * ld, zd};
    project(st);
    return st;
}

CurveTrace frenet_integrate(const CurvatureLaw& law, const FrenetState& init, double s_span,
                            double ds, int n_samples, OracleStats* stats) {
    check_frenet_state(init);
    if (!(s_span > 0.0) || !std::isfinite(s_span))
        throw std::invalid_argument("frenet_integrate: s_span must be positive");
    if (!(ds > 0.0) || ds > 1e-3) throw std::invalid_argument("frenet_integrate: need 0 < ds <= 1e-3");
    if (n_samples != 0 && (n_samples < 3 || n_samples % 2 == 0))
        throw std::invalid_argument("frenet_integrate: n_samples must be odd and >= 3");

    const double half = 0.5 * s_span;
    long n = 0;
    int output_stride = 1;
    if (n_samples == 0) {
        n = static_cast<long>(std::ceil(half / ds - 1e-9));
    } else {
        const long per_side = (n_samples - 1) / 2;
        output_stride = static_cast<int>(std::ceil(half / per_side / ds - 1e-9));
        n = per_side * output_stride;
    }
    const double h = half / n;

    OracleStats local;
    OracleStats& st = stats ? *stats : local;
    FrenetState s0 = init;
    project(s0);
    const Half fwd = march(law, s0, n, h, output_stride, st);
    const Half bwd = march(law, s0, n, -h, output_stride, st);

    CurveTrace tr;
    double lam_prev = 0.0;
    bool first = true;
    auto emit = [&](double s, const FrenetState& x) {
        const Eigen::Vector3d& p = x.xi;
        double lam = std::atan2(p.y(), p.x());
        if (!first) lam += 2.0 * std::numbers::pi * std::round((lam_prev - lam) / (2.0 * std::numbers::pi));
        first = false;
        lam_prev = lam;
        tr.push_back(s, p.z(), std::asin(std::clamp(p.z(), -1.0, 1.0)), lam, p);
    };
    for (std::size_t i = bwd.states.size(); i-- > 1;) emit(bwd.s[i], bwd.states[i]);
    for (std::size_t i = 0; i < fwd.states.size(); ++i) emit(fwd.s[i], fwd.states[i]);

    tr.meta.source = "oracle";
    tr.meta.law = law.name();
    tr.meta.params = law.params();
    tr.meta.s_span = s_span;
    tr.meta.n_samples = static_cast<int>(tr.size());
    tr.meta.ds = h * output_stride;
    if (!fwd.stop.empty() || !bwd.stop.empty()) {
        tr.meta.truncated = true;
        tr.meta.truncation_reason = !fwd.stop.empty() ? fwd.stop : bwd.stop;
    }
    return tr;
}

std::vector<double> curvature_from_trace(const CurveTrace& trace) {
    if (trace.size() < 5) throw std::invalid_argument("curvature_from_trace: need at least 5 samples");
    const double h = uniform_spacing(trace.s);
    const std::size_t n = trace.size();
    std::vector<double> k(n, kNaN);
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const Eigen::Vector3d& m2 = trace.xi[i - 2];
        const Eigen::Vector3d& m1 = trace.xi[i - 1];
        const Eigen::Vector3d& p1 = trace.xi[i + 1];
        const Eigen::Vector3d& p2 = trace.xi[i + 2];
        const Eigen::Vector3d& x = trace.xi[i];
        const Eigen::Vector3d d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
        const Eigen::Vector3d d2 = (-m2 + 16.0 * m1 - 30.0 * x + 16.0 * p1 - p2) / (12.0 * h * h);
        k[i] = x.dot(d1.cross(d2));
    }
    return k;
}

}  // namespace sphcurve
