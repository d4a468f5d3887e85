#pragma once

// Independent reference quadrature for the tests: adaptive Gauss-Kronrod
// 7/15 in long double. Shares no code with the library.

#include <cmath>
#include <functional>

namespace testsupport {

inline long double gk15(const std::function<long double(long double)>& f, long double a,
                        long double b, long double& err) {
    static const long double xk[8] = {
        0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
        0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
        0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
        0.207784955007898467600689403773245L, 0.000000000000000000000000000000000L};
    static const long double wk[8] = {
        0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
        0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
        0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
        0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
    static const long double wg[4] = {
        0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
        0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};
    const long double c = 0.5L * (a + b), h = 0.5L * (b - a);
    const long double fc = f(c);
    long double rk = wk[7] * fc, rg = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const long double dx = h * xk[j];
        const long double s = f(c - dx) + f(c + dx);
        rk += wk[j] * s;
        if (j % 2 == 1) rg += wg[j / 2] * s;
    }
    err = std::fabs((rk - rg) * h);
    return rk * h;
}

inline long double integrate(const std::function<long double(long double)>& f, long double a,
                             long double b, long double tol, int depth = 0) {
    long double err = 0;
    const long double v = gk15(f, a, b, err);
    if (err <= tol || depth > 40) return v;
    const long double m = 0.5L * (a + b);
    return integrate(f, a, m, 0.5L * tol, depth + 1) + integrate(f, m, b, 0.5L * tol, depth + 1);
}

inline double ellip_F(double phi, double p) {
    const long double pp = p;
    return static_cast<double>(integrate(
        [pp](long double t) { return 1.0L / std::sqrt(1.0L - pp * pp * std::sin(t) * std::sin(t)); },
        0.0L, phi, 1e-17L));
}

inline double ellip_E(double phi, double p) {
    const long double pp = p;
    return static_cast<double>(integrate(
        [pp](long double t) { return std::sqrt(1.0L - pp * pp * std::sin(t) * std::sin(t)); }, 0.0L,
        phi, 1e-17L));
}

// phi with F(phi, p) = u, by bisection on the reference F.
inline double amplitude(double u, double p) {
    double lo = -10.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        (ellip_F(m, p) < u ? lo : hi) = m;
        if (hi - lo < 1e-15) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace testsupport
