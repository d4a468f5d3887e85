#include "sphcurve/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sphcurve::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxAgm = 40;

// Descending AGM scale a_n, b_n, c_n starting from (1, p', p).
struct AgmChain {
    double a[kMaxAgm + 1];
    double c[kMaxAgm + 1];
    int n = 0;
};

AgmChain agm_chain(const EllipticModulus& m) {
    AgmChain ch;
    double a = 1.0;
    double b = m.p_prime;
    ch.a[0] = a;
    ch.c[0] = m.p;
    int n = 0;
    while (n < kMaxAgm && std::abs(a - b) > 1e-15 * a) {
        const double an = 0.5 * (a + b);
        const double bn = std::sqrt(a * b);
        ++n;
        ch.c[n] = 0.5 * (a - b);
        ch.a[n] = an;
        a = an;
        b = bn;
    }
    ch.n = n;
    return ch;
}

bool is_unit(const EllipticModulus& m) { return m.p == 1.0; }

// F and E for |phi| <= pi/2 by the AGM phase recursion.
void landen_FE(double phi, const EllipticModulus& m, double* F, double* E) {
    if (m.p == 0.0) {
        *F = phi;
        if (E) *E = phi;
        return;
    }
    const AgmChain ch = agm_chain(m);
    double ph = phi;
    double sum_c2 = 0.5 * ch.c[0] * ch.c[0];
    double sum_sin = 0.0;
    double b = m.p_prime;
    double pow2 = 1.0;
    for (int k = 0; k < ch.n; ++k) {
        const double a = ch.a[k];
        const double s = std::sin(ph);
        const double co = std::cos(ph);
        ph = 2.0 * ph + std::atan((b - a) * s * co / (a * co * co + b * s * s));
        b = std::sqrt(a * b);
        pow2 *= 2.0;
        sum_c2 += 0.5 * pow2 * ch.c[k + 1] * ch.c[k + 1];
        sum_sin += ch.c[k + 1] * std::sin(ph);
    }
    *F = ph / (pow2 * ch.a[ch.n]);
    if (E) *E = *F * (1.0 - sum_c2) + sum_sin;
}

}  // namespace

EllipticModulus::EllipticModulus(double modulus) : p(modulus) {
    if (std::isnan(modulus)) {
        p_prime = kNaN;
        return;
    }
    if (modulus < 0.0 || modulus > 1.0)
        throw std::invalid_argument("elliptic modulus must lie in [0, 1]");
    p_prime = std::sqrt((1.0 - modulus) * (1.0 + modulus));
}

double complete_K(const EllipticModulus& m) {
    if (std::isnan(m.p)) return kNaN;
    if (is_unit(m)) throw std::domain_error("complete_K diverges at p = 1");
    const AgmChain ch = agm_chain(m);
    return kPi / (2.0 * ch.a[ch.n]);
}

double complete_E(const EllipticModulus& m) {
    if (std::isnan(m.p)) return kNaN;
    if (is_unit(m)) return 1.0;
    const AgmChain ch = agm_chain(m);
    double sum = 0.5 * ch.c[0] * ch.c[0];
    double pow2 = 1.0;
    for (int k = 1; k <= ch.n; ++k) {
        pow2 *= 2.0;
        sum += 0.5 * pow2 * ch.c[k] * ch.c[k];
    }
    return kPi / (2.0 * ch.a[ch.n]) * (1.0 - sum);
}

double incomplete_F(double phi, const EllipticModulus& m) {
    if (std::isnan(phi) || std::isnan(m.p)) return kNaN;
    if (is_unit(m)) {
        if (!(std::abs(phi) < kPi / 2))
            throw std::domain_error("incomplete_F at p = 1 requires |phi| < pi/2");
        return std::atanh(std::sin(phi));
    }
    const double j = std::round(phi / kPi);
    const double r = phi - j * kPi;
    double F = 0.0;
    landen_FE(r, m, &F, nullptr);
    if (j != 0.0) F += 2.0 * j * complete_K(m);
    return F;
}

double incomplete_E(double phi, const EllipticModulus& m) {
    if (std::isnan(phi) || std::isnan(m.p)) return kNaN;
    const double j = std::round(phi / kPi);
    const double r = phi - j * kPi;
    double E = 0.0;
    if (is_unit(m)) {
        E = std::sin(r);
    } else {
        double F = 0.0;
        landen_FE(r, m, &F, &E);
    }
    if (j != 0.0) E += 2.0 * j * complete_E(m);
    return E;
}

JacobiTriple jacobi(double u, const EllipticModulus& m) {
    JacobiTriple t;
    if (std::isnan(u) || std::isnan(m.p)) {
        t.sn = t.cn = t.dn = t.am = kNaN;
        return t;
    }
    if (m.p == 0.0) {
        t.sn = std::sin(u);
        t.cn = std::cos(u);
        t.dn = 1.0;
        t.am = u;
        return t;
    }
    if (is_unit(m)) {
        t.sn = std::tanh(u);
        t.cn = 1.0 / std::cosh(u);
        t.dn = t.cn;
        t.am = std::atan(std::sinh(u));
        return t;
    }

    const AgmChain ch = agm_chain(m);
    const double K = kPi / (2.0 * ch.a[ch.n]);
    const double j = std::round(u / (2.0 * K));
    const double r = u - 2.0 * j * K;

    double ph = std::ldexp(ch.a[ch.n] * r, ch.n);
    for (int k = ch.n; k >= 1; --k) ph = 0.5 * (ph + std::asin(ch.c[k] / ch.a[k] * std::sin(ph)));
    const double sign = std::fmod(j, 2.0) == 0.0 ? 1.0 : -1.0;
    t.am = ph + j * kPi;
    t.sn = sign * std::sin(ph);
    t.cn = sign * std::cos(ph);
    // dn^2 = cn^2 + p'^2 sn^2: a sum of positive terms, so no cancellation
    // near the quarter period.
    t.dn = std::hypot(t.cn, m.p_prime * t.sn);
    return t;
}

double inverse_incomplete_E(double value, const EllipticModulus& m) {
    if (std::isnan(value) || std::isnan(m.p)) return kNaN;
    if (m.p == 0.0) return value;
    if (is_unit(m)) {
        const double j = std::round(value / 2.0);
        return j * kPi + std::asin(std::clamp(value - 2.0 * j, -1.0, 1.0));
    }
    if (value < 0.0) return -inverse_incomplete_E(-value, m);
    // E' lies in [p', 1], which brackets the root.
    double lo = value;
    double hi = value / m.p_prime;
    double phi = value * (kPi / 2.0) / complete_E(m);
    if (!(phi > lo && phi < hi)) phi = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        const double f = incomplete_E(phi, m) - value;
        if (f > 0.0) hi = phi; else lo = phi;
        const double s = std::sin(phi);
        const double d = std::sqrt(1.0 - m.p * m.p * s * s);
        double next = phi - f / d;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - phi) <= 1e-16 * (1.0 + std::abs(phi))) return next;
        phi = next;
        if (hi - lo <= 1e-16 * (1.0 + std::abs(phi))) break;
    }
    return phi;
}

}  // namespace sphcurve::specfun
