#include "interval_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sphcurve/quadrature.hpp"

namespace sphcurve::detail {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kSechRange = 700.0;
constexpr double kTanhRange = 350.0;
// Below this value of |P'| * distance the local model replaces the direct
// evaluation of P near a turning point.
constexpr double kModelZone = 1e-5;

}  // namespace

IntervalMap::IntervalMap(const MomentumLaw& K, const AdmissibleInterval& I) : K_(K), I_(I) {
    if (!(I.z_lo < I.z_hi)) throw std::logic_error("empty admissible interval");
    const bool lo_asym = I.lo_kind == EndpointKind::Asymptote;
    const bool hi_asym = I.hi_kind == EndpointKind::Asymptote;
    w_ = I.z_hi - I.z_lo;
    m_ = I.z_lo + 0.5 * w_;
    r_ = 0.5 * w_;
    if (lo_asym && hi_asym) {
        map_ = Map::Tanh;
        v_min_ = -kTanhRange;
        v_max_ = kTanhRange;
    } else if (lo_asym) {
        map_ = Map::SechLo;
        v_min_ = -kSechRange;
        v_max_ = 0.0;
    } else if (hi_asym) {
        map_ = Map::SechHi;
        v_min_ = 0.0;
        v_max_ = kSechRange;
    } else {
        map_ = Map::Sine;
        v_min_ = -kHalfPi;
        v_max_ = kHalfPi;
    }

    auto model = [&](double e, double inward) {
        EndModel em;
        const double s = K_.discriminant_slope(e);
        if (!std::isfinite(s) || s == 0.0) return em;
        const double d = 1e-5 * std::max(1.0, w_);
        const double sp = K_.discriminant_slope(std::clamp(e + d, -1.0, 1.0));
        const double sm = K_.discriminant_slope(std::clamp(e - d, -1.0, 1.0));
        double curv = (sp - sm) / (2.0 * d);
        if (!std::isfinite(curv)) {
            const double si = K_.discriminant_slope(e + inward * d);
            curv = inward * (si - s) / d;
        }
        em.active = std::isfinite(curv);
        em.slope = std::abs(s);
        em.curv = curv;
        return em;
    };
    if (I.lo_kind == EndpointKind::TurningPoint) lo_model_ = model(I.z_lo, 1.0);
    if (I.hi_kind == EndpointKind::TurningPoint) hi_model_ = model(I.z_hi, -1.0);
    setup_deflation();
    lo_removable_ = I.lo_kind == EndpointKind::PolePassage && !I.lo_singular;
    hi_removable_ = I.hi_kind == EndpointKind::PolePassage && !I.hi_singular;
}

void IntervalMap::setup_deflation() {
    const CurvatureLaw& law = K_.base();
    std::vector<double> n;
    switch (law.kind()) {
        case LawKind::Constant:
        case LawKind::LinearElastica: {
            const double a = law.kind() == LawKind::Constant ? 0.0 : law.param("a");
            const double b = law.kind() == LawKind::Constant ? law.param("k0") : law.param("b");
            const double c = K_.c();
            n = {(1.0 - c) * (1.0 + c), -2.0 * b * c, -1.0 - b * b - 2.0 * a * c, -2.0 * a * b,
                 -a * a};
            denom_pow_ = 0;
            break;
        }
        case LawKind::Catenary: {
            const double a = law.param("a");
            n = {-a * a, 0.0, 1.0, 0.0, -1.0};
            denom_pow_ = 2;
            break;
        }
        default: return;
    }
    while (n.size() > 1 && n.back() == 0.0) n.pop_back();
    auto divide = [&](double root) {
        // Synthetic division by (z - root); the remainder is rounding noise.
        std::vector<double> q(n.size() - 1);
        double acc = 0.0;
        for (std::size_t i = n.size(); i-- > 1;) {
            acc = n[i] + acc * root;
            q[i - 1] = acc;
        }
        n = std::move(q);
    };
    // Pole passages are simple roots of P as well (P(+-1) = -K(+-1)^2).
    auto simple_root = [](EndpointKind k) {
        return k == EndpointKind::TurningPoint || k == EndpointKind::PolePassage;
    };
    defl_lo_ = simple_root(I_.lo_kind) && n.size() > 1;
    if (defl_lo_) divide(I_.z_lo);
    defl_hi_ = simple_root(I_.hi_kind) && n.size() > 1;
    if (defl_hi_) divide(I_.z_hi);
    deflated_ = defl_lo_ || defl_hi_;
    quot_ = std::move(n);
}

double IntervalMap::deflated_rest(double z) const {
    double acc = 0.0;
    for (std::size_t i = quot_.size(); i-- > 0;) acc = acc * z + quot_[i];
    // P = (z - z_lo)(z - z_hi) Q / z^k = dlo * (-dhi) * Q / z^k.
    if (defl_hi_) acc = -acc;
    for (int i = 0; i < denom_pow_; ++i) acc /= z;
    return acc;
}

MapPoint IntervalMap::at(double v) const {
    MapPoint p{};
    p.chv = 1.0;
    switch (map_) {
        case Map::Sine: {
            v = std::clamp(v, -kHalfPi, kHalfPi);
            const double s = std::sin(v);
            const double c = std::cos(v);
            p.dlo = v <= 0.0 ? r_ * c * c / (1.0 - s) : r_ * (1.0 + s);
            p.dhi = v >= 0.0 ? r_ * c * c / (1.0 + s) : r_ * (1.0 - s);
            p.dzdv = r_ * c;
            break;
        }
        case Map::SechLo:
        case Map::SechHi: {
            const double av = std::abs(v);
            const double ch = std::cosh(av);
            const double sh2 = std::sinh(0.5 * av);
            const double near = w_ / ch;
            const double far = w_ * 2.0 * sh2 * sh2 / ch;
            p.dzdv = w_ * std::sinh(av) / (ch * ch);
            p.chv = ch;
            if (map_ == Map::SechLo) {
                p.dlo = near;
                p.dhi = far;
            } else {
                p.dhi = near;
                p.dlo = far;
            }
            break;
        }
        case Map::Tanh: {
            p.dlo = 2.0 * r_ / (1.0 + std::exp(-2.0 * v));
            p.dhi = 2.0 * r_ / (1.0 + std::exp(2.0 * v));
            const double ch = std::cosh(v);
            p.dzdv = r_ / (ch * ch);
            break;
        }
    }
    p.z = p.dlo <= p.dhi ? I_.z_lo + p.dlo : I_.z_hi - p.dhi;
    const double one_minus = (1.0 - I_.z_hi) + p.dhi;
    const double one_plus = (1.0 + I_.z_lo) + p.dlo;
    p.cz = std::sqrt(std::max(0.0, one_minus * one_plus));
    return p;
}

double IntervalMap::v_of_z(double z) const {
    z = std::clamp(z, I_.z_lo, I_.z_hi);
    const double dlo = z - I_.z_lo;
    const double dhi = I_.z_hi - z;
    double v = 0.0;
    switch (map_) {
        case Map::Sine:
            if (dhi <= dlo)
                v = kHalfPi - 2.0 * std::asin(std::sqrt(dhi / (2.0 * r_)));
            else
                v = -kHalfPi + 2.0 * std::asin(std::sqrt(dlo / (2.0 * r_)));
            break;
        case Map::SechLo:
            v = dlo > 0.0 ? -std::acosh(std::max(1.0, w_ / dlo)) : v_min_;
            break;
        case Map::SechHi:
            v = dhi > 0.0 ? std::acosh(std::max(1.0, w_ / dhi)) : v_max_;
            break;
        case Map::Tanh:
            v = 0.5 * std::log(dlo / dhi);
            break;
    }
    return std::clamp(v, v_min_, v_max_);
}

double IntervalMap::discriminant(const MapPoint& p) const {
    if (deflated_) {
        double P = deflated_rest(p.z);
        if (defl_lo_) P *= p.dlo;
        if (defl_hi_) P *= p.dhi;
        return P;
    }
    if (lo_model_.active && p.dlo * lo_model_.slope < kModelZone)
        return p.dlo * (lo_model_.slope + 0.5 * lo_model_.curv * p.dlo);
    if (hi_model_.active && p.dhi * hi_model_.slope < kModelZone)
        return p.dhi * (hi_model_.slope + 0.5 * hi_model_.curv * p.dhi);
    return K_.discriminant(p.z, p.cz);
}

double IntervalMap::speed(const MapPoint& p) const {
    if (deflated_) {
        // dz/dv^2 divided by the deflated distances, in cancelled form.
        const double R = deflated_rest(p.z);
        double G = 0.0;
        if (map_ == Map::Sine) {
            G = defl_lo_ && defl_hi_ ? 1.0 : (defl_lo_ ? p.dhi : p.dlo);
        } else if (map_ == Map::SechLo || map_ == Map::SechHi) {
            const double ch = p.chv;
            G = w_ * (ch + 1.0) / (ch * ch * ch);
        }
        if (!(R > 0.0)) return std::numeric_limits<double>::infinity();
        return std::sqrt(G / R);
    }
    // Inside the model zone of a turning point, dz/dv and sqrt(P) vanish
    // together; use the quotient in cancelled form.
    auto zone = [&](const EndModel& em, double d) {
        return em.active && d * em.slope < kModelZone;
    };
    const bool in_lo = zone(lo_model_, p.dlo);
    const bool in_hi = !in_lo && zone(hi_model_, p.dhi);
    if (in_lo || in_hi) {
        const EndModel& em = in_lo ? lo_model_ : hi_model_;
        const double d = in_lo ? p.dlo : p.dhi;
        const double q = em.slope + 0.5 * em.curv * d;
        if (map_ == Map::Sine) {
            // d = r (1 -+ sin v) and dz/dv = r cos v, so h^2 = r (1 +- sin v) / q.
            const double other = 2.0 * r_ - d;
            return std::sqrt(other / q);
        }
        if (map_ == Map::SechLo || map_ == Map::SechHi) {
            // Finite end at v = 0: h^2 = 2 w cosh^2(v/2) / (q cosh^3 v).
            const double ch = p.chv;
            return std::sqrt(w_ * (ch + 1.0) / (ch * ch * ch * q));
        }
    }
    const double P = discriminant(p);
    if (!(P > 0.0)) return p.dzdv == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return p.dzdv / std::sqrt(P);
}

double IntervalMap::lambda_rate(const MapPoint& p) const {
    const double cz2 = p.cz * p.cz;
    if (cz2 < 1e-6) {
        // Removable pole passage: K(z) ~ kappa(midpoint) (z - e) and the
        // quotient by (z - e)(z + e) is taken analytically.
        const bool near_lo = p.dlo <= p.dhi;
        if ((near_lo && lo_removable_) || (!near_lo && hi_removable_)) {
            const double e = near_lo ? I_.z_lo : I_.z_hi;
            return K_.kappa(0.5 * (p.z + e)) / (p.z + e);
        }
    }
    return -K_.eval(p.z, p.cz) / cz2;
}

double full_leg_length(const MomentumLaw& K, const AdmissibleInterval& I, double tol) {
    const IntervalMap M(K, I);
    if (!std::isfinite(M.v_min()) || !std::isfinite(M.v_max()) ||
        I.lo_kind == EndpointKind::Asymptote || I.hi_kind == EndpointKind::Asymptote)
        return std::numeric_limits<double>::infinity();
    return quad::integrate([&](double v) { return M.h(v); }, M.v_min(), M.v_max(), tol);
}

}  // namespace sphcurve::detail
