#include "sphcurve/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sphcurve/quadrature.hpp"
#include "sphcurve/specfun.hpp"

namespace sphcurve {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

CurvePoint point(double psi, double lambda) {
    return {psi, lambda, geographic_point(psi, lambda)};
}

// Latitude unfolded through pole passages. a = asin z in [-pi/2, pi/2];
// cos_sign is the sign of cos(phi); south_laps counts the 2 pi offset picked
// up at south pole passages (see reconstruct).
double unfold(double a, int cos_sign, int laps) {
    return (cos_sign > 0 ? a : kPi - a) + 2.0 * kPi * laps;
}

// Parity of the number of points t0 + m P strictly between 0 and theta.
bool odd_crossings(double theta, double t0, double P) {
    const double a = std::floor(-t0 / P);
    const double b = std::floor((theta - t0) / P);
    const double n = theta >= 0 ? b - a : a - b;
    return std::fmod(std::abs(n), 2.0) == 1.0;
}

double get(const Params& p, const std::string& key) {
    auto it = p.find(key);
    return it == p.end() ? kNaN : it->second;
}

bool has(const Params& p, const std::string& key) { return p.count(key) > 0; }

// --------------------------------------------------------------- curves

struct Curve {
    std::function<CurvePoint(double)> eval;
    std::pair<double, double> valid{-kInf, kInf};
    double shift = 0.0;
};

Curve great_circle(double c) {
    const double r = std::sqrt((1.0 - c) * (1.0 + c));
    Curve cv;
    cv.eval = [c, r](double s) {
        const double z = r * std::sin(s);
        const double psi = c == 0.0 ? s : std::asin(z);
        const double j = std::round(s / kPi);
        const double lambda = -std::atan(c * std::tan(s - j * kPi)) - j * sgn(c) * kPi;
        return point(psi, lambda);
    };
    return cv;
}

Curve small_circle(double k, double c) {
    // Mirror image for negative k0: K -> -K flips the longitude.
    const double mirror = k < 0 ? -1.0 : 1.0;
    k = std::abs(k);
    c *= mirror;
    const double w = std::sqrt(1.0 + k * k);
    const double q = std::sqrt(1.0 - c * c + k * k);
    Curve cv;
    cv.eval = [=](double s) {
        const double theta = w * s;
        const double j = std::round(theta / (2.0 * kPi));
        const double T = std::tan(0.5 * (theta - 2.0 * kPi * j));
        double lam = 0.0;
        double jump = 0.0;
        if (c == k) {
            const double B = -(1.0 + 2.0 * k * k);
            lam = std::atan((1.0 + B * T) / (2.0 * k * w));
            jump = kPi * sgn(B);
        } else if (c == -k) {
            const double B = 1.0 + 2.0 * k * k;
            lam = std::atan((1.0 + B * T) / (2.0 * k * w));
            jump = kPi * sgn(B);
        } else {
            const double B1 = 1.0 - c * k + k * k, D1 = (k - c) * w;
            const double B2 = -(1.0 + c * k + k * k), D2 = (k + c) * w;
            lam = std::atan((q + B1 * T) / D1) + std::atan((q + B2 * T) / D2);
            jump = kPi * (sgn(B1 / D1) + sgn(B2 / D2));
        }
        lam += j * jump;
        const double z = std::clamp((q * std::sin(theta) - c * k) / (1.0 + k * k), -1.0, 1.0);
        const double a = std::asin(z);
        double psi = a;
        if (c == k && odd_crossings(theta, -0.5 * kPi, 2.0 * kPi)) psi = unfold(a, -1, -1);
        if (c == -k && odd_crossings(theta, 0.5 * kPi, 2.0 * kPi)) psi = unfold(a, -1, 0);
        return point(psi, mirror * lam);
    };
    return cv;
}

Curve seiffert(double p) {
    const specfun::EllipticModulus m(p);
    Curve cv;
    cv.eval = [m, p](double s) {
        const auto j = specfun::jacobi(s, m);
        return point(0.5 * kPi - j.am, p * s);
    };
    return cv;
}

Curve borderline(double a) {
    const double w = std::sqrt(2.0 * a - 1.0);
    Curve cv;
    cv.eval = [a, w](double s) {
        if (a == 1.0) return point(0.5 * kPi - std::atan(std::sinh(s)), s);
        const double z = w / a / std::cosh(w * s);
        return point(std::asin(z), s + std::atan(w / (1.0 - a) * std::tanh(w * s)));
    };
    return cv;
}

Curve loxodrome(double a) {
    const double r = std::sqrt((1.0 - a) * (1.0 + a));
    Curve cv;
    cv.eval = [a, r](double s) {
        // log(sec x + tan x) = asinh(tan x) on |x| < pi/2.
        return point(r * s, a / r * std::asinh(std::tan(r * s)));
    };
    const double edge = 0.5 * kPi / r;
    cv.valid = {-edge, edge};
    return cv;
}

Curve loxo_one(double a) {
    const double ca = std::sqrt(1.0 - a), sa = std::sqrt(a);
    const double sa2 = a;
    Curve cv;
    cv.eval = [=](double s) {
        const double u = ca * s;
        const double root = std::sqrt(std::max(0.0, (sa - u) * (sa + u)));
        const double lam = std::atan(u / root) / ca - 0.5 * std::atan((u + sa2) / (ca * root)) -
                           0.5 * std::atan((u - sa2) / (ca * root));
        return point(std::asin(u), lam);
    };
    const double edge = sa / ca;
    cv.valid = {-edge, edge};
    return cv;
}

Curve loxo_super(double a, double sign) {
    const double sd = std::sqrt(a - 1.0);
    const double s_max = -0.5 * std::log(a) / sd;
    const double shift = s_max - 1.0;
    Curve cv;
    cv.eval = [=](double s_local) {
        const double s = s_local + shift;
        const double e = std::exp(sd * s);
        const double x = a * e * e;
        const double q = std::sqrt(std::max(0.0, 1.0 - x));
        const double one_minus_q = x / (1.0 + q);
        const double at = 0.5 * std::log((1.0 + q) / one_minus_q);
        const double lam = -at / sd + std::atan(q / sd);
        return point(sign * std::asin(std::min(1.0, e)), lam);
    };
    cv.valid = {-kInf, s_max - shift};
    cv.shift = shift;
    return cv;
}

Curve catenary(double a) {
    const double rho = std::sqrt((1.0 - 2.0 * a) * (1.0 + 2.0 * a));
    auto rate = [a, rho](double t) {
        const double sn = std::sin(2.0 * t);
        const double z = std::sqrt(0.5 * (1.0 + rho * sn));
        return a / (z * 0.5 * (1.0 - rho * sn));
    };
    const double per = quad::integrate(rate, 0.0, kPi, 1e-14);
    Curve cv;
    cv.eval = [=](double s) {
        const double j = std::floor(s / kPi);
        const double lam = j * per + quad::integrate(rate, 0.0, s - j * kPi, 1e-14);
        const double z = std::sqrt(0.5 * (1.0 + rho * std::sin(2.0 * s)));
        return point(std::asin(z), lam);
    };
    return cv;
}

Curve sn_family(double p) {
    const specfun::EllipticModulus m(p);
    const double pp = m.p_prime;
    Curve cv;
    cv.eval = [=](double s) {
        const auto j = specfun::jacobi(s, m);
        // (dn + p')/(dn - p') = (dn + p')^2 / (p cn)^2 avoids the cancellation.
        const double lam = -p / pp * std::log((j.dn + pp) / (p * std::abs(j.cn)));
        return point(j.am, lam);
    };
    return cv;
}

Curve clelia(double n) {
    const double r = std::sqrt(n * n + 1.0);
    const specfun::EllipticModulus m(1.0 / r);
    const double scale = r / n;
    Curve cv;
    cv.eval = [=](double s) {
        const double psi = specfun::inverse_incomplete_E(s / scale, m);
        return point(psi, psi / n);
    };
    return cv;
}

}  // namespace

// ------------------------------------------------------------------ catalog

const std::vector<FamilyInfo>& family_catalog() {
    static const std::vector<FamilyInfo> cat = {
        {Family::Constant, "constant", {"k0", "c"}, "kappa = k0, K = k0 z + c", true},
        {Family::SmallCircle, "small-circle", {"k0", "c"}, "kappa = k0 > 0, K = k0 z + c", true},
        {Family::GreatCircle, "great-circle", {"c"}, "kappa = 0, K = c, |c| < 1", true},
        {Family::Seiffert, "seiffert", {"p"}, "K = p z^2 - p, z = cn(s, p), 0 < p <= 1", true},
        {Family::Borderline, "borderline", {"a"}, "K = a z^2 - 1, a > 1/2", true},
        {Family::Elastica, "elastica", {"a", "b", "c"}, "kappa = 2 a z + b, K = a z^2 + b z + c",
         false},
        {Family::Loxodrome, "loxodrome", {"a|alpha"}, "kappa = a z / sqrt(1 - z^2), a = cos alpha",
         true},
        {Family::LoxoOne, "loxo-one", {"a|alpha"}, "kappa = z / sqrt(a - z^2), a = sin^2 alpha",
         true},
        {Family::LoxoSuper, "loxo-super", {"a|delta", "sign"},
         "kappa = a z / sqrt(1 - a z^2), a = cosh^2 delta", true},
        {Family::Catenary, "catenary", {"a"}, "kappa = a / z^2, 0 < a < 1/2", true},
        {Family::SnFamily, "sn-family", {"p"}, "kappa = p (1 - 2 z^2) / sqrt(1 - z^2), z = sn(s, p)",
         true},
        {Family::Viviani, "viviani", {}, "phi = lambda", true},
        {Family::Clelia, "clelia", {"n"}, "phi = n lambda, n > 0", true},
    };
    return cat;
}

const FamilyInfo& family_info(Family f) {
    for (const auto& i : family_catalog())
        if (i.family == f) return i;
    throw std::logic_error("family missing from catalog");
}

Family family_from_name(const std::string& name) {
    for (const auto& i : family_catalog())
        if (i.name == name) return i.family;
    throw std::invalid_argument("unknown family '" + name + "'");
}

Params canonical_params(Family f, const Params& given) {
    const FamilyInfo& info = family_info(f);
    std::vector<std::string> allowed;
    for (const auto& key : info.params) {
        const auto bar = key.find('|');
        if (bar == std::string::npos) {
            allowed.push_back(key);
        } else {
            allowed.push_back(key.substr(0, bar));
            allowed.push_back(key.substr(bar + 1));
        }
    }
    for (const auto& [k, v] : given) {
        require(std::find(allowed.begin(), allowed.end(), k) != allowed.end(),
                info.name + ": unknown parameter '" + k + "'");
        require(std::isfinite(v), info.name + ": parameter '" + k + "' must be finite");
    }
    auto need = [&](const std::string& k) {
        require(has(given, k), info.name + ": missing parameter '" + k + "'");
        return given.at(k);
    };
    auto either = [&](const std::string& a, const std::string& b) {
        require(has(given, a) != has(given, b),
                info.name + ": give exactly one of '" + a + "' and '" + b + "'");
    };
    Params out;
    switch (f) {
        case Family::Constant:
            out["k0"] = has(given, "k0") ? given.at("k0") : 0.0;
            out["c"] = has(given, "c") ? given.at("c") : 0.0;
            break;
        case Family::SmallCircle: {
            const double k = need("k0");
            const double c = has(given, "c") ? given.at("c") : 0.0;
            require(k > 0.0, "small-circle: requires k0 > 0");
            require(std::abs(c) < std::sqrt(1.0 + k * k),
                    "small-circle: requires |c| < sqrt(1 + k0^2)");
            out = {{"k0", k}, {"c", c}};
            break;
        }
        case Family::GreatCircle: {
            const double c = has(given, "c") ? given.at("c") : 0.0;
            require(std::abs(c) < 1.0, "great-circle: requires |c| < 1");
            out = {{"c", c}};
            break;
        }
        case Family::Seiffert: {
            const double p = need("p");
            require(p > 0.0 && p <= 1.0, "seiffert: requires 0 < p <= 1");
            out = {{"p", p}};
            break;
        }
        case Family::Borderline: {
            const double a = need("a");
            require(a > 0.5, "borderline: requires a > 1/2");
            out = {{"a", a}};
            break;
        }
        case Family::Elastica: {
            const double a = need("a");
            require(a != 0.0, "elastica: requires a != 0");
            out = {{"a", a}, {"b", has(given, "b") ? given.at("b") : 0.0},
                   {"c", has(given, "c") ? given.at("c") : 0.0}};
            break;
        }
        case Family::Loxodrome: {
            either("a", "alpha");
            double a = get(given, "a");
            if (has(given, "alpha")) {
                const double al = given.at("alpha");
                require(al > 0.0 && al < 0.5 * kPi, "loxodrome: requires 0 < alpha < pi/2");
                a = std::cos(al);
            }
            require(a > 0.0 && a < 1.0, "loxodrome: requires 0 < a < 1");
            out = {{"a", a}};
            break;
        }
        case Family::LoxoOne: {
            either("a", "alpha");
            double a = get(given, "a");
            if (has(given, "alpha")) {
                const double al = given.at("alpha");
                require(al > 0.0 && al < 0.5 * kPi, "loxo-one: requires 0 < alpha < pi/2");
                a = std::sin(al) * std::sin(al);
            }
            require(a > 0.0 && a < 1.0, "loxo-one: requires 0 < a < 1");
            out = {{"a", a}};
            break;
        }
        case Family::LoxoSuper: {
            either("a", "delta");
            double a = get(given, "a");
            if (has(given, "delta")) {
                const double d = given.at("delta");
                require(d > 0.0, "loxo-super: requires delta > 0");
                a = std::cosh(d) * std::cosh(d);
            }
            require(a > 1.0, "loxo-super: requires a > 1");
            const double sign = has(given, "sign") ? given.at("sign") : 1.0;
            require(sign == 1.0 || sign == -1.0, "loxo-super: sign must be +1 or -1");
            out = {{"a", a}, {"sign", sign}};
            break;
        }
        case Family::Catenary: {
            const double a = need("a");
            require(a > 0.0 && a < 0.5, "catenary: requires 0 < a < 1/2");
            out = {{"a", a}};
            break;
        }
        case Family::SnFamily: {
            const double p = need("p");
            require(p > 0.0 && p < 1.0, "sn-family: requires 0 < p < 1");
            out = {{"p", p}};
            break;
        }
        case Family::Viviani: break;
        case Family::Clelia: {
            const double n = need("n");
            require(n > 0.0, "clelia: requires n > 0");
            out = {{"n", n}};
            break;
        }
    }
    return out;
}

CurvatureLaw law_for(Family f, const Params& given) {
    const Params p = canonical_params(f, given);
    switch (f) {
        case Family::Constant:
        case Family::SmallCircle: return CurvatureLaw::constant(p.at("k0"));
        case Family::GreatCircle: return CurvatureLaw::constant(0.0);
        case Family::Seiffert: return CurvatureLaw::linear_elastica(p.at("p"), 0.0);
        case Family::Borderline: return CurvatureLaw::linear_elastica(p.at("a"), 0.0);
        case Family::Elastica: return CurvatureLaw::linear_elastica(p.at("a"), p.at("b"));
        case Family::Loxodrome: return CurvatureLaw::loxo_sub(p.at("a"));
        case Family::LoxoOne: return CurvatureLaw::loxo_one(p.at("a"));
        case Family::LoxoSuper: return CurvatureLaw::loxo_super(p.at("a"));
        case Family::Catenary: return CurvatureLaw::catenary(p.at("a"));
        case Family::SnFamily: return CurvatureLaw::sn_family(p.at("p"));
        case Family::Viviani: return CurvatureLaw::viviani();
        case Family::Clelia: return CurvatureLaw::clelia(p.at("n"));
    }
    throw std::logic_error("unhandled family");
}

MomentumLaw momentum_for(Family f, const Params& given) {
    const Params p = canonical_params(f, given);
    const CurvatureLaw law = law_for(f, p);
    double c = 0.0;
    switch (f) {
        case Family::Constant:
        case Family::SmallCircle:
        case Family::GreatCircle:
        case Family::Elastica: c = p.at("c"); break;
        case Family::Seiffert: c = -p.at("p"); break;
        case Family::Borderline: c = -1.0; break;
        default: break;
    }
    return antiderivative(law, c);
}

// ------------------------------------------------------------ closed forms

ClosedFormCurve::ClosedFormCurve(Family f, Params params, std::function<CurvePoint(double)> eval,
                                 std::pair<double, double> valid_s, double s_shift)
    : family_(f),
      params_(std::move(params)),
      eval_(std::move(eval)),
      valid_(valid_s),
      s_shift_(s_shift) {}

CurveTrace ClosedFormCurve::sample(double s_span, int n_samples) const {
    require(s_span > 0.0 && std::isfinite(s_span), "sample: s_span must be positive");
    require(n_samples >= 2, "sample: need at least two samples");
    const std::vector<double> s = uniform_grid(s_span, n_samples);
    std::vector<CurvePoint> pts(s.size());
    std::vector<char> ok(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        ok[i] = valid(s[i]);
        if (ok[i]) {
            pts[i] = eval(s[i]);
            ok[i] = std::isfinite(pts[i].phi) && std::isfinite(pts[i].lambda);
        }
    }
    std::size_t c = 0;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (std::abs(s[i]) < std::abs(s[c])) c = i;
    CurveTrace t;
    t.meta.source = "closed-form";
    t.meta.law = family_info(family_).name;
    t.meta.params = params_;
    t.meta.c = has(params_, "c") ? params_.at("c") : 0.0;
    t.meta.s_span = s_span;
    t.meta.n_samples = n_samples;
    t.meta.ds = s_span / (n_samples - 1);
    if (!ok[c]) {
        t.meta.truncated = true;
        t.meta.truncation_reason = "closed form undefined at s=0";
        return t;
    }
    std::size_t lo = c, hi = c;
    while (lo > 0 && ok[lo - 1]) --lo;
    while (hi + 1 < s.size() && ok[hi + 1]) ++hi;
    for (std::size_t i = lo; i <= hi; ++i)
        t.push_back(s[i], pts[i].xi.z(), pts[i].phi, pts[i].lambda, pts[i].xi);
    if (lo > 0 || hi + 1 < s.size()) {
        t.meta.truncated = true;
        t.meta.truncation_reason = "outside the closed form's domain";
    }
    return t;
}

Eigen::Vector3d ClosedFormCurve::tangent(double s, double h) const {
    const Eigen::Vector3d d = (eval(s - 2 * h).xi - 8.0 * eval(s - h).xi + 8.0 * eval(s + h).xi -
                               eval(s + 2 * h).xi) /
                              (12.0 * h);
    return d;
}

ClosedFormCurve closed_form(Family f, const Params& given) {
    const Params p = canonical_params(f, given);
    Curve cv;
    switch (f) {
        case Family::Constant: {
            const double k = p.at("k0"), c = p.at("c");
            if (k == 0.0) {
                require(std::abs(c) < 1.0, "constant: k0 = 0 requires |c| < 1");
                cv = great_circle(c);
            } else {
                require(std::abs(c) < std::sqrt(1.0 + k * k),
                        "constant: requires |c| < sqrt(1 + k0^2)");
                cv = small_circle(k, c);
            }
            break;
        }
        case Family::SmallCircle: cv = small_circle(p.at("k0"), p.at("c")); break;
        case Family::GreatCircle: cv = great_circle(p.at("c")); break;
        case Family::Seiffert: cv = seiffert(p.at("p")); break;
        case Family::Borderline: cv = borderline(p.at("a")); break;
        case Family::Elastica:
            throw std::invalid_argument(
                "elastica: no closed form in the catalog; use reconstruct");
        case Family::Loxodrome: cv = loxodrome(p.at("a")); break;
        case Family::LoxoOne: cv = loxo_one(p.at("a")); break;
        case Family::LoxoSuper: cv = loxo_super(p.at("a"), p.at("sign")); break;
        case Family::Catenary: cv = catenary(p.at("a")); break;
        case Family::SnFamily: cv = sn_family(p.at("p")); break;
        case Family::Viviani: cv = clelia(1.0); break;
        case Family::Clelia: cv = clelia(p.at("n")); break;
    }
    return ClosedFormCurve(f, p, std::move(cv.eval), cv.valid, cv.shift);
}

FamilyGauge reconstruction_gauge(Family f, const Params& given) {
    const Params p = canonical_params(f, given);
    const MomentumLaw K = momentum_for(f, p);
    const auto intervals = admissible_intervals(K);
    require(!intervals.empty(), family_info(f).name + ": empty admissible set for these parameters");
    FamilyGauge g{0.0, 1, 0.0, intervals.front()};
    bool from_closed_form = true;
    switch (f) {
        case Family::Seiffert: g.z0 = 1.0; g.dz_sign0 = -1; break;
        case Family::Borderline: {
            const double a = p.at("a");
            g.z0 = a == 1.0 ? 1.0 : std::sqrt(2.0 * a - 1.0) / a;
            g.dz_sign0 = -1;
            break;
        }
        case Family::Catenary: g.z0 = std::sqrt(0.5); break;
        case Family::LoxoSuper: {
            const ClosedFormCurve cf = closed_form(f, p);
            g.z0 = cf.eval(0.0).xi.z();
            g.dz_sign0 = p.at("sign") > 0 ? 1 : -1;
            break;
        }
        case Family::Elastica:
            from_closed_form = false;
            g.z0 = intervals.front().z_lo + 0.5 * (intervals.front().z_hi - intervals.front().z_lo);
            break;
        default: {
            const ClosedFormCurve cf = closed_form(f, p);
            g.z0 = cf.eval(0.0).xi.z();
            break;
        }
    }
    if (from_closed_form) {
        // Matching interval: the one containing z0, preferring an interior fit.
        // Turning-point heights from the closed form may differ from the
        // computed root by a few ulps; snap those onto the endpoint.
        const AdmissibleInterval* best = nullptr;
        for (const auto& I : intervals) {
            if (I.contains(g.z0)) {
                best = &I;
                break;
            }
        }
        if (!best) {
            for (const auto& I : intervals) {
                const double tol = 1e-12;
                if (std::abs(g.z0 - I.z_lo) <= tol) g.z0 = I.z_lo;
                else if (std::abs(g.z0 - I.z_hi) <= tol) g.z0 = I.z_hi;
                else continue;
                best = &I;
                if (g.z0 == I.z_lo ? g.dz_sign0 > 0 : g.dz_sign0 < 0) break;
            }
        }
        require(best != nullptr, family_info(f).name + ": no admissible interval contains z0");
        g.interval = *best;
        const double l0 = closed_form(f, p).eval(0.0).lambda;
        g.lambda0 = l0;
        if (g.z0 == g.interval.z_lo && g.dz_sign0 < 0) g.dz_sign0 = 1;
        if (g.z0 == g.interval.z_hi && g.dz_sign0 > 0) g.dz_sign0 = -1;
    }
    return g;
}

CurveTrace reconstruct_family(Family f, const Params& params, ReconstructionConfig cfg) {
    const FamilyGauge g = reconstruction_gauge(f, params);
    cfg.z0 = g.z0;
    cfg.dz_sign0 = g.dz_sign0;
    cfg.lambda0 = g.lambda0;
    return reconstruct(momentum_for(f, params), g.interval, cfg);
}

double loxodrome_angle(double phi, double dphi, double dlambda) {
    return std::atan2(std::abs(dphi), std::abs(std::cos(phi) * dlambda));
}

// ------------------------------------------------------------------ elastica

ElasticaParams ElasticaParams::from(double a, double b, double c) {
    require(a != 0.0 && std::isfinite(a), "ElasticaParams: requires a != 0");
    const double q = b * b - 4.0 * a * c;
    return {a, b, c, -4.0 * a * c, -b, 4.0 * a * a - b * b - q * q / 4.0};
}

double el_residual(const std::vector<double>& kappa, const ElasticaParams& p, double ds) {
    require(kappa.size() >= 5, "el_residual: need at least 5 samples");
    const std::vector<double> k2 = fd::second_central(kappa, ds);
    const double q = p.b * p.b - 4.0 * p.a * p.c;
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < kappa.size(); ++i) {
        const double k = kappa[i];
        const double r = std::abs(2.0 * k2[i] + k * k * k + (2.0 - q) * k - 2.0 * p.b);
        if (!(r <= worst)) worst = r;  // NaN sticks
    }
    return worst;
}

double energy_residual(const std::vector<double>& kappa, const std::vector<double>& kappa_dot,
                       const ElasticaParams& p) {
    require(kappa.size() == kappa_dot.size(), "energy_residual: arrays differ in size");
    const double q = p.b * p.b - 4.0 * p.a * p.c;
    double worst = 0.0;
    for (std::size_t i = 0; i < kappa.size(); ++i) {
        const double k = kappa[i], kd = kappa_dot[i];
        if (!std::isfinite(k) || !std::isfinite(kd)) continue;
        const double e = kd * kd + k * k * k * k / 4.0 + (1.0 - q / 2.0) * k * k - 2.0 * p.b * k;
        worst = std::max(worst, std::abs(e - p.energy_E));
    }
    return worst;
}

}  // namespace sphcurve
