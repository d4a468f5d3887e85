#include "sphcurve/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "interval_map.hpp"
#include "sphcurve/quadrature.hpp"

namespace sphcurve {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kGrid = 4096;

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

std::string to_string(LawKind kind) {
    switch (kind) {
        case LawKind::Constant: return "Constant";
        case LawKind::LinearElastica: return "LinearElastica";
        case LawKind::LoxoSub: return "LoxoSub";
        case LawKind::LoxoOne: return "LoxoOne";
        case LawKind::LoxoSuper: return "LoxoSuper";
        case LawKind::Catenary: return "Catenary";
        case LawKind::SnFamily: return "SnFamily";
        case LawKind::Viviani: return "Viviani";
        case LawKind::Clelia: return "Clelia";
        case LawKind::Custom: return "Custom";
    }
    return "?";
}

std::string to_string(EndpointKind kind) {
    switch (kind) {
        case EndpointKind::TurningPoint: return "TurningPoint";
        case EndpointKind::PolePassage: return "PolePassage";
        case EndpointKind::OpenBoundary: return "OpenBoundary";
        case EndpointKind::Asymptote: return "Asymptote";
    }
    return "?";
}

// ---------------------------------------------------------------- CurvatureLaw

CurvatureLaw CurvatureLaw::constant(double k0) {
    require(finite(k0), "Constant: k0 must be finite");
    CurvatureLaw l;
    l.kind_ = LawKind::Constant;
    l.name_ = "Constant";
    l.set_params({{"k0", k0}});
    l.domain_ = {{-1.0, 1.0, true, true}};
    return l;
}

CurvatureLaw CurvatureLaw::linear_elastica(double a, double b) {
    require(finite(a) && a != 0.0, "LinearElastica: requires a != 0");
    require(finite(b), "LinearElastica: b must be finite");
    CurvatureLaw l;
    l.kind_ = LawKind::LinearElastica;
    l.name_ = "LinearElastica";
    l.set_params({{"a", a}, {"b", b}});
    l.domain_ = {{-1.0, 1.0, true, true}};
    return l;
}

CurvatureLaw CurvatureLaw::loxo_sub(double a) {
    require(a > 0.0 && a < 1.0, "LoxoSub: requires 0 < a < 1");
    CurvatureLaw l;
    l.kind_ = LawKind::LoxoSub;
    l.name_ = "LoxoSub";
    l.set_params({{"a", a}});
    l.domain_ = {{-1.0, 1.0, false, false}};
    return l;
}

CurvatureLaw CurvatureLaw::loxo_one(double a) {
    require(a > 0.0 && a < 1.0, "LoxoOne: requires 0 < a < 1");
    CurvatureLaw l;
    l.kind_ = LawKind::LoxoOne;
    l.name_ = "LoxoOne";
    l.set_params({{"a", a}});
    const double r = std::sqrt(a);
    l.domain_ = {{-r, r, false, false}};
    return l;
}

CurvatureLaw CurvatureLaw::loxo_super(double a) {
    require(a > 1.0 && finite(a), "LoxoSuper: requires a > 1");
    CurvatureLaw l;
    l.kind_ = LawKind::LoxoSuper;
    l.name_ = "LoxoSuper";
    l.set_params({{"a", a}});
    const double r = 1.0 / std::sqrt(a);
    l.domain_ = {{-r, r, false, false}};
    return l;
}

CurvatureLaw CurvatureLaw::catenary(double a) {
    require(a > 0.0 && a < 0.5, "Catenary: requires 0 < a < 1/2");
    CurvatureLaw l;
    l.kind_ = LawKind::Catenary;
    l.name_ = "Catenary";
    l.set_params({{"a", a}});
    l.domain_ = {{-1.0, 0.0, true, false}, {0.0, 1.0, false, true}};
    return l;
}

CurvatureLaw CurvatureLaw::sn_family(double p) {
    require(p > 0.0 && p < 1.0, "SnFamily: requires 0 < p < 1");
    CurvatureLaw l;
    l.kind_ = LawKind::SnFamily;
    l.name_ = "SnFamily";
    l.set_params({{"p", p}});
    l.domain_ = {{-1.0, 1.0, false, false}};
    return l;
}

CurvatureLaw CurvatureLaw::viviani() {
    CurvatureLaw l;
    l.kind_ = LawKind::Viviani;
    l.name_ = "Viviani";
    l.domain_ = {{-1.0, 1.0, true, true}};
    return l;
}

CurvatureLaw CurvatureLaw::clelia(double n) {
    require(n > 0.0 && finite(n), "Clelia: requires n > 0");
    CurvatureLaw l;
    l.kind_ = LawKind::Clelia;
    l.name_ = "Clelia";
    l.set_params({{"n", n}});
    l.domain_ = {{-1.0, 1.0, true, true}};
    return l;
}

CurvatureLaw CurvatureLaw::custom(std::function<double(double)> kappa,
                                  std::vector<DomainPiece> domain, std::string name) {
    require(static_cast<bool>(kappa), "Custom: kappa must be callable");
    require(!domain.empty(), "Custom: domain must have at least one piece");
    for (const auto& d : domain)
        require(d.lo < d.hi && d.lo >= -1.0 && d.hi <= 1.0,
                "Custom: domain pieces must be nonempty subintervals of [-1, 1]");
    CurvatureLaw l;
    l.kind_ = LawKind::Custom;
    l.name_ = std::move(name);
    l.domain_ = std::move(domain);
    l.custom_ = std::move(kappa);
    return l;
}

void CurvatureLaw::set_params(std::map<std::string, double> params) {
    params_ = std::move(params);
    // Cached in declaration order of the factory: the single parameter, or a then b.
    auto it = params_.begin();
    if (kind_ == LawKind::LinearElastica) {
        p1_ = params_.at("a");
        p2_ = params_.at("b");
    } else if (it != params_.end()) {
        p1_ = it->second;
    }
}

double CurvatureLaw::param(const std::string& key) const {
    auto it = params_.find(key);
    if (it == params_.end()) throw std::invalid_argument(name_ + ": no parameter '" + key + "'");
    return it->second;
}

bool CurvatureLaw::in_domain(double z) const {
    for (const auto& d : domain_) {
        const bool above = d.lo_closed ? z >= d.lo : z > d.lo;
        const bool below = d.hi_closed ? z <= d.hi : z < d.hi;
        if (above && below) return true;
    }
    return false;
}

double CurvatureLaw::operator()(double z) const {
    if (!in_domain(z)) return kNaN;
    const double cz2 = (1.0 - z) * (1.0 + z);
    switch (kind_) {
        case LawKind::Constant: return p1_;
        case LawKind::LinearElastica: return 2.0 * p1_ * z + p2_;
        case LawKind::LoxoSub: return p1_ * z / std::sqrt(cz2);
        case LawKind::LoxoOne: {
            const double a = p1_;
            return z / std::sqrt(a - z * z);
        }
        case LawKind::LoxoSuper: {
            const double a = p1_;
            return a * z / std::sqrt(1.0 - a * z * z);
        }
        case LawKind::Catenary: return p1_ / (z * z);
        case LawKind::SnFamily: {
            const double p = p1_;
            return p * (1.0 - 2.0 * z * z) / std::sqrt(cz2);
        }
        case LawKind::Viviani: return z * (3.0 - z * z) / std::pow(2.0 - z * z, 1.5);
        case LawKind::Clelia: {
            const double n2 = p1_ * p1_;
            return z * (2.0 * n2 + 1.0 - z * z) / std::pow(n2 + 1.0 - z * z, 1.5);
        }
        case LawKind::Custom: return custom_(z);
    }
    return kNaN;
}

// ---------------------------------------------------------------- MomentumLaw

MomentumLaw::MomentumLaw(CurvatureLaw base, double c) : base_(std::move(base)), c_(c) {
    if (base_.kind() == LawKind::Custom) {
        anchor_ = base_.domain().front().lo + 0.5 * (base_.domain().front().hi -
                                                     base_.domain().front().lo);
        for (const auto& d : base_.domain())
            if (d.lo < 0.0 && d.hi > 0.0) anchor_ = 0.0;
    }
}

MomentumLaw antiderivative(const CurvatureLaw& law, double c) {
    if (!std::isfinite(c)) throw std::invalid_argument("integration constant c must be finite");
    switch (law.kind()) {
        case LawKind::Constant:
        case LawKind::LinearElastica:
        case LawKind::Custom:
            break;
        default:
            if (c != 0.0)
                throw std::invalid_argument(law.name() +
                                            ": the integration constant is fixed by the family; "
                                            "c must be 0");
    }
    return MomentumLaw(law, c);
}

double MomentumLaw::operator()(double z) const {
    return eval(z, std::sqrt(std::max(0.0, (1.0 - z) * (1.0 + z))));
}

double MomentumLaw::eval(double z, double cz) const {
    switch (base_.kind()) {
        case LawKind::Constant:
        case LawKind::LinearElastica: {
            const double a = base_.kind() == LawKind::Constant ? 0.0 : base_.p1_;
            const double b = base_.kind() == LawKind::Constant ? base_.p1_ : base_.p2_;
            if (std::abs(z) <= 0.5) return (a * z + b) * z + c_;
            // Expand about the nearer pole e, with e - z = cz^2 / (1 + |z|).
            const double e = z > 0 ? 1.0 : -1.0;
            const double d = cz * cz / (1.0 + std::abs(z));
            const double Ke = a + b * e + c_;
            return Ke - (2.0 * a * e + b) * e * d + a * d * d;
        }
        case LawKind::LoxoSub: return -base_.p1_ * cz;
        case LawKind::LoxoOne: {
            const double r = std::sqrt(base_.p1_);
            return -std::sqrt((r - std::abs(z)) * (r + std::abs(z)));
        }
        case LawKind::LoxoSuper: {
            const double r = std::sqrt(base_.p1_) * std::abs(z);
            return -std::sqrt((1.0 - r) * (1.0 + r));
        }
        case LawKind::Catenary: return -base_.p1_ / z;
        case LawKind::SnFamily: return base_.p1_ * z * cz;
        case LawKind::Viviani: return -cz * cz / std::sqrt(1.0 + cz * cz);
        case LawKind::Clelia: {
            const double n = base_.p1_;
            return -cz * cz / std::sqrt(n * n + cz * cz);
        }
        case LawKind::Custom: {
            if (!base_.in_domain(z)) return kNaN;
            double anchor = anchor_;
            for (const auto& d : base_.domain()) {
                if (z >= d.lo && z <= d.hi)
                    anchor = (d.lo < 0.0 && d.hi > 0.0) ? 0.0 : 0.5 * (d.lo + d.hi);
            }
            const auto& law = base_;
            return c_ + quad::integrate([&](double t) { return law(t); }, anchor, z, 1e-14);
        }
    }
    return kNaN;
}

double MomentumLaw::discriminant(double z) const {
    return discriminant(z, std::sqrt(std::max(0.0, (1.0 - z) * (1.0 + z))));
}

double MomentumLaw::discriminant(double z, double cz) const {
    if (!(z >= -1.0 && z <= 1.0)) return kNaN;
    // The closed forms below are also valid at open domain ends, where they
    // give the limit value.
    bool in_closure = false;
    for (const auto& d : base_.domain())
        if (z >= d.lo && z <= d.hi) in_closure = true;
    if (!in_closure) return kNaN;
    const double cz2 = cz * cz;
    switch (base_.kind()) {
        case LawKind::Constant:
        case LawKind::LinearElastica: {
            if (std::abs(z) <= 0.5) {
                const double a = base_.kind() == LawKind::Constant ? 0.0 : base_.p1_;
                const double b = base_.kind() == LawKind::Constant ? base_.p1_ : base_.p2_;
                const double p0 = (1.0 - c_) * (1.0 + c_);
                const double p1 = -2.0 * b * c_;
                const double p2 = -1.0 - b * b - 2.0 * a * c_;
                const double p3 = -2.0 * a * b;
                const double p4 = -a * a;
                return p0 + z * (p1 + z * (p2 + z * (p3 + z * p4)));
            }
            const double K = eval(z, cz);
            return cz2 - K * K;
        }
        case LawKind::LoxoSub: {
            const double a = base_.p1_;
            return (1.0 - a) * (1.0 + a) * cz2;
        }
        case LawKind::LoxoOne: return 1.0 - base_.p1_;
        case LawKind::LoxoSuper: return (base_.p1_ - 1.0) * z * z;
        case LawKind::Catenary: {
            if (z == 0.0) return -std::numeric_limits<double>::infinity();
            const double a = base_.p1_;
            return cz2 - a * a / (z * z);
        }
        case LawKind::SnFamily: {
            const double pz = base_.p1_ * z;
            return cz2 * (1.0 - pz) * (1.0 + pz);
        }
        case LawKind::Viviani: return cz2 / (1.0 + cz2);
        case LawKind::Clelia: {
            const double n2 = base_.p1_ * base_.p1_;
            return n2 * cz2 / (n2 + cz2);
        }
        case LawKind::Custom: {
            const double K = eval(z, cz);
            return cz2 - K * K;
        }
    }
    return kNaN;
}

double MomentumLaw::discriminant_slope(double z) const {
    return -2.0 * z - 2.0 * (*this)(z) * kappa(z);
}

// ---------------------------------------------------------------- intervals

namespace {

struct Piece {
    double lo, hi;
    bool lo_closed, hi_closed;
};

// Bisection to machine precision; P(neg) <= 0 < P(pos).
double bisect_root(const MomentumLaw& K, double neg, double pos) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (neg + pos);
        if (mid == neg || mid == pos) break;
        const double v = K.discriminant(mid);
        if (v > 0.0) pos = mid; else neg = mid;
    }
    const double pn = K.discriminant(neg);
    const double pp = K.discriminant(pos);
    return (std::isfinite(pn) && std::abs(pn) < std::abs(pp)) ? neg : pos;
}

// Minimiser of P on [a, b] from a sign change of P', or NaN.
double locate_minimum(const MomentumLaw& K, double a, double b) {
    double sa = K.discriminant_slope(a);
    double sb = K.discriminant_slope(b);
    if (!(sa <= 0.0 && sb >= 0.0)) return kNaN;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid == a || mid == b) break;
        const double sm = K.discriminant_slope(mid);
        if (sm < 0.0) a = mid; else if (sm > 0.0) b = mid; else return mid;
    }
    return 0.5 * (a + b);
}

struct Endpoint {
    double z;
    EndpointKind kind;
    bool singular;
};

Endpoint classify_root(const MomentumLaw& K, double neg, double pos, const Piece& pc) {
    // Pole passage: the piece ends at a pole, P vanishes there and so does K.
    for (double e : {-1.0, 1.0}) {
        const bool is_end = (e == pc.lo && neg == pc.lo) || (e == pc.hi && neg == pc.hi);
        if (!is_end) continue;
        const double Ke = K(e);
        if (std::abs(Ke) <= 1e-13) {
            const double ke = K.kappa(e);
            return {e, EndpointKind::PolePassage, !std::isfinite(ke)};
        }
    }
    return {bisect_root(K, neg, pos), EndpointKind::TurningPoint, false};
}

void scan_piece(const MomentumLaw& K, const Piece& pc, std::vector<AdmissibleInterval>& out) {
    std::vector<double> z(kGrid), P(kGrid);
    for (int i = 0; i < kGrid; ++i) {
        z[i] = pc.lo + (pc.hi - pc.lo) * static_cast<double>(i) / (kGrid - 1);
        if (i == kGrid - 1) z[i] = pc.hi;
        P[i] = K.discriminant(z[i]);
    }
    for (int i : {0, kGrid - 1}) {
        if (!std::isfinite(P[i])) {
            const double inward = (i == 0 ? 1.0 : -1.0) * 1e-12 * (pc.hi - pc.lo);
            P[i] = K.discriminant(z[i] + inward);
        }
    }
    auto positive = [&](int i) { return std::isfinite(P[i]) && P[i] > 0.0; };

    // Tangential zeros (double roots) and close pairs of simple roots inside
    // a positive run show up as local minima of P.
    struct Split {
        int index;
        double z_left, z_right;
        EndpointKind kind;
    };
    std::vector<Split> splits;
    for (int i = 1; i + 1 < kGrid; ++i) {
        if (!(positive(i - 1) && positive(i) && positive(i + 1))) continue;
        if (!(P[i] <= P[i - 1] && P[i] <= P[i + 1])) continue;
        const double zm = locate_minimum(K, z[i - 1], z[i + 1]);
        if (!std::isfinite(zm)) continue;
        const double pm = K.discriminant(zm);
        if (std::abs(pm) <= 1e-14) {
            splits.push_back({i, zm, zm, EndpointKind::Asymptote});
        } else if (pm < 0.0) {
            splits.push_back({i, bisect_root(K, zm, z[i - 1]), bisect_root(K, zm, z[i + 1]),
                              EndpointKind::TurningPoint});
        }
    }

    int i = 0;
    while (i < kGrid) {
        if (!positive(i)) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < kGrid && positive(j + 1)) ++j;

        Endpoint lo;
        if (i == 0) {
            lo = {pc.lo, EndpointKind::OpenBoundary, false};
        } else {
            lo = classify_root(K, z[i - 1], z[i], pc);
        }
        Endpoint hi;
        if (j == kGrid - 1) {
            hi = {pc.hi, EndpointKind::OpenBoundary, false};
        } else {
            hi = classify_root(K, z[j + 1], z[j], pc);
        }

        Endpoint cur = lo;
        for (const auto& sp : splits) {
            if (sp.index < i || sp.index > j) continue;
            if (!(sp.z_left > cur.z)) continue;
            AdmissibleInterval iv;
            iv.z_lo = cur.z;
            iv.lo_kind = cur.kind;
            iv.lo_singular = cur.singular;
            iv.z_hi = sp.z_left;
            iv.hi_kind = sp.kind;
            out.push_back(iv);
            cur = {sp.z_right, sp.kind, false};
        }
        AdmissibleInterval iv;
        iv.z_lo = cur.z;
        iv.lo_kind = cur.kind;
        iv.lo_singular = cur.singular;
        iv.z_hi = hi.z;
        iv.hi_kind = hi.kind;
        iv.hi_singular = hi.singular;
        out.push_back(iv);
        i = j + 1;
    }
}

bool closed_end(EndpointKind k) {
    return k == EndpointKind::TurningPoint || k == EndpointKind::PolePassage;
}

}  // namespace

std::vector<AdmissibleInterval> admissible_intervals(const MomentumLaw& K) {
    std::vector<AdmissibleInterval> out;
    for (const auto& d : K.base().domain()) {
        const double lo = std::max(-1.0, d.lo);
        const double hi = std::min(1.0, d.hi);
        if (!(lo < hi)) continue;
        scan_piece(K, {lo, hi, d.lo_closed, d.hi_closed}, out);
    }
    for (auto& iv : out) {
        if (iv.z_hi <= iv.z_lo) continue;
        if (closed_end(iv.lo_kind) && closed_end(iv.hi_kind))
            iv.period_s = 2.0 * detail::full_leg_length(K, iv);
    }
    return out;
}

std::vector<double> momentum_from_trace(const CurveTrace& trace) {
    if (trace.size() < 3) throw std::invalid_argument("momentum_from_trace needs at least 3 samples");
    const double h = uniform_spacing(trace.s);
    std::vector<double> x(trace.size()), y(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        x[i] = trace.xi[i].x();
        y[i] = trace.xi[i].y();
    }
    const auto xd = fd::first(x, h);
    const auto yd = fd::first(y, h);
    std::vector<double> K(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) K[i] = xd[i] * y[i] - x[i] * yd[i];
    return K;
}

}  // namespace sphcurve
