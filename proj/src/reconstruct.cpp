#include "sphcurve/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "interval_map.hpp"
#include "sphcurve/quadrature.hpp"

namespace sphcurve {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kSineCells = 64;
constexpr double kHalfLineStep = 0.25;
constexpr std::size_t kMaxLegs = 1000000;

bool closed_end(EndpointKind k) {
    return k == EndpointKind::TurningPoint || k == EndpointKind::PolePassage;
}

void validate(const AdmissibleInterval& I, const ReconstructionConfig& cfg) {
    if (!(I.z_lo < I.z_hi)) throw std::logic_error("admissible interval is empty");
    if (!(cfg.s_span > 0.0) || !std::isfinite(cfg.s_span))
        throw std::invalid_argument("s_span must be positive and finite");
    if (cfg.n_samples < 16) throw std::invalid_argument("n_samples must be at least 16");
    if (!(cfg.quad_tol > 0.0)) throw std::invalid_argument("quad_tol must be positive");
    if (cfg.dz_sign0 != 1 && cfg.dz_sign0 != -1)
        throw std::invalid_argument("dz_sign0 must be +1 or -1");
    if (!std::isfinite(cfg.lambda0)) throw std::invalid_argument("lambda0 must be finite");
    if (cfg.z0) {
        const double z0 = *cfg.z0;
        auto start_ok = [](EndpointKind k, bool singular) {
            return k == EndpointKind::TurningPoint || (k == EndpointKind::PolePassage && !singular);
        };
        const bool inside = z0 > I.z_lo && z0 < I.z_hi;
        const bool at_lo = z0 == I.z_lo && start_ok(I.lo_kind, I.lo_singular);
        const bool at_hi = z0 == I.z_hi && start_ok(I.hi_kind, I.hi_singular);
        if (!(inside || at_lo || at_hi))
            throw std::invalid_argument("z0 must lie inside the admissible interval");
    }
}

struct Leg {
    double s_a = 0.0, s_b = 0.0;
    int d = 1;      // dz/ds sign
    int c = 1;      // sign of cos(phi)
    int sigma = 1;  // longitude branch
    int lap = 0;    // phi offset in units of 2 pi
    double s_base = 0.0;
    double lam_base = 0.0;
};

struct Sample {
    bool ok = false;
    double z = 0.0, cz = 0.0, phi = 0.0, lambda = 0.0;
    int dz = 1;
    int c = 1;
};

class Engine {
public:
    Engine(const MomentumLaw& K, const AdmissibleInterval& I, const ReconstructionConfig& cfg)
        : M_(K, I), I_(I), cfg_(cfg) {
        validate(I, cfg);
        const double z0 = cfg.z0 ? *cfg.z0 : I.z_lo + 0.5 * (I.z_hi - I.z_lo);
        v0_ = M_.v_of_z(z0);
        cell_tol_ = cfg.quad_tol * 1e-2;
        build_tables();
        build_legs();
    }

    Sample at(double s) const;

    bool truncated() const { return truncated_; }
    const std::string& reason() const { return reason_; }

private:
    enum class EndType { Turning, Removable, Singular, Open, Cap };

    struct EndInfo {
        EndType type;
        double S, L;
        double z;
    };

    void build_tables();
    bool add_node_outward(bool upward, double v);
    void build_legs();
    EndInfo end_info(bool upper) const;
    Leg forward(const Leg& a, const EndInfo& e) const;
    Leg backward(const Leg& b, const EndInfo& e) const;
    void set_range(Leg& l) const;
    void truncate(const std::string& why) {
        if (!truncated_) reason_ = why;
        truncated_ = true;
    }

    double S_of(double v) const;
    double L_of(double v) const;
    double v_of_S(double target) const;
    std::size_t cell_of(double v) const;
    double integrate_h(double a, double b) const {
        return quad::integrate([this](double v) { return M_.h(v); }, a, b, cell_tol_);
    }
    double integrate_g(double a, double b) const {
        return quad::integrate([this](double v) { return M_.g(v); }, a, b, cell_tol_);
    }

    detail::IntervalMap M_;
    AdmissibleInterval I_;
    ReconstructionConfig cfg_;
    double v0_ = 0.0;
    double cell_tol_ = 1e-12;
    std::vector<double> nodes_, S_, L_;
    bool lo_capped_ = false, hi_capped_ = false;
    std::vector<Leg> legs_;
    bool truncated_ = false;
    std::string reason_;
};

void Engine::build_tables() {
    const bool lo_inf = I_.lo_kind == EndpointKind::Asymptote;
    const bool hi_inf = I_.hi_kind == EndpointKind::Asymptote;
    if (!lo_inf && !hi_inf) {
        for (int i = 0; i <= kSineCells; ++i)
            nodes_.push_back(M_.v_min() + (M_.v_max() - M_.v_min()) * i / kSineCells);
        nodes_.front() = M_.v_min();
        nodes_.back() = M_.v_max();
    } else if (lo_inf != hi_inf) {
        // Half line: uniform cells between the finite end (v = 0) and v0.
        const double span = std::abs(v0_);
        const int cells = std::max(8, static_cast<int>(std::ceil(span / kHalfLineStep)));
        for (int i = 0; i <= cells; ++i) nodes_.push_back((hi_inf ? 1.0 : -1.0) * span * i / cells);
        if (lo_inf) std::reverse(nodes_.begin(), nodes_.end());
        if (span == 0.0) nodes_ = {0.0};
    } else {
        nodes_.push_back(v0_);
    }
    if (std::find(nodes_.begin(), nodes_.end(), v0_) == nodes_.end()) {
        nodes_.push_back(v0_);
        std::sort(nodes_.begin(), nodes_.end());
    }

    const std::size_t i0 = static_cast<std::size_t>(
        std::find(nodes_.begin(), nodes_.end(), v0_) - nodes_.begin());
    S_.assign(nodes_.size(), 0.0);
    L_.assign(nodes_.size(), 0.0);
    auto singular_node = [&](double v) {
        return (v == M_.v_max() && I_.hi_kind == EndpointKind::PolePassage && I_.hi_singular) ||
               (v == M_.v_min() && I_.lo_kind == EndpointKind::PolePassage && I_.lo_singular);
    };
    for (std::size_t j = i0 + 1; j < nodes_.size(); ++j) {
        S_[j] = S_[j - 1] + integrate_h(nodes_[j - 1], nodes_[j]);
        if (singular_node(nodes_[j])) {
            const double probe = nodes_[j] - 1e-3 * (nodes_[j] - nodes_[j - 1]);
            L_[j] = M_.g(probe) > 0 ? kInf : -kInf;
        } else {
            L_[j] = L_[j - 1] + integrate_g(nodes_[j - 1], nodes_[j]);
        }
    }
    for (std::size_t j = i0; j-- > 0;) {
        S_[j] = S_[j + 1] - integrate_h(nodes_[j], nodes_[j + 1]);
        if (singular_node(nodes_[j])) {
            const double probe = nodes_[j] + 1e-3 * (nodes_[j + 1] - nodes_[j]);
            L_[j] = M_.g(probe) > 0 ? -kInf : kInf;
        } else {
            L_[j] = L_[j + 1] - integrate_g(nodes_[j], nodes_[j + 1]);
        }
    }

    // Extend toward asymptotic ends until the table covers every leg that
    // can be reached within the requested span.
    const double finite_part = std::max(std::abs(S_.front()), std::abs(S_.back()));
    const double cover = cfg_.s_span + 2.0 * finite_part + 1.0;
    if (hi_inf) {
        while (S_.back() < cover) {
            const double v = std::min(nodes_.back() + kHalfLineStep, M_.v_max());
            if (v <= nodes_.back()) {
                hi_capped_ = true;
                break;
            }
            if (!add_node_outward(true, v)) break;
        }
    }
    if (lo_inf) {
        while (-S_.front() < cover) {
            const double v = std::max(nodes_.front() - kHalfLineStep, M_.v_min());
            if (v >= nodes_.front()) {
                lo_capped_ = true;
                break;
            }
            if (!add_node_outward(false, v)) break;
        }
    }
}

bool Engine::add_node_outward(bool upward, double v) {
    if (upward) {
        const double a = nodes_.back();
        const double dS = integrate_h(a, v);
        const double dL = integrate_g(a, v);
        if (!std::isfinite(dS) || !std::isfinite(dL)) {
            hi_capped_ = true;
            return false;
        }
        nodes_.push_back(v);
        S_.push_back(S_.back() + dS);
        L_.push_back(L_.back() + dL);
    } else {
        const double b = nodes_.front();
        const double dS = integrate_h(v, b);
        const double dL = integrate_g(v, b);
        if (!std::isfinite(dS) || !std::isfinite(dL)) {
            lo_capped_ = true;
            return false;
        }
        nodes_.insert(nodes_.begin(), v);
        S_.insert(S_.begin(), S_.front() - dS);
        L_.insert(L_.begin(), L_.front() - dL);
    }
    return true;
}

std::size_t Engine::cell_of(double v) const {
    if (nodes_.size() < 2) return 0;
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), v);
    std::size_t j = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return std::min(j, nodes_.size() - 2);
}

double Engine::S_of(double v) const {
    if (nodes_.size() < 2) return 0.0;
    const std::size_t j = cell_of(v);
    if (v - nodes_[j] <= nodes_[j + 1] - v) return S_[j] + integrate_h(nodes_[j], v);
    return S_[j + 1] - integrate_h(v, nodes_[j + 1]);
}

double Engine::L_of(double v) const {
    if (nodes_.size() < 2) return 0.0;
    const std::size_t j = cell_of(v);
    const bool lower_first = v - nodes_[j] <= nodes_[j + 1] - v;
    const bool use_lower = std::isfinite(L_[j]) && (lower_first || !std::isfinite(L_[j + 1]));
    if (v == nodes_[j]) return L_[j];
    if (v == nodes_[j + 1]) return L_[j + 1];
    if (use_lower) return L_[j] + integrate_g(nodes_[j], v);
    return L_[j + 1] - integrate_g(v, nodes_[j + 1]);
}

double Engine::v_of_S(double target) const {
    if (nodes_.size() < 2) return nodes_.front();
    if (target <= S_.front()) return nodes_.front();
    if (target >= S_.back()) return nodes_.back();
    auto it = std::upper_bound(S_.begin(), S_.end(), target);
    std::size_t j = static_cast<std::size_t>(it - S_.begin()) - 1;
    j = std::min(j, nodes_.size() - 2);
    double a = nodes_[j], b = nodes_[j + 1];
    double Sa = S_[j], Sb = S_[j + 1];
    if (target == Sa) return a;
    if (target == Sb) return b;
    double v = a + (target - Sa) / (Sb - Sa) * (b - a);
    double Sv = S_of(v);
    const double tol = 1e-15 * (1.0 + std::abs(target));
    for (int it_n = 0; it_n < 60; ++it_n) {
        const double f = Sv - target;
        if (std::abs(f) <= tol) break;
        if (f > 0) b = v; else a = v;
        const double hv = M_.h(v);
        double next = (hv > 0.0 && std::isfinite(hv)) ? v - f / hv : kNaN;
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        if (next == v) break;
        Sv += integrate_h(v, next);
        v = next;
        if (b - a <= 4 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(v))) break;
    }
    return v;
}

Engine::EndInfo Engine::end_info(bool upper) const {
    EndInfo e{};
    e.S = upper ? S_.back() : S_.front();
    e.L = upper ? L_.back() : L_.front();
    e.z = upper ? I_.z_hi : I_.z_lo;
    const bool capped = upper ? (nodes_.back() < M_.v_max() || hi_capped_)
                              : (nodes_.front() > M_.v_min() || lo_capped_);
    const EndpointKind kind = upper ? I_.hi_kind : I_.lo_kind;
    const bool singular = upper ? I_.hi_singular : I_.lo_singular;
    if (kind == EndpointKind::Asymptote || capped) {
        e.type = EndType::Cap;
    } else if (kind == EndpointKind::OpenBoundary) {
        e.type = EndType::Open;
    } else if (kind == EndpointKind::TurningPoint) {
        e.type = EndType::Turning;
    } else {
        e.type = singular ? EndType::Singular : EndType::Removable;
    }
    return e;
}

void Engine::set_range(Leg& l) const {
    const double x = l.s_base + l.d * S_.front();
    const double y = l.s_base + l.d * S_.back();
    l.s_a = std::min(x, y);
    l.s_b = std::max(x, y);
}

Leg Engine::forward(const Leg& a, const EndInfo& e) const {
    Leg b = a;
    b.d = -a.d;
    b.s_base = a.s_base + 2.0 * a.d * e.S;
    if (e.type == EndType::Singular) {
        b.sigma = -a.sigma;
        b.lam_base = a.lam_base;
    } else {
        b.lam_base = a.lam_base + 2.0 * a.sigma * a.d * e.L;
    }
    if (e.type == EndType::Singular || e.type == EndType::Removable) {
        b.c = -a.c;
        if (e.z < 0) b.lap = a.lap + (b.c > 0 ? 1 : -1);
    }
    set_range(b);
    return b;
}

Leg Engine::backward(const Leg& b, const EndInfo& e) const {
    Leg a = b;
    a.d = -b.d;
    a.s_base = b.s_base + 2.0 * b.d * e.S;
    if (e.type == EndType::Singular) {
        a.sigma = -b.sigma;
        a.lam_base = b.lam_base;
    } else {
        a.lam_base = b.lam_base + 2.0 * b.sigma * b.d * e.L;
    }
    if (e.type == EndType::Singular || e.type == EndType::Removable) {
        a.c = -b.c;
        if (e.z < 0) a.lap = b.lap - (b.c > 0 ? 1 : -1);
    }
    set_range(a);
    return a;
}

void Engine::build_legs() {
    Leg l0;
    l0.d = cfg_.dz_sign0;
    l0.lam_base = cfg_.lambda0;
    set_range(l0);
    const double s_max = 0.5 * cfg_.s_span;
    const double s_min = -s_max;
    std::vector<Leg> fwd{l0}, bwd;

    auto stop_reason = [&](const EndInfo& e) -> std::string {
        switch (e.type) {
            case EndType::Open: return "open boundary at z=" + std::to_string(e.z);
            case EndType::Cap: return "asymptotic approach to z=" + std::to_string(e.z) +
                                      " beyond table resolution";
            case EndType::Singular: return "singular pole passage at z=" + std::to_string(e.z);
            default: return {};
        }
    };
    auto passable = [&](const EndInfo& e) {
        if (e.type == EndType::Open || e.type == EndType::Cap) return false;
        if (e.type == EndType::Singular && cfg_.pole_policy == PolePolicy::Truncate) return false;
        return true;
    };

    while (fwd.back().s_b < s_max && fwd.size() < kMaxLegs) {
        const Leg& a = fwd.back();
        const EndInfo e = end_info(a.d > 0);
        if (!passable(e)) {
            truncate(stop_reason(e));
            break;
        }
        fwd.push_back(forward(a, e));
    }
    Leg cur = l0;
    while (cur.s_a > s_min && bwd.size() < kMaxLegs) {
        const EndInfo e = end_info(cur.d < 0);
        if (!passable(e)) {
            truncate(stop_reason(e));
            break;
        }
        cur = backward(cur, e);
        bwd.push_back(cur);
    }
    std::reverse(bwd.begin(), bwd.end());
    legs_ = std::move(bwd);
    legs_.insert(legs_.end(), fwd.begin(), fwd.end());
}

Sample Engine::at(double s) const {
    Sample out;
    auto it = std::lower_bound(legs_.begin(), legs_.end(), s,
                               [](const Leg& l, double x) { return l.s_b < x; });
    if (it == legs_.end() || s < it->s_a) return out;
    const Leg& l = *it;
    const double v = v_of_S(l.d * (s - l.s_base));
    const detail::MapPoint p = M_.at(v);
    out.z = p.z;
    out.cz = p.cz;
    out.dz = l.d;
    out.c = l.c;
    out.lambda = l.lam_base + l.sigma * l.d * L_of(v);
    const double base = std::atan2(p.z, p.cz);
    out.phi = (l.c > 0 ? base : kPi - base) + 2.0 * kPi * l.lap;
    out.ok = std::isfinite(out.lambda) && std::isfinite(out.z);
    return out;
}


CurveTrace run(const MomentumLaw& K, const AdmissibleInterval& I, const ReconstructionConfig& cfg,
               std::vector<int>* dz) {
    Engine engine(K, I, cfg);
    const std::vector<double> grid = uniform_grid(cfg.s_span, cfg.n_samples);
    std::vector<Sample> samples(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        samples[i] = engine.at(grid[i]);
        if (samples[i].ok && std::abs(samples[i].lambda - cfg.lambda0) > cfg.lambda_cap)
            samples[i].ok = false;
    }

    // Keep the contiguous run of valid samples around s = 0.
    std::size_t c = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (std::abs(grid[i]) < std::abs(grid[c])) c = i;
    std::size_t lo = c, hi = c;
    if (samples[c].ok) {
        while (lo > 0 && samples[lo - 1].ok) --lo;
        while (hi + 1 < grid.size() && samples[hi + 1].ok) ++hi;
    }
    std::string reason;
    for (std::size_t probe : {lo > 0 ? lo - 1 : grid.size(), hi + 1}) {
        if (probe >= grid.size() || !reason.empty()) continue;
        const Sample& sm = samples[probe];
        if (std::isfinite(sm.z) && !std::isfinite(sm.lambda))
            reason = "longitude diverges near z=" + std::to_string(sm.z);
        else if (std::isfinite(sm.lambda) && std::abs(sm.lambda - cfg.lambda0) > cfg.lambda_cap)
            reason = "longitude exceeded lambda_cap";
    }
    if (reason.empty()) reason = engine.reason();
    const bool cut = lo > 0 || hi + 1 < grid.size();

    CurveTrace t;
    t.meta.source = "reconstruct";
    t.meta.law = K.base().name();
    t.meta.params = K.base().params();
    t.meta.c = K.c();
    t.meta.s_span = cfg.s_span;
    t.meta.n_samples = cfg.n_samples;
    t.meta.z0 = cfg.z0 ? *cfg.z0 : I.z_lo + 0.5 * (I.z_hi - I.z_lo);
    t.meta.lambda0 = cfg.lambda0;
    t.meta.dz_sign0 = cfg.dz_sign0;
    t.meta.quad_tol = cfg.quad_tol;
    t.meta.ds = cfg.s_span / (cfg.n_samples - 1);
    if (!samples[c].ok) {
        t.meta.truncated = true;
        t.meta.truncation_reason = "no valid sample at s=0";
        return t;
    }
    for (std::size_t i = lo; i <= hi; ++i) {
        const Sample& sm = samples[i];
        const double rc = sm.c * sm.cz;
        t.push_back(grid[i], sm.z, sm.phi, sm.lambda,
                    Eigen::Vector3d(rc * std::cos(sm.lambda), rc * std::sin(sm.lambda), sm.z));
        if (dz) dz->push_back(sm.dz);
    }
    if (cut) {
        t.meta.truncated = true;
        t.meta.truncation_reason = reason.empty() ? "trace ended early" : reason;
    }
    return t;
}


}  // namespace

double arc_length_of_z(const MomentumLaw& K, const AdmissibleInterval& I, double z_from,
                       double z_to, double tol) {
    if (!(I.z_lo < I.z_hi)) throw std::logic_error("admissible interval is empty");
    auto inside = [&](double z) {
        const bool lo_ok = z > I.z_lo || (z == I.z_lo && closed_end(I.lo_kind));
        const bool hi_ok = z < I.z_hi || (z == I.z_hi && closed_end(I.hi_kind));
        const bool open_ok = (z == I.z_lo && I.lo_kind == EndpointKind::OpenBoundary) ||
                             (z == I.z_hi && I.hi_kind == EndpointKind::OpenBoundary);
        return (lo_ok && hi_ok) || open_ok;
    };
    if (!inside(z_from) || !inside(z_to))
        throw std::invalid_argument("arc_length_of_z: heights must lie in the closed interval");
    const detail::IntervalMap M(K, I);
    return quad::integrate([&](double v) { return M.h(v); }, M.v_of_z(z_from), M.v_of_z(z_to),
                           tol);
}

HeightSamples z_of_s(const MomentumLaw& K, const AdmissibleInterval& I,
                     const ReconstructionConfig& cfg) {
    std::vector<int> dz;
    const CurveTrace t = run(K, I, cfg, &dz);
    HeightSamples out;
    out.s = t.s;
    out.z = t.z;
    out.dz_sign = std::move(dz);
    out.truncated = t.meta.truncated;
    out.truncation_reason = t.meta.truncation_reason;
    return out;
}

std::vector<double> longitude_of_s(const MomentumLaw& K, const std::vector<double>& s,
                                   const std::vector<double>& z, double lambda0) {
    if (s.size() != z.size()) throw std::invalid_argument("longitude_of_s: arrays differ in size");
    const std::size_t n = s.size();
    std::vector<double> lam(n, kNaN);
    if (n == 0) return lam;
    if (n == 1) {
        lam[0] = lambda0;
        return lam;
    }
    const double h = uniform_spacing(s);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double zi = z[i];
        const double cz2 = (1.0 - zi) * (1.0 + zi);
        if (cz2 <= 1e-12) {
            const double e = zi > 0 ? 1.0 : -1.0;
            const double ke = K.kappa(e);
            f[i] = (std::abs(K(e)) <= 1e-13 && std::isfinite(ke)) ? e * ke / 2.0 : kNaN;
        } else {
            f[i] = K(zi) / (zi * zi - 1.0);
        }
    }
    auto cell = [&](std::size_t i) {  // integral over [s_i, s_{i+1}]
        if (n < 4) return 0.5 * h * (f[i] + f[i + 1]);
        if (i == 0) return h / 24.0 * (9 * f[0] + 19 * f[1] - 5 * f[2] + f[3]);
        if (i + 2 == n)
            return h / 24.0 * (f[n - 4] - 5 * f[n - 3] + 19 * f[n - 2] + 9 * f[n - 1]);
        return h / 24.0 * (-f[i - 1] + 13 * f[i] + 13 * f[i + 1] - f[i + 2]);
    };
    // Start from the sample nearest s = 0; the offset to s = 0 uses the
    // cubic through the four nearest samples.
    std::size_t i0 = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(s[i]) < std::abs(s[i0])) i0 = i;
    double offset = 0.0;
    if (std::abs(s[i0]) > 1e-12 * h && n >= 4) {
        const std::size_t b = std::min(n - 4, i0 > 1 ? i0 - 1 : 0);
        auto interp = [&](double x) {
            double acc = 0.0;
            for (std::size_t k = 0; k < 4; ++k) {
                double w = 1.0;
                for (std::size_t m = 0; m < 4; ++m)
                    if (m != k) w *= (x - s[b + m]) / (s[b + k] - s[b + m]);
                acc += w * f[b + k];
            }
            return acc;
        };
        offset = quad::integrate(interp, 0.0, s[i0], 1e-15);
    }
    lam[i0] = lambda0 + offset;
    for (std::size_t i = i0; i + 1 < n; ++i) {
        lam[i + 1] = lam[i] + cell(i);
        if (!std::isfinite(lam[i + 1])) break;
    }
    for (std::size_t i = i0; i-- > 0;) {
        lam[i] = lam[i + 1] - cell(i);
        if (!std::isfinite(lam[i])) break;
    }
    for (std::size_t i = i0 + 1; i < n; ++i)
        if (!std::isfinite(lam[i - 1])) lam[i] = kNaN;
    for (std::size_t i = i0; i-- > 0;)
        if (!std::isfinite(lam[i + 1])) lam[i] = kNaN;
    return lam;
}

CurveTrace reconstruct(const MomentumLaw& K, const AdmissibleInterval& I,
                       const ReconstructionConfig& cfg) {
    return run(K, I, cfg, nullptr);
}

}  // namespace sphcurve
