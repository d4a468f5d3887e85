#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sphcurve/trace.hpp"

namespace sphcurve {

enum class LawKind {
    Constant,
    LinearElastica,
    LoxoSub,
    LoxoOne,
    LoxoSuper,
    Catenary,
    SnFamily,
    Viviani,
    Clelia,
    Custom
};

std::string to_string(LawKind kind);

// One piece of the z-domain on which kappa is finite.
struct DomainPiece {
    double lo = -1.0;
    double hi = 1.0;
    bool lo_closed = true;
    bool hi_closed = true;
};

// Geodesic curvature as a function of the height z.
class CurvatureLaw {
public:
    static CurvatureLaw constant(double k0);
    // kappa = 2 a z + b
    static CurvatureLaw linear_elastica(double a, double b);
    // kappa = a z / sqrt(1 - z^2), 0 < a < 1
    static CurvatureLaw loxo_sub(double a);
    // kappa = z / sqrt(a - z^2), 0 < a < 1
    static CurvatureLaw loxo_one(double a);
    // kappa = a z / sqrt(1 - a z^2), a > 1
    static CurvatureLaw loxo_super(double a);
    // kappa = a / z^2, 0 < a < 1/2
    static CurvatureLaw catenary(double a);
    // kappa = p (1 - 2 z^2) / sqrt(1 - z^2), 0 < p < 1
    static CurvatureLaw sn_family(double p);
    static CurvatureLaw viviani();
    // kappa = z (2 n^2 + 1 - z^2) / (n^2 + 1 - z^2)^(3/2), n > 0
    static CurvatureLaw clelia(double n);
    static CurvatureLaw custom(std::function<double(double)> kappa, std::vector<DomainPiece> domain,
                               std::string name = "custom");

    LawKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const std::map<std::string, double>& params() const { return params_; }
    double param(const std::string& key) const;
    const std::vector<DomainPiece>& domain() const { return domain_; }
    bool in_domain(double z) const;

    // kappa(z); NaN outside the domain.
    double operator()(double z) const;

private:
    friend class MomentumLaw;
    CurvatureLaw() = default;
    void set_params(std::map<std::string, double> params);
    LawKind kind_ = LawKind::Constant;
    std::string name_;
    std::map<std::string, double> params_;
    std::vector<DomainPiece> domain_;
    std::function<double(double)> custom_;
    double p1_ = 0.0, p2_ = 0.0;
};

// K(z) = antiderivative of kappa plus the integration constant c.
class MomentumLaw {
public:
    MomentumLaw(CurvatureLaw base, double c);

    const CurvatureLaw& base() const { return base_; }
    double c() const { return c_; }

    double operator()(double z) const;
    // Same value, using cz = sqrt(1 - z^2) when it is known more accurately
    // than 1 - z*z (near the poles).
    double eval(double z, double cz) const;
    double kappa(double z) const { return base_(z); }

    // P(z) = 1 - z^2 - K(z)^2.
    double discriminant(double z) const;
    double discriminant(double z, double cz) const;
    // P'(z) = -2 z - 2 K(z) kappa(z).
    double discriminant_slope(double z) const;

    // Anchor of the numeric antiderivative of a custom law.
    double anchor() const { return anchor_; }

private:
    CurvatureLaw base_;
    double c_;
    double anchor_ = 0.0;
};

// Builds the momentum law. Loxodromic, catenary, sn-family, Viviani and clelia
// momenta carry their constant inside K; they reject c != 0 with
// std::invalid_argument.
MomentumLaw antiderivative(const CurvatureLaw& law, double c);

enum class EndpointKind { TurningPoint, PolePassage, OpenBoundary, Asymptote };

std::string to_string(EndpointKind kind);

struct AdmissibleInterval {
    double z_lo = -1.0;
    double z_hi = 1.0;
    EndpointKind lo_kind = EndpointKind::TurningPoint;
    EndpointKind hi_kind = EndpointKind::TurningPoint;
    // For pole passages: kappa is unbounded at the pole and the longitude
    // diverges logarithmically there.
    bool lo_singular = false;
    bool hi_singular = false;
    // Arc length of a full z-oscillation; set when both ends are turning
    // points or pole passages.
    std::optional<double> period_s;

    bool contains(double z) const { return z > z_lo && z < z_hi; }
};

// Maximal z-intervals on which P > 0, with classified endpoints. Double roots
// of P are reported as Asymptote endpoints: the curve approaches that height
// as s goes to infinity.
std::vector<AdmissibleInterval> admissible_intervals(const MomentumLaw& K);

// K(s_i) = x' y - x y' along the trace, derivatives by 5-point differences.
std::vector<double> momentum_from_trace(const CurveTrace& trace);

}  // namespace sphcurve
