#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sphcurve/momentum.hpp"
#include "sphcurve/reconstruct.hpp"
#include "sphcurve/trace.hpp"

namespace sphcurve {

enum class Family {
    Constant,
    SmallCircle,
    GreatCircle,
    Seiffert,
    Borderline,
    Elastica,
    Loxodrome,
    LoxoOne,
    LoxoSuper,
    Catenary,
    SnFamily,
    Viviani,
    Clelia
};

using Params = std::map<std::string, double>;

struct FamilyInfo {
    Family family;
    std::string name;                 // CLI vocabulary
    std::vector<std::string> params;  // accepted keys; "x|y" marks alternatives
    std::string summary;
    bool has_closed_form;
};

const std::vector<FamilyInfo>& family_catalog();
const FamilyInfo& family_info(Family f);
// Throws std::invalid_argument for unknown names.
Family family_from_name(const std::string& name);

// Validates the parameters and rewrites alternatives (alpha, delta) into the
// canonical ones. Throws std::invalid_argument naming the violated constraint.
Params canonical_params(Family f, const Params& given);

CurvatureLaw law_for(Family f, const Params& params);
MomentumLaw momentum_for(Family f, const Params& params);

struct CurvePoint {
    double phi;     // unfolded through pole passages
    double lambda;  // continuous
    Eigen::Vector3d xi;
};

class ClosedFormCurve {
public:
    ClosedFormCurve(Family f, Params params, std::function<CurvePoint(double)> eval,
                    std::pair<double, double> valid_s, double s_shift);

    Family family() const { return family_; }
    const Params& params() const { return params_; }

    CurvePoint eval(double s) const { return eval_(s); }
    // Open s-interval on which the formulas hold.
    std::pair<double, double> valid_s() const { return valid_; }
    bool valid(double s) const { return s > valid_.first && s < valid_.second; }
    // Local s = 0 corresponds to s = s_shift of the standard parametrisation
    // (nonzero only for curves whose standard form does not contain s = 0).
    double s_shift() const { return s_shift_; }

    // Uniform samples on [-s_span/2, s_span/2]; samples outside valid_s are
    // dropped and the trace is flagged as truncated.
    CurveTrace sample(double s_span, int n_samples) const;

    // Unit tangent by 5-point differences of eval.
    Eigen::Vector3d tangent(double s, double h = 1e-3) const;

private:
    Family family_;
    Params params_;
    std::function<CurvePoint(double)> eval_;
    std::pair<double, double> valid_;
    double s_shift_;
};

// Throws std::invalid_argument for invalid parameters or for families
// without a closed form (elastica).
ClosedFormCurve closed_form(Family f, const Params& params);

// Reconstruction gauge (z0, dz_sign0, lambda0) matching the closed form at
// local s = 0, and the admissible interval that contains the curve.
struct FamilyGauge {
    double z0;
    int dz_sign0;
    double lambda0;
    AdmissibleInterval interval;
};
FamilyGauge reconstruction_gauge(Family f, const Params& params);

// Convenience: reconstruct a family law in the gauge of its closed form.
CurveTrace reconstruct_family(Family f, const Params& params, ReconstructionConfig cfg);

// Angle between the tangent and the parallel through the point, from
// geographic rates: atan2(|phi'|, |cos(phi) lambda'|).
double loxodrome_angle(double phi, double dphi, double dlambda);

struct ElasticaParams {
    double a, b, c;
    double sigma;        // -4ac
    double lambda_rest;  // -b
    double energy_E;     // 4a^2 - b^2 - (b^2 - 4ac)^2 / 4

    static ElasticaParams from(double a, double b, double c);
};

// sup |2 k'' + k^3 + (2 - (b^2 - 4ac)) k - 2b| over interior samples, k'' by
// 5-point central differences. Throws std::invalid_argument below 5 samples.
double el_residual(const std::vector<double>& kappa, const ElasticaParams& p, double ds);

// sup |k'^2 + k^4/4 + (1 - (b^2 - 4ac)/2) k^2 - 2 b k - E|. Non-finite
// samples (differencing margins) are skipped.
double energy_residual(const std::vector<double>& kappa, const std::vector<double>& kappa_dot,
                       const ElasticaParams& p);

}  // namespace sphcurve
