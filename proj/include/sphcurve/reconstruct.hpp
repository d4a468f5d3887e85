#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sphcurve/momentum.hpp"
#include "sphcurve/trace.hpp"

namespace sphcurve {

// What to do when the curve reaches a pole at which kappa is unbounded.
// Continue reflects the longitude about the pole time, which is how the
// curve continues smoothly through it; Truncate ends the trace there.
enum class PolePolicy { Continue, Truncate };

struct ReconstructionConfig {
    double s_span = 6.283185307179586;  // centred on s = 0
    int n_samples = 1001;
    double quad_tol = 1e-10;
    // Initial height; defaults to the interval midpoint. A turning point or a
    // removable pole passage is also accepted.
    std::optional<double> z0;
    double lambda0 = 0.0;
    int dz_sign0 = 1;
    PolePolicy pole_policy = PolePolicy::Continue;
    // Samples with |lambda - lambda0| above this end the trace.
    double lambda_cap = 1e6;
};

// Signed arc length between two heights of the interval.
double arc_length_of_z(const MomentumLaw& K, const AdmissibleInterval& I, double z_from,
                       double z_to, double tol = 1e-12);

struct HeightSamples {
    std::vector<double> s;
    std::vector<double> z;
    std::vector<int> dz_sign;
    bool truncated = false;
    std::string truncation_reason;
};

HeightSamples z_of_s(const MomentumLaw& K, const AdmissibleInterval& I,
                     const ReconstructionConfig& cfg);

// lambda(s) = lambda0 + integral from 0 to s of K(z)/(z^2 - 1) on a uniform
// grid (fourth-order composite rule). At removable pole passages the rate is
// replaced by its limit; past a non-removable one the result is NaN.
std::vector<double> longitude_of_s(const MomentumLaw& K, const std::vector<double>& s,
                                   const std::vector<double>& z, double lambda0);

CurveTrace reconstruct(const MomentumLaw& K, const AdmissibleInterval& I,
                       const ReconstructionConfig& cfg);

}  // namespace sphcurve
