#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "sphcurve/momentum.hpp"
#include "sphcurve/trace.hpp"

namespace sphcurve {

struct FrenetState {
    Eigen::Vector3d xi{1.0, 0.0, 0.0};
    Eigen::Vector3d t{0.0, 0.0, 1.0};  // unit tangent
};

// Throws std::invalid_argument unless |xi| = |t| = 1 and <xi, t> = 0 within tol.
void check_frenet_state(const FrenetState& st, double tol = 1e-10);

// State at height z with dz/ds of sign dz_sign and longitude lambda, from the
// momentum law (z must be away from the poles).
FrenetState state_from_momentum(const MomentumLaw& K, double z, int dz_sign, double lambda);

struct OracleStats {
    double max_projection = 0.0;  // largest correction applied by re-projection
    long steps = 0;
};

// RK4 on xi' = t, t' = -xi + kappa(z) xi x t, both ways from s = 0 over
// [-s_span/2, s_span/2], re-projecting onto the sphere after every step. The
// step is shrunk so that s_span/2 is a whole number of steps. With n_samples
// = 0 every step is recorded; otherwise n_samples (odd) points on the uniform
// grid that reconstruct uses. Integration stops, and the trace is flagged
// truncated, where kappa is undefined or too large for the step.
CurveTrace frenet_integrate(const CurvatureLaw& law, const FrenetState& init, double s_span,
                            double ds, int n_samples = 0, OracleStats* stats = nullptr);

// kappa_i = det(xi, xi', xi'') by 5-point central differences; NaN at the
// two samples nearest each end. Throws on a non-uniform grid or fewer than
// five samples.
std::vector<double> curvature_from_trace(const CurveTrace& trace);

}  // namespace sphcurve
