#pragma once

#include <optional>

#include "sphcurve/momentum.hpp"
#include "sphcurve/trace.hpp"

namespace sphcurve {

struct Thresholds {
    double sphere = 1e-9;
    double speed = 1e-6;
    double curvature = 1e-5;
    double momentum = 1e-6;
    double el = 1e-4;
    double energy = 1e-4;
};

struct Verdict {
    bool sphere = false;
    bool speed = false;
    bool curvature = false;
    bool momentum = false;
    bool el = true;  // true when not evaluated
    bool energy = true;

    bool pass() const { return sphere && speed && curvature && momentum && el && energy; }
};

struct DiagnosticsReport {
    double max_sphere_residual = 0.0;
    double max_speed_residual = 0.0;
    double max_curvature_residual = 0.0;
    double max_momentum_residual = 0.0;
    std::optional<double> el_residual;      // linear elastica laws only
    std::optional<double> energy_residual;  // linear elastica laws only
    int n_samples = 0;
    Verdict verdict;
};

// Residuals of a trace against a curvature/momentum law. The point used is
// (x, y, z) with z taken from the z column. Never throws on numeric
// anomalies: a NaN residual is a failure, as is a trace too short to
// difference.
DiagnosticsReport verify_trace(const CurveTrace& trace, const CurvatureLaw& law,
                               const MomentumLaw& K, const Thresholds& th = {});

// Sup chordal distance after the rotation about e3 that minimises the mean
// squared distance. Throws std::invalid_argument if the s-grids differ.
double compare_traces(const CurveTrace& a, const CurveTrace& b);

// The optimal rotation angle applied to a.
double optimal_z_rotation(const CurveTrace& a, const CurveTrace& b);

}  // namespace sphcurve
