#pragma once

#include <vector>

#include "sphcurve/momentum.hpp"

namespace sphcurve::detail {

// A point of the interval in the regularising variable v, with the distances
// to both ends kept separately so that they stay accurate near the ends.
struct MapPoint {
    double z;
    double cz;    // sqrt(1 - z^2)
    double dlo;   // z - z_lo
    double dhi;   // z_hi - z
    double dzdv;  // >= 0
    double chv;   // cosh v on the half-line maps, 1 otherwise
};

// Monotone reparametrisation z(v) of an admissible interval under which
// ds/dv stays bounded and nonzero at closed ends:
//   both ends at finite distance: z = m + r sin v on [-pi/2, pi/2];
//   one Asymptote end:            z = z_d +- w sech v on a half line;
//   two Asymptote ends:           z = m + r tanh v on the real line.
class IntervalMap {
public:
    IntervalMap(const MomentumLaw& K, const AdmissibleInterval& I);

    double v_min() const { return v_min_; }
    double v_max() const { return v_max_; }
    const MomentumLaw& law() const { return K_; }
    const AdmissibleInterval& interval() const { return I_; }

    MapPoint at(double v) const;
    double v_of_z(double z) const;

    double discriminant(const MapPoint& p) const;
    // ds/dv
    double speed(const MapPoint& p) const;
    // K / (z^2 - 1), the longitude rate for the positive branch.
    double lambda_rate(const MapPoint& p) const;

    double h(double v) const { return speed(at(v)); }
    double g(double v) const {
        const MapPoint p = at(v);
        return lambda_rate(p) * speed(p);
    }

private:
    enum class Map { Sine, SechLo, SechHi, Tanh };

    struct EndModel {
        bool active = false;
        double slope = 0.0;  // |P'| at the end
        double curv = 0.0;   // P'' at the end
    };

    MomentumLaw K_;
    AdmissibleInterval I_;
    Map map_ = Map::Sine;
    double m_ = 0.0, r_ = 0.0, w_ = 0.0;
    double v_min_ = 0.0, v_max_ = 0.0;
    EndModel lo_model_, hi_model_;
    // Polynomial laws: P = N(z) / z^k with the turning-point roots divided
    // out of N, so that P = (dlo)(dhi) R(z) without cancellation.
    bool deflated_ = false;
    bool defl_lo_ = false, defl_hi_ = false;
    std::vector<double> quot_;  // ascending coefficients
    int denom_pow_ = 0;
    double deflated_rest(double z) const;
    void setup_deflation();
    bool lo_removable_ = false, hi_removable_ = false;
};

// Arc length from z_lo to z_hi; both ends must be at finite distance.
double full_leg_length(const MomentumLaw& K, const AdmissibleInterval& I, double tol = 1e-13);

}  // namespace sphcurve::detail
