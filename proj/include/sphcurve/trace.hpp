#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace sphcurve {

struct TraceMeta {
    std::string source;  // "reconstruct", "closed-form", "oracle" or "csv"
    std::string law;
    std::map<std::string, double> params;
    double c = 0.0;
    double s_span = 0.0;
    int n_samples = 0;
    double z0 = 0.0;
    double lambda0 = 0.0;
    int dz_sign0 = 1;
    double quad_tol = 0.0;
    double ds = 0.0;
    bool truncated = false;
    std::string truncation_reason;
};

// Sampled unit-speed curve on a uniform s-grid. phi is the latitude unfolded
// through pole passages and lambda the continuous longitude, so that
// xi = (cos phi cos lambda, cos phi sin lambda, sin phi).
struct CurveTrace {
    std::vector<double> s;
    std::vector<double> z;
    std::vector<double> phi;
    std::vector<double> lambda;
    std::vector<Eigen::Vector3d> xi;
    TraceMeta meta;

    std::size_t size() const { return s.size(); }
    void push_back(double s_i, double z_i, double phi_i, double lambda_i,
                   const Eigen::Vector3d& xi_i);
};

Eigen::Vector3d geographic_point(double phi, double lambda);

// Grid spacing of s; throws std::invalid_argument if the grid is not uniform
// or has fewer than two points.
double uniform_spacing(const std::vector<double>& s);

// n samples on [-span/2, span/2], exactly antisymmetric with exact ends.
std::vector<double> uniform_grid(double span, int n);

namespace fd {
// First derivative, 5-point stencils (one-sided at the ends); falls back to
// second order with fewer than five samples.
std::vector<double> first(const std::vector<double>& f, double h);
// Second derivative by the 5-point central stencil; NaN at the two samples
// nearest each end.
std::vector<double> second_central(const std::vector<double>& f, double h);
}  // namespace fd

// CSV with header s,z,phi,lambda,x,y,zc at 17 significant digits.
void write_csv(std::ostream& out, const CurveTrace& trace);
CurveTrace read_csv(std::istream& in);

}  // namespace sphcurve
