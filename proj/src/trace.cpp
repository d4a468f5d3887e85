#include "sphcurve/trace.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sphcurve {

void CurveTrace::push_back(double s_i, double z_i, double phi_i, double lambda_i,
                           const Eigen::Vector3d& xi_i) {
    s.push_back(s_i);
    z.push_back(z_i);
    phi.push_back(phi_i);
    lambda.push_back(lambda_i);
    xi.push_back(xi_i);
}

Eigen::Vector3d geographic_point(double phi, double lambda) {
    const double c = std::cos(phi);
    return {c * std::cos(lambda), c * std::sin(lambda), std::sin(phi)};
}

double uniform_spacing(const std::vector<double>& s) {
    if (s.size() < 2) throw std::invalid_argument("grid needs at least two samples");
    const double h = (s.back() - s.front()) / static_cast<double>(s.size() - 1);
    if (!(h > 0.0)) throw std::invalid_argument("grid must be increasing");
    const double tol = 1e-9 * h + 1e-13 * std::max(std::abs(s.front()), std::abs(s.back()));
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (std::abs((s[i] - s[i - 1]) - h) > tol)
            throw std::invalid_argument("grid is not uniform");
    }
    return h;
}

std::vector<double> uniform_grid(double span, int n) {
    std::vector<double> s(static_cast<std::size_t>(n));
    const double den = 2.0 * (n - 1);
    for (int i = 0; i < n; ++i) s[i] = span * ((2.0 * i - (n - 1)) / den);
    return s;
}

namespace fd {

std::vector<double> first(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n, std::numeric_limits<double>::quiet_NaN());
    if (n < 3) return d;
    if (n < 5) {
        for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2 * h);
        d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
        d[n - 1] = (3 * f[n - 1] - 4 * f[n - 2] + f[n - 3]) / (2 * h);
        return d;
    }
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / (12 * h);
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h);
    d[n - 1] = (25 * f[n - 1] - 48 * f[n - 2] + 36 * f[n - 3] - 16 * f[n - 4] + 3 * f[n - 5]) /
               (12 * h);
    d[n - 2] = (3 * f[n - 1] + 10 * f[n - 2] - 18 * f[n - 3] + 6 * f[n - 4] - f[n - 5]) /
               (12 * h);
    return d;
}

std::vector<double> second_central(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (-f[i - 2] + 16 * f[i - 1] - 30 * f[i] + 16 * f[i + 1] - f[i + 2]) / (12 * h * h);
    return d;
}

}  // namespace fd

void write_csv(std::ostream& out, const CurveTrace& trace) {
    out << "s,z,phi,lambda,x,y,zc\n";
    char buf[512];
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const Eigen::Vector3d& x = trace.xi[i];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", trace.s[i],
                      trace.z[i], trace.phi[i], trace.lambda[i], x.x(), x.y(), x.z());
        out << buf;
    }
}

CurveTrace read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty CSV input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "s,z,phi,lambda,x,y,zc")
        throw std::invalid_argument("CSV header must be s,z,phi,lambda,x,y,zc");
    CurveTrace t;
    t.meta.source = "csv";
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        double v[7];
        std::istringstream ls(line);
        std::string cell;
        int k = 0;
        while (std::getline(ls, cell, ',')) {
            if (k >= 7) break;
            char* end = nullptr;
            v[k] = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str())
                throw std::invalid_argument("CSV row " + std::to_string(row) + ": bad number");
            ++k;
        }
        if (k != 7)
            throw std::invalid_argument("CSV row " + std::to_string(row) + ": expected 7 columns");
        t.push_back(v[0], v[1], v[2], v[3], Eigen::Vector3d(v[4], v[5], v[6]));
    }
    t.meta.n_samples = static_cast<int>(t.size());
    return t;
}

}  // namespace sphcurve
