#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace sphcurve::quad {

namespace detail {
inline constexpr double kGL10x[5] = {0.14887433898163121088, 0.43339539412924719080,
                                     0.67940956829902440623, 0.86506336668898451073,
                                     0.97390652851717172008};
inline constexpr double kGL10w[5] = {0.29552422471475287017, 0.26926671930999635509,
                                     0.21908636251598204400, 0.14945134915058059315,
                                     0.06667134430868813759};

template <class F>
double gl10(F& f, double a, double b) {
    const double m = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double dx = h * kGL10x[i];
        sum += kGL10w[i] * (f(m - dx) + f(m + dx));
    }
    return sum * h;
}
}  // namespace detail

struct Stats {
    int panels = 0;
    int splits = 0;
    bool converged = true;
};

// Adaptive 10-point Gauss-Legendre. A panel is accepted when its estimate
// agrees with the sum over its two halves to within its share of abs_tol.
// Endpoints are never evaluated, so integrable endpoint singularities are
// tolerated by subdivision.
//
// Past max_panels subdivisions (noisy integrands) the remaining panels are
// accepted as they stand and the result is flagged as not converged.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol, Stats* stats = nullptr,
                 int max_depth = 60, int max_panels = 100000) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    struct Panel {
        double a, b, whole;
        int depth;
    };
    const double total = b - a;
    std::vector<Panel> stack;
    stack.push_back({a, b, detail::gl10(f, a, b), 0});
    double result = 0.0;
    int panels = 0;
    int splits = 0;
    bool converged = true;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double m = 0.5 * (p.a + p.b);
        const double left = detail::gl10(f, p.a, m);
        const double right = detail::gl10(f, m, p.b);
        const double refined = left + right;
        const double local_tol = abs_tol * (p.b - p.a) / total;
        const double diff = std::abs(refined - p.whole);
        if (!std::isfinite(refined)) {
            result += refined;
            converged = false;
            continue;
        }
        // Rounding of the abscissae alone perturbs the panel sum by about
        // eps |m| |f'| (b - a); below that the difference is noise.
        const double w = p.b - p.a;
        const double noise = 32.0 * 2.2e-16 * std::abs(m) * 4.0 * std::abs(right - left) / w;
        if (diff <= local_tol || diff <= 1e-15 * std::abs(refined) || diff <= noise) {
            result += refined;
            ++panels;
            continue;
        }
        if (p.depth >= max_depth || m <= p.a || m >= p.b || ++splits > max_panels) {
            result += refined;
            ++panels;
            converged = false;
            continue;
        }
        stack.push_back({m, p.b, right, p.depth + 1});
        stack.push_back({p.a, m, left, p.depth + 1});
    }
    if (stats) {
        stats->panels += panels;
        stats->converged = stats->converged && converged;
    }
    return sign * result;
}

}  // namespace sphcurve::quad
