#include "hahnmeasure/quadrature.hpp"

#include <cmath>
#include <vector>

namespace hm {

namespace {

// Tanh-sinh rule on (-1, 1): x = tanh(pi/2 sinh(t)), summed at levels of
// halved step until the level contribution is negligible.
double tanh_sinh_unit(const std::function<double(double)>& f, double rel_tol) {
    const int max_level = 12;
    const double tmax = 6.0;
    auto pair_term = [&](double t) {
        double s = std::sinh(t);
        double c = std::cosh(t);
        double u = M_PI_2 * s;
        double x = std::tanh(u);
        if (1.0 - std::fabs(x) <= 0.0) return 0.0;
        double sech = 1.0 / std::cosh(u);
        double w = M_PI_2 * c * sech * sech;
        double fv = t == 0.0 ? f(x) : f(x) + f(-x);
        return std::isfinite(fv) ? fv * w : 0.0;
    };
    double h = 1.0;
    double sum = pair_term(0.0);
    for (double t = h; t <= tmax; t += h) sum += pair_term(t);
    double prev = h * sum;
    for (int level = 1; level <= max_level; ++level) {
        h /= 2;
        for (double t = h; t <= tmax; t += 2 * h) sum += pair_term(t);
        double cur = h * sum;
        if (level >= 4 && std::fabs(cur - prev) <= rel_tol * std::max(1.0, std::fabs(cur)))
            return cur;
        prev = cur;
    }
    return prev;
}

} // namespace

double quad_integrate(const std::function<double(double)>& f, double a, double b,
                      double rel_tol) {
    if (a == b) return 0.0;
    if (a > b) return -quad_integrate(f, b, a, rel_tol);
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    return half * tanh_sinh_unit([&](double u) { return f(mid + half * u); }, rel_tol);
}

double quad_integrate_upper(const std::function<double(double)>& f, double a, double rel_tol) {
    // x = a + u/(1-u), u in [0,1): dx = du/(1-u)^2
    return quad_integrate(
        [&](double u) {
            double d = 1.0 - u;
            double x = a + u / d;
            return f(x) / (d * d);
        },
        0.0, 1.0, rel_tol);
}

double quad_integrate_lower(const std::function<double(double)>& f, double b, double rel_tol) {
    return quad_integrate_upper([&](double x) { return f(-x); }, -b, rel_tol);
}

double quad_integrate_line(const std::function<double(double)>& f, double rel_tol) {
    return quad_integrate_upper(f, 0.0, rel_tol) + quad_integrate_lower(f, 0.0, rel_tol);
}

} // namespace hm
