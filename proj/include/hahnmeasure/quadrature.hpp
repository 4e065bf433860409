#pragma once

#include <functional>

namespace hm {

// Double-exponential (tanh-sinh) quadrature on [a, b], robust against
// integrable endpoint singularities; the infinite-endpoint variants
// substitute through exp-sinh. Independent numeric oracle: shares no code
// with the symbolic engine.
double quad_integrate(const std::function<double(double)>& f, double a, double b,
                      double rel_tol = 1e-12);

// Semi-infinite [a, +inf) and (-inf, b].
double quad_integrate_upper(const std::function<double(double)>& f, double a,
                            double rel_tol = 1e-12);
double quad_integrate_lower(const std::function<double(double)>& f, double b,
                            double rel_tol = 1e-12);
// Whole line.
double quad_integrate_line(const std::function<double(double)>& f, double rel_tol = 1e-12);

} // namespace hm
