#pragma once

#include <functional>
#include <vector>

namespace thinhom {

// 5-point Gauss-Legendre on [a, b].
double gauss5(const std::function<double(double)>& f, double a, double b);

// Composite 5-point Gauss-Legendre with dyadic refinement until the
// relative change drops below rel_tol (or the level cap is reached).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-10, int max_levels = 22);

// Same, but the initial subdivision is given (integrand kinks go here);
// each sub-interval is refined dyadically.
double integrate_on_breaks(const std::function<double(double)>& f,
                           const std::vector<double>& breaks, double rel_tol = 1e-10,
                           int max_levels = 22);

// Gauss-Legendre nodes/weights on [a, b] for order 2..5 (used by the
// identity verifiers to place a few exact points per mesh column).
void gauss_nodes(int order, double a, double b, std::vector<double>& nodes,
                 std::vector<double>& weights);

} // namespace thinhom
