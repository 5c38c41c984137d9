#pragma once

#include <functional>
#include <vector>

#include "thinhom/thin_spec.hpp"

namespace thinhom {

struct Grid1D {
    int n = 2;  // intervals on [0, 1]

    explicit Grid1D(int intervals);
    double dx() const { return 1.0 / n; }
    double node(int i) const { return static_cast<double>(i) / n; }
    int nodes() const { return n + 1; }
};

// Effective 1D model: -q (|u'|^{p-2} u')' + |u|^{p-2} u = source, Neumann.
// regime records where q came from; source_coeff is f_bar directly for the
// linear pipeline or c_f = <h>/<g> in front of the reaction.
struct HomogenizedModel {
    enum class Regime { sub, resonant, super };
    double q = 1.0;
    Regime regime = Regime::resonant;
    double p_exponent = 2.0;
    double source_coeff = 1.0;
};

struct LimitSolution {
    Grid1D grid{2};
    std::vector<double> values;  // nodal, size n+1
    HomogenizedModel model;
    double residual = 0.0;
    int newton_iterations = 0;
    bool converged = false;

    double eval(double x) const;          // P1 interpolant
    double one_sided_derivative_0() const;
    double one_sided_derivative_1() const;
};

// P1 Galerkin + Newton (tridiagonal) for the weak form
// int q|u'|^{p-2}u' v' + |u|^{p-2}u v = int fbar v, Neumann natural.
LimitSolution solve_limit_linear(const HomogenizedModel& model,
                                 const std::function<double(double)>& fbar, int n,
                                 double tol = 1e-12);

struct FixedPoint1DReport {
    int iterations = 0;
    bool converged = false;
    std::vector<double> diff_history;
};

// Outer fixed point u <- solve_limit_linear(model, c_f * f(u)) with
// under-relaxation; stops on successive W^{1,p} difference <= tol.
LimitSolution solve_limit_semilinear(const HomogenizedModel& model, const ForcingSpec& reaction,
                                     int n, double tol = 1e-10, int max_outer = 200,
                                     FixedPoint1DReport* report = nullptr);

// norms of a nodal vector on the grid (trapezoid mass, exact gradient)
double lp_norm_1d(const Grid1D& g, const std::vector<double>& u, double p);
double w1p_norm_1d(const Grid1D& g, const std::vector<double>& u, double p);

void write_solution_csv(const LimitSolution& sol, const std::string& path);

} // namespace thinhom
