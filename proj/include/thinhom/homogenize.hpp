#pragma once

#include <functional>
#include <memory>

#include "thinhom/fem.hpp"
#include "thinhom/limit1d.hpp"
#include "thinhom/profile.hpp"
#include "thinhom/solve.hpp"

namespace thinhom {

// Solution of the periodic cell problem on Y*: v = y1 + w with w periodic,
// int |grad v|^{p-2} grad v . grad(phi) = 0, <v - y1> = 0.
// The space member keeps w.space valid; the cell mesh itself must outlive
// the solution (it is caller-owned).
struct CellSolution {
    std::shared_ptr<FemSpace> space;
    FemField w;            // periodic part, zero mean (v = y1 + w)
    double q_value = 0.0;  // (1/|Y*|) int |grad v|^{p-2} dv/dy1
    double residual = 0.0;
    int newton_iterations = 0;
    bool converged = false;

    double v_at(double y1, double y2) const { return y1 + w.eval(y1, y2); }
};

// closed form for 0 < alpha < 1: 1 / (<g> <g^{-(p'-1)}>^{p-1})
double q_subcritical(const PeriodicProfile& g, double p);

// closed form for alpha > 1: g_min / <g> (p-independent)
double q_supercritical(const PeriodicProfile& g);

CellSolution solve_cell_problem(const TriMesh& cell_mesh, double p,
                                const SolverOptions& opts = {});

// builds two cell meshes (target_h, target_h/2), solves, Richardson-
// extrapolates q assuming second order. fine_q/coarse_q are optional taps.
double q_resonant(const PeriodicProfile& g, double p, double target_h,
                  double* coarse_q = nullptr, double* fine_q = nullptr,
                  const SolverOptions& opts = {});

double q_for_regime(HomogenizedModel::Regime regime, const PeriodicProfile& g, double p,
                    double cell_target_h = 1.0 / 48.0);

// f_bar(x) = f(x) * <h> / <g> for forcing families f^eps(x, y) = f(x)
std::function<double(double)> limit_source(const std::function<double(double)>& f,
                                           const PeriodicProfile& g, const PeriodicProfile& h);

// <h>/<g>, the reaction coefficient of the semilinear limit problem
double limit_reaction_coeff(const PeriodicProfile& g, const PeriodicProfile& h);

} // namespace thinhom
