#include "thinhom/homogenize.hpp"

#include <cmath>
#include <stdexcept>

#include "thinhom/mesh.hpp"

namespace thinhom {

double q_subcritical(const PeriodicProfile& g, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("homogenize: p must exceed 1");
    const double mean_g = profile_average(g, 1.0);
    // p' - 1 = 1/(p-1)
    const double mean_inv = profile_average(g, -1.0 / (p - 1.0));
    return 1.0 / (mean_g * std::pow(mean_inv, p - 1.0));
}

double q_supercritical(const PeriodicProfile& g) {
    return g.min_value() / profile_average(g, 1.0);
}

CellSolution solve_cell_problem(const TriMesh& cell_mesh, double p, const SolverOptions& opts) {
    if (cell_mesh.periodic_pairs.empty())
        throw std::invalid_argument("homogenize: cell mesh lacks periodic pairs");
    if (!(p > 1.0)) throw std::invalid_argument("homogenize: p must exceed 1");

    auto space = std::make_shared<FemSpace>(cell_mesh, /*periodic=*/true);
    FemSpace& sp = *space;

    AsmOptions aopts;
    aopts.p = p;
    aopts.mass = false;
    aopts.grad_shift = {1.0, 0.0};  // v = y1 + w

    SolverOptions sopts = opts;
    sopts.p = p;

    std::vector<double> zero_load(sp.ndof(), 0.0);
    NewtonReport rep;
    std::vector<double> w =
        solve_newton(sp, aopts, zero_load, sopts, &rep, nullptr, /*pin_dof=*/0);

    // remove the constant so <v - y1> over Y* is zero (area-weighted vertex rule)
    double mean = 0.0;
    for (int i = 0; i < sp.ndof(); ++i) mean += sp.lumped()[i] * w[i];
    mean /= sp.area();
    for (double& v : w) v -= mean;

    CellSolution sol;
    sol.space = space;
    sol.w = FemField(sp);
    sol.w.values = std::move(w);
    sol.residual = rep.residual;
    sol.newton_iterations = rep.iterations;
    sol.converged = rep.converged;

    // q = (1/|Y*|) int |grad v|^{p-2} dv/dy1
    double acc = 0.0;
    for (std::size_t t = 0; t < cell_mesh.triangles.size(); ++t) {
        auto gr = sol.w.grad_in_tri(static_cast<int>(t));
        gr[0] += 1.0;
        const double g2 = gr[0] * gr[0] + gr[1] * gr[1];
        acc += cell_mesh.elem[t].area * std::pow(g2, 0.5 * (p - 2.0)) * gr[0];
    }
    sol.q_value = acc / sp.area();
    return sol;
}

double q_resonant(const PeriodicProfile& g, double p, double target_h, double* coarse_q,
                  double* fine_q, const SolverOptions& opts) {
    const TriMesh coarse = build_cell_mesh(g, target_h);
    const TriMesh fine = build_cell_mesh(g, 0.5 * target_h);
    const CellSolution sc = solve_cell_problem(coarse, p, opts);
    const CellSolution sf = solve_cell_problem(fine, p, opts);
    if (!sc.converged || !sf.converged)
        throw std::runtime_error("homogenize: cell solve did not converge");
    if (coarse_q) *coarse_q = sc.q_value;
    if (fine_q) *fine_q = sf.q_value;
    return sf.q_value + (sf.q_value - sc.q_value) / 3.0;
}

double q_for_regime(HomogenizedModel::Regime regime, const PeriodicProfile& g, double p,
                    double cell_target_h) {
    switch (regime) {
        case HomogenizedModel::Regime::sub: return q_subcritical(g, p);
        case HomogenizedModel::Regime::super: return q_supercritical(g);
        case HomogenizedModel::Regime::resonant: return q_resonant(g, p, cell_target_h);
    }
    throw std::logic_error("homogenize: bad regime");
}

std::function<double(double)> limit_source(const std::function<double(double)>& f,
                                           const PeriodicProfile& g,
                                           const PeriodicProfile& h) {
    const double c = limit_reaction_coeff(g, h);
    return [f, c](double x) { return c * f(x); };
}

double limit_reaction_coeff(const PeriodicProfile& g, const PeriodicProfile& h) {
    return profile_average(h, 1.0) / profile_average(g, 1.0);
}

} // namespace thinhom
