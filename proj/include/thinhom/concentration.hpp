#pragma once

#include <functional>
#include <vector>

#include "thinhom/fem.hpp"
#include "thinhom/solve.hpp"
#include "thinhom/thin_spec.hpp"

namespace thinhom {

// Nodal load b_i = (1/eps^gamma) int_{O_eps} f phi_i over the strip-tagged
// elements; entries vanish away from the strip.
struct ConcentratedLoad {
    const ThinDomainSpec* spec = nullptr;
    std::vector<double> values;

    double total() const;
};

// f depends on x only; 3-point edge-midpoint quadrature per strip triangle
// (exact for f affine there).
ConcentratedLoad assemble_concentrated_load(const FemSpace& sp, const ThinDomainSpec& spec,
                                            const std::function<double(double)>& f);

// reaction load b_i = (1/eps^gamma) int_{O_eps} f(u) phi_i
ConcentratedLoad assemble_reaction_load(const FemSpace& sp, const ThinDomainSpec& spec,
                                        const ForcingSpec& reaction,
                                        const std::vector<double>& u);

struct FixedPointReport {
    int iterates = 0;
    bool converged = false;
    std::vector<double> diff_history;  // successive differences in W^{1,p}
    int total_newton_iterations = 0;
};

// u^{k+1} = (1-omega) u^k + omega J^{-1} F_eps(u^k); inner J-solves via the
// duality-map Newton machinery (a p = 2 factorization is reused).
FemField solve_semilinear(const FemSpace& sp, const ThinDomainSpec& spec,
                          const SolverOptions& opts, FixedPointReport* report = nullptr,
                          double outer_tol = 1e-10, int max_outer = 50,
                          const FemField* start = nullptr);

// Absolute residual of the concentrated-integral identity (first unfolding
// proposition) for a P1 field; exact up to quadrature on this geometry.
double verify_concentration_identity(const FemField& phi, const ThinDomainSpec& spec);

// [(1/eps^gamma) int_{O_eps} |u|^q] / ||u||_{W^{1,p}}^q; throws on zero field.
double trace_ratio(const FemSpace& sp, const ThinDomainSpec& spec,
                   const std::vector<double>& u, double q_exp);

// The scalar (1/eps^{gamma+1}) int_{O_eps} f(x) phi(x) dx dy computed from the
// analytic strip geometry by period-aligned adaptive quadrature (the limit
// object of the linear-forcing remark is <h> int f phi).
double concentrated_pairing(const ThinDomainSpec& spec, const std::function<double(double)>& f,
                            const std::function<double(double)>& phi);

} // namespace thinhom
