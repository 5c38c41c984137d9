#pragma once

#include <memory>
#include <vector>

#include "thinhom/fem.hpp"
#include "thinhom/sparse.hpp"

namespace thinhom {

enum class LinearMethod { automatic, cg, direct };

struct CgResult {
    int iterations = 0;
    double rel_residual = 0.0;
};

// Preconditioned (Jacobi) conjugate gradients; throws on breakdown or
// detected indefiniteness. Relative residual measured against ||b||.
CgResult solve_linear_spd_cg(const CsrMatrix& A, const std::vector<double>& b,
                             std::vector<double>& x, double tol = 1e-12,
                             int max_iterations = 0 /* 0: 20n cap */);

// Sparse LDLT factorization (held between solves so fixed-point drivers can
// reuse a p = 2 factorization).
class DirectSpd {
public:
    DirectSpd();
    ~DirectSpd();
    DirectSpd(DirectSpd&&) noexcept;
    DirectSpd& operator=(DirectSpd&&) noexcept;
    void factor(const CsrMatrix& A);
    std::vector<double> solve(const std::vector<double>& b) const;
    bool factored() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// One-call interface: direct factorization for systems up to ~4e5 unknowns,
// CG beyond (or force a method).
std::vector<double> solve_linear_spd(const CsrMatrix& A, const std::vector<double>& b,
                                     LinearMethod method = LinearMethod::automatic,
                                     double cg_tol = 1e-12);

struct SolverOptions {
    double p = 2.0;
    double residual_tolerance = 1e-10;  // on the dual-norm surrogate
    int max_newton_iterations = 60;
    double backtrack_factor = 0.5;
    int max_halvings = 40;
    double delta = 0.0;
    LinearMethod linear = LinearMethod::automatic;
};

struct NewtonReport {
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;
    std::vector<double> residual_history;
    bool energy_monotone = true;  // across accepted steps
};

// Newton with backtracking line search on the convex energy. pin_dof >= 0
// removes the constant null direction (cell problem). start may be null.
// Returns the last iterate; convergence status lives in the report.
std::vector<double> solve_newton(const FemSpace& sp, const AsmOptions& aopts,
                                 const std::vector<double>& load, const SolverOptions& sopts,
                                 NewtonReport* report = nullptr,
                                 const std::vector<double>* start = nullptr, int pin_dof = -1);

// Dual-norm surrogate of a residual vector: ||r||_2 * area^(1/p').
double dual_surrogate(const FemSpace& sp, const std::vector<double>& r, double p);

// The duality-map solve J u = b on the space (weak p-Laplacian plus
// |u|^{p-2}u mass). Throws only on structural errors; non-convergence is
// reported, with the last iterate returned.
FemField solve_duality(const FemSpace& sp, const std::vector<double>& load,
                       const SolverOptions& opts, NewtonReport* report = nullptr,
                       const FemField* start = nullptr);

} // namespace thinhom
