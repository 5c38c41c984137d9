#include "thinhom/solve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "thinhom/kernels.hpp"

namespace thinhom {

CgResult solve_linear_spd_cg(const CsrMatrix& A, const std::vector<double>& b,
                             std::vector<double>& x, double tol, int max_iterations) {
    const int n = A.n;
    if (static_cast<int>(b.size()) != n) throw std::invalid_argument("cg: size mismatch");
    if (x.size() != b.size()) x.assign(b.size(), 0.0);
    if (max_iterations <= 0) max_iterations = std::max(1000, 20 * n);

    std::vector<double> d = A.diagonal();
    for (double v : d)
        if (!(v > 0.0)) throw std::runtime_error("cg: non-positive diagonal, matrix not SPD");

    const double bnorm = std::sqrt(kern::dot(b.data(), b.data(), n));
    if (bnorm == 0.0) {
        x.assign(n, 0.0);
        return {0, 0.0};
    }

    std::vector<double> r(n), z(n), p(n), Ap(n);
    A.multiply(x.data(), Ap.data());
    for (int i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
    for (int i = 0; i < n; ++i) z[i] = r[i] / d[i];
    p = z;
    double rz = kern::dot(r.data(), z.data(), n);

    CgResult res;
    for (int it = 0; it < max_iterations; ++it) {
        A.multiply(p.data(), Ap.data());
        const double pAp = kern::dot(p.data(), Ap.data(), n);
        if (!(pAp > 0.0)) throw std::runtime_error("cg: breakdown, matrix not positive definite");
        const double alpha = rz / pAp;
        kern::axpy(alpha, p.data(), x.data(), n);
        kern::axpy(-alpha, Ap.data(), r.data(), n);
        res.iterations = it + 1;
        const double rn = std::sqrt(kern::dot(r.data(), r.data(), n));
        res.rel_residual = rn / bnorm;
        if (res.rel_residual <= tol) break;
        for (int i = 0; i < n; ++i) z[i] = r[i] / d[i];
        const double rz_new = kern::dot(r.data(), z.data(), n);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    // recompute the true residual; the recurrence can drift
    A.multiply(x.data(), Ap.data());
    for (int i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
    res.rel_residual = std::sqrt(kern::dot(r.data(), r.data(), n)) / bnorm;
    return res;
}

struct DirectSpd::Impl {
    Eigen::SparseMatrix<double> A;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    bool ok = false;
};

DirectSpd::DirectSpd() : impl_(std::make_unique<Impl>()) {}
DirectSpd::~DirectSpd() = default;
DirectSpd::DirectSpd(DirectSpd&&) noexcept = default;
DirectSpd& DirectSpd::operator=(DirectSpd&&) noexcept = default;
bool DirectSpd::factored() const { return impl_->ok; }

void DirectSpd::factor(const CsrMatrix& A) {
    // CSR of a symmetric matrix maps onto Eigen's CSC view of the transpose
    impl_->A = Eigen::Map<const Eigen::SparseMatrix<double>>(
        A.n, A.n, static_cast<Eigen::Index>(A.nnz()), A.ptr.data(), A.idx.data(),
        A.val.data());
    impl_->ldlt.compute(impl_->A);
    if (impl_->ldlt.info() != Eigen::Success)
        throw std::runtime_error("direct: LDLT factorization failed");
    impl_->ok = true;
}

std::vector<double> DirectSpd::solve(const std::vector<double>& b) const {
    if (!impl_->ok) throw std::logic_error("direct: solve before factor");
    Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
    Eigen::VectorXd x = impl_->ldlt.solve(rhs);
    return std::vector<double>(x.data(), x.data() + x.size());
}

std::vector<double> solve_linear_spd(const CsrMatrix& A, const std::vector<double>& b,
                                     LinearMethod method, double cg_tol) {
    if (method == LinearMethod::automatic)
        method = (A.n <= 400000) ? LinearMethod::direct : LinearMethod::cg;
    if (method == LinearMethod::direct) {
        DirectSpd d;
        d.factor(A);
        return d.solve(b);
    }
    std::vector<double> x(b.size(), 0.0);
    const CgResult r = solve_linear_spd_cg(A, b, x, cg_tol);
    if (r.rel_residual > std::max(cg_tol * 10.0, 1e-10))
        throw std::runtime_error("cg: failed to reach requested residual");
    return x;
}

double dual_surrogate(const FemSpace& sp, const std::vector<double>& r, double p) {
    const double pprime = p / (p - 1.0);
    const double n2 = std::sqrt(kern::dot(r.data(), r.data(), r.size()));
    return n2 * std::pow(sp.area(), 1.0 / pprime);
}

std::vector<double> solve_newton(const FemSpace& sp, const AsmOptions& aopts,
                                 const std::vector<double>& load, const SolverOptions& sopts,
                                 NewtonReport* report, const std::vector<double>* start,
                                 int pin_dof) {
    NewtonReport local;
    NewtonReport& rep = report ? *report : local;
    rep = NewtonReport{};

    std::vector<double> u = start ? *start : std::vector<double>(sp.ndof(), 0.0);
    if (static_cast<int>(u.size()) != sp.ndof())
        throw std::invalid_argument("newton: start size mismatch");

    const bool load_nonzero =
        std::any_of(load.begin(), load.end(), [](double v) { return v != 0.0; });
    const double umax = std::abs(u.empty() ? 0.0 : *std::max_element(
        u.begin(), u.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }));

    // At u = 0 with p > 2 the Jacobian vanishes identically; bootstrap from
    // the p = 2 solution of the same load.
    if (aopts.p != 2.0 && aopts.mass && aopts.grad_shift[0] == 0.0 &&
        aopts.grad_shift[1] == 0.0 && umax == 0.0 && load_nonzero) {
        AsmOptions lin = aopts;
        lin.p = 2.0;
        SolverOptions lopts = sopts;
        lopts.p = 2.0;
        u = solve_newton(sp, lin, load, lopts, nullptr, nullptr, pin_dof);
    }

    CsrMatrix J;
    std::vector<double> r = assemble_residual(sp, aopts, u, &load);
    if (pin_dof >= 0) r[pin_dof] = 0.0;
    double E = energy(sp, aopts, u, &load);

    for (int it = 0; it < sopts.max_newton_iterations; ++it) {
        const double res = dual_surrogate(sp, r, aopts.p);
        rep.residual = res;
        rep.residual_history.push_back(res);
        if (res <= sopts.residual_tolerance) {
            rep.converged = true;
            return u;
        }

        assemble_jacobian(sp, aopts, u, J);
        if (pin_dof >= 0) J.pin(pin_dof);
        std::vector<double> rhs(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) rhs[i] = -r[i];
        std::vector<double> step = solve_linear_spd(J, rhs, sopts.linear);

        const double slope = kern::dot(r.data(), step.data(), r.size());
        double t = 1.0;
        std::vector<double> trial(u.size());
        double Et = 0.0;
        bool accepted = false;
        for (int h = 0; h <= sopts.max_halvings; ++h) {
            for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + t * step[i];
            Et = energy(sp, aopts, trial, &load);
            if (Et <= E + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
            t *= sopts.backtrack_factor;
        }
        if (!accepted) {
            rep.iterations = it + 1;
            rep.converged = false;
            return u;  // line search stalled; report carries the history
        }
        if (Et > E) rep.energy_monotone = false;
        u.swap(trial);
        E = Et;
        r = assemble_residual(sp, aopts, u, &load);
        if (pin_dof >= 0) r[pin_dof] = 0.0;
        rep.iterations = it + 1;
    }
    rep.residual = dual_surrogate(sp, r, aopts.p);
    rep.residual_history.push_back(rep.residual);
    rep.converged = rep.residual <= sopts.residual_tolerance;
    return u;
}

FemField solve_duality(const FemSpace& sp, const std::vector<double>& load,
                       const SolverOptions& opts, NewtonReport* report,
                       const FemField* start) {
    AsmOptions aopts;
    aopts.p = opts.p;
    aopts.mass = true;
    aopts.delta = opts.delta;
    FemField out(sp);
    out.values = solve_newton(sp, aopts, load, opts, report,
                              start ? &start->values : nullptr);
    return out;
}

} // namespace thinhom
