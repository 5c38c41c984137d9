#include "thinhom/limit1d.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace thinhom {

namespace {

double spow(double v, double q) { return std::pow(std::abs(v), q) * v; }  // |v|^q v

struct Tridiag {
    std::vector<double> lo, di, up;
    explicit Tridiag(int n) : lo(n, 0.0), di(n, 0.0), up(n, 0.0) {}
};

// Thomas algorithm
std::vector<double> tridiag_solve(Tridiag T, std::vector<double> rhs) {
    const int n = static_cast<int>(rhs.size());
    for (int i = 1; i < n; ++i) {
        const double m = T.lo[i] / T.di[i - 1];
        T.di[i] -= m * T.up[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / T.di[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = (rhs[i] - T.up[i] * x[i + 1]) / T.di[i];
    return x;
}

// trapezoid lumped weights
std::vector<double> lumped_1d(const Grid1D& g) {
    std::vector<double> w(g.nodes(), g.dx());
    w.front() = w.back() = 0.5 * g.dx();
    return w;
}

std::vector<double> residual_1d(const HomogenizedModel& m, const Grid1D& g,
                                const std::vector<double>& u, const std::vector<double>& b) {
    const int nn = g.nodes();
    const double dx = g.dx();
    std::vector<double> r(nn, 0.0);
    for (int k = 0; k + 1 < nn; ++k) {
        const double du = (u[k + 1] - u[k]) / dx;
        const double flux = m.q * spow(du, m.p_exponent - 2.0);
        r[k] -= flux;
        r[k + 1] += flux;
    }
    const auto w = lumped_1d(g);
    for (int i = 0; i < nn; ++i) r[i] += w[i] * spow(u[i], m.p_exponent - 2.0) - b[i];
    return r;
}

double energy_1d(const HomogenizedModel& m, const Grid1D& g, const std::vector<double>& u,
                 const std::vector<double>& b) {
    const int nn = g.nodes();
    const double dx = g.dx(), p = m.p_exponent;
    double E = 0.0;
    for (int k = 0; k + 1 < nn; ++k)
        E += m.q * dx * std::pow(std::abs((u[k + 1] - u[k]) / dx), p) / p;
    const auto w = lumped_1d(g);
    for (int i = 0; i < nn; ++i) E += w[i] * std::pow(std::abs(u[i]), p) / p - b[i] * u[i];
    return E;
}

Tridiag jacobian_1d(const HomogenizedModel& m, const Grid1D& g, const std::vector<double>& u) {
    const int nn = g.nodes();
    const double dx = g.dx(), p = m.p_exponent;
    Tridiag J(nn);
    for (int k = 0; k + 1 < nn; ++k) {
        const double du = (u[k + 1] - u[k]) / dx;
        double c = m.q * (p - 1.0) * std::pow(std::abs(du), p - 2.0) / dx;
        if (!std::isfinite(c)) c = 0.0;
        J.di[k] += c;
        J.di[k + 1] += c;
        J.up[k] -= c;
        J.lo[k + 1] -= c;
    }
    const auto w = lumped_1d(g);
    for (int i = 0; i < nn; ++i) {
        double c = (p - 1.0) * std::pow(std::abs(u[i]), p - 2.0);
        if (!std::isfinite(c)) c = 0.0;
        J.di[i] += w[i] * c;
        // keep the matrix nonsingular when both blocks vanish (p > 2 at 0)
        if (J.di[i] == 0.0) J.di[i] = 1e-300;
    }
    return J;
}

LimitSolution newton_1d(const HomogenizedModel& m, const std::vector<double>& b, int n,
                        double tol, const std::vector<double>* start) {
    Grid1D g(n);
    LimitSolution sol;
    sol.grid = g;
    sol.model = m;
    std::vector<double> u = start ? *start : std::vector<double>(g.nodes(), 0.0);

    // bootstrap a p > 2 solve from the linear problem (zero start makes the
    // first Jacobian singular otherwise)
    bool zero = true;
    for (double v : u)
        if (v != 0.0) zero = false;
    if (m.p_exponent != 2.0 && zero) {
        HomogenizedModel lin = m;
        lin.p_exponent = 2.0;
        u = newton_1d(lin, b, n, tol, nullptr).values;
    }

    std::vector<double> r = residual_1d(m, g, u, b);
    double E = energy_1d(m, g, u, b);
    const int max_it = 100;
    for (int it = 0; it < max_it; ++it) {
        double rn = 0.0;
        for (double v : r) rn += v * v;
        rn = std::sqrt(rn);
        sol.residual = rn;
        sol.newton_iterations = it;
        if (rn <= tol) {
            sol.converged = true;
            break;
        }
        std::vector<double> rhs(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) rhs[i] = -r[i];
        const std::vector<double> step = tridiag_solve(jacobian_1d(m, g, u), rhs);
        double slope = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) slope += r[i] * step[i];
        double t = 1.0;
        std::vector<double> trial(u.size());
        for (int h = 0; h < 60; ++h) {
            for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + t * step[i];
            const double Et = energy_1d(m, g, trial, b);
            if (Et <= E + 1e-4 * t * slope) {
                u.swap(trial);
                E = Et;
                break;
            }
            t *= 0.5;
        }
        r = residual_1d(m, g, u, b);
    }
    sol.values = std::move(u);
    return sol;
}

} // namespace

Grid1D::Grid1D(int intervals) : n(intervals) {
    if (intervals < 2) throw std::invalid_argument("grid1d: need n >= 2");
}

double LimitSolution::eval(double x) const {
    const int nn = grid.nodes();
    double t = x * grid.n;
    int k = static_cast<int>(std::floor(t));
    if (k < 0) k = 0;
    if (k >= grid.n) k = grid.n - 1;
    const double s = t - k;
    (void)nn;
    return (1.0 - s) * values[k] + s * values[k + 1];
}

double LimitSolution::one_sided_derivative_0() const {
    return (values[1] - values[0]) / grid.dx();
}

double LimitSolution::one_sided_derivative_1() const {
    const int nn = grid.nodes();
    return (values[nn - 1] - values[nn - 2]) / grid.dx();
}

LimitSolution solve_limit_linear(const HomogenizedModel& model,
                                 const std::function<double(double)>& fbar, int n,
                                 double tol) {
    if (!(model.q > 0.0)) throw std::invalid_argument("limit1d: q must be positive");
    if (!(model.p_exponent > 1.0)) throw std::invalid_argument("limit1d: p must exceed 1");
    Grid1D g(n);
    std::vector<double> b(g.nodes());
    const auto w = lumped_1d(g);
    for (int i = 0; i < g.nodes(); ++i) b[i] = w[i] * fbar(g.node(i));
    return newton_1d(model, b, n, tol, nullptr);
}

LimitSolution solve_limit_semilinear(const HomogenizedModel& model, const ForcingSpec& reaction,
                                     int n, double tol, int max_outer,
                                     FixedPoint1DReport* report) {
    if (reaction.kind != ForcingSpec::Kind::reaction)
        throw std::invalid_argument("limit1d: semilinear solve needs a reaction forcing");
    if (!(model.p_exponent >= 2.0))
        throw std::invalid_argument("limit1d: semilinear problem assumes p >= 2");

    FixedPoint1DReport local;
    FixedPoint1DReport& rep = report ? *report : local;
    rep = FixedPoint1DReport{};

    Grid1D g(n);
    LimitSolution cur;
    cur.grid = g;
    cur.model = model;
    cur.values.assign(g.nodes(), 0.0);

    double omega = 1.0;
    int rises = 0;
    for (int it = 0; it < max_outer; ++it) {
        const std::vector<double>& uk = cur.values;
        const auto source = [&](double x) {
            const int nn = g.nodes();
            double t = x * g.n;
            int k = std::min(std::max(static_cast<int>(std::floor(t)), 0), g.n - 1);
            const double s = t - k;
            (void)nn;
            const double u = (1.0 - s) * uk[k] + s * uk[k + 1];
            return model.source_coeff * reaction.eval_reaction(u);
        };
        LimitSolution next = solve_limit_linear(model, source, n, 1e-13);
        std::vector<double> mixed(next.values.size());
        for (std::size_t i = 0; i < mixed.size(); ++i)
            mixed[i] = (1.0 - omega) * cur.values[i] + omega * next.values[i];

        std::vector<double> diff(mixed.size());
        for (std::size_t i = 0; i < mixed.size(); ++i) diff[i] = mixed[i] - cur.values[i];
        const double dn = w1p_norm_1d(g, diff, model.p_exponent);
        rep.diff_history.push_back(dn);
        rep.iterations = it + 1;
        cur.values = std::move(mixed);
        cur.residual = next.residual;
        cur.newton_iterations += next.newton_iterations;
        if (dn <= tol) {
            rep.converged = true;
            cur.converged = true;
            break;
        }
        const std::size_t m = rep.diff_history.size();
        if (m >= 2 && rep.diff_history[m - 1] > rep.diff_history[m - 2]) {
            if (++rises >= 2 && omega > 0.0625) {
                omega *= 0.5;
                rises = 0;
            }
        } else {
            rises = 0;
        }
    }
    return cur;
}

double lp_norm_1d(const Grid1D& g, const std::vector<double>& u, double p) {
    const auto w = lumped_1d(g);
    double s = 0.0;
    for (int i = 0; i < g.nodes(); ++i) s += w[i] * std::pow(std::abs(u[i]), p);
    return std::pow(s, 1.0 / p);
}

double w1p_norm_1d(const Grid1D& g, const std::vector<double>& u, double p) {
    double s = std::pow(lp_norm_1d(g, u, p), p);
    for (int k = 0; k + 1 < g.nodes(); ++k)
        s += g.dx() * std::pow(std::abs((u[k + 1] - u[k]) / g.dx()), p);
    return std::pow(s, 1.0 / p);
}

void write_solution_csv(const LimitSolution& sol, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("limit1d: cannot open '" + path + "'");
    out.precision(12);
    out << "x,u\n";
    for (int i = 0; i < sol.grid.nodes(); ++i)
        out << sol.grid.node(i) << "," << sol.values[i] << "\n";
}

} // namespace thinhom
