#include "thinhom/concentration.hpp"

#include <cmath>
#include <stdexcept>

#include "thinhom/quadrature.hpp"
#include "thinhom/unfolding.hpp"

namespace thinhom {

namespace {

// shared edge-midpoint scatter over strip triangles
template <typename MidValue>
std::vector<double> strip_load(const FemSpace& sp, const ThinDomainSpec& spec,
                               MidValue&& value_at) {
    const TriMesh& mesh = sp.mesh();
    if (mesh.strip_tag.empty() || mesh.interface_row >= mesh.rows)
        throw std::invalid_argument("concentration: mesh carries no strip tags");
    std::vector<double> b(sp.ndof(), 0.0);
    const double scale = 1.0 / std::pow(spec.epsilon, spec.gamma);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        if (!mesh.strip_tag[t]) continue;
        const auto& tri = mesh.triangles[t];
        const double a3 = mesh.elem[t].area / 3.0;
        for (int e = 0; e < 3; ++e) {
            const int va = tri[e], vb = tri[(e + 1) % 3];
            const double fm = value_at(va, vb);
            b[sp.dof(va)] += scale * 0.5 * a3 * fm;
            b[sp.dof(vb)] += scale * 0.5 * a3 * fm;
        }
    }
    return b;
}

} // namespace

double ConcentratedLoad::total() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

ConcentratedLoad assemble_concentrated_load(const FemSpace& sp, const ThinDomainSpec& spec,
                                            const std::function<double(double)>& f) {
    ConcentratedLoad out;
    out.spec = &spec;
    const auto& verts = sp.mesh().vertices;
    out.values = strip_load(sp, spec, [&](int va, int vb) {
        return f(0.5 * (verts[va][0] + verts[vb][0]));
    });
    return out;
}

ConcentratedLoad assemble_reaction_load(const FemSpace& sp, const ThinDomainSpec& spec,
                                        const ForcingSpec& reaction,
                                        const std::vector<double>& u) {
    if (reaction.kind != ForcingSpec::Kind::reaction)
        throw std::invalid_argument("concentration: reaction load needs a reaction forcing");
    ConcentratedLoad out;
    out.spec = &spec;
    out.values = strip_load(sp, spec, [&](int va, int vb) {
        const double um = 0.5 * (u[sp.dof(va)] + u[sp.dof(vb)]);  // P1 exact at midpoints
        return reaction.eval_reaction(um);
    });
    return out;
}

FemField solve_semilinear(const FemSpace& sp, const ThinDomainSpec& spec,
                          const SolverOptions& opts, FixedPointReport* report,
                          double outer_tol, int max_outer, const FemField* start) {
    if (!(opts.p >= 2.0))
        throw std::invalid_argument("concentration: semilinear solve assumes p >= 2");
    if (spec.forcing.kind != ForcingSpec::Kind::reaction)
        throw std::invalid_argument("concentration: spec carries no reaction forcing");

    FixedPointReport local;
    FixedPointReport& rep = report ? *report : local;
    rep = FixedPointReport{};

    FemField u(sp);
    if (start) u = *start;

    // p = 2 keeps J linear: factor once, reuse across the outer iterations
    DirectSpd cached;
    if (opts.p == 2.0) {
        AsmOptions aopts;
        aopts.p = 2.0;
        CsrMatrix J;
        assemble_jacobian(sp, aopts, std::vector<double>(sp.ndof(), 0.0), J);
        cached.factor(J);
    }

    SolverOptions inner = opts;
    inner.residual_tolerance = std::min(opts.residual_tolerance, outer_tol * 1e-2);

    double omega = 1.0;
    int rises = 0;
    for (int it = 0; it < max_outer; ++it) {
        const ConcentratedLoad load = assemble_reaction_load(sp, spec, spec.forcing, u.values);
        std::vector<double> next;
        if (opts.p == 2.0) {
            next = cached.solve(load.values);
        } else {
            NewtonReport nrep;
            next = solve_newton(sp, AsmOptions{opts.p, true, {0, 0}, opts.delta}, load.values,
                                inner, &nrep, &u.values);
            rep.total_newton_iterations += nrep.iterations;
            if (!nrep.converged)
                throw std::runtime_error("concentration: inner duality solve stalled");
        }
        std::vector<double> diff(next.size());
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] = (1.0 - omega) * u.values[i] + omega * next[i];
            diff[i] = next[i] - u.values[i];
        }
        const double dn = w1p_norm(sp, diff, opts.p);
        rep.diff_history.push_back(dn);
        rep.iterates = it + 1;
        u.values = std::move(next);
        if (dn <= outer_tol) {
            rep.converged = true;
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
    return u;
}

double verify_concentration_identity(const FemField& phi, const ThinDomainSpec& spec) {
    const IdentityBundle b = compute_identity_bundle(phi, spec);
    return b.first_unf_residual();
}

double trace_ratio(const FemSpace& sp, const ThinDomainSpec& spec,
                   const std::vector<double>& u, double q_exp) {
    const TriMesh& mesh = sp.mesh();
    double num = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        if (!mesh.strip_tag[t]) continue;
        const auto& tri = mesh.triangles[t];
        double mean = 0.0;
        for (int k = 0; k < 3; ++k)
            mean += std::pow(std::abs(u[sp.dof(tri[k])]), q_exp);
        num += mesh.elem[t].area * mean / 3.0;
    }
    num /= std::pow(spec.epsilon, spec.gamma);
    const double den = std::pow(w1p_norm(sp, u, spec.p_exponent), q_exp);
    if (!(den > 0.0)) throw std::runtime_error("concentration: trace ratio of a zero field");
    return num / den;
}

double concentrated_pairing(const ThinDomainSpec& spec, const std::function<double(double)>& f,
                            const std::function<double(double)>& phi) {
    // the y-extent of O_eps at x is eps^{1+gamma} h(x/eps^beta), so the
    // pairing collapses to int_0^1 f phi h(x/eps^beta) dx
    const double Ph = std::pow(spec.epsilon, spec.beta) * spec.h.period();
    std::vector<double> breaks{0.0};
    for (int k = 1; k * Ph < 1.0 - 1e-13; ++k) breaks.push_back(k * Ph);
    breaks.push_back(1.0);
    return integrate_on_breaks(
        [&](double x) {
            return f(x) * phi(x) * spec.h(x / std::pow(spec.epsilon, spec.beta));
        },
        breaks);
}

} // namespace thinhom
