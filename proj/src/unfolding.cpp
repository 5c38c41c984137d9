#include "thinhom/unfolding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "thinhom/profile.hpp"
#include "thinhom/quadrature.hpp"

namespace thinhom {

namespace {

double clamp_pow(double base, double e) { return std::pow(std::abs(base), e); }

// Gauss points in s over every column subinterval of [a, b], each column
// piece split into nsub. Mesh columns contain a and b by construction.
struct SQuad {
    std::vector<double> s, w;
};

SQuad column_gauss(const TriMesh& mesh, double a, double b, int order, int nsub) {
    SQuad q;
    std::vector<double> nodes, weights;
    const auto& cx = mesh.col_x;
    auto it = std::lower_bound(cx.begin(), cx.end(), a - 1e-13);
    std::size_t j = static_cast<std::size_t>(it - cx.begin());
    if (j > 0) --j;
    while (j + 1 < cx.size() && cx[j] < b - 1e-13) {
        const double lo = std::max(cx[j], a), hi = std::min(cx[j + 1], b);
        if (hi > lo + 1e-15) {
            for (int u = 0; u < nsub; ++u) {
                gauss_nodes(order, lo + (hi - lo) * u / nsub, lo + (hi - lo) * (u + 1) / nsub,
                            nodes, weights);
                q.s.insert(q.s.end(), nodes.begin(), nodes.end());
                q.w.insert(q.w.end(), weights.begin(), weights.end());
            }
        }
        ++j;
    }
    return q;
}

} // namespace

int CellSplit::cell_of(double x) const {
    if (cells == 0 || x >= lambda_start) return -1;
    const int k = static_cast<int>(std::floor(x / period));
    return std::clamp(k, 0, cells - 1);
}

CellSplit cell_split(double period) {
    if (!(period > 0.0)) throw std::invalid_argument("unfold: period must be positive");
    CellSplit s;
    s.period = period;
    int m = static_cast<int>(std::floor(1.0 / period + 1e-9));
    while (m > 0 && m * period > 1.0 + 1e-12) --m;
    s.cells = m;
    s.lambda_start = std::min(1.0, m * period);
    return s;
}

UnfoldGrid make_unfold_grid(const ThinDomainSpec& spec, GridResolution res) {
    UnfoldGrid grid;
    grid.eps = spec.epsilon;
    grid.alpha = spec.alpha;
    grid.Lg = spec.g.period();
    grid.split = cell_split(std::pow(spec.epsilon, spec.alpha) * grid.Lg);
    grid.nx = res.nx_per_cell;
    grid.ny1 = res.n_y1;
    grid.ny2 = res.n_y2;
    const auto total = [&]() {
        return static_cast<long>(std::max(grid.split.cells, 1)) * grid.nx * grid.ny1 *
               grid.ny2;
    };
    while (total() > res.sample_budget) {
        int* dims[3] = {&grid.nx, &grid.ny1, &grid.ny2};
        std::sort(dims, dims + 3, [](int* a, int* b) { return *a > *b; });
        if (*dims[0] <= 8) break;
        *dims[0] /= 2;
    }
    return grid;
}

namespace {

template <typename Eval>
UnfoldedField unfold_impl(const TriMesh& mesh, const UnfoldGrid& grid, Eval&& value_at) {
    UnfoldedField out;
    out.grid = grid;
    const int C = grid.split.cells, n1 = grid.ny1, n2 = grid.ny2;
    out.vals.assign(static_cast<std::size_t>(C) * n1 * n2, 0.0);
    out.heights.assign(static_cast<std::size_t>(C) * n1, 0.0);
    const double ealpha = std::pow(grid.eps, grid.alpha);
    for (int c = 0; c < C; ++c) {
        const double base = grid.split.cell_start(c);
        for (int i = 0; i < n1; ++i) {
            const double s = base + ealpha * grid.y1_node(i);
            const double top = mesh.top_y(s);
            out.heights[static_cast<std::size_t>(c) * n1 + i] = top / grid.eps;
            for (int j = 0; j < n2; ++j) {
                const double y = (j + 0.5) / n2 * top;
                out.vals[(static_cast<std::size_t>(c) * n1 + i) * n2 + j] =
                    value_at(s, y, &out.clamped);
            }
        }
    }
    return out;
}

} // namespace

UnfoldedField unfold(const FemField& field, const UnfoldGrid& grid) {
    return unfold_impl(field.space->mesh(), grid,
                       [&](double x, double y, long* cl) { return field.eval(x, y, cl); });
}

UnfoldedField unfold_fn(const TriMesh& mesh, const std::function<double(double, double)>& f,
                        const UnfoldGrid& grid) {
    return unfold_impl(mesh, grid,
                       [&](double x, double y, long*) { return f(x, y); });
}

double UnfoldedField::lp_norm(double p) const {
    const int C = grid.split.cells, n1 = grid.ny1, n2 = grid.ny2;
    double acc = 0.0;
    for (int c = 0; c < C; ++c)
        for (int i = 0; i < n1; ++i) {
            const double G = heights[static_cast<std::size_t>(c) * n1 + i];
            const double w = grid.split.period * (grid.Lg / n1) * (G / n2);
            double inner = 0.0;
            for (int j = 0; j < n2; ++j) inner += clamp_pow(at(c, i, j), p);
            acc += w * inner;
        }
    return std::pow(acc, 1.0 / p);
}

UnfoldErrors unfolding_error(const FemField& u_eps, const LimitSolution& u, double p,
                             const UnfoldGrid& grid) {
    const TriMesh& mesh = u_eps.space->mesh();
    UnfoldErrors out;
    const int C = grid.split.cells, n1 = grid.ny1, n2 = grid.ny2, nx = grid.nx;
    const double ealpha = std::pow(grid.eps, grid.alpha);
    double acc_lp = 0.0, acc_d1 = 0.0, acc_d2 = 0.0;

    std::vector<double> vals(static_cast<std::size_t>(n1) * n2);
    std::vector<double> wts(static_cast<std::size_t>(n1) * n2);
    for (int c = 0; c < C; ++c) {
        const double base = grid.split.cell_start(c);
        for (int i = 0; i < n1; ++i) {
            const double s = base + ealpha * grid.y1_node(i);
            const double top = mesh.top_y(s);
            for (int j = 0; j < n2; ++j) {
                const double y = (j + 0.5) / n2 * top;
                std::array<double, 2> gr;
                const double v = u_eps.eval_with_grad(s, y, gr, &out.clamped);
                const std::size_t ij = static_cast<std::size_t>(i) * n2 + j;
                vals[ij] = v;
                const double w = (grid.Lg / n1) * ((top / grid.eps) / n2);
                wts[ij] = w;
                // the unfolded derivatives are x-constant on the cell
                acc_d1 += grid.split.period * w * clamp_pow(ealpha * gr[0], p);
                acc_d2 += grid.split.period * w * clamp_pow(grid.eps * gr[1], p);
            }
        }
        const double wx = grid.split.period / nx;
        for (int m = 0; m < nx; ++m) {
            const double ux = u.eval(grid.x_node(c, m));
            double inner = 0.0;
            for (std::size_t ij = 0; ij < vals.size(); ++ij)
                inner += wts[ij] * clamp_pow(vals[ij] - ux, p);
            acc_lp += wx * inner;
        }
    }

    if (grid.split.lambda_len() > 1e-15) {
        // T u_eps vanishes there; the limit still carries the |Y*| mass
        const double ystar = grid.Lg * (mesh.total_area() / grid.eps);
        const double wl = grid.split.lambda_len() / nx;
        for (int m = 0; m < nx; ++m) {
            const double x = grid.split.lambda_start + (m + 0.5) * grid.split.lambda_len() / nx;
            acc_lp += wl * ystar * clamp_pow(u.eval(x), p);
        }
    }

    out.e_lp = std::pow(acc_lp, 1.0 / p);
    out.e_w1p = std::pow(acc_lp + acc_d1 + acc_d2, 1.0 / p);
    return out;
}

double derivative_exchange_check(const FemField& field, const UnfoldGrid& grid) {
    const TriMesh& mesh = field.space->mesh();
    const double ealpha = std::pow(grid.eps, grid.alpha);
    const double dy1 = 1e-6 * grid.Lg / grid.ny1;
    double worst = 0.0;
    const int ci = std::max(1, grid.split.cells / 8);
    for (int c = 0; c < grid.split.cells; c += ci) {
        const double base = grid.split.cell_start(c);
        for (int i = 0; i < grid.ny1; i += std::max(1, grid.ny1 / 16)) {
            const double y1 = grid.y1_node(i);
            const double s0 = base + ealpha * y1;
            const double top = mesh.top_y(s0);
            for (int j = 0; j < grid.ny2; j += std::max(1, grid.ny2 / 8)) {
                const double y = (j + 0.5) / grid.ny2 * top;
                const double sa = base + ealpha * (y1 - 0.5 * dy1);
                const double sb = base + ealpha * (y1 + 0.5 * dy1);
                if (mesh.locate(sa, y) != mesh.locate(sb, y)) continue;  // straddles an edge
                const double fd = (field.eval(sb, y) - field.eval(sa, y)) / dy1;
                const auto gr = field.eval_grad(s0, y);
                const double rhs = ealpha * gr[0];
                worst = std::max(worst, std::abs(fd - rhs) / std::max(1.0, std::abs(rhs)));
            }
        }
    }
    return worst;
}

StripUnfoldGrid make_strip_grid(const ThinDomainSpec& spec, StripGridResolution res) {
    StripUnfoldGrid grid;
    grid.spec = &spec;
    grid.hsplit = cell_split(std::pow(spec.epsilon, spec.beta) * spec.h.period());
    grid.gsplit = cell_split(std::pow(spec.epsilon, spec.alpha) * spec.g.period());
    grid.nx = res.nx_per_cell;
    grid.ny1 = res.n_y1;
    grid.nz1 = res.n_z1;
    grid.nz2 = res.n_z2;
    return grid;
}

namespace {

template <typename Eval>
StripUnfoldedField unfold_strip_impl(const TriMesh& mesh, const StripUnfoldGrid& grid,
                                     Eval&& value_at) {
    const ThinDomainSpec& spec = *grid.spec;
    StripUnfoldedField out;
    out.grid = grid;
    const int C = grid.hsplit.cells, n1 = grid.ny1, m1 = grid.nz1, m2 = grid.nz2;
    out.vals.assign(static_cast<std::size_t>(C) * n1 * m1 * m2, 0.0);
    const double ea = std::pow(spec.epsilon, spec.alpha);
    const double eb = std::pow(spec.epsilon, spec.beta);
    const double depth = std::pow(spec.epsilon, 1.0 + spec.gamma);
    for (int c = 0; c < C; ++c) {
        const double hbase = grid.hsplit.cell_start(c);
        for (int l = 0; l < m1; ++l) {
            const double z1 = grid.z1_node(l);
            const double stilde = hbase + eb * z1;
            const int k = grid.gsplit.cell_of(stilde);
            if (k < 0) continue;  // T_eps vanishes on the Lambda set
            const double hz = spec.h(z1);
            for (int i = 0; i < n1; ++i) {
                const double X = grid.gsplit.cell_start(k) + ea * grid.y1_node(i);
                const double topX = mesh.top_y(X);
                for (int m = 0; m < m2; ++m) {
                    const double y = topX + depth * (-hz * (m + 0.5) / m2);
                    out.vals[((static_cast<std::size_t>(c) * n1 + i) * m1 + l) * m2 + m] =
                        value_at(X, y, &out.clamped);
                }
            }
        }
    }
    return out;
}

} // namespace

StripUnfoldedField unfold_strip(const FemField& field, const StripUnfoldGrid& grid) {
    return unfold_strip_impl(field.space->mesh(), grid,
                             [&](double x, double y, long* cl) { return field.eval(x, y, cl); });
}

StripUnfoldedField unfold_strip_fn(const TriMesh& mesh,
                                   const std::function<double(double, double)>& f,
                                   const StripUnfoldGrid& grid) {
    return unfold_strip_impl(mesh, grid, [&](double x, double y, long*) { return f(x, y); });
}

double StripUnfoldedField::lp_norm(double p) const {
    const ThinDomainSpec& spec = *grid.spec;
    const int C = grid.hsplit.cells, n1 = grid.ny1, m1 = grid.nz1, m2 = grid.nz2;
    const double Lg = spec.g.period(), Lh = spec.h.period();
    double acc = 0.0;
    for (int c = 0; c < C; ++c)
        for (int l = 0; l < m1; ++l) {
            const double hz = spec.h(grid.z1_node(l));
            const double w = grid.hsplit.period * (Lg / n1) * (Lh / m1) * (hz / m2);
            for (int i = 0; i < n1; ++i)
                for (int m = 0; m < m2; ++m) acc += w * clamp_pow(at(c, i, l, m), p);
        }
    return std::pow(acc, 1.0 / p);
}

double strip_conv_error(const FemField& phi2d, const std::function<double(double)>& phi1d,
                        const StripUnfoldGrid& grid, double p) {
    const ThinDomainSpec& spec = *grid.spec;
    const StripUnfoldedField tg = unfold_strip(phi2d, grid);
    const int C = grid.hsplit.cells, n1 = grid.ny1, m1 = grid.nz1, m2 = grid.nz2;
    const double Lg = spec.g.period(), Lh = spec.h.period();
    double acc = 0.0;
    for (int c = 0; c < C; ++c) {
        for (int mx = 0; mx < grid.nx; ++mx) {
            const double x =
                grid.hsplit.cell_start(c) + (mx + 0.5) * grid.hsplit.period / grid.nx;
            const double ux = phi1d(x);
            const double wx = grid.hsplit.period / grid.nx;
            for (int l = 0; l < m1; ++l) {
                const double hz = spec.h(grid.z1_node(l));
                const double w = wx * (Lg / n1) * (Lh / m1) * (hz / m2);
                for (int i = 0; i < n1; ++i)
                    for (int m = 0; m < m2; ++m)
                        acc += w * clamp_pow(tg.at(c, i, l, m) - ux, p);
            }
        }
    }
    if (grid.hsplit.lambda_len() > 1e-15) {
        const double yh = Lh * profile_average(spec.h, 1.0);  // |Y*_h|
        const double wl = grid.hsplit.lambda_len() / grid.nx;
        for (int mx = 0; mx < grid.nx; ++mx) {
            const double x =
                grid.hsplit.lambda_start + (mx + 0.5) * grid.hsplit.lambda_len() / grid.nx;
            acc += wl * Lg * yh * clamp_pow(phi1d(x), p);
        }
    }
    return std::pow(acc, 1.0 / p);
}

IdentityBundle compute_identity_bundle(const FemField& field, const ThinDomainSpec& spec,
                                       int min_per_cell) {
    const FemSpace& sp = *field.space;
    const TriMesh& mesh = sp.mesh();
    IdentityBundle out;

    const double eps = spec.epsilon;
    const double ea = std::pow(eps, spec.alpha), eb = std::pow(eps, spec.beta);
    const double depth = std::pow(eps, 1.0 + spec.gamma);
    const double eg1 = std::pow(eps, spec.gamma + 1.0);
    const double Lg = spec.g.period(), Lh = spec.h.period();
    const CellSplit gs = cell_split(ea * Lg);
    const CellSplit hs = cell_split(eb * Lh);
    const auto h_at = [&](double x) { return spec.h(x / eb); };

    // element route over the tagged strip
    double tot = 0.0, o1 = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        if (!mesh.strip_tag[t]) continue;
        const auto& tri = mesh.triangles[t];
        double mean = 0.0, xmin = 1e300;
        for (int k = 0; k < 3; ++k) {
            mean += field.values[sp.dof(tri[k])];
            xmin = std::min(xmin, mesh.vertices[tri[k]][0]);
        }
        const double contrib = mesh.elem[t].area * mean / 3.0;
        tot += contrib;
        if (xmin >= gs.lambda_start - 1e-12) o1 += contrib;
    }
    out.lhs_strip = tot / eg1;
    out.o1_mesh = o1 / eg1;

    // sliver between the mesh interface polyline and the analytic-h bottom
    {
        const SQuad q = column_gauss(mesh, 0.0, 1.0, 4, 1);
        double sl = 0.0, sl_o1 = 0.0;
        for (std::size_t i = 0; i < q.s.size(); ++i) {
            const double s = q.s[i];
            const double a = mesh.top_y(s) - depth * h_at(s);
            const double b = mesh.interface_y(s);
            const double v = q.w[i] * line_integral_y(field, s, a, b);
            sl += v;
            if (s >= gs.lambda_start) sl_o1 += v;
        }
        out.lhs_semi = out.lhs_strip + sl / eg1;
        out.o1_semi = out.o1_mesh + sl_o1 / eg1;
    }

    // per-cell Gauss rules in the physical coordinate
    const int nsub_y1 = [&] {
        const int cols_in_cell =
            std::max<int>(1, static_cast<int>(mesh.col_x.size()) / std::max(1, gs.cells));
        return std::max(1, (min_per_cell + 3 * cols_in_cell - 1) / (3 * cols_in_cell));
    }();
    std::vector<SQuad> cellq(gs.cells);
    double rhs_mesh = 0.0, rhs_semi = 0.0;
    for (int k = 0; k < gs.cells; ++k) {
        cellq[k] =
            column_gauss(mesh, gs.cell_start(k), gs.cell_start(k) + gs.period, 3, nsub_y1);
        const SQuad& q = cellq[k];
        for (std::size_t i = 0; i < q.s.size(); ++i) {
            const double s = q.s[i];
            const double top = mesh.top_y(s);
            rhs_mesh += q.w[i] * line_integral_y(field, s, mesh.interface_y(s), top);
            rhs_semi += q.w[i] * line_integral_y(field, s, top - depth * h_at(s), top);
        }
    }
    out.rhs_exact = rhs_mesh / eg1;
    out.rhs_exact_semi = rhs_semi / eg1;

    // simplified (Ystarx01) route: thickness anchored at the macroscopic x
    double middle = 0.0, lam_h = 0.0;
    {
        const SQuad xq = column_gauss(mesh, 0.0, 1.0, 4, 1);
        for (std::size_t ix = 0; ix < xq.s.size(); ++ix) {
            const double x = xq.s[ix];
            const int k = gs.cell_of(x);
            if (k < 0) continue;  // T_eps phi vanishes on Lambda_eps
            const double th = depth * h_at(x);
            const SQuad& q = cellq[k];
            double inner = 0.0;
            for (std::size_t i = 0; i < q.s.size(); ++i) {
                const double top = mesh.top_y(q.s[i]);
                inner += q.w[i] * line_integral_y(field, q.s[i], top - th, top);
            }
            middle += xq.w[ix] * inner;
            if (x >= hs.lambda_start) lam_h += xq.w[ix] * inner;
        }
    }
    // measures: dy2 = dy/eps, dy1 = ds/eps^alpha, prefactor 1/(Lg eps^gamma)
    const double simp_scale = Lg * std::pow(eps, spec.gamma) * eps * ea;
    out.middle_simplified = middle / simp_scale;
    out.lambda_h_term = lam_h / simp_scale;

    // iterated route: z1 per h-cell (physical coordinate), y1 per alpha-cell,
    // exact line integrals in the z2 direction
    double tg = 0.0;
    for (int c = 0; c < hs.cells; ++c) {
        const double hbase = hs.cell_start(c);
        const SQuad zq = column_gauss(mesh, hbase, hbase + hs.period, 4, 1);
        for (std::size_t l = 0; l < zq.s.size(); ++l) {
            const double stilde = zq.s[l];
            const int k = gs.cell_of(stilde);
            if (k < 0) continue;
            const double th = depth * h_at(stilde);  // h(z1) on a complete cell
            const SQuad& q = cellq[k];
            double inner = 0.0;
            for (std::size_t i = 0; i < q.s.size(); ++i) {
                const double top = mesh.top_y(q.s[i]);
                inner += q.w[i] * line_integral_y(field, q.s[i], top - th, top);
            }
            tg += zq.w[l] * inner;
        }
    }
    // measures: dz1 = dx/eps^beta, dy1 = ds/eps^alpha, dz2 = dy/eps^{1+gamma}
    out.tg_term = tg / (Lg * Lh * eb * ea * eg1);
    return out;
}

double uci_r1_term(const FemField& field, const ThinDomainSpec& spec) {
    const FemSpace& sp = *field.space;
    const TriMesh& mesh = sp.mesh();
    const CellSplit gs = cell_split(std::pow(spec.epsilon, spec.alpha) * spec.g.period());
    double acc = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        double mean = 0.0, xmin = 1e300;
        for (int k = 0; k < 3; ++k) {
            mean += std::abs(field.values[sp.dof(tri[k])]);
            xmin = std::min(xmin, mesh.vertices[tri[k]][0]);
        }
        if (xmin >= gs.lambda_start - 1e-12) acc += mesh.elem[t].area * mean / 3.0;
    }
    return acc / spec.epsilon;
}

double uci_o1_term(const FemField& field, const ThinDomainSpec& spec) {
    const FemSpace& sp = *field.space;
    const TriMesh& mesh = sp.mesh();
    const CellSplit gs = cell_split(std::pow(spec.epsilon, spec.alpha) * spec.g.period());
    double acc = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        if (!mesh.strip_tag[t]) continue;
        const auto& tri = mesh.triangles[t];
        double mean = 0.0, xmin = 1e300;
        for (int k = 0; k < 3; ++k) {
            mean += std::abs(field.values[sp.dof(tri[k])]);
            xmin = std::min(xmin, mesh.vertices[tri[k]][0]);
        }
        if (xmin >= gs.lambda_start - 1e-12) acc += mesh.elem[t].area * mean / 3.0;
    }
    return acc / std::pow(spec.epsilon, spec.gamma + 1.0);
}

std::pair<double, double> norm_identity_sides(const FemField& field, const UnfoldGrid& grid,
                                              double p) {
    const FemSpace& sp = *field.space;
    const TriMesh& mesh = sp.mesh();
    const UnfoldedField uf = unfold(field, grid);
    const double lhs = uf.lp_norm(p);

    double acc = 0.0;  // 3-point edge-midpoint rule for |phi|^p over R_0
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        double xmax = -1e300;
        for (int k = 0; k < 3; ++k) xmax = std::max(xmax, mesh.vertices[tri[k]][0]);
        if (xmax > grid.split.lambda_start + 1e-12) continue;
        const double a3 = mesh.elem[t].area / 3.0;
        for (int e = 0; e < 3; ++e) {
            const double vm = 0.5 * (field.values[sp.dof(tri[e])] +
                                     field.values[sp.dof(tri[(e + 1) % 3])]);
            acc += a3 * clamp_pow(vm, p);
        }
    }
    const double rhs = std::pow(grid.Lg / grid.eps, 1.0 / p) * std::pow(acc, 1.0 / p);
    return {lhs, rhs};
}

std::pair<double, double> mean_identity_sides(const FemField& field, const UnfoldGrid& grid) {
    const FemSpace& sp = *field.space;
    const TriMesh& mesh = sp.mesh();
    const UnfoldedField uf = unfold(field, grid);
    const int C = grid.split.cells, n1 = grid.ny1, n2 = grid.ny2;
    double lhs = 0.0;
    for (int c = 0; c < C; ++c)
        for (int i = 0; i < n1; ++i) {
            const double G = uf.heights[static_cast<std::size_t>(c) * n1 + i];
            const double w = grid.split.period * (grid.Lg / n1) * (G / n2);
            for (int j = 0; j < n2; ++j) lhs += w * uf.at(c, i, j);
        }
    lhs /= grid.Lg;

    double acc = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        double xmax = -1e300, mean = 0.0;
        for (int k = 0; k < 3; ++k) {
            xmax = std::max(xmax, mesh.vertices[tri[k]][0]);
            mean += field.values[sp.dof(tri[k])];
        }
        if (xmax > grid.split.lambda_start + 1e-12) continue;
        acc += mesh.elem[t].area * mean / 3.0;
    }
    return {lhs, acc / grid.eps};
}

} // namespace thinhom
