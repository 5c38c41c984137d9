#include "thinhom/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "thinhom/kernels.hpp"

namespace thinhom {

namespace {
// below this |grad|^2 the rank-one Jacobian term is taken as 0 (the
// 0 * inf = 0 convention on zero-gradient elements)
constexpr double kTinyG2 = 1e-280;
} // namespace

FemSpace::FemSpace(const TriMesh& mesh, bool periodic) : mesh_(&mesh), periodic_(periodic) {
    const int nv = static_cast<int>(mesh.vertices.size());
    v2d_.resize(nv);
    for (int v = 0; v < nv; ++v) v2d_[v] = v;
    if (periodic) {
        if (mesh.periodic_pairs.empty())
            throw std::invalid_argument("fem: periodic space needs periodic_pairs");
        for (const auto& pr : mesh.periodic_pairs) v2d_[pr.second] = pr.first;
        // compress to contiguous dof numbering
        std::vector<int> renum(nv, -1);
        int next = 0;
        for (int v = 0; v < nv; ++v)
            if (v2d_[v] == v) renum[v] = next++;
        for (int v = 0; v < nv; ++v) v2d_[v] = renum[v2d_[v]];
        ndof_ = next;
    } else {
        ndof_ = nv;
    }

    lumped_.assign(ndof_, 0.0);
    area_ = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const double a3 = mesh.elem[t].area / 3.0;
        area_ += mesh.elem[t].area;
        for (int k = 0; k < 3; ++k) lumped_[v2d_[mesh.triangles[t][k]]] += a3;
    }

    // symmetric pattern from triangle connectivity
    std::vector<std::vector<int>> adj(ndof_);
    for (const auto& tri : mesh.triangles)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) adj[v2d_[tri[a]]].push_back(v2d_[tri[b]]);
    pattern_.n = ndof_;
    pattern_.ptr.assign(ndof_ + 1, 0);
    for (int r = 0; r < ndof_; ++r) {
        auto& row = adj[r];
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        pattern_.ptr[r + 1] = pattern_.ptr[r] + static_cast<int>(row.size());
    }
    pattern_.idx.reserve(pattern_.ptr[ndof_]);
    for (int r = 0; r < ndof_; ++r)
        pattern_.idx.insert(pattern_.idx.end(), adj[r].begin(), adj[r].end());
    pattern_.val.assign(pattern_.idx.size(), 0.0);

    slots_.resize(mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                slots_[t][3 * a + b] = pattern_.slot(v2d_[tri[a]], v2d_[tri[b]]);
    }
}

double FemField::eval(double x, double y, long* clamped) const {
    const TriMesh& m = space->mesh();
    const int t = m.locate(x, y, clamped);
    const auto& tri = m.triangles[t];
    const auto& e = m.elem[t];
    const auto& p0 = m.vertices[tri[0]];
    double out = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double lambda =
            (k == 0 ? 1.0 : 0.0) + e.bx[k] * (x - p0[0]) + e.by[k] * (y - p0[1]);
        out += lambda * values[space->dof(tri[k])];
    }
    return out;
}

std::array<double, 2> FemField::grad_in_tri(int t) const {
    const TriMesh& m = space->mesh();
    const auto& tri = m.triangles[t];
    const auto& e = m.elem[t];
    double gx = 0.0, gy = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double uk = values[space->dof(tri[k])];
        gx += uk * e.bx[k];
        gy += uk * e.by[k];
    }
    return {gx, gy};
}

std::array<double, 2> FemField::eval_grad(double x, double y, long* clamped) const {
    return grad_in_tri(space->mesh().locate(x, y, clamped));
}

double FemField::eval_with_grad(double x, double y, std::array<double, 2>& grad,
                                long* clamped) const {
    const TriMesh& m = space->mesh();
    const int t = m.locate(x, y, clamped);
    const auto& tri = m.triangles[t];
    const auto& e = m.elem[t];
    const auto& p0 = m.vertices[tri[0]];
    double out = 0.0, gx = 0.0, gy = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double uk = values[space->dof(tri[k])];
        const double lambda =
            (k == 0 ? 1.0 : 0.0) + e.bx[k] * (x - p0[0]) + e.by[k] * (y - p0[1]);
        out += lambda * uk;
        gx += uk * e.bx[k];
        gy += uk * e.by[k];
    }
    grad = {gx, gy};
    return out;
}

FemField FemField::interpolate(const FemSpace& sp,
                               const std::function<double(double, double)>& f) {
    FemField out(sp);
    const auto& verts = sp.mesh().vertices;
    for (std::size_t v = 0; v < verts.size(); ++v)
        out.values[sp.dof(static_cast<int>(v))] = f(verts[v][0], verts[v][1]);
    return out;
}

namespace {

// per-element |grad u + shift|^2 and components
void element_gradients(const FemSpace& sp, const AsmOptions& opts,
                       const std::vector<double>& u, std::vector<double>& gx,
                       std::vector<double>& gy, std::vector<double>& g2) {
    const TriMesh& m = sp.mesh();
    const std::size_t nt = m.triangles.size();
    gx.resize(nt);
    gy.resize(nt);
    g2.resize(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        const auto& tri = m.triangles[t];
        const auto& e = m.elem[t];
        double ax = opts.grad_shift[0], ay = opts.grad_shift[1];
        for (int k = 0; k < 3; ++k) {
            const double uk = u[sp.dof(tri[k])];
            ax += uk * e.bx[k];
            ay += uk * e.by[k];
        }
        gx[t] = ax;
        gy[t] = ay;
        g2[t] = ax * ax + ay * ay;
    }
}

} // namespace

std::vector<double> assemble_residual(const FemSpace& sp, const AsmOptions& opts,
                                      const std::vector<double>& u,
                                      const std::vector<double>* load) {
    if (!(opts.p > 1.0)) throw std::invalid_argument("fem: p must exceed 1");
    if (static_cast<int>(u.size()) != sp.ndof())
        throw std::invalid_argument("fem: field/space dimension mismatch");
    const TriMesh& m = sp.mesh();
    const std::size_t nt = m.triangles.size();

    std::vector<double> gx, gy, g2, s(nt);
    element_gradients(sp, opts, u, gx, gy, g2);
    kern::pow_nonneg(g2.data(), s.data(), nt, 0.5 * (opts.p - 2.0));
    if (opts.p < 2.0)
        for (std::size_t t = 0; t < nt; ++t)
            if (g2[t] < kTinyG2) s[t] = 0.0;

    std::vector<double> r(sp.ndof(), 0.0);
    for (std::size_t t = 0; t < nt; ++t) {
        const auto& tri = m.triangles[t];
        const auto& e = m.elem[t];
        const double c = e.area * s[t];
        for (int k = 0; k < 3; ++k)
            r[sp.dof(tri[k])] += c * (gx[t] * e.bx[k] + gy[t] * e.by[k]);
    }

    if (opts.mass) {
        std::vector<double> mu(sp.ndof());
        kern::signed_abs_pow(u.data(), mu.data(), u.size(), opts.p - 2.0);
        const auto& w = sp.lumped();
        for (int i = 0; i < sp.ndof(); ++i) r[i] += w[i] * mu[i];
    }
    if (load) {
        if (load->size() != r.size()) throw std::invalid_argument("fem: load size mismatch");
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= (*load)[i];
    }
    return r;
}

void assemble_jacobian(const FemSpace& sp, const AsmOptions& opts,
                       const std::vector<double>& u, CsrMatrix& out) {
    if (opts.p < 2.0 && opts.delta <= 0.0)
        throw std::invalid_argument("fem: jacobian needs p >= 2 or delta > 0");
    if (static_cast<int>(u.size()) != sp.ndof())
        throw std::invalid_argument("fem: field/space dimension mismatch");
    const TriMesh& m = sp.mesh();
    const std::size_t nt = m.triangles.size();

    std::vector<double> gx, gy, g2;
    element_gradients(sp, opts, u, gx, gy, g2);
    if (opts.delta > 0.0) {
        const double d2 = opts.delta * opts.delta;
        for (auto& v : g2) v += d2;
    }
    std::vector<double> kap(nt), tau(nt);
    kern::pow_nonneg(g2.data(), kap.data(), nt, 0.5 * (opts.p - 2.0));
    kern::pow_nonneg(g2.data(), tau.data(), nt, 0.5 * (opts.p - 4.0));
    for (std::size_t t = 0; t < nt; ++t) {
        if (g2[t] < kTinyG2) {
            tau[t] = 0.0;
            if (opts.p != 2.0) kap[t] = 0.0;
        } else {
            tau[t] *= (opts.p - 2.0);
        }
    }

    out = sp.pattern();
    out.zero_values();
    const auto& slots = sp.slots();
    for (std::size_t t = 0; t < nt; ++t) {
        const auto& e = m.elem[t];
        const double A = e.area;
        double gb[3];  // G . grad(phi_k)
        for (int k = 0; k < 3; ++k) gb[k] = gx[t] * e.bx[k] + gy[t] * e.by[k];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const double v = A * (kap[t] * (e.bx[a] * e.bx[b] + e.by[a] * e.by[b]) +
                                      tau[t] * gb[a] * gb[b]);
                out.val[slots[t][3 * a + b]] += v;
            }
    }

    if (opts.mass) {
        std::vector<double> au(sp.ndof()), mu(sp.ndof());
        for (int i = 0; i < sp.ndof(); ++i) au[i] = std::abs(u[i]);
        kern::pow_nonneg(au.data(), mu.data(), au.size(), opts.p - 2.0);
        const auto& w = sp.lumped();
        for (int i = 0; i < sp.ndof(); ++i) {
            double d = (opts.p - 1.0) * mu[i];
            if (!(std::isfinite(d))) d = 0.0;  // |0|^(p-2) when p < 2 with delta > 0
            out.val[out.slot(i, i)] += w[i] * d;
        }
    }
}

double energy(const FemSpace& sp, const AsmOptions& opts, const std::vector<double>& u,
              const std::vector<double>* load) {
    const TriMesh& m = sp.mesh();
    const std::size_t nt = m.triangles.size();
    std::vector<double> gx, gy, g2, s(nt), areas(nt);
    element_gradients(sp, opts, u, gx, gy, g2);
    kern::pow_nonneg(g2.data(), s.data(), nt, 0.5 * opts.p);
    for (std::size_t t = 0; t < nt; ++t) areas[t] = m.elem[t].area;
    double E = kern::dot(s.data(), areas.data(), nt) / opts.p;
    if (opts.mass)
        E += kern::weighted_abs_pow_sum(u.data(), sp.lumped().data(), u.size(), opts.p) / opts.p;
    if (load) E -= kern::dot(load->data(), u.data(), u.size());
    return E;
}

std::vector<double> assemble_bulk_load(const FemSpace& sp,
                                       const std::function<double(double, double)>& F) {
    const TriMesh& m = sp.mesh();
    std::vector<double> b(sp.ndof(), 0.0);
    for (std::size_t t = 0; t < m.triangles.size(); ++t) {
        const auto& tri = m.triangles[t];
        const double c = m.elem[t].area / 3.0;
        for (int e = 0; e < 3; ++e) {
            const auto& p = m.vertices[tri[e]];
            const auto& q = m.vertices[tri[(e + 1) % 3]];
            const double fm = F(0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]));
            b[sp.dof(tri[e])] += 0.5 * c * fm;
            b[sp.dof(tri[(e + 1) % 3])] += 0.5 * c * fm;
        }
    }
    return b;
}

double lp_norm(const FemSpace& sp, const std::vector<double>& u, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("fem: norm needs p >= 1");
    return std::pow(kern::weighted_abs_pow_sum(u.data(), sp.lumped().data(), u.size(), p),
                    1.0 / p);
}

double w1p_seminorm(const FemSpace& sp, const std::vector<double>& u, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("fem: norm needs p >= 1");
    const TriMesh& m = sp.mesh();
    const std::size_t nt = m.triangles.size();
    std::vector<double> gx, gy, g2, s(nt), areas(nt);
    element_gradients(sp, AsmOptions{}, u, gx, gy, g2);
    kern::pow_nonneg(g2.data(), s.data(), nt, 0.5 * p);
    for (std::size_t t = 0; t < nt; ++t) areas[t] = m.elem[t].area;
    return std::pow(kern::dot(s.data(), areas.data(), nt), 1.0 / p);
}

double w1p_norm(const FemSpace& sp, const std::vector<double>& u, double p) {
    const double a = lp_norm(sp, u, p), b = w1p_seminorm(sp, u, p);
    return std::pow(std::pow(a, p) + std::pow(b, p), 1.0 / p);
}

double line_integral_y(const FemField& f, double s, double ya, double yb) {
    if (yb <= ya) return yb == ya ? 0.0 : -line_integral_y(f, s, yb, ya);
    const FemSpace& sp = *f.space;
    const TriMesh& m = sp.mesh();
    const double span = m.x_max() - m.x_min();
    s = std::clamp(s, m.x_min() + 1e-13 * span, m.x_max() - 1e-13 * span);
    const int j = m.column_interval(s);
    const double t = (s - m.col_x[j]) / (m.col_x[j + 1] - m.col_x[j]);

    const auto layer_y = [&](int i) {
        return (1.0 - t) * m.node_y(j, i) + t * m.node_y(j + 1, i);
    };
    const auto layer_v = [&](int i) {
        return (1.0 - t) * f.values[sp.dof(m.vertex_index(j, i))] +
               t * f.values[sp.dof(m.vertex_index(j + 1, i))];
    };
    // point on the quad diagonal (j,i)-(j+1,i+1) at x = s
    const auto diag_y = [&](int i) {
        return (1.0 - t) * m.node_y(j, i) + t * m.node_y(j + 1, i + 1);
    };
    const auto diag_v = [&](int i) {
        return (1.0 - t) * f.values[sp.dof(m.vertex_index(j, i))] +
               t * f.values[sp.dof(m.vertex_index(j + 1, i + 1))];
    };

    const double y_bot = layer_y(0), y_top = layer_y(m.rows);
    ya = std::clamp(ya, y_bot, y_top);
    yb = std::clamp(yb, y_bot, y_top);
    if (yb <= ya) return 0.0;

    double acc = 0.0;
    double py = layer_y(0), pv = layer_v(0);
    for (int i = 0; i < m.rows; ++i) {
        // two linear pieces per layer: up to the diagonal, then to the next layer
        const double ys[2] = {diag_y(i), layer_y(i + 1)};
        const double vs[2] = {diag_v(i), layer_v(i + 1)};
        for (int hseg = 0; hseg < 2; ++hseg) {
            const double qy = ys[hseg], qv = vs[hseg];
            const double lo = std::max(ya, py), hi = std::min(yb, qy);
            if (hi > lo && qy > py) {
                const double vlo = pv + (qv - pv) * (lo - py) / (qy - py);
                const double vhi = pv + (qv - pv) * (hi - py) / (qy - py);
                acc += 0.5 * (vlo + vhi) * (hi - lo);
            }
            py = qy;
            pv = qv;
        }
        if (py >= yb) break;
    }
    return acc;
}

double section_average(const FemField& f, double x) {
    const TriMesh& m = f.space->mesh();
    const double top = m.top_y(x);
    return line_integral_y(f, x, 0.0, top) / top;
}

} // namespace thinhom
