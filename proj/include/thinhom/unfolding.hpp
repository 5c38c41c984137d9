#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "thinhom/fem.hpp"
#include "thinhom/limit1d.hpp"
#include "thinhom/thin_spec.hpp"

namespace thinhom {

// Integer cell split of (0,1) into complete period cells. cells = N_eps + 1
// in the usual notation; the leftover Lambda set is [cells*period, 1).
struct CellSplit {
    int cells = 0;
    double period = 0.0;
    double lambda_start = 1.0;

    double lambda_len() const { return 1.0 - lambda_start; }
    double cell_start(int k) const { return k * period; }
    // cell index of x, or -1 for the Lambda set
    int cell_of(double x) const;
};

CellSplit cell_split(double period);

struct GridResolution {
    int nx_per_cell = 64;
    int n_y1 = 64;
    int n_y2 = 64;
    long sample_budget = 10'000'000;
};

// Midpoint tensor sampling grid for T_eps: x midpoints per cell, y1
// midpoints on (0, L_g), y2 as fractions of the (mesh) cell height.
struct UnfoldGrid {
    double eps = 0.0, alpha = 1.0, Lg = 1.0;
    CellSplit split;
    int nx = 0, ny1 = 0, ny2 = 0;

    double y1_node(int i) const { return (i + 0.5) * Lg / ny1; }
    double x_node(int cell, int m) const {
        return split.cell_start(cell) + (m + 0.5) * split.period / nx;
    }
};

UnfoldGrid make_unfold_grid(const ThinDomainSpec& spec, GridResolution res = {});

// Materialized T_eps(field). Values are constant in x within a cell, so the
// array is indexed [cell][i_y1][i_y2]; the Lambda block is identically zero
// and carried implicitly.
struct UnfoldedField {
    UnfoldGrid grid;
    std::vector<double> vals;     // cell-major
    std::vector<double> heights;  // [cell][i_y1], mesh top in y2 units
    long clamped = 0;

    double at(int cell, int i, int j) const {
        return vals[(static_cast<std::size_t>(cell) * grid.ny1 + i) * grid.ny2 + j];
    }
    double lp_norm(double p) const;  // over (0,1) x Y*, Lambda zeros included
};

UnfoldedField unfold(const FemField& field, const UnfoldGrid& grid);

// Same sampling applied to an arbitrary function of the physical
// coordinates (for the composition identities T(f(phi)) = f(T(phi))).
UnfoldedField unfold_fn(const TriMesh& mesh, const std::function<double(double, double)>& f,
                        const UnfoldGrid& grid);

struct UnfoldErrors {
    double e_lp = 0.0;
    double e_w1p = 0.0;
    long clamped = 0;
};

// || T_eps u_eps - u || on the sample grid; the W^{1,p} version adds the
// unfolded derivative terms eps^alpha T(du/dx) and eps T(du/dy) (the x-only
// limit contributes no Y*-derivatives).
UnfoldErrors unfolding_error(const FemField& u_eps, const LimitSolution& u, double p,
                             const UnfoldGrid& grid);

// Max |finite-difference d/dy1 of T(u) - eps^alpha T(du/dx)| over interior
// sample pairs that stay inside one element.
double derivative_exchange_check(const FemField& field, const UnfoldGrid& grid);

struct StripGridResolution {
    int nx_per_cell = 16;
    int n_y1 = 24;
    int n_z1 = 48;
    int n_z2 = 12;
};

// Sampling grid for the iterated operator T_eps^g on
// (0,1) x (0,L_g) x Y*_h, Y*_h = {0 < z1 < L_h, -h(z1) < z2 < 0}.
struct StripUnfoldGrid {
    const ThinDomainSpec* spec = nullptr;
    CellSplit hsplit;  // period eps^beta * L_h
    CellSplit gsplit;  // period eps^alpha * L_g
    int nx = 0, ny1 = 0, nz1 = 0, nz2 = 0;

    double z1_node(int l) const { return (l + 0.5) * spec->h.period() / nz1; }
    double y1_node(int i) const { return (i + 0.5) * spec->g.period() / ny1; }
};

StripUnfoldGrid make_strip_grid(const ThinDomainSpec& spec, StripGridResolution res = {});

// Materialized T_eps^g(T_eps field); x-constant per h-cell, Lambda^h block
// implicitly zero. The y2 anchor is the mesh top polyline, the z2 extent the
// analytic h.
struct StripUnfoldedField {
    StripUnfoldGrid grid;
    std::vector<double> vals;  // [hcell][i_y1][i_z1][i_z2]
    long clamped = 0;

    double at(int hc, int i, int l, int m) const {
        return vals[((static_cast<std::size_t>(hc) * grid.ny1 + i) * grid.nz1 + l) * grid.nz2 +
                    m];
    }
    double lp_norm(double p) const;
};

StripUnfoldedField unfold_strip(const FemField& field, const StripUnfoldGrid& grid);

StripUnfoldedField unfold_strip_fn(const TriMesh& mesh,
                                   const std::function<double(double, double)>& f,
                                   const StripUnfoldGrid& grid);

// || T^g(T phi2d) - phi1d(x) ||_Lp over (0,1) x (0,L_g) x Y*_h (Lambda^h
// block keeps phi1d), for the test-function convergence checks.
double strip_conv_error(const FemField& phi2d, const std::function<double(double)>& phi1d,
                        const StripUnfoldGrid& grid, double p);

// All concentrated-integral identity terms for one field, quadrature-exact
// on the discrete geometry (mesh polylines; analytic h for the iterated
// route). See the per-residual accessors for the bookkeeping.
struct IdentityBundle {
    double lhs_strip = 0.0;    // (1/e^{g+1}) int_{O_mesh} phi, element route
    double o1_mesh = 0.0;      //   ... restricted to x >= lambda_alpha
    double rhs_exact = 0.0;    // unfolded route, thickness = mesh strip at the unfolded point
    double lhs_semi = 0.0;     // strip with analytic-h thickness (elements + sliver)
    double o1_semi = 0.0;
    double rhs_exact_semi = 0.0;   // analytic h at the unfolded point
    double middle_simplified = 0.0;  // analytic h at the macroscopic x (Ystarx01 form)
    double lambda_h_term = 0.0;    // (1/(e^g Lg)) int_{Lambda_h x Y*_simp} T phi
    double tg_term = 0.0;          // (1/(Lg Lh)) int T^g(T phi)

    double first_unf_residual() const { return std::abs(lhs_strip - rhs_exact - o1_mesh); }
    double igualdade_residual() const {
        return std::abs(tg_term - (middle_simplified - lambda_h_term));
    }
    double iteration_residual() const {
        return std::abs(lhs_semi - (tg_term + lambda_h_term + o1_semi));
    }
    double propaux_gap() const { return std::abs(rhs_exact_semi - middle_simplified); }
    double scale() const { return std::max(std::abs(lhs_strip), 1e-300); }
};

// min_per_cell: lower bound on quadrature points per cell and dimension.
IdentityBundle compute_identity_bundle(const FemField& field, const ThinDomainSpec& spec,
                                       int min_per_cell = 64);

// (1/eps) int_{R_1^eps} |phi| (vertex rule over the Lambda columns)
double uci_r1_term(const FemField& field, const ThinDomainSpec& spec);
// (1/eps^{gamma+1}) int_{O_1^eps} |phi|
double uci_o1_term(const FemField& field, const ThinDomainSpec& spec);

// Sampled-norm side and element side of the unfolding norm identity
// ||T phi||_p = (Lg/eps)^{1/p} ||phi||_{Lp(R_0)}; returns (lhs, rhs).
std::pair<double, double> norm_identity_sides(const FemField& field, const UnfoldGrid& grid,
                                              double p);
// Mean identity (1/Lg) int T phi  vs  (1/eps) int_{R_0} phi.
std::pair<double, double> mean_identity_sides(const FemField& field, const UnfoldGrid& grid);

} // namespace thinhom
