#pragma once

#include <array>
#include <functional>
#include <vector>

#include "thinhom/mesh.hpp"
#include "thinhom/sparse.hpp"

namespace thinhom {

// P1 space over a TriMesh. Periodic meshes fold the right-column vertices
// onto their left partners, so paired vertices share one degree of freedom.
class FemSpace {
public:
    explicit FemSpace(const TriMesh& mesh, bool periodic = false);

    const TriMesh& mesh() const { return *mesh_; }
    int ndof() const { return ndof_; }
    int dof(int vertex) const { return v2d_[vertex]; }
    bool periodic() const { return periodic_; }

    // vertex-rule lumped weights per dof (sum of area/3 over incident triangles)
    const std::vector<double>& lumped() const { return lumped_; }
    double area() const { return area_; }

    const CsrMatrix& pattern() const { return pattern_; }
    // per-triangle 3x3 slots into pattern().val
    const std::vector<std::array<int, 9>>& slots() const { return slots_; }

private:
    const TriMesh* mesh_;
    bool periodic_;
    std::vector<int> v2d_;
    int ndof_ = 0;
    std::vector<double> lumped_;
    double area_ = 0.0;
    CsrMatrix pattern_;
    std::vector<std::array<int, 9>> slots_;
};

// Nodal coefficient vector over a FemSpace; evaluation is the P1 interpolant.
struct FemField {
    const FemSpace* space = nullptr;
    std::vector<double> values;  // length space->ndof()

    FemField() = default;
    explicit FemField(const FemSpace& sp, double fill = 0.0)
        : space(&sp), values(sp.ndof(), fill) {}

    double eval(double x, double y, long* clamped = nullptr) const;
    std::array<double, 2> grad_in_tri(int tri) const;
    std::array<double, 2> eval_grad(double x, double y, long* clamped = nullptr) const;
    double eval_with_grad(double x, double y, std::array<double, 2>& grad,
                          long* clamped = nullptr) const;

    // interpolate a smooth function at the vertices
    static FemField interpolate(const FemSpace& sp,
                                const std::function<double(double, double)>& f);
};

struct AsmOptions {
    double p = 2.0;
    bool mass = true;                         // include |u|^{p-2} u term
    std::array<double, 2> grad_shift{0, 0};   // cell problem uses (1, 0)
    double delta = 0.0;                       // Jacobian regularization only
};

// r_i = int |G|^{p-2} G . grad(phi_i) + |u|^{p-2} u phi_i - b_i with
// G = grad(u) + grad_shift; gradient term exact per element, mass by the
// vertex rule. load may be null (treated as zero).
std::vector<double> assemble_residual(const FemSpace& sp, const AsmOptions& opts,
                                      const std::vector<double>& u,
                                      const std::vector<double>* load = nullptr);

// Newton linearization of the residual. Throws for p < 2 with delta == 0.
// The matrix keeps the space's symmetric pattern.
void assemble_jacobian(const FemSpace& sp, const AsmOptions& opts,
                       const std::vector<double>& u, CsrMatrix& out);

// Convex potential (1/p) int |G|^p + |u|^p - <b, u>; its gradient is the residual.
double energy(const FemSpace& sp, const AsmOptions& opts, const std::vector<double>& u,
              const std::vector<double>* load = nullptr);

// b_i = int F phi_i over the whole mesh, 3-point edge-midpoint rule
// (exact for F piecewise quadratic per element).
std::vector<double> assemble_bulk_load(const FemSpace& sp,
                                       const std::function<double(double, double)>& F);

double lp_norm(const FemSpace& sp, const std::vector<double>& u, double p);
double w1p_seminorm(const FemSpace& sp, const std::vector<double>& u, double p);
double w1p_norm(const FemSpace& sp, const std::vector<double>& u, double p);

// Exact integral of the P1 interpolant along the vertical fibre x = s from
// ya to yb (endpoints clamped into the mesh). The fibre crosses each layer
// quad's diagonal once, so the interpolant is integrated piece by piece.
double line_integral_y(const FemField& f, double s, double ya, double yb);

// (1/height) * int_0^top u(x, .) dy on the thin mesh
double section_average(const FemField& f, double x);

} // namespace thinhom
