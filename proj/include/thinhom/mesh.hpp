#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "thinhom/thin_spec.hpp"

namespace thinhom {

// Conforming P1 triangulation of either the thin domain R^eps (strip
// resolved, interface-aligned) or the periodic cell Y*. Built as a
// structured layered mesh: vertical columns of equal node count, each
// quad between neighbouring columns cut into two triangles along the
// lower-left/upper-right diagonal. The structure (col_x, rows) is kept
// for O(log) point location and for the polyline evaluators the
// verifiers quadrature against.
struct TriMesh {
    std::vector<std::array<double, 2>> vertices;
    std::vector<std::array<int, 3>> triangles;       // CCW
    std::vector<char> strip_tag;                     // per triangle, inside discrete O^eps
    std::vector<std::pair<int, int>> periodic_pairs; // (left vertex, right vertex)
    double mesh_size = 0.0;                          // max edge length

    // structured metadata
    std::vector<double> col_x;  // ascending column positions
    int rows = 0;               // layer intervals per column
    int interface_row = 0;      // strip starts at this row (== rows if no strip)

    // per-triangle P1 geometry: area and basis gradients
    struct ElemGeom {
        double area;
        std::array<double, 3> bx, by;
    };
    std::vector<ElemGeom> elem;

    int ncols() const { return static_cast<int>(col_x.size()); }
    int nodes_per_col() const { return rows + 1; }
    int vertex_index(int col, int row) const { return col * (rows + 1) + row; }
    double node_y(int col, int row) const { return vertices[vertex_index(col, row)][1]; }

    double x_min() const { return col_x.front(); }
    double x_max() const { return col_x.back(); }

    // Piecewise-linear top and strip-interface polylines as functions of x.
    double top_y(double x) const;
    double interface_y(double x) const;

    double total_area() const;
    double strip_area() const;

    // Locates the triangle containing (x, y); coordinates are clamped into
    // the mesh by a relative 1e-13 margin, and *clamped is incremented when
    // that actually moved the point. Returns the triangle index.
    int locate(double x, double y, long* clamped = nullptr) const;

    // column interval index for x (clamped)
    int column_interval(double x) const;

    void finalize();  // fills elem[] and mesh_size; called by the builders
};

// Mesh of R^eps with the strip O^eps resolved: x-columns aligned to both
// oscillation periods (and any piecewise-linear profile breakpoints), each
// column split at the strip interface. Throws if target_h cannot resolve
// an oscillating profile (needs >= 8 segments per period) or the strip
// guard fails; the exception message carries the required size.
TriMesh build_thin_mesh(const ThinDomainSpec& spec, double target_h);

// Mesh of the cell Y* = {0 < y1 < L_g, 0 < y2 < g(y1)} with periodic
// vertex pairs between the y1 = 0 and y1 = L_g columns.
TriMesh build_cell_mesh(const PeriodicProfile& g, double target_h);

// Plain-text export, one record per line.
void write_mesh(const TriMesh& mesh, const std::string& path);

} // namespace thinhom
