#include "thinhom/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace thinhom {

namespace {

// Sorted, deduplicated breakpoints in [0, 1] (or [0, span]).
void add_periodic_breaks(std::vector<double>& breaks, double period, double span,
                         const std::vector<double>& interior) {
    for (int k = 0;; ++k) {
        const double base = k * period;
        if (base >= span - 1e-13) break;
        if (k > 0) breaks.push_back(base);
        for (double b : interior) {
            const double t = base + b;
            if (t < span - 1e-13) breaks.push_back(t);
        }
    }
}

std::vector<double> make_columns(std::vector<double> breaks, double span, double delta) {
    breaks.push_back(0.0);
    breaks.push_back(span);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [](double a, double b) { return std::abs(a - b) <= 1e-13; }),
                 breaks.end());
    std::vector<double> cols;
    cols.push_back(0.0);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        const int m = std::max(1, static_cast<int>(std::ceil((b - a) / delta - 1e-12)));
        for (int j = 1; j <= m; ++j) cols.push_back(a + (b - a) * j / m);
        cols.back() = b;  // exact break position
    }
    return cols;
}

} // namespace

void TriMesh::finalize() {
    const int nc = ncols(), nr = rows;
    triangles.clear();
    triangles.reserve(static_cast<std::size_t>(2 * (nc - 1) * nr));
    strip_tag.clear();
    strip_tag.reserve(triangles.capacity());
    for (int j = 0; j + 1 < nc; ++j) {
        for (int i = 0; i < nr; ++i) {
            const int a = vertex_index(j, i), b = vertex_index(j + 1, i);
            const int c = vertex_index(j + 1, i + 1), d = vertex_index(j, i + 1);
            triangles.push_back({a, b, c});
            triangles.push_back({a, c, d});
            const char tag = (i >= interface_row) ? 1 : 0;
            strip_tag.push_back(tag);
            strip_tag.push_back(tag);
        }
    }

    elem.resize(triangles.size());
    mesh_size = 0.0;
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& tri = triangles[t];
        const auto& p0 = vertices[tri[0]];
        const auto& p1 = vertices[tri[1]];
        const auto& p2 = vertices[tri[2]];
        const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
        if (!(det > 0.0)) throw std::runtime_error("mesh: degenerate or mis-oriented triangle");
        ElemGeom& e = elem[t];
        e.area = 0.5 * det;
        e.bx = {(p1[1] - p2[1]) / det, (p2[1] - p0[1]) / det, (p0[1] - p1[1]) / det};
        e.by = {(p2[0] - p1[0]) / det, (p0[0] - p2[0]) / det, (p1[0] - p0[0]) / det};
        for (int k = 0; k < 3; ++k) {
            const auto& q0 = vertices[tri[k]];
            const auto& q1 = vertices[tri[(k + 1) % 3]];
            mesh_size = std::max(mesh_size, std::hypot(q1[0] - q0[0], q1[1] - q0[1]));
        }
    }
}

int TriMesh::column_interval(double x) const {
    const auto it = std::upper_bound(col_x.begin(), col_x.end(), x);
    int j = static_cast<int>(it - col_x.begin()) - 1;
    return std::clamp(j, 0, ncols() - 2);
}

double TriMesh::top_y(double x) const {
    const int j = column_interval(x);
    const double t = (x - col_x[j]) / (col_x[j + 1] - col_x[j]);
    return (1.0 - t) * node_y(j, rows) + t * node_y(j + 1, rows);
}

double TriMesh::interface_y(double x) const {
    const int j = column_interval(x);
    const double t = (x - col_x[j]) / (col_x[j + 1] - col_x[j]);
    return (1.0 - t) * node_y(j, interface_row) + t * node_y(j + 1, interface_row);
}

double TriMesh::total_area() const {
    double s = 0.0;
    for (const auto& e : elem) s += e.area;
    return s;
}

double TriMesh::strip_area() const {
    double s = 0.0;
    for (std::size_t t = 0; t < elem.size(); ++t)
        if (strip_tag[t]) s += elem[t].area;
    return s;
}

int TriMesh::locate(double x, double y, long* clamped) const {
    const double xspan = x_max() - x_min();
    bool moved = false;
    if (x < x_min() || x > x_max()) {
        const double margin = 1e-13 * xspan;
        const double nx = std::clamp(x, x_min() + margin, x_max() - margin);
        moved = moved || (nx != x);
        x = nx;
    }
    const int j = column_interval(x);
    const double t = (x - col_x[j]) / (col_x[j + 1] - col_x[j]);

    // layer boundaries along this vertical fibre
    const auto layer_y = [&](int i) {
        return (1.0 - t) * node_y(j, i) + t * node_y(j + 1, i);
    };
    const double y_bot = layer_y(0), y_top = layer_y(rows);
    if (y < y_bot || y > y_top) {
        const double margin = 1e-13 * (y_top - y_bot);
        const double ny = std::clamp(y, y_bot + margin, y_top - margin);
        moved = moved || (ny != y);
        y = ny;
    }
    if (moved && clamped) ++*clamped;

    int lo = 0, hi = rows;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        if (layer_y(mid) <= y)
            lo = mid;
        else
            hi = mid;
    }
    const int i = lo;

    // quad (a, b, c, d), diagonal a-c; left of a->c means the upper triangle
    const double ax = col_x[j], ay = node_y(j, i);
    const double cx = col_x[j + 1], cy = node_y(j + 1, i + 1);
    const double cross = (cx - ax) * (y - ay) - (cy - ay) * (x - ax);
    const int quad = j * rows + i;
    return 2 * quad + (cross > 0.0 ? 1 : 0);
}

TriMesh build_thin_mesh(const ThinDomainSpec& spec, double target_h) {
    spec.validate();
    if (!(target_h > 0.0)) throw std::invalid_argument("mesh: target_h must be positive");

    const double eps = spec.epsilon;
    const double Pg = std::pow(eps, spec.alpha) * spec.g.period();
    const double Ph = std::pow(eps, spec.beta) * spec.h.period();

    double delta = target_h;
    if (!spec.g.is_constant()) {
        if (target_h > Pg / 8.0 + 1e-15) {
            std::ostringstream os;
            os << "mesh: target_h too coarse for the g oscillation, need target_h <= "
               << Pg / 8.0;
            throw std::invalid_argument(os.str());
        }
        delta = std::min(delta, Pg / 8.0);
    }
    if (!spec.h.is_constant()) {
        if (target_h > Ph / 8.0 + 1e-15) {
            std::ostringstream os;
            os << "mesh: target_h too coarse for the h oscillation, need target_h <= "
               << Ph / 8.0;
            throw std::invalid_argument(os.str());
        }
        delta = std::min(delta, Ph / 8.0);
    }

    std::vector<double> breaks;
    std::vector<double> g_int, h_int;
    for (double b : spec.g.interior_breakpoints()) g_int.push_back(b * std::pow(eps, spec.alpha));
    for (double b : spec.h.interior_breakpoints()) h_int.push_back(b * std::pow(eps, spec.beta));
    add_periodic_breaks(breaks, Pg, 1.0, g_int);
    add_periodic_breaks(breaks, Ph, 1.0, h_int);

    TriMesh mesh;
    mesh.col_x = make_columns(std::move(breaks), 1.0, delta);

    const double depth = std::pow(eps, 1.0 + spec.gamma);  // strip thickness scale
    const int m1 = std::max(2, static_cast<int>(std::ceil(eps * spec.g.max_value() / target_h)));
    const int m2 = std::max(1, static_cast<int>(std::ceil(depth * spec.h.max_value() / target_h)));
    mesh.rows = m1 + m2;
    mesh.interface_row = m1;

    const int nc = mesh.ncols();
    mesh.vertices.resize(static_cast<std::size_t>(nc) * (mesh.rows + 1));
    for (int j = 0; j < nc; ++j) {
        const double x = mesh.col_x[j];
        const double top = eps * spec.g(x / std::pow(eps, spec.alpha));
        const double thick = depth * spec.h(x / std::pow(eps, spec.beta));
        const double iface = top - thick;
        for (int i = 0; i <= m1; ++i)
            mesh.vertices[mesh.vertex_index(j, i)] = {x, iface * i / m1};
        for (int i = 1; i <= m2; ++i)
            mesh.vertices[mesh.vertex_index(j, m1 + i)] = {x, iface + thick * i / m2};
        mesh.vertices[mesh.vertex_index(j, mesh.rows)] = {x, top};
    }
    mesh.finalize();
    return mesh;
}

TriMesh build_cell_mesh(const PeriodicProfile& g, double target_h) {
    if (!(target_h > 0.0)) throw std::invalid_argument("mesh: target_h must be positive");
    if (target_h >= g.min_value())
        throw std::invalid_argument("mesh: target_h >= min(g) cannot resolve the cell height");

    const double L = g.period();
    std::vector<double> breaks = g.interior_breakpoints();

    TriMesh mesh;
    mesh.col_x = make_columns(std::move(breaks), L, target_h);
    const int m = std::max(2, static_cast<int>(std::ceil(g.max_value() / target_h)));
    mesh.rows = m;
    mesh.interface_row = m;  // no strip

    const int nc = mesh.ncols();
    mesh.vertices.resize(static_cast<std::size_t>(nc) * (m + 1));
    for (int j = 0; j < nc; ++j) {
        const double y1 = mesh.col_x[j];
        const double height = g(y1);  // g wraps, so g(L) == g(0) exactly
        for (int i = 0; i <= m; ++i)
            mesh.vertices[mesh.vertex_index(j, i)] = {y1, height * i / m};
    }
    for (int i = 0; i <= m; ++i)
        mesh.periodic_pairs.emplace_back(mesh.vertex_index(0, i), mesh.vertex_index(nc - 1, i));
    mesh.finalize();
    return mesh;
}

void write_mesh(const TriMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("mesh: cannot open '" + path + "' for writing");
    out.precision(17);
    out << "# vertices " << mesh.vertices.size() << "\n";
    for (const auto& v : mesh.vertices) out << v[0] << " " << v[1] << "\n";
    out << "# triangles " << mesh.triangles.size() << "\n";
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        out << tri[0] << " " << tri[1] << " " << tri[2] << " "
            << static_cast<int>(mesh.strip_tag[t]) << "\n";
    }
    if (!mesh.periodic_pairs.empty()) {
        out << "# periodic_pairs " << mesh.periodic_pairs.size() << "\n";
        for (const auto& pr : mesh.periodic_pairs) out << pr.first << " " << pr.second << "\n";
    }
}

} // namespace thinhom
