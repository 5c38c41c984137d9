#include "thinhom/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace thinhom {

namespace {

// Nodes/weights on [-1, 1].
struct Rule {
    const double* x;
    const double* w;
    int n;
};

const double g2x[] = {-0.5773502691896257, 0.5773502691896257};
const double g2w[] = {1.0, 1.0};
const double g3x[] = {-0.7745966692414834, 0.0, 0.7745966692414834};
const double g3w[] = {0.5555555555555556, 0.8888888888888888, 0.5555555555555556};
const double g4x[] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                      0.8611363115940526};
const double g4w[] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                      0.3478548451374538};
const double g5x[] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                      0.5384693101056831, 0.9061798459386640};
const double g5w[] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                      0.4786286704993665, 0.2369268850561891};

Rule rule_of(int order) {
    switch (order) {
        case 2: return {g2x, g2w, 2};
        case 3: return {g3x, g3w, 3};
        case 4: return {g4x, g4w, 4};
        case 5: return {g5x, g5w, 5};
        default: throw std::invalid_argument("gauss_nodes: order must be 2..5");
    }
}

double composite5(const std::function<double(double)>& f, double a, double b, int pieces) {
    const double h = (b - a) / pieces;
    double s = 0.0;
    for (int k = 0; k < pieces; ++k) {
        const double m = a + (k + 0.5) * h;
        double local = 0.0;
        for (int q = 0; q < 5; ++q) local += g5w[q] * f(m + 0.5 * h * g5x[q]);
        s += 0.5 * h * local;
    }
    return s;
}

} // namespace

double gauss5(const std::function<double(double)>& f, double a, double b) {
    return composite5(f, a, b, 1);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int max_levels) {
    if (!(b > a)) return 0.0;
    double prev = composite5(f, a, b, 1);
    int pieces = 2;
    for (int level = 0; level < max_levels; ++level, pieces *= 2) {
        const double cur = composite5(f, a, b, pieces);
        const double scale = std::max({std::abs(cur), std::abs(prev), 1e-300});
        if (std::abs(cur - prev) <= rel_tol * scale) return cur;
        prev = cur;
    }
    return prev;
}

double integrate_on_breaks(const std::function<double(double)>& f,
                           const std::vector<double>& breaks, double rel_tol,
                           int max_levels) {
    if (breaks.size() < 2) throw std::invalid_argument("integrate_on_breaks: need >= 2 breaks");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        s += integrate_adaptive(f, breaks[i], breaks[i + 1], rel_tol, max_levels);
    return s;
}

void gauss_nodes(int order, double a, double b, std::vector<double>& nodes,
                 std::vector<double>& weights) {
    const Rule r = rule_of(order);
    nodes.resize(r.n);
    weights.resize(r.n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < r.n; ++i) {
        nodes[i] = mid + half * r.x[i];
        weights[i] = half * r.w[i];
    }
}

} // namespace thinhom
