#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "thinhom/profile.hpp"

namespace thinhom {

// Forcing for the 2D problem. The linear problem takes f(x) = c0 + c1*x
// concentrated on the strip; the semilinear problem takes a bounded C^2
// reaction u -> f(u) from a small named family.
struct ForcingSpec {
    enum class Kind { none, x_dependent, reaction };

    Kind kind = Kind::none;

    // x_dependent: f(x) = c0 + c1 * x
    double c0 = 0.0;
    double c1 = 0.0;

    // reaction families: "constant" f(u) = scale, "inv_one_plus_u2"
    // f(u) = scale / (1 + u^2)
    std::string reaction_name;
    double reaction_scale = 1.0;

    static ForcingSpec none() { return {}; }
    static ForcingSpec affine(double c0, double c1 = 0.0) {
        ForcingSpec s;
        s.kind = Kind::x_dependent;
        s.c0 = c0;
        s.c1 = c1;
        return s;
    }
    static ForcingSpec reaction(std::string name, double scale = 1.0);

    double eval_x(double x) const { return c0 + c1 * x; }
    double eval_reaction(double u) const;

    // sup |f| and sup |f'| of the reaction family
    double reaction_sup() const;
    double reaction_lipschitz() const;
};

// The tuple defining R^eps, O^eps and the weak problem.
struct ThinDomainSpec {
    double epsilon = 0.1;
    double alpha = 1.0;
    double beta = 0.5;
    double gamma = 1.0;
    PeriodicProfile g = PeriodicProfile::constant(1.0);
    PeriodicProfile h = PeriodicProfile::constant(1.0);
    double p_exponent = 2.0;
    ForcingSpec forcing = ForcingSpec::none();

    // eps^gamma * h_max; the strip occupies (eps*(g - eps^gamma h), eps*g).
    double strip_depth_factor() const;

    // Throws if 0 < beta < alpha fails, p <= 1, eps <= 0, or the strip
    // guard eps^gamma * h_max <= 0.9 * g_min is violated.
    void validate() const;

    double p_conjugate() const { return p_exponent / (p_exponent - 1.0); }
};

} // namespace thinhom
