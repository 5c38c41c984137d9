#include "thinhom/thin_spec.hpp"

#include <cmath>

namespace thinhom {

ForcingSpec ForcingSpec::reaction(std::string name, double scale) {
    ForcingSpec s;
    s.kind = Kind::reaction;
    if (name != "constant" && name != "inv_one_plus_u2")
        throw std::invalid_argument("forcing: unknown reaction family '" + name + "'");
    s.reaction_name = std::move(name);
    s.reaction_scale = scale;
    return s;
}

double ForcingSpec::eval_reaction(double u) const {
    if (reaction_name == "constant") return reaction_scale;
    if (reaction_name == "inv_one_plus_u2") return reaction_scale / (1.0 + u * u);
    throw std::logic_error("forcing: eval_reaction on non-reaction spec");
}

double ForcingSpec::reaction_sup() const {
    return std::abs(reaction_scale);
}

double ForcingSpec::reaction_lipschitz() const {
    if (reaction_name == "constant") return 0.0;
    // max |d/du (1+u^2)^-1| = 3*sqrt(3)/8 at u = 1/sqrt(3)
    if (reaction_name == "inv_one_plus_u2")
        return std::abs(reaction_scale) * 3.0 * std::sqrt(3.0) / 8.0;
    throw std::logic_error("forcing: reaction_lipschitz on non-reaction spec");
}

double ThinDomainSpec::strip_depth_factor() const {
    return std::pow(epsilon, gamma) * h.max_value();
}

void ThinDomainSpec::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("spec: epsilon must be positive");
    if (!(alpha > 0.0 && beta > 0.0 && gamma > 0.0))
        throw std::invalid_argument("spec: alpha, beta, gamma must be positive");
    if (!(beta < alpha)) throw std::invalid_argument("spec: requires 0 < beta < alpha");
    if (!(p_exponent > 1.0)) throw std::invalid_argument("spec: p must exceed 1");
    if (strip_depth_factor() > 0.9 * g.min_value())
        throw std::invalid_argument(
            "spec: strip leaves domain, need eps^gamma * h_max <= 0.9 * g_min");
}

} // namespace thinhom
