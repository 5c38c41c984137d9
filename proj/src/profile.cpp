#include "thinhom/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "thinhom/quadrature.hpp"

namespace thinhom {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

PeriodicProfile::PeriodicProfile(double period, Family family)
    : period_(period), family_(std::move(family)) {
    if (!(period_ > 0.0)) throw std::invalid_argument("profile: period must be positive");

    if (const auto* c = std::get_if<Constant>(&family_)) {
        if (!(c->value > 0.0)) throw std::invalid_argument("profile: constant must be positive");
        min_ = max_ = c->value;
        lipschitz_ = 0.0;
    } else if (const auto* cs = std::get_if<Cosine>(&family_)) {
        if (!(std::abs(cs->amplitude) < cs->mean))
            throw std::invalid_argument("profile: cosine needs |b| < a for positivity");
        if (cs->harmonics < 1) throw std::invalid_argument("profile: harmonics must be >= 1");
        min_ = cs->mean - std::abs(cs->amplitude);
        max_ = cs->mean + std::abs(cs->amplitude);
        lipschitz_ = std::abs(cs->amplitude) * kTwoPi * cs->harmonics / period_;
    } else {
        const auto& pw = std::get<PiecewiseLinear>(family_);
        const auto& bp = pw.breakpoints;
        const auto& vv = pw.values;
        if (bp.size() < 2 || bp.size() != vv.size())
            throw std::invalid_argument("profile: breakpoints/values size mismatch");
        if (bp.front() != 0.0 || std::abs(bp.back() - period_) > 1e-14 * period_)
            throw std::invalid_argument("profile: breakpoints must span [0, period]");
        if (std::abs(vv.front() - vv.back()) > 0.0)
            throw std::invalid_argument("profile: piecewise values must match at period ends");
        min_ = *std::min_element(vv.begin(), vv.end());
        max_ = *std::max_element(vv.begin(), vv.end());
        lipschitz_ = 0.0;
        for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
            const double dy = bp[i + 1] - bp[i];
            if (!(dy > 0.0)) throw std::invalid_argument("profile: breakpoints must ascend");
            lipschitz_ = std::max(lipschitz_, std::abs(vv[i + 1] - vv[i]) / dy);
        }
        if (!(min_ > 0.0)) throw std::invalid_argument("profile: values must be positive");
    }
}

PeriodicProfile PeriodicProfile::constant(double value, double period) {
    return PeriodicProfile(period, Constant{value});
}

PeriodicProfile PeriodicProfile::cosine(double mean, double amplitude, double period,
                                        int harmonics) {
    return PeriodicProfile(period, Cosine{mean, amplitude, harmonics});
}

PeriodicProfile PeriodicProfile::piecewise_linear(std::vector<double> breakpoints,
                                                  std::vector<double> values) {
    if (breakpoints.empty()) throw std::invalid_argument("profile: empty breakpoints");
    const double L = breakpoints.back();
    return PeriodicProfile(L, PiecewiseLinear{std::move(breakpoints), std::move(values)});
}

double PeriodicProfile::operator()(double y) const {
    double t = std::fmod(y, period_);
    if (t < 0.0) t += period_;
    if (t >= period_) t = 0.0;  // fmod can land on period_ after the shift

    if (const auto* c = std::get_if<Constant>(&family_)) return c->value;
    if (const auto* cs = std::get_if<Cosine>(&family_))
        return cs->mean + cs->amplitude * std::cos(kTwoPi * cs->harmonics * t / period_);

    const auto& pw = std::get<PiecewiseLinear>(family_);
    const auto& bp = pw.breakpoints;
    const auto it = std::upper_bound(bp.begin(), bp.end(), t);
    std::size_t i = (it == bp.begin()) ? 0 : static_cast<std::size_t>(it - bp.begin() - 1);
    if (i + 1 >= bp.size()) i = bp.size() - 2;
    const double s = (t - bp[i]) / (bp[i + 1] - bp[i]);
    return pw.values[i] + s * (pw.values[i + 1] - pw.values[i]);
}

std::vector<double> PeriodicProfile::interior_breakpoints() const {
    if (const auto* pw = std::get_if<PiecewiseLinear>(&family_)) {
        std::vector<double> out(pw->breakpoints.begin() + 1, pw->breakpoints.end() - 1);
        return out;
    }
    return {};
}

std::string PeriodicProfile::describe() const {
    std::ostringstream os;
    if (const auto* c = std::get_if<Constant>(&family_)) {
        os << "const(" << c->value << ")";
    } else if (const auto* cs = std::get_if<Cosine>(&family_)) {
        os << "cos(" << cs->mean << "," << cs->amplitude << ",k=" << cs->harmonics << ")";
    } else {
        os << "pwl(" << std::get<PiecewiseLinear>(family_).breakpoints.size() << "pts)";
    }
    os << "/L=" << period_;
    return os.str();
}

double profile_average(const PeriodicProfile& profile, double exponent) {
    const double L = profile.period();
    if (profile.is_constant())
        return std::pow(std::get<PeriodicProfile::Constant>(profile.family()).value, exponent);

    std::vector<double> breaks{0.0};
    for (double b : profile.interior_breakpoints()) breaks.push_back(b);
    breaks.push_back(L);

    const double val = integrate_on_breaks(
        [&](double y) {
            const double v = profile(y);
            if (!std::isfinite(v) || v <= 0.0)
                throw std::runtime_error("profile_average: non-finite or non-positive evaluation");
            return std::pow(v, exponent);
        },
        breaks);
    if (!std::isfinite(val)) throw std::runtime_error("profile_average: integral not finite");
    return val / L;
}

} // namespace thinhom
