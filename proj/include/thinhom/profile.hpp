#pragma once

#include <string>
#include <variant>
#include <vector>

namespace thinhom {

// Strictly positive periodic boundary profile (the g and h of the thin
// domain). Three families keep extrema and Lipschitz constants exact:
// constant c, cosine a + b*cos(2*pi*k*y/L), and piecewise linear through
// (breakpoints, values) with matching endpoint values.
class PeriodicProfile {
public:
    struct Constant {
        double value;
    };
    struct Cosine {
        double mean;       // a
        double amplitude;  // b, |b| < a
        int harmonics;     // k
    };
    struct PiecewiseLinear {
        std::vector<double> breakpoints;  // ascending, first 0, last = period
        std::vector<double> values;       // same length, values.front() == values.back()
    };
    using Family = std::variant<Constant, Cosine, PiecewiseLinear>;

    PeriodicProfile(double period, Family family);

    static PeriodicProfile constant(double value, double period = 1.0);
    static PeriodicProfile cosine(double mean, double amplitude, double period = 1.0,
                                  int harmonics = 1);
    static PeriodicProfile piecewise_linear(std::vector<double> breakpoints,
                                            std::vector<double> values);

    double period() const { return period_; }
    double min_value() const { return min_; }
    double max_value() const { return max_; }
    double lipschitz_bound() const { return lipschitz_; }
    const Family& family() const { return family_; }
    bool is_constant() const { return std::holds_alternative<Constant>(family_); }

    // Evaluates at y wrapped into [0, period); eval(y) == eval(y + period)
    // bit-for-bit.
    double operator()(double y) const;

    // Interior breakpoints of one period in (0, period); empty for the
    // smooth families. Mesh builders align columns with these so piecewise
    // linear profiles are meshed exactly.
    std::vector<double> interior_breakpoints() const;

    std::string describe() const;

private:
    double period_;
    Family family_;
    double min_ = 0.0, max_ = 0.0, lipschitz_ = 0.0;
};

// (1/L) * int_0^L profile(y)^exponent dy by composite Gauss-Legendre with
// dyadic refinement to relative tolerance 1e-10. Negative exponents are
// fine since the profile is bounded away from zero.
double profile_average(const PeriodicProfile& profile, double exponent);

} // namespace thinhom
