#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace mallows {

// Positive bounded function on [0, L] together with its primitive
// (cumulative(0) = 0). Either closed form (density + primitive callables) or
// tabulated on a uniform grid. Tabulated densities are linear between nodes;
// the primitive is the cubic Hermite interpolant of the trapezoid sums with the
// samples as slopes, which is monotone and differentiates back to the density.
class MarginalDensity {
public:
    using Fn = std::function<double(double)>;

    static MarginalDensity uniform(double length = 1.0);
    static MarginalDensity closed_form(Fn density, Fn cumulative, double length = 1.0,
                                       std::string name = "closed-form");
    // values[k] sampled at k*L/(m-1), m >= 2. With `normalize`, rescales so the
    // total mass is 1.
    static MarginalDensity tabulated(std::vector<double> values, double length = 1.0,
                                     bool normalize = true);

    double operator()(double x) const { return density_(x); }
    double cumulative(double x) const { return cumulative_(x); }
    double length() const { return length_; }
    double total() const { return cumulative_(length_); }
    const std::string& name() const { return name_; }

    // (min, max) of the density over a fine sample of [0, L] (plus the
    // tabulated nodes when present).
    std::pair<double, double> bounds() const;

    // Throws std::invalid_argument unless 0 < min, max < inf and, when
    // `probability`, |total - 1| <= 1e-10.
    void validate(bool probability) const;

private:
    MarginalDensity(Fn density, Fn cumulative, double length, std::string name)
        : density_(std::move(density)),
          cumulative_(std::move(cumulative)),
          length_(length),
          name_(std::move(name)) {}

    Fn density_;
    Fn cumulative_;
    double length_;
    std::string name_;
    std::shared_ptr<const std::vector<double>> nodes_;
};

// Reads a two-column CSV (coordinate,value) with an optional header line.
// Coordinates must start at 0 and be uniformly spaced.
MarginalDensity read_marginal_csv(const std::string& path, bool normalize);

}  // namespace mallows
