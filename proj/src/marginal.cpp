#include "mallows/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mallows {

MarginalDensity MarginalDensity::uniform(double length) {
    if (!(length > 0.0)) throw std::invalid_argument("marginal: length must be positive");
    double c = 1.0 / length;
    return MarginalDensity([c](double) { return c; }, [c](double x) { return c * x; }, length,
                           "uniform");
}

MarginalDensity MarginalDensity::closed_form(Fn density, Fn cumulative, double length,
                                             std::string name) {
    if (!(length > 0.0)) throw std::invalid_argument("marginal: length must be positive");
    return MarginalDensity(std::move(density), std::move(cumulative), length, std::move(name));
}

MarginalDensity MarginalDensity::tabulated(std::vector<double> values, double length,
                                           bool normalize) {
    if (values.size() < 2) throw std::invalid_argument("marginal: need at least two samples");
    if (!(length > 0.0)) throw std::invalid_argument("marginal: length must be positive");
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("marginal: non-finite sample");
    }
    const std::size_t m = values.size();
    const double h = length / static_cast<double>(m - 1);
    std::vector<double> cum(m, 0.0);
    for (std::size_t k = 1; k < m; ++k) cum[k] = cum[k - 1] + 0.5 * h * (values[k - 1] + values[k]);
    if (normalize) {
        double total = cum.back();
        if (!(total > 0.0)) throw std::invalid_argument("marginal: total mass not positive");
        for (double& v : values) v /= total;
        for (double& c : cum) c /= total;
    }
    auto vals = std::make_shared<const std::vector<double>>(values);
    auto cums = std::make_shared<const std::vector<double>>(cum);

    auto locate = [m, h](double x, double& t) {
        double f = std::clamp(x / h, 0.0, static_cast<double>(m - 1));
        std::size_t k = std::min(static_cast<std::size_t>(f), m - 2);
        t = f - static_cast<double>(k);
        return k;
    };
    Fn density = [vals, locate](double x) {
        double t;
        std::size_t k = locate(x, t);
        return (1.0 - t) * (*vals)[k] + t * (*vals)[k + 1];
    };
    // Hermite cubic with the samples as node slopes: the exact primitive of the
    // linear interpolant, nondecreasing whenever the samples are nonnegative
    Fn cumulative = [cums, vals, locate, h](double x) {
        double t;
        std::size_t k = locate(x, t);
        double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * (*cums)[k] + (t3 - 2 * t2 + t) * h * (*vals)[k] +
               (-2 * t3 + 3 * t2) * (*cums)[k + 1] + (t3 - t2) * h * (*vals)[k + 1];
    };
    MarginalDensity out(std::move(density), std::move(cumulative), length, "tabulated");
    out.nodes_ = vals;
    return out;
}

std::pair<double, double> MarginalDensity::bounds() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    constexpr int kSamples = 2048;
    for (int k = 0; k <= kSamples; ++k) {
        double v = density_(length_ * k / kSamples);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (nodes_) {
        for (double v : *nodes_) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    return {lo, hi};
}

void MarginalDensity::validate(bool probability) const {
    auto [lo, hi] = bounds();
    if (!(lo > 0.0) || !std::isfinite(hi)) {
        std::ostringstream msg;
        msg << "marginal '" << name_ << "' must satisfy 0 < c <= f <= C < inf (observed range ["
            << lo << ", " << hi << "])";
        throw std::invalid_argument(msg.str());
    }
    if (probability && std::abs(total() - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << "marginal '" << name_ << "' has total mass " << total() << ", expected 1";
        throw std::invalid_argument(msg.str());
    }
}

MarginalDensity read_marginal_csv(const std::string& path, bool normalize) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::vector<double> xs, ys;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double x, y;
        if (!(row >> x >> y)) {
            if (xs.empty()) continue;  // header
            throw std::invalid_argument(path + ": malformed row '" + line + "'");
        }
        xs.push_back(x);
        ys.push_back(y);
    }
    if (xs.size() < 2) throw std::invalid_argument(path + ": need at least two rows");
    if (std::abs(xs.front()) > 1e-12) throw std::invalid_argument(path + ": first coordinate must be 0");
    double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (std::abs(xs[k] - k * h) > 1e-9 * std::max(1.0, xs.back())) {
            throw std::invalid_argument(path + ": coordinates must be uniformly spaced");
        }
    }
    return MarginalDensity::tabulated(std::move(ys), xs.back(), normalize);
}

}  // namespace mallows
