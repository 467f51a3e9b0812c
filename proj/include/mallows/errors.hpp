#pragma once

#include <stdexcept>
#include <string>

namespace mallows {

// Solver could not start: the Cauchy data admit no integrable solution
// (or sit too close to the blow-up boundary to resolve on a grid).
class ExistenceViolated : public std::runtime_error {
public:
    ExistenceViolated(const std::string& what, double margin)
        : std::runtime_error(what), margin_(margin) {}
    double margin() const { return margin_; }

private:
    double margin_;
};

// Iterative solver gave up. Carries the last measured diagnostics.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, int iterations, double last_change,
                   double marginal_error = 0.0)
        : std::runtime_error(what),
          iterations_(iterations),
          last_change_(last_change),
          marginal_error_(marginal_error) {}
    int iterations() const { return iterations_; }
    double last_change() const { return last_change_; }
    double marginal_error() const { return marginal_error_; }

private:
    int iterations_;
    double last_change_;
    double marginal_error_;
};

}  // namespace mallows
