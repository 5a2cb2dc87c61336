#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hk {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// ScaledValue conversion outside the representable double range.
class RangeError : public Error {
public:
    using Error::Error;
};

// A truncation tail or quadrature estimate exceeded the requested tolerance.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double estimate)
        : Error(what + " (estimate " + std::to_string(estimate) + ")"), estimate_(estimate) {}
    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

class DegenerateSpectrum : public Error {
public:
    DegenerateSpectrum(const std::string& what, double discriminant)
        : Error(what), discriminant_(discriminant) {}
    double discriminant() const noexcept { return discriminant_; }

private:
    double discriminant_;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

// Amplitude too large for the radius invariant 2 sum |r_n| < a^2.
class StepSizeError : public Error {
public:
    using Error::Error;
};

class ContinuationError : public Error {
public:
    ContinuationError(const std::string& what, std::vector<double> last_iterate,
                      std::vector<double> residual_history)
        : Error(what),
          last_iterate_(std::move(last_iterate)),
          residual_history_(std::move(residual_history)) {}
    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
    const std::vector<double>& residual_history() const noexcept { return residual_history_; }

private:
    std::vector<double> last_iterate_;
    std::vector<double> residual_history_;
};

}  // namespace hk
