#include "hk/greens.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hk/bessel.hpp"

namespace hk::greens {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_radius(const char* op, double r) {
    if (!std::isfinite(r) || !(r > 0.0)) throw InvalidArgument(std::string(op) + ": radius must be positive and finite");
}

}  // namespace

double green_mode(int m, double rho, double rho0, const HelicalDomain& domain) {
    if (m < 0) throw InvalidArgument("green_mode: mode must be >= 0");
    check_radius("green_mode", rho);
    check_radius("green_mode", rho0);
    const double kappa = domain.kappa();
    if (m == 0) {
        if (rho <= rho0) return 0.0;
        return (std::log(rho / rho0) + 0.5 * kappa * kappa * (rho - rho0) * (rho + rho0)) / kTwoPi;
    }
    const double lo = std::min(rho, rho0), hi = std::max(rho, rho0);
    const ScaledValue ip = bessel::bessel_i_prime(m, m * kappa * lo);
    const ScaledValue kp = bessel::bessel_k_prime(m, m * kappa * hi);
    const ScaledValue prefactor = ScaledValue::from_double(rho * rho0 * kappa * kappa / kTwoPi);
    return (prefactor * ip * kp).to_double_or_zero();
}

double green_mode_residual(int m, const std::vector<double>& rho_grid, double rho0,
                           const HelicalDomain& domain, double step) {
    check_radius("green_mode_residual", rho0);
    if (!(step > 0.0)) throw InvalidArgument("green_mode_residual: step must be positive");
    for (double rho : rho_grid) {
        if (!(rho - step > 0.0)) throw InvalidArgument("green_mode_residual: grid point too close to the axis");
        if (std::fabs(rho - rho0) < step + 1e-2)
            throw InvalidArgument("green_mode_residual: grid touches the source radius");
    }
    return ode_residual(m, [&](double r) { return green_mode(m, r, rho0, domain); }, rho_grid, domain, step);
}

double green_eval(const std::array<double, 2>& x, const std::array<double, 2>& y,
                  const HelicalDomain& domain, const KernelOptions& opts) {
    const double rho = std::hypot(x[0], x[1]);
    const double rho0 = std::hypot(y[0], y[1]);
    check_radius("green_eval", rho);
    check_radius("green_eval", rho0);
    if (opts.k_max < 2) throw InvalidArgument("green_eval: k_max must be >= 2");
    // cos of the angle difference from the dot / cross products, so rotated
    // queries see identical inputs up to rounding.
    const double dphi = std::atan2(x[0] * y[1] - x[1] * y[0], x[0] * y[0] + x[1] * y[1]);

    double sum = green_mode(0, rho, rho0, domain);
    double last = 0.0, prev = 0.0;
    for (int k = 1; k <= opts.k_max; ++k) {
        const double g = green_mode(k, rho, rho0, domain);
        sum += 2.0 * g * std::cos(k * dphi);
        prev = last;
        last = g;
    }
    double tail;
    if (last == 0.0) {
        tail = 0.0;
    } else {
        const double ratio = std::fabs(last / prev);
        tail = ratio < 1.0 ? 2.0 * std::fabs(last) * ratio / (1.0 - ratio)
                           : std::numeric_limits<double>::infinity();
    }
    if (!(tail <= opts.tol)) throw AccuracyError("green_eval: truncated mode sum tail above tolerance", tail);
    return -sum;
}

double stream_disk(double rho, double a, const HelicalDomain& domain) {
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw InvalidArgument("stream_disk: rho must be >= 0");
    check_radius("stream_disk", a);
    const double k2 = domain.kappa() * domain.kappa();
    auto inner = [&](double r) { return -(0.25 * r * r + 0.125 * k2 * r * r * r * r); };
    if (rho <= a) return inner(rho);
    return inner(a) - 0.5 * a * a * (std::log(rho / a) + 0.5 * k2 * (rho - a) * (rho + a));
}

double stream_disk_dr(double rho, double a, const HelicalDomain& domain) {
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw InvalidArgument("stream_disk_dr: rho must be >= 0");
    check_radius("stream_disk_dr", a);
    if (rho == 0.0) return 0.0;
    const double k2 = domain.kappa() * domain.kappa();
    const double r = std::min(rho, a);
    return -((1.0 + k2 * rho * rho) / rho) * 0.5 * r * r;
}

}  // namespace hk::greens
