#pragma once

#include <array>
#include <vector>

#include "hk/domain.hpp"

// Fourier modes of the Green's function of the helical operator L_H:
//   G_H(x, y) = -sum_m G_m(rho, rho0) e^{i m (phi - phi0)}.
namespace hk::greens {

// G_m(rho, rho0). For m >= 1 the two radii enter through min / max; m = 0 is
// the piecewise log / quadratic branch, zero for rho <= rho0.
double green_mode(int m, double rho, double rho0, const HelicalDomain& domain);

// Max central-difference residual of the radial ODE satisfied by G_m(., rho0)
// over the grid. Throws if a grid point lies within step + 1e-2 of rho0.
double green_mode_residual(int m, const std::vector<double>& rho_grid, double rho0,
                           const HelicalDomain& domain, double step = 1e-4);

// Same residual for an arbitrary function of rho; used to check the check.
template <class F>
double ode_residual(int m, F&& g, const std::vector<double>& rho_grid, const HelicalDomain& domain,
                    double step = 1e-4);

struct KernelOptions {
    int k_max = 64;
    double tol = 1e-9;
};

// G_H(x, y) for planar points x, y, truncated at k_max with a geometric tail
// estimate. Throws AccuracyError when the estimate exceeds tol (including |x| = |y|).
double green_eval(const std::array<double, 2>& x, const std::array<double, 2>& y,
                  const HelicalDomain& domain, const KernelOptions& opts = {});

// Radial stream function of the disk source 1_{B_a}, normalised to 0 at rho = 0.
double stream_disk(double rho, double a, const HelicalDomain& domain);
double stream_disk_dr(double rho, double a, const HelicalDomain& domain);

// ---------------------------------------------------------------------------

template <class F>
double ode_residual(int m, F&& g, const std::vector<double>& rho_grid, const HelicalDomain& domain,
                    double step) {
    const double k2 = domain.kappa() * domain.kappa();
    double worst = 0.0;
    for (double rho : rho_grid) {
        const double gm = g(rho - step), g0 = g(rho), gp = g(rho + step);
        const double d1 = (gp - gm) / (2.0 * step);
        const double d2 = (gp - 2.0 * g0 + gm) / (step * step);
        const double q = 1.0 + k2 * rho * rho;
        const double res = (rho / q) * d2 + ((1.0 - k2 * rho * rho) / (q * q)) * d1 - (double(m) * m / rho) * g0;
        worst = std::max(worst, std::fabs(res));
    }
    return worst;
}

}  // namespace hk::greens
