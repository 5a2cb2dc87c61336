#pragma once

#include <utility>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "hk/contour.hpp"

// Independent oracles. Slow by design; used by tests and the golden-file generator.
namespace hk::refcheck {

using mp_real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<150>>;

struct PrecisionConfig {
    int working_digits = 40;
    int series_terms = 60;
};

void validate(const PrecisionConfig& prec);

struct BesselPair {
    mp_real i;
    mp_real k;
};

// Power series for I_n and K_n (digamma form of K_n). Requires n <= 64, 0 < z <= 50.
BesselPair bessel_series_reference(int n, double z, const PrecisionConfig& prec = {});
BesselPair bessel_series_reference(int n, const mp_real& z, const PrecisionConfig& prec = {});

// Term-by-term differentiated I_n series and K_n' = -(K_{n-1} + K_{n+1}) / 2.
BesselPair bessel_prime_series_reference(int n, double z, const PrecisionConfig& prec = {});

// digamma at positive integers by direct harmonic summation.
mp_real digamma_integer(int l);

struct QuadratureConfig {
    int n_theta = 96;    // target samples over one period 2 pi / m
    int n_phi = 384;     // source angular nodes over the full circle
    int n_rho = 24;      // Gauss nodes per radial panel
    int rho_panels = 4;  // panels on each side of the target radius
    int k_max = 0;       // 0 selects max(48, 16 m)
};

// Brute-force F: Phi by a dense tensor-product quadrature of the pointwise
// mode-summed kernel, theta derivative by sixth-order differences.
// Returns the sine coefficients of multiples of m. Requires at most 4 modes.
SineSeries f_direct_quadrature(double omega, const Contour& contour, const HelicalDomain& domain,
                               const QuadratureConfig& quad = {});

}  // namespace hk::refcheck
