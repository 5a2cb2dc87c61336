#pragma once

#include <vector>

#include "hk/scaled_value.hpp"

// Modified Bessel functions I_n, K_n of integer order and positive real argument.
//
// Orders below kAsymptoticCrossover use K_0, K_1 (series or Steed's continued
// fraction), upward recurrence of K_{k+1}/K_k, a continued fraction for
// I_{n+1}/I_n and the Wronskian for I_n. Orders at or above the crossover use
// the uniform (Debye) expansion. Products and ratios are formed from ratios
// only, so they never pass through the e^{+-n eta} magnitudes.
namespace hk::bessel {

inline constexpr int kAsymptoticCrossover = 50;

// Everything the library needs at one (n, x), computed in a single pass.
struct Evaluation {
    int order = 0;
    double arg = 0.0;
    ScaledValue i;
    ScaledValue k;
    ScaledValue i_prime;
    ScaledValue k_prime;
    double ci = 0.0;  // x I_n'(x) / I_n(x)
    double ck = 0.0;  // -x K_n'(x) / K_n(x)
    double ik = 0.0;  // I_n(x) K_n(x)
};

// Negative orders map to |n|. Throws InvalidArgument unless x > 0 and finite.
Evaluation evaluate(int n, double x);

ScaledValue bessel_i(int n, double z);
ScaledValue bessel_k(int n, double z);
ScaledValue bessel_i_prime(int n, double z);
ScaledValue bessel_k_prime(int n, double z);

// C(I_n(z)) = z I_n'/I_n and C(K_n(z)) = -z K_n'/K_n; n >= 1.
double ratio_ci(int n, double z);
double ratio_ck(int n, double z);
// C(I_n) - n = z I_{n+1}/I_n and C(K_n) - n = z K_{n-1}/K_n, free of cancellation at small z.
double ratio_ci_excess(int n, double z);
double ratio_ck_excess(int n, double z);

// I_n(z) K_n(z) from ratios only.
double product_ik(int n, double z);

// I_n'(n z) K_n'(n z); requires n >= 1.
double product_iprime_kprime(int n, double z);
// I_n'(x) K_n'(x) at an unscaled argument; n = 0 allowed.
double product_iprime_kprime_unscaled(int n, double x);

// Two-correction uniform expansion of I_n'(n z) K_n'(n z); requires n >= kAsymptoticCrossover.
double asymptotic_product(int n, double z);

// eta(z) = sqrt(1 + z^2) + ln(z / (1 + sqrt(1 + z^2))).
double debye_eta(double z);

// First two derivative-expansion polynomials nu_1(t), nu_2(t).
double debye_nu1(double t);
double debye_nu2(double t);

// Coefficients (ascending powers of t) of the generated expansion polynomials
// u_k and v_k. Exposed for tests.
const std::vector<double>& debye_u_coeffs(int k);
const std::vector<double>& debye_v_coeffs(int k);
int debye_max_terms();

// ln |K_n'(x)| alone; skips the I-side continued fraction. n >= 1.
double log_abs_k_prime(int n, double x);

// Force one evaluation route regardless of the crossover; for band-agreement tests.
Evaluation evaluate_recurrence(int n, double x);
Evaluation evaluate_uniform(int n, double x);

}  // namespace hk::bessel
