#include <string>

#include <boost/math/constants/constants.hpp>

#include "hk/refcheck.hpp"

namespace hk::refcheck {
namespace {

constexpr int kMaxTerms = 4000;
// cpp_bin_float<150> carries 150 decimal digits; the K_n series at z = 50
// cancels about 43 of them.
constexpr int kMaxWorkingDigits = 100;

mp_real pow10_neg(int digits) { return boost::multiprecision::pow(mp_real(10), -digits); }

void check_range(int n, const mp_real& z) {
    if (n < 0 || n > 64) throw InvalidArgument("bessel_series_reference: order outside [0, 64]");
    if (!(z > 0) || z > 50) throw InvalidArgument("bessel_series_reference: argument outside (0, 50]");
}

mp_real factorial(int n) {
    mp_real f = 1;
    for (int j = 2; j <= n; ++j) f *= j;
    return f;
}

// sum_{k >= 0} c_k (z^2/4)^k / (k! (n+k)!), with c_k supplied by weight(k).
template <class W>
mp_real weighted_series(int n, const mp_real& y, const PrecisionConfig& prec, W&& weight) {
    const mp_real eps = pow10_neg(prec.working_digits + 10);
    mp_real term = 1 / factorial(n);
    mp_real sum = 0;
    for (int k = 0; k < kMaxTerms; ++k) {
        if (k > 0) term *= y / (mp_real(k) * (n + k));
        const mp_real contrib = term * weight(k);
        sum += contrib;
        if (k >= prec.series_terms && abs(contrib) < eps * abs(sum) && term < eps * abs(sum)) return sum;
    }
    throw AccuracyError("bessel_series_reference: series budget exhausted", static_cast<double>(y));
}

}  // namespace

void validate(const PrecisionConfig& prec) {
    if (prec.working_digits < 30 || prec.working_digits > kMaxWorkingDigits)
        throw InvalidArgument("PrecisionConfig: working_digits must lie in [30, " + std::to_string(kMaxWorkingDigits) + "]");
    if (prec.series_terms < 60) throw InvalidArgument("PrecisionConfig: series_terms must be >= 60");
}

mp_real digamma_integer(int l) {
    if (l < 1) throw InvalidArgument("digamma_integer: argument must be >= 1");
    mp_real s = -boost::math::constants::euler<mp_real>();
    for (int j = 1; j < l; ++j) s += mp_real(1) / j;
    return s;
}

BesselPair bessel_series_reference(int n, const mp_real& z, const PrecisionConfig& prec) {
    validate(prec);
    check_range(n, z);
    const mp_real half = z / 2;
    const mp_real y = half * half;
    const mp_real half_pow_n = boost::multiprecision::pow(half, n);

    BesselPair out;
    out.i = half_pow_n * weighted_series(n, y, prec, [](int) { return mp_real(1); });

    // K_n = 1/2 (z/2)^{-n} sum_{k<n} (n-k-1)!/k! (-y)^k + (-1)^{n+1} ln(z/2) I_n
    //       + (-1)^n 1/2 (z/2)^n sum_k (psi(k+1) + psi(n+k+1)) y^k / (k! (n+k)!)
    mp_real finite = 0;
    for (int k = 0; k < n; ++k) {
        mp_real t = factorial(n - k - 1) / factorial(k) * boost::multiprecision::pow(-y, k);
        finite += t;
    }
    finite = finite / (2 * half_pow_n);

    // psi(k+1) and psi(n+k+1) advanced incrementally.
    mp_real psi_a = digamma_integer(1);
    mp_real psi_b = digamma_integer(n + 1);
    int last_k = -1;
    auto weight = [&](int k) {
        for (; last_k < k; ++last_k) {
            if (last_k >= 0) {
                psi_a += mp_real(1) / (last_k + 1);
                psi_b += mp_real(1) / (n + last_k + 1);
            }
        }
        return psi_a + psi_b;
    };
    const mp_real digamma_sum = weighted_series(n, y, prec, weight);
    const mp_real sgn = (n % 2 == 0) ? 1 : -1;
    out.k = finite - sgn * log(half) * out.i + sgn * half_pow_n * digamma_sum / 2;
    return out;
}

BesselPair bessel_series_reference(int n, double z, const PrecisionConfig& prec) {
    return bessel_series_reference(n, mp_real(z), prec);
}

BesselPair bessel_prime_series_reference(int n, double z_in, const PrecisionConfig& prec) {
    validate(prec);
    const mp_real z(z_in);
    check_range(n, z);
    const mp_real half = z / 2;
    const mp_real y = half * half;
    BesselPair out;
    // d/dz (z/2)^{n+2k} = (n+2k)/2 (z/2)^{n+2k-1}
    if (n == 0) {
        out.i = bessel_series_reference(1, z, prec).i;
    } else {
        out.i = boost::multiprecision::pow(half, n - 1) *
                weighted_series(n, y, prec, [n](int k) { return mp_real(n + 2 * k) / 2; });
    }
    const int lower = n == 0 ? 1 : n - 1;
    out.k = -(bessel_series_reference(lower, z, prec).k + bessel_series_reference(n + 1, z, prec).k) / 2;
    return out;
}

}  // namespace hk::refcheck
