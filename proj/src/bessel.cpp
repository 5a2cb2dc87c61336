#include "hk/bessel.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

namespace hk::bessel {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr double kPi = std::numbers::pi;
constexpr double kEuler = std::numbers::egamma;
constexpr int kDebyeTerms = 20;
// Below this argument the leading small-x terms are exact to double precision.
constexpr double kTinyArgument = 1e-150;

void check_argument(const char* op, double x) {
    if (!std::isfinite(x) || !(x > 0.0))
        throw InvalidArgument(std::string(op) + ": argument must be positive and finite");
}

// ---------------------------------------------------------------------------
// Debye polynomials u_k(t), v_k(t), generated from the standard recursion.

using Poly = std::vector<long double>;

Poly derivative(const Poly& p) {
    if (p.size() <= 1) return {0.0L};
    Poly d(p.size() - 1);
    for (std::size_t j = 1; j < p.size(); ++j) d[j - 1] = p[j] * static_cast<long double>(j);
    return d;
}

struct DebyeTables {
    std::array<std::vector<double>, kDebyeTerms> u;
    std::array<std::vector<double>, kDebyeTerms> v;

    DebyeTables() {
        std::array<Poly, kDebyeTerms> up;
        up[0] = {1.0L};
        for (int k = 0; k + 1 < kDebyeTerms; ++k) {
            const Poly& uk = up[k];
            Poly du = derivative(uk);
            Poly next(uk.size() + 3, 0.0L);
            // 1/2 p^2 (1 - p^2) u_k'
            for (std::size_t j = 0; j < du.size(); ++j) {
                next[j + 2] += 0.5L * du[j];
                if (j + 4 < next.size()) next[j + 4] -= 0.5L * du[j];
            }
            // 1/8 int_0^p (1 - 5 s^2) u_k(s) ds
            for (std::size_t j = 0; j < uk.size(); ++j) {
                next[j + 1] += uk[j] / (8.0L * static_cast<long double>(j + 1));
                if (j + 3 < next.size())
                    next[j + 3] -= 5.0L * uk[j] / (8.0L * static_cast<long double>(j + 3));
            }
            up[k + 1] = next;
        }
        for (int k = 0; k < kDebyeTerms; ++k) {
            u[k].assign(up[k].begin(), up[k].end());
            if (k == 0) {
                v[k] = {1.0};
                continue;
            }
            // v_k = u_k + p (p^2 - 1) (1/2 u_{k-1} + p u_{k-1}')
            const Poly& prev = up[k - 1];
            Poly dprev = derivative(prev);
            Poly inner(prev.size() + 1, 0.0L);
            for (std::size_t j = 0; j < prev.size(); ++j) inner[j] += 0.5L * prev[j];
            for (std::size_t j = 0; j < dprev.size(); ++j) inner[j + 1] += dprev[j];
            Poly vk(std::max(up[k].size(), inner.size() + 3), 0.0L);
            for (std::size_t j = 0; j < up[k].size(); ++j) vk[j] += up[k][j];
            for (std::size_t j = 0; j < inner.size(); ++j) {
                vk[j + 3] += inner[j];
                vk[j + 1] -= inner[j];
            }
            v[k].assign(vk.begin(), vk.end());
        }
    }
};

const DebyeTables& tables() {
    static const DebyeTables t;
    return t;
}

double horner(const std::vector<double>& c, double t) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
}

Evaluation uniform_route(int n, double x) {
    const DebyeTables& tab = tables();
    const double z = x / n;
    const double s = std::hypot(1.0, z);
    const double t = 1.0 / s;
    const double eta = debye_eta(z);

    double up = 0.0, um = 0.0, vp = 0.0, vm = 0.0;
    double scale = 1.0;
    int small_run = 0;
    for (int k = 0; k < kDebyeTerms; ++k) {
        const double uk = horner(tab.u[k], t) * scale;
        const double vk = horner(tab.v[k], t) * scale;
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        up += uk;
        um += sgn * uk;
        vp += vk;
        vm += sgn * vk;
        if (k >= 2 && std::fabs(uk) + std::fabs(vk) < 1e-3 * kEps) {
            if (++small_run == 2) break;
        } else {
            small_run = 0;
        }
        scale /= n;
    }

    Evaluation e;
    e.order = n;
    e.arg = x;
    e.ci = n * s * vp / up;
    e.ck = n * s * vm / um;
    e.ik = up * um / (2.0 * n * s);
    const double log_i = n * eta - 0.5 * std::log(2.0 * kPi * n) - 0.5 * std::log(s) + std::log(up);
    const double log_k = 0.5 * std::log(kPi / (2.0 * n)) - n * eta - 0.5 * std::log(s) + std::log(um);
    e.i = ScaledValue::from_log(1, log_i);
    e.k = ScaledValue::from_log(1, log_k);
    e.i_prime = ScaledValue::from_log(1, log_i + std::log(e.ci / x));
    e.k_prime = ScaledValue::from_log(-1, log_k + std::log(e.ck / x));
    return e;
}

// ---------------------------------------------------------------------------
// Moderate orders.

struct K01 {
    double log_k0;
    double rho0;  // K_1 / K_0
};

K01 k0_k1(double x) {
    if (x <= 2.0) {
        const double y = 0.25 * x * x;
        const double lnh = std::log(0.5 * x);
        double term = 1.0, i0 = 1.0, s0 = 0.0, harmonic = 0.0;
        for (int k = 1; k < 200; ++k) {
            term *= y / (static_cast<double>(k) * k);
            harmonic += 1.0 / k;
            i0 += term;
            s0 += term * harmonic;
            if (term * (1.0 + harmonic) < kEps * 1e-3 * i0) break;
        }
        const double k0 = -(lnh + kEuler) * i0 + s0;

        // x K_1 = 1 + x ln(x/2) I_1 - (x^2/4) sum (psi(k+1) + psi(k+2)) y^k / (k! (k+1)!)
        double t = 1.0, sum_i1 = 1.0, hk = 0.0, hk1 = 1.0;
        double s1 = hk + hk1 - 2.0 * kEuler;
        for (int k = 1; k < 200; ++k) {
            t *= y / (static_cast<double>(k) * (k + 1));
            hk += 1.0 / k;
            hk1 += 1.0 / (k + 1);
            sum_i1 += t;
            s1 += t * (hk + hk1 - 2.0 * kEuler);
            if (t * (2.0 + hk + hk1) < kEps * 1e-3) break;
        }
        const double i1 = 0.5 * x * sum_i1;
        const double xk1 = 1.0 + x * lnh * i1 - y * s1;
        return {std::log(k0), xk1 / (x * k0)};
    }

    // Steed's continued fraction CF2 at order zero.
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i < 10000; ++i) {
        a -= 2 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::fabs(dels / s) < kEps) break;
    }
    h = a1 * h;
    const double log_k0 = 0.5 * std::log(kPi / (2.0 * x)) - x - std::log(s);
    return {log_k0, (x + 0.5 - h) / x};
}

// I_{n+1}(x) / I_n(x) by the modified Lentz method.
double ratio_i_up(int n, double x) {
    double f = kTiny, c = f, d = 0.0;
    const int max_iter = 1000 + 20 * static_cast<int>(std::min(x, 1e7));
    for (int j = 1; j <= max_iter; ++j) {
        const double b = 2.0 * (n + j) / x;
        d = b + d;
        if (d == 0.0) d = kTiny;
        c = b + 1.0 / c;
        if (c == 0.0) c = kTiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0) < kEps) return f;
    }
    throw AccuracyError("bessel: continued fraction for I_{n+1}/I_n did not converge", x);
}

// Leading small-argument terms, exact to double precision for x < kTinyArgument, n >= 1.
Evaluation tiny_argument(int n, double x) {
    Evaluation e;
    e.order = n;
    e.arg = x;
    const double lh = std::log(0.5 * x);
    const double log_i = n * lh - std::lgamma(n + 1.0);
    const double log_k = std::log(0.5) + std::lgamma(static_cast<double>(n)) - n * lh;
    e.ci = n;
    e.ck = n;
    e.ik = 0.5 / n;
    e.i = ScaledValue::from_log(1, log_i);
    e.k = ScaledValue::from_log(1, log_k);
    e.i_prime = ScaledValue::from_log(1, log_i + std::log(n / x));
    e.k_prime = ScaledValue::from_log(-1, log_k + std::log(n / x));
    return e;
}

struct Ratios {
    double log_k = 0.0;     // log K_n
    double rho = 0.0;       // K_{n+1} / K_n
    double k_down = 0.0;    // K_{n-1} / K_n
    double q = 0.0;         // I_{n+1} / I_n
};

// Upward recurrence of K_{k+1}/K_k from K_0, K_1 plus the continued fraction for I.
Ratios ratios(int n, double x) {
    const K01 base = k0_k1(x);
    double rho = base.rho0;
    double rho_prev = rho;
    // log K_n = log K_0 + sum_{k<n} log rho_k, accumulated as mantissa * 2^exponent.
    double mant = 1.0;
    long exponent = 0;
    for (int k = 0; k < n; ++k) {
        mant *= rho;
        int e2 = 0;
        mant = std::frexp(mant, &e2);
        exponent += e2;
        rho_prev = rho;
        rho = 1.0 / rho + 2.0 * (k + 1) / x;
    }
    Ratios r;
    r.log_k = base.log_k0 + std::log(mant) + exponent * std::numbers::ln2;
    r.rho = rho;
    r.k_down = n >= 1 ? 1.0 / rho_prev : base.rho0;
    r.q = ratio_i_up(n, x);
    return r;
}

Evaluation recurrence_route(int n, double x) {
    if (n >= 1 && x < kTinyArgument) return tiny_argument(n, x);
    const Ratios r = ratios(n, x);
    const double i_down = n >= 1 ? r.q + 2.0 * n / x : r.q;  // I_{n-1}/I_n

    Evaluation e;
    e.order = n;
    e.arg = x;
    e.ci = 0.5 * x * (i_down + r.q);
    e.ck = 0.5 * x * (r.k_down + r.rho);
    e.ik = 1.0 / (x * (r.rho + r.q));
    const double log_i = std::log(e.ik) - r.log_k;
    e.i = ScaledValue::from_log(1, log_i);
    e.k = ScaledValue::from_log(1, r.log_k);
    e.i_prime = ScaledValue::from_log(1, log_i + std::log(e.ci / x));
    e.k_prime = ScaledValue::from_log(-1, r.log_k + std::log(e.ck / x));
    return e;
}

void check_order_positive(const char* op, int n) {
    if (n < 1) throw InvalidArgument(std::string(op) + ": order must be >= 1");
}

}  // namespace

Evaluation evaluate(int n, double x) {
    check_argument("bessel::evaluate", x);
    n = std::abs(n);
    return n >= kAsymptoticCrossover ? uniform_route(n, x) : recurrence_route(n, x);
}

ScaledValue bessel_i(int n, double z) { return evaluate(n, z).i; }
ScaledValue bessel_k(int n, double z) { return evaluate(n, z).k; }
ScaledValue bessel_i_prime(int n, double z) { return evaluate(n, z).i_prime; }
ScaledValue bessel_k_prime(int n, double z) { return evaluate(n, z).k_prime; }

double ratio_ci(int n, double z) {
    n = std::abs(n);
    check_order_positive("ratio_ci", n);
    check_argument("ratio_ci", z);
    return n + ratio_ci_excess(n, z);
}

double ratio_ck(int n, double z) {
    n = std::abs(n);
    check_order_positive("ratio_ck", n);
    check_argument("ratio_ck", z);
    return n + ratio_ck_excess(n, z);
}

double ratio_ci_excess(int n, double z) {
    check_argument("ratio_ci_excess", z);
    return z * ratio_i_up(std::abs(n), z);
}

double ratio_ck_excess(int n, double z) {
    check_argument("ratio_ck_excess", z);
    n = std::abs(n);
    check_order_positive("ratio_ck_excess", n);
    return z * ratios(n, z).k_down;
}

double product_ik(int n, double z) { return evaluate(n, z).ik; }

Evaluation evaluate_recurrence(int n, double x) {
    check_argument("bessel::evaluate_recurrence", x);
    return recurrence_route(std::abs(n), x);
}

Evaluation evaluate_uniform(int n, double x) {
    check_argument("bessel::evaluate_uniform", x);
    n = std::abs(n);
    check_order_positive("bessel::evaluate_uniform", n);
    return uniform_route(n, x);
}

double product_iprime_kprime_unscaled(int n, double x) {
    const Evaluation e = evaluate(n, x);
    return -(e.ik * (e.ci / x)) * (e.ck / x);
}

double product_iprime_kprime(int n, double z) {
    check_order_positive("product_iprime_kprime", std::abs(n));
    check_argument("product_iprime_kprime", z);
    n = std::abs(n);
    return product_iprime_kprime_unscaled(n, n * z);
}

double debye_eta(double z) {
    check_argument("debye_eta", z);
    const double s = std::hypot(1.0, z);
    return s + std::log(z) - std::log1p(s);
}

double debye_nu1(double t) { return (7.0 * t * t * t - 9.0 * t) / 24.0; }

double debye_nu2(double t) {
    const double t2 = t * t;
    return (-455.0 * t2 * t2 * t2 + 594.0 * t2 * t2 - 135.0 * t2) / 1152.0;
}

double asymptotic_product(int n, double z) {
    n = std::abs(n);
    if (n < kAsymptoticCrossover)
        throw InvalidArgument("asymptotic_product: order below the asymptotic crossover");
    check_argument("asymptotic_product", z);
    const double t = 1.0 / std::hypot(1.0, z);
    const double nu1 = debye_nu1(t), nu2 = debye_nu2(t);
    const double inv = 1.0 / n;
    // I_n'(nz) ~ e^{n eta} / (sqrt(2 pi n t) z) (1 + nu1/n + nu2/n^2)
    // K_n'(nz) ~ -sqrt(pi / (2 n t)) e^{-n eta} / z (1 - nu1/n + nu2/n^2)
    // The exponentials cancel identically in the product.
    const double series = (1.0 + nu1 * inv + nu2 * inv * inv) * (1.0 - nu1 * inv + nu2 * inv * inv);
    return -series / (2.0 * n * t * z * z);
}

double log_abs_k_prime(int n, double x) {
    check_argument("log_abs_k_prime", x);
    n = std::abs(n);
    check_order_positive("log_abs_k_prime", n);
    if (n < kAsymptoticCrossover) {
        if (x < kTinyArgument) return tiny_argument(n, x).k_prime.log_mag();
        const K01 base = k0_k1(x);
        double rho = base.rho0, rho_prev = rho, mant = 1.0;
        long exponent = 0;
        for (int k = 0; k < n; ++k) {
            mant *= rho;
            int e2 = 0;
            mant = std::frexp(mant, &e2);
            exponent += e2;
            rho_prev = rho;
            rho = 1.0 / rho + 2.0 * (k + 1) / x;
        }
        const double log_k = base.log_k0 + std::log(mant) + exponent * std::numbers::ln2;
        // |K_n'| = (K_{n-1} + K_{n+1}) / 2
        return log_k + std::log(0.5 * (1.0 / rho_prev + rho));
    }
    const DebyeTables& tab = tables();
    const double z = x / n;
    const double s = std::hypot(1.0, z);
    const double t = 1.0 / s;
    double vm = 0.0, scale = 1.0;
    int small_run = 0;
    for (int k = 0; k < kDebyeTerms; ++k) {
        const double vk = horner(tab.v[k], t) * scale;
        vm += (k % 2 == 0) ? vk : -vk;
        if (k >= 2 && std::fabs(vk) < 1e-3 * kEps) {
            if (++small_run == 2) break;
        } else {
            small_run = 0;
        }
        scale /= n;
    }
    return 0.5 * std::log(kPi / (2.0 * n)) - n * debye_eta(z) + 0.5 * std::log(s) + std::log(vm) - std::log(z);
}

const std::vector<double>& debye_u_coeffs(int k) { return tables().u.at(k); }
const std::vector<double>& debye_v_coeffs(int k) { return tables().v.at(k); }
int debye_max_terms() { return kDebyeTerms; }

}  // namespace hk::bessel
