#include "hk/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hk/bessel.hpp"

namespace hk::dispersion {
namespace {

void check_order(const char* op, int n) {
    if (n < 1) throw InvalidArgument(std::string(op) + ": wave number must be >= 1");
}

void check_positive(const char* op, double v) {
    if (!std::isfinite(v) || !(v > 0.0)) throw InvalidArgument(std::string(op) + ": argument must be positive and finite");
}

struct Gammas {
    double g11, g22, g12, ups;
};

Gammas gammas(int n, const AnnulusConfig& cfg) {
    const HelicalDomain& d = cfg.domain;
    return {gamma(n, cfg.a1, cfg.a1, d), gamma(n, cfg.a2, cfg.a2, d), gamma(n, cfg.a1, cfg.a2, d),
            upsilon(cfg.a1, cfg.a2, d)};
}

}  // namespace

double omega_simply(int n, const DiskConfig& cfg) {
    check_order("omega_simply", n);
    const double h = cfg.domain.h(), a = cfg.a;
    const double base = (h * h + a * a) / (2.0 * h * h);
    return base + (a * a) / (h * h) * bessel::product_iprime_kprime(n, a / h);
}

double upsilon(double a, double b, const HelicalDomain& domain) {
    check_positive("upsilon", a);
    check_positive("upsilon", b);
    const double h = domain.h();
    return (h * h + a * a) * (a - b) * (a + b) / (2.0 * h * h * a * a);
}

double gamma(int n, double a, double b, const HelicalDomain& domain) {
    check_order("gamma", n);
    check_positive("gamma", a);
    check_positive("gamma", b);
    const double h = domain.h();
    if (a == b) return -(a * a) / (h * h) * bessel::product_iprime_kprime(n, a / h);
    const double k = domain.kappa();
    const ScaledValue prod = bessel::bessel_i_prime(n, n * b * k) * bessel::bessel_k_prime(n, n * a * k);
    const double g = -(a * b) / (h * h) * prod.to_double_or_zero();
    return g == 0.0 ? 0.0 : g;  // underflow must not surface as -0
}

double SpectralMatrix2::max_abs() const {
    double m = 0.0;
    for (const auto& row : entries)
        for (double v : row) m = std::max(m, std::fabs(v));
    return m;
}

SpectralMatrix2 matrix_m(int n, double omega, const AnnulusConfig& cfg) {
    check_order("matrix_m", n);
    const Gammas g = gammas(n, cfg);
    SpectralMatrix2 m;
    m.entries = {{{omega + g.g11 - g.ups, g.g12}, {-g.g12, omega - g.g22}}};
    return m;
}

SpectralMatrix2 matrix_m_bessel_form(int n, double omega, const AnnulusConfig& cfg) {
    check_order("matrix_m_bessel_form", n);
    const double h = cfg.domain.h(), a1 = cfg.a1, a2 = cfg.a2;
    const double z1 = n * a1 / h, z2 = n * a2 / h;
    using bessel::bessel_i_prime;
    using bessel::bessel_k_prime;
    const double p11 = (bessel_i_prime(n, z1) * bessel_k_prime(n, z1)).to_double_or_zero();
    const double p22 = (bessel_i_prime(n, z2) * bessel_k_prime(n, z2)).to_double_or_zero();
    const double p12 = (bessel_i_prime(n, z2) * bessel_k_prime(n, z1)).to_double_or_zero();
    const double h2 = h * h;
    SpectralMatrix2 m;
    m.entries[0][0] = omega - a1 * a1 / h2 * p11 - (h2 + a1 * a1) * (a1 * a1 - a2 * a2) / (2.0 * h2 * a1 * a1);
    m.entries[0][1] = -a1 * a2 / h2 * p12;
    m.entries[1][0] = a1 * a2 / h2 * p12;
    m.entries[1][1] = omega + a2 * a2 / h2 * p22;
    return m;
}

double discriminant(int n, const AnnulusConfig& cfg) {
    check_order("discriminant", n);
    const Gammas g = gammas(n, cfg);
    const double d = g.ups - g.g11 - g.g22;
    return d * d - 4.0 * g.g12 * g.g12;
}

OmegaPair omega_doubly(int n, const AnnulusConfig& cfg) {
    check_order("omega_doubly", n);
    const Gammas g = gammas(n, cfg);
    const double d = g.ups - g.g11 - g.g22;
    const double delta = d * d - 4.0 * g.g12 * g.g12;
    if (!(delta > 0.0))
        throw DegenerateSpectrum("omega_doubly: discriminant is not positive at n = " + std::to_string(n), delta);
    // Roots of Omega^2 - b Omega + c with b = Upsilon - Gamma11 + Gamma22.
    const double b = g.ups - g.g11 + g.g22;
    const double c = g.g22 * (g.ups - g.g11) + g.g12 * g.g12;
    const double root = std::sqrt(delta);
    const double q = 0.5 * (b + std::copysign(root, b));
    double hi = q, lo = (q != 0.0) ? c / q : 0.5 * (b - root);
    if (hi < lo) std::swap(hi, lo);
    return {hi, lo};
}

std::array<double, 2> kernel_vector(int n, const AnnulusConfig& cfg, Branch branch) {
    const OmegaPair w = omega_doubly(n, cfg);
    const double omega = branch == Branch::Plus ? w.plus : w.minus;
    const Gammas g = gammas(n, cfg);
    return {omega - g.g22, g.g12};
}

int doubly_threshold(const AnnulusConfig& cfg, int n_max) {
    if (n_max < 2) throw InvalidArgument("doubly_threshold: n_max must be >= 2");
    int threshold = -1;
    double prev_plus = 0.0, prev_minus = 0.0;
    bool prev_ok = false;
    for (int n = 1; n <= n_max; ++n) {
        const double delta = discriminant(n, cfg);
        bool ok = delta > 0.0;
        double plus = 0.0, minus = 0.0;
        if (ok) {
            const OmegaPair w = omega_doubly(n, cfg);
            plus = w.plus;
            minus = w.minus;
            if (prev_ok && !(plus > prev_plus && minus < prev_minus)) ok = false;
        }
        if (!ok) {
            threshold = -1;
        } else if (threshold < 0) {
            threshold = n;
        }
        prev_ok = delta > 0.0;
        prev_plus = plus;
        prev_minus = minus;
    }
    return threshold;
}

double f_z(double nu, double z) {
    if (!(nu >= 2.0) || !std::isfinite(nu)) throw InvalidArgument("f_z: requires nu >= 2");
    check_positive("f_z", z);
    const double z2 = z * z;
    const double n1 = nu - 1.0;
    auto sq = [](double v) { return v * v; };
    const double first = 2.0 * std::sqrt(sq(nu - 0.5) + nu * nu * z2) * (std::sqrt(nu * nu + n1 * n1 * z2) - 1.0) *
                         (std::sqrt(sq(nu - 1.5) + n1 * n1 * z2) + 0.5);
    const double second = (n1 * n1) / (nu * nu) *
                          (1.0 + std::sqrt(n1 * n1 + n1 * n1 * z2) + std::sqrt(sq(nu - 2.0) + n1 * n1 * z2)) *
                          (std::sqrt(sq(nu + 0.5) + nu * nu * z2) - 0.5) * (std::sqrt(n1 * n1 + nu * nu * z2) + 1.0);
    return first - second;
}

double h_z(double s, double z) {
    if (!(s > 0.0) || !(s <= 1.0 / 3.0 + 1e-15)) throw InvalidArgument("h_z: requires s in (0, 1/3]");
    check_positive("h_z", z);
    const double z2 = z * z;
    const double t = 1.0 - s;
    auto sq = [](double v) { return v * v; };
    const double first = 2.0 * std::sqrt(sq(1.0 - 0.5 * s) + z2) * (std::sqrt(1.0 + t * t * z2) - s) *
                         (std::sqrt(sq(1.0 - 1.5 * s) + t * t * z2) + 0.5 * s);
    const double second = t * t * (s + t * std::sqrt(1.0 + z2) + std::sqrt(sq(1.0 - 2.0 * s) + t * t * z2)) *
                          (std::sqrt(sq(1.0 + 0.5 * s) + z2) - 0.5 * s) * (std::sqrt(t * t + z2) + s);
    return first - second;
}

double g_z(double s, double z) {
    if (!(s > 0.0) || !(s <= 1.0 / 3.0 + 1e-15)) throw InvalidArgument("g_z: requires s in (0, 1/3]");
    check_positive("g_z", z);
    const double w = 1.0 / z;
    const double w2 = w * w;
    const double t = 1.0 - s;
    auto sq = [](double v) { return v * v; };
    const double first = 2.0 * std::sqrt(w2 * sq(1.0 - 0.5 * s) + 1.0) * (std::sqrt(w2 + t * t) - s * w) *
                         (std::sqrt(w2 * sq(1.0 - 1.5 * s) + t * t) + 0.5 * s * w);
    const double second = t * t * (s * w + t * std::sqrt(1.0 + w2) + std::sqrt(w2 * sq(1.0 - 2.0 * s) + t * t)) *
                          (std::sqrt(w2 * sq(1.0 + 0.5 * s) + 1.0) - 0.5 * s * w) *
                          (std::sqrt(w2 * t * t + 1.0) + s * w);
    return first - second;
}

MonotonicityReport scan_monotonicity(const std::vector<double>& z_grid, int nu_min, int nu_max) {
    if (nu_min < 3) throw InvalidArgument("scan_monotonicity: nu_min must be >= 3");
    if (nu_max < nu_min) throw InvalidArgument("scan_monotonicity: nu_max must be >= nu_min");
    if (z_grid.empty()) throw InvalidArgument("scan_monotonicity: empty z grid");
    MonotonicityReport rep;
    rep.z_grid = z_grid;
    rep.nu_range = {nu_min, nu_max};
    rep.min_f = std::numeric_limits<double>::infinity();
    rep.min_product_gap = std::numeric_limits<double>::infinity();
    for (double z : z_grid) {
        check_positive("scan_monotonicity", z);
        double min_here = std::numeric_limits<double>::infinity();
        double prev = bessel::product_iprime_kprime(nu_min - 1, z);
        for (int nu = nu_min; nu <= nu_max; ++nu) {
            const double f = f_z(nu, z);
            min_here = std::min(min_here, f);
            if (!(f > 0.0)) rep.violations.push_back({z, nu});
            const double cur = bessel::product_iprime_kprime(nu, z);
            // Relative gap: the product scales like 1/nu.
            const double gap = (cur - prev) / std::fabs(cur);
            rep.min_product_gap = std::min(rep.min_product_gap, gap);
            if (!(cur > prev)) rep.product_violations.push_back({z, nu});
            prev = cur;
        }
        rep.min_f_per_z.push_back(min_here);
        rep.min_f = std::min(rep.min_f, min_here);
    }
    return rep;
}

std::vector<double> log_grid(double lo, double hi, int points) {
    check_positive("log_grid", lo);
    check_positive("log_grid", hi);
    if (points < 2 || !(hi > lo)) throw InvalidArgument("log_grid: need hi > lo and at least two points");
    std::vector<double> g(points);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < points; ++i) g[i] = std::exp(a + (b - a) * i / (points - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

}  // namespace hk::dispersion
