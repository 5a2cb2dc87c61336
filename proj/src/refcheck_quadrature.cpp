#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "hk/bessel.hpp"
#include "hk/greens.hpp"
#include "hk/refcheck.hpp"
#include "quadrature.hpp"

namespace hk::refcheck {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kChebDegree = 28;
constexpr double kChebTol = 1e-11;
constexpr double kMaxWork = 4e9;

// ln I_k'(k kappa rho) and ln |K_k'(k kappa rho)| on [lo, hi] as Chebyshev series.
struct LogFactorTable {
    double lo = 0.0, hi = 1.0;
    std::vector<std::vector<double>> log_ip;  // [k][j]
    std::vector<std::vector<double>> log_kp;

    static void basis(double rho, double lo, double hi, double* t) {
        const double x = (2.0 * rho - lo - hi) / (hi - lo);
        t[0] = 1.0;
        t[1] = x;
        for (int j = 2; j <= kChebDegree; ++j) t[j] = 2.0 * x * t[j - 1] - t[j - 2];
    }
};

double log_ip_direct(int k, double arg) { return bessel::bessel_i_prime(k, arg).log_mag(); }
double log_kp_direct(int k, double arg) { return bessel::bessel_k_prime(k, arg).log_mag(); }

LogFactorTable build_table(int k_max, double kappa, double lo, double hi) {
    LogFactorTable tab;
    tab.lo = lo;
    tab.hi = hi;
    const int n = kChebDegree + 1;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = std::cos(kPi * (i + 0.5) / n);
    tab.log_ip.assign(k_max + 1, std::vector<double>(n, 0.0));
    tab.log_kp.assign(k_max + 1, std::vector<double>(n, 0.0));
    std::vector<double> fi(n), fk(n);
    for (int k = 1; k <= k_max; ++k) {
        for (int i = 0; i < n; ++i) {
            const double rho = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x[i];
            fi[i] = log_ip_direct(k, k * kappa * rho);
            fk[i] = log_kp_direct(k, k * kappa * rho);
        }
        for (int j = 0; j < n; ++j) {
            double si = 0.0, sk = 0.0;
            for (int i = 0; i < n; ++i) {
                const double c = std::cos(kPi * j * (i + 0.5) / n);
                si += fi[i] * c;
                sk += fk[i] * c;
            }
            const double scale = (j == 0 ? 1.0 : 2.0) / n;
            tab.log_ip[k][j] = si * scale;
            tab.log_kp[k][j] = sk * scale;
        }
    }
    // Spot-check the interpolants between the sample points.
    std::vector<double> t(n);
    for (double frac : {0.013, 0.37, 0.71, 0.996}) {
        const double rho = lo + frac * (hi - lo);
        LogFactorTable::basis(rho, lo, hi, t.data());
        for (int k = 1; k <= k_max; ++k) {
            double ci = 0.0, ck = 0.0;
            for (int j = 0; j < n; ++j) {
                ci += tab.log_ip[k][j] * t[j];
                ck += tab.log_kp[k][j] * t[j];
            }
            const double err = std::max(std::fabs(ci - log_ip_direct(k, k * kappa * rho)),
                                        std::fabs(ck - log_kp_direct(k, k * kappa * rho)));
            if (!(err < kChebTol))
                throw AccuracyError("f_direct_quadrature: radial interpolation budget exceeded", err);
        }
    }
    return tab;
}

void check_config(const QuadratureConfig& q) {
    if (q.n_theta < 16 || q.n_theta % 2 != 0) throw InvalidArgument("f_direct_quadrature: n_theta must be even and >= 16");
    if (q.n_phi < 16) throw InvalidArgument("f_direct_quadrature: n_phi must be >= 16");
    if (q.n_rho < 4 || q.n_rho > 128) throw InvalidArgument("f_direct_quadrature: n_rho must lie in [4, 128]");
    if (q.rho_panels < 1 || q.rho_panels > 16) throw InvalidArgument("f_direct_quadrature: rho_panels must lie in [1, 16]");
    if (q.k_max < 0) throw InvalidArgument("f_direct_quadrature: k_max must be >= 0");
}

}  // namespace

SineSeries f_direct_quadrature(double omega, const Contour& contour, const HelicalDomain& domain,
                               const QuadratureConfig& quad) {
    check_config(quad);
    contour.validate();
    const int n_modes = static_cast<int>(contour.cos_coeffs.size());
    if (n_modes < 1 || n_modes > 4) throw InvalidArgument("f_direct_quadrature: contour must carry 1 to 4 modes");
    const int m = contour.m_fold;
    const int k_max = quad.k_max > 0 ? quad.k_max : std::max(48, 16 * m);
    const double kappa = domain.kappa();
    const double pre = kappa * kappa / (2.0 * kPi);

    // Targets over half a period; the contour is even in theta.
    const int half = quad.n_theta / 2;
    const double h_theta = 2.0 * kPi / (m * quad.n_theta);
    std::vector<double> theta_t(half + 1), r_t(half + 1);
    for (int j = 0; j <= half; ++j) {
        theta_t[j] = j * h_theta;
        r_t[j] = contour.radius(theta_t[j]);
    }
    const double h_phi = 2.0 * kPi / quad.n_phi;
    std::vector<double> phi(quad.n_phi), r_s(quad.n_phi);
    for (int l = 0; l < quad.n_phi; ++l) {
        phi[l] = l * h_phi;
        r_s[l] = contour.radius(phi[l]);
    }
    const double r_min = std::min(*std::min_element(r_t.begin(), r_t.end()), *std::min_element(r_s.begin(), r_s.end()));
    const double r_max = std::max(*std::max_element(r_t.begin(), r_t.end()), *std::max_element(r_s.begin(), r_s.end()));
    // Below rho_split every target sits outside the source point, so radial
    // nodes there are shared by all (target, phi) pairs.
    const double rho_split = std::max(0.5 * r_min, r_min - 0.05 * contour.base_radius);

    const detail::GaussRule& gl = detail::gauss_legendre(quad.n_rho);
    const double shell_nodes = 2.0 * quad.n_rho;
    const double work = static_cast<double>(half + 1) * quad.n_phi * (shell_nodes + quad.rho_panels * quad.n_rho) * k_max;
    if (work > kMaxWork) throw AccuracyError("f_direct_quadrature: quadrature budget exceeded", work);

    // Inner nodes on geometrically graded panels toward rho_split.
    std::vector<double> in_rho, in_w;
    for (int p = 0; p < quad.rho_panels; ++p) {
        const double a = p == 0 ? 0.0 : rho_split * (1.0 - std::ldexp(1.0, -p));
        const double b = p + 1 == quad.rho_panels ? rho_split : rho_split * (1.0 - std::ldexp(1.0, -(p + 1)));
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            in_rho.push_back(0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[i]);
            in_w.push_back(0.5 * (b - a) * gl.weights[i]);
        }
    }
    std::vector<std::vector<double>> in_log_ip(in_rho.size(), std::vector<double>(k_max + 1, 0.0));
    for (std::size_t i = 0; i < in_rho.size(); ++i)
        for (int k = 1; k <= k_max; ++k) in_log_ip[i][k] = log_ip_direct(k, k * kappa * in_rho[i]);

    const double pad = 1e-9 * contour.base_radius;
    const LogFactorTable tab = build_table(k_max, kappa, rho_split - pad, r_max + pad);
    std::vector<double> cheb(kChebDegree + 1);

    std::vector<double> phi_val(half + 1, 0.0);
    std::vector<double> cos_k(k_max + 1), t_log_ip(k_max + 1), t_log_kp(k_max + 1), node_log(k_max + 1);
    for (int j = 0; j <= half; ++j) {
        const double rt = r_t[j];
        for (int k = 1; k <= k_max; ++k) {
            t_log_ip[k] = log_ip_direct(k, k * kappa * rt);
            t_log_kp[k] = log_kp_direct(k, k * kappa * rt);
        }
        std::vector<std::vector<double>> in_coef(in_rho.size(), std::vector<double>(k_max + 1, 0.0));
        std::vector<double> in_g0(in_rho.size());
        for (std::size_t i = 0; i < in_rho.size(); ++i) {
            in_g0[i] = greens::green_mode(0, rt, in_rho[i], domain);
            for (int k = 1; k <= k_max; ++k) in_coef[i][k] = std::exp(in_log_ip[i][k] + t_log_kp[k]);
        }
        // Pointwise kernel G_H(x_t, y) = -(G_0 + 2 sum_k G_k cos k(theta - phi)); K' < 0 < I'.
        auto kernel_inside = [&](double rho, const double* log_ip_rho) {
            double s = 0.0;
            for (int k = 1; k <= k_max; ++k) s -= std::exp(log_ip_rho[k] + t_log_kp[k]) * cos_k[k];
            return -(greens::green_mode(0, rt, rho, domain) + 2.0 * pre * rt * rho * s);
        };
        auto kernel_outside = [&](double rho, const double* log_kp_rho) {
            double s = 0.0;
            for (int k = 1; k <= k_max; ++k) s -= std::exp(t_log_ip[k] + log_kp_rho[k]) * cos_k[k];
            return -(2.0 * pre * rt * rho * s);
        };
        auto shell_logs = [&](double rho, bool inside) {
            LogFactorTable::basis(rho, tab.lo, tab.hi, cheb.data());
            const auto& coef = inside ? tab.log_ip : tab.log_kp;
            for (int k = 1; k <= k_max; ++k) {
                double acc = 0.0;
                for (int q = 0; q <= kChebDegree; ++q) acc += coef[k][q] * cheb[q];
                node_log[k] = acc;
            }
            return node_log.data();
        };

        double total = 0.0;
        for (int l = 0; l < quad.n_phi; ++l) {
            const double d = theta_t[j] - phi[l];
            for (int k = 1; k <= k_max; ++k) cos_k[k] = std::cos(k * d);
            double col = 0.0;
            for (std::size_t i = 0; i < in_rho.size(); ++i) {
                double s = 0.0;
                for (int k = 1; k <= k_max; ++k) s -= in_coef[i][k] * cos_k[k];
                col -= in_w[i] * in_rho[i] * (in_g0[i] + 2.0 * pre * rt * in_rho[i] * s);
            }
            const double top = r_s[l];
            const double mid = std::min(top, rt);
            if (mid > rho_split) {
                const double a = rho_split, b = mid;
                for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
                    const double rho = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[i];
                    col += 0.5 * (b - a) * gl.weights[i] * rho * kernel_inside(rho, shell_logs(rho, true));
                }
            }
            if (top > rt) {
                const double a = rt, b = top;
                for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
                    const double rho = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[i];
                    col += 0.5 * (b - a) * gl.weights[i] * rho * kernel_outside(rho, shell_logs(rho, false));
                }
            }
            total += h_phi * col;
        }
        phi_val[j] = total;
    }

    // One full period by evenness, then sixth-order central differences.
    const int nt = quad.n_theta;
    auto sample = [&](int j) {
        j = ((j % nt) + nt) % nt;
        return phi_val[j <= half ? j : nt - j];
    };
    std::vector<double> f(nt);
    for (int j = 0; j < nt; ++j) {
        const double dphi = (-sample(j - 3) + 9.0 * sample(j - 2) - 45.0 * sample(j - 1) + 45.0 * sample(j + 1) -
                             9.0 * sample(j + 2) + sample(j + 3)) /
                            (60.0 * h_theta);
        f[j] = omega * contour.dr(j * h_theta) + dphi;
    }
    SineSeries out;
    for (int n = 1; n <= n_modes; ++n) {
        double acc = 0.0;
        for (int j = 0; j < nt; ++j) acc += f[j] * std::sin(n * m * j * h_theta);
        out.sin_coeffs.push_back(2.0 * acc / nt);
    }
    return out;
}

}  // namespace hk::refcheck
