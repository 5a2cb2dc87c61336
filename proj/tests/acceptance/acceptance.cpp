// Acceptance run: one PASS/FAIL line per criterion, with the measured quantity,
// its threshold and the wall time against the time budget.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hk/bessel.hpp"
#include "hk/contour.hpp"
#include "hk/dispersion.hpp"
#include "hk/errors.hpp"
#include "hk/greens.hpp"
#include "hk/scaled_value.hpp"

using namespace hk;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Planar annulus roots; the radicand is returned separately so a vanishing
// value can be reported exactly.
struct PlanarAnnulus {
    double radicand, plus, minus;
};
PlanarAnnulus planar_annulus(double b, int m) {
    const double q = (1 - b * b) * m / 2 - 1;
    const double rad = q * q - std::pow(b, 2 * m);
    const double mid = (1 - b * b) / 4;
    const double half = rad > 0 ? std::sqrt(rad) / (2 * m) : 0.0;
    return {rad, mid + half, mid - half};
}

Outcome kelvin_limit() {
    double worst = 0.0;
    for (int m = 2; m <= 10; ++m) {
        const double om = dispersion::omega_simply(m, DiskConfig(1.0, HelicalDomain(1e4)));
        worst = std::max(worst, std::fabs(om - (m - 1.0) / (2.0 * m)));
    }
    return {worst < 1e-4, fmt("max |Omega_m - (m-1)/2m| = %.3e (< 1e-4), m = 2..10", worst)};
}

Outcome annulus_limit() {
    Outcome o;
    double worst = 0.0;
    int compared = 0, degenerate = 0;
    for (double b : {0.3, 0.7})
        for (int m = 4; m <= 12; ++m) {
            const AnnulusConfig cfg(1.0, b, HelicalDomain(1e4));
            const auto pl = planar_annulus(b, m);
            if (pl.radicand < 0.0) {
                // No real planar roots: the helical spectrum must be degenerate too.
                ++degenerate;
                bool threw = false;
                try {
                    dispersion::omega_doubly(m, cfg);
                } catch (const DegenerateSpectrum&) {
                    threw = true;
                }
                if (!threw) {
                    o.pass = false;
                    o.detail += fmt("(b, m) = (%.1f, %d) planar radicand < 0 but roots returned; ", b, m);
                }
                continue;
            }
            const auto r = dispersion::omega_doubly(m, cfg);
            worst = std::max({worst, std::fabs(r.plus - pl.plus), std::fabs(r.minus - pl.minus)});
            ++compared;
        }
    const auto exact = planar_annulus(0.5, 3);
    const double delta = dispersion::discriminant(3, AnnulusConfig(1.0, 0.5, HelicalDomain(1e4)));
    const bool degeneracy = exact.radicand == 0.0 && std::fabs(delta) < 1e-6;
    o.pass = o.pass && worst < 1e-3 && degeneracy;
    o.detail += fmt("max root error %.3e (< 1e-3) over %d rows, %d rows degenerate in both; "
                    "(b, m) = (0.5, 3): planar radicand = %g exactly, helical Delta_3 = %.3e",
                    worst, compared, degenerate, exact.radicand, delta);
    return o;
}

Outcome bessel_identities() {
    // Recurrence residuals are measured against the largest term; ratio bounds
    // compare C - n with the bound minus n written as z^2 / (sqrt(p^2 + z^2) + p).
    const auto zs = dispersion::log_grid(1e-3, 1e3, 40);
    auto gap = [](double p, double z) { return z * z / (std::sqrt(p * p + z * z) + p); };
    double w = 0.0, ri = 0.0, rk = 0.0;
    long failures = 0, checks = 0;
    for (int n = 1; n <= 200; ++n)
        for (double z : zs) {
            const auto e = bessel::evaluate(n, z);
            w = std::max(w, std::fabs(z * (e.i * e.k_prime - e.k * e.i_prime).to_double() + 1.0));
            const auto im = bessel::bessel_i(n - 1, z), ip = bessel::bessel_i(n + 1, z);
            const auto km = bessel::bessel_k(n - 1, z), kp = bessel::bessel_k(n + 1, z);
            ri = std::max(ri, std::fabs(((im - ip - e.i.scaled(2.0 * n / z)) / im).to_double()));
            rk = std::max(rk, std::fabs(((km - kp + e.k.scaled(2.0 * n / z)) / kp).to_double()));

            const double ei = bessel::ratio_ci_excess(n, z), ek = bessel::ratio_ck_excess(n, z);
            const double ik = bessel::product_ik(n, z), nn = n;
            const bool ok[] = {
                gap(nn + 1, z) < ei,
                ei < gap(nn + 0.5, z),
                gap(nn - 0.5, z) < ek,
                ek < gap(nn - 1, z),
                1.0 / (1.0 + std::sqrt(nn * nn + z * z) + std::sqrt((nn - 1) * (nn - 1) + z * z)) < ik,
                ik < 1.0 / (2.0 * std::sqrt((nn - 0.5) * (nn - 0.5) + z * z)),
            };
            for (bool b : ok) {
                ++checks;
                failures += !b;
            }
        }
    const bool pass = w < 1e-11 && ri < 1e-11 && rk < 1e-11 && failures == 0;
    return {pass, fmt("Wronskian %.2e, I recurrence %.2e, K recurrence %.2e (< 1e-11); "
                      "ratio/product bounds %ld of %ld strict, n = 1..200 x 40 z",
                      w, ri, rk, checks - failures, checks)};
}

Outcome monotonicity() {
    const auto rep = dispersion::scan_monotonicity(dispersion::log_grid(1e-3, 1e3, 200), 3, 500);
    const bool pass = rep.violations.empty() && rep.product_violations.empty() && rep.min_f > 0.0;
    return {pass, fmt("200 z x nu = 3..500: min f_z = %.3e, %zu f violations, %zu product violations, "
                      "min relative product gap %.3e",
                      rep.min_f, rep.violations.size(), rep.product_violations.size(), rep.min_product_gap)};
}

Outcome trivial_residual() {
    std::mt19937 rng(20261015);
    std::uniform_real_distribution<double> om(-1.0, 2.0), rad(0.5, 2.0), pitch(0.5, 5.0), frac(0.3, 0.8);
    std::uniform_int_distribution<int> fold(2, 6);
    const Discretization d;
    double worst_s = 0.0, worst_d = 0.0;
    for (int draw = 0; draw < 5; ++draw) {
        const double o = om(rng), a = rad(rng), h = pitch(rng), f = frac(rng);
        const int m = fold(rng);
        const HelicalDomain dom(h);
        worst_s = std::max(worst_s, contour::eval_f(o, Contour::circle(a, m, d.n_modes), dom, d).max_abs());
        const auto g = contour::eval_f_doubly(o, Contour::circle(a, m, d.n_modes), Contour::circle(f * a, m, d.n_modes),
                                              dom, d);
        worst_d = std::max({worst_d, g.first.max_abs(), g.second.max_abs()});
    }
    return {worst_s < 1e-9 && worst_d < 1e-9,
            fmt("5 random draws: simply %.3e, doubly %.3e (< 1e-9)", worst_s, worst_d)};
}

double richardson(const std::function<double(double)>& q) { return (10.0 * q(1e-6) - q(1e-5)) / 9.0; }

Outcome linearization() {
    Discretization d;
    d.n_modes = 4;
    d.n_theta = 64;
    d.n_rho = 24;
    d.k_max = 192;
    const double om = 0.1;
    double worst_s = 0.0;
    for (int m : {2, 3, 4})
        for (auto [a, h] : {std::pair{1.0, 1.0}, std::pair{1.0, 5.0}}) {
            const DiskConfig cfg(a, HelicalDomain(h));
            const auto lambda = contour::linearize_simply(om, cfg, m, 4);
            const auto g0 = contour::eval_f(om, Contour::circle(a, m, 4), cfg.domain, d);
            for (int n = 1; n <= 4; ++n) {
                const double fd = richardson([&](double eps) {
                    Contour c = Contour::circle(a, m, 4);
                    c.cos_coeffs[n - 1] = eps;
                    return (contour::eval_f(om, c, cfg.domain, d).sin_coeffs[n - 1] - g0.sin_coeffs[n - 1]) / eps;
                });
                worst_s = std::max(worst_s, std::fabs(fd - lambda[n - 1]) / std::fabs(lambda[n - 1]));
            }
        }

    // Doubly connected: the derivative in plain (outer, inner) coefficients is
    // S B S with S = diag(1, -1), B = -n m M_{nm}.
    const int m = 3;
    const AnnulusConfig cfg(1.0, 0.6, HelicalDomain(1.0));
    const double omd = 0.35;
    const auto blocks = contour::linearize_doubly(omd, cfg, m, 4);
    const auto base = contour::eval_f_doubly(omd, Contour::circle(1.0, m, 4), Contour::circle(0.6, m, 4), cfg.domain, d);
    double worst_d = 0.0;
    for (int n = 1; n <= 4; ++n) {
        const auto& b = blocks[n - 1];
        const double scale = std::max({std::fabs(b[0][0]), std::fabs(b[0][1]), std::fabs(b[1][0]), std::fabs(b[1][1])});
        for (int col = 0; col < 2; ++col) {
            std::vector<double> fd(2);
            for (int row = 0; row < 2; ++row)
                fd[row] = richardson([&](double eps) {
                    Contour outer = Contour::circle(1.0, m, 4), inner = Contour::circle(0.6, m, 4);
                    (col == 0 ? outer : inner).cos_coeffs[n - 1] = eps;
                    const auto g = contour::eval_f_doubly(omd, outer, inner, cfg.domain, d);
                    const auto& now = row == 0 ? g.first : g.second;
                    const auto& ref = row == 0 ? base.first : base.second;
                    return (now.sin_coeffs[n - 1] - ref.sin_coeffs[n - 1]) / eps;
                });
            for (int row = 0; row < 2; ++row) {
                const double sign = row == col ? 1.0 : -1.0;
                worst_d = std::max(worst_d, std::fabs(fd[row] - sign * b[row][col]) / scale);
            }
        }
    }
    return {worst_s < 1e-4 && worst_d < 1e-4,
            fmt("simply: max rel. error vs lambda_n %.3e (n = 1..4, m = 2,3,4, (a,h) = (1,1),(1,5)); "
                "doubly: max error vs -nm S M S %.3e relative to block size, S = diag(1,-1) (< 1e-4)",
                worst_s, worst_d)};
}

double deviation_from_leading(const Contour& c, double s) {
    double dev = 0.0;
    const int m = c.m_fold;
    for (int j = 0; j < 2048; ++j) {
        const double th = 2.0 * M_PI * j / 2048;
        dev = std::max(dev, std::fabs(c.radius(th) - (c.base_radius + s * std::cos(m * th))));
    }
    return dev;
}

bool quadratic_tail(const std::vector<double>& h) {
    if (h.size() < 3) return false;
    const double a = h[h.size() - 3], b = h[h.size() - 2], c = h[h.size() - 1];
    if (c < 1e-13) return b < a;
    return std::log(c / b) / std::log(b / a) >= 1.8;
}

Outcome branch_simply() {
    const DiskConfig cfg(1.0, HelicalDomain(1.0));
    const int m = 3;
    const Discretization d;
    const double om3 = dispersion::omega_simply(m, cfg);
    const std::vector<double> ss = {0.02, 0.01, 0.005};
    const auto pts = contour::bifurcate_simply(cfg, m, ss, d);
    Outcome o;
    std::vector<double> shift, dev;
    double worst_res = 0.0, worst_rel = 0.0;
    for (const auto& p : pts) {
        if (!(p.residual <= d.tol) || !quadratic_tail(p.newton_history)) o.pass = false;
        shift.push_back(std::fabs(p.omega - om3));
        dev.push_back(deviation_from_leading(p.contours[0], p.s));
        const auto rep = contour::boundary_report(p, cfg.domain, d.refined());
        worst_res = std::max(worst_res, rep.residual);
        worst_rel = std::max(worst_rel, rep.residual / rep.psi_range);
    }
    o.pass = o.pass && shift[0] > shift[1] && shift[1] > shift[2];
    const double f1 = dev[0] / dev[1], f2 = dev[1] / dev[2];
    o.pass = o.pass && f1 >= 3.0 && f2 >= 3.0 && worst_res < 1e-6;
    o.detail = fmt("|Omega - Omega_3| = %.3e, %.3e, %.3e; deviation %.3e, %.3e, %.3e (ratios %.2f, %.2f >= 3); "
                   "boundary residual max %.3e (< 1e-6, %.1e of psi range)",
                   shift[0], shift[1], shift[2], dev[0], dev[1], dev[2], f1, f2, worst_res, worst_rel);
    return o;
}

Outcome branch_doubly() {
    const AnnulusConfig cfg(1.0, 0.6, HelicalDomain(1.0));
    int m = 2;
    while (!(dispersion::discriminant(m, cfg) > 0.0)) ++m;
    const Discretization d;
    Outcome o;
    o.detail = fmt("m = %d;", m);
    for (auto br : {dispersion::Branch::Plus, dispersion::Branch::Minus}) {
        const auto pts = contour::bifurcate_doubly(cfg, m, br, {0.005}, d);
        const auto& p = pts[0];
        const auto v = dispersion::kernel_vector(m, cfg, br);
        const double ratio = p.contours[1].cos_coeffs[0] / p.contours[0].cos_coeffs[0];
        // Boundary coefficients carry the kernel as (v1, -v2).
        const double want = -v[1] / v[0];
        const double rel = std::fabs(ratio - want) / std::fabs(want);
        const bool ok = p.residual <= d.tol && quadratic_tail(p.newton_history) && rel < 0.05;
        o.pass = o.pass && ok;
        o.detail += fmt(" %s: inner/outer r_1 = %.5f vs kernel -v2/v1 = %.5f (rel. %.2e < 5%%), residual %.1e;",
                        br == dispersion::Branch::Plus ? "+" : "-", ratio, want, rel, p.residual);
    }
    return o;
}

Outcome green_kernel() {
    double worst = 0.0;
    for (int m : {1, 2, 3, 8})
        for (double h : {0.5, 1.0, 5.0}) {
            std::vector<double> grid;
            for (int i = 0; i < 80; ++i) {
                const double r = 0.2 + 2.3 * i / 79;
                if (std::fabs(r - 1.1) > 0.0101) grid.push_back(r);
            }
            worst = std::max(worst, greens::green_mode_residual(m, grid, 1.1, HelicalDomain(h)));
        }
    // Closed form at the boundary, to the last bit for dyadic data and to rounding otherwise.
    bool dyadic = true;
    double rel = 0.0;
    for (auto [a, h] : {std::pair{1.0, 1.0}, std::pair{0.5, 0.5}, std::pair{2.0, 2.0}})
        dyadic = dyadic && greens::stream_disk_dr(a, a, HelicalDomain(h)) == -a * (h * h + a * a) / (2 * h * h);
    for (double a : {0.3, 1.0, 1.7})
        for (double h : {0.5, 1.0, 5.0}) {
            const double want = -a * (h * h + a * a) / (2 * h * h);
            rel = std::max(rel, std::fabs(greens::stream_disk_dr(a, a, HelicalDomain(h)) - want) / std::fabs(want));
        }
    return {worst < 1e-6 && dyadic && rel <= 4e-16,
            fmt("ODE residual max %.3e (< 1e-6); stream_disk_dr(a, a, h) = -a(h^2+a^2)/2h^2: dyadic cases %s, "
                "max rel. difference %.1e",
                worst, dyadic ? "bit-exact" : "NOT exact", rel)};
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;
    Outcome (*run)();
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {1, "2D Kelvin limit", 1.0, kelvin_limit},
        {2, "2D annulus limit", 2.0, annulus_limit},
        {3, "Bessel identities and bounds", 5.0, bessel_identities},
        {4, "monotonicity certificate", 30.0, monotonicity},
        {5, "trivial-branch residual", 10.0, trivial_residual},
        {6, "linearization equivalence", 60.0, linearization},
        {7, "simply connected branch", 120.0, branch_simply},
        {8, "doubly connected branches", 240.0, branch_doubly},
        {9, "Green kernel ODE", 5.0, green_kernel},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("criterion %d %s: %s  %s  [%.2f s of %.0f s%s]\n", c.id, c.name, pass ? "PASS" : "FAIL",
                    o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", over budget");
        std::fflush(stdout);
    }
    std::printf("%d of 9 criteria passed\n", 9 - failed);
    return failed == 0 ? 0 : 1;
}
