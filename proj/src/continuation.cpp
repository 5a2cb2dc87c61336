#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "hk/contour.hpp"
#include "hk/dispersion.hpp"
#include "hk/errors.hpp"

namespace hk::contour {
namespace {

// Unknowns x map to (Omega, contours); the residual stacks every output series.
// The last entry of x is always Omega.
struct Problem {
    std::function<std::vector<Contour>(const Eigen::VectorXd&)> contours;
    const HelicalDomain* domain = nullptr;
    double fd_scale = 1.0;
};

Eigen::VectorXd residual(const Problem& p, const Eigen::VectorXd& x, const Discretization& disc, EvalInfo* info) {
    const double omega = x(x.size() - 1);
    const std::vector<Contour> cs = p.contours(x);
    std::vector<SineSeries> out;
    if (cs.size() == 1) {
        out.push_back(eval_f(omega, cs[0], *p.domain, disc, info));
    } else {
        auto pr = eval_f_doubly(omega, cs[0], cs[1], *p.domain, disc, info);
        out = {pr.first, pr.second};
    }
    Eigen::VectorXd f(static_cast<Eigen::Index>(out.size()) * disc.n_modes);
    Eigen::Index row = 0;
    for (const auto& s : out)
        for (double v : s.sin_coeffs) f(row++) = v;
    return f;
}

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// d g_n / d Omega = -n m r_n for every output series.
Eigen::VectorXd omega_column(const std::vector<Contour>& cs, int n_modes) {
    Eigen::VectorXd col(static_cast<Eigen::Index>(cs.size()) * n_modes);
    Eigen::Index row = 0;
    for (const auto& c : cs)
        for (int n = 1; n <= n_modes; ++n) {
            const double rn = n <= static_cast<int>(c.cos_coeffs.size()) ? c.cos_coeffs[n - 1] : 0.0;
            col(row++) = -static_cast<double>(n * c.m_fold) * rn;
        }
    return col;
}

struct NewtonResult {
    Eigen::VectorXd x;
    double residual = 0.0;
    std::vector<double> history;
};

// Newton at a fixed mode cutoff. The Jacobian is refreshed every step: forward
// differences for the coefficient columns, closed form for the Omega column.
// Convergence needs a small residual and a negligible last correction, so a
// close predictor still gets a confirming step.
NewtonResult newton(const Problem& p, Eigen::VectorXd x, const Discretization& disc) {
    NewtonResult res;
    const Eigen::Index n = x.size();
    double last_step = INFINITY;
    for (int iter = 0;; ++iter) {
        const Eigen::VectorXd f = residual(p, x, disc, nullptr);
        const double norm = inf_norm(f);
        res.history.push_back(norm);
        if (!std::isfinite(norm)) break;
        if (norm < disc.newton_tol && last_step <= disc.newton_tol * std::max(1.0, inf_norm(x))) {
            res.x = x;
            res.residual = norm;
            return res;
        }
        const std::size_t h = res.history.size();
        const bool stalled = h >= 3 && norm > 0.5 * res.history[h - 3];
        if (stalled && norm <= disc.tol) {
            res.x = x;
            res.residual = norm;
            return res;
        }
        if (iter >= disc.newton_max_iter) break;

        Eigen::MatrixXd jac(f.size(), n);
        const Eigen::VectorXd& f0 = f;
        for (Eigen::Index j = 0; j + 1 < n; ++j) {
            const double step = 1e-7 * p.fd_scale;
            Eigen::VectorXd xp = x;
            xp(j) += step;
            jac.col(j) = (residual(p, xp, disc, nullptr) - f0) / step;
        }
        jac.col(n - 1) = omega_column(p.contours(x), disc.n_modes);
        const Eigen::VectorXd dx = jac.colPivHouseholderQr().solve(-f);
        if (!dx.allFinite()) break;
        last_step = inf_norm(dx);
        x += dx;
        p.contours(x);  // validates the radius bound; throws StepSizeError
    }
    throw ContinuationError("newton: no convergence after " + std::to_string(res.history.size()) + " residual evaluations",
                            std::vector<double>(x.data(), x.data() + x.size()), res.history);
}

struct Solved {
    Eigen::VectorXd x;
    double residual = 0.0;
    int k_max = 0;
    std::vector<double> history;
};

// Picks the cutoff adaptively at the predictor, solves, re-checks the cutoff at
// the solution and re-solves if it grew.
Solved solve_point(const Problem& p, const Eigen::VectorXd& guess, const Discretization& disc) {
    Discretization adaptive = disc;
    EvalInfo info;
    residual(p, guess, adaptive, &info);
    Solved out;
    out.x = guess;
    int k = info.k_max_used;
    for (int round = 0; round < 4; ++round) {
        Discretization fixed = disc;
        fixed.k_max = k;
        NewtonResult nr = newton(p, out.x, fixed);
        out.x = nr.x;
        out.residual = nr.residual;
        out.history.insert(out.history.end(), nr.history.begin(), nr.history.end());
        out.k_max = k;
        if (disc.k_max > 0) break;
        residual(p, out.x, adaptive, &info);
        if (info.k_max_used <= k) break;
        k = info.k_max_used;
    }
    return out;
}

std::vector<std::size_t> amplitude_order(const std::vector<double>& s_targets) {
    std::vector<std::size_t> order(s_targets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::fabs(s_targets[a]) < std::fabs(s_targets[b]); });
    return order;
}

void check_targets(const std::vector<double>& s_targets) {
    for (double s : s_targets)
        if (!std::isfinite(s)) throw InvalidArgument("bifurcate: amplitudes must be finite");
}

}  // namespace

std::vector<BranchPoint> bifurcate_simply(const DiskConfig& cfg, int m_fold, const std::vector<double>& s_targets,
                                          const Discretization& disc) {
    if (m_fold < 2) throw InvalidArgument("bifurcate_simply: m_fold must be >= 2");
    disc.validate(m_fold);
    check_targets(s_targets);
    const int nm = disc.n_modes;
    const double a = cfg.a;
    const double omega_m = dispersion::omega_simply(m_fold, cfg);

    std::vector<BranchPoint> points(s_targets.size());
    bool have_prev = false;
    double s_prev = 0.0;
    Eigen::VectorXd x_prev;
    for (std::size_t idx : amplitude_order(s_targets)) {
        const double s = s_targets[idx];
        Problem p;
        p.domain = &cfg.domain;
        p.fd_scale = a * a;
        p.contours = [&, s](const Eigen::VectorXd& x) {
            Contour c = Contour::circle(a, m_fold, nm);
            c.cos_coeffs[0] = s * a;
            for (int n = 2; n <= nm; ++n) c.cos_coeffs[n - 1] = x(n - 2);
            c.validate();
            return std::vector<Contour>{c};
        };
        BranchPoint bp;
        bp.s = s;
        if (s == 0.0) {
            bp.omega = omega_m;
            bp.contours = {Contour::circle(a, m_fold, nm)};
            EvalInfo info;
            bp.residual = eval_f(omega_m, bp.contours[0], cfg.domain, disc, &info).max_abs();
            bp.k_max_used = info.k_max_used;
            bp.newton_history = {bp.residual};
            points[idx] = bp;
            continue;
        }
        Eigen::VectorXd guess = Eigen::VectorXd::Zero(nm);
        guess(nm - 1) = omega_m;
        if (have_prev && s_prev != 0.0) {
            const double ratio = s / s_prev;
            for (int n = 2; n <= nm; ++n) guess(n - 2) = x_prev(n - 2) * std::pow(ratio, n);
            guess(nm - 1) = omega_m + (x_prev(nm - 1) - omega_m) * ratio * ratio;
        }
        const Solved sol = solve_point(p, guess, disc);
        bp.omega = sol.x(nm - 1);
        bp.contours = p.contours(sol.x);
        bp.residual = sol.residual;
        bp.k_max_used = sol.k_max;
        bp.newton_history = sol.history;
        points[idx] = bp;
        have_prev = true;
        s_prev = s;
        x_prev = sol.x;
    }
    return points;
}

std::array<double, 2> physical_kernel_direction(int m_fold, const AnnulusConfig& cfg, dispersion::Branch branch) {
    const auto v = dispersion::kernel_vector(m_fold, cfg, branch);
    // kernel_vector is written for the printed block matrix; in boundary
    // coefficients (r_1, r_2) the inner component changes sign.
    double e1 = v[0], e2 = -v[1];
    const double norm = std::hypot(e1, e2);
    e1 /= norm;
    e2 /= norm;
    if (e1 < 0.0 || (e1 == 0.0 && e2 < 0.0)) {
        e1 = -e1;
        e2 = -e2;
    }
    return {e1, e2};
}

std::vector<BranchPoint> bifurcate_doubly(const AnnulusConfig& cfg, int m_fold, dispersion::Branch branch,
                                          const std::vector<double>& s_targets, const Discretization& disc) {
    if (m_fold < 2) throw InvalidArgument("bifurcate_doubly: m_fold must be >= 2");
    disc.validate(m_fold);
    check_targets(s_targets);
    const auto roots = dispersion::omega_doubly(m_fold, cfg);  // DegenerateSpectrum when Delta_m <= 0
    const double omega_m = branch == dispersion::Branch::Plus ? roots.plus : roots.minus;
    const auto e = physical_kernel_direction(m_fold, cfg, branch);
    const int nm = disc.n_modes;
    const double a1 = cfg.a1, a2 = cfg.a2;
    // x = (t, outer r_2..r_N, inner r_2..r_N, Omega); mode-1 pair = s a1 e + t e_perp.
    const Eigen::Index nx = 2 * nm;

    std::vector<BranchPoint> points(s_targets.size());
    bool have_prev = false;
    double s_prev = 0.0;
    Eigen::VectorXd x_prev;
    for (std::size_t idx : amplitude_order(s_targets)) {
        const double s = s_targets[idx];
        Problem p;
        p.domain = &cfg.domain;
        p.fd_scale = a1 * a1;
        p.contours = [&, s](const Eigen::VectorXd& x) {
            Contour outer = Contour::circle(a1, m_fold, nm);
            Contour inner = Contour::circle(a2, m_fold, nm);
            const double t = x(0);
            outer.cos_coeffs[0] = s * a1 * e[0] - t * e[1];
            inner.cos_coeffs[0] = s * a1 * e[1] + t * e[0];
            for (int n = 2; n <= nm; ++n) {
                outer.cos_coeffs[n - 1] = x(n - 1);
                inner.cos_coeffs[n - 1] = x(nm + n - 2);
            }
            outer.validate();
            inner.validate();
            return std::vector<Contour>{outer, inner};
        };
        BranchPoint bp;
        bp.s = s;
        if (s == 0.0) {
            bp.omega = omega_m;
            bp.contours = {Contour::circle(a1, m_fold, nm), Contour::circle(a2, m_fold, nm)};
            EvalInfo info;
            const auto g = eval_f_doubly(omega_m, bp.contours[0], bp.contours[1], cfg.domain, disc, &info);
            bp.residual = std::max(g.first.max_abs(), g.second.max_abs());
            bp.k_max_used = info.k_max_used;
            bp.newton_history = {bp.residual};
            points[idx] = bp;
            continue;
        }
        Eigen::VectorXd guess = Eigen::VectorXd::Zero(nx);
        guess(nx - 1) = omega_m;
        if (have_prev && s_prev != 0.0) {
            const double ratio = s / s_prev;
            guess(0) = x_prev(0) * ratio * ratio;
            for (int n = 2; n <= nm; ++n) {
                guess(n - 1) = x_prev(n - 1) * std::pow(ratio, n);
                guess(nm + n - 2) = x_prev(nm + n - 2) * std::pow(ratio, n);
            }
            guess(nx - 1) = omega_m + (x_prev(nx - 1) - omega_m) * ratio * ratio;
        }
        const Solved sol = solve_point(p, guess, disc);
        bp.omega = sol.x(nx - 1);
        bp.contours = p.contours(sol.x);
        bp.residual = sol.residual;
        bp.k_max_used = sol.k_max;
        bp.newton_history = sol.history;
        points[idx] = bp;
        have_prev = true;
        s_prev = s;
        x_prev = sol.x;
    }
    return points;
}

}  // namespace hk::contour
