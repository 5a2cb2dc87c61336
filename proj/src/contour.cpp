#include "hk/contour.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hk/errors.hpp"

namespace hk {

Contour Contour::circle(double a, int m_fold, int n_modes) {
    Contour c;
    c.base_radius = a;
    c.m_fold = m_fold;
    c.cos_coeffs.assign(static_cast<std::size_t>(std::max(n_modes, 0)), 0.0);
    c.validate();
    return c;
}

double Contour::r(double theta) const {
    double acc = 0.0;
    for (std::size_t n = 0; n < cos_coeffs.size(); ++n)
        acc += cos_coeffs[n] * std::cos(static_cast<double>((n + 1) * m_fold) * theta);
    return acc;
}

double Contour::dr(double theta) const {
    double acc = 0.0;
    for (std::size_t n = 0; n < cos_coeffs.size(); ++n) {
        const double k = static_cast<double>((n + 1) * m_fold);
        acc -= k * cos_coeffs[n] * std::sin(k * theta);
    }
    return acc;
}

double Contour::radius(double theta) const { return std::sqrt(base_radius * base_radius + 2.0 * r(theta)); }

void Contour::validate() const {
    if (!std::isfinite(base_radius) || !(base_radius > 0.0)) throw InvalidArgument("contour: base radius must be positive");
    if (m_fold < 1) throw InvalidArgument("contour: m_fold must be >= 1");
    double total = 0.0;
    for (double c : cos_coeffs) {
        if (!std::isfinite(c)) throw InvalidArgument("contour: non-finite coefficient");
        total += std::fabs(c);
    }
    if (!(2.0 * total < base_radius * base_radius))
        throw StepSizeError("contour: 2 sum |r_n| must stay below a^2; use a smaller amplitude");
}

void Discretization::validate(int m_fold) const {
    if (m_fold < 1) throw InvalidArgument("discretization: m_fold must be >= 1");
    if (n_modes < 1) throw InvalidArgument("discretization: n_modes must be >= 1");
    if (n_rho < 4 || n_rho > 256) throw InvalidArgument("discretization: n_rho must lie in [4, 256]");
    if (n_theta < 4 * n_modes * m_fold)
        throw InvalidArgument("discretization: n_theta must be at least 4 n_modes m_fold (" +
                              std::to_string(4 * n_modes * m_fold) + ")");
    if (k_max < 0) throw InvalidArgument("discretization: k_max must be >= 0");
    if (!(tol > 0.0) || !(newton_tol > 0.0)) throw InvalidArgument("discretization: tolerances must be positive");
    if (newton_max_iter < 1) throw InvalidArgument("discretization: newton_max_iter must be >= 1");
    if (k_max > kMaxGreenModes) throw InvalidArgument("discretization: k_max above " + std::to_string(kMaxGreenModes));
}

int Discretization::angular_nodes(int m_fold) const {
    const int step = 2 * m_fold;
    return ((n_theta + step - 1) / step) * step;
}

int Discretization::angular_nodes(int m_fold, int k) const {
    const int step = 2 * m_fold;
    const int want = std::max(n_theta, 4 * k);
    return ((want + step - 1) / step) * step;
}

int Discretization::initial_k_max(int m_fold) const {
    const int base = k_max > 0 ? k_max : std::max(64, 16 * m_fold);
    return ((base + m_fold - 1) / m_fold) * m_fold;
}

Discretization Discretization::refined() const {
    Discretization d = *this;
    d.n_theta *= 2;
    d.n_rho = std::min(2 * n_rho, 256);
    if (k_max > 0) d.k_max *= 2;
    return d;
}

double SineSeries::max_abs() const {
    double m = 0.0;
    for (double v : sin_coeffs) m = std::max(m, std::fabs(v));
    return m;
}

}  // namespace hk

namespace hk::contour {

std::vector<double> linearize_simply(double omega, const DiskConfig& cfg, int m_fold, int n_modes) {
    if (m_fold < 1) throw InvalidArgument("linearize_simply: m_fold must be >= 1");
    if (n_modes < 1) throw InvalidArgument("linearize_simply: n_modes must be >= 1");
    std::vector<double> lambda(static_cast<std::size_t>(n_modes));
    for (int n = 1; n <= n_modes; ++n) {
        const int k = n * m_fold;
        lambda[n - 1] = -static_cast<double>(k) * (omega - dispersion::omega_simply(k, cfg));
    }
    return lambda;
}

std::vector<Matrix2> linearize_doubly(double omega, const AnnulusConfig& cfg, int m_fold, int n_modes) {
    if (m_fold < 1) throw InvalidArgument("linearize_doubly: m_fold must be >= 1");
    if (n_modes < 1) throw InvalidArgument("linearize_doubly: n_modes must be >= 1");
    std::vector<Matrix2> blocks(static_cast<std::size_t>(n_modes));
    for (int n = 1; n <= n_modes; ++n) {
        const int k = n * m_fold;
        const auto m = dispersion::matrix_m(k, omega, cfg).entries;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) blocks[n - 1][i][j] = -static_cast<double>(k) * m[i][j];
    }
    return blocks;
}

}  // namespace hk::contour
