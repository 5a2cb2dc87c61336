#pragma once

#include <array>
#include <utility>
#include <vector>

#include "hk/domain.hpp"

namespace hk::dispersion {

// Omega_n = (h^2 + a^2) / (2 h^2) + (a^2 / h^2) I_n'(n a / h) K_n'(n a / h).
double omega_simply(int n, const DiskConfig& cfg);

double upsilon(double a, double b, const HelicalDomain& domain);
// Gamma_n(a, b) = -(a b / h^2) I_n'(n b / h) K_n'(n a / h) > 0.
double gamma(int n, double a, double b, const HelicalDomain& domain);

struct SpectralMatrix2 {
    std::array<std::array<double, 2>, 2> entries{};
    double trace() const { return entries[0][0] + entries[1][1]; }
    double det() const { return entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0]; }
    double max_abs() const;
};

SpectralMatrix2 matrix_m(int n, double omega, const AnnulusConfig& cfg);
// The same matrix written directly in Bessel products; an independent check on matrix_m.
SpectralMatrix2 matrix_m_bessel_form(int n, double omega, const AnnulusConfig& cfg);

double discriminant(int n, const AnnulusConfig& cfg);

struct OmegaPair {
    double plus;
    double minus;
};
// Throws DegenerateSpectrum when discriminant(n) <= 0.
OmegaPair omega_doubly(int n, const AnnulusConfig& cfg);

enum class Branch { Plus, Minus };
std::array<double, 2> kernel_vector(int n, const AnnulusConfig& cfg, Branch branch);

// Smallest n in [1, n_max] from which Delta_n > 0, Omega^+ increases and
// Omega^- decreases at every step up to n_max; -1 if none.
int doubly_threshold(const AnnulusConfig& cfg, int n_max);

// Monotonicity certificate functions, evaluated literally.
double f_z(double nu, double z);
double h_z(double s, double z);
double g_z(double s, double z);

struct Violation {
    double z;
    int nu;
};

struct MonotonicityReport {
    std::vector<double> z_grid;
    std::pair<int, int> nu_range;
    double min_f = 0.0;
    std::vector<double> min_f_per_z;
    std::vector<Violation> violations;          // f_z(nu) <= 0
    std::vector<Violation> product_violations;  // product(nu-1) >= product(nu)
    double min_product_gap = 0.0;               // min of (product(nu) - product(nu-1)) / |product(nu)|
};

// f_z(nu) > 0 certifies product(nu-1) < product(nu), so both checks run over nu in [nu_min, nu_max].
MonotonicityReport scan_monotonicity(const std::vector<double>& z_grid, int nu_min, int nu_max);

std::vector<double> log_grid(double lo, double hi, int points);

}  // namespace hk::dispersion
