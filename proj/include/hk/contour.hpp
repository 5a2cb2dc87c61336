#pragma once

#include <array>
#include <utility>
#include <vector>

#include "hk/dispersion.hpp"
#include "hk/domain.hpp"

namespace hk {

// Boundary R(theta) = sqrt(a^2 + 2 r(theta)), r(theta) = sum_n r_n cos(n m theta).
struct Contour {
    double base_radius = 1.0;
    int m_fold = 2;
    std::vector<double> cos_coeffs;

    static Contour circle(double a, int m_fold, int n_modes);

    double r(double theta) const;
    double dr(double theta) const;
    double radius(double theta) const;

    // Throws StepSizeError when 2 sum |r_n| >= a^2, InvalidArgument on bad fields.
    void validate() const;
};

struct Discretization {
    static constexpr int kMaxGreenModes = 4096;

    int n_modes = 16;
    int n_theta = 512;
    int n_rho = 32;
    int k_max = 0;  // 0: adaptive, starting at max(64, 16 m)
    double tol = 1e-9;
    double newton_tol = 1e-11;
    int newton_max_iter = 25;

    void validate(int m_fold) const;
    // n_theta rounded up to a multiple of 2 m, so the node set shares the
    // contour's rotation and reflection symmetry.
    int angular_nodes(int m_fold) const;
    // Nodes used with Green modes up to k: at least 4 k, which keeps aliasing
    // of the highest modes below the mode-truncation error.
    int angular_nodes(int m_fold, int k) const;
    int initial_k_max(int m_fold) const;
    // Doubles n_theta, n_rho and k_max (when fixed).
    Discretization refined() const;
};

struct SineSeries {
    std::vector<double> sin_coeffs;  // g_n multiplies sin(n m theta)
    double max_abs() const;
};

struct BranchPoint {
    double s = 0.0;
    double omega = 0.0;
    std::vector<Contour> contours;  // outer first for the doubly connected case
    double residual = 0.0;
    int k_max_used = 0;
    std::vector<double> newton_history;
};

}  // namespace hk

namespace hk::contour {

struct EvalInfo {
    int k_max_used = 0;
    double tail_estimate = 0.0;  // max |change of g_n| from the last octave of Green modes
};

// Sine coefficients of F(Omega, r) = Omega r' + d/dtheta Phi on the boundary.
SineSeries eval_f(double omega, const Contour& contour, const HelicalDomain& domain,
                  const Discretization& disc, EvalInfo* info = nullptr);

// F_1 on the outer boundary and F_2 on the inner boundary of the patch between them.
std::pair<SineSeries, SineSeries> eval_f_doubly(double omega, const Contour& outer, const Contour& inner,
                                                const HelicalDomain& domain, const Discretization& disc,
                                                EvalInfo* info = nullptr);

// Phi and F sampled at every angular node with no symmetry reduction: all
// Green modes up to k_max, every source node, sine and cosine parts.
struct Samples {
    std::vector<double> theta;
    std::vector<std::vector<double>> phi;  // per contour
    std::vector<std::vector<double>> f;    // per contour, spectral derivative
};
Samples sample_f(double omega, const std::vector<Contour>& contours, const HelicalDomain& domain,
                 const Discretization& disc);

// Multipliers lambda_n = -n m (Omega - Omega_{nm}), n = 1..n_modes: the
// trivial-point Jacobian maps cos(n m theta) to lambda_n sin(n m theta).
std::vector<double> linearize_simply(double omega, const DiskConfig& cfg, int m_fold, int n_modes);

// Blocks -n m M_{nm}(Omega), n = 1..n_modes, with M from dispersion::matrix_m.
// These act on (outer, -inner) coefficient pairs: in plain (outer, inner)
// coefficients the off-diagonal entries of the Jacobian change sign.
using Matrix2 = std::array<std::array<double, 2>, 2>;
std::vector<Matrix2> linearize_doubly(double omega, const AnnulusConfig& cfg, int m_fold, int n_modes);

// Unit kernel direction of the trivial-point Jacobian in plain (outer, inner)
// mode-1 coefficients, outer component >= 0. Proportional to (v1, -v2) for
// v = dispersion::kernel_vector.
std::array<double, 2> physical_kernel_direction(int m_fold, const AnnulusConfig& cfg, dispersion::Branch branch);

std::vector<BranchPoint> bifurcate_simply(const DiskConfig& cfg, int m_fold, const std::vector<double>& s_targets,
                                          const Discretization& disc);

std::vector<BranchPoint> bifurcate_doubly(const AnnulusConfig& cfg, int m_fold, dispersion::Branch branch,
                                          const std::vector<double>& s_targets, const Discretization& disc);

// max over boundary components of (max - min) of Phi + Omega |x|^2 / 2 at
// boundary points offset by half a node from the solver grid.
struct BoundaryReport {
    double residual = 0.0;
    double psi_range = 0.0;  // max - min of Phi alone
    std::vector<double> per_component;
};
BoundaryReport boundary_report(const BranchPoint& point, const HelicalDomain& domain, const Discretization& disc_fine);
double boundary_residual(const BranchPoint& point, const HelicalDomain& domain, const Discretization& disc_fine);

// max |g| over every output series at the stored discretization.
double point_residual(const BranchPoint& point, const HelicalDomain& domain, const Discretization& disc);

}  // namespace hk::contour
