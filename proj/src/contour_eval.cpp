#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hk/contour.hpp"
#include "hk/errors.hpp"
#include "potential.hpp"

namespace hk::contour {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int common_fold(const std::vector<Contour>& contours) {
    if (contours.empty()) throw InvalidArgument("contour: no boundary components");
    const int m = contours.front().m_fold;
    for (const auto& c : contours) {
        c.validate();
        if (c.m_fold != m) throw InvalidArgument("contour: boundary components must share m_fold");
    }
    return m;
}

double coeff(const Contour& c, int n) {
    return n <= static_cast<int>(c.cos_coeffs.size()) ? c.cos_coeffs[n - 1] : 0.0;
}

std::vector<int> fold_modes(int from_exclusive, int to_inclusive, int m) {
    std::vector<int> ks;
    for (int k = (from_exclusive / m + 1) * m; k <= to_inclusive; k += m) ks.push_back(k);
    return ks;
}

// Layers on the symmetry-reduced node set u = 0..N/(2m), shared by sources and targets.
struct ReducedGrid {
    int nodes = 0;
    std::vector<double> theta;
    std::vector<double> mult;
    std::vector<detail::Layer> layers;
};

ReducedGrid reduced_grid(const std::vector<Contour>& contours, int nodes, int m) {
    ReducedGrid g;
    g.nodes = nodes;
    const int half = nodes / (2 * m);
    for (int u = 0; u <= half; ++u) {
        g.theta.push_back(kTwoPi * u / nodes);
        g.mult.push_back((u == 0 || u == half) ? m : 2 * m);
    }
    for (std::size_t c = 0; c < contours.size(); ++c) {
        detail::RadiusPool pool;
        std::vector<int> raw;
        for (double th : g.theta) raw.push_back(pool.add(contours[c].radius(th)));
        detail::Layer layer;
        layer.sign = c == 0 ? 1 : -1;
        layer.base_radius = contours[c].base_radius;
        std::vector<int> ids;
        layer.radii = pool.finalize(ids);
        for (std::size_t u = 0; u < g.theta.size(); ++u) {
            layer.sources.push_back({g.theta[u], kTwoPi / nodes * g.mult[u], ids[raw[u]]});
            layer.targets.push_back({g.theta[u], ids[raw[u]]});
        }
        g.layers.push_back(std::move(layer));
    }
    return g;
}

std::vector<double> sine_coeffs(double omega, const Contour& c, const ReducedGrid& g, const std::vector<double>& phi,
                                int n_modes) {
    const int m = c.m_fold;
    std::vector<double> out(static_cast<std::size_t>(n_modes));
    for (int n = 1; n <= n_modes; ++n) {
        double acc = 0.0;
        for (std::size_t u = 0; u < g.theta.size(); ++u) acc += g.mult[u] * phi[u] * std::cos(n * m * g.theta[u]);
        const double phi_hat = 2.0 * acc / g.nodes;
        out[n - 1] = -static_cast<double>(n * m) * (omega * coeff(c, n) + phi_hat);
    }
    return out;
}

struct SeriesPass {
    std::vector<SineSeries> full;
    double tail = 0.0;  // max change of any coefficient across the last octave of modes
};

SeriesPass series_pass(double omega, const std::vector<Contour>& contours, const HelicalDomain& domain,
                       const Discretization& disc, int m, int k) {
    const ReducedGrid g = reduced_grid(contours, disc.angular_nodes(m, k), m);
    detail::PotentialOptions opts;
    opts.n_rho = disc.n_rho;
    opts.modes = fold_modes(0, k, m);
    opts.checkpoint = ((k / 2) / m) * m;
    const detail::PotentialResult pr = detail::potential(g.layers, domain, opts);
    SeriesPass out;
    out.full.resize(contours.size());
    for (std::size_t c = 0; c < contours.size(); ++c) {
        out.full[c].sin_coeffs = sine_coeffs(omega, contours[c], g, pr.full[c], disc.n_modes);
        const auto partial = sine_coeffs(omega, contours[c], g, pr.partial[c], disc.n_modes);
        for (std::size_t n = 0; n < partial.size(); ++n)
            out.tail = std::max(out.tail, std::fabs(out.full[c].sin_coeffs[n] - partial[n]));
    }
    return out;
}

std::vector<SineSeries> eval_series(double omega, const std::vector<Contour>& contours, const HelicalDomain& domain,
                                    const Discretization& disc, EvalInfo* info) {
    const int m = common_fold(contours);
    disc.validate(m);
    const int cap = (Discretization::kMaxGreenModes / m) * m;
    int k = std::min(disc.initial_k_max(m), cap);
    SeriesPass pass = series_pass(omega, contours, domain, disc, m, k);
    while (disc.k_max == 0 && !(pass.tail < disc.tol)) {
        if (k >= cap)
            throw AccuracyError("eval_f: Green-mode tail above tolerance at k_max = " + std::to_string(k), pass.tail);
        k = std::min(2 * k, cap);
        pass = series_pass(omega, contours, domain, disc, m, k);
    }
    if (info) {
        info->k_max_used = k;
        info->tail_estimate = pass.tail;
    }
    return pass.full;
}

// Real DFT derivative on N equispaced samples; the Nyquist mode is dropped.
std::vector<double> spectral_derivative(const std::vector<double>& f) {
    const int n = static_cast<int>(f.size());
    std::vector<double> a(n / 2 + 1, 0.0), b(n / 2 + 1, 0.0);
    for (int q = 1; 2 * q < n; ++q) {
        double ca = 0.0, cb = 0.0;
        for (int j = 0; j < n; ++j) {
            const double ang = kTwoPi * static_cast<double>((static_cast<long>(q) * j) % n) / n;
            ca += f[j] * std::cos(ang);
            cb += f[j] * std::sin(ang);
        }
        a[q] = 2.0 * ca / n;
        b[q] = 2.0 * cb / n;
    }
    std::vector<double> d(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int q = 1; 2 * q < n; ++q) {
            const double ang = kTwoPi * static_cast<double>((static_cast<long>(q) * j) % n) / n;
            acc += q * (b[q] * std::cos(ang) - a[q] * std::sin(ang));
        }
        d[j] = acc;
    }
    return d;
}

// Every node is a source; targets are at the given offset (in node spacings).
std::vector<detail::Layer> full_layers(const std::vector<Contour>& contours, int nodes, double target_offset) {
    std::vector<detail::Layer> layers;
    for (std::size_t c = 0; c < contours.size(); ++c) {
        detail::RadiusPool pool;
        std::vector<int> src, tgt;
        for (int j = 0; j < nodes; ++j) src.push_back(pool.add(contours[c].radius(kTwoPi * j / nodes)));
        for (int j = 0; j < nodes; ++j)
            tgt.push_back(pool.add(contours[c].radius(kTwoPi * (j + target_offset) / nodes)));
        detail::Layer layer;
        layer.sign = c == 0 ? 1 : -1;
        layer.base_radius = contours[c].base_radius;
        std::vector<int> ids;
        layer.radii = pool.finalize(ids);
        for (int j = 0; j < nodes; ++j) {
            layer.sources.push_back({kTwoPi * j / nodes, kTwoPi / nodes, ids[src[j]]});
            layer.targets.push_back({kTwoPi * (j + target_offset) / nodes, ids[tgt[j]]});
        }
        layers.push_back(std::move(layer));
    }
    return layers;
}

}  // namespace

SineSeries eval_f(double omega, const Contour& contour, const HelicalDomain& domain, const Discretization& disc,
                  EvalInfo* info) {
    return eval_series(omega, {contour}, domain, disc, info).front();
}

std::pair<SineSeries, SineSeries> eval_f_doubly(double omega, const Contour& outer, const Contour& inner,
                                                const HelicalDomain& domain, const Discretization& disc,
                                                EvalInfo* info) {
    if (!(outer.base_radius > inner.base_radius))
        throw GeometryError("eval_f_doubly: outer base radius must exceed the inner one");
    auto out = eval_series(omega, {outer, inner}, domain, disc, info);
    return {out[0], out[1]};
}

Samples sample_f(double omega, const std::vector<Contour>& contours, const HelicalDomain& domain,
                 const Discretization& disc) {
    const int m = common_fold(contours);
    disc.validate(m);
    const int k_max = disc.initial_k_max(m);
    const int nodes = disc.angular_nodes(m, k_max);
    detail::PotentialOptions opts;
    opts.n_rho = disc.n_rho;
    opts.with_sine = true;
    for (int k = 1; k <= k_max; ++k) opts.modes.push_back(k);
    const auto layers = full_layers(contours, nodes, 0.0);
    const detail::PotentialResult pr = detail::potential(layers, domain, opts);

    Samples s;
    for (int j = 0; j < nodes; ++j) s.theta.push_back(kTwoPi * j / nodes);
    for (std::size_t c = 0; c < contours.size(); ++c) {
        s.phi.push_back(pr.full[c]);
        std::vector<double> f = spectral_derivative(pr.full[c]);
        for (int j = 0; j < nodes; ++j) f[j] += omega * contours[c].dr(s.theta[j]);
        s.f.push_back(std::move(f));
    }
    return s;
}

BoundaryReport boundary_report(const BranchPoint& point, const HelicalDomain& domain,
                               const Discretization& disc_fine) {
    const int m = common_fold(point.contours);
    disc_fine.validate(m);
    int k_max = disc_fine.k_max > 0 ? disc_fine.k_max
                                    : (point.k_max_used > 0 ? 2 * point.k_max_used : disc_fine.initial_k_max(m));
    k_max = std::min(((k_max + m - 1) / m) * m, (Discretization::kMaxGreenModes / m) * m);
    const int nodes = disc_fine.angular_nodes(m, k_max);

    detail::PotentialOptions opts;
    opts.n_rho = disc_fine.n_rho;
    opts.with_sine = true;
    opts.modes = fold_modes(0, k_max, m);
    const auto layers = full_layers(point.contours, nodes, 0.5);
    const detail::PotentialResult pr = detail::potential(layers, domain, opts);

    BoundaryReport rep;
    for (std::size_t c = 0; c < point.contours.size(); ++c) {
        double lo = INFINITY, hi = -INFINITY, plo = INFINITY, phi_hi = -INFINITY;
        for (std::size_t i = 0; i < layers[c].targets.size(); ++i) {
            const double R = layers[c].radii[layers[c].targets[i].radius];
            const double phi = pr.full[c][i];
            const double v = phi + 0.5 * point.omega * R * R;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            plo = std::min(plo, phi);
            phi_hi = std::max(phi_hi, phi);
        }
        rep.per_component.push_back(hi - lo);
        rep.residual = std::max(rep.residual, hi - lo);
        rep.psi_range = std::max(rep.psi_range, phi_hi - plo);
    }
    return rep;
}

double boundary_residual(const BranchPoint& point, const HelicalDomain& domain, const Discretization& disc_fine) {
    return boundary_report(point, domain, disc_fine).residual;
}

double point_residual(const BranchPoint& point, const HelicalDomain& domain, const Discretization& disc) {
    Discretization d = disc;
    if (point.k_max_used > 0) d.k_max = point.k_max_used;
    const auto out = eval_series(point.omega, point.contours, domain, d, nullptr);
    double r = 0.0;
    for (const auto& s : out) r = std::max(r, s.max_abs());
    return r;
}

}  // namespace hk::contour
