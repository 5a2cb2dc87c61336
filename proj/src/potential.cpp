#include "potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "hk/bessel.hpp"
#include "hk/errors.hpp"
#include "quadrature.hpp"

namespace hk::detail {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxExponent = 700.0;

double checked_exp(double e) {
    if (e > kMaxExponent)
        throw RangeError("potential: contour radius varies too much for the Green-mode cutoff");
    return std::exp(e);
}

// ln of W = sum_j w_j t_j / sum_j t_j, where t_j are the power-series terms of
// I_k(x) and w_j = (k + 2j) / (k + 2j + 2), so that
// int_0^x t^2 I_k'(t) dt = x^2 I_k(x) W.
double log_moment_weight(int k, double x) {
    const double y = 0.25 * x * x;
    double t = 1.0, sum = 1.0, wsum = static_cast<double>(k) / (k + 2.0);
    for (int j = 1; j < 100000; ++j) {
        const double ratio = y / (static_cast<double>(j) * (k + j));
        t *= ratio;
        sum += t;
        wsum += t * (k + 2.0 * j) / (k + 2.0 * j + 2.0);
        if (ratio < 0.5 && t < 1e-18 * sum) break;
        if (sum > 1e250) {
            t *= 1e-250;
            sum *= 1e-250;
            wsum *= 1e-250;
        }
    }
    return std::log(wsum / sum);
}

// Closed form of int_0^S G_0(R, rho) rho drho.
double mode_zero_integral(double R, double S, double kappa2) {
    const double mu = std::min(R, S);
    const double mu2 = mu * mu;
    const double v = 0.5 * mu2 * std::log(R) - (0.5 * mu2 * std::log(mu) - 0.25 * mu2) + 0.25 * kappa2 * R * R * mu2 -
                     0.125 * kappa2 * mu2 * mu2;
    return v / kTwoPi;
}

// Per-layer tables at one Green mode k, scaled by e^{-+ k eta_c} so that the
// I-type and K-type factors stay O(1) near the base radius.
struct ModeTable {
    std::vector<double> alpha;  // R K_k'(c R) e^{E}
    std::vector<double> beta;   // R I_k'(c R) e^{-E}
    std::vector<double> p;      // int_0^R rho^2 I_k'(c rho) drho e^{-E}
    std::vector<double> q;      // int_{a_c}^R rho^2 K_k'(c rho) drho e^{E}
};

double scaled_kprime_integrand(int k, double c, double rho, double e_scale) {
    return -checked_exp(2.0 * std::log(rho) + bessel::log_abs_k_prime(k, c * rho) + e_scale);
}

double panel_integral(int k, double c, double kappa, double lo, double hi, double e_scale, int n_rho) {
    const double width = hi - lo;
    if (width == 0.0) return 0.0;
    const double lam = k * std::hypot(1.0, kappa * std::min(lo, hi)) / std::min(lo, hi);
    const int panels = std::max(1, static_cast<int>(std::ceil(lam * std::fabs(width) / 8.0)));
    const double pw = width / panels;
    // Gauss error on e^{lam x} over one panel falls like (lam w)^{2n} / (2n)!.
    const double lw = lam * std::fabs(pw);
    const int nodes = lw < 0.1 ? 3 : lw < 0.5 ? 4 : std::clamp(6 + static_cast<int>(std::ceil(3.0 * lw)), 6, n_rho);
    const GaussRule& rule = gauss_legendre(nodes);
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = lo + p * pw;
        const double half = 0.5 * pw;
        double acc = 0.0;
        for (int i = 0; i < nodes; ++i)
            acc += rule.weights[i] * scaled_kprime_integrand(k, c, a + half * (1.0 + rule.nodes[i]), e_scale);
        total += half * acc;
    }
    return total;
}

ModeTable build_table(const Layer& layer, int k, double kappa, double e_scale, int n_rho) {
    const double c = k * kappa;
    const std::size_t n = layer.radii.size();
    ModeTable t;
    t.alpha.resize(n);
    t.beta.resize(n);
    t.p.resize(n);
    t.q.resize(n);
    const double log_c3 = 3.0 * std::log(c);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = layer.radii[i];
        const double x = c * r;
        const bessel::Evaluation ev = bessel::evaluate(k, x);
        const double lr = std::log(r);
        t.alpha[i] = -checked_exp(lr + ev.k_prime.log_mag() + e_scale);
        t.beta[i] = checked_exp(lr + ev.i_prime.log_mag() - e_scale);
        t.p[i] = checked_exp(-log_c3 + 2.0 * std::log(x) + ev.i.log_mag() + log_moment_weight(k, x) - e_scale);
    }
    // Cumulative integral anchored at the base radius.
    const double a = layer.base_radius;
    const auto split = std::lower_bound(layer.radii.begin(), layer.radii.end(), a) - layer.radii.begin();
    double acc = 0.0, prev = a;
    for (std::size_t i = static_cast<std::size_t>(split); i < n; ++i) {
        acc += panel_integral(k, c, kappa, prev, layer.radii[i], e_scale, n_rho);
        t.q[i] = acc;
        prev = layer.radii[i];
    }
    acc = 0.0;
    prev = a;
    for (std::ptrdiff_t i = split - 1; i >= 0; --i) {
        acc -= panel_integral(k, c, kappa, layer.radii[i], prev, e_scale, n_rho);
        t.q[i] = acc;
        prev = layer.radii[i];
    }
    return t;
}

enum class Relation { Self, TargetOutside, TargetInside };

std::pair<double, double> radius_range(const Layer& layer, bool targets) {
    double lo = INFINITY, hi = -INFINITY;
    if (targets) {
        for (const auto& t : layer.targets) {
            lo = std::min(lo, layer.radii[t.radius]);
            hi = std::max(hi, layer.radii[t.radius]);
        }
    } else {
        for (const auto& s : layer.sources) {
            lo = std::min(lo, layer.radii[s.radius]);
            hi = std::max(hi, layer.radii[s.radius]);
        }
    }
    return {lo, hi};
}

// Source-side ordering shared by every mode.
struct LayerOrder {
    std::vector<int> sorted_sources;  // sources by increasing radius
    std::vector<int> split;           // per target: number of sorted sources with S <= R
};

LayerOrder order_layer(const Layer& layer) {
    LayerOrder o;
    o.sorted_sources.resize(layer.sources.size());
    std::iota(o.sorted_sources.begin(), o.sorted_sources.end(), 0);
    std::stable_sort(o.sorted_sources.begin(), o.sorted_sources.end(),
                     [&](int x, int y) { return layer.sources[x].radius < layer.sources[y].radius; });
    std::vector<int> keys(o.sorted_sources.size());
    for (std::size_t i = 0; i < keys.size(); ++i) keys[i] = layer.sources[o.sorted_sources[i]].radius;
    o.split.resize(layer.targets.size());
    for (std::size_t i = 0; i < layer.targets.size(); ++i)
        o.split[i] = static_cast<int>(std::upper_bound(keys.begin(), keys.end(), layer.targets[i].radius) - keys.begin());
    return o;
}

}  // namespace

int RadiusPool::add(double r) {
    if (!std::isfinite(r) || !(r > 0.0)) throw InvalidArgument("potential: radii must be positive and finite");
    values_.push_back(r);
    return static_cast<int>(values_.size()) - 1;
}

std::vector<double> RadiusPool::finalize(std::vector<int>& ids) const {
    std::vector<int> order(values_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return values_[x] < values_[y]; });
    std::vector<double> unique;
    std::vector<int> remap(values_.size());
    for (int idx : order) {
        const double v = values_[idx];
        if (unique.empty() || v - unique.back() > 1e-13 * v) unique.push_back(v);
        remap[idx] = static_cast<int>(unique.size()) - 1;
    }
    ids = remap;
    return unique;
}

PotentialResult potential(const std::vector<Layer>& layers, const HelicalDomain& domain,
                          const PotentialOptions& opts) {
    const double kappa = domain.kappa();
    const double kappa2 = kappa * kappa;
    const std::size_t nl = layers.size();

    std::vector<std::vector<Relation>> rel(nl, std::vector<Relation>(nl, Relation::Self));
    for (std::size_t t = 0; t < nl; ++t) {
        for (std::size_t c = 0; c < nl; ++c) {
            if (t == c || layers[t].targets.empty() || layers[c].sources.empty()) continue;
            const auto tr = radius_range(layers[t], true);
            const auto sr = radius_range(layers[c], false);
            if (tr.first > sr.second) {
                rel[t][c] = Relation::TargetOutside;
            } else if (tr.second < sr.first) {
                rel[t][c] = Relation::TargetInside;
            } else {
                throw GeometryError("potential: boundary components overlap in radius");
            }
        }
    }

    PotentialResult res;
    res.full.resize(nl);
    for (std::size_t t = 0; t < nl; ++t) res.full[t].assign(layers[t].targets.size(), 0.0);

    // Mode zero, by direct summation.
    for (std::size_t t = 0; t < nl && opts.include_zero; ++t) {
        const Layer& lt = layers[t];
        for (std::size_t i = 0; i < lt.targets.size(); ++i) {
            const double R = lt.radii[lt.targets[i].radius];
            double total = 0.0;
            for (std::size_t c = 0; c < nl; ++c) {
                const Layer& lc = layers[c];
                double acc = 0.0;
                for (const auto& s : lc.sources) acc += s.weight * mode_zero_integral(R, lc.radii[s.radius], kappa2);
                total -= lc.sign * acc;
            }
            res.full[t][i] = total;
        }
    }
    res.partial = res.full;

    std::vector<LayerOrder> orders(nl);
    std::vector<double> eta(nl);
    for (std::size_t c = 0; c < nl; ++c) {
        orders[c] = order_layer(layers[c]);
        eta[c] = bessel::debye_eta(kappa * layers[c].base_radius);
    }

    const double prefactor = 2.0 * kappa2 / kTwoPi;
    std::vector<ModeTable> tables(nl);
    int last_k = 0;
    for (int k : opts.modes) {
        if (k <= last_k) throw InvalidArgument("potential: modes must be positive and increasing");
        last_k = k;
        for (std::size_t c = 0; c < nl; ++c) tables[c] = build_table(layers[c], k, kappa, k * eta[c], opts.n_rho);

        for (std::size_t c = 0; c < nl; ++c) {
            const Layer& lc = layers[c];
            const ModeTable& tc = tables[c];
            const LayerOrder& oc = orders[c];
            const std::size_t ns = lc.sources.size();
            const int parts = opts.with_sine ? 2 : 1;

            // Weighted source sums: cumulative P below, suffix weight and Q above.
            std::vector<double> cum_p[2], suf_w[2], suf_q[2];
            double tot_p[2] = {0.0, 0.0}, tot_q[2] = {0.0, 0.0};
            for (int part = 0; part < parts; ++part) {
                cum_p[part].assign(ns + 1, 0.0);
                suf_w[part].assign(ns + 1, 0.0);
                suf_q[part].assign(ns + 1, 0.0);
                std::vector<double> wt(ns);
                for (std::size_t j = 0; j < ns; ++j) {
                    const SourceNode& s = lc.sources[oc.sorted_sources[j]];
                    wt[j] = s.weight * (part == 0 ? std::cos(k * s.phi) : std::sin(k * s.phi));
                }
                for (std::size_t j = 0; j < ns; ++j) {
                    const int r = lc.sources[oc.sorted_sources[j]].radius;
                    cum_p[part][j + 1] = cum_p[part][j] + wt[j] * tc.p[r];
                }
                for (std::size_t j = ns; j-- > 0;) {
                    const int r = lc.sources[oc.sorted_sources[j]].radius;
                    suf_w[part][j] = suf_w[part][j + 1] + wt[j];
                    suf_q[part][j] = suf_q[part][j + 1] + wt[j] * tc.q[r];
                }
                tot_p[part] = cum_p[part][ns];
                tot_q[part] = suf_q[part][0];
            }

            for (std::size_t t = 0; t < nl; ++t) {
                if (t != c && ns == 0) continue;
                const Layer& lt = layers[t];
                const ModeTable& tt = tables[t];
                for (std::size_t i = 0; i < lt.targets.size(); ++i) {
                    const TargetNode& tg = lt.targets[i];
                    const int ri = tg.radius;
                    double sums[2] = {0.0, 0.0};
                    for (int part = 0; part < parts; ++part) {
                        if (rel[t][c] == Relation::Self) {
                            const int p = oc.split[i];
                            sums[part] = tc.alpha[ri] * (cum_p[part][p] + tc.p[ri] * suf_w[part][p]) +
                                         tc.beta[ri] * (suf_q[part][p] - tc.q[ri] * suf_w[part][p]);
                        } else if (rel[t][c] == Relation::TargetOutside) {
                            sums[part] = tt.alpha[ri] * std::exp(k * (eta[c] - eta[t])) * tot_p[part];
                        } else {
                            sums[part] = tt.beta[ri] * std::exp(k * (eta[t] - eta[c])) * tot_q[part];
                        }
                    }
                    double v = std::cos(k * tg.theta) * sums[0];
                    if (opts.with_sine) v += std::sin(k * tg.theta) * sums[1];
                    res.full[t][i] -= lc.sign * prefactor * v;
                }
            }
        }
        if (k <= opts.checkpoint) res.partial = res.full;
    }
    return res;
}

}  // namespace hk::detail
