#pragma once

#include <vector>

#include "hk/domain.hpp"

// Mode-by-mode evaluation of Phi(x) = sum_c sign_c int_{D_c} G_H(x, y) dy for
// star-shaped source layers D_c sampled on angular nodes.
namespace hk::detail {

struct SourceNode {
    double phi;
    double weight;  // angular quadrature weight times orbit multiplicity
    int radius;     // index into Layer::radii
};

struct TargetNode {
    double theta;
    int radius;
};

struct Layer {
    int sign = 1;
    double base_radius = 1.0;
    std::vector<double> radii;  // strictly increasing
    std::vector<SourceNode> sources;
    std::vector<TargetNode> targets;
};

// Adds r to a radius pool, merging values equal to 1e-13 relative; returns a
// provisional id. finalize_radii() sorts the pool and remaps ids in place.
class RadiusPool {
public:
    int add(double r);
    // Returns the sorted unique radii; ids[i] becomes the index of the i-th added value.
    std::vector<double> finalize(std::vector<int>& ids) const;

private:
    std::vector<double> values_;
};

struct PotentialOptions {
    std::vector<int> modes;  // Green modes k >= 1, increasing
    int checkpoint = 0;      // partial sums include modes k <= checkpoint
    bool with_sine = false;
    bool include_zero = true;  // add the k = 0 closed-form term
    int n_rho = 32;          // Gauss-Legendre node cap per radial panel
};

struct PotentialResult {
    std::vector<std::vector<double>> full;     // per layer, per target
    std::vector<std::vector<double>> partial;  // same, truncated at the checkpoint
};

// Throws GeometryError unless every inner layer lies strictly inside every outer one.
PotentialResult potential(const std::vector<Layer>& layers, const HelicalDomain& domain,
                          const PotentialOptions& opts);

}  // namespace hk::detail
