#pragma once

#include <vector>

namespace hk::detail {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre rule with n nodes (Golub-Welsch); cached per n.
const GaussRule& gauss_legendre(int n);

}  // namespace hk::detail
