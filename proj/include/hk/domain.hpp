#pragma once

#include <cmath>

#include "hk/errors.hpp"

namespace hk {

// Pitch h > 0 of the helical symmetry; kappa = 1 / h.
class HelicalDomain {
public:
    explicit HelicalDomain(double h) : h_(h) {
        if (!std::isfinite(h) || !(h > 0.0)) throw InvalidArgument("HelicalDomain: pitch must be positive and finite");
    }
    double h() const noexcept { return h_; }
    double kappa() const noexcept { return 1.0 / h_; }

private:
    double h_;
};

struct DiskConfig {
    double a;
    HelicalDomain domain;

    DiskConfig(double a_, HelicalDomain d) : a(a_), domain(d) {
        if (!std::isfinite(a) || !(a > 0.0)) throw InvalidArgument("DiskConfig: radius must be positive");
    }
};

// Annulus a2 < |x| < a1.
struct AnnulusConfig {
    double a1;
    double a2;
    HelicalDomain domain;

    AnnulusConfig(double outer, double inner, HelicalDomain d) : a1(outer), a2(inner), domain(d) {
        if (!std::isfinite(a1) || !std::isfinite(a2) || !(a2 > 0.0) || !(a1 > a2))
            throw InvalidArgument("AnnulusConfig: requires a1 > a2 > 0");
    }
};

}  // namespace hk
