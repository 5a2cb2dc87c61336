#include <cmath>
#include <random>

#include "doctest.h"
#include "hk/contour.hpp"
#include "hk/errors.hpp"
#include "hk/refcheck.hpp"

using namespace hk;
using refcheck::mp_real;

TEST_SUITE("refcheck") {

TEST_CASE("series oracle self-consistency") {
    const refcheck::PrecisionConfig prec;
    for (int n : {0, 1, 5, 20})
        for (double z : {0.3, 3.0, 17.0}) {
            // Centered differences at step 1e-15 carry O(1e-31) truncation error.
            const mp_real zz(z), step("1e-15");
            const auto c = refcheck::bessel_series_reference(n, zz, prec);
            const auto p = refcheck::bessel_series_reference(n, zz + step, prec);
            const auto m = refcheck::bessel_series_reference(n, zz - step, prec);
            const mp_real di = (p.i - m.i) / (2 * step), dk = (p.k - m.k) / (2 * step);
            const mp_real w = zz * (c.i * dk - c.k * di) + 1;
            CHECK(abs(w) < mp_real("1e-25"));
            CHECK(c.i > 0);
            CHECK(c.k > 0);
        }
    for (double z : {1e-6, 0.5, 4.0, 30.0}) CHECK(refcheck::bessel_series_reference(0, z, prec).i >= 1);
    const mp_real zk1 = refcheck::bessel_series_reference(1, 1e-8, prec).k * mp_real(1e-8);
    CHECK(abs(zk1 - 1) < mp_real("1e-14"));
    CHECK(abs(refcheck::digamma_integer(1) + boost::math::constants::euler<mp_real>()) < mp_real("1e-40"));
}

TEST_CASE("differentiated series against the recurrence forms") {
    const refcheck::PrecisionConfig prec;
    for (int n : {1, 3, 12}) {
        const auto d = refcheck::bessel_prime_series_reference(n, 2.0, prec);
        const auto lo = refcheck::bessel_series_reference(n - 1, 2.0, prec);
        const auto hi = refcheck::bessel_series_reference(n + 1, 2.0, prec);
        CHECK(abs(d.i - (lo.i + hi.i) / 2) < mp_real("1e-30") * abs(d.i));
    }
}

TEST_CASE("precision and range checks") {
    CHECK_THROWS_AS(refcheck::validate({.working_digits = 20}), InvalidArgument);
    CHECK_THROWS_AS(refcheck::validate({.series_terms = 10}), InvalidArgument);
    CHECK_THROWS_AS(refcheck::bessel_series_reference(65, 1.0), InvalidArgument);
    CHECK_THROWS_AS(refcheck::bessel_series_reference(3, 51.0), InvalidArgument);
    CHECK_THROWS_AS(refcheck::bessel_series_reference(3, 0.0), InvalidArgument);
}

TEST_CASE("direct quadrature of F against the modal evaluator") {
    const HelicalDomain dom(1.0);
    const int m = 3;
    std::mt19937 rng(20261015);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Contour c = Contour::circle(1.0, m, 4);
    double total = 0.0;
    for (double& r : c.cos_coeffs) {
        r = u(rng);
        total += std::fabs(r);
    }
    for (double& r : c.cos_coeffs) r *= 1e-2 / total;  // sum |r_n| = 1e-2 a^2

    Discretization d;
    d.n_modes = 4;
    d.n_theta = 128;
    d.tol = 1e-10;
    const double om = 0.7;
    const auto modal = contour::eval_f(om, c, dom, d);
    const auto direct = refcheck::f_direct_quadrature(om, c, dom);
    for (int n = 0; n < 4; ++n) CHECK(std::fabs(direct.sin_coeffs[n] - modal.sin_coeffs[n]) < 1e-5);

    double prev = INFINITY;
    for (int level = 0; level < 3; ++level) {
        refcheck::QuadratureConfig q;
        const int f = 1 << level;
        q.n_theta = 24 * f;
        q.n_phi = 64 * f;
        q.n_rho = 6 * f;
        q.k_max = 24 * f;
        const auto g = refcheck::f_direct_quadrature(om, c, dom, q);
        double err = 0.0;
        for (int n = 0; n < 4; ++n) err = std::max(err, std::fabs(g.sin_coeffs[n] - modal.sin_coeffs[n]));
        CHECK(err <= 0.5 * prev);
        prev = err;
    }

    const auto zero = refcheck::f_direct_quadrature(om, Contour::circle(1.0, m, 4), dom);
    CHECK(zero.max_abs() < 1e-8);

    CHECK_THROWS_AS(refcheck::f_direct_quadrature(om, Contour::circle(1.0, m, 5), dom), InvalidArgument);
    refcheck::QuadratureConfig huge;
    huge.n_phi = 1 << 16;
    huge.n_theta = 1 << 12;
    CHECK_THROWS_AS(refcheck::f_direct_quadrature(om, c, dom, huge), AccuracyError);
}

}
