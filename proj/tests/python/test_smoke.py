import json
import math

import pytest

import helix_kelvin as hk


def test_planar_kelvin_limit():
    for m in range(2, 11):
        assert abs(hk.omega_simply(m, 1.0, 1e4) - (m - 1) / (2 * m)) < 1e-4


def test_bessel_wronskian():
    for n, z in [(0, 0.5), (3, 2.0), (20, 15.0)]:
        w = z * (hk.bessel_i(n, z) * hk.bessel_k_prime(n, z) - hk.bessel_k(n, z) * hk.bessel_i_prime(n, z))
        assert abs(w + 1.0) < 1e-12


def test_scaled_logs_beyond_double_range():
    assert hk.log_bessel_i(5, 800.0) > 700.0
    with pytest.raises(hk.RangeError):
        hk.bessel_i(5, 800.0)


def test_annulus_roots_and_degeneracy():
    plus, minus = hk.omega_doubly(4, 1.0, 0.5, 1e4)
    assert abs(plus - 0.24951) < 1e-3
    assert abs(minus - 0.12549) < 1e-3
    with pytest.raises(hk.DegenerateSpectrum):
        hk.omega_doubly(2, 1.0, 0.6, 1.0)
    with pytest.raises(ValueError):
        hk.omega_doubly(3, 0.5, 1.0, 1.0)


def test_stream_function_boundary_slope():
    a, h = 1.0, 1.0
    assert hk.stream_disk_dr(a, a, h) == -a * (h * h + a * a) / (2 * h * h)


def test_monotonicity_scan():
    rep = hk.scan_monotonicity(hk.log_grid(1e-3, 1e3, 10), 3, 40)
    assert rep["violations"] == 0 and rep["product_violations"] == 0
    assert rep["min_f"] > 0


def test_trivial_contour_and_branch():
    disc = hk.Discretization()
    disc.n_modes = 8
    disc.n_theta = 128
    g = hk.eval_f(0.4, hk.Contour.circle(1.0, 3, 8), 1.0, disc)
    assert max(abs(v) for v in g) < 1e-9

    (p,) = hk.bifurcate_simply(1.0, 1.0, 3, [0.01], disc)
    assert p.residual <= disc.tol
    assert abs(p.omega - hk.omega_simply(3, 1.0, 1.0)) < 1e-3
    assert p.contours[0].cos_coeffs[0] == pytest.approx(0.01)
    data = json.loads(p.to_json())
    assert data["omega"] == p.omega
    assert hk.boundary_residual(p, 1.0, disc.refined()) < 1e-6
    with pytest.raises(hk.StepSizeError):
        hk.bifurcate_simply(1.0, 1.0, 3, [0.6], disc)


def test_contour_radius():
    c = hk.Contour(1.0, 3, [0.05, 0.0])
    assert c.radius(0.0) == pytest.approx(math.sqrt(1.1))
