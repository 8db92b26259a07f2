import math

import numpy as np
import pytest

from conftest import random_disk_selfmaps
from hypermetric.contraction import (
    DILATION,
    TANH_DIAMETER,
    caratheodory_diameter,
    certificate_for,
    dilate_disk,
    dilation_constant,
    tanh_diameter_constant,
    verify_metric_contraction,
)
from hypermetric.domains import Disk, Polydisc, contains, unit_disk
from hypermetric.errors import ArgumentError, InclusionError
from hypermetric.metrics import EXACT, LOWER, Bound


class TestCaratheodoryDiameter:
    def test_concentric_disks_exact(self):
        # 2 atanh(0.5) = ln 3
        M = caratheodory_diameter(unit_disk(), Disk(0, 0.5))
        assert M.kind == EXACT
        assert M.value == pytest.approx(math.log(3), rel=1e-12)

    def test_concentric_polydisc_exact(self):
        M = caratheodory_diameter(
            Polydisc([0, 1j], [1, 2]), Polydisc([0, 1j], [0.5, 0.6])
        )
        assert M.kind == EXACT
        assert M.value == pytest.approx(2 * math.atanh(0.5))

    def test_sampled_close_to_exact(self):
        M = caratheodory_diameter(unit_disk(), Disk(0, 0.5), force_sampled=True)
        assert M.kind == LOWER
        assert M.value <= math.log(3) + 1e-12
        assert M.value >= 0.98 * math.log(3)

    def test_offcenter_sampled_is_lower(self):
        M = caratheodory_diameter(unit_disk(), Disk(0.2, 0.3))
        assert M.kind == LOWER
        exact = 2 * math.atanh(0.5)  # diameter of any radius-0.5 region is below this
        assert 0 < M.value < math.log(3) + exact

    def test_not_relatively_compact(self):
        with pytest.raises(InclusionError):
            caratheodory_diameter(unit_disk(), unit_disk())


class TestTanhDiameterConstant:
    def test_tanh_of_log3(self):
        cert = tanh_diameter_constant(Bound(math.log(3), EXACT))
        assert cert.k == pytest.approx(0.8, rel=1e-12)
        assert cert.rigorous and cert.method == TANH_DIAMETER

    def test_radius_point_six(self):
        # tanh(2 atanh(rho)) = 2 rho / (1 + rho^2)
        cert = tanh_diameter_constant(Bound(2 * math.atanh(0.6), EXACT))
        assert cert.k == pytest.approx(1.2 / 1.36, rel=1e-12)

    def test_sampled_diameter_not_rigorous(self):
        cert = tanh_diameter_constant(Bound(1.0, LOWER))
        assert not cert.rigorous

    def test_rejects_negative(self):
        with pytest.raises(ArgumentError):
            tanh_diameter_constant(Bound(-1.0, EXACT))


class TestDilationConstant:
    def test_unit_example_ratio(self):
        cert = dilation_constant(1.0, 0.5)
        assert cert.k == pytest.approx(2 / 3, rel=1e-15)
        assert cert.rigorous and cert.method == DILATION

    def test_equal_radii(self):
        assert dilation_constant(1.0, 1.0).k == 0.5

    def test_tiny_gap_is_valid(self):
        cert = dilation_constant(1.0, 1e-9)
        assert 0 < cert.k < 1

    def test_monotonicity(self):
        ks = [dilation_constant(1.0, r).k for r in (0.1, 0.2, 0.5, 1.0, 2.0)]
        assert ks == sorted(ks, reverse=True)

    def test_rejects_zero_gap(self):
        with pytest.raises(ArgumentError):
            dilation_constant(1.0, 0.0)


class TestCertificateFor:
    def test_dilation_route(self):
        cert = certificate_for(unit_disk(), Disk(0, 0.6), method=DILATION)
        # R = diam(U) = 1.2, r = 0.4
        assert cert.k == pytest.approx(1.2 / 1.6, rel=1e-12)
        assert cert.rigorous

    def test_tanh_route(self):
        cert = certificate_for(unit_disk(), Disk(0, 0.5), method=TANH_DIAMETER)
        assert cert.k == pytest.approx(0.8, rel=1e-12)
        assert cert.rigorous

    def test_unknown_method(self):
        with pytest.raises(ArgumentError):
            certificate_for(unit_disk(), Disk(0, 0.5), method="magic")

    def test_json_shape(self):
        doc = certificate_for(unit_disk(), Disk(0, 0.5)).to_json()
        for key in ("k", "method", "M", "R", "r", "rigorous"):
            assert key in doc


class TestDilateDisk:
    def test_linear_disk(self):
        from hypermetric.holomap import parse

        phi = dilate_disk(parse("0.4*z1", 1), 0.2, 0.4)
        for z in (0.3, -0.5j, 0.7 + 0.1j):
            assert phi.eval(z).coords[0] == pytest.approx(0.6 * complex(z))

    def test_constant_map_fixed(self):
        from hypermetric.holomap import parse

        phi = dilate_disk(parse("0.3+0.1i", 1), 1.0, 2.0)
        assert phi.eval(0.5).coords[0] == pytest.approx(0.3 + 0.1j)

    def test_derivative_scaled(self):
        from hypermetric.holomap import parse

        phi = parse("(z1^2 + z1)/3", 1)
        psi = dilate_disk(phi, 0.5, 1.0)
        assert psi.jvp(0, 1)[0] == pytest.approx(1.5 * phi.jvp(0, 1)[0])

    def test_image_containment(self):
        # if phi(unit disk) sits in Disk(c0, R') with slack, the dilation stays
        # inside the enlarged disk about the same center
        maps = random_disk_selfmaps(5, seed=23)
        zs = 0.95 * np.exp(2j * np.pi * np.arange(64) / 64)
        for phi in maps:
            c0 = phi.eval(0).coords[0]
            vals = np.array([phi.eval(z).coords[0] for z in zs])
            R = float(np.abs(vals - c0).max()) + 1e-12
            r = 0.5 * R
            psi = dilate_disk(phi, r, R)
            wals = np.array([psi.eval(z).coords[0] for z in zs])
            assert np.abs(wals - c0).max() <= (1 + r / R) * R + 1e-9


class TestVerifyMetricContraction:
    def test_holds_with_slack(self):
        report = verify_metric_contraction(unit_disk(), Disk(0, 0.5), k=0.85)
        assert report.verdict == "holds"
        assert report.n_violated == 0 and report.n_inconclusive == 0

    def test_max_ratio_at_center(self):
        # sup_U E_X / E_U for Disk(0, rho) in the unit disk is rho itself,
        # attained at the center; it stays below the certified tanh constant
        rho = 0.5
        report = verify_metric_contraction(unit_disk(), Disk(0, rho), k=0.85)
        assert report.max_ratio == pytest.approx(rho, abs=1e-6)
        assert report.argmax_point == (0j,)
        assert report.max_ratio <= 2 * rho / (1 + rho**2)

    def test_violated_below_sharp_constant(self):
        report = verify_metric_contraction(unit_disk(), Disk(0, 0.5), k=0.4)
        assert report.verdict == "violated"
        assert report.n_violated > 0

    def test_kobayashi_route(self):
        report = verify_metric_contraction(
            unit_disk(), Disk(0, 0.5), k=2 / 3 + 1e-6, metric="kobayashi", samples=64
        )
        assert report.verdict == "holds"

    def test_k_range_validated(self):
        with pytest.raises(ArgumentError):
            verify_metric_contraction(unit_disk(), Disk(0, 0.5), k=1.0)
