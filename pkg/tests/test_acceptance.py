"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Expected values are recomputed here from their defining formulas rather than
copied, so each check is independent of the code under test.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from harmcert import fixtures
from harmcert.certificate import certify_planar, certify_spatial, max_scaling_planar, spatial_ball_threshold
from harmcert.cli import main
from harmcert.geometry import RadiiTriple, nearest_boundary_batch, probe_points, radii
from harmcert.greenbounds import certificate_ratio, density_limit, density_lower_bound, green_ball
from harmcert.metrics import quasihyperbolic_cone_bound, quasihyperbolic_segment_bound
from harmcert.oracle import WosConfig, angular_bins, density_at, harmonic_measure, poisson_density, verify_density

from conftest import disk_patch_probability

pytestmark = pytest.mark.slow


@contextmanager
def criterion(capsys, number, title, budget):
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - t0
        within = elapsed < budget
        with capsys.disabled():
            status = "PASS" if ok and within else "FAIL"
            print(f"\n{status} criterion {number}: {title} ({elapsed:.2f} s, budget {budget:g} s)")
    assert within, f"criterion {number} took {elapsed:.1f} s, budget {budget} s"


def test_criterion_1_ball_boundary_cases(capsys):
    with criterion(capsys, 1, "ball boundary cases", 1.0):
        assert certify_planar(RadiiTriple(1, 1, 1)).lhs == 0.0
        for R in np.linspace(0.5, 1.5, 201):
            assert certify_planar(RadiiTriple(R, R, R)).satisfied == (R <= 1.0)
        assert certify_planar(RadiiTriple(1 - 1e-12, 1 - 1e-12, 1 - 1e-12)).satisfied
        assert not certify_planar(RadiiTriple(1 + 1e-12, 1 + 1e-12, 1 + 1e-12)).satisfied
        for R in np.linspace(0.25, 0.75, 201):
            assert certify_spatial(RadiiTriple(R, R, R), 3).satisfied == (R <= 0.5)
        assert not certify_spatial(RadiiTriple(0.5 + 1e-12, 0.5 + 1e-12, 0.5 + 1e-12), 3).satisfied
        prev = 0.0
        for n in range(3, 51):
            t = 0.5 * ((2 ** (n - 2) - 1) / (n - 2)) ** (1 / (n - 1))
            assert spatial_ball_threshold(n) == pytest.approx(t, rel=1e-14)
            assert prev < t < 1
            prev = t
        assert spatial_ball_threshold(3) == 0.5
        assert 1 - spatial_ball_threshold(50) < 0.1


def test_criterion_2_rounded_triangle(capsys):
    with criterion(capsys, 2, "rounded-triangle radii, certificate and lambda_max", 1.0):
        rad = radii(fixtures.rounded_triangle())
        assert abs(rad.outer - 0.6) <= 1e-9 and abs(rad.inner - 0.5) <= 1e-9 and abs(rad.curvature - 0.4) <= 1e-9
        # substituting (0.6, 0.5, 0.4): 0.2 * log(1.25) / 0.1 + log(0.4) / 2
        lhs_expected = 2 * math.log(1.25) + 0.5 * math.log(0.4)
        cert = certify_planar(rad)
        assert abs(cert.lhs - lhs_expected) <= 1e-6 and cert.satisfied
        # rescaling by lambda leaves the scale-free term fixed and adds log(lambda)/2, so lambda = exp(-2 lhs)
        lam_expected = math.exp(-2 * lhs_expected)
        scale = max_scaling_planar(rad)
        assert abs(scale.lambda_max - lam_expected) <= 1e-5
        assert scale.residual <= 1e-12
        assert abs(certify_planar(rad.scaled(scale.lambda_max)).lhs) <= 1e-12


def test_criterion_3_spatial_capsule(capsys):
    with criterion(capsys, 3, "spatial capsule equality case", 1.0):
        rad = radii(fixtures.spatial_capsule())
        assert rad.astuple() == pytest.approx((0.75, 0.5, 0.5), abs=1e-12)
        cert = certify_spatial(rad, 3)
        assert abs(cert.lhs - 0.25) <= 1e-12 and abs(cert.rhs - 0.25) <= 1e-12
        assert cert.satisfied
        assert abs(density_limit(rad, 3) - 1.0) <= 1e-12
        assert abs(density_lower_bound(rad, 3, 1e-9).limit - 1.0) <= 1e-12


def test_criterion_4_counterexample_refuted(capsys):
    with criterion(capsys, 4, "off-center disk refuted", 120.0):
        body = fixtures.off_center_disk(0.1)
        rad = radii(body)
        assert rad.astuple() == pytest.approx((1.9, 0.1, 1.0), abs=1e-12)
        cert = certify_planar(rad)
        assert abs(cert.lhs - math.log(10)) <= 1e-6 and abs(cert.lhs - 2.302585) <= 1e-6
        assert not cert.satisfied
        w = np.array([1.9, 0.0])
        dens = poisson_density([0.9, 0.0], 1.0, 2, [0.0, 0.0], w)
        assert abs(2 * math.pi * dens - 0.19 / 3.61) <= 1e-12
        assert abs(2 * math.pi * dens - 0.052632) <= 1e-6

        report = verify_density(body, WosConfig(walkers=10**6, seed=0))
        assert report.verdict == "refuted"
        at_w = [p for p in report.probes if np.linalg.norm(p.point - w) < 1e-12]
        assert len(at_w) == 1
        probe = at_w[0]
        patch_avg = disk_patch_probability([0.9, 0.0], 1.0, [0.0, 0.0], w, probe.delta) / probe.patch_measure
        assert abs(probe.density - patch_avg) <= 3 * probe.std_error
        assert abs(probe.density - dens) <= 3 * probe.std_error


def test_criterion_5_unit_disk_calibration(capsys):
    with criterion(capsys, 5, "unit-disk oracle calibration", 120.0):
        disk = fixtures.unit_disk()
        exact = 1 / (2 * math.pi)
        config = WosConfig(walkers=10**6, seed=0)
        for w in probe_points(disk, 8):
            p = density_at(disk, w, config=config)
            assert abs(p.density - exact) <= 3 * p.std_error

        half = harmonic_measure(disk, None, angular_bins(2), config)
        assert np.all(np.abs(half.probability - 0.5) <= 0.003)

        # epsilon halving, from the centre (one-step walks) and from an off-centre start
        for start in (None, [0.5, 0.3]):
            a = harmonic_measure(disk, start, angular_bins(16), config)
            b = harmonic_measure(disk, start, angular_bins(16), WosConfig(epsilon=0.5e-5, walkers=10**6, seed=0))
            assert np.all(np.abs(a.probability - b.probability) < 3 * a.std_error)


def test_criterion_6_rounded_triangle_verified(capsys):
    with criterion(capsys, 6, "rounded triangle verified by Monte Carlo", 180.0):
        report = verify_density(fixtures.rounded_triangle(), WosConfig(walkers=10**6, seed=0), slack=0.05)
        assert report.verdict == "verified"
        assert report.min_normalized >= 1 - 0.05


def test_criterion_7_metric_properties(capsys):
    with criterion(capsys, 7, "hyperbolic and quasihyperbolic metric properties", 10.0):
        rng = np.random.default_rng(7)
        z = rng.uniform(-1, 1, size=(4000, 2))
        z = z[np.hypot(z[:, 0], z[:, 1]) < 1][:1000]
        assert len(z) == 1000
        for t in np.hypot(z[:, 0], z[:, 1]):
            qh = -math.log1p(-t)
            h = 0.5 * math.log((1 + t) / (1 - t))
            assert qh / 4 <= h <= qh

        disk = fixtures.unit_disk()
        for s in np.linspace(0.01, 0.99, 25):
            v = quasihyperbolic_segment_bound(disk, [0, 0], [s, 0]).value
            assert abs(v + math.log1p(-s)) <= 1e-7

        for name, make in fixtures.FIXTURES.items():
            body = make()
            rad = radii(body)
            W = probe_points(body, 4)
            _, _, nu = nearest_boundary_batch(body, W)
            for a in W - rad.curvature * nu:
                seg = quasihyperbolic_segment_bound(body, np.zeros(body.dim), a).value
                cone = quasihyperbolic_cone_bound(rad, float(np.linalg.norm(a))).value
                assert seg <= cone * (1 + 1e-7) + 1e-12, name


def test_criterion_8_green_bound_soundness(capsys):
    with criterion(capsys, 8, "Green-bound soundness and limit", 5.0):
        sigma2 = 4 * math.pi
        for R in np.geomspace(0.1, 10, 25):
            rad = RadiiTriple(R, R, R)
            ds = np.linspace(0.01, 0.99, 40) * R
            bounds = np.array([density_lower_bound(rad, 3, d).density_ratio_bound for d in ds])
            # ball Green function at x with |x| = R - d, pole 0: (1/|x| - 1/R) / (4 pi)
            truth = np.array([sigma2 * ((1 / (R - d) - 1 / R) / (4 * math.pi)) / d for d in ds])
            from_module = np.array([sigma2 * green_ball(R - d, R, 3) / d for d in ds])
            assert np.allclose(truth, from_module, rtol=1e-12)
            assert np.all(bounds <= truth)
            assert np.all(np.diff(bounds) > 0)

        rng = np.random.default_rng(8)
        for _ in range(1000):
            R_C, R_I = rng.uniform(0.05, 2.0, 2)
            rad = RadiiTriple(max(R_C, R_I) * rng.uniform(1, 3), R_I, R_C)
            cert = certify_spatial(rad, 3)
            assert abs(density_limit(rad, 3) - cert.rhs / cert.lhs) <= 1e-12 * max(1.0, cert.rhs / cert.lhs)
            assert density_limit(rad, 3) == pytest.approx(certificate_ratio(rad, 3), rel=1e-14)


def test_criterion_9_determinism(capsys, data_dir, tmp_path):
    with criterion(capsys, 9, "byte-identical verify CSV across runs and workers", 300.0):
        outputs = []
        for i, workers in enumerate((1, 1, 4, 8)):
            path = tmp_path / f"run{i}.csv"
            argv = ["verify", str(data_dir / "rounded_triangle.json"), "--seed", "42", "--workers", str(workers)]
            code = main(argv + ["--out", str(path)])
            capsys.readouterr()
            assert code == 0
            outputs.append(path.read_bytes())
        assert len(outputs[0]) > 0
        assert all(o == outputs[0] for o in outputs)
