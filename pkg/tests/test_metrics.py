import math

import numpy as np
import pytest

from harmcert import fixtures
from harmcert.geometry import RadiiTriple, nearest_boundary_batch, probe_points, radii
from harmcert.metrics import (
    adaptive_simpson,
    hyperbolic_disk,
    hyperbolic_disk_distance,
    hyperbolic_offcenter,
    planar_proof_trace,
    quasihyperbolic_cone_bound,
    quasihyperbolic_segment_bound,
)


class TestHyperbolic:
    def test_origin(self):
        assert hyperbolic_disk([0, 0]).value == 0.0

    def test_inverse(self):
        t = (math.e - 1) / (math.e + 1)
        assert hyperbolic_disk([t, 0]).value == pytest.approx(0.5, rel=1e-14)

    def test_near_boundary(self):
        assert hyperbolic_disk([0, 0.99]).value == pytest.approx(0.5 * math.log(199), rel=1e-13)

    def test_arc_length_integral(self):
        # the radial line is a geodesic: integrate dt / (1 - t^2)
        for s in (0.3, 0.9):
            val = adaptive_simpson(lambda t: 1 / (1 - t * t), 0, s)
            assert hyperbolic_disk([s, 0]).value == pytest.approx(val, rel=1e-10)

    def test_outside(self):
        with pytest.raises(ValueError):
            hyperbolic_disk([1.0, 0.0])

    def test_offcenter(self):
        assert hyperbolic_offcenter([0.5, 0], 2.0, [0.5, 0]).value == 0.0
        assert hyperbolic_offcenter([0.5, 0], 2.0, [1.5, 0]).value == pytest.approx(0.5 * math.log(3), rel=1e-14)
        with pytest.raises(ValueError):
            hyperbolic_offcenter([0, 0], 1.0, [1.0, 0.5])

    def test_offcenter_matches_disk(self, rng):
        for z in rng.uniform(-0.7, 0.7, size=(1000, 2)):
            assert hyperbolic_offcenter([0, 0], 1.0, z).value == pytest.approx(hyperbolic_disk(z).value, rel=1e-12)

    def test_two_point_reduces_to_one_point(self, rng):
        for z in rng.uniform(-0.7, 0.7, size=(200, 2)):
            assert hyperbolic_disk_distance([0, 0], z).value == pytest.approx(hyperbolic_disk(z).value, rel=1e-12)

    def test_two_point_mobius_invariance(self, rng):
        # rotations and Mobius automorphisms of the disk preserve the distance
        for _ in range(200):
            z, w, a = (complex(*rng.uniform(-0.6, 0.6, 2)) for _ in range(3))
            m = lambda u: (u - a) / (1 - a.conjugate() * u)
            d1 = hyperbolic_disk_distance(z, w).value
            d2 = hyperbolic_disk_distance(m(z), m(w)).value
            assert d1 == pytest.approx(d2, rel=1e-10)

    def test_domain_monotonicity(self, rng):
        """A subdisk D(a, R) of the unit disk has the larger hyperbolic distance."""
        n = 0
        while n < 1000:
            a = rng.uniform(-0.8, 0.8, 2)
            R = rng.uniform(0.01, 1.0)
            if np.linalg.norm(a) + R > 1:
                continue
            rho = R * math.sqrt(rng.uniform())
            t = rng.uniform(0, 2 * math.pi)
            z = a + rho * np.array([math.cos(t), math.sin(t)])
            sub = hyperbolic_offcenter(a, R, z).value
            big = hyperbolic_disk_distance(z, a).value
            assert sub >= big * (1 - 1e-12)
            n += 1


class TestQuasihyperbolic:
    @pytest.mark.parametrize("s", [0.1, 0.5, 0.9, 0.99])
    def test_disk_radial(self, s):
        v = quasihyperbolic_segment_bound(fixtures.unit_disk(), [0, 0], [s, 0]).value
        assert v == pytest.approx(-math.log(1 - s), abs=1e-7)

    def test_zero_length(self):
        assert quasihyperbolic_segment_bound(fixtures.unit_disk(), [0.2, 0.1], [0.2, 0.1]).value == 0.0

    def test_leaves_domain(self):
        with pytest.raises(ValueError):
            quasihyperbolic_segment_bound(fixtures.unit_disk(), [0, 0], [1.5, 0])

    def test_comparison_in_disk(self, rng):
        """rho*/4 <= rho <= rho* in the unit disk, radial pairs (0, z)."""
        for t in rng.uniform(0, 1, 1000):
            if t == 0:
                continue
            qh = -math.log1p(-t)
            h = 0.5 * math.log((1 + t) / (1 - t))
            assert qh / 4 <= h <= qh

    def test_cone_bound(self):
        rad = RadiiTriple(0.6, 0.5, 0.4)
        assert quasihyperbolic_cone_bound(rad, 0.0).value == 0.0
        assert quasihyperbolic_cone_bound(rad, 0.2).value == pytest.approx(0.2 * math.log(1.25) / 0.1, rel=1e-14)
        assert quasihyperbolic_cone_bound(RadiiTriple(1, 1, 1), 0.0).value == 0.0
        with pytest.raises(ValueError):
            quasihyperbolic_cone_bound(rad, 0.3)

    @pytest.mark.parametrize("name", sorted(fixtures.FIXTURES))
    def test_segment_below_cone(self, name):
        body = fixtures.FIXTURES[name]()
        rad = radii(body)
        W = probe_points(body, 6)
        _, _, nu = nearest_boundary_batch(body, W)
        for a in W - rad.curvature * nu:
            seg = quasihyperbolic_segment_bound(body, np.zeros(body.dim), a).value
            cone = quasihyperbolic_cone_bound(rad, float(np.linalg.norm(a))).value
            assert seg <= cone * (1 + 1e-6)


class TestProofTrace:
    def test_triangle(self):
        tr = planar_proof_trace(RadiiTriple(0.6, 0.5, 0.4), 0.01)
        con2 = 0.2 * math.log(1.25) / 0.1 + 0.5 * math.log(0.4)
        assert tr.con2_rhs == pytest.approx(con2, abs=1e-15)
        assert tr.d_star == pytest.approx(2 * (1 - math.exp(2 * con2)), rel=1e-12)
        # 2(1 - 1.25^4 * 0.4^... ) reduces to 2(1 - 1/1.024) = 0.046875
        assert tr.d_star == pytest.approx(0.046875, abs=1e-12)

    def test_unit_boundary(self):
        tr = planar_proof_trace(RadiiTriple(1, 1, 1), 0.5)
        assert tr.con2_rhs == 0.0 and tr.d_star == 0.0

    def test_half(self):
        tr = planar_proof_trace(RadiiTriple(0.5, 0.5, 0.5), 0.1)
        assert tr.con2_rhs == pytest.approx(0.5 * math.log(0.5), rel=1e-15)
        assert tr.d_star == pytest.approx(1.0, rel=1e-15)

    def test_contradiction_iff_below_dstar(self):
        rad = RadiiTriple(0.6, 0.5, 0.4)
        d_star = planar_proof_trace(rad, 0.01).d_star
        for d in np.linspace(0.001, 0.39, 300):
            tr = planar_proof_trace(rad, d)
            if abs(d - d_star) > 1e-9:
                assert tr.contradiction == (d < d_star)

    def test_pf1_structure(self, rng):
        for R_C in rng.uniform(0.01, 5, 100):
            for d in rng.uniform(0, R_C, 10):
                if d > 0:
                    assert 0.5 * math.log((2 * R_C - d) / d) <= 0.5 * math.log(2 * R_C / d)

    def test_range(self):
        with pytest.raises(ValueError):
            planar_proof_trace(RadiiTriple(1, 1, 1), 1.0)
