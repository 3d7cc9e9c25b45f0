"""Witness formulas and containment sampling for the disk base."""

import io
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gyrotop.core import DiskPoint
from gyrotop.diskbase import (
    DiskBall,
    WitnessParams,
    ball_add_radius,
    condition_witness,
    direct_witness,
    disk_base,
    sample_verify,
    write_violations_csv,
)


class TestDiskBase:
    def test_values(self):
        assert disk_base(1).radius == 1.0
        assert disk_base(2).radius == 0.5

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            disk_base(0)

    def test_ball_invariant(self):
        with pytest.raises(ValueError):
            DiskBall(0.0)
        with pytest.raises(ValueError):
            DiskBall(1.5)


class TestWitnessFormulas:
    def test_condition_1_small_n(self):
        assert condition_witness(1, WitnessParams(n=1)) == 3

    def test_condition_1_defining_bound(self):
        # the computed index must satisfy (2/m)/(1 - 1/m^2) < 1/n
        for n in range(1, 51):
            m = condition_witness(1, WitnessParams(n=n))
            assert (2 / m) / (1 - 1 / m**2) < 1 / n

    def test_condition_2_value(self):
        m = condition_witness(2, WitnessParams(n=2, x=DiskPoint(0.3, 0)))
        assert m == 6  # N = 1.15/0.2 = 5.75

    def test_condition_2_requires_x_in_ball(self):
        with pytest.raises(ValueError, match=r"\|x\| < 1/n"):
            condition_witness(2, WitnessParams(n=2, x=DiskPoint(0.6, 0)))

    def test_condition_2_defining_bound(self):
        for n in (1, 2, 5, 20):
            for frac in (0.0, 0.5, 0.9):
                x = DiskPoint(frac / n * math.cos(0.3), frac / n * math.sin(0.3))
                m = condition_witness(2, WitnessParams(n=n, x=x))
                ax = abs(x)
                assert (ax + 1 / m) / (1 - ax / m) < 1 / n + 1e-15

    def test_condition_7_value(self):
        t = condition_witness(7, WitnessParams(n=1, v=DiskPoint(0.5, 0)))
        assert t == 5
        assert 2 * t / (t * t - 1) < 0.5

    def test_condition_7_requires_nonzero(self):
        with pytest.raises(ValueError, match="nonzero"):
            condition_witness(7, WitnessParams(n=1, v=DiskPoint(0, 0)))

    def test_condition_8_origin_degenerates_to_3n(self):
        for n in (1, 2, 7):
            m = condition_witness(8, WitnessParams(n=n, x=DiskPoint(0, 0)))
            assert m == 3 * n

    def test_condition_3_at_n1_is_whole_disk(self):
        # radicand collapses to (1-|x|^2)^2, so T = 1 regardless of x
        m = condition_witness(3, WitnessParams(n=1, x=DiskPoint(0.7, 0.1)))
        assert m == 2

    def test_equiv_requires_a_inside_target(self):
        with pytest.raises(ValueError, match=r"\|a\| < r"):
            condition_witness("equiv", WitnessParams(n=1, r=0.3, a=DiskPoint(0.5, 0)))

    def test_missing_parameter(self):
        with pytest.raises(ValueError, match="requires parameter"):
            condition_witness(2, WitnessParams(n=2))

    def test_direct_witnesses(self):
        assert direct_witness(4, WitnessParams(n=3, m=5)) == 6
        assert direct_witness(5, WitnessParams(n=3)) == 4
        assert direct_witness(9, WitnessParams(n=3)) == 3

    def test_formula_vs_direct_split(self):
        with pytest.raises(ValueError, match="direct witness"):
            condition_witness(5, WitnessParams(n=1))
        with pytest.raises(ValueError, match="formula witness"):
            direct_witness(1, WitnessParams(n=1))


class TestBallAddRadius:
    def test_half_half(self):
        assert ball_add_radius(0.5, 0.5) == pytest.approx(0.8, abs=1e-15)

    def test_domain(self):
        with pytest.raises(ValueError):
            ball_add_radius(0.0, 0.5)
        with pytest.raises(ValueError):
            ball_add_radius(0.5, 1.0)

    @given(st.floats(0.01, 0.99), st.floats(0.01, 0.99))
    @settings(max_examples=200)
    def test_commutative_and_bounded(self, r, s):
        assert ball_add_radius(r, s) == ball_add_radius(s, r)
        assert max(r, s) < ball_add_radius(r, s) < 1.0

    @given(st.floats(0.01, 0.98), st.floats(0.01, 0.98))
    @settings(max_examples=200)
    def test_strictly_increasing(self, r, s):
        assert ball_add_radius(r + 0.01, s) > ball_add_radius(r, s)
        assert ball_add_radius(r, s + 0.01) > ball_add_radius(r, s)

    @given(st.floats(0.01, 0.99), st.floats(0.01, 0.99))
    @settings(max_examples=200)
    def test_rapidity_additivity(self, r, s):
        lhs = math.atanh(ball_add_radius(r, s))
        rhs = math.atanh(r) + math.atanh(s)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


class TestSampleVerify:
    def test_condition_1_whole_disk_target(self):
        rep = sample_verify(1, WitnessParams(n=1), 100_000, seed=0xC0FFEE)
        assert rep.passed
        assert rep.violations == 0
        assert rep.witness == 3
        # sup |x (+) y| stays under (2/3)/(1+1/9) = 0.6 < 0.75
        assert rep.worst_margin + 1.0 <= 0.75

    def test_condition_1_weakened_witness_caught(self):
        for n in (2, 5, 20):
            rep = sample_verify(1, WitnessParams(n=n), 10_000, seed=1, witness=n)
            assert not rep.passed
            assert rep.violations > 0

    def test_condition_5_moduli_preserved(self):
        rep = sample_verify(
            5,
            WitnessParams(n=4, a=DiskPoint(0.3, 0.4), x=DiskPoint(-0.5, 0.2)),
            20_000,
            seed=11,
        )
        assert rep.passed and rep.violations == 0
        assert rep.exact_radius_ok

    def test_condition_7_excludes_point(self):
        rep = sample_verify(7, WitnessParams(n=1, v=DiskPoint(0.5, 0)), 20_000, seed=2)
        assert rep.passed
        assert rep.witness == 5

    def test_condition_8_consistency_residual(self):
        rep = sample_verify(8, WitnessParams(n=3, x=DiskPoint(0.5, 0.2)), 10_000, seed=3)
        assert rep.passed
        assert rep.extra["coaddition_consistency_residual"] < 1e-9

    def test_condition_9_symmetric(self):
        rep = sample_verify(9, WitnessParams(n=5), 5_000, seed=4)
        assert rep.passed and rep.exact_radius_ok

    def test_determinism(self):
        p = WitnessParams(n=2, x=DiskPoint(0.2, 0.1))
        r1 = sample_verify(2, p, 5_000, seed=77, collect=True)
        r2 = sample_verify(2, p, 5_000, seed=77, collect=True)
        assert r1 == r2

    def test_csv_dump(self):
        rep = sample_verify(1, WitnessParams(n=3), 2_000, seed=5, witness=3,
                            collect=True)
        assert not rep.passed
        buf = io.StringIO()
        write_violations_csv(rep, buf)
        lines = buf.getvalue().strip().splitlines()
        assert lines[0].startswith("index,")
        assert len(lines) == rep.violations + 1

    def test_unknown_condition(self):
        with pytest.raises(ValueError):
            sample_verify("10", WitnessParams(n=1), 10)

    def test_equiv_sweep_zero_violations(self):
        seed = 50
        for r in (0.3, 0.7, 0.9):
            centers = [DiskPoint(0.0, 0.0)]
            for frac in (0.5, 0.9):
                for k in range(4):
                    angle = k * math.pi / 2.0
                    centers.append(DiskPoint(frac * r * math.cos(angle),
                                             frac * r * math.sin(angle)))
            for a in centers:
                seed += 1
                rep = sample_verify("equiv", WitnessParams(n=1, r=r, a=a),
                                    10_000, seed=seed)
                assert rep.passed and rep.violations == 0, (r, a)
