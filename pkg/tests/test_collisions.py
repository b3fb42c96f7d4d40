import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from limachor.collisions import (
    collision_ratios,
    has_collision,
    min_pair_distance,
)
from limachor.kinematics import body_state, make_config
from util import admissible_pairs


def pair_distance_closed_form(config, k, t):
    """Oracle from the complex two-phasor form of q_0 - q_k."""
    a, b, p, n = config.curve.a, config.curve.b, config.curve.p, config.N
    w = cmath.exp(1j * math.tau * k / n)
    wp = cmath.exp(1j * math.tau * p * k / n)
    value = (a * (1 - w) * cmath.exp(1j * t)
             + b * (1 - wp) * cmath.exp(1j * p * t))
    return abs(value)


class TestCollisionRatios:
    def test_four_bodies_p2(self):
        values = sorted(r.ratio for r in collision_ratios(4, 2))
        assert values == pytest.approx([-math.sqrt(2), math.sqrt(2)])

    def test_six_bodies_p2_includes_unity(self):
        values = [r.ratio for r in collision_ratios(6, 2)]
        assert any(abs(v - 1.0) <= 1e-12 for v in values)

    def test_sign_symmetry_in_p(self):
        for n, p in [(7, 3), (9, 4), (11, 5)]:
            plus = sorted(abs(r.ratio) for r in collision_ratios(n, p))
            minus = sorted(abs(r.ratio) for r in collision_ratios(n, -p))
            assert plus == pytest.approx(minus, abs=1e-12)

    def test_count_bound(self):
        for n in range(4, 21):
            for mag in range(2, 8):
                for p in (mag, -mag):
                    assert len(collision_ratios(n, p)) <= 2 * (n - 1)

    def test_rejects_degenerate_inputs(self):
        with pytest.raises(ValueError):
            collision_ratios(3, 2)
        with pytest.raises(ValueError):
            collision_ratios(6, 1)


class TestHasCollision:
    def test_six_bodies_equal_amplitudes_collide(self):
        report = has_collision(make_config(6, 2, 1.0, 1.0))
        assert report.collides
        hit = [w for w in report.witnesses if w.bodies == (2, 4)]
        assert len(hit) == 1
        assert hit[0].t_star == pytest.approx(0.0, abs=1e-12)
        assert hit[0].point == pytest.approx([-1.0, 0.0], abs=1e-12)
        assert hit[0].min_distance <= 1e-10

    def test_four_bodies_equal_amplitudes_do_not(self):
        report = has_collision(make_config(4, 2, 1.0, 1.0))
        assert not report.collides
        assert report.witnesses == []

    def test_nine_bodies_equal_amplitudes_collide(self):
        assert has_collision(make_config(9, 2, 1.0, 1.0)).collides

    def test_ratio_hit_at_sqrt_two(self):
        assert has_collision(make_config(4, 2, math.sqrt(2), 1.0)).collides

    def test_trefoil_collision(self):
        assert has_collision(make_config(6, -2, 1.0, 1.0)).collides

    def test_witnesses_sorted_and_verified(self):
        config = make_config(9, 2, 1.0, 1.0)
        report = has_collision(config)
        keys = [(w.k, w.t_star) for w in report.witnesses]
        assert keys == sorted(keys)
        for w in report.witnesses:
            pos_1, _ = body_state(config, w.bodies[0], w.t_star)
            pos_2, _ = body_state(config, w.bodies[1], w.t_star)
            assert float(np.linalg.norm(pos_1 - pos_2)) <= 1e-10

    def test_near_locus_flagged_suspect(self):
        # 1e-9 off the sqrt(2) locus: inside the suspect band, not a
        # certified collision.
        report = has_collision(make_config(4, 2, math.sqrt(2) + 1e-9, 1.0))
        assert not report.collides
        assert report.suspects == [1, 3]

    def test_predicate_agrees_with_oracle(self):
        for p, n in admissible_pairs(5, 10):
            for ab in (0.5, 1.0, math.sqrt(2), 2.0):
                config = make_config(n, p, ab, 1.0)
                best = min(min_pair_distance(config, k, 256).min_distance
                           for k in range(1, n))
                assert has_collision(config).collides == (best <= 1e-8)


class TestMinPairDistance:
    def test_known_collision(self):
        result = min_pair_distance(make_config(6, 2, 1.0, 1.0), 2)
        assert result.min_distance <= 1e-10
        # Bodies 0 and 2 meet where the curve crosses itself.
        assert result.argmin_t == pytest.approx(2 * math.pi / 3, abs=1e-6)

    def test_known_separation(self):
        result = min_pair_distance(make_config(4, 2, 1.0, 1.0), 1)
        assert result.min_distance >= 0.1

    def test_matches_phasor_magnitude_formula(self):
        # Minimum distance is |A - B| with A = 2|a| sin(pi k/N),
        # B = 2|b sin(pi p k/N)|.
        for p, n in [(2, 5), (3, 7), (4, 9), (-3, 8)]:
            config = make_config(n, p, 1.3, 0.8)
            for k in range(1, n):
                a_mag = 2 * abs(1.3 * math.sin(math.pi * k / n))
                b_mag = 2 * abs(0.8 * math.sin(math.pi * p * k / n))
                expected = abs(a_mag - b_mag)
                got = min_pair_distance(config, k, 512).min_distance
                assert got == pytest.approx(expected, abs=1e-9)

    def test_bad_grid_rejected(self):
        config = make_config(4, 2)
        with pytest.raises(ValueError):
            min_pair_distance(config, 1, 7)
        with pytest.raises(IndexError):
            min_pair_distance(config, 4)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.0, math.tau), st.integers(1, 5))
    def test_distance_function_matches_complex_form(self, t, k):
        config = make_config(6, 2, 1.1, 0.4)
        pos_0, _ = body_state(config, 0, t)
        pos_k, _ = body_state(config, k, t)
        direct = float(np.linalg.norm(pos_0 - pos_k))
        assert direct == pytest.approx(
            pair_distance_closed_form(config, k, t), abs=1e-12)
