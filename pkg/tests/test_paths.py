import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skorotail.paths import (
    GFunction,
    ModulusCurve,
    SampledPath,
    continuity_modulus,
    global_stat_brute,
    ps_module,
    ps_module_brute,
    ps_module_curve,
    triple_min,
    triple_min_sup,
)

TWO_JUMP = SampledPath(np.array([0.0, 0.3, 0.6, 1.0]), np.array([0.0, 1.0, 2.0, 2.0]))
ONE_JUMP = SampledPath(np.array([0.0, 0.3, 1.0]), np.array([0.0, 1.0, 1.0]))
CONST = SampledPath(np.array([0.0, 1.0]), np.array([2.5, 2.5]))


def random_path(rng, n):
    times = np.concatenate([[0.0], np.sort(rng.uniform(0, 1, n - 2)), [1.0]])
    times = np.unique(times)
    vals = rng.normal(size=times.size).cumsum()
    return SampledPath(times, vals)


@st.composite
def step_paths(draw, max_n=12):
    n = draw(st.integers(3, max_n))
    interior = draw(
        st.lists(st.floats(0.01, 0.99), min_size=n - 2, max_size=n - 2, unique=True)
    )
    times = np.concatenate([[0.0], np.sort(interior), [1.0]])
    vals = draw(
        st.lists(st.floats(-5, 5), min_size=times.size, max_size=times.size)
    )
    return SampledPath(times, np.array(vals))


class TestSampledPath:
    def test_step_rule(self):
        assert TWO_JUMP.value_at(0.0) == 0.0
        assert TWO_JUMP.value_at(0.29) == 0.0
        assert TWO_JUMP.value_at(0.3) == 1.0
        assert TWO_JUMP.value_at(0.45) == 1.0
        assert TWO_JUMP.value_at(1.0) == 2.0

    def test_validation(self):
        with pytest.raises(ValueError):
            SampledPath(np.array([0.0, 0.5, 0.5, 1.0]), np.zeros(4))
        with pytest.raises(ValueError):
            SampledPath(np.array([0.1, 1.0]), np.zeros(2))
        with pytest.raises(ValueError):
            SampledPath(np.array([0.0, 0.5]), np.zeros(3))
        with pytest.raises(ValueError):
            TWO_JUMP.value_at(1.5)


class TestTripleMin:
    def test_constant(self):
        assert triple_min(CONST, 0.1, 0.5, 0.9) == 0.0

    def test_single_jump_has_zero_arm(self):
        assert triple_min(ONE_JUMP, 0.1, 0.5, 0.9) == 0.0

    def test_two_jump(self):
        assert triple_min(TWO_JUMP, 0.0, 0.3, 0.6) == 1.0

    def test_ordering_rejected(self):
        with pytest.raises(ValueError):
            triple_min(TWO_JUMP, 0.5, 0.3, 0.9)
        with pytest.raises(ValueError):
            triple_min(TWO_JUMP, 0.1, 0.9, 0.5)


class TestGlobalStat:
    def test_constant(self):
        assert triple_min_sup(CONST) == 0.0

    def test_single_jump(self):
        assert triple_min_sup(ONE_JUMP) == 0.0

    def test_two_jump(self):
        assert triple_min_sup(TWO_JUMP) == 1.0
        assert global_stat_brute(TWO_JUMP) == 1.0

    def test_brute_force_agreement_up_to_64(self):
        rng = np.random.default_rng(2024)
        for n in (4, 9, 17, 33, 64):
            for _ in range(3):
                p = random_path(rng, n)
                assert triple_min_sup(p) == global_stat_brute(p)


class TestPsModule:
    def test_two_jump_examples(self):
        assert ps_module(TWO_JUMP, 0.5) == 0.0
        assert ps_module(TWO_JUMP, 0.6) == 1.0
        assert ps_module(TWO_JUMP, 1.0) == triple_min_sup(TWO_JUMP)

    def test_delta_range_rejected(self):
        with pytest.raises(ValueError):
            ps_module(TWO_JUMP, -0.1)
        with pytest.raises(ValueError):
            ps_module(TWO_JUMP, 1.5)

    def test_brute_force_agreement(self):
        rng = np.random.default_rng(7)
        for n in (5, 16, 33, 64):
            p = random_path(rng, n)
            for d in (0.0, 0.1, 0.37, 0.8, 1.0):
                assert ps_module(p, d) == ps_module_brute(p, d)

    def test_curve_monotone(self):
        curve = ps_module_curve(TWO_JUMP, np.linspace(0.05, 1.0, 20))
        assert isinstance(curve, ModulusCurve)
        assert np.all(np.diff(curve.values) >= 0)


@settings(max_examples=60, deadline=None)
@given(step_paths())
def test_module_monotone_and_caps_at_global(path):
    deltas = [0.1, 0.3, 0.6, 1.0]
    vals = [ps_module(path, d) for d in deltas]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert vals[-1] == triple_min_sup(path)


@settings(max_examples=40, deadline=None)
@given(step_paths(), st.floats(-3, 3), st.floats(-2, 2))
def test_shift_and_scale_invariance(path, shift, scale):
    # exact in real arithmetic; shifting re-rounds the values, so compare
    # up to roundoff
    shifted = SampledPath(path.times, path.values + shift)
    scaled = SampledPath(path.times, path.values * scale)
    base = triple_min_sup(path)
    assert np.isclose(triple_min_sup(shifted), base, rtol=1e-9, atol=1e-12)
    assert np.isclose(triple_min_sup(scaled), abs(scale) * base, rtol=1e-12, atol=1e-12)
    d = 0.4
    assert np.isclose(ps_module(shifted, d), ps_module(path, d), rtol=1e-9, atol=1e-12)
    assert np.isclose(ps_module(scaled, d), abs(scale) * ps_module(path, d), rtol=1e-12, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(-4, 4))
def test_single_jump_global_stat_vanishes(pos, height):
    times = np.unique(np.array([0.0, pos, 1.0]))
    if times.size < 3:
        return
    p = SampledPath(times, np.array([0.0, height, height]))
    assert triple_min_sup(p) == 0.0


class TestContinuityModulus:
    def test_linear(self):
        assert continuity_modulus([0.0, 1.0], [0.0, 1.0], 0.1) == pytest.approx(0.1)

    def test_constant(self):
        for h in (0.0, 0.2, 1.0):
            assert continuity_modulus([0.0, 1.0], [3.0, 3.0], h) == 0.0

    def test_quadratic_grid(self):
        t = np.linspace(0, 1, 11)
        assert continuity_modulus(t, t**2, 0.1) == pytest.approx(0.19)

    def test_grid_pair_brute_force_when_aligned(self):
        t = np.linspace(0, 1, 21)
        v = np.sqrt(t)
        for h in (0.05, 0.1, 0.25):
            brute = max(
                abs(v[i] - v[j])
                for i in range(t.size)
                for j in range(t.size)
                if abs(t[i] - t[j]) <= h + 1e-12
            )
            assert continuity_modulus(t, v, h) == pytest.approx(brute, abs=1e-12)

    def test_monotone_in_h(self):
        t = np.linspace(0, 1, 13)
        v = np.cumsum(np.abs(np.sin(5 * t)))
        v = (v - v[0]) / (v[-1] - v[0])
        hs = np.linspace(0.01, 1.0, 25)
        vals = [continuity_modulus(t, v, h) for h in hs]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_caps_at_total_variation_of_monotone(self):
        t = np.linspace(0, 1, 9)
        v = t**3
        assert continuity_modulus(t, v, 1.0) == pytest.approx(1.0)

    def test_curve_form(self):
        from skorotail.paths import continuity_modulus_curve

        t = np.linspace(0, 1, 11)
        curve = continuity_modulus_curve(t, t**2, np.array([0.05, 0.1, 0.3]))
        assert isinstance(curve, ModulusCurve)
        assert curve.values[1] == pytest.approx(0.19)


class TestGFunction:
    def test_validation(self):
        with pytest.raises(ValueError):
            GFunction(np.array([0.0, 1.0]), np.array([0.5, 1.0]))  # G(0) != 0
        with pytest.raises(ValueError):
            GFunction(np.array([0.0, 0.5, 1.0]), np.array([0.0, 1.0, 0.2]))

    def test_total_and_modulus(self):
        g = GFunction.linear(2.0)
        assert g.total == 2.0
        assert g.modulus(0.25) == pytest.approx(0.5)
        assert GFunction.constant().total == 0.0
