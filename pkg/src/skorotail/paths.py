"""Step paths on a grid of [0,1] and their two-sided jump statistics.

A sampled path is a right-continuous step function: constant on every
interval [t_i, t_{i+1}) between grid times.  The central statistic is the
triple minimum

    min(|f(s) - f(r)|, |f(t) - f(s)|),    r <= s <= t,

whose unconstrained supremum (``triple_min_sup``) measures how strongly two
comparably sized jumps interlace, and whose span-constrained supremum
(``ps_module``) is the Prokhorov-Skorokhod module of continuity: it vanishes
as the span constraint tightens exactly when the path has no "double jump"
at a single location.

All suprema are taken over grid triples, which is exact for step paths read
through the step rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SampledPath",
    "ModulusCurve",
    "GFunction",
    "triple_min",
    "triple_min_sup",
    "ps_module",
    "ps_module_curve",
    "continuity_modulus",
    "continuity_modulus_curve",
    "global_stat_brute",
    "ps_module_brute",
]


def _as_float_array(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


@dataclass(frozen=True)
class SampledPath:
    """Right-continuous step function on a finite grid of [0,1].

    ``times`` must be strictly increasing with ``times[0] == 0`` and
    ``times[-1] == 1``; ``values[i]`` is the value on [times[i], times[i+1]).
    """

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = _as_float_array(self.times)
        v = _as_float_array(self.values)
        if t.ndim != 1 or v.ndim != 1 or t.size != v.size or t.size < 2:
            raise ValueError("times and values must be 1-d arrays of equal length >= 2")
        if not np.all(np.diff(t) > 0):
            raise ValueError("times must be strictly increasing")
        if t[0] != 0.0 or t[-1] != 1.0:
            raise ValueError("times must start at 0 and end at 1")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
            raise ValueError("times and values must be finite")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def value_at(self, t: float) -> float:
        """Evaluate by the step rule: value at the greatest grid time <= t."""
        if t < 0.0 or t > 1.0:
            raise ValueError(f"t={t} outside [0,1]")
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        return float(self.values[i])

    @property
    def n(self) -> int:
        return self.times.size


@dataclass(frozen=True)
class ModulusCurve:
    """A nondecreasing curve h -> value, e.g. a modulus evaluated on a grid."""

    arguments: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        a = _as_float_array(self.arguments)
        v = _as_float_array(self.values)
        if a.ndim != 1 or a.size != v.size:
            raise ValueError("arguments and values must be 1-d of equal length")
        if not np.all(np.diff(a) > 0):
            raise ValueError("arguments must be increasing")
        if np.any(v < -1e-12) or np.any(np.diff(v) < -1e-12):
            raise ValueError("values must be nonnegative and nondecreasing")
        object.__setattr__(self, "arguments", a)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class GFunction:
    """Nondecreasing continuous function on [0,1], piecewise linear between
    grid points, with G(0) = 0.  Used as a deterministic envelope in the
    tail bounds."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = _as_float_array(self.times)
        v = _as_float_array(self.values)
        if t.ndim != 1 or t.size != v.size or t.size < 2:
            raise ValueError("times and values must be 1-d of equal length >= 2")
        if not np.all(np.diff(t) > 0):
            raise ValueError("times must be strictly increasing")
        if t[0] != 0.0 or t[-1] != 1.0:
            raise ValueError("times must span [0,1]")
        if abs(v[0]) > 1e-12:
            raise ValueError("G(0) must be 0")
        if np.any(np.diff(v) < -1e-12):
            raise ValueError("values must be nondecreasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", np.maximum.accumulate(v))

    def __call__(self, t) -> np.ndarray:
        return np.interp(t, self.times, self.values)

    @property
    def total(self) -> float:
        """G(1) - G(0)."""
        return float(self.values[-1] - self.values[0])

    def modulus(self, h: float) -> float:
        return continuity_modulus(self.times, self.values, h)

    @classmethod
    def linear(cls, slope: float = 1.0) -> "GFunction":
        return cls(np.array([0.0, 1.0]), np.array([0.0, slope]))

    @classmethod
    def constant(cls) -> "GFunction":
        return cls(np.array([0.0, 1.0]), np.array([0.0, 0.0]))


def _check_triple(r: float, s: float, t: float) -> None:
    if not (0.0 <= r <= s <= t <= 1.0):
        raise ValueError(f"triple must satisfy 0 <= r <= s <= t <= 1, got ({r}, {s}, {t})")


def triple_min(path: SampledPath, r: float, s: float, t: float) -> float:
    """min(|f(s)-f(r)|, |f(t)-f(s)|) with f evaluated by the step rule."""
    _check_triple(r, s, t)
    fr, fs, ft = path.value_at(r), path.value_at(s), path.value_at(t)
    return min(abs(fs - fr), abs(ft - fs))


def _arm_maxima(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """For each grid index s: max_{r<=s} |v[s]-v[r]| and max_{t>=s} |v[t]-v[s]|.

    Works on a (m, n) matrix of paths; returns two (m, n) arrays.
    """
    v = np.atleast_2d(values)
    # running min/max from the left give the extreme increments in O(n)
    lmin = np.minimum.accumulate(v, axis=1)
    lmax = np.maximum.accumulate(v, axis=1)
    left = np.maximum(v - lmin, lmax - v)
    rmin = np.minimum.accumulate(v[:, ::-1], axis=1)[:, ::-1]
    rmax = np.maximum.accumulate(v[:, ::-1], axis=1)[:, ::-1]
    right = np.maximum(v - rmin, rmax - v)
    return left, right


def triple_min_sup(path: SampledPath) -> float:
    """Largest triple minimum over all grid triples r <= s <= t.

    Uses the max-min split: for fixed s the maximum over (r, t) of
    min(a_r, b_t) equals min(max_r a_r, max_t b_t).
    """
    return float(triple_min_sup_matrix(path.values[None, :])[0])


def triple_min_sup_matrix(values: np.ndarray) -> np.ndarray:
    """Vectorized ``triple_min_sup`` over rows of a (m, n) value matrix."""
    left, right = _arm_maxima(values)
    return np.minimum(left, right).max(axis=1)


def ps_module(path: SampledPath, delta: float) -> float:
    """Prokhorov-Skorokhod module: largest triple minimum over grid triples
    (t1, t, t2) whose span satisfies times[t2] - times[t1] <= delta.

    Nondecreasing in delta, and equal to ``triple_min_sup`` at delta = 1.
    """
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta={delta} outside [0,1]")
    return float(ps_module_matrix(path.times, path.values[None, :], delta)[0])


def _span_caps(times: np.ndarray, delta: float) -> np.ndarray:
    """cap[r] = largest index t with times[t] - times[r] <= delta."""
    n = times.size
    caps = np.empty(n, dtype=np.int64)
    for r in range(n):
        # predicate written as a difference so brute force and fast path agree
        ok = np.nonzero(times - times[r] <= delta)[0]
        caps[r] = ok[-1]
    return caps


def ps_module_matrix(times: np.ndarray, values: np.ndarray, delta: float) -> np.ndarray:
    """Vectorized ``ps_module`` over rows of a (m, n) value matrix."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta={delta} outside [0,1]")
    v = np.atleast_2d(np.asarray(values, dtype=float))
    t = np.asarray(times, dtype=float)
    m, n = v.shape
    caps = _span_caps(t, delta)
    best = np.zeros(m)
    for s in range(n):
        arm_right = np.abs(v[:, s:] - v[:, s : s + 1])
        # cummax over t >= s: max |v[t]-v[s]| for t in [s, j]
        cum = np.maximum.accumulate(arm_right, axis=1)
        lo = int(np.searchsorted(caps, s))  # first r with caps[r] >= s
        for r in range(lo, s + 1):
            c = caps[r]
            if c < s:
                continue
            val = np.minimum(np.abs(v[:, s] - v[:, r]), cum[:, c - s])
            np.maximum(best, val, out=best)
    return best


def ps_module_curve(path: SampledPath, deltas) -> ModulusCurve:
    """Evaluate the module on an increasing grid of span constraints."""
    d = np.asarray(deltas, dtype=float)
    vals = np.array([ps_module(path, x) for x in d])
    return ModulusCurve(d, vals)


def global_stat_brute(path: SampledPath) -> float:
    """Reference O(n^3) enumeration of the unconstrained triple-minimum sup."""
    v = path.values
    n = v.size
    best = 0.0
    for s in range(n):
        for r in range(s + 1):
            a = abs(v[s] - v[r])
            if a <= best:
                continue
            for t in range(s, n):
                m = min(a, abs(v[t] - v[s]))
                if m > best:
                    best = m
    return best


def ps_module_brute(path: SampledPath, delta: float) -> float:
    """Reference O(n^3) enumeration of the span-constrained module."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta={delta} outside [0,1]")
    t, v = path.times, path.values
    n = v.size
    best = 0.0
    for s in range(n):
        for r in range(s + 1):
            a = abs(v[s] - v[r])
            for t2 in range(s, n):
                if t[t2] - t[r] <= delta:
                    m = min(a, abs(v[t2] - v[s]))
                    if m > best:
                        best = m
    return best


def continuity_modulus(times, values, h: float) -> float:
    """Modulus of continuity sup{|G(t)-G(r)| : |r-t| <= h} of the piecewise
    linear interpolant of a monotone table.

    The sup over the continuum is attained with one endpoint at a knot, so it
    is computed exactly from the knots and their h-shifts.  On grids where h
    aligns with the spacing this coincides with the maximum over grid pairs.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.ndim != 1 or t.size != v.size or t.size < 2:
        raise ValueError("times and values must be 1-d of equal length >= 2")
    if not np.all(np.diff(t) > 0):
        raise ValueError("times must be increasing")
    if np.any(np.diff(v) < -1e-12):
        raise ValueError("table must be nondecreasing")
    if h < 0:
        raise ValueError("h must be nonnegative")
    if h == 0:
        return 0.0
    h = min(h, float(t[-1] - t[0]))
    lo, hi = t[0], t[-1]
    # candidate left endpoints: knots and knots shifted left by h
    starts = np.unique(np.clip(np.concatenate([t, t - h]), lo, hi - h))
    ends = starts + h
    diffs = np.interp(ends, t, v) - np.interp(starts, t, v)
    return float(diffs.max(initial=0.0))


def continuity_modulus_curve(times, values, hs) -> ModulusCurve:
    h = np.asarray(hs, dtype=float)
    vals = np.array([continuity_modulus(times, values, x) for x in h])
    return ModulusCurve(h, vals)
