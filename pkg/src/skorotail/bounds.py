"""Tail bounds for the two-sided jump statistics of a path.

Every evaluator here turns moment or entropy information about a process
into an explicit upper bound on P(statistic > u), clamped to [0,1]:

* power bounds: a chaining constant K(alpha, beta) times u^(-2 beta) times a
  power of an increasing envelope G, for the global statistic and (with a
  continuity-modulus factor) for the span-constrained module;
* an entropy series: sum over scales of covering number x scale / growth
  function, minimized over scale/weight sequences;
* moment bounds: infima over p of (3 nu(p) G(1) / u)^p built from the
  natural moment function nu of the triple-minimum statistic;
* minimum-of-variables tail bounds via joint moments and convex conjugation;
* central-limit envelopes: the moment bounds with a Rosenthal factor, uniform
  over the number of summands.

Infima over continuous parameters are taken over finite grids, so every
returned value is a valid (if slightly loose) bound, with the achieving
parameter reported.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import zeta

from .gls import PsiFunction, conjugate_at
from .paths import GFunction

__all__ = [
    "BoundUnavailable",
    "TailCurve",
    "SequencePair",
    "SeriesBound",
    "chaining_constant",
    "chaining_theta_form",
    "power_global_bound",
    "power_module_bound",
    "geometric_sequences",
    "polynomial_sequences",
    "default_sequence_family",
    "entropy_series_bound",
    "entropy_module_bound",
    "moment_global_bound",
    "moment_module_bound",
    "exp_tail_envelopes",
    "ExpEnvelopes",
    "joint_moment",
    "pair_pseudo_norm",
    "EmpiricalJointMoment",
    "min_tail_2d",
    "MinTail2D",
    "min_tail_fenchel",
    "MinTailFenchel",
    "pizier_min_bound",
    "pizier_sup_bound",
    "factored_module_term",
    "factored_module_bound",
    "rosenthal_constant",
    "clt_bounds",
    "clt_exp_envelope",
    "CltEnvelopes",
]

ROSENTHAL_FACTOR = 0.6535


def _safe_exp(x: float) -> float:
    if x < -745.0:
        return 0.0
    if x > 709.0:
        return math.inf
    return math.exp(x)


class BoundUnavailable(RuntimeError):
    """Raised when a bound cannot be produced: a diverging series, or an
    empty admissible parameter range."""


@dataclass(frozen=True)
class TailCurve:
    """Threshold grid with bound (or tail) values in [0,1], nonincreasing."""

    thresholds: np.ndarray
    probs: np.ndarray
    raw: Optional[np.ndarray] = None
    params: Optional[np.ndarray] = None
    label: str = ""

    def __post_init__(self):
        u = np.asarray(self.thresholds, dtype=float)
        p = np.asarray(self.probs, dtype=float)
        if u.ndim != 1 or u.size != p.size or u.size == 0:
            raise ValueError("thresholds and probs must be 1-d of equal length")
        if np.any(u <= 0) or not np.all(np.diff(u) > 0):
            raise ValueError("thresholds must be positive and increasing")
        if np.any(p < -1e-12) or np.any(p > 1 + 1e-12):
            raise ValueError("probs must lie in [0,1]")
        if np.any(np.diff(p) > 1e-9):
            raise ValueError("probs must be nonincreasing along the threshold grid")
        object.__setattr__(self, "thresholds", u)
        object.__setattr__(self, "probs", np.clip(p, 0.0, 1.0))


# ---------------------------------------------------------------------------
# chaining constant
# ---------------------------------------------------------------------------


def _check_alpha_beta(alpha: float, beta: float) -> None:
    if not alpha > 1:
        raise ValueError(f"alpha must exceed 1, got {alpha}")
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")


def chaining_theta_form(alpha: float, beta: float, theta: float) -> float:
    """One-parameter family of chaining constants; valid for
    theta in (2^((1-alpha)/(2 beta)), 1)."""
    _check_alpha_beta(alpha, beta)
    lo = 2 ** ((1 - alpha) / (2 * beta))
    if not lo < theta < 1:
        raise ValueError(f"theta must lie in ({lo}, 1)")
    num = 2 ** ((1 - alpha) / (2 * beta)) * theta ** (-2 * beta) * (1 - theta) ** (-2 * beta)
    den = 1 - 2 ** (1 - alpha) * theta ** (-2 * beta)
    return num / den


def _optimize_theta(alpha: float, beta: float) -> tuple[float, float]:
    """Golden-section minimum of the theta form over its admissible interval."""
    lo = 2 ** ((1 - alpha) / (2 * beta))
    span = 1.0 - lo
    grid = lo + span * np.linspace(1e-6, 1 - 1e-6, 400)
    vals = np.array([chaining_theta_form(alpha, beta, t) for t in grid])
    i = int(np.argmin(vals))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, grid.size - 1)]
    invphi = (math.sqrt(5) - 1) / 2
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc = chaining_theta_form(alpha, beta, c)
    fd = chaining_theta_form(alpha, beta, d)
    for _ in range(200):
        if b - a < 1e-14 * max(1.0, b):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = chaining_theta_form(alpha, beta, c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = chaining_theta_form(alpha, beta, d)
    t_star = 0.5 * (a + b)
    return chaining_theta_form(alpha, beta, t_star), t_star


def chaining_constant(alpha: float, beta: float, mode: str = "closed") -> float:
    """Constant K(alpha, beta) of the power tail bounds.

    ``closed``     evaluates the closed form
                   (1 - 2^((1-alpha)/(4 beta)))^(-2 beta) / (2^((alpha-1)/2) - 1);
    ``optimized``  minimizes the theta form numerically.

    The two modes come from distinct displayed estimates and do not order
    consistently: the closed form is smaller than the theta-form minimum for
    beta > 1/2 (substituting the nominal theta into the theta form reproduces
    the closed form only up to a factor 2^((alpha-1)(1-1/(2 beta)))).
    """
    _check_alpha_beta(alpha, beta)
    if mode == "closed":
        num = (1 - 2 ** ((1 - alpha) / (4 * beta))) ** (-2 * beta)
        den = 2 ** ((alpha - 1) / 2) - 1
        return num / den
    if mode == "optimized":
        return _optimize_theta(alpha, beta)[0]
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# power bounds (global statistic and module)
# ---------------------------------------------------------------------------


def _as_pairs(pairs) -> list[tuple[float, float]]:
    if isinstance(pairs, tuple) and len(pairs) == 2 and np.isscalar(pairs[0]):
        pairs = [pairs]
    out = [(float(a), float(b)) for a, b in pairs]
    if not out:
        raise ValueError("need at least one (alpha, beta) pair")
    for a, b in out:
        _check_alpha_beta(a, b)
    return out


def _u_grid(u_grid) -> np.ndarray:
    u = np.atleast_1d(np.asarray(u_grid, dtype=float))
    if np.any(u <= 0):
        raise ValueError("thresholds must be positive")
    return u


def _zero_curve(u: np.ndarray, label: str) -> TailCurve:
    zeros = np.zeros_like(u)
    return TailCurve(u, zeros, raw=zeros, params=np.full(u.size, np.nan), label=label)


def _curve_from_log(u, log_terms, params, label) -> TailCurve:
    """log_terms: (n_params, n_u) matrix; builds the clamped pointwise-min curve."""
    j = np.argmin(log_terms, axis=0)
    log_best = log_terms[j, np.arange(u.size)]
    raw = np.exp(log_best)
    par = np.empty(len(params), dtype=object)
    par[:] = params
    return TailCurve(
        thresholds=u,
        probs=np.clip(raw, 0.0, 1.0),
        raw=raw,
        params=par[j],
        label=label,
    )


def power_global_bound(pairs, g: GFunction, u_grid, mode: str = "closed") -> TailCurve:
    """K(alpha,beta) u^(-2 beta) (G(1)-G(0))^alpha, minimized over the
    supplied (alpha, beta) pairs and clamped to [0,1]."""
    pl = _as_pairs(pairs)
    u = _u_grid(u_grid)
    g1 = g.total
    if g1 == 0.0:
        return _zero_curve(u, "power-global")
    rows = []
    for a, b in pl:
        rows.append(
            math.log(chaining_constant(a, b, mode)) + a * math.log(g1) - 2 * b * np.log(u)
        )
    return _curve_from_log(u, np.vstack(rows), pl, "power-global")


def power_module_bound(
    pairs, g: GFunction, h: float, u_grid, mode: str = "closed"
) -> TailCurve:
    """Module version: 2 K(alpha,beta) u^(-2 beta) (G(1)-G(0))^alpha
    (omega_G(2h))^(alpha-1), minimized over pairs and clamped."""
    if not 0.0 < h <= 0.5:
        raise ValueError("h must lie in (0, 1/2]")
    pl = _as_pairs(pairs)
    u = _u_grid(u_grid)
    g1 = g.total
    om = g.modulus(2 * h)
    if g1 == 0.0 or om == 0.0:
        return _zero_curve(u, "power-module")
    rows = []
    for a, b in pl:
        rows.append(
            math.log(2.0)
            + math.log(chaining_constant(a, b, mode))
            + a * math.log(g1)
            + (a - 1) * math.log(om)
            - 2 * b * np.log(u)
        )
    return _curve_from_log(u, np.vstack(rows), pl, "power-module")


# ---------------------------------------------------------------------------
# entropy series bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SequencePair:
    """Scale sequence eps (eps(1) = 1, strictly decreasing to 0) and weight
    sequence theta (positive, summing to at most 1), both 1-indexed."""

    eps: Callable[[int], float]
    theta: Callable[[int], float]
    label: str = "custom"


def geometric_sequences(s: float = 0.1, theta: float = 0.6) -> SequencePair:
    """eps(k) = s^(k-1), theta(k) = (1-theta) theta^(k-1) (weights sum to 1)."""
    if not (0 < s < 1 and 0 < theta < 1):
        raise ValueError("s and theta must lie in (0,1)")
    return SequencePair(
        eps=lambda k: s ** (k - 1),
        theta=lambda k: (1 - theta) * theta ** (k - 1),
        label=f"geometric(s={s:g},theta={theta:g})",
    )


def polynomial_sequences(nu: float = 2.0) -> SequencePair:
    """eps(k) = e^(1-k), theta(k) = k^(-nu) / zeta(nu)."""
    if not nu > 1:
        raise ValueError("nu must exceed 1 for summable weights")
    c = 1.0 / float(zeta(nu))
    return SequencePair(
        eps=lambda k: math.exp(1 - k),
        theta=lambda k: c * k ** (-nu),
        label=f"polynomial(nu={nu:g})",
    )


def default_sequence_family() -> list[SequencePair]:
    return [
        geometric_sequences(0.1, 0.6),
        geometric_sequences(0.25, 0.75),
        geometric_sequences(0.5, 0.9),
        polynomial_sequences(2.0),
    ]


def validate_sequence_pair(pair: SequencePair, k_check: int = 200) -> None:
    if abs(pair.eps(1) - 1.0) > 1e-12:
        raise ValueError(f"{pair.label}: eps(1) must equal 1")
    eps = [pair.eps(k) for k in range(1, k_check + 1)]
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError(f"{pair.label}: eps must be strictly decreasing")
    th = [pair.theta(k) for k in range(1, k_check + 1)]
    if any(x <= 0 for x in th):
        raise ValueError(f"{pair.label}: theta must be positive")
    if sum(th) > 1.0 + 1e-9:
        raise ValueError(f"{pair.label}: theta weights must sum to at most 1")


@dataclass(frozen=True)
class SeriesBound:
    """Converged entropy-series value with its truncation remainder."""

    value: float
    remainder: float
    terms_used: int
    pair_label: str


def _series_try(
    covering: Callable[[float], float],
    lam: Callable[[float], float],
    pair: SequencePair,
    u: float,
    tol: float,
    k_max: int,
) -> Optional[SeriesBound]:
    total = 0.0
    prev = None
    ratios: list[float] = []
    for k in range(1, k_max + 1):
        term = covering(pair.eps(k + 1)) * pair.eps(k) / lam(u * pair.theta(k))
        if not np.isfinite(term) or term < 0:
            return None
        total += term
        if prev is not None and prev > 0:
            ratios.append(term / prev)
            ratios = ratios[-8:]
        prev = term
        if len(ratios) == 8:
            rho = max(ratios)
            if rho < 1.0:
                remainder = term * rho / (1.0 - rho)
                if remainder < tol:
                    return SeriesBound(total, remainder, k, pair.label)
            elif k >= 32 and min(ratios) >= 1.0:
                return None  # terms stopped decreasing: numerically divergent
        if total > 1e15:
            return None
    return None  # truncation budget exhausted without a certified remainder


def entropy_series_bound(
    covering: Callable[[float], float],
    lam: Callable[[float], float],
    pairs: SequencePair | Sequence[SequencePair],
    u: float,
    tol: float = 1e-9,
    k_max: int = 100_000,
) -> SeriesBound:
    """Truncated series sum_k N(eps(k+1)) eps(k) / lam(u theta(k)), minimized
    over the supplied sequence pairs.

    ``covering`` maps a scale to a covering number and ``lam`` is the
    increasing growth function; the result bounds the probability that the
    global statistic exceeds 2u.  The truncation index is chosen so the
    geometric-majorant remainder falls below ``tol``.  Raises
    ``BoundUnavailable`` when no supplied pair yields a numerically
    convergent series within the budget.
    """
    if u <= 0:
        raise ValueError("u must be positive")
    if isinstance(pairs, SequencePair):
        pairs = [pairs]
    if not pairs:
        raise ValueError("need at least one sequence pair")
    best: Optional[SeriesBound] = None
    for pair in pairs:
        validate_sequence_pair(pair)
        res = _series_try(covering, lam, pair, u, tol, k_max)
        if res is not None and (best is None or res.value < best.value):
            best = res
    if best is None:
        raise BoundUnavailable(
            "entropy series bound unavailable: partial sums are not Cauchy "
            "within the truncation budget for any supplied sequence pair"
        )
    return best


def entropy_module_bound(series: SeriesBound, sigma: float) -> float:
    """Module bound: series value times the scaled window modulus of the pair
    function, clamped to [0,1]."""
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    return min(1.0, series.value * sigma)


# ---------------------------------------------------------------------------
# moment bounds from the natural function
# ---------------------------------------------------------------------------


def _nu_table(nu, b: float, p_grid) -> tuple[np.ndarray, np.ndarray]:
    """Normalize the moment-function argument to (p grid, values) in [2, b)."""
    if hasattr(nu, "p_grid") and hasattr(nu, "values"):
        ps = np.asarray(nu.p_grid, dtype=float)
        vals = np.asarray(nu.values, dtype=float)
    elif callable(nu):
        if p_grid is None:
            hi = min(b, 256.0)
            p_grid = np.logspace(np.log10(2.0), np.log10(hi), 200, endpoint=False)
        ps = np.asarray(p_grid, dtype=float)
        vals = np.asarray(nu(ps), dtype=float)
    else:
        ps, vals = (np.asarray(a, dtype=float) for a in nu)
    keep = (ps >= 2.0) & (ps < b) & np.isfinite(vals)
    ps, vals = ps[keep], vals[keep]
    if ps.size == 0:
        raise ValueError("moment function has no finite values on [2, b)")
    if np.any(vals < 0):
        raise ValueError("moment function must be nonnegative")
    return ps, vals


def _min_over_p(u: np.ndarray, ps: np.ndarray, log_coef: np.ndarray, extra) -> TailCurve:
    """Pointwise min over p of exp(p*(log_coef - ln u) + extra(p)); clamped."""
    with np.errstate(divide="ignore"):
        log_terms = ps[:, None] * (log_coef[:, None] - np.log(u)[None, :])
    if extra is not None:
        log_terms = log_terms + extra[:, None]
    j = np.argmin(log_terms, axis=0)
    log_best = log_terms[j, np.arange(u.size)]
    raw = np.exp(log_best)
    return TailCurve(
        thresholds=u,
        probs=np.clip(raw, 0.0, 1.0),
        raw=raw,
        params=ps[j],
    )


def moment_global_bound(nu, g: GFunction, u_grid, b: float = np.inf, p_grid=None) -> TailCurve:
    """inf over p in [2, b) of (3 nu(p) (G(1)-G(0)) / u)^p, clamped.

    ``nu`` may be a callable p -> nu(p), a (p grid, values) pair, or any
    object with ``p_grid`` and ``values`` attributes (a moment table).
    """
    ps, vals = _nu_table(nu, b, p_grid)
    u = _u_grid(u_grid)
    g1 = g.total
    if g1 == 0.0:
        return _zero_curve(u, "moment-global")
    with np.errstate(divide="ignore"):
        log_coef = np.log(3.0 * vals * g1)
    curve = _min_over_p(u, ps, log_coef, None)
    return TailCurve(u, curve.probs, raw=curve.raw, params=curve.params, label="moment-global")


def moment_module_bound(
    nu, g: GFunction, h: float, u_grid, b: float = np.inf, p_grid=None
) -> TailCurve:
    """Module version: 2 inf_p (3 nu(p) (G(1)-G(0)) / u)^p (omega_G(2h))^(p-1)."""
    if not 0.0 < h <= 0.5:
        raise ValueError("h must lie in (0, 1/2]")
    ps, vals = _nu_table(nu, b, p_grid)
    u = _u_grid(u_grid)
    g1 = g.total
    om = g.modulus(2 * h)
    if g1 == 0.0 or om == 0.0:
        return _zero_curve(u, "moment-module")
    with np.errstate(divide="ignore"):
        log_coef = np.log(3.0 * vals * g1)
    extra = math.log(2.0) + (ps - 1.0) * math.log(om)
    curve = _min_over_p(u, ps, log_coef, extra)
    return TailCurve(u, curve.probs, raw=curve.raw, params=curve.params, label="moment-module")


# ---------------------------------------------------------------------------
# exponential envelopes for power-of-p moment growth
# ---------------------------------------------------------------------------


def _calibrate(raw: np.ndarray, rate: np.ndarray) -> float:
    """Largest constant C with exp(-C * rate) >= raw at all calibration points
    where the constraint binds (raw < 1); 0 when it never binds."""
    mask = (raw > 0) & (raw < 1) & (rate > 0)
    if not np.any(mask):
        return 0.0
    return float(np.min(-np.log(raw[mask]) / rate[mask]))


@dataclass(frozen=True)
class ExpEnvelopes:
    """Stretched-exponential envelopes of the moment bounds under
    nu(p) <= c1 p^m, with numerically calibrated constants."""

    u: float
    delta_value: float
    kappa_value: float
    c2: float
    c3: float
    omega: float
    delta_in_range: bool
    kappa_in_range: bool


def exp_tail_envelopes(
    c1: float,
    m: float,
    g: GFunction,
    h: float,
    u: float,
    p_max: float = 256.0,
    n_cal: int = 60,
) -> ExpEnvelopes:
    """Envelopes exp(-C2 u^(1/m)) for the global statistic and
    2 omega^(-1) exp(-C3 u^(1/m) omega) for the module, where omega is the
    continuity modulus of G at 2h.

    C2 and C3 are calibrated numerically as the largest constants for which
    the envelope dominates the corresponding grid-infimum moment bound over a
    reference threshold range, so the envelopes relax (sit above) the exact
    bounds there.  The module envelope carries a validity flag for
    u >= (omega |ln omega|)^(-m).
    """
    if c1 <= 0 or m <= 0:
        raise ValueError("c1 and m must be positive")
    if u <= 0:
        raise ValueError("u must be positive")
    g1 = g.total
    om = g.modulus(2 * h)
    if g1 == 0.0:
        return ExpEnvelopes(u, 0.0, 0.0, np.inf, np.inf, om, True, True)
    a = 3.0 * c1 * g1
    nu = lambda p: c1 * p**m
    p_cal = np.logspace(np.log10(2.0), np.log10(p_max / 4.0), n_cal)
    # thresholds where each calibration p is the unconstrained optimum; the
    # query threshold joins the grid so domination there is by construction,
    # and the p grid is left at the evaluators' default so the relaxation is
    # of the same bound a direct call produces
    u_cal = np.sort(np.append(a * (math.e * p_cal) ** m, u))
    delta_curve = moment_global_bound(nu, g, u_cal)
    c2 = _calibrate(delta_curve.raw, u_cal ** (1.0 / m))
    delta_value = min(1.0, _safe_exp(-c2 * u ** (1.0 / m)))

    if om == 0.0:
        return ExpEnvelopes(u, delta_value, 0.0, c2, np.inf, om, u >= 1.0, True)
    u_cal_k = np.sort(np.append(a * om * (math.e * p_cal) ** m, u))
    kappa_curve = moment_module_bound(nu, g, h, u_cal_k)
    c3 = _calibrate(kappa_curve.raw * om / 2.0, u_cal_k ** (1.0 / m) * om)
    kappa_value = min(1.0, 2.0 / om * _safe_exp(-c3 * u ** (1.0 / m) * om))
    threshold = (om * abs(math.log(om))) ** (-m) if 0 < om < 1 else 0.0
    return ExpEnvelopes(
        u=u,
        delta_value=delta_value,
        kappa_value=kappa_value,
        c2=c2,
        c3=c3,
        omega=om,
        delta_in_range=bool(u >= 1.0),
        kappa_in_range=bool(u >= threshold),
    )


# ---------------------------------------------------------------------------
# minimum-of-variables tail bounds (joint moments)
# ---------------------------------------------------------------------------


def joint_moment(xs, ys, p1: float, p2: float) -> float:
    """mean |x|^p1 |y|^p2 on paired samples, scale-free against overflow."""
    x = np.abs(np.asarray(xs, dtype=float))
    y = np.abs(np.asarray(ys, dtype=float))
    if x.shape != y.shape or x.size == 0:
        raise ValueError("xs and ys must be nonempty and equally shaped")
    cx = x.max() or 1.0
    cy = y.max() or 1.0
    return float(cx**p1 * cy**p2 * np.mean((x / cx) ** p1 * (y / cy) ** p2))


def pair_pseudo_norm(xs, ys, p1: float, p2: float) -> float:
    """(mean |x|^p1 |y|^p2)^(1/(p1+p2)): degree-1 homogeneous but not a norm
    (its unit ball is not convex)."""
    return joint_moment(xs, ys, p1, p2) ** (1.0 / (p1 + p2))


class EmpiricalJointMoment:
    """Joint absolute moments of a paired sample with a fast grid evaluator."""

    def __init__(self, xs, ys, block: int = 100_000):
        self.x = np.abs(np.asarray(xs, dtype=float))
        self.y = np.abs(np.asarray(ys, dtype=float))
        if self.x.shape != self.y.shape or self.x.size == 0:
            raise ValueError("xs and ys must be nonempty and equally shaped")
        self.block = block

    def __call__(self, p1: float, p2: float) -> float:
        return joint_moment(self.x, self.y, p1, p2)

    def matrix(self, p1s: np.ndarray, p2s: np.ndarray) -> np.ndarray:
        cx = self.x.max() or 1.0
        cy = self.y.max() or 1.0
        n = self.x.size
        acc = np.zeros((p1s.size, p2s.size))
        for lo in range(0, n, self.block):
            xb = (self.x[lo : lo + self.block] / cx)[:, None] ** p1s[None, :]
            yb = (self.y[lo : lo + self.block] / cy)[:, None] ** p2s[None, :]
            acc += xb.T @ yb
        scale = np.outer(cx**p1s, cy**p2s)
        return scale * acc / n


@dataclass(frozen=True)
class MinTail2D:
    value: float
    raw: float
    p1: float
    p2: float


def min_tail_2d(moment, u: float, v: float, p1_grid=None, p2_grid=None) -> MinTail2D:
    """Joint tail bound min over (p1, p2) of moment(p1,p2) / (u^p1 v^p2),
    clamped to [0,1].

    ``moment`` is either a scalar callable (p1, p2) -> E|x|^p1 |y|^p2 or an
    object exposing ``matrix(p1s, p2s)`` (see ``EmpiricalJointMoment``).
    Infinite moments are skipped; if nothing on the grid is finite the bound
    degenerates to 1 with a warning.
    """
    if u <= 0 or v <= 0:
        raise ValueError("u and v must be positive")
    if p1_grid is None:
        p1_grid = np.logspace(-1, np.log10(16.0), 60)
    if p2_grid is None:
        p2_grid = np.logspace(-1, np.log10(16.0), 60)
    p1_grid = np.asarray(p1_grid, dtype=float)
    p2_grid = np.asarray(p2_grid, dtype=float)
    if hasattr(moment, "matrix"):
        mom = np.asarray(moment.matrix(p1_grid, p2_grid), dtype=float)
    else:
        mom = np.array([[moment(a, b) for b in p2_grid] for a in p1_grid], dtype=float)
    with np.errstate(divide="ignore"):
        log_terms = (
            np.log(mom)
            - p1_grid[:, None] * math.log(u)
            - p2_grid[None, :] * math.log(v)
        )
    log_terms = np.where(np.isfinite(mom), log_terms, np.inf)
    if not np.any(np.isfinite(log_terms)):
        warnings.warn("joint moment infinite everywhere on the grid; bound is 1",
                      RuntimeWarning, stacklevel=2)
        return MinTail2D(1.0, np.inf, np.nan, np.nan)
    i, j = np.unravel_index(np.argmin(log_terms), log_terms.shape)
    raw = float(np.exp(log_terms[i, j]))
    return MinTail2D(min(1.0, raw), raw, float(p1_grid[i]), float(p2_grid[j]))


@dataclass(frozen=True)
class MinTailFenchel:
    value: float
    p_star: float
    at_edge: bool


def min_tail_fenchel(psi: PsiFunction, d: int, u: float) -> MinTailFenchel:
    """Tail bound exp(-psi1*(d ln u)) for the minimum of d variables whose
    absolute product has moment function psi, where psi1(p) = p ln psi(p) and
    * is the convex conjugate over the tabulated support.

    Identical to the direct infimum of psi(p)^p u^(-dp) over the grid; requires
    u > 1.  The achieving p is reported, with a flag when it sits at the grid
    edge (the infimum is then a grid artifact, not an interior optimum).
    """
    if d < 1:
        raise ValueError("d must be a positive integer")
    if not u > 1.0:
        raise ValueError("the transform bound applies only for u > 1")
    ps = psi.grid
    psi1 = ps * np.log(psi.values)
    star = float(conjugate_at(ps, psi1, np.array([d * math.log(u)]))[0])
    exponents = d * ps * math.log(u) - psi1
    k = int(np.argmax(exponents))
    value = math.exp(-star)
    return MinTailFenchel(min(1.0, value), float(ps[k]), bool(k == ps.size - 1))


# ---------------------------------------------------------------------------
# chaining-metric (increment-norm) bounds
# ---------------------------------------------------------------------------


def pizier_min_bound(d2p, r: float, s: float, t: float, u: float, p_grid=None) -> tuple[float, float]:
    """Triple bound inf over p of d(p, r, s)^p d(p, s, t)^p / u^(2p), clamped;
    d2p(p, a, b) is the order-2p increment norm.  Returns (value, achieving p)."""
    if u <= 0:
        raise ValueError("u must be positive")
    if p_grid is None:
        p_grid = np.logspace(-1, np.log10(32.0), 120)
    p_grid = np.asarray(p_grid, dtype=float)
    best = np.inf
    best_p = np.nan
    for p in p_grid:
        d1 = d2p(p, r, s)
        d2 = d2p(p, s, t)
        if not (np.isfinite(d1) and np.isfinite(d2)):
            continue
        if d1 == 0.0 or d2 == 0.0:
            return 0.0, float(p)
        log_term = p * (math.log(d1) + math.log(d2) - 2 * math.log(u))
        if log_term < best:
            best, best_p = log_term, float(p)
    if not np.isfinite(best):
        raise ValueError("increment norms are nowhere finite on the p grid")
    return min(1.0, math.exp(best)), best_p


def pizier_sup_bound(d2p, r: float, t: float, u: float, s_grid, p_grid=None) -> float:
    """Pair version: sup over intermediate s of the per-triple infimum."""
    vals = [pizier_min_bound(d2p, r, s, t, u, p_grid)[0] for s in np.asarray(s_grid, dtype=float)]
    return float(max(vals))


# ---------------------------------------------------------------------------
# factored-distance module bound
# ---------------------------------------------------------------------------


def factored_module_term(
    z: Callable[[float], float], v: GFunction, l: float, p: float, h: float, u: float
) -> float:
    """Single-parameter term 2 K(lp, p) Z(2p)^(1/l) V(1)^(lp) u^(-2p)
    (omega_V(2h))^(lp-1), clamped to [0,1].

    Applies under the factored increment-norm condition
    d_p(r,s) d_p(s,t) <= Z(p) |V(t)-V(r)|^l; requires l*p > 1 so the
    chaining constant exists.
    """
    if u <= 0:
        raise ValueError("u must be positive")
    if not 0.0 < h <= 0.5:
        raise ValueError("h must lie in (0, 1/2]")
    if not l * p > 1:
        raise ValueError("need l*p > 1 for the chaining constant")
    v1 = v.total
    om = v.modulus(2 * h)
    if v1 == 0.0:
        return 0.0
    zval = z(2 * p)
    if zval < 0:
        raise ValueError("Z must be nonnegative")
    if zval == 0.0 or om == 0.0:
        return 0.0
    log_term = (
        math.log(2.0)
        + math.log(chaining_constant(l * p, p))
        + math.log(zval) / l
        + l * p * math.log(v1)
        - 2 * p * math.log(u)
        + (l * p - 1) * math.log(om)
    )
    return min(1.0, math.exp(log_term))


def factored_module_bound(
    z: Callable[[float], float],
    v: GFunction,
    l: float,
    b: float,
    h: float,
    u: float,
    n_p: int = 120,
) -> tuple[float, float]:
    """Infimum of ``factored_module_term`` over the stated admissible range
    p in [2, min(b, 1/l)).

    The stated range never intersects the term's own requirement l*p > 1:
    for l >= 1/2 it is empty outright, and for l < 1/2 every p in it has
    l*p < 1.  ``BoundUnavailable`` is therefore raised rather than guessing
    a repaired constraint; use ``factored_module_term`` directly to evaluate
    at an explicitly chosen order.
    """
    hi = min(b, 1.0 / l)
    if hi <= 2.0:
        raise BoundUnavailable(
            f"empty admissible range [2, min(b, 1/l)) = [2, {hi:g}) for l={l:g}, b={b:g}"
        )
    ps = np.linspace(2.0, hi, n_p, endpoint=False)
    ps = ps[l * ps > 1.0]
    if ps.size == 0:
        raise BoundUnavailable(
            f"the stated range [2, {hi:g}) contains no order with l*p > 1 "
            f"for l={l:g}; evaluate factored_module_term at a chosen p instead"
        )
    vals = [factored_module_term(z, v, l, p, h, u) for p in ps]
    k = int(np.argmin(vals))
    return float(vals[k]), float(ps[k])


# ---------------------------------------------------------------------------
# central-limit envelopes
# ---------------------------------------------------------------------------


def rosenthal_constant(p: float) -> float:
    """Upper bound 0.6535 p / ln p on the constant relating the p-norm of a
    normalized iid sum to the summand's p-norm, for p >= 2."""
    if p < 2:
        raise ValueError("p must be at least 2")
    return ROSENTHAL_FACTOR * p / math.log(p)


def clt_bounds(
    y,
    b_env: GFunction,
    h: float,
    u_grid,
    b: float = np.inf,
    p_grid=None,
    rosenthal: bool = True,
) -> tuple[TailCurve, TailCurve]:
    """Envelopes, uniform over the number of summands, for the tails of the
    global statistic and the module of normalized partial-sum paths:

        inf_p (3 K_R(p) y(p) B(1) / u)^p     and the module version with the
        extra 2 (omega_B(2h))^(p-1) factor,

    where y is the natural moment function of the summand process and B its
    increment envelope.  With ``rosenthal=False`` the factor K_R is 1 and the
    evaluator reduces to the plain moment bounds (for a uniform-in-n moment
    function supplied directly)."""
    if not 0.0 < h <= 0.5:
        raise ValueError("h must lie in (0, 1/2]")
    ps, vals = _nu_table(y, b, p_grid)
    u = _u_grid(u_grid)
    b1 = b_env.total
    om = b_env.modulus(2 * h)
    if b1 == 0.0:
        return _zero_curve(u, "clt-global"), _zero_curve(u, "clt-module")
    kr = np.array([rosenthal_constant(p) for p in ps]) if rosenthal else np.ones_like(ps)
    with np.errstate(divide="ignore"):
        log_coef = np.log(3.0 * kr * vals * b1)
    gcurve = _min_over_p(u, ps, log_coef, None)
    gcurve = TailCurve(u, gcurve.probs, raw=gcurve.raw, params=gcurve.params, label="clt-global")
    if om == 0.0:
        return gcurve, _zero_curve(u, "clt-module")
    extra = math.log(2.0) + (ps - 1.0) * math.log(om)
    mcurve = _min_over_p(u, ps, log_coef, extra)
    mcurve = TailCurve(u, mcurve.probs, raw=mcurve.raw, params=mcurve.params, label="clt-module")
    return gcurve, mcurve


@dataclass(frozen=True)
class CltEnvelopes:
    """Stretched-exponential relaxations of the central-limit envelopes under
    y(p) <= c1 p^(1/m) ln^s p."""

    u: float
    delta_value: float
    kappa_value: float
    c2: float
    c3: float
    omega: float
    delta_in_range: bool
    kappa_in_range: bool


def clt_exp_envelope(
    c1: float,
    m: float,
    s: float,
    b_env: GFunction,
    h: float,
    u: float,
    p_max: float = 256.0,
    n_cal: int = 60,
) -> CltEnvelopes:
    """Closed-form-shaped envelopes

        exp(-C2 u^(m/(m+1)) |ln u|^(m(s-1)/(m+1)))                  (global)
        2 omega^(-1) exp(-C3 (u/omega)^(m/(m+1)) ln(u/omega)^(m(s-1)/(m+1)))

    with C2, C3 calibrated so the envelopes dominate the grid-infimum
    central-limit bounds over a reference range.  The global form is stated
    for u >= e; the module form for u > e omega |ln omega|^(1+1/m); the
    returned flags mark whether the requested u is inside those ranges."""
    if c1 <= 0 or m <= 0:
        raise ValueError("c1 and m must be positive")
    if u <= 0:
        raise ValueError("u must be positive")
    b1 = b_env.total
    om = b_env.modulus(2 * h)
    if b1 == 0.0:
        return CltEnvelopes(u, 0.0, 0.0, np.inf, np.inf, om, True, True)

    def y(p):
        p = np.asarray(p, dtype=float)
        out = c1 * p ** (1.0 / m)
        if s != 0.0:
            out = out * np.log(p) ** s
        return out

    p_eval = np.logspace(np.log10(2.0), np.log10(p_max), 400)

    def rate_global(uu):
        return uu ** (m / (m + 1)) * np.abs(np.log(uu)) ** (m * (s - 1) / (m + 1))

    d0 = 3.0 * rosenthal_constant(2.0) * c1 * b1
    u_lo = max(math.e * 1.0001, d0)
    u_cal = np.logspace(np.log10(u_lo), np.log10(u_lo) + 6, n_cal)
    if u >= math.e:
        u_cal = np.sort(np.append(u_cal, u))
    gcurve, _ = clt_bounds(y, b_env, h, u_cal, p_grid=p_eval)
    c2 = _calibrate(gcurve.raw, rate_global(u_cal))
    delta_value = min(1.0, _safe_exp(-c2 * float(rate_global(u))))

    if om == 0.0:
        return CltEnvelopes(u, delta_value, 0.0, c2, np.inf, om, u >= math.e, True)
    threshold = math.e * om * abs(math.log(om)) ** (1 + 1.0 / m) if om < 1 else math.e * om

    def rate_module(uu):
        ratio = uu / om
        return ratio ** (m / (m + 1)) * np.abs(np.log(ratio)) ** (m * (s - 1) / (m + 1))

    lo_k = max(threshold * 1.0001, u_lo)
    u_cal_k = np.logspace(np.log10(lo_k), np.log10(lo_k) + 6, n_cal)
    if u > threshold:
        u_cal_k = np.sort(np.append(u_cal_k, u))
    _, mcurve = clt_bounds(y, b_env, h, u_cal_k, p_grid=p_eval)
    c3 = _calibrate(mcurve.raw * om / 2.0, rate_module(u_cal_k))
    kappa_value = min(1.0, 2.0 / om * _safe_exp(-c3 * float(rate_module(u))))
    return CltEnvelopes(
        u=u,
        delta_value=delta_value,
        kappa_value=kappa_value,
        c2=c2,
        c3=c3,
        omega=om,
        delta_in_range=bool(u >= math.e),
        kappa_in_range=bool(u > threshold),
    )
