"""Ultrametric valuation of small numbers relative to a scale.

A positive x with scale delta < x determines "inverted" companions
x_tilde = lam * delta^2 / x below the scale (0 < x_tilde < delta).  The
finite-scale valuation v = log(delta / x_tilde) / log(1 / delta) measures
how much faster than the scale the companion vanishes; scale families
delta_n -> 0 have valuations converging like c / n, so limits are computed
by extrapolation against 1/n with an explicit error bound, never by
plugging in a "small enough" delta.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import mpmath as mp
import numpy as np

from .errors import NonConvergenceError
from .staircase import Staircase

Family = Callable[[int], tuple]  # n (1-based) -> (x_tilde, delta); restartable


@dataclass(frozen=True)
class ScaledInfinitesimal:
    """A triple (x, delta, x_tilde) obeying the inversion rule.

    x_tilde / delta = lam * (delta / x) holds by construction, which forces
    the ordering 0 < x_tilde < delta < x.
    """

    x: float
    delta: float
    lam: float
    x_tilde: float

    @property
    def scale_ratio(self) -> float:
        """x_tilde / delta, the scale-invariant form."""
        return self.x_tilde / self.delta

    def valuation(self) -> float:
        return valuation_at_scale(self.x_tilde, self.delta)


@dataclass(frozen=True)
class ValuationResult:
    """Extrapolated valuation limit with its O(1/n) error bound."""

    v: float
    scale_exponent: int
    error_bound: float


def make_infinitesimal(x: float, delta: float, lam: float = 1.0) -> ScaledInfinitesimal:
    """Build the inverted companion of x below the scale delta."""
    if not 0 < delta < x:
        raise ValueError(f"scale ordering violated: need 0 < delta < x, got delta={delta}, x={x}")
    if not 0 < lam <= 1:
        raise ValueError(f"lam must lie in (0, 1], got {lam}")
    x_tilde = lam * delta * delta / x
    return ScaledInfinitesimal(x=x, delta=delta, lam=lam, x_tilde=x_tilde)


def _log(z):
    if isinstance(z, (float, int)):
        return math.log(z)
    return mp.log(z)


def valuation_at_scale(x_tilde, delta) -> float:
    """Finite-scale valuation log(delta / x_tilde) / log(1 / delta).

    Exact in the sense that no limit is taken; accepts floats or mpmath
    values (deep scale families underflow float64 and must pass mpf).
    """
    if not 0 < x_tilde < delta < 1:
        raise ValueError(
            f"valuation needs 0 < x_tilde < delta < 1, got x_tilde={x_tilde}, delta={delta}"
        )
    ld = _log(delta)
    return float((ld - _log(x_tilde)) / -ld)


def valuation_ratio(v_x: float, alpha: float, s: float) -> float:
    """Valuation after a jump of size alpha between scales of dimension s."""
    if s <= 0:
        raise ValueError(f"dimension s must be positive, got {s}")
    return (alpha / s) * v_x


def valuation_limit(family: Family, n_max: int) -> ValuationResult:
    """Extrapolate v_n to n -> infinity assuming a c/n correction.

    Fits v_n = v + c/n on the tail by least squares (equivalent to iterated
    Richardson steps for data that is exactly linear in 1/n).  The returned
    error bound is |c|/n_max plus the disagreement between two half-window
    fits; if the window fits disagree materially the family is not converging
    like 1/n and NonConvergenceError is raised instead.
    """
    if n_max < 8:
        raise ValueError(f"n_max must be >= 8 for a stable fit, got {n_max}")
    ns = np.arange(1, n_max + 1, dtype=np.float64)
    vs = np.empty(n_max, dtype=np.float64)
    for n in range(1, n_max + 1):
        x_tilde, delta = family(n)
        vs[n - 1] = valuation_at_scale(x_tilde, delta)

    def fit(sl: slice) -> tuple[float, float]:
        t = 1.0 / ns[sl]
        c, v = np.polyfit(t, vs[sl], 1)
        return float(v), float(c)

    v_full, c_full = fit(slice(n_max // 2, n_max))
    v_a, _ = fit(slice(n_max // 2, 3 * n_max // 4))
    v_b, _ = fit(slice(3 * n_max // 4, n_max))
    spread = abs(v_a - v_b)
    if spread > 1e-3 * max(1.0, abs(v_full)):
        raise NonConvergenceError(
            f"1/n extrapolation unstable: window estimates {v_a!r} vs {v_b!r} "
            f"(fitted correction c={c_full!r}); the family does not converge like c/n"
        )
    bound = abs(c_full) / n_max + spread
    return ValuationResult(v=v_full, scale_exponent=n_max, error_bound=bound)


def represent(
    delta: float,
    l: float,
    st: Staircase,
    u: float,
    perturb: Callable[[float], float] | None = None,
) -> tuple[float, float]:
    """Dominant-form companion delta^(1 + l + phi(u)) and its valuation.

    l >= 0 is the uniform (constant) part of the valuation and phi(u) the
    staircase part; the sub-dominant correction factor is dropped unless a
    perturb(u) hook is supplied for sensitivity studies.  Round trip:
    valuation_at_scale(x_tilde, delta) recovers l + phi(u) to a few ulps.
    """
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if l < 0:
        raise ValueError(f"constant part l must be >= 0, got {l}")
    v = l + st.eval(u)
    if v > 1.0:
        warnings.warn(
            f"valuation {v} exceeds 1; outside the nominal codomain but representable",
            stacklevel=2,
        )
    if v == 0.0:
        warnings.warn(
            "valuation 0 makes x_tilde equal to the scale itself (non-strict ordering)",
            stacklevel=2,
        )
    x_tilde = math.exp((1.0 + v) * math.log(delta))
    if perturb is not None:
        x_tilde *= perturb(u)
    return x_tilde, v


# -- scale families ----------------------------------------------------------


def power_family(epsilon: float, l: float, lam: float = 1.0) -> Family:
    """x_n = eps^(n(1-l)) with scale delta_n = eps^n.

    The inverted companion has scale ratio lam * eps^(n*l), so the valuation
    converges to l with correction log(1/lam) / (n * log(1/eps)).
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if not 0 < l < 1:
        raise ValueError(f"l must lie in (0, 1), got {l}")
    eps = mp.mpf(epsilon)
    lam_mp = mp.mpf(lam)

    def fam(n: int):
        delta = eps**n
        x = eps ** (n * (1 - mp.mpf(l)))
        return lam_mp * delta * delta / x, delta

    return fam


def two_norm_family(p: int, lam: float = 1.0) -> Family:
    """x_n = 2^-n against the scale delta_n = p^-n for an odd prime p.

    The sequence vanishes classically, but its valuation limit is
    1 - log 2 / log p: the two norms disagree about where it goes.
    """
    if p <= 2:
        raise ValueError(f"p must exceed 2, got {p}")
    lam_mp = mp.mpf(lam)

    def fam(n: int):
        delta = mp.mpf(p) ** -n
        x = mp.mpf(2) ** -n
        return lam_mp * delta * delta / x, delta

    return fam


def constant_ratio_family(mu: float, base: float = 0.5) -> Family:
    """x_tilde_n = mu * delta_n: constant scale ratio, valuation limit 0."""
    if not 0 < mu < 1:
        raise ValueError(f"mu must lie in (0, 1), got {mu}")
    if not 0 < base < 1:
        raise ValueError(f"base must lie in (0, 1), got {base}")
    mu_mp = mp.mpf(mu)
    b = mp.mpf(base)

    def fam(n: int):
        delta = b**n
        return mu_mp * delta, delta

    return fam


def trace_rows(family: Family, n_max: int):
    """CSV rows (n, delta, x_tilde, v_n, bound) for convergence plots."""
    res = valuation_limit(family, n_max)
    c_scale = res.error_bound * n_max  # |c| plus window-spread share
    for n in range(1, n_max + 1):
        x_tilde, delta = family(n)
        yield (n, delta, x_tilde, valuation_at_scale(x_tilde, delta), c_scale / n)
