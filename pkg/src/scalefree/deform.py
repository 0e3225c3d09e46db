"""Fattened (deformed) reals, increment modes, and step smoothing.

A small positive x with valuation v and ambient dimension s acquires the
deformed values X_plus = x^(1 - v/s) >= x and X_minus = x^(1 + v/s) <= x.
Both the exact exponential form and its logarithmic linearization
x + (v/s) x log(1/x) are first-class so the linearization error stays
observable.  The module also provides the three increment modes (shift,
scaling, inversion), a finite-difference residual for the logarithmic decay
law log y * dv/dlog y = -v, and staircase-smoothed step functions, including
a smoothed prime-counting evaluator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .cantor import CantorSpec
from .primes import PrimeTable
from .staircase import Staircase

INCREMENT_MODES = ("shift", "scaling", "inversion")


@dataclass(frozen=True)
class DeformedReal:
    """A real near 0 together with its valuation and ambient dimension."""

    x: float
    v: float
    s: float

    def __post_init__(self) -> None:
        if not 0 < self.x < 1:
            raise ValueError(f"x must lie in (0, 1), got {self.x}")
        if not 0 <= self.v <= 1:
            raise ValueError(f"valuation must lie in [0, 1], got {self.v}")
        if not 0 < self.s <= 1:
            raise ValueError(f"dimension must lie in (0, 1], got {self.s}")

    @property
    def x_plus(self) -> float:
        return self.x ** (1.0 - self.v / self.s)

    @property
    def x_minus(self) -> float:
        return self.x ** (1.0 + self.v / self.s)


def fatten(d: DeformedReal) -> tuple[float, float]:
    """(exact, linearized) upward deformation of d.x.

    exact = x^(1 - v/s); linearized = x + (v/s) x log(1/x).  The two agree
    only while (v/s) log(1/x) is small; returning both makes the gap visible
    instead of silently choosing a branch.
    """
    g = d.v / d.s
    exact = d.x ** (1.0 - g)
    linear = d.x + g * d.x * math.log(1.0 / d.x)
    return exact, linear


def increment(mode: str, x: float, h: float) -> float:
    """Apply one differential increment of the given mode.

    shift:     x + h
    scaling:   e^h * x          (log x' = log x + h)
    inversion: x^(-e^h)         (pure inversion at h = 0)

    The double-log bookkeeping of the inversion mode is only meaningful for
    x in (0, 1); see double_log_coord.  The raw map itself needs just x > 0.
    """
    if mode == "shift":
        return x + h
    if mode == "scaling":
        return math.exp(h) * x
    if mode == "inversion":
        if x <= 0:
            raise ValueError(f"inversion mode needs x > 0, got {x}")
        return math.exp(-math.exp(h) * math.log(x))
    raise ValueError(f"unknown increment mode {mode!r}; expected one of {INCREMENT_MODES}")


def double_log_coord(x: float) -> float:
    """log log(1/x) for x in (0, 1), the coordinate in which inversions shift.

    An inversion increment h maps x to x' = x^(-e^h) > 1 and satisfies
    log log x' = double_log_coord(x) + h.  Rejected when log(1/x) <= 0
    (that is, x >= 1) since the double logarithm is undefined there.
    """
    if x <= 0 or math.log(1.0 / x) <= 0:
        raise ValueError(f"double-log coordinate needs x in (0, 1), got {x}")
    return math.log(math.log(1.0 / x))


def increment_ladder(h: float) -> tuple[float, float]:
    """(log h, log log h): the scaling and inversion increments tied to a shift h.

    log log h needs h > 1; callers probing the h -> 0 regime should pass the
    reciprocal and track signs themselves.
    """
    if h <= 0:
        raise ValueError(f"increment ladder needs h > 0, got {h}")
    first = math.log(h)
    if first <= 0:
        raise ValueError(f"log log h undefined for h <= 1, got h={h}")
    return first, math.log(first)


def jump_size(chi: float, chi_prime: float) -> float:
    """log of the log-ratio log(chi') / log(chi), the inversion jump measure."""
    if chi <= 0 or chi_prime <= 0 or chi == 1:
        raise ValueError("jump size needs positive arguments with chi != 1")
    ratio = math.log(chi_prime) / math.log(chi)
    if ratio <= 0:
        raise ValueError(
            f"log-ratio {ratio} not positive; chi={chi} and chi_prime={chi_prime} "
            f"sit on opposite sides of 1"
        )
    return math.log(ratio)


def log_scale_ode_residual(v_fn: Callable[[float], float], y: float, step: float) -> float:
    """|log y * dv/dlog y + v(y)| by central differences in u = log y.

    The decay family v(y) = C / log y solves the law exactly, so its residual
    is O(step^2); constants give residual |v|.
    """
    if y <= 1:
        raise ValueError(f"need y > 1, got {y}")
    if step <= 0:
        raise ValueError(f"need step > 0, got {step}")
    u = math.log(y)
    dv = (v_fn(math.exp(u + step)) - v_fn(math.exp(u - step))) / (2.0 * step)
    return abs(u * dv + v_fn(y))


@dataclass(frozen=True)
class SmoothStep:
    """A two-plateau step smoothed by a staircase over [p - eta, p + eta_tilde].

    Collapses pointwise to the raw step (a below p, b above p) off x = p as
    the half-widths shrink, while x * d/dx vanishes everywhere the staircase
    is flat.
    """

    a: float
    b: float
    p: float
    eta: float
    eta_tilde: float
    st: Staircase

    def __post_init__(self) -> None:
        if self.p <= 0:
            raise ValueError(f"jump location must be positive, got {self.p}")
        if self.eta <= 0 or self.eta_tilde <= 0:
            raise ValueError("half-widths must be positive")

    def eval(self, x: float) -> float:
        if x <= 0:
            raise ValueError(f"need x > 0, got {x}")
        lo = self.p - self.eta
        hi = self.p + self.eta_tilde
        if x <= lo:
            return self.a
        if x >= hi:
            return self.b
        t = (x - lo) / (self.eta + self.eta_tilde)
        return self.a + (self.b - self.a) * self.st.eval(t)


def smooth_step_eval(ss: SmoothStep, x: float) -> float:
    return ss.eval(x)


def _default_staircase() -> Staircase:
    return Staircase(CantorSpec(beta=1.0 / 3.0))


def smoothed_pi(pt: PrimeTable, x: float, eta: float, st: Staircase | None = None) -> float:
    """Prime count with each unit jump smoothed over [p - eta, p + eta].

    Equals the exact count whenever x is farther than eta from every prime.
    eta must stay below half the local prime gap, otherwise neighbouring
    smoothed jumps would overlap and monotonicity would break.
    """
    if x < 2:
        raise ValueError(f"need x >= 2, got {x}")
    if eta <= 0:
        raise ValueError(f"need eta > 0, got {eta}")
    if st is None:
        st = _default_staircase()
    # Local gap check around the evaluation window.
    window = pt.primes_in(max(2.0, x - 2.0 * eta - 2.0), min(pt.limit, x + 2.0 * eta + 2.0))
    neighbours = list(window)
    try:
        neighbours.insert(0, pt.prev_prime(max(2.0, x - 2.0 * eta)))
    except ValueError:
        pass
    try:
        neighbours.append(pt.next_prime(min(pt.limit - 1, x + 2.0 * eta)))
    except ValueError:
        pass
    neighbours = sorted(set(int(q) for q in neighbours))
    for q1, q2 in zip(neighbours, neighbours[1:]):
        if eta > (q2 - q1) / 2.0:
            raise ValueError(
                f"eta={eta} exceeds half the local prime gap ({q2 - q1}) between "
                f"{q1} and {q2}; smoothed jumps would overlap"
            )
    full = pt.pi(min(x - eta, pt.limit)) if x - eta >= 0 else 0
    partial = 0.0
    for q in pt.primes_in(x - eta, min(x + eta, pt.limit)):
        q = int(q)
        if q <= x - eta:
            continue  # already counted as a full jump
        partial += SmoothStep(a=0.0, b=1.0, p=float(q), eta=eta, eta_tilde=eta, st=st).eval(x)
    return full + partial


def fatten_csv_rows(xs, v: float, s: float):
    """CSV rows (x, X_exact, X_linear) for a sweep of x values."""
    for x in xs:
        exact, linear = fatten(DeformedReal(x=float(x), v=v, s=s))
        yield (float(x), exact, linear)


def step_csv_rows(ss: SmoothStep, xs):
    """CSV rows (x, f_smooth(x)) for a step trace."""
    for x in xs:
        yield (float(x), ss.eval(float(x)))
