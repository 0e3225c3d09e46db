"""Desk-scale confrontation of prime counts with asymptotic models.

Builds per-N samples of the classical ratio pi(N) log N / N, the offset
logarithmic integral comparator, a square-root error band, and a correction
model in the inverted variable x = 1/N: with the scaling factor
eps(x) = x log(1/x), the model ratio is (1 - x^(1/(1 + eps * pi(N))))^-1.
The exponent 1/(1 + eps * pi) equals 1/(1 + ratio) identically, so it
climbs toward 1/2 exactly as fast as the ratio falls toward 1; the tables
report that motion, they do not decide anything about it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .primes import PrimeTable, li


@dataclass(frozen=True)
class PntSample:
    """All per-N observables used by the tables."""

    n: int
    pi_n: int
    ratio: float             # pi(N) log N / N
    li_err: float            # pi(N) - li(N)
    model_ratio: float       # corrected ratio model at x = 1/N
    exponent: float          # 1 / (1 + eps * pi(N))
    epsilon_scale: float     # eps(1/N) = log(N) / N


def _model_parts(pi_n: int, n: int) -> tuple[float, float, float]:
    """(eps, exponent, model_ratio) for the inverted-variable correction model."""
    eps = math.log(n) / n
    exponent = 1.0 / (1.0 + eps * pi_n)
    # 1 - (1/N)^exponent evaluated stably via expm1.
    model = 1.0 / -math.expm1(-exponent * math.log(n))
    return eps, exponent, model


def make_sample(pt: PrimeTable, n: int) -> PntSample:
    if n < 4:
        raise ValueError(f"samples need N >= 4 (log N < N), got {n}")
    if n > pt.limit:
        raise ValueError(f"N={n} exceeds table limit {pt.limit}")
    pi_n = pt.pi(n)
    eps, exponent, model = _model_parts(pi_n, n)
    return PntSample(
        n=n,
        pi_n=pi_n,
        ratio=pi_n * math.log(n) / n,
        li_err=pi_n - li(n),
        model_ratio=model,
        exponent=exponent,
        epsilon_scale=eps,
    )


def ratio_table(pt: PrimeTable, ns: list[int]) -> list[PntSample]:
    """One sample per N, in the given order; deterministic."""
    return [make_sample(pt, n) for n in ns]


def correction_model_ratio(pt: PrimeTable, n: int) -> float:
    """The corrected ratio model (1 - (1/N)^(1/(1+eps*pi)))^-1 at N."""
    if n < 4:
        raise ValueError(f"need N >= 4, got {n}")
    if n > pt.limit:
        raise ValueError(f"N={n} exceeds table limit {pt.limit}")
    return _model_parts(pt.pi(n), n)[2]


def sigma_fixed_point(x: float) -> float:
    """Unique root of sigma = x^(1/(2+sigma)) in (0, 1).

    g(sigma) = sigma - x^(1/(2+sigma)) is strictly increasing (the map
    sigma -> x^(1/(2+sigma)) increases in sigma for 0 < x < 1), negative at
    0 and positive at 1, so bisection brackets the root; a few Newton steps
    polish it to residual below 1e-12.
    """
    if not 0 < x < 1:
        raise ValueError(f"need x in (0, 1), got {x}")
    log_x = math.log(x)

    def g(sig: float) -> float:
        return sig - math.exp(log_x / (2.0 + sig))

    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if g(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    sig = 0.5 * (lo + hi)
    for _ in range(4):
        f = g(sig)
        # g'(sigma) = 1 + x^(1/(2+sigma)) * log(1/x) / (2+sigma)^2
        fp = 1.0 + math.exp(log_x / (2.0 + sig)) * (-log_x) / (2.0 + sig) ** 2
        step = f / fp
        if sig - step <= 0.0 or sig - step >= 1.0:
            break
        sig -= step
    residual = abs(g(sig))
    if residual >= 1e-12:
        raise ArithmeticError(f"fixed-point residual {residual} at x={x} did not reach 1e-12")
    return sig


@dataclass(frozen=True)
class BandPoint:
    n: int
    err: float
    band: float
    inside: bool


def rh_band_check(pt: PrimeTable, ns: list[int]) -> list[BandPoint]:
    """|pi(N) - li(N)| against sqrt(N) log N at each N.

    A consistency observation at desk scale; staying inside the band decides
    nothing beyond the sampled range.
    """
    out = []
    for n in ns:
        err = abs(pt.pi(n) - li(n))
        band = math.sqrt(n) * math.log(n)
        out.append(BandPoint(n=n, err=err, band=band, inside=bool(err <= band)))
    return out


MODELS = ("x_over_logx", "li", "eq_model")


@dataclass(frozen=True)
class FitResult:
    model: str
    slope: float
    r2: float


def error_exponent_fit(pt: PrimeTable, ns: list[int], model: str) -> FitResult:
    """Least-squares slope of log|pi(N) - model(N)| against log N.

    Quantifies how fast each comparator's absolute error grows; needs at
    least 4 sample points spanning 3 decades or more.
    """
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")
    if len(ns) < 4 or max(ns) / min(ns) < 1e3:
        raise ValueError("fit needs >= 4 sample points spanning >= 3 decades")
    errs = []
    for n in ns:
        pi_n = pt.pi(n)
        if model == "x_over_logx":
            pred = n / math.log(n)
        elif model == "li":
            pred = li(n)
        else:
            pred = correction_model_ratio(pt, n) * n / math.log(n)
        errs.append(abs(pi_n - pred))
    errs_arr = np.asarray(errs, dtype=np.float64)
    if np.any(errs_arr == 0.0):
        raise ValueError("a model error vanished exactly; log-log fit undefined")
    xs = np.log(np.asarray(ns, dtype=np.float64))
    ys = np.log(errs_arr)
    if np.allclose(ys.var(), 0.0):
        raise ValueError("degenerate fit: error magnitudes have zero variance")
    slope, intercept = np.polyfit(xs, ys, 1)
    pred_ys = slope * xs + intercept
    ss_res = float(np.sum((ys - pred_ys) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    return FitResult(model=model, slope=float(slope), r2=1.0 - ss_res / ss_tot)


def sample_csv_rows(pt: PrimeTable, ns: list[int]):
    """CSV rows N,pi,ratio,li,li_err,band,inside,model_ratio,exponent,sigma."""
    for n in ns:
        s = make_sample(pt, n)
        li_n = s.pi_n - s.li_err
        band = math.sqrt(n) * math.log(n)
        yield (
            s.n,
            s.pi_n,
            s.ratio,
            li_n,
            s.li_err,
            band,
            int(abs(s.li_err) <= band),
            s.model_ratio,
            s.exponent,
            sigma_fixed_point(1.0 / n),
        )


def fit_summary(pt: PrimeTable, ns: list[int]) -> dict:
    """JSON-ready summary of the three error fits plus band bookkeeping."""
    fits = {}
    for model in MODELS:
        fr = error_exponent_fit(pt, ns, model)
        fits[model] = {"slope": fr.slope, "r2": fr.r2}
    band = rh_band_check(pt, ns)
    return {
        "sample_points": list(ns),
        "fits": fits,
        "band": {
            "all_inside": all(b.inside for b in band),
            "max_err_over_band": max(b.err / b.band for b in band),
        },
    }
