"""Command-line front end: reproducible experiment runs with manifests.

One binary, eight subcommands (cantor, staircase, valuation, deform,
measure, primes, pnt, report).  Configuration comes from a plain key=value
file plus flags, flags winning; every run writes manifest.json echoing the
fully resolved configuration, the tool version, and the wall time.  CSV
bodies are byte-reproducible for a fixed (config, seed): timestamps are
segregated to the manifest.

Exit codes: 0 success, 2 configuration error, 3 resource-cap error,
1 internal invariant violation.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
import traceback
import warnings
from dataclasses import dataclass
from pathlib import Path

import mpmath as mp
import numpy as np

from . import __version__, cantor, deform, invariance, pnt, primes, reportio, valuation
from .errors import ConfigError, ResourceCapError
from .staircase import Staircase, sample_csv_rows


def _intval(s) -> int:
    v = float(s)
    if v != int(v):
        raise ConfigError(f"expected an integer, got {s!r}")
    return int(v)


def _intlist(s) -> list[int]:
    return [_intval(tok) for tok in str(s).split(",") if tok != ""]


# name -> (converter, default, help); shared by flags and config files
COMMON_PARAMS = {
    "out": (str, "out", "output directory"),
    "cache": (str, "", "cache directory for the sieve bit-set (empty: no cache)"),
    "threads": (_intval, 1, "worker threads for the sieve (output-invariant)"),
    "precision": (_intval, 128, "bits for extended-precision valuation paths"),
    "seed": (_intval, 0, "seed for randomized sweeps"),
}

SUB_PARAMS = {
    "cantor": {
        "beta": (float, 1.0 / 3.0, "contraction ratio in (0, 1/2)"),
        "base_lo": (float, 0.0, "base interval left endpoint"),
        "base_hi": (float, 1.0, "base interval right endpoint"),
        "depth": (_intval, 8, "construction depth"),
        "box_exponents": (str, "", "comma list k for boxes grid_base^-k (empty: skip)"),
        "grid_base": (float, 2.0, "box grid base"),
    },
    "staircase": {
        "beta": (float, 1.0 / 3.0, "contraction ratio in (0, 1/2)"),
        "samples": (_intval, 1024, "grid resolution for the x,phi(x) sampler"),
        "tol": (float, 2.0**-48, "evaluation tolerance"),
    },
    "valuation": {
        "family": (str, "power", "power | two_norm | constant"),
        "epsilon": (float, 0.1, "base scale of the power family"),
        "l": (float, 0.4, "target valuation of the power family"),
        "lam": (float, 0.7, "proportionality constant in (0, 1]"),
        "p": (_intval, 3, "scale base of the two_norm family"),
        "mu": (float, 0.3, "constant scale ratio of the constant family"),
        "nmax": (_intval, 200, "deepest scale exponent"),
        "pairs": (_intval, 0, "random pairs for an ultrametric sweep (0: skip)"),
    },
    "deform": {
        "v": (float, 0.5, "valuation of the sweep"),
        "s": (float, math.log(2.0) / math.log(3.0), "ambient dimension"),
        "x_min": (float, 1e-6, "sweep start"),
        "x_max": (float, 0.5, "sweep end"),
        "points": (_intval, 65, "sweep points (log grid)"),
        "step_a": (float, 0.0, "plateau left of the smoothed step"),
        "step_b": (float, 1.0, "plateau right of the smoothed step"),
        "step_p": (float, 5.0, "jump location"),
        "eta": (float, 0.25, "left half-width"),
        "eta_tilde": (float, 0.25, "right half-width"),
        "step_points": (_intval, 257, "trace points across the step window"),
        "beta": (float, 1.0 / 3.0, "staircase ratio used for smoothing"),
    },
    "measure": {
        "scenarios": (_intval, 1000, "random scenarios for the residual sweep"),
        "balance_l": (float, 0.5, "length for the log-balance report"),
        "balance_a": (float, 1.0 / 3.0, "contraction for the log-balance report"),
        "balance_n": (_intval, 1, "iterations for the log-balance report"),
    },
    "primes": {
        "limit": (_intval, 10**6, "sieve bound"),
        "segment_odds": (_intval, primes.DEFAULT_SEGMENT_ODDS, "odds per segment"),
        "print_pi": (str, "", "print the prime count at this x (empty: skip)"),
        "ladders": (str, "", "comma list of cutoffs for a ladders CSV (empty: skip)"),
        "rebuild_cache": (_intval, 0, "1 forces a sieve rebuild even if cached"),
    },
    "pnt": {
        "nmax": (_intval, 10**6, "sieve bound backing the table"),
        "decades": (str, "3,4,5,6", "comma list of decade exponents to sample"),
    },
    "report": {
        "nmax": (_intval, 10**6, "sieve bound backing the table"),
        "decades": (str, "3,4,5,6", "comma list of decade exponents to sample"),
        "sigma_grid": (_intval, 100, "points of the sigma fixed-point grid"),
    },
}


@dataclass
class RunConfig:
    subcommand: str
    params: dict
    output_dir: Path
    cache_dir: Path | None
    threads: int
    precision: int
    seed: int


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scalefree",
        description="Scale-invariant numerics and prime counting comparisons.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="subcommand", required=True)
    for name, params in SUB_PARAMS.items():
        sp = subs.add_parser(name, help=f"run the {name} experiment")
        sp.add_argument("--config", default=None, help="key=value config file")
        for key, (conv, default, help_text) in {**COMMON_PARAMS, **params}.items():
            sp.add_argument(
                f"--{key.replace('_', '-')}",
                dest=key,
                type=str,
                default=argparse.SUPPRESS,
                help=f"{help_text} (default: {default})",
            )
    return parser


def _read_config_file(path: str) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def resolve_config(argv: list[str]) -> RunConfig:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    sub = ns.subcommand
    allowed = {**COMMON_PARAMS, **SUB_PARAMS[sub]}
    resolved = {key: default for key, (_, default, _) in allowed.items()}
    if ns.config:
        for key, value in _read_config_file(ns.config).items():
            if key not in allowed:
                raise ConfigError(f"unknown config key {key!r} for subcommand {sub!r}")
            resolved[key] = allowed[key][0](value)
    for key in allowed:
        if hasattr(ns, key):
            resolved[key] = allowed[key][0](getattr(ns, key))
    return RunConfig(
        subcommand=sub,
        params=resolved,
        output_dir=Path(resolved["out"]),
        cache_dir=Path(resolved["cache"]) if resolved["cache"] else None,
        threads=resolved["threads"],
        precision=resolved["precision"],
        seed=resolved["seed"],
    )


def _get_table(cfg: RunConfig, limit: int, segment_odds: int | None = None, rebuild: bool = False):
    seg = segment_odds or primes.DEFAULT_SEGMENT_ODDS
    if cfg.cache_dir is not None:
        cfg.cache_dir.mkdir(parents=True, exist_ok=True)
        cache_path = cfg.cache_dir / f"sieve_{limit}.bits"
        if cache_path.exists() and not rebuild:
            return primes.load_cache(cache_path)
        pt = primes.build_table(limit, segment_odds=seg, threads=cfg.threads)
        primes.save_cache(pt, cache_path)
        return pt
    return primes.build_table(limit, segment_odds=seg, threads=cfg.threads)


# -- subcommand bodies -------------------------------------------------------


def _run_cantor(cfg: RunConfig) -> None:
    p = cfg.params
    spec = cantor.CantorSpec(
        beta=p["beta"], base_lo=p["base_lo"], base_hi=p["base_hi"], depth=p["depth"]
    )
    ls = cantor.build_levels(spec)
    reportio.write_csv(
        cfg.output_dir / "cantor_levels.csv",
        ["level", "index", "kind", "lo", "hi"],
        cantor.level_csv_rows(ls),
    )
    if p["box_exponents"]:
        fit = cantor.box_count_estimate(spec, _intlist(p["box_exponents"]), grid_base=p["grid_base"])
        reportio.write_csv(
            cfg.output_dir / "cantor_boxcount.csv",
            ["box_size", "count"],
            zip(fit.box_sizes, fit.counts),
        )
        reportio.write_json(
            cfg.output_dir / "cantor_boxfit.json",
            {
                "dimension_estimate": fit.estimate,
                "similarity_dimension": cantor.dimension(spec),
                "fit_residual": fit.residual,
            },
        )


def _run_staircase(cfg: RunConfig) -> None:
    p = cfg.params
    st = Staircase(cantor.CantorSpec(beta=p["beta"]), tol=p["tol"])
    reportio.write_csv(
        cfg.output_dir / "staircase.csv", ["x", "phi(x)"], sample_csv_rows(st, p["samples"])
    )


def _run_valuation(cfg: RunConfig) -> None:
    p = cfg.params
    kind = p["family"]
    if kind == "power":
        fam = valuation.power_family(p["epsilon"], p["l"], p["lam"])
    elif kind == "two_norm":
        fam = valuation.two_norm_family(p["p"], p["lam"])
    elif kind == "constant":
        fam = valuation.constant_ratio_family(p["mu"])
    else:
        raise ConfigError(f"unknown valuation family {kind!r}")
    reportio.write_csv(
        cfg.output_dir / "valuation_trace.csv",
        ["n", "delta", "x_tilde", "v_n", "bound"],
        valuation.trace_rows(fam, p["nmax"]),
    )
    if p["pairs"] > 0:
        rng = np.random.default_rng(cfg.seed)
        rows = []
        for _ in range(p["pairs"]):
            a, b = rng.uniform(0.0, 1.0, 2)
            delta = 10.0 ** rng.uniform(-8.0, -2.0)
            log_d = math.log(delta)
            # raw log form: a sum above the scale just reads as v < 0
            v1 = (log_d - (1.0 + a) * log_d) / -log_d
            v2 = (log_d - (1.0 + b) * log_d) / -log_d
            v_sum = (log_d - math.log(delta ** (1.0 + a) + delta ** (1.0 + b))) / -log_d
            rows.append((delta, v1, v2, v_sum, int(v_sum <= max(v1, v2) + 1e-9)))
        reportio.write_csv(
            cfg.output_dir / "valuation_pairs.csv",
            ["delta", "v1", "v2", "v_sum", "strong_triangle_ok"],
            rows,
        )


def _run_deform(cfg: RunConfig) -> None:
    p = cfg.params
    xs = np.logspace(math.log10(p["x_min"]), math.log10(p["x_max"]), p["points"])
    reportio.write_csv(
        cfg.output_dir / "fatten_sweep.csv",
        ["x", "X_exact", "X_linear"],
        deform.fatten_csv_rows(xs, v=p["v"], s=p["s"]),
    )
    st = Staircase(cantor.CantorSpec(beta=p["beta"]))
    ss = deform.SmoothStep(
        a=p["step_a"], b=p["step_b"], p=p["step_p"], eta=p["eta"], eta_tilde=p["eta_tilde"], st=st
    )
    lo = p["step_p"] - 2.0 * p["eta"]
    hi = p["step_p"] + 2.0 * p["eta_tilde"]
    xs2 = np.linspace(lo, hi, p["step_points"])
    reportio.write_csv(
        cfg.output_dir / "step_trace.csv", ["x", "f_smooth(x)"], deform.step_csv_rows(ss, xs2)
    )


def _run_measure(cfg: RunConfig) -> None:
    p = cfg.params
    rng = np.random.default_rng(cfg.seed)
    scenarios = [
        invariance.ContractionScenario(
            a=float(rng.uniform(0.05, 0.95)),
            p=float(rng.uniform(2.0, 64.0)),
            n=int(rng.integers(1, 41)),
            l=float(rng.uniform(0.05, 1.0)),
        )
        for _ in range(p["scenarios"])
    ]
    reportio.write_csv(
        cfg.output_dir / "measure_residuals.csv",
        ["a", "p", "n", "l", "invariance_residual", "dual_residual"],
        invariance.scenario_csv_rows(scenarios),
    )
    rep = invariance.balance_report(p["balance_l"], p["balance_a"], p["balance_n"])
    reportio.write_json(
        cfg.output_dir / "balance.json",
        {
            "note": "both sides reported, no equality asserted; normalization is diagnostic",
            "l": rep.l,
            "a": rep.a,
            "n": rep.n,
            "p": rep.p,
            "s": rep.s,
            "L": rep.big_l,
            "left": rep.left,
            "right": rep.right,
            "log_residual": rep.log_residual,
        },
    )


def _run_primes(cfg: RunConfig) -> None:
    p = cfg.params
    pt = _get_table(cfg, p["limit"], p["segment_odds"], rebuild=bool(p["rebuild_cache"]))
    if p["print_pi"]:
        x = float(p["print_pi"])
        print(pt.pi(x))
    if p["ladders"]:
        cutoffs = sorted(float(t) for t in p["ladders"].split(","))
        rows = []
        pxs = primes.prime_ladder_series(pt, cutoffs)
        for x, px in zip(cutoffs, pxs):
            rows.append((x, primes.harmonic_ladder(x), px, primes.li(x)))
        reportio.write_csv(
            cfg.output_dir / "ladders.csv", ["x", "H", "P", "li"], rows
        )


def _run_pnt(cfg: RunConfig):
    p = cfg.params
    pt = _get_table(cfg, p["nmax"])
    ns = [10**k for k in _intlist(p["decades"])]
    if any(n > pt.limit for n in ns):
        raise ConfigError(f"decades {p['decades']} exceed nmax {p['nmax']}")
    reportio.write_csv(
        cfg.output_dir / "pnt_table.csv",
        ["N", "pi", "ratio", "li", "li_err", "band", "inside", "model_ratio", "exponent", "sigma"],
        pnt.sample_csv_rows(pt, ns),
    )
    return pt, ns


def _run_report(cfg: RunConfig) -> None:
    pt, ns = _run_pnt(cfg)
    reportio.write_json(cfg.output_dir / "fits.json", pnt.fit_summary(pt, ns))
    grid = np.logspace(-12.0, math.log10(0.9), cfg.params["sigma_grid"])
    rows = []
    for x in grid:
        sg = pnt.sigma_fixed_point(float(x))
        rows.append((float(x), sg, abs(sg - float(x) ** (1.0 / (2.0 + sg)))))
    reportio.write_csv(cfg.output_dir / "sigma_grid.csv", ["x", "sigma", "residual"], rows)


_RUNNERS = {
    "cantor": _run_cantor,
    "staircase": _run_staircase,
    "valuation": _run_valuation,
    "deform": _run_deform,
    "measure": _run_measure,
    "primes": _run_primes,
    "pnt": _run_pnt,
    "report": _run_report,
}


def run(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    saved_prec = mp.mp.prec
    try:
        mp.mp.prec = cfg.precision
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # flags are data, not console noise
            _RUNNERS[cfg.subcommand](cfg)
    finally:
        mp.mp.prec = saved_prec
    reportio.write_manifest(
        cfg.output_dir / "manifest.json",
        version=__version__,
        config={"subcommand": cfg.subcommand, **cfg.params},
        wall_time_s=time.perf_counter() - t0,
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = resolve_config(argv)
        return run(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except SystemExit:
        raise
    except Exception as exc:  # internal invariant violation
        traceback.print_exc()
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
