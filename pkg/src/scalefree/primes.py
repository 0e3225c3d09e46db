"""Exact prime infrastructure at desk scale.

A segmented, odd-only sieve of Eratosthenes backs an immutable PrimeTable
with prime-counting queries, prime iteration, the offset logarithmic
integral li(x), and the two classical ladders H(x) = sum 1/i and
P(x) = sum 1/p.  Everything here is deterministic: the sieve result is
independent of segment size and worker count, and ladder sums are carried
with error-tracking (compensated) summation so they are reproducible to
the last bit.
"""

from __future__ import annotations

import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.integrate import quad

from .errors import ResourceCapError

DEFAULT_LIMIT_CAP = 10**9
DEFAULT_SEGMENT_ODDS = 1 << 20
_BLOCK = 1 << 16          # odds per count block for fast pi queries
_CHUNK = 1 << 20          # elements per compensated-summation chunk

CACHE_MAGIC = b"SFSIEVE\x00"
CACHE_VERSION = 1


def _simple_odd_mask(limit: int) -> np.ndarray:
    """Bool mask over odd numbers 1,3,5,..<=limit; True where prime."""
    n = (limit + 1) // 2
    mask = np.ones(n, dtype=bool)
    if n:
        mask[0] = False  # 1 is not prime
    for p in range(3, math.isqrt(limit) + 1, 2):
        if mask[p // 2]:
            mask[p * p // 2 :: p] = False
    return mask


def _sieve_segment(mask: np.ndarray, base_odd_primes: np.ndarray, i_lo: int, i_hi: int) -> None:
    """Clear composites in the odd-index window [i_lo, i_hi) of the shared mask.

    Index i encodes the odd number 2*i+1.  Windows are disjoint, so workers
    never race and the result is schedule-independent.
    """
    n_lo = 2 * i_lo + 1
    n_hi = 2 * (i_hi - 1) + 1
    for p in base_odd_primes:
        p = int(p)
        if p * p > n_hi:
            break
        start = max(p * p, ((n_lo + p - 1) // p) * p)
        if start % 2 == 0:
            start += p
        if start > n_hi:
            continue
        mask[start // 2 : i_hi : p] = False


@dataclass
class PrimeTable:
    """Immutable store of all primes <= limit with O(1)-ish counting queries.

    The backing array has one bool per odd number (index i <-> 2i+1); prime 2
    is handled separately.  Instances are safe to share across threads after
    construction.
    """

    limit: int
    odd_is_prime: np.ndarray
    _block_cum: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        counts = np.add.reduceat(
            self.odd_is_prime,
            np.arange(0, self.odd_is_prime.size, _BLOCK),
            dtype=np.int64,
        )
        self._block_cum = np.concatenate(([0], np.cumsum(counts)))
        self.odd_is_prime.setflags(write=False)

    # -- counting ----------------------------------------------------------

    def pi(self, x: float, strict: bool = False) -> int:
        """Number of primes <= x (default), or < x with strict=True.

        The two conventions differ only when x is itself prime.
        """
        if not (0 <= x <= self.limit):
            raise ValueError(f"pi query x={x} outside [0, {self.limit}]")
        m = math.floor(x)
        if strict and x == m:
            m -= 1
        if m < 2:
            return 0
        n_odd = min((m + 1) // 2, self.odd_is_prime.size)  # odds <= m
        b = n_odd // _BLOCK
        count = int(self._block_cum[b])
        count += int(np.count_nonzero(self.odd_is_prime[b * _BLOCK : n_odd]))
        return count + 1  # the prime 2

    def is_prime(self, n: int) -> bool:
        if n < 2 or n > self.limit:
            return False
        if n == 2:
            return True
        if n % 2 == 0:
            return False
        return bool(self.odd_is_prime[n // 2])

    # -- iteration ---------------------------------------------------------

    def primes(self) -> np.ndarray:
        """All primes <= limit as an int64 array (materialized on demand)."""
        odd = 2 * np.flatnonzero(self.odd_is_prime).astype(np.int64) + 1
        if self.limit >= 2:
            return np.concatenate(([2], odd))
        return odd

    def primes_in(self, lo: float, hi: float) -> np.ndarray:
        """Primes p with lo <= p <= hi, ascending."""
        lo = max(lo, 2)
        if hi > self.limit:
            raise ValueError(f"range end {hi} exceeds table limit {self.limit}")
        if hi < lo:
            return np.empty(0, dtype=np.int64)
        i_lo = max((math.ceil(lo) - 1) // 2, 0)
        i_hi = min((math.floor(hi) + 1) // 2, self.odd_is_prime.size)
        odd = 2 * (np.flatnonzero(self.odd_is_prime[i_lo:i_hi]) + i_lo).astype(np.int64) + 1
        odd = odd[odd >= lo]
        if lo <= 2 <= hi:
            return np.concatenate(([2], odd))
        return odd

    def next_prime(self, x: float) -> int:
        """Smallest prime > x; raises if none exists within the table."""
        n = math.floor(x)
        step = 64
        while n < self.limit:
            cand = self.primes_in(n + 1, min(n + step, self.limit))
            if cand.size:
                return int(cand[0])
            n += step
            step *= 4
        raise ValueError(f"no prime above {x} within limit {self.limit}")

    def prev_prime(self, x: float) -> int:
        """Largest prime < x; raises if none exists (x <= 2)."""
        n = math.ceil(x) - 1 if x == math.ceil(x) else math.floor(x)
        step = 64
        while n >= 2:
            cand = self.primes_in(max(2, n - step), n)
            if cand.size:
                return int(cand[-1])
            n -= step + 1
            step *= 4
        raise ValueError(f"no prime below {x}")


def build_table(
    limit: int,
    segment_odds: int = DEFAULT_SEGMENT_ODDS,
    threads: int = 1,
    limit_cap: int = DEFAULT_LIMIT_CAP,
) -> PrimeTable:
    """Segmented sieve of all primes <= limit.

    Parameters
    ----------
    limit:
        Inclusive sieve bound, 2 <= limit <= limit_cap.
    segment_odds:
        Odd numbers per segment; the result is identical for any value.
    threads:
        Worker count for segment sieving.  Segments write to disjoint
        windows of one shared mask, so the output is independent of the
        schedule and of this parameter.
    """
    if limit < 2:
        raise ValueError(f"sieve limit must be >= 2, got {limit}")
    if limit > limit_cap:
        mem_mb = (limit // 2) / 2**20
        raise ResourceCapError(
            f"sieve limit {limit} exceeds the configured cap of {limit_cap} "
            f"(backing store would need about {mem_mb:.0f} MiB)"
        )
    if segment_odds < 1 << 10:
        segment_odds = 1 << 10
    n_odds = (limit + 1) // 2
    root = math.isqrt(limit)
    base_odd_primes = 2 * np.flatnonzero(_simple_odd_mask(root)) + 1 if root >= 3 else np.empty(0, np.int64)

    full = np.ones(n_odds, dtype=bool)
    full[0] = False  # 1
    windows = [
        (i, min(i + segment_odds, n_odds)) for i in range(0, n_odds, segment_odds)
    ]
    if threads <= 1 or len(windows) == 1:
        for i_lo, i_hi in windows:
            _sieve_segment(full, base_odd_primes, i_lo, i_hi)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda w: _sieve_segment(full, base_odd_primes, *w), windows))
    return PrimeTable(limit=limit, odd_is_prime=full)


# -- binary cache ------------------------------------------------------------
#
# Layout (little-endian): magic (8 bytes), version (u32), limit (u64), then
# the odd-composite bits packed 8 per byte with bit order 'little'.  Bit i
# refers to the odd number 2i+1 and is 1 when that number is NOT prime
# (so 1, and every odd composite, carry a 1 bit).


def save_cache(pt: PrimeTable, path: str | Path) -> None:
    packed = np.packbits(~pt.odd_is_prime, bitorder="little")
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<IQ", CACHE_VERSION, pt.limit))
        fh.write(packed.tobytes())


def load_cache(path: str | Path) -> PrimeTable:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != CACHE_MAGIC:
            raise ValueError(f"{path}: not a sieve cache (bad magic {magic!r})")
        (version,) = struct.unpack("<I", fh.read(4))
        if version != CACHE_VERSION:
            raise ValueError(f"{path}: unsupported cache version {version}")
        (limit,) = struct.unpack("<Q", fh.read(8))
        packed = np.frombuffer(fh.read(), dtype=np.uint8)
    n_odds = (limit + 1) // 2
    bits = np.unpackbits(packed, bitorder="little", count=n_odds)
    return PrimeTable(limit=int(limit), odd_is_prime=~bits.astype(bool))


# -- logarithmic integral ----------------------------------------------------


def li(x: float) -> float:
    """Offset logarithmic integral: integral of dt/log t from 2 to x.

    Adaptive quadrature; the absolute error is kept well below
    1e-8 * max(1, result).  Starting at 2 avoids the integrand pole at 1.
    """
    if x < 2:
        raise ValueError(f"li requires x >= 2, got {x}")
    if x == 2:
        return 0.0
    # Integrate in u = log t: d(t)/log t = e^u / u du, a smooth integrand.
    val, _err = quad(
        lambda u: math.exp(u) / u,
        math.log(2.0),
        math.log(x),
        epsabs=1e-12,
        epsrel=5e-12,
        limit=200,
    )
    return val


# -- ladders -----------------------------------------------------------------


def _compensated_chunks(chunks) -> float:
    """Exactly-rounded sum of per-chunk exactly-rounded sums."""
    return math.fsum(chunks)


def harmonic_ladder(x: float) -> float:
    """H(x) = sum of 1/i over integers 1 <= i <= x, compensated summation."""
    if x < 1:
        raise ValueError(f"harmonic ladder requires x >= 1, got {x}")
    n = math.floor(x)
    parts = []
    for lo in range(1, n + 1, _CHUNK):
        hi = min(n, lo + _CHUNK - 1)
        parts.append(math.fsum(1.0 / np.arange(lo, hi + 1, dtype=np.float64)))
    return _compensated_chunks(parts)


def prime_ladder(pt: PrimeTable, x: float) -> float:
    """P(x) = sum of 1/p over primes p <= x, compensated summation."""
    if not (2 <= x <= pt.limit):
        raise ValueError(f"prime ladder x={x} outside [2, {pt.limit}]")
    n_odd = (math.floor(x) + 1) // 2
    parts = [0.5]  # prime 2
    for lo in range(0, n_odd, _CHUNK):
        idx = np.flatnonzero(pt.odd_is_prime[lo : min(lo + _CHUNK, n_odd)])
        if idx.size:
            parts.append(math.fsum(1.0 / (2.0 * (idx + lo) + 1.0)))
    return _compensated_chunks(parts)


def prime_ladder_series(pt: PrimeTable, xs: list[float]) -> list[float]:
    """P(x) at several ascending cutoffs in one pass over the table."""
    if sorted(xs) != list(xs):
        raise ValueError("cutoffs must be ascending")
    out = []
    parts = [0.5]
    done = 0
    for x in xs:
        if not (2 <= x <= pt.limit):
            raise ValueError(f"prime ladder x={x} outside [2, {pt.limit}]")
        n_odd = (math.floor(x) + 1) // 2
        for lo in range(done, n_odd, _CHUNK):
            idx = np.flatnonzero(pt.odd_is_prime[lo : min(lo + _CHUNK, n_odd)])
            if idx.size:
                parts.append(math.fsum(1.0 / (2.0 * (idx + lo) + 1.0)))
        done = n_odd
        out.append(_compensated_chunks(parts))
    return out
