"""Cantor function (devil's staircase) evaluation by digit extraction.

The staircase attached to a two-map Cantor construction is the monotone
surjection of [0, 1] onto itself that is constant on every gap.  Evaluation
walks the orbit of x under the inverse maps: each step classifies x against
the left bridge [0, beta], the gap (beta, 1-beta), or the right bridge
[1-beta, 1], emits one binary output digit, and rescales.  Landing in the
gap fixes the value (the staircase is flat there) and stops the walk.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cantor import CantorSpec


@dataclass(frozen=True)
class Staircase:
    """Evaluator for the Cantor function of `spec` in unit coordinates.

    Only spec.beta matters here; the base interval is normalized away.
    tol bounds the truncation of the emitted binary expansion, and max_bits
    caps the walk; with the defaults the tail bound 2^-64 dominates tol.
    """

    spec: CantorSpec
    tol: float = 2.0**-48
    max_bits: int = 64

    def eval(self, x: float) -> float:
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"staircase argument {x} outside [0, 1]")
        if x == 1.0:
            return 1.0
        b = self.spec.beta
        upper = 1.0 - b
        value = 0.0
        weight = 0.5  # contribution of the next output digit
        for _ in range(self.max_bits):
            if 2.0 * weight < self.tol:
                break
            if x < b:
                x = x / b
            elif x > upper:
                value += weight
                x = (x - upper) / b
            else:
                value += weight
                break
            weight *= 0.5
        return value

    def symmetry_defect(self, x: float) -> float:
        """|phi(x) + phi(1-x) - 1|; at most about 2*tol for this symmetric family."""
        return abs(self.eval(x) + self.eval(1.0 - x) - 1.0)


def sample_csv_rows(st: Staircase, resolution: int):
    """Uniform-grid rows (x, phi(x)) with `resolution` intervals."""
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    for i in range(resolution + 1):
        x = i / resolution
        yield (x, st.eval(x))
