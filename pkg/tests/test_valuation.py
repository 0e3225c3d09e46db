import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from scalefree import valuation as V
from scalefree.cantor import CantorSpec
from scalefree.errors import NonConvergenceError
from scalefree.staircase import Staircase

THIRDS = Staircase(CantorSpec(beta=1 / 3))


def test_make_infinitesimal_examples():
    si = V.make_infinitesimal(0.1, 0.01, 1.0)
    assert si.x_tilde == pytest.approx(0.001, rel=1e-15)
    assert V.make_infinitesimal(0.1, 0.01, 0.5).x_tilde == pytest.approx(0.0005, rel=1e-15)
    # discrete power family: scale ratio is lam * eps^(n l)
    xt, d = V.power_family(0.1, 0.5, 0.7)(10)
    assert float(xt / d) == pytest.approx(0.7 * 0.1**5, rel=1e-14)


@given(
    st.floats(min_value=1e-6, max_value=0.9),
    st.floats(min_value=1e-3, max_value=0.99),
    st.floats(min_value=1e-6, max_value=1.0),
)
def test_infinitesimal_ordering(x, frac, lam):
    delta = x * frac
    si = V.make_infinitesimal(x, delta, lam)
    assert 0 < si.x_tilde < si.delta < si.x
    # inversion rule holds as stated
    assert si.x_tilde / si.delta == pytest.approx(lam * si.delta / si.x, rel=1e-12)


def test_make_infinitesimal_rejects_bad_ordering():
    with pytest.raises(ValueError, match="ordering"):
        V.make_infinitesimal(0.01, 0.1, 1.0)
    with pytest.raises(ValueError, match="lam"):
        V.make_infinitesimal(0.1, 0.01, 0.0)
    with pytest.raises(ValueError, match="lam"):
        V.make_infinitesimal(0.1, 0.01, 1.5)


def test_valuation_at_scale_pure_powers():
    for delta in (1e-2, 1e-5, 0.37, 0.9):
        assert V.valuation_at_scale(delta**1.3, delta) == pytest.approx(0.3, abs=1e-12)


def test_valuation_at_scale_example1_finite_n():
    xt, d = V.power_family(0.1, 0.4, 0.7)(20)
    want = 0.4 + math.log(1 / 0.7) / (20 * math.log(10))
    assert V.valuation_at_scale(xt, d) == pytest.approx(want, abs=1e-14)


def test_valuation_at_scale_constant_ratio_decays():
    # constant scale ratio mu: v_n = log(1/mu)/(n log(1/delta_1)) -> 0
    fam = V.constant_ratio_family(0.3)
    v_5 = V.valuation_at_scale(*fam(5))
    v_50 = V.valuation_at_scale(*fam(50))
    assert v_50 < v_5 / 9
    assert v_50 == pytest.approx(math.log(1 / 0.3) / (50 * math.log(2)), rel=1e-12)


def test_valuation_at_scale_domain():
    with pytest.raises(ValueError):
        V.valuation_at_scale(0.2, 0.1)
    with pytest.raises(ValueError):
        V.valuation_at_scale(0.0, 0.1)
    with pytest.raises(ValueError):
        V.valuation_at_scale(0.5, 1.5)


def test_limit_power_family_recovers_l():
    res = V.valuation_limit(V.power_family(0.1, 0.4, 0.7), 1000)
    closed_form_bound = math.log(1 / 0.7) / (1000 * math.log(10))
    assert abs(res.v - 0.4) < 1e-6
    assert abs(res.v - 0.4) <= res.error_bound
    assert res.error_bound == pytest.approx(closed_form_bound, rel=1e-2)
    assert res.scale_exponent == 1000


def test_limit_two_norm_family():
    for p in (3, 5, 7):
        res = V.valuation_limit(V.two_norm_family(p), 400)
        want = 1.0 - math.log(2) / math.log(p)
        assert abs(res.v - want) < 1e-9
    # the plain sequence 2^-n against its own scale goes to 0 in both senses
    res0 = V.valuation_limit(V.constant_ratio_family(0.999999), 100)
    assert abs(res0.v) < 1e-6


def test_limit_constant_family_is_zero():
    res = V.valuation_limit(V.constant_ratio_family(0.3), 500)
    assert abs(res.v) < 1e-12


def test_limit_nonconvergence_reported():
    def drifts(n):
        delta = mp.mpf("0.1")
        return delta ** (1 + 1 / mp.sqrt(n)), delta

    with pytest.raises(NonConvergenceError, match="unstable"):
        V.valuation_limit(drifts, 200)
    with pytest.raises(ValueError):
        V.valuation_limit(V.constant_ratio_family(0.3), 4)


def test_valuation_ratio():
    assert V.valuation_ratio(0.2, 0.7, 0.7) == pytest.approx(0.2, rel=1e-15)
    assert V.valuation_ratio(0.25, 2.0, 1.0) == 0.5
    s = math.log(2) / math.log(3)
    with mp.workdps(30):
        want = float(mp.mpf("0.2") * mp.log(3) / mp.log(2))
    assert V.valuation_ratio(0.2, 1.0, s) == pytest.approx(want, rel=1e-14)
    with pytest.raises(ValueError):
        V.valuation_ratio(0.2, 1.0, 0.0)


def test_strong_triangle_vectorized():
    rng = np.random.default_rng(42)
    n = 10**4
    a = rng.uniform(0.0, 1.0, n)
    b = rng.uniform(0.0, 1.0, n)
    delta = 10.0 ** rng.uniform(-8.0, -2.0, n)
    log_d = np.log(delta)
    x1 = np.exp((1.0 + a) * log_d)
    x2 = np.exp((1.0 + b) * log_d)
    v1 = (log_d - np.log(x1)) / -log_d
    v2 = (log_d - np.log(x2)) / -log_d
    v_sum = (log_d - np.log(x1 + x2)) / -log_d
    assert np.all(v_sum <= np.maximum(v1, v2) + 1e-9)
    # isosceles: the sum sits at the smaller valuation up to the exact
    # finite-scale correction log1p(delta^|a-b|)/log(1/delta)
    corr = np.log1p(np.exp(-np.abs(a - b) * -log_d)) / -log_d
    assert np.all(np.abs(v_sum - (np.minimum(v1, v2) - corr)) <= 1e-9)


@given(
    st.floats(min_value=0.05, max_value=0.95),
    st.floats(min_value=0.05, max_value=0.95),
    st.floats(min_value=1e-8, max_value=1e-2),
)
def test_strong_triangle_hypothesis(a, b, delta):
    x1 = delta ** (1.0 + a)
    x2 = delta ** (1.0 + b)
    assume(x1 + x2 < delta)  # the sum must itself stay below the scale
    v1 = V.valuation_at_scale(x1, delta)
    v2 = V.valuation_at_scale(x2, delta)
    v_sum = V.valuation_at_scale(x1 + x2, delta)
    assert v_sum <= max(v1, v2) + 1e-9


def test_equivalence_of_nearby_variables():
    # Two small variables closer than the scale allows have valuations
    # agreeing within log(x'/x)/log(1/delta), an O(1/n) bound for delta=c^-n.
    rng = np.random.default_rng(9)
    for _ in range(200):
        x = float(rng.uniform(1e-4, 1e-2))
        d_gap = float(rng.uniform(0.1, 0.9)) * x
        x_prime = x + d_gap
        delta = d_gap * float(rng.uniform(0.01, 0.9))
        # valuation of the variables themselves against the common scale
        vx = math.log(x / delta) / math.log(1 / delta)
        vxp = math.log(x_prime / delta) / math.log(1 / delta)
        assert abs(vxp - vx) <= math.log(x_prime / x) / math.log(1 / delta) + 1e-12
        assert abs(vxp - vx) <= math.log(2) / math.log(1 / delta) + 1e-12


@given(
    st.floats(min_value=1e-8, max_value=0.5),
    st.floats(min_value=1.00001, max_value=3.0),
)
def test_ordering_monotone_decreasing(delta, power_hi):
    # larger companions carry smaller valuations at a fixed scale
    x_small = delta**power_hi
    x_large = delta ** ((1.0 + power_hi) / 2.0)
    if x_small >= x_large:
        return
    assert V.valuation_at_scale(x_small, delta) >= V.valuation_at_scale(x_large, delta)


def test_additive_exponent_law_for_products():
    # Exponents add under multiplication: the product delta^(1+a) * delta^(1+b)
    # has finite-scale valuation 1 + a + b.  (A multiplicative law for v
    # itself does not hold at finite scale and is not asserted.)
    rng = np.random.default_rng(21)
    for _ in range(300):
        delta = float(10.0 ** rng.uniform(-6, -2))
        a, b = rng.uniform(0.0, 1.0, 2)
        prod = delta ** (1.0 + a) * delta ** (1.0 + b)
        got = V.valuation_at_scale(prod, delta)
        assert got == pytest.approx(1.0 + a + b, abs=1e-10)


def test_represent_round_trip_and_flags():
    xt, v = V.represent(0.01, 0.2, THIRDS, 0.5)
    assert v == pytest.approx(0.7, abs=1e-15)
    assert xt == pytest.approx(0.01**1.7, rel=1e-14)
    back = V.valuation_at_scale(xt, 0.01)
    assert abs(back - v) <= 4 * np.spacing(max(1.0, v))
    with pytest.warns(UserWarning, match="non-strict"):
        xt0, v0 = V.represent(0.01, 0.0, THIRDS, 0.0)
    assert (xt0, v0) == (pytest.approx(0.01, rel=1e-15), 0.0)
    with pytest.warns(UserWarning, match="exceeds 1"):
        _, v_big = V.represent(0.01, 0.9, THIRDS, 0.9)
    assert v_big > 1.0


def test_represent_constant_on_gaps():
    vals = {V.represent(0.05, 0.0, THIRDS, u)[1] for u in np.linspace(0.34, 0.66, 25)}
    assert vals == {0.5}


def test_represent_perturbation_hook():
    xt_plain, _ = V.represent(0.01, 0.2, THIRDS, 0.5)
    xt_pert, _ = V.represent(0.01, 0.2, THIRDS, 0.5, perturb=lambda u: 1.5)
    assert xt_pert == pytest.approx(1.5 * xt_plain, rel=1e-15)


@given(
    st.floats(min_value=1e-6, max_value=0.5),
    st.floats(min_value=0.01, max_value=0.4),
    st.floats(min_value=0.0, max_value=1.0),
)
def test_represent_round_trip_ulps(delta, l, u):
    xt, v = V.represent(delta, l, THIRDS, u)
    back = V.valuation_at_scale(xt, delta)
    assert abs(back - v) <= 4 * np.spacing(max(1.0, v))


def test_trace_rows(tmp_path):
    rows = list(V.trace_rows(V.power_family(0.1, 0.4, 0.7), 20))
    assert len(rows) == 20
    ns = [r[0] for r in rows]
    assert ns == list(range(1, 21))
    v_20 = rows[-1][3]
    assert v_20 == pytest.approx(0.4 + math.log(1 / 0.7) / (20 * math.log(10)), abs=1e-12)
    assert rows[-1][4] > 0  # bound column
