import math

import numpy as np
import pytest

from oracles import mp_ratio, sigma_bisect
from scalefree import pnt


def test_sample_examples(table_1m):
    s = pnt.make_sample(table_1m, 10**6)
    assert s.pi_n == 78498
    assert s.ratio == pytest.approx(1.08449, abs=1e-5)
    assert s.ratio == pytest.approx(mp_ratio(78498, 10**6), rel=1e-15)
    s3 = pnt.make_sample(table_1m, 10**3)
    assert s3.ratio == pytest.approx(1.16050, abs=1e-5)
    s100 = pnt.make_sample(table_1m, 100)
    assert s100.epsilon_scale * s100.pi_n == pytest.approx(1.15129, abs=1e-5)
    # exact chain: 1/(1 + 25 * log(100)/100) = 0.464836826...
    with_mp = 1.0 / (1.0 + 25.0 * math.log(100.0) / 100.0)
    assert s100.exponent == pytest.approx(with_mp, rel=1e-15)
    assert s100.exponent == pytest.approx(0.46484, abs=2e-5)


def test_sample_validation(table_1m):
    with pytest.raises(ValueError):
        pnt.make_sample(table_1m, 3)
    with pytest.raises(ValueError):
        pnt.make_sample(table_1m, 10**6 + 1)


def test_ratio_decreasing_through_1e6(table_1m):
    samples = pnt.ratio_table(table_1m, [10**k for k in range(3, 7)])
    ratios = [s.ratio for s in samples]
    assert all(u > w for u, w in zip(ratios, ratios[1:]))
    assert all(r > 1.0 for r in ratios)
    assert all(0.0 < s.epsilon_scale < 1.0 for s in samples)


def test_exponent_identity_and_trend(table_1m):
    samples = pnt.ratio_table(table_1m, [10**k for k in range(3, 7)])
    for s in samples:
        want = 1.0 / (1.0 + s.ratio)
        assert abs(s.exponent - want) <= 4 * np.spacing(want)
        assert 0.0 < s.exponent < 0.5
    exps = [s.exponent for s in samples]
    assert all(u < w for u, w in zip(exps, exps[1:]))  # climbing toward 1/2


def test_model_ratio(table_1m):
    # frozen from the direct chain: eps*pi = ratio, exponent = 1/(1+ratio),
    # model = 1/(1 - N^-exponent)
    got = pnt.correction_model_ratio(table_1m, 10**6)
    assert got == pytest.approx(1.001324869246675, rel=1e-14)
    expo = pnt.make_sample(table_1m, 10**6).exponent
    by_hand = 1.0 / (1.0 - 10.0 ** (-6.0 * expo * math.log10(math.e) * math.log(10)))
    assert got == pytest.approx(by_hand, rel=1e-10)
    models = [pnt.correction_model_ratio(table_1m, 10**k) for k in range(3, 7)]
    assert all(m > 1.0 for m in models)
    assert all(u > w for u, w in zip(models, models[1:]))  # falling toward 1


def test_sigma_fixed_point_examples():
    assert pnt.sigma_fixed_point(0.25) == pytest.approx(0.5849, abs=1e-4)
    assert pnt.sigma_fixed_point(0.25) == pytest.approx(sigma_bisect(0.25), abs=1e-13)
    assert pnt.sigma_fixed_point(1e-4) == pytest.approx(sigma_bisect(1e-4), abs=1e-13)
    assert pnt.sigma_fixed_point(1e-4) == pytest.approx(0.01024, abs=1e-5)
    # x -> 1 pushes sigma toward the fixed point of 1^(.) = 1
    assert pnt.sigma_fixed_point(1 - 1e-9) > 0.999


def test_sigma_fixed_point_residual_and_bracket():
    for x in np.logspace(-12, math.log10(0.9), 40):
        x = float(x)
        sig = pnt.sigma_fixed_point(x)
        assert abs(sig - x ** (1.0 / (2.0 + sig))) < 1e-12
        if x < 0.1:
            assert x**0.5 < sig < x ** (1.0 / 3.0)


def test_sigma_monotone_in_x():
    xs = np.logspace(-10, -0.1, 30)
    sigs = [pnt.sigma_fixed_point(float(x)) for x in xs]
    assert all(u < w for u, w in zip(sigs, sigs[1:]))


def test_sigma_domain():
    with pytest.raises(ValueError):
        pnt.sigma_fixed_point(0.0)
    with pytest.raises(ValueError):
        pnt.sigma_fixed_point(1.0)


def test_band_check(table_1m):
    points = pnt.rh_band_check(table_1m, [10**k for k in range(2, 7)])
    assert all(b.inside for b in points)
    b3 = points[1]
    assert b3.err == pytest.approx(8.56, abs=0.05)
    assert b3.band == pytest.approx(math.sqrt(1000) * math.log(1000), rel=1e-12)


def test_error_fit_validation(table_1m):
    ns = [10**k for k in range(3, 7)]
    with pytest.raises(ValueError, match="unknown model"):
        pnt.error_exponent_fit(table_1m, ns, "zeta")
    with pytest.raises(ValueError, match="decades"):
        pnt.error_exponent_fit(table_1m, [1000, 2000, 4000, 8000], "li")
    fr = pnt.error_exponent_fit(table_1m, ns, "x_over_logx")
    assert fr.r2 > 0.99
    assert 0.75 <= fr.slope <= 1.0
    fr_li = pnt.error_exponent_fit(table_1m, ns, "li")
    assert fr_li.r2 > 0.9


def test_csv_rows_shape(table_1m):
    rows = list(pnt.sample_csv_rows(table_1m, [10**3, 10**4]))
    assert len(rows) == 2
    assert len(rows[0]) == 10
    n, pi_n, ratio, li_n, li_err, band, inside, model, expo, sigma = rows[0]
    assert (n, pi_n) == (1000, 168)
    assert inside == 1
    assert li_n == pytest.approx(176.56, abs=0.01)
    assert sigma == pytest.approx(pnt.sigma_fixed_point(1e-3), rel=1e-15)


def test_fit_summary_keys(table_1m):
    summary = pnt.fit_summary(table_1m, [10**k for k in range(3, 7)])
    assert set(summary["fits"]) == {"x_over_logx", "li", "eq_model"}
    assert summary["band"]["all_inside"] is True
    assert 0 < summary["band"]["max_err_over_band"] < 1
