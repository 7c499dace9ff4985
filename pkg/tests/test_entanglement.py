from math import comb, log2, pi, sqrt

import pytest

from symnorm import tensor as tc
from symnorm.entanglement import (
    asymptotic_eta,
    balanced_index,
    dicke_log_norm_sq,
    dicke_norm,
    eta_sym_bounds,
    measures,
    most_entangled_dicke,
)
from symnorm.errors import InvalidIndex, StateNormalizationError
from symnorm.norms import spectral_norm


def test_measures():
    m = measures(2 / 3)
    assert m.eta == pytest.approx(log2(9 / 4))
    assert m.geo_distance == pytest.approx(sqrt(2 / 3))
    m = measures(1.0)
    assert m.eta == 0 and m.geo_distance == 0
    assert measures(sqrt(2) / 3).geo_distance == pytest.approx(sqrt(2 * (1 - sqrt(2) / 3)))


def test_non_state_input():
    with pytest.warns(UserWarning):
        m = measures(0.5, hs_norm=2.0)
    assert m.geo_distance is None and m.eta == pytest.approx(2.0)
    with pytest.raises(StateNormalizationError):
        measures(0.5, hs_norm=2.0, strict=True)


@pytest.mark.parametrize("j, want", [
    ((2, 1), 2 / 3),
    ((2, 2), sqrt(6) / 4),
    ((5, 0, 0), 1.0),
    ((1, 1, 1), sqrt(2) / 3),
    ((2, 3), 6 * sqrt(6) / 25),
    ((1, 1, 1, 1), sqrt(3 / 32)),
])
def test_dicke_norm(j, want):
    assert dicke_norm(j) == pytest.approx(want, abs=1e-14)


@pytest.mark.parametrize("j", [(), (-1, 4), (0, 0)])
def test_invalid_dicke_index(j):
    with pytest.raises(InvalidIndex):
        dicke_log_norm_sq(j)


@pytest.mark.parametrize("d, n, j, want", [
    (3, 3, (1, 1, 1), sqrt(2) / 3),
    (5, 2, (2, 3), 6 * sqrt(6) / 25),
    (4, 4, (1, 1, 1, 1), sqrt(3 / 32)),
])
def test_most_entangled(d, n, j, want):
    got_j, value = most_entangled_dicke(d, n)
    assert got_j == j and value == pytest.approx(want)


def test_exhaustive_minimality():
    for d in range(2, 11):
        for n in range(2, 5):
            j = balanced_index(d, n)
            assert max(j) - min(j) <= 1 and sum(j) == d
            best = min(dicke_norm(k) for k in tc.multi_indices(d, n))
            assert dicke_norm(j) == pytest.approx(best, rel=1e-13)


def test_bounds():
    for d in range(3, 12):
        assert eta_sym_bounds(d, 2)[1] == pytest.approx(log2(d + 1))
    assert eta_sym_bounds(3, 2)[0] == pytest.approx(log2(9 / 4))
    for d in range(2, 21):
        for n in range(2, 21):
            lo, hi = eta_sym_bounds(d, n)
            assert lo <= hi + 1e-12
            assert hi == pytest.approx(log2(comb(n + d - 1, n - 1)))


@pytest.mark.parametrize("j", [(2, 1), (3, 1), (4, 4), (1, 1, 1), (2, 1, 1)])
def test_pipeline_agreement(j):
    assert spectral_norm(tc.dicke(j), check=False).value == pytest.approx(dicke_norm(j), abs=1e-6)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_asymptotic_expansion(n):
    d = 1000
    eta = measures(dicke_norm(balanced_index(d, n))).eta
    assert eta == pytest.approx(asymptotic_eta(d, n), abs=0.01)
    # the expansion without its constant term is off by ((n-1)/2) log2(2 pi)
    gap = eta - asymptotic_eta(d, n, with_constant=False)
    assert gap == pytest.approx((n - 1) / 2 * log2(2 * pi), abs=0.01)
