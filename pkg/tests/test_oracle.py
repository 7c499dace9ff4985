import numpy as np
import pytest

from symnorm import catalog, qubit
from symnorm import tensor as tc
from symnorm.entanglement import dicke_norm
from symnorm.oracle import OracleResult, ascend, ascend_from, certify


def rank_one(v, d):
    """(v . x)^d, whose coefficients are f_j = v^j."""
    v = np.asarray(v, dtype=complex)
    exps = tc.zeros(len(v), d).exps
    return tc.SymTensor(len(v), d, np.prod(v[None, :] ** exps, axis=1))


@pytest.mark.parametrize("j", [(2, 1), (2, 2), (3, 2), (1, 1, 1), (2, 1, 1), (1, 1, 1, 1)])
def test_dicke_profile(j):
    S = tc.dicke(j)
    r = ascend(S, seed=1)
    assert r.lower_bound == pytest.approx(dicke_norm(j), abs=1e-9)
    assert r.lower_bound <= dicke_norm(j) + 1e-10
    assert np.allclose(np.abs(r.witness) ** 2, np.array(j) / sum(j), atol=1e-6)


def test_example_1_with_64_starts():
    r = ascend(catalog.EXAMPLES["ex1"], num_starts=64)
    assert r.lower_bound == pytest.approx(qubit.norm(catalog.EXAMPLES["ex1"]).value, abs=1e-6)
    assert r.starts == 64


def test_product_state_is_exact():
    v = np.array([0.6, 0.8j, 0])
    S = rank_one(v, 4)
    assert tc.hs_norm(S) == pytest.approx(1.0)
    assert ascend(S).lower_bound == pytest.approx(tc.hs_norm(S), abs=1e-14)


def test_verdicts():
    S = catalog.EXAMPLES["ex1"]
    r = ascend(S)
    value = qubit.norm(S).value
    assert certify(value, r, tc.hs_norm(S)) == "PASS"
    assert certify(value / 2, r, tc.hs_norm(S)) == "GAP"
    assert certify(2.0, r, tc.hs_norm(S)) == "GAP"
    singular = tc.from_monomial_coefficients(2, 3, {(3, 0): 1})
    assert certify(1.0, ascend(singular), 1.0) == "PASS"


def test_seeded_determinism():
    S = tc.random_tensor(3, 4, np.random.default_rng(0))
    a, b = ascend(S, seed=3), ascend(S, seed=3)
    assert a.lower_bound == b.lower_bound and np.array_equal(a.witness, b.witness)
    assert isinstance(a, OracleResult)


@pytest.mark.parametrize("seed", range(10))
def test_anti_eigenvector_at_convergence(seed):
    rng = np.random.default_rng(seed)
    S = tc.random_tensor(int(rng.integers(2, 4)), int(rng.integers(3, 6)), rng)
    x = ascend(S, seed=seed).witness
    fx = tc.evaluate(S, x)
    assert abs(fx.imag) <= 1e-12
    assert np.linalg.norm(tc.grad_map_F(S, x) - abs(fx) * x.conj()) <= 1e-8


def test_zero_gradient_start_restarts():
    # every start on the x2 axis has F = 0 for f = x1^3
    S = tc.from_monomial_coefficients(2, 3, {(3, 0): 1})
    lb, w = ascend_from(S, np.array([[0, 1.0], [0, 1j]]))
    assert lb == pytest.approx(1.0, abs=1e-9)


def test_real_mode_stays_real():
    S = catalog.EXAMPLES["ex1"]
    r = ascend(S, real=True)
    assert np.all(r.witness.imag == 0)
    assert r.lower_bound == pytest.approx(0.6205, abs=5e-4)
