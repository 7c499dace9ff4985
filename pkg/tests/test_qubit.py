from math import comb, sqrt

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import binary_sphere_max

from symnorm import catalog, qubit
from symnorm import tensor as tc
from symnorm.errors import DegreeTooSmall, InternalError, InvalidIndex, ZeroTensor
from symnorm.oracle import ascend
from symnorm.unipoly import ComplexPolynomial, from_roots


def s_of(key):
    return qubit.coeffs_of(catalog.EXAMPLES[key])


def s_from_phi(phi: ComplexPolynomial, d: int) -> np.ndarray:
    c = np.zeros(d + 1, dtype=complex)
    c[: len(phi.coeffs)] = phi.coeffs
    return np.array([c[k] / comb(d, k) for k in range(d + 1)])


def two_root_s(c, theta, p, d, A=1.0):
    a, b = np.exp(-1j * theta) * c, -np.exp(-1j * theta) / c
    phi = ComplexPolynomial([A]) * ComplexPolynomial([a, 1]) ** p * ComplexPolynomial([b, 1]) ** (d - p)
    return s_from_phi(phi, d)


svec = st.integers(3, 9).flatmap(
    lambda d: st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
                       min_size=d + 1, max_size=d + 1)
).filter(lambda s: max(abs(v) for v in s) > 1e-3)

real_svec = st.integers(3, 9).flatmap(
    lambda d: st.lists(st.floats(-2, 2), min_size=d + 1, max_size=d + 1)
).filter(lambda s: max(abs(v) for v in s) > 1e-3)


def test_identities_and_degree_too_small():
    qc = qubit.build(s_of("ex1"))
    d = qc.d
    assert np.allclose((qc.p * d).coeffs, qc.phi.derivative().coeffs)
    assert np.allclose((qc.q * d).coeffs, (qc.phi * d - qc.phi.derivative().shift()).coeffs)
    with pytest.raises(DegreeTooSmall):
        qubit.build([1, 0, 1])
    with pytest.raises(ZeroTensor):
        qubit.build([0, 0, 0, 0])


def test_hand_expansion_for_dicke_cubic():
    # f = sqrt3 x1^2 x2: s = (0, 1/sqrt3, 0, 0), phi = 3 s_1 z = sqrt3 z
    qc = qubit.build([0, 1 / sqrt(3), 0, 0])
    assert np.allclose(qc.phi.coeffs * qc.gain, [0, sqrt(3)])
    assert np.allclose(qc.p.coeffs * qc.gain, [1 / sqrt(3)])
    assert np.allclose(qc.q.coeffs * qc.gain, [0, 2 / sqrt(3)])


def test_real_input_gives_real_u_v():
    qc = qubit.build(s_of("ex1"))
    assert np.all(qc.u.coeffs.imag == 0) and np.all(qc.v.coeffs.imag == 0)


def test_classification():
    assert qubit.classify(qubit.build([0, 0, 0, 2])).tag == "PureTop"
    cls = qubit.classify(qubit.build([0, 0, 0.7, 0, 0]))
    assert (cls.tag, cls.k) == ("Monomial", 2)
    assert qubit.classify(qubit.build(s_from_phi(ComplexPolynomial([1, 0, 1]) ** 2, 4))).tag == "RealCircle"
    assert qubit.classify(qubit.build(s_of("ex1"))).tag == "Generic"
    assert qubit.classify(qubit.build(s_of("ex2"))).tag == "Generic"
    cls = qubit.classify(qubit.build(two_root_s(0.6, 1.1, 2, 5)))
    assert cls.tag == "TwoRootForm"
    assert (cls.c, cls.theta, cls.p) == (pytest.approx(0.6), pytest.approx(1.1), 2)


def test_pure_top_norm():
    r = qubit.norm(qubit.tensor_of([0, 0, 0, -0.3j]))
    assert r.value == pytest.approx(0.3)
    assert r.method == "closed-form"


@pytest.mark.parametrize("s, want", [
    ([0, 1 / sqrt(3), 0, 0], 2 / 3),
    ([0, 0, 1 / sqrt(6), 0, 0], sqrt(3) / sqrt(8)),
    ([0, 0, 1 / sqrt(10), 0, 0, 0], 6 * sqrt(6) / 25),
])
def test_monomial_norms(s, want):
    d = len(s) - 1
    k = int(np.flatnonzero(s)[0])
    assert qubit.monomial_norm(s[k], k, d) == pytest.approx(want, abs=1e-12)
    assert qubit.norm(qubit.tensor_of(s)).value == pytest.approx(want, abs=1e-12)
    assert qubit.norm(qubit.tensor_of(s), "real").value == pytest.approx(want, abs=1e-12)


def test_monomial_norm_rejects_bad_k():
    with pytest.raises(InvalidIndex):
        qubit.monomial_norm(1.0, 0, 3)


def test_real_circle():
    s = s_from_phi(ComplexPolynomial([1, 0, 1]) ** 3, 6) * 0.4
    for field in ("real", "complex"):
        r = qubit.norm(qubit.tensor_of(s), field)
        assert r.value == pytest.approx(0.4)
        assert r.method == "closed-form"


@pytest.mark.parametrize("key, field, want, tol", [
    ("ex1", "complex", 0.7027, 5e-4),
    ("ex1", "real", 0.6205, 5e-4),
    ("ex2", "complex", sqrt(2) / 2, 1e-6),
    ("ex2", "real", 0.5, 1e-6),
    ("ex3", "real", 0.5, 1e-6),
    ("ex4", "complex", 1 / sqrt(3), 1e-6),
])
def test_reference_values(key, field, want, tol):
    assert qubit.norm(catalog.EXAMPLES[key], field).value == pytest.approx(want, abs=tol)


def test_example_diagnostics():
    r = qubit.norm(catalog.EXAMPLES["ex6"])
    assert (r.diagnostics["degree"], r.diagnostics["real_roots"]) == (25, 7)
    r = qubit.norm(catalog.EXAMPLES["ex8"])
    assert r.diagnostics["degree"] == 42
    assert r.diagnostics["multiplicities"] == [2]


def test_exceptional_against_sampling():
    s = two_root_s(1.0, 0.0, 1, 3)  # phi = (z + 1)(z - 1)^2
    qc = qubit.build(s)
    assert qubit.classify(qc).tag == "TwoRootForm"
    ref = binary_sphere_max(s, points=250_000)
    r = qubit.exceptional_norm(qc, 1e-3)
    assert r.method == "perturbation"
    assert abs(r.value - ref) <= 1e-3 * ref


@pytest.mark.parametrize("delta", [0.5, 1e-4])
def test_exceptional_error_band(delta):
    s = two_root_s(0.7, 0.4, 2, 5, A=0.3)
    ref = binary_sphere_max(s, points=250_000)
    r = qubit.exceptional_norm(qubit.build(s), delta)
    assert abs(r.value - ref) <= delta * ref


def test_monomial_never_reaches_exceptional_norm():
    with pytest.raises(InternalError):
        qubit.exceptional_norm(qubit.build([0, 0.5, 0, 0]))


def test_majorana():
    assert qubit.majorana_roots(qubit.build([0, 0, 0, 1])) == [(0j, 3)]
    roots = qubit.majorana_roots(qubit.build(s_of("ex6")))
    finite = [z for z, m in roots if np.isfinite(abs(z))]
    assert sum(m for z, m in roots if not np.isfinite(abs(z))) == 1
    assert sum(abs(z) < 1e-9 for z in finite) == 1
    quartic = [z for z in finite if abs(z) > 1e-9]
    assert len(quartic) == 4 and np.allclose(np.array(quartic) ** 4, -1)
    roots = qubit.majorana_roots(qubit.build(s_from_phi(from_roots([1, 1]), 3)))
    assert len(roots) == 2
    (z, m), (inf, k) = sorted(roots, key=lambda r: abs(r[0]))
    assert z == pytest.approx(1, abs=1e-6) and m == 2 and k == 1 and np.isinf(abs(inf))


@given(svec)
def test_degree_bound(s):
    qc = qubit.build(s)
    assert qubit._numerical(qc.g).degree <= (qc.d - 1) ** 2 + 1


@given(svec, st.integers(0, 1000))
def test_sandwich_and_antifixed_energy(s, seed):
    S = qubit.tensor_of(s)
    r = qubit.norm(S)
    lb = ascend(S, seed=seed, num_starts=16).lower_bound
    assert lb <= r.value + 1e-8
    assert r.value <= tc.hs_norm(S) + 1e-12
    if r.method == "univariate" and r.value > 1e-6:
        # rescale the witness onto an anti-fixed point y: F(y) = conj(y)
        x = r.witness
        y = x * r.value ** (-1.0 / (qc_d := S.d - 2))
        assert np.allclose(tc.grad_map_F(S, y), np.conj(y), atol=1e-6 * (1 + np.linalg.norm(y)) ** S.d)
        assert abs(tc.evaluate(S, y)) == pytest.approx(np.linalg.norm(y) ** 2, rel=1e-6)
        assert qc_d >= 1


@given(real_svec)
def test_real_below_complex(s):
    S = qubit.tensor_of(s)
    assert qubit.norm(S, "real").value <= qubit.norm(S, "complex").value + 1e-9


@given(st.integers(3, 8), st.data())
def test_two_monomials(d, data):
    j, k = sorted(data.draw(st.lists(st.integers(0, d), min_size=2, max_size=2, unique=True)))
    a = data.draw(st.complex_numbers(min_magnitude=0.1, max_magnitude=2))
    b = data.draw(st.complex_numbers(min_magnitude=0.1, max_magnitude=2))
    S = tc.from_monomial_coefficients(2, d, {(d - j, j): a, (d - k, k): b})
    g, two = tc.two_monomial_normalize(S)
    assert two
    assert qubit.norm(S).value == pytest.approx(qubit.norm(g, "real").value, abs=1e-8)
