"""Symmetric tensors stored by their distinct entries f_j.

A symmetric tensor S in n variables of order d is identified with the form

    f(x) = sum_{j in J(d,n)} c(j) f_j x^j,   c(j) = d! / (j_1! ... j_n!)

so the Hilbert-Schmidt norm is the weighted l2 norm sqrt(sum c(j) |f_j|^2).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial
from typing import Mapping, Sequence

import numpy as np

from .errors import DegreeMismatch, DimensionMismatch, InvalidGraph, InvalidIndex

REAL_FLAG_EPS = 1e-14


@lru_cache(maxsize=None)
def multi_indices(d: int, n: int) -> tuple[tuple[int, ...], ...]:
    """J(d,n) in descending lexicographic order, so (d,0,...,0) comes first."""
    if n == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        for rest in multi_indices(d - first, n - 1):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _index_table(d: int, n: int) -> tuple[np.ndarray, np.ndarray, dict]:
    idx = multi_indices(d, n)
    exps = np.array(idx, dtype=np.int64).reshape(len(idx), n)
    weights = np.array([multinomial(j) for j in idx], dtype=float)
    pos = {j: k for k, j in enumerate(idx)}
    exps.setflags(write=False)
    weights.setflags(write=False)
    return exps, weights, pos


def multinomial(j: Sequence[int]) -> int:
    out = factorial(sum(j))
    for jk in j:
        out //= factorial(jk)
    return out


def num_indices(d: int, n: int) -> int:
    return comb(n + d - 1, n - 1)


def monomials(X: np.ndarray, exps: np.ndarray) -> np.ndarray:
    """x^e for every row x of X (P x n) and every row e of exps (T x n)."""
    X = np.asarray(X, dtype=complex)
    P, n = X.shape
    top = int(exps.max()) if exps.size else 0
    pw = np.ones((P, n, top + 1), dtype=complex)
    for k in range(1, top + 1):
        pw[:, :, k] = pw[:, :, k - 1] * X
    out = np.ones((P, exps.shape[0]), dtype=complex)
    for v in range(n):
        out *= pw[:, v, exps[:, v]]
    return out


def _check_index(j, n: int, d: int) -> tuple[int, ...]:
    try:
        j = tuple(int(v) for v in j)
    except (TypeError, ValueError) as exc:
        raise InvalidIndex(f"multi-index {j!r} is not a sequence of integers") from exc
    if len(j) != n or any(v < 0 for v in j):
        raise InvalidIndex(f"multi-index {j} invalid for n={n}")
    if sum(j) != d:
        raise DegreeMismatch(f"multi-index {j} does not sum to d={d}")
    return j


@dataclass(frozen=True)
class SymTensor:
    n: int
    d: int
    f: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise DimensionMismatch("n must be positive")
        if self.d < 2:
            raise DegreeMismatch("d must be at least 2")
        f = np.array(self.f, dtype=complex).ravel()
        if f.shape[0] != num_indices(self.d, self.n):
            raise DimensionMismatch(
                f"expected {num_indices(self.d, self.n)} coefficients, got {f.shape[0]}"
            )
        f.setflags(write=False)
        object.__setattr__(self, "f", f)

    @property
    def exps(self) -> np.ndarray:
        return _index_table(self.d, self.n)[0]

    @property
    def weights(self) -> np.ndarray:
        return _index_table(self.d, self.n)[1]

    @property
    def indices(self) -> tuple[tuple[int, ...], ...]:
        return multi_indices(self.d, self.n)

    @property
    def is_real(self) -> bool:
        top = np.max(np.abs(self.f)) if self.f.size else 0.0
        return bool(np.max(np.abs(self.f.imag)) <= REAL_FLAG_EPS * top)

    @property
    def monomial_coeffs(self) -> np.ndarray:
        return self.weights * self.f

    def coeff(self, j: Sequence[int]) -> complex:
        j = _check_index(j, self.n, self.d)
        return complex(self.f[_index_table(self.d, self.n)[2][j]])

    def conj(self) -> "SymTensor":
        return SymTensor(self.n, self.d, self.f.conj())

    def __add__(self, other: "SymTensor") -> "SymTensor":
        _same_shape(self, other)
        return SymTensor(self.n, self.d, self.f + other.f)

    def __mul__(self, scalar: complex) -> "SymTensor":
        return SymTensor(self.n, self.d, self.f * scalar)

    __rmul__ = __mul__

    def nonzero(self) -> dict[tuple[int, ...], complex]:
        return {j: complex(v) for j, v in zip(self.indices, self.f) if v != 0}

    def digest(self) -> str:
        import hashlib

        h = hashlib.sha256()
        h.update(f"{self.n},{self.d};".encode())
        h.update(np.ascontiguousarray(self.f).tobytes())
        return h.hexdigest()[:16]


def _same_shape(S: SymTensor, T: SymTensor) -> None:
    if (S.n, S.d) != (T.n, T.d):
        raise DimensionMismatch(f"shape ({S.n},{S.d}) vs ({T.n},{T.d})")


def from_fj(n: int, d: int, f: Mapping[Sequence[int], complex]) -> SymTensor:
    _, _, pos = _index_table(d, n)
    vec = np.zeros(num_indices(d, n), dtype=complex)
    for j, v in f.items():
        vec[pos[_check_index(j, n, d)]] += v
    return SymTensor(n, d, vec)


def from_monomial_coefficients(n: int, d: int, a: Mapping[Sequence[int], complex]) -> SymTensor:
    """Tensor whose form is sum a_j x^j, i.e. f_j = a_j / c(j)."""
    if n < 1 or d < 2:
        raise DimensionMismatch("need n >= 1 and d >= 2")
    return from_fj(n, d, {j: v / multinomial(_check_index(j, n, d)) for j, v in a.items()})


def zeros(n: int, d: int) -> SymTensor:
    return SymTensor(n, d, np.zeros(num_indices(d, n), dtype=complex))


def _as_points(S: SymTensor, x) -> tuple[np.ndarray, bool]:
    X = np.asarray(x, dtype=complex)
    single = X.ndim == 1
    X = X.reshape(1, -1) if single else X
    if X.ndim != 2 or X.shape[1] != S.n:
        raise DimensionMismatch(f"point has length {X.shape[-1]}, tensor has n={S.n}")
    return X, single


def evaluate(S: SymTensor, x) -> complex | np.ndarray:
    """f(x). Accepts one point or a P x n batch."""
    X, single = _as_points(S, x)
    vals = monomials(X, S.exps) @ S.monomial_coeffs
    return complex(vals[0]) if single else vals


@lru_cache(maxsize=None)
def _grad_table(d: int, n: int):
    exps, weights, _ = _index_table(d, n)
    rows = []
    for i in range(n):
        keep = exps[:, i] > 0
        e = exps[keep].copy()
        e[:, i] -= 1
        rows.append((keep, e, weights[keep] * exps[keep, i] / d))
    return rows


def gradient_terms(S: SymTensor) -> list[tuple[np.ndarray, np.ndarray]]:
    """Monomial expansion of each component of F = (1/d) grad f as (exps, coeffs)."""
    return [(e, w * S.f[keep]) for keep, e, w in _grad_table(S.d, S.n)]


def grad_map_F(S: SymTensor, x) -> np.ndarray:
    X, single = _as_points(S, x)
    out = np.zeros_like(X)
    for i, (e, c) in enumerate(gradient_terms(S)):
        if len(c):
            out[:, i] = monomials(X, e) @ c
    return out[0] if single else out


def grad_map_Fbar(S: SymTensor, x) -> np.ndarray:
    """conj(F(conj x)): the map with conjugated coefficients."""
    return grad_map_F(S.conj(), x)


def map_H(S: SymTensor, x) -> np.ndarray:
    return grad_map_Fbar(S, grad_map_F(S, x))


def hs_inner(S: SymTensor, T: SymTensor) -> complex:
    _same_shape(S, T)
    return complex(np.sum(S.weights * S.f * T.f.conj()))


def hs_norm(S: SymTensor) -> float:
    return float(np.sqrt(np.sum(S.weights * np.abs(S.f) ** 2)))


def normalized(S: SymTensor) -> SymTensor:
    return S * (1.0 / hs_norm(S))


def full_tensor(S: SymTensor) -> np.ndarray:
    """The n^d array of entries; only sensible for tiny n and d."""
    _, _, pos = _index_table(S.d, S.n)
    out = np.zeros((S.n,) * S.d, dtype=complex)
    for entry in itertools.product(range(S.n), repeat=S.d):
        j = tuple(entry.count(i) for i in range(S.n))
        out[entry] = S.f[pos[j]]
    return out


def two_monomial_normalize(S: SymTensor) -> tuple[SymTensor, bool]:
    """Replace the two nonzero coefficients by their moduli.

    For forms with exactly two monomials this keeps the complex spectral
    norm, and the result has the same real and complex spectral norms.
    """
    if np.count_nonzero(S.f) != 2:
        return S, False
    return SymTensor(S.n, S.d, np.abs(S.f).astype(complex)), True


def is_nonnegative(S: SymTensor) -> bool:
    return S.is_real and bool(np.all(S.f.real >= 0))


def graph_quartic(adjacency) -> SymTensor:
    """f_A = sum_{i,j} A_ij x_i^2 x_j^2 for a simple graph."""
    A = np.asarray(adjacency)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidGraph("adjacency matrix must be square")
    if not np.all((A == 0) | (A == 1)):
        raise InvalidGraph("adjacency entries must be 0 or 1")
    if not np.array_equal(A, A.T) or np.any(np.diag(A) != 0):
        raise InvalidGraph("adjacency must be symmetric with zero diagonal")
    if not A.any():
        raise InvalidGraph("graph has no edges")
    n = A.shape[0]
    a = {}
    for i in range(n):
        for k in range(i + 1, n):
            if A[i, k]:
                j = [0] * n
                j[i] = j[k] = 2
                a[tuple(j)] = 2.0
    return from_monomial_coefficients(n, 4, a)


def dicke(j: Sequence[int]) -> SymTensor:
    """The unit-norm tensor sqrt(c(j)) x^j."""
    j = tuple(int(v) for v in j)
    if any(v < 0 for v in j):
        raise InvalidIndex(f"negative entry in {j}")
    n, d = len(j), sum(j)
    return from_monomial_coefficients(n, d, {j: np.sqrt(multinomial(j))})


def random_tensor(n: int, d: int, rng: np.random.Generator, real: bool = False) -> SymTensor:
    """Gaussian tensor with unit Hilbert-Schmidt norm."""
    k = num_indices(d, n)
    f = rng.standard_normal(k) + (0 if real else 1j * rng.standard_normal(k))
    # scale so monomials carry comparable weight
    f = f / np.sqrt(_index_table(d, n)[1])
    return normalized(SymTensor(n, d, f))
