"""Entanglement measures from spectral norms, and Dicke-state closed forms."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import ceil, comb, floor, lgamma, log, log2, pi, sqrt

from .errors import InvalidIndex, StateNormalizationError
from .tensor import multi_indices


@dataclass
class EntanglementReport:
    sigma_norm: float
    eta: float
    geo_distance: float | None
    bounds: tuple[float, float] | None = None


def measures(sigma_norm: float, hs_norm: float = 1.0, bounds=None, strict: bool = False) -> EntanglementReport:
    """eta = -log2 sigma^2 and the distance sqrt(2(1 - sigma)) to product states."""
    eta = -2.0 * log2(sigma_norm)
    dist = None
    if abs(hs_norm - 1.0) <= 1e-9:
        dist = sqrt(max(0.0, 2.0 * (1.0 - sigma_norm)))
    else:
        msg = f"tensor has Hilbert-Schmidt norm {hs_norm}, not a state; distance omitted"
        if strict:
            raise StateNormalizationError(msg)
        warnings.warn(msg, stacklevel=2)
    return EntanglementReport(sigma_norm, eta, dist, bounds)


def _xlogx(k: int) -> float:
    return k * log(k) if k > 0 else 0.0


def dicke_log_norm_sq(j) -> float:
    """log of d! prod j_k^j_k / (d^d prod j_k!), with 0^0 = 1."""
    j = tuple(int(v) for v in j)
    if not j or any(v < 0 for v in j) or sum(j) == 0:
        raise InvalidIndex(f"invalid multi-index {j}")
    d = sum(j)
    return lgamma(d + 1) + sum(_xlogx(v) - lgamma(v + 1) for v in j) - _xlogx(d)


def dicke_norm(j) -> float:
    from math import exp

    return exp(0.5 * dicke_log_norm_sq(j))


def balanced_index(d: int, n: int) -> tuple[int, ...]:
    lo, hi = floor(d / n), ceil(d / n)
    ell = n * hi - d
    return (lo,) * ell + (hi,) * (n - ell)


def most_entangled_dicke(d: int, n: int, verify: bool = True) -> tuple[tuple[int, ...], float]:
    if d < 2 or n < 2:
        raise InvalidIndex("need d, n >= 2")
    j = balanced_index(d, n)
    value = dicke_norm(j)
    if verify and comb(n + d - 1, n - 1) <= 200000:
        best = min(dicke_norm(k) for k in multi_indices(d, n))
        if best < value * (1 - 1e-12):
            raise AssertionError(f"balanced index {j} is not the minimiser")
    return j, value


def eta_sym_bounds(d: int, n: int) -> tuple[float, float]:
    lower = -dicke_log_norm_sq(balanced_index(d, n)) / log(2)
    upper = log2(comb(n + d - 1, n - 1))
    return lower, upper


def asymptotic_eta(d: int, n: int, with_constant: bool = True) -> float:
    """Large-d expansion of eta(S(d,n)).

    Stirling's formula leaves a constant ((n-1)/2) log2(2 pi) on top of the
    leading terms; ``with_constant=False`` drops it.
    """
    lead = 0.5 * ((n - 1) * log2(d) - n * log2(n))
    return lead + (0.5 * (n - 1) * log2(2 * pi) if with_constant else 0.0)
