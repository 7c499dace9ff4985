"""Spectral norms of binary forms (n = 2) through one-variable polynomials.

With s_k = f_{(d-k,k)} the form is f(x1, x2) = x1^d phi(x2/x1), where
phi(z) = sum binom(d,k) s_k z^k.  Critical points of |f| on the sphere come
from the roots of z v(z) - u(z) (complex field) or z q(z) - p(z) (real
field), and the norm is the largest value of |phi(z)| / (1+|z|^2)^(d/2)
over those roots, compared against |s_d| for the point x = (0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import tensor as tc
from .errors import DegreeTooSmall, InternalError, InvalidIndex, UnclassifiedExceptional, ZeroTensor
from .report import NormReport, phase_fix
from .unipoly import ComplexPolynomial, RootSet, is_zero_poly, real_roots, roots, z_poly

ZERO_POLY_EPS = 1e-9
NEGLIGIBLE = 1e-12  # relative size below which an s_k counts as zero
TRIM = 1e-12  # relative size of a leading coefficient treated as round-off
REAL_ROOT_TOL = 1e-7


@dataclass(frozen=True)
class QubitCoeffs:
    s: np.ndarray
    d: int
    phi: ComplexPolynomial
    p: ComplexPolynomial
    q: ComplexPolynomial
    u: ComplexPolynomial
    v: ComplexPolynomial
    gain: float  # the caller's s equals gain * self.s

    @property
    def g(self) -> ComplexPolynomial:
        """z v(z) - u(z)."""
        return self.v.shift() - self.u

    @property
    def h(self) -> ComplexPolynomial:
        """z q(z) - p(z)."""
        return self.q.shift() - self.p

    @property
    def zero_scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.s))) ** self.d * 4.0**self.d)

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.s.imag == 0))


@dataclass(frozen=True)
class ExceptionalClass:
    tag: str  # Generic, PureTop, Monomial, TwoRootForm, RealCircle
    k: int | None = None
    A: complex | None = None
    c: float | None = None
    theta: float | None = None
    p: int | None = None


def coeffs_of(S: tc.SymTensor) -> np.ndarray:
    if S.n != 2:
        raise InvalidIndex(f"binary forms only, got n={S.n}")
    # descending lex order lists (d,0), (d-1,1), ..., (0,d): exactly s_0..s_d
    return np.array(S.f, dtype=complex)


def tensor_of(s) -> tc.SymTensor:
    s = np.asarray(s, dtype=complex)
    return tc.SymTensor(2, len(s) - 1, s)


def build(s) -> QubitCoeffs:
    s = np.array(s, dtype=complex)
    d = len(s) - 1
    if d < 3:
        raise DegreeTooSmall(f"need d >= 3, got {d}")
    top = float(np.max(np.abs(s)))
    if top == 0:
        raise ZeroTensor("all coefficients vanish")
    # classification thresholds are scale free once max|s_k| = 1
    s = s / top
    s[_negligible(s)] = 0  # classification treats these as zero; keep the arithmetic consistent
    b = np.array([comb(d - 1, j) for j in range(d)], dtype=float)
    phi = ComplexPolynomial([comb(d, j) * s[j] for j in range(d + 1)])
    p = ComplexPolynomial(b * s[1:])
    q = ComplexPolynomial(b * s[:-1])
    pw_p = [ComplexPolynomial([1.0])]
    pw_q = [ComplexPolynomial([1.0])]
    for _ in range(d - 1):
        pw_p.append(pw_p[-1] * p)
        pw_q.append(pw_q[-1] * q)
    u = ComplexPolynomial([])
    v = ComplexPolynomial([])
    for j in range(d):
        term = pw_p[j] * pw_q[d - 1 - j] * b[j]
        u = u + term * np.conj(s[j + 1])
        v = v + term * np.conj(s[j])
    qc = QubitCoeffs(s, d, phi, p, q, u, v, top)
    _check_identities(qc)
    return qc


def _check_identities(qc: QubitCoeffs) -> None:
    dphi = qc.phi.derivative()
    r1 = (qc.p * qc.d - dphi).scale
    r2 = (qc.q * qc.d - (qc.phi * qc.d - dphi.shift())).scale
    ref = max(qc.phi.scale, 1.0) * qc.d
    if max(r1, r2) > 1e-10 * ref:
        raise InternalError("p, q do not match phi'/d and phi - z phi'/d")


def _numerical(poly: ComplexPolynomial) -> ComplexPolynomial:
    """Drop leading coefficients that are round-off relative to the largest."""
    c = poly.coeffs
    if not len(c):
        return poly
    keep = np.flatnonzero(np.abs(c) > TRIM * np.max(np.abs(c)))
    return ComplexPolynomial(c[: keep[-1] + 1])


def _negligible(s: np.ndarray) -> np.ndarray:
    return np.abs(s) <= NEGLIGIBLE * np.max(np.abs(s))


def classify(qc: QubitCoeffs) -> ExceptionalClass:
    s, d = qc.s, qc.d
    small = _negligible(s)
    if np.all(small[:-1]):
        return ExceptionalClass("PureTop", k=d, A=complex(s[d]) * qc.gain)
    live = np.flatnonzero(~small)
    if len(live) == 1 and 1 <= live[0] <= d - 1:
        k = int(live[0])
        return ExceptionalClass("Monomial", k=k, A=complex(s[k]) * qc.gain)
    if is_zero_poly(qc.h, ZERO_POLY_EPS, qc.zero_scale):
        # z q - p = 0 forces phi = A (z^2 + 1)^(d/2)
        return ExceptionalClass("RealCircle", A=complex(s[d]) * qc.gain)
    if is_zero_poly(qc.g, ZERO_POLY_EPS, qc.zero_scale):
        fit = _two_root_fit(qc)
        if fit is None:
            raise UnclassifiedExceptional("z v - u vanishes but phi is not a two-root form")
        return fit
    return ExceptionalClass("Generic")


def _two_root_fit(qc: QubitCoeffs) -> ExceptionalClass | None:
    d = qc.d
    phi = _numerical(qc.phi)
    if phi.degree != d:
        return None
    z = roots(phi).expanded()
    # split into the two groups around the pair of most distant roots
    i = 0
    far = int(np.argmax(np.abs(z - z[i])))
    r1, r2 = z[i], z[far]
    for _ in range(5):
        near1 = np.abs(z - r1) <= np.abs(z - r2)
        if near1.all() or not near1.any():
            return None
        r1, r2 = z[near1].mean(), z[~near1].mean()
    p = int(near1.sum())
    A = qc.phi.coeffs[-1]
    rebuilt = ComplexPolynomial([A]) * ComplexPolynomial([-r1, 1.0]) ** p * ComplexPolynomial([-r2, 1.0]) ** (d - p)
    if (rebuilt - qc.phi).scale > 1e-6 * qc.phi.scale:
        return None
    if abs(r1 * np.conj(r2) + 1) > 1e-6 * (1 + abs(r1 * r2)):
        return None
    # phi = A (z + a)^p (z + b)^(d-p) with a = e^{-i theta} c, b = -e^{-i theta}/c
    theta = float(-np.angle(r2))
    c = float(1.0 / abs(r2))
    return ExceptionalClass("TwoRootForm", A=complex(A) * qc.gain, c=c, theta=theta, p=p)


def monomial_norm(A: complex, k: int, d: int) -> float:
    if not 1 <= k <= d - 1:
        raise InvalidIndex(f"k={k} outside [1, {d - 1}]")
    t = k / d
    return float(abs(A) * comb(d, k) * (1 - t) ** ((d - k) / 2) * t ** (k / 2))


def _unit(z: complex | None) -> np.ndarray:
    if z is None:
        return np.array([0.0, 1.0], dtype=complex)
    return np.array([1.0, z], dtype=complex) / np.sqrt(1 + abs(z) ** 2)


def _best(qc: QubitCoeffs, candidates) -> tuple[float, complex | None]:
    best, arg = abs(qc.s[qc.d]), None
    if len(candidates):
        z = np.asarray(candidates, dtype=complex)
        vals = np.abs(qc.phi(z)) / (1 + np.abs(z) ** 2) ** (qc.d / 2)
        k = int(np.argmax(vals))
        if vals[k] > best:
            best, arg = float(vals[k]), complex(z[k])
    return float(best), arg


def _solve(poly: ComplexPolynomial) -> RootSet:
    poly = _numerical(poly)
    if poly.degree < 1:
        return RootSet([], max(int(poly.degree), 0) if poly.degree > -np.inf else 0)
    return roots(poly)


def _report(qc: QubitCoeffs, value: float, z, field: str, method: str, diag: dict) -> NormReport:
    x = _unit(z)
    fx = qc.phi(x[1] / x[0]) * x[0] ** qc.d if x[0] != 0 else qc.s[qc.d]
    if field == "complex":
        x = phase_fix(complex(fx) * qc.gain, x, qc.d)
    else:
        x = x.real.astype(complex) * (1 if np.real(fx * qc.gain) >= 0 or qc.d % 2 == 0 else -1)
    return NormReport(value * qc.gain, field, method, x, diag)


def complex_norm(qc: QubitCoeffs, delta: float = 1e-3) -> NormReport:
    cls = classify(qc)
    if cls.tag != "Generic":
        return _exceptional_dispatch(qc, cls, "complex", delta)
    g = qc.g
    rs = _solve(g)
    value, z = _best(qc, rs.values)
    real = real_roots(rs, REAL_ROOT_TOL)
    diag = {
        "class": cls.tag,
        "degree": int(_numerical(g).degree),
        "distinct_roots": rs.distinct,
        "real_roots": len(real),
        "multiplicities": sorted((r.multiplicity for r in rs.roots if r.multiplicity > 1), reverse=True),
        "antifix_failures": _antifix_failures(qc, rs.values),
        "max_root_residual": max((r.residual for r in rs.roots), default=0.0),
    }
    return _report(qc, value, z, "complex", "univariate", diag)


def _antifix_failures(qc: QubitCoeffs, zs) -> int:
    """Roots z for which conj(z) q(z) - p(z) does not vanish."""
    bad = 0
    for z in zs:
        lhs = np.conj(z) * qc.q(z) - qc.p(z)
        ref = abs(z) * abs(qc.q(z)) + abs(qc.p(z)) + 1e-300
        bad += abs(lhs) > 1e-6 * ref
    return int(bad)


def real_norm(qc: QubitCoeffs, delta: float = 1e-3) -> NormReport:
    if not qc.is_real:
        raise InvalidIndex("real norm requested for a tensor with complex coefficients")
    cls = classify(qc)
    if cls.tag in ("PureTop", "Monomial", "RealCircle"):
        return _exceptional_dispatch(qc, cls, "real", delta)
    h = qc.h
    rs = _solve(h)
    zs = [r.value.real for r in rs.roots if abs(r.value.imag) <= 1e-6 * (1 + abs(r.value))]
    value, z = _best(qc, zs)
    diag = {
        "class": cls.tag,
        "degree": int(_numerical(h).degree),
        "distinct_roots": rs.distinct,
        "real_roots": len(real_roots(rs, REAL_ROOT_TOL)),
    }
    return _report(qc, value, z, "real", "univariate", diag)


def _exceptional_dispatch(qc: QubitCoeffs, cls: ExceptionalClass, field: str, delta: float) -> NormReport:
    d = qc.d
    diag = {"class": cls.tag}
    if cls.tag == "PureTop":
        return _report(qc, abs(qc.s[d]), None, field, "closed-form", diag)
    if cls.tag == "Monomial":
        k = cls.k
        # |x2|^2 = k/d at the maximiser
        z = np.sqrt(k / (d - k))
        return _report(qc, monomial_norm(qc.s[k], k, d), z, field, "closed-form", diag)
    if cls.tag == "RealCircle":
        # |x1^2 + x2^2| <= |x1|^2 + |x2|^2 with equality at real points
        return _report(qc, abs(qc.s[d]), 0.0, field, "closed-form", diag)
    if field == "real":
        raise InternalError(f"real norm has no special case for {cls.tag}")
    return exceptional_norm(qc, delta, cls)


def exceptional_norm(qc: QubitCoeffs, delta: float = 1e-3, cls: ExceptionalClass | None = None) -> NormReport:
    """Two-root forms: norm of phi/A + delta/4, within relative error delta."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    cls = cls or classify(qc)
    if cls.tag != "TwoRootForm":
        raise InternalError(f"exceptional_norm called on class {cls.tag}")
    d = qc.d
    A = qc.s[d]
    omega = delta / 4
    s = qc.s / A
    s[0] += omega
    pert = build(s)
    if classify(pert).tag != "Generic":
        raise InternalError("perturbed two-root form is still exceptional")
    inner = complex_norm(pert)
    value = inner.value * abs(A)
    x = inner.witness
    diag = {"class": "TwoRootForm", "c": cls.c, "theta": cls.theta, "p": cls.p,
            "omega": omega, "relative_error_bound": delta, "perturbed": inner.diagnostics}
    return NormReport(value * qc.gain, "complex", "perturbation", x, diag)


def majorana_roots(qc: QubitCoeffs) -> list[tuple[complex, int]]:
    phi = _numerical(qc.phi)
    out = [(r.value, r.multiplicity) for r in _solve(phi).roots] if phi.degree >= 1 else []
    at_inf = qc.d - int(phi.degree)
    if at_inf:
        out.append((complex(np.inf), at_inf))
    return out


def norm(S: tc.SymTensor, field: str = "complex", delta: float = 1e-3) -> NormReport:
    if tc.hs_norm(S) == 0:
        raise ZeroTensor("zero tensor")
    qc = build(coeffs_of(S))
    return complex_norm(qc, delta) if field == "complex" else real_norm(qc, delta)
