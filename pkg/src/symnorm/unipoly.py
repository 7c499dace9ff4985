"""Dense complex polynomials in one variable and an Aberth-Ehrlich root finder."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericOverflow, SolverStall

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


class ComplexPolynomial:
    """Coefficients in ascending order: coeffs[k] multiplies z^k."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex).ravel()
        if not np.all(np.isfinite(c)):
            raise NumericOverflow("non-finite polynomial coefficient")
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        c.setflags(write=False)
        self.coeffs = c

    @property
    def degree(self) -> float:
        return len(self.coeffs) - 1 if len(self.coeffs) else -np.inf

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if len(self.coeffs) else 0.0

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            out = out * z + c
        return out

    def _binary(self, other, op):
        other = other if isinstance(other, ComplexPolynomial) else ComplexPolynomial([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        a[: len(self.coeffs)] = self.coeffs
        b[: len(other.coeffs)] = other.coeffs
        return ComplexPolynomial(op(a, b))

    def __add__(self, other):
        return self._binary(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __neg__(self):
        return ComplexPolynomial(-self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, ComplexPolynomial):
            return ComplexPolynomial(self.coeffs * complex(other))
        if self.is_zero or other.is_zero:
            return ComplexPolynomial([])
        return ComplexPolynomial(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = ComplexPolynomial([1.0])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int = 1) -> "ComplexPolynomial":
        """Multiply by z^k."""
        if self.is_zero:
            return self
        return ComplexPolynomial(np.concatenate([np.zeros(k, dtype=complex), self.coeffs]))

    def derivative(self) -> "ComplexPolynomial":
        if len(self.coeffs) <= 1:
            return ComplexPolynomial([])
        return ComplexPolynomial(self.coeffs[1:] * np.arange(1, len(self.coeffs)))

    def __repr__(self):
        return f"ComplexPolynomial(degree={self.degree}, coeffs={self.coeffs!r})"


def z_poly() -> ComplexPolynomial:
    return ComplexPolynomial([0.0, 1.0])


def is_zero_poly(poly: ComplexPolynomial, rel_eps: float, scale: float = 1.0) -> bool:
    return poly.scale <= rel_eps * scale


@dataclass
class Root:
    value: complex
    multiplicity: int
    residual: float
    polished: bool = True


@dataclass
class RootSet:
    roots: list[Root] = field(default_factory=list)
    degree: int = 0
    sweeps: int = 0

    @property
    def values(self) -> np.ndarray:
        return np.array([r.value for r in self.roots], dtype=complex)

    @property
    def distinct(self) -> int:
        return len(self.roots)

    @property
    def total_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.roots)

    def expanded(self) -> np.ndarray:
        return np.array([r.value for r in self.roots for _ in range(r.multiplicity)], dtype=complex)


def backward_error(poly: ComplexPolynomial, z) -> np.ndarray:
    """|p(z)| relative to sum |c_k| |z|^k, a scale-free residual."""
    z = np.asarray(z, dtype=complex)
    absp = ComplexPolynomial(np.abs(poly.coeffs))
    denom = np.real(absp(np.abs(z)))
    return np.abs(poly(z)) / np.where(denom > 0, denom, 1.0)


def _aberth(c: np.ndarray, max_sweeps: int, tol: float) -> tuple[np.ndarray, int, bool]:
    """Simultaneous iteration on monic-normalised coefficients c (ascending)."""
    deg = len(c) - 1
    p = ComplexPolynomial(c)
    dp = p.derivative()
    # Fujiwara bound: much tighter than 1 + max|c_k| when coefficients vary wildly
    ratios = np.abs(c[:-1] / c[-1])
    powers = 1.0 / (deg - np.arange(deg))
    ratios[0] /= 2.0
    radius = 2.0 * np.max(ratios**powers)
    radius = radius if radius > 0 else 1.0
    k = np.arange(deg)
    z = radius * np.exp(2j * np.pi * (k + GOLDEN * 0.5) / deg + 1j * GOLDEN)
    active = np.ones(deg, dtype=bool)
    for sweep in range(1, max_sweeps + 1):
        pz = p(z)
        dpz = dp(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dpz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            s = inv.sum(axis=1)
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w), w, 0.0)
        w[~active] = 0.0
        z = z - w
        small = np.abs(w) <= tol * (1.0 + np.abs(z))
        active &= ~small
        if not active.any():
            return z, sweep, True
    return z, max_sweeps, False


def _newton(p: ComplexPolynomial, z: np.ndarray, steps: int) -> np.ndarray:
    dp = p.derivative()
    for _ in range(steps):
        with np.errstate(divide="ignore", invalid="ignore"):
            step = p(z) / dp(z)
        step = np.where(np.isfinite(step), step, 0.0)
        # keep a step only when it does not make the residual worse
        trial = z - step
        better = np.abs(p(trial)) < np.abs(p(z))
        z = np.where(better, trial, z)
        if not better.any():
            break
    return z


def _cluster(z: np.ndarray, radius_rel: float) -> list[list[int]]:
    order = np.argsort(np.abs(z))
    groups: list[list[int]] = []
    used = np.zeros(len(z), dtype=bool)
    for i in order:
        if used[i]:
            continue
        members = [i]
        used[i] = True
        changed = True
        while changed:
            changed = False
            for k in np.flatnonzero(~used):
                if any(abs(z[k] - z[m]) <= radius_rel * (1 + abs(z[m])) for m in members):
                    members.append(k)
                    used[k] = True
                    changed = True
        groups.append(members)
    return groups


MERGE_RADIUS = 1e-2
MULTIPLE_ROOT_EPS = 1e-10


def _taylor(c, x: complex, m: int) -> np.ndarray:
    """First m Taylor coefficients at x of the polynomial with ascending coefficients c."""
    a = list(np.asarray(c)[::-1])
    out = []
    for _ in range(m):
        acc, quot = 0j, []
        for coef in a:
            acc = acc * x + coef
            quot.append(acc)
        out.append(quot.pop())
        a = quot
        if not a:
            break
    return np.array(out + [0j] * (m - len(out)))


def _refine_multiple(c: np.ndarray, x: complex, m: int, steps: int = 8) -> complex:
    """Newton on the (m-1)-th derivative, where an m-fold root is simple."""
    for _ in range(steps):
        b = _taylor(c, x, m + 1)
        if b[m] == 0:
            break
        step = b[m - 1] / (m * b[m])
        x = x - step
        if abs(step) <= 1e-16 * (1 + abs(x)):
            break
    return x


def _is_multiple(c: np.ndarray, x: complex, m: int) -> bool:
    """x is an m-fold root of a polynomial within MULTIPLE_ROOT_EPS of c, coefficientwise."""
    b = np.abs(_taylor(c, x, m))
    scale = np.abs(_taylor(np.abs(c), abs(x), m))
    return bool(np.all(b <= MULTIPLE_ROOT_EPS * scale))


def _merge_multiple(c: np.ndarray, z: np.ndarray, groups: list[list[int]]) -> list[list[int]]:
    """Join nearby clusters whose centre passes the multiple-root test.

    An m-fold root is only resolved to about eps^(1/m), so its copies land far
    outside the clustering radius.
    """
    groups = [list(g) for g in groups]
    rejected = set()
    while True:
        centres = [complex(np.mean(z[g])) for g in groups]
        best = None
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                key = (tuple(sorted(groups[a])), tuple(sorted(groups[b])))
                dist = abs(centres[a] - centres[b])
                if key in rejected or dist > MERGE_RADIUS * (1 + abs(centres[a])):
                    continue
                if best is None or dist < best[0]:
                    best = (dist, a, b, key)
        if best is None:
            return groups
        _, a, b, key = best
        merged = groups[a] + groups[b]
        centre = complex(np.mean(z[merged]))
        x = _refine_multiple(c, centre, len(merged))
        if abs(x - centre) <= MERGE_RADIUS * (1 + abs(centre)) and _is_multiple(c, x, len(merged)):
            z[merged] = x
            groups = [g for k, g in enumerate(groups) if k not in (a, b)] + [merged]
        else:
            rejected.add(key)


def roots(
    poly: ComplexPolynomial,
    target_residual: float = 1e-10,
    cluster_radius: float = 1e-7,
    max_sweeps: int = 200,
    newton_steps: int = 20,
) -> RootSet:
    """All roots of poly, with multiplicities from clustering."""
    if poly.degree < 1:
        raise ValueError("roots() needs a polynomial of degree at least 1")
    c = poly.coeffs
    # exact zeros at the bottom are roots at the origin
    low = int(np.flatnonzero(c)[0])
    out: list[Root] = []
    if low:
        out.append(Root(0j, low, 0.0))
    c = c[low:]
    sweeps = 0
    if len(c) > 1:
        c = c / c[-1]
        z, sweeps, converged = _aberth(c, max_sweeps, 1e-14)
        p = ComplexPolynomial(c)
        z = _newton(p, z, newton_steps)
        res = backward_error(p, z)
        if not converged and np.any(res > 1e-6):
            partial = RootSet(out + [Root(complex(v), 1, float(r), r <= target_residual) for v, r in zip(z, res)],
                              int(poly.degree), sweeps)
            raise SolverStall(f"Aberth iteration did not converge in {max_sweeps} sweeps", partial)
        for members in _merge_multiple(c, z, _cluster(z, cluster_radius)):
            centre = complex(np.mean(z[members]))
            if len(members) == 1:
                r = float(res[members[0]])
            else:
                r = float(backward_error(p, centre))
            # residual of a multiple root is tiny but slow to reach; accept cluster centres
            polished = r <= target_residual or len(members) > 1
            out.append(Root(centre, len(members), r, polished))
    return RootSet(out, int(poly.degree), sweeps)


def real_roots(rs: RootSet, im_tol: float = 1e-8) -> list[float]:
    return [r.value.real for r in rs.roots if abs(r.value.imag) <= im_tol * (1 + abs(r.value))]


def from_roots(values, leading: complex = 1.0) -> ComplexPolynomial:
    out = ComplexPolynomial([leading])
    for v in values:
        out = out * ComplexPolynomial([-v, 1.0])
    return out
