"""Spectral norms for any n from the fixed points of F and of H = Fbar o F.

Over C the norm is the largest |f(x)| / |x|^d over nonzero fixed points of H;
over R it is the same maximum over real fixed points of F (and, for even d,
real points of the twisted copy conj(omega) fix(F) with omega^(d-2) = -1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import tensor as tc
from .errors import DegreeTooSmall, InvalidIndex, ZeroTensor
from .homotopy import PolySystem, SolutionSet, TrackOptions, make_equation, solve_total_degree
from .oracle import ascend_from
from .report import NormReport, phase_fix

REAL_TOL = 1e-7
PERTURBATION = 1e-3


@dataclass
class NormOptions:
    seed: int = 0
    tol: float = 1e-10
    threads: int | None = None
    perturb_singular: bool = True

    def track(self, seed_offset: int = 0, rescue: bool = True) -> TrackOptions:
        return TrackOptions(seed=self.seed + seed_offset, accept_residual=self.tol, threads=self.threads,
                            rescue_rounds=2 if rescue else 0)


def _map_equations(S: tc.SymTensor, offset_in: int, offset_out: int, m: int, conj: bool):
    """Terms of F_i(block_in) - block_out_i over m unknowns."""
    eqs = []
    T = S.conj() if conj else S
    for i, (e, c) in enumerate(tc.gradient_terms(T)):
        terms: dict[tuple[int, ...], complex] = {}
        for ek, ck in zip(e, c):
            key = [0] * m
            key[offset_in : offset_in + S.n] = ek
            terms[tuple(key)] = terms.get(tuple(key), 0) + ck
        key = [0] * m
        key[offset_out + i] = 1
        terms[tuple(key)] = terms.get(tuple(key), 0) - 1.0
        eqs.append(make_equation(terms, m))
    return eqs


def _require(S: tc.SymTensor) -> None:
    if S.d < 3:
        raise DegreeTooSmall(f"fixed-point characterisation needs d >= 3, got {S.d}")
    if tc.hs_norm(S) == 0:
        raise ZeroTensor("zero tensor")


def fix_F_system(S: tc.SymTensor) -> PolySystem:
    _require(S)
    return PolySystem(S.n, tuple(_map_equations(S, 0, 0, S.n, False)))


def fix_H_system(S: tc.SymTensor) -> PolySystem:
    """Unknowns (x, y): F(x) - y = 0 and Fbar(y) - x = 0."""
    _require(S)
    m = 2 * S.n
    eqs = _map_equations(S, 0, S.n, m, False) + _map_equations(S, S.n, 0, m, True)
    return PolySystem(m, tuple(eqs))


def exclusion_radius(S: tc.SymTensor) -> float:
    return tc.hs_norm(S) ** (-1.0 / (S.d - 2)) * (1 - 1e-6)


@dataclass
class FixedPointInventory:
    field: str
    solutions: SolutionSet
    points: np.ndarray  # x-parts, one row per distinct solution
    multiplicities: np.ndarray
    expected: int
    antifix: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))

    @property
    def found(self) -> int:
        return int(self.multiplicities.sum())

    @property
    def diverged(self) -> int:
        return self.solutions.diverged_paths

    def origin_multiplicity(self, S: tc.SymTensor) -> int:
        small = np.linalg.norm(self.points, axis=1) < exclusion_radius(S) if len(self.points) else []
        return int(self.multiplicities[small].sum()) if len(self.points) else 0

    def real_mask(self) -> np.ndarray:
        if not len(self.points):
            return np.zeros(0, dtype=bool)
        scale = 1 + np.linalg.norm(self.points, axis=1)
        return np.max(np.abs(self.points.imag), axis=1) <= REAL_TOL * scale


def _inventory(S: tc.SymTensor, which: str, opts: NormOptions, seed_offset: int = 0,
               rescue: bool = True) -> FixedPointInventory:
    sys = fix_F_system(S) if which == "F" else fix_H_system(S)
    sol = solve_total_degree(sys, opts.track(seed_offset, rescue))
    pts = np.array([p.x[: S.n] for p in sol.points]).reshape(-1, S.n)
    mult = np.array([p.multiplicity for p in sol.points], dtype=int)
    expected = (S.d - 1) ** (S.n if which == "F" else 2 * S.n)
    return FixedPointInventory("real" if which == "F" else "complex", sol, pts, mult, expected)


def f_inventory(S: tc.SymTensor, opts: NormOptions | None = None) -> FixedPointInventory:
    return _inventory(S, "F", opts or NormOptions())


def h_inventory(S: tc.SymTensor, opts: NormOptions | None = None) -> FixedPointInventory:
    return _inventory(S, "H", opts or NormOptions())


def _values(S: tc.SymTensor, pts: np.ndarray) -> np.ndarray:
    if not len(pts):
        return np.zeros(0)
    r = np.linalg.norm(pts, axis=1)
    return np.abs(tc.evaluate(S, pts)) / r**S.d


def _real_candidates(S: tc.SymTensor, pts: np.ndarray) -> np.ndarray:
    cands = [pts]
    if S.d % 2 == 0:
        omega = np.exp(1j * np.pi / (S.d - 2))
        cands.append(np.conj(omega) * pts)
    allpts = np.vstack(cands) if len(pts) else pts
    if not len(allpts):
        return allpts.real
    scale = 1 + np.linalg.norm(allpts, axis=1)
    real = np.max(np.abs(allpts.imag), axis=1) <= REAL_TOL * scale
    return allpts[real].real


def _keep_nonzero(S: tc.SymTensor, pts: np.ndarray) -> np.ndarray:
    if not len(pts):
        return pts
    return pts[np.linalg.norm(pts, axis=1) >= exclusion_radius(S)]


def _evaluate_candidates(S: tc.SymTensor, inv: FixedPointInventory, real: bool):
    pts = _keep_nonzero(S, inv.points)
    if real:
        pts = _real_candidates(S, pts)
    vals = _values(S, pts)
    if not len(vals):
        return 0.0, None, pts, vals
    k = int(np.argmax(vals))
    return float(vals[k]), pts[k], pts, vals


def _is_singular(inv: FixedPointInventory) -> bool:
    ill = any(p.condition > 1e10 for p in inv.solutions.points)
    # a vanishing gradient component lowers the Bezout count itself, so compare with (d-1)^n too
    return inv.found < inv.expected or inv.diverged > 0 or inv.solutions.failed_paths > 0 or ill


def _spectral_norm(S: tc.SymTensor, opts: NormOptions, real: bool) -> NormReport:
    which = "F" if real else "H"
    inv = _inventory(S, which, opts)
    value, best, pts, vals = _evaluate_candidates(S, inv, real)
    method = "homotopy-F" if real else "homotopy-H"
    field_name = "real" if real else "complex"
    singular = _is_singular(inv)
    diag = {
        "system": which,
        "expected_paths": inv.expected,
        "found": inv.found,
        "distinct": len(inv.points),
        "diverged": inv.diverged,
        "failed": inv.solutions.failed_paths,
        "singular": singular,
        "candidates": int(len(vals)),
    }
    if not real:
        radii = np.linalg.norm(pts, axis=1) if len(pts) else np.zeros(0)
        # every nonzero fixed point of H has |x|^-(d-2) <= norm
        diag["radius_discrepancies"] = int(np.sum(radii ** (-(S.d - 2)) > value * (1 + 1e-6)))
        if best is not None:
            diag["radius_norm"] = float(np.linalg.norm(best) ** (-(S.d - 2)))
    witness = None if best is None else best / np.linalg.norm(best)

    if singular:
        # fixed-point sets of singular tensors can contain curves whose generic
        # points are not maximisers: climb from every candidate, then re-solve a
        # slightly perturbed tensor and evaluate its witness on S itself
        starts = np.vstack([pts, inv.points[np.linalg.norm(inv.points, axis=1) > 0]]) if len(inv.points) else pts
        if real:
            starts = starts.real
        if len(starts):
            lb, w = ascend_from(S, starts, real)
            if lb > value * (1 + 1e-12):
                value, witness = lb, w
        if opts.perturb_singular:
            E = tc.random_tensor(S.n, S.d, np.random.default_rng(opts.seed + 7919), real=S.is_real)
            Sp = S + E * (PERTURBATION * tc.hs_norm(S))
            # its points only seed the ascent on S, so path-jump repair is not needed
            pinv = _inventory(Sp, which, opts, seed_offset=1, rescue=False)
            _, pbest, ppts, _ = _evaluate_candidates(Sp, pinv, real)
            if pbest is not None:
                lb, w = ascend_from(S, (ppts.real if real else ppts)[:], real)
                diag["perturbed_value"] = lb
                if lb > value * (1 + 1e-12):
                    value, witness, method = lb, w, "perturbation"
    if witness is None:
        raise ZeroTensor("no nonzero fixed point found")
    fval = tc.evaluate(S, witness)
    witness = witness.astype(complex)
    if real:
        witness = witness * (1 if fval.real >= 0 or S.d % 2 == 0 else -1)
    else:
        witness = phase_fix(fval, witness, S.d)
    return NormReport(value, field_name, method, witness, diag, lower_bound_only=inv.solutions.unreliable)


def real_spectral_norm(S: tc.SymTensor, opts: NormOptions | None = None) -> NormReport:
    if not S.is_real:
        raise InvalidIndex("real norm requested for a tensor with complex coefficients")
    _require(S)
    return _spectral_norm(S, opts or NormOptions(), real=True)


def complex_spectral_norm(S: tc.SymTensor, opts: NormOptions | None = None, shortcut: bool = True) -> NormReport:
    """Complex norm; nonnegative and two-monomial tensors go through the real F-system."""
    _require(S)
    opts = opts or NormOptions()
    if shortcut:
        g, two = tc.two_monomial_normalize(S)
        if two or tc.is_nonnegative(S):
            rep = _spectral_norm(g if two else S, opts, real=True)
            rep.field = "complex"
            rep.diagnostics["reduced_to_real"] = "two-monomial" if two else "nonnegative"
            if two:
                rep.witness = _two_monomial_witness(S, g, rep.witness)
            return rep
    return _spectral_norm(S, opts, real=False)


def _two_monomial_witness(S: tc.SymTensor, g: tc.SymTensor, w: np.ndarray) -> np.ndarray:
    """Move a witness of |a| x^j + |b| x^k back to a x^j + b x^k by per-coordinate phases."""
    (ja, a), (jb, b) = list(S.nonzero().items())
    ja, jb = np.array(ja), np.array(jb)
    # want phases t with ja.t + arg a = jb.t + arg b (mod 2 pi): solve in least squares
    diff = (ja - jb).astype(float)
    target = np.angle(b) - np.angle(a)
    t = diff * target / max(diff @ diff, 1e-300)
    cand = np.abs(w) * np.exp(1j * t)
    return phase_fix(tc.evaluate(S, cand), cand, S.d)


def antifixed_points(S: tc.SymTensor, opts: NormOptions | None = None, inv: FixedPointInventory | None = None):
    """Points of fix(H) with F(x) = conj(x), plus count diagnostics."""
    inv = inv or h_inventory(S, opts)
    pts = inv.points
    if not len(pts):
        return inv, {"count": 0}
    F = tc.grad_map_F(S, pts)
    size = np.linalg.norm(pts, axis=1)
    gap = np.linalg.norm(F - pts.conj(), axis=1)
    mask = gap <= 1e-6 * (1 + size) ** (S.d - 1)
    inv.antifix = np.flatnonzero(mask)
    d, n = S.d, S.n
    nonzero = int(inv.multiplicities[mask & (size >= exclusion_radius(S))].sum())
    # nonzero anti-fixed points come in orbits x -> zeta x, zeta^d = 1; the bounds count orbits
    mu = nonzero / d
    lo = ((d - 1) ** n - 1) / d
    hi = sum((d - 1) ** (2 * k) for k in range(n))
    return inv, {"count": int(inv.multiplicities[mask].sum()), "nonzero": nonzero, "orbits": mu,
                 "lower_bound": lo, "upper_bound": hi, "within_bounds": bool(lo <= mu <= hi)}


def singularity_diagnostic(S: tc.SymTensor, opts: NormOptions | None = None) -> dict:
    inv = f_inventory(S, opts)
    return {"diverged_paths": inv.diverged, "singular": _is_singular(inv),
            "found": inv.found, "expected": inv.expected}


def fixed_point_counts(S: tc.SymTensor, opts: NormOptions | None = None) -> tuple[int, int]:
    """(real fixed points of F, remaining finite fixed points of H), with multiplicity."""
    opts = opts or NormOptions()
    finv = f_inventory(S, opts)
    hinv = h_inventory(S, opts)
    real = int(finv.multiplicities[finv.real_mask()].sum())
    return real, hinv.found - real
