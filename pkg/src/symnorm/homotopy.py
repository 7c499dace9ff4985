"""Total-degree homotopy continuation for small square polynomial systems.

All paths are tracked together as one batch.  Each path keeps its own t and
step size, so the arithmetic done for a path never depends on which other
paths share the batch; this keeps results identical across thread counts.
Tracking happens in projective coordinates X = (x0, x) on a random affine
chart a . X = 1, which keeps paths that head to infinity bounded.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import prod
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch


@dataclass(frozen=True)
class Equation:
    exps: np.ndarray  # T x m
    coeffs: np.ndarray  # T

    @property
    def degree(self) -> int:
        return int(self.exps.sum(axis=1).max())

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))


@dataclass(frozen=True)
class PolySystem:
    m: int
    equations: tuple[Equation, ...]

    def __post_init__(self):
        if len(self.equations) != self.m:
            raise DimensionMismatch(f"{len(self.equations)} equations for {self.m} unknowns")
        for eq in self.equations:
            if eq.exps.shape[1] != self.m:
                raise DimensionMismatch("exponent width differs from number of unknowns")
            if eq.degree < 1:
                raise DimensionMismatch("every equation needs degree at least 1")

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(eq.degree for eq in self.equations)

    @property
    def total_degree(self) -> int:
        return prod(self.degrees)

    def evaluate(self, x) -> np.ndarray:
        X = np.atleast_2d(np.asarray(x, dtype=complex))
        out = np.empty((X.shape[0], self.m), dtype=complex)
        for i, eq in enumerate(self.equations):
            M = np.ones((X.shape[0], len(eq.coeffs)), dtype=complex)
            for v in range(self.m):
                M *= X[:, v : v + 1] ** eq.exps[:, v]
            out[:, i] = M @ eq.coeffs
        return out if np.ndim(x) == 2 else out[0]


def make_equation(terms: dict[tuple[int, ...], complex], m: int) -> Equation:
    terms = {k: v for k, v in terms.items() if v != 0}
    exps = np.array(list(terms), dtype=np.int64).reshape(len(terms), m)
    return Equation(exps, np.array(list(terms.values()), dtype=complex))


def residual(sys: PolySystem, x) -> float:
    vals = np.abs(sys.evaluate(x))
    scales = np.array([eq.scale for eq in sys.equations])
    return float(np.max(vals / (1.0 + scales)))


@dataclass
class TrackOptions:
    seed: int = 0
    dt0: float = 0.05
    dt_min: float = 1e-7
    dt_max: float = 0.1
    grow: float = 1.5
    grow_after: int = 4
    newton_tol: float = 1e-10
    newton_max: int = 3
    accept_residual: float = 1e-10
    divergence_bound: float = 1e8
    cluster_radius: float = 1e-6
    polish_steps: int = 60
    max_failure_rate: float = 0.05
    threads: int | None = None
    rescue_rounds: int = 2
    endgame: float = 1e-3


@dataclass
class Solution:
    x: np.ndarray
    residual: float
    multiplicity: int
    path_count: int
    paths: list[int] = field(default_factory=list)
    condition: float = 1.0


@dataclass
class SolutionSet:
    points: list[Solution]
    diverged_paths: int
    failed_paths: int
    tracked_paths: int
    unreliable: bool = False

    @property
    def found(self) -> int:
        return sum(p.path_count for p in self.points)


class _Batch:
    """Homogenised target and start systems evaluated on many points at once."""

    def __init__(self, sys: PolySystem, b: np.ndarray, gamma: complex, patch: np.ndarray):
        m = sys.m
        self.m = m
        self.deg = np.array(sys.degrees)
        exps, coef, starts = [], [], []
        for i, eq in enumerate(sys.equations):
            starts.append(sum(len(e) for e in exps))
            e0 = eq.degree - eq.exps.sum(axis=1)
            exps.append(np.column_stack([e0, eq.exps]))
            coef.append(eq.coeffs)
        self.E = np.vstack(exps)
        self.c = np.concatenate(coef)
        self.starts = np.array(starts)
        self.top = int(self.E.max())
        self.b = b
        self.gamma = gamma
        self.patch = patch

    def target(self, X: np.ndarray, jac: bool = True):
        P = X.shape[0]
        n1 = self.m + 1
        pw = np.ones((P, n1, self.top + 1), dtype=complex)
        for k in range(1, self.top + 1):
            pw[:, :, k] = pw[:, :, k - 1] * X
        factors = [pw[:, v, self.E[:, v]] for v in range(n1)]
        mon = np.ones_like(factors[0])
        for f in factors:
            mon = mon * f
        val = np.add.reduceat(mon * self.c, self.starts, axis=1)
        if not jac:
            return val, None
        prefix = [np.ones_like(mon)]
        for f in factors[:-1]:
            prefix.append(prefix[-1] * f)
        suffix = [np.ones_like(mon)] * (n1 + 1)
        for v in range(n1 - 1, -1, -1):
            suffix[v] = suffix[v + 1] * factors[v]
        J = np.empty((P, self.m, n1), dtype=complex)
        for v in range(n1):
            ev = self.E[:, v]
            dfac = ev * pw[:, v, np.maximum(ev - 1, 0)]
            J[:, :, v] = np.add.reduceat(prefix[v] * suffix[v + 1] * dfac * self.c, self.starts, axis=1)
        return val, J

    def start(self, X: np.ndarray):
        x0 = X[:, :1]
        x = X[:, 1:]
        d = self.deg
        val = x**d - self.b * x0**d
        P = X.shape[0]
        J = np.zeros((P, self.m, self.m + 1), dtype=complex)
        J[:, :, 0] = -self.b * d * x0 ** (d - 1)
        idx = np.arange(self.m)
        J[:, idx, idx + 1] = d * x ** (d - 1)
        return val, J

    def homotopy(self, X: np.ndarray, t: np.ndarray):
        """Square system (with chart row), its Jacobian, and d/dt."""
        tv, tJ = self.target(X)
        sv, sJ = self.start(X)
        s = ((1 - t) * self.gamma)[:, None]
        tt = t[:, None]
        val = s * sv + tt * tv
        J = s[:, :, None] * sJ + tt[:, :, None] * tJ
        P = X.shape[0]
        chart = _chart(X, self.patch)
        Jfull = np.concatenate([J, np.broadcast_to(self.patch, (P, 1, self.m + 1))], axis=1)
        full = np.concatenate([val, chart[:, None]], axis=1)
        dt = np.concatenate([tv - self.gamma * sv, np.zeros((P, 1))], axis=1)
        return full, Jfull, dt

    def projective_target(self, X: np.ndarray):
        tv, tJ = self.target(X)
        P = X.shape[0]
        chart = _chart(X, self.patch)
        Jfull = np.concatenate([tJ, np.broadcast_to(self.patch, (P, 1, self.m + 1))], axis=1)
        return np.concatenate([tv, chart[:, None]], axis=1), Jfull


def _chart(X: np.ndarray, patch: np.ndarray) -> np.ndarray:
    # rowwise sum rather than a BLAS product, whose rounding can depend on the batch size
    return np.sum(X * patch, axis=1) - 1.0


def _lin_solve(J: np.ndarray, r: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.solve(J, r[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.empty_like(r)
        for k in range(J.shape[0]):
            try:
                out[k] = np.linalg.solve(J[k], r[k])
            except np.linalg.LinAlgError:
                out[k] = np.linalg.lstsq(J[k], r[k], rcond=None)[0]
        return out


def _start_points(b: np.ndarray, deg: Sequence[int], patch: np.ndarray, paths: np.ndarray) -> np.ndarray:
    roots = [b[i] ** (1.0 / d) * np.exp(2j * np.pi * np.arange(d) / d) for i, d in enumerate(deg)]
    combos = list(itertools.product(*[range(d) for d in deg]))
    X = np.array([[1.0 + 0j] + [roots[i][c[i]] for i in range(len(deg))] for c in (combos[p] for p in paths)])
    return X / np.sum(X * patch, axis=1)[:, None]


def _track(batch: _Batch, X: np.ndarray, opts: TrackOptions, dt_max: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Track a batch from t=0 to t=1.  Returns endpoints, final t and a success mask."""
    P = X.shape[0]
    t = np.zeros(P)
    dt = np.full(P, min(opts.dt0, dt_max))
    wins = np.zeros(P, dtype=int)
    alive = np.ones(P, dtype=bool)
    ok = np.zeros(P, dtype=bool)
    while alive.any():
        idx = np.flatnonzero(alive)
        Xa, ta = X[idx], t[idx]
        h = np.minimum(dt[idx], 1.0 - ta)
        _, J, Ht = batch.homotopy(Xa, ta)
        Xp = Xa - h[:, None] * _lin_solve(J, Ht)
        tn = ta + h
        conv = np.zeros(len(idx), dtype=bool)
        bad = np.zeros(len(idx), dtype=bool)
        for _ in range(opts.newton_max):
            val, J, _ = batch.homotopy(Xp, tn)
            step = _lin_solve(J, val)
            step[conv | bad] = 0
            Xp = Xp - step
            size = np.linalg.norm(step, axis=1)
            scale = np.linalg.norm(Xp, axis=1)
            bad |= ~np.isfinite(size) | ~np.isfinite(scale)
            conv |= (size <= opts.newton_tol * scale) & ~bad
        good = conv & ~bad
        gi, fi = idx[good], idx[~good]
        X[gi] = Xp[good]
        t[gi] = tn[good]
        wins[gi] += 1
        grow = gi[wins[gi] >= opts.grow_after]
        dt[grow] = np.minimum(dt[grow] * opts.grow, dt_max)
        wins[grow] = 0
        dt[fi] /= 2
        wins[fi] = 0
        finished = gi[t[gi] >= 1.0]
        ok[finished] = True
        alive[finished] = False
        # near t=1 a failed step usually means a singular endpoint: hand over to the polish
        alive[fi[(dt[fi] < opts.dt_min) | (t[fi] > 1 - opts.endgame)]] = False
    return X, t, ok


def _polish(batch: _Batch, X: np.ndarray, steps: int) -> np.ndarray:
    # each path stops on its own so results do not depend on how paths are batched
    X = X.copy()
    live = np.ones(len(X), dtype=bool)
    for _ in range(steps):
        idx = np.flatnonzero(live)
        if not len(idx):
            break
        val, J = batch.projective_target(X[idx])
        # minimum-norm steps also converge onto positive-dimensional components
        step = (np.linalg.pinv(J, rcond=1e-12) @ val[..., None])[..., 0]
        good = np.all(np.isfinite(step), axis=1)
        X[idx[good]] -= step[good]
        done = ~good | (np.linalg.norm(step, axis=1) <= 1e-15 * np.linalg.norm(X[idx], axis=1))
        live[idx[done]] = False
    return X


def _thread_count(opts: TrackOptions) -> int:
    env = os.environ.get("SYMNORM_THREADS")
    if env:
        return max(1, int(env))
    return max(1, opts.threads or os.cpu_count() or 1)


def _run(batch: _Batch, X: np.ndarray, opts: TrackOptions, dt_max: float):
    threads = _thread_count(opts)
    if threads == 1 or len(X) < 64:
        return _track(batch, X.copy(), opts, dt_max)
    chunks = np.array_split(np.arange(len(X)), threads)
    with ThreadPoolExecutor(threads) as pool:
        parts = list(pool.map(lambda c: _track(batch, X[c].copy(), opts, dt_max), chunks))
    return tuple(np.concatenate([p[k] for p in parts]) for k in range(3))


def _condition(batch: _Batch, X: np.ndarray) -> np.ndarray:
    _, J = batch.projective_target(X)
    with np.errstate(all="ignore"):
        return np.linalg.cond(J)


def solve_total_degree(sys: PolySystem, opts: TrackOptions | None = None) -> SolutionSet:
    """All isolated solutions of sys, counted with the number of paths reaching them."""
    opts = opts or TrackOptions()
    rng = np.random.default_rng(opts.seed)
    m = sys.m
    gamma = np.exp(2j * np.pi * rng.random())
    b = np.exp(2j * np.pi * rng.random(m))
    patch = rng.standard_normal(m + 1) + 1j * rng.standard_normal(m + 1)
    patch /= np.linalg.norm(patch)
    batch = _Batch(sys, b, gamma, patch)
    D = sys.total_degree
    paths = np.arange(D)
    X, t, ok = _run(batch, _start_points(b, sys.degrees, patch, paths), opts, opts.dt_max)
    X, kinds = _finish(sys, batch, X, t, ok, opts)

    # retrack paths that appear to have jumped onto an already claimed regular solution
    dt_max = opts.dt_max
    for _ in range(opts.rescue_rounds):
        suspects = _jump_suspects(batch, X, kinds, opts)
        if not len(suspects):
            break
        dt_max /= 5
        Xr, tr, okr = _run(batch, _start_points(b, sys.degrees, patch, suspects), opts, dt_max)
        Xr, kr = _finish(sys, batch, Xr, tr, okr, opts)
        X[suspects], kinds[suspects] = Xr, kr

    return _collect(sys, batch, X, kinds, opts)


ACCEPTED, DIVERGED, FAILED = 0, 1, 2


def _finish(sys, batch, X, t, ok, opts):
    """Polish endpoints and label each path accepted, diverged or failed."""
    # paths that stalled just short of t=1 usually end at a singular point; polish them too
    near = ok | (t > 1 - opts.endgame)
    X = X.copy()
    X[near] = _polish(batch, X[near], opts.polish_steps)
    kinds = np.full(len(X), FAILED)
    x0 = np.abs(X[:, 0])
    size = np.linalg.norm(X[:, 1:], axis=1)
    far = x0 * opts.divergence_bound <= size
    kinds[near & far] = DIVERGED
    cand = np.flatnonzero(near & ~far)
    for k in cand:
        x = X[k, 1:] / X[k, 0]
        if residual(sys, x) <= opts.accept_residual * (1 + np.linalg.norm(x)) ** max(sys.degrees):
            kinds[k] = ACCEPTED
        elif x0[k] <= 1e-3 * size[k]:
            kinds[k] = DIVERGED
    return X, kinds


def _affine(X: np.ndarray) -> np.ndarray:
    return X[:, 1:] / X[:, :1]


def _clusters(pts: np.ndarray, radius: float) -> list[list[int]]:
    groups: list[list[int]] = []
    used = np.zeros(len(pts), dtype=bool)
    for i in range(len(pts)):
        if used[i]:
            continue
        gap = np.linalg.norm(pts - pts[i], axis=1)
        members = np.flatnonzero(~used & (gap <= radius * (1 + np.linalg.norm(pts[i]))))
        used[members] = True
        groups.append(list(members))
    return groups


def _jump_suspects(batch, X, kinds, opts) -> np.ndarray:
    acc = np.flatnonzero(kinds == ACCEPTED)
    if not len(acc):
        return np.array([], dtype=int)
    pts = _affine(X[acc])
    cond = _condition(batch, X[acc])
    out = []
    for g in _clusters(pts, opts.cluster_radius):
        if len(g) > 1 and cond[g[0]] < 1e8:
            out.extend(acc[g])
    return np.array(sorted(out), dtype=int)


def _collect(sys, batch, X, kinds, opts) -> SolutionSet:
    acc = np.flatnonzero(kinds == ACCEPTED)
    points = []
    if len(acc):
        pts = _affine(X[acc])
        cond = _condition(batch, X[acc])
        for g in _clusters(pts, opts.cluster_radius):
            x = pts[g].mean(axis=0) if len(g) > 1 else pts[g[0]]
            points.append(Solution(x, residual(sys, x), len(g), len(g), [int(acc[i]) for i in g], float(cond[g[0]])))
    D = len(X)
    failed = int(np.sum(kinds == FAILED))
    return SolutionSet(points, int(np.sum(kinds == DIVERGED)), failed, D,
                       unreliable=failed > opts.max_failure_rate * D)
