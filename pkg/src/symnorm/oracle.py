"""Lower bounds for the spectral norm by projected ascent on the unit sphere.

Any unit vector x gives |f(x)| <= norm, so these bounds are independent of
the fixed-point machinery and can certify its output from below.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tensor as tc

ALPHA_FLOOR = 1e-3
STATIONARY = 1e-11


@dataclass
class OracleResult:
    lower_bound: float
    witness: np.ndarray
    starts: int
    converged_fraction: float


def _normalize(X: np.ndarray) -> np.ndarray:
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def _align(S: tc.SymTensor, X: np.ndarray, real: bool) -> tuple[np.ndarray, np.ndarray]:
    """Rotate each row so f is real and nonnegative where possible; return f values."""
    fx = tc.evaluate(S, X)
    if real:
        if S.d % 2:
            flip = fx.real < 0
            X = np.where(flip[:, None], -X, X)
            fx = np.where(flip, -fx, fx)
        return X, fx
    X = X * np.exp(-1j * np.angle(fx) / S.d)[:, None]
    return X, np.abs(fx).astype(complex)


def _direction(S: tc.SymTensor, X: np.ndarray, fx: np.ndarray, real: bool) -> tuple[np.ndarray, np.ndarray]:
    F = tc.grad_map_F(S, X)
    if real:
        F = F.real
    size = np.linalg.norm(F, axis=1)
    if real:
        Y = F * np.sign(fx.real + (fx.real == 0))[:, None]
    else:
        Y = F.conj()
    zero = size == 0
    Y[zero] = X[zero]
    return Y / np.where(zero, 1.0, size)[:, None], zero


def _climb(S: tc.SymTensor, X: np.ndarray, real: bool, max_iters: int, rng: np.random.Generator):
    X = _normalize(X.astype(float if real else complex))
    X, fx = _align(S, X, real)
    val = np.abs(fx)
    alpha = np.ones(len(X))
    done = np.zeros(len(X), dtype=bool)
    for _ in range(max_iters):
        idx = np.flatnonzero(~done)
        if not len(idx):
            break
        Y, zero = _direction(S, X[idx], fx[idx], real)
        if zero.any():
            # zero gradient: restart those trajectories elsewhere
            fresh = rng.standard_normal((int(zero.sum()), S.n))
            if not real:
                fresh = fresh + 1j * rng.standard_normal(fresh.shape)
            Y[zero] = _normalize(fresh)
            alpha[idx[zero]] = 1.0
        # at an anti-eigenvector the ascent direction is x itself
        still = np.linalg.norm(Y - X[idx], axis=1) <= STATIONARY
        done[idx[still & ~zero]] = True
        a = alpha[idx][:, None]
        trial = _normalize((1 - a) * X[idx] + a * Y)
        trial, ft = _align(S, trial, real)
        vt = np.abs(ft)
        up = (vt >= val[idx]) | zero
        gain = vt - val[idx]
        ui, di = idx[up], idx[~up]
        X[ui], fx[ui], val[ui] = trial[up], ft[up], vt[up]
        alpha[ui] = np.minimum(alpha[ui] * 2, 1.0)
        done[ui[(gain[up] <= 1e-16 * val[ui]) & ~zero[up]]] = True
        alpha[di] /= 2
        done[di[alpha[di] < ALPHA_FLOOR]] = True
    return X, val, done


def _stationarity(S: tc.SymTensor, x: np.ndarray, real: bool) -> tuple[float, np.ndarray]:
    X, fx = _align(S, x[None, :], real)
    Y, zero = _direction(S, X, fx, real)
    return (np.inf if zero[0] else float(np.linalg.norm(Y[0] - X[0]))), Y[0]


def _polish(S: tc.SymTensor, x: np.ndarray, real: bool, steps: int = 50) -> np.ndarray:
    """Plain fixed-point steps x <- direction(x), kept while the stationarity residual falls."""
    x = _align(S, x[None, :], real)[0][0]
    res, y = _stationarity(S, x, real)
    for _ in range(steps):
        if res <= 1e-14:
            break
        r2, y2 = _stationarity(S, y, real)
        if not r2 < res or abs(tc.evaluate(S, y)) < abs(tc.evaluate(S, x)) * (1 - 1e-14):
            break
        x, res, y = _align(S, y[None, :], real)[0][0], r2, y2
    return x


def ascend(S: tc.SymTensor, num_starts: int | None = None, max_iters: int = 2000, seed: int = 0,
           real: bool = False) -> OracleResult:
    rng = np.random.default_rng(seed)
    num_starts = num_starts or 16 * S.n * S.d
    X = rng.standard_normal((num_starts, S.n))
    if not real:
        X = X + 1j * rng.standard_normal((num_starts, S.n))
    X, val, done = _climb(S, X, real, max_iters, rng)
    k = int(np.argmax(val))
    w = _polish(S, X[k], real).astype(complex)
    return OracleResult(float(abs(tc.evaluate(S, w))), w, num_starts, float(done.mean()))


def ascend_from(S: tc.SymTensor, starts: np.ndarray, real: bool = False, max_iters: int = 2000,
                seed: int = 0) -> tuple[float, np.ndarray]:
    """Best value reached by climbing from the given points."""
    rng = np.random.default_rng(seed)
    starts = np.asarray(starts)
    starts = starts[np.linalg.norm(starts, axis=1) > 0]
    X, val, _ = _climb(S, starts, real, max_iters, rng)
    k = int(np.argmax(val))
    w = _polish(S, X[k], real).astype(complex)
    return float(abs(tc.evaluate(S, w))), w


def certify(reported: float, oracle: OracleResult | float, hs: float) -> str:
    lb = oracle.lower_bound if isinstance(oracle, OracleResult) else float(oracle)
    ok = lb <= reported + 1e-8 and reported <= hs + 1e-12
    return "PASS" if ok else "GAP"
