"""Reference values computed without any of the package's solvers."""

from itertools import combinations

import numpy as np
from scipy.optimize import minimize


def binary_values(s, a, b):
    """|f(x)| for x = (cos a, e^{ib} sin a), f with f_j = s_k, j = (d-k, k)."""
    from math import comb

    d = len(s) - 1
    x1, x2 = np.cos(a), np.exp(1j * b) * np.sin(a)
    out = 0
    for k, sk in enumerate(s):
        out = out + comb(d, k) * sk * x1 ** (d - k) * x2**k
    return np.abs(out)


def binary_sphere_max(s, points=10**6, polish=20):
    """Grid over the 2-sphere of unit vectors modulo phase, then Nelder-Mead from the best cells."""
    side = int(round(np.sqrt(points)))
    a = np.linspace(0, np.pi / 2, side)
    b = np.linspace(0, 2 * np.pi, side, endpoint=False)
    A, B = np.meshgrid(a, b, indexing="ij")
    vals = binary_values(s, A.ravel(), B.ravel())
    best = float(vals.max())
    for k in np.argsort(vals)[-polish:]:
        res = minimize(lambda t: -binary_values(s, t[0], t[1]), [A.ravel()[k], B.ravel()[k]],
                       method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
        best = max(best, float(-res.fun))
    return best


def clique_number(A):
    """Brute-force search over vertex subsets."""
    A = np.asarray(A)
    n = len(A)
    for k in range(n, 0, -1):
        for c in combinations(range(n), k):
            if all(A[i, j] for i, j in combinations(c, 2)):
                return k
    return 0


def graph(edges, n):
    A = np.zeros((n, n), dtype=int)
    for i, j in edges:
        A[i, j] = A[j, i] = 1
    return A


def unitary(n, rng):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
