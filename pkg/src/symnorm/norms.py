"""One entry point for spectral norms: routing, certification and entanglement."""

from __future__ import annotations

import numpy as np

from . import fixedpoint, qubit
from . import tensor as tc
from .entanglement import measures
from .errors import UsageError, ZeroTensor
from .fixedpoint import NormOptions
from .oracle import ascend, certify
from .report import NormReport


def spectral_norm(S: tc.SymTensor, field: str = "complex", method: str = "auto",
                  opts: NormOptions | None = None, delta: float = 1e-3, check: bool = True) -> NormReport:
    """Spectral norm of S over C or R, with an independent lower-bound check attached."""
    opts = opts or NormOptions()
    if field not in ("complex", "real"):
        raise UsageError(f"unknown field {field!r}")
    if method not in ("auto", "univariate", "homotopy"):
        raise UsageError(f"unknown method {method!r}")
    if field == "real" and not S.is_real:
        raise UsageError("--field real needs a tensor with real coefficients")
    if tc.hs_norm(S) == 0:
        raise ZeroTensor("zero tensor has norm 0")
    if method == "univariate" and S.n != 2:
        raise UsageError(f"univariate method needs n=2, got n={S.n}")

    if S.n == 1:
        rep = _one_variable(S, field)
    elif S.n == 2 and method != "homotopy":
        rep = qubit.norm(S, field, delta)
    elif field == "complex":
        rep = fixedpoint.complex_spectral_norm(S, opts)
    else:
        rep = fixedpoint.real_spectral_norm(S, opts)

    if check:
        hs = tc.hs_norm(S)
        orc = ascend(S, seed=opts.seed, real=field == "real")
        rep.diagnostics["oracle"] = {
            "lower_bound": orc.lower_bound,
            "starts": orc.starts,
            "converged_fraction": orc.converged_fraction,
        }
        rep.diagnostics["hs_norm"] = hs
        rep.diagnostics["verdict"] = certify(rep.value, orc, hs)
    return rep


def _one_variable(S: tc.SymTensor, field: str) -> NormReport:
    v = abs(complex(S.f[0]))
    return NormReport(v, field, "closed-form", np.array([1.0 + 0j]), {"class": "one-variable"})


def entanglement(S: tc.SymTensor, opts: NormOptions | None = None):
    rep = spectral_norm(S, "complex", "auto", opts)
    return rep, measures(rep.value, tc.hs_norm(S))
