"""Result record returned by every norm routine."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

METHODS = ("univariate", "homotopy-F", "homotopy-H", "closed-form", "perturbation")


@dataclass
class NormReport:
    value: float
    field: str
    method: str
    witness: np.ndarray
    diagnostics: dict[str, Any] = field(default_factory=dict)
    lower_bound_only: bool = False

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.field not in ("complex", "real"):
            raise ValueError(f"unknown field {self.field!r}")


def phase_fix(f_value: complex, x: np.ndarray, d: int) -> np.ndarray:
    """Rotate x by a unimodular scalar so that f(x) becomes real and nonnegative."""
    if f_value == 0:
        return x
    return x * np.exp(-1j * np.angle(f_value) / d)
