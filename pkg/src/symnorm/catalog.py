"""Reference tensors and the f_e / f_{a,b} families used for the tables."""

from __future__ import annotations

from math import sqrt

import numpy as np

from .tensor import SymTensor, dicke, from_monomial_coefficients

A5 = 1.53154


def _binary(d: int, a: dict[int, complex]) -> SymTensor:
    """Binary form from {power of x2: monomial coefficient}."""
    return from_monomial_coefficients(2, d, {(d - k, k): v for k, v in a.items()})


EXAMPLES: dict[str, SymTensor] = {
    "ex1": _binary(3, {0: 0.3104, 1: -1.4598, 2: -0.6558, 3: 0.2235}),
    "ex2": _binary(3, {1: 1.5, 3: -0.5}),
    "ex3": _binary(3, {0: 1 / sqrt(5), 1: -3 / (2 * sqrt(5)), 2: -3 / sqrt(5), 3: 1 / (2 * sqrt(5))}),
    "ex4": _binary(4, {0: 1 / sqrt(3), 3: sqrt(8) / sqrt(3)}),
    "ex5": _binary(5, {0: 1 / sqrt(1 + A5**2), 4: sqrt(5) * A5 / sqrt(1 + A5**2)}),
    "ex6": _binary(6, {1: sqrt(3), 5: sqrt(3)}),
    "ex7": _binary(7, {1: sqrt(7) / sqrt(2), 6: sqrt(7) / sqrt(2)}),
    "ex8": _binary(8, {1: 4 * 0.336 * sqrt(2), 6: 4 * 0.3705 * sqrt(7)}),
}

# companion h for the f_e family of each example
COMPANION: dict[str, SymTensor] = {
    "ex4": dicke((2, 2)),
    "ex5": dicke((3, 2)),
    "ex6": dicke((3, 3)),
    "ex7": dicke((4, 3)),
    "ex8": dicke((4, 4)),
}

T_GRID = (1 / 5, 1 / 4, 1 / 3, 1 / 2)
OMEGA_GRID = (
    ("1", 1.0 + 0j),
    ("-1", -1.0 + 0j),
    ("i", 1j),
    ("e^(i pi/3)", complex(0.5, sqrt(3) / 2)),
    ("e^(2i pi/3)", complex(-0.5, sqrt(3) / 2)),
)


def f_e(base: str, e: complex) -> SymTensor:
    f, h = EXAMPLES[base], COMPANION[base]
    return f * np.sqrt(1 - abs(e) ** 2) + h * e


def qutrit(a: complex, b: complex) -> SymTensor:
    return from_monomial_coefficients(3, 3, {(3, 0, 0): a, (0, 3, 0): a, (0, 0, 3): a, (1, 1, 1): b})


def ququadrit(a: complex, b: complex) -> SymTensor:
    """a x1^2 x4 + 2 b x1 x2 x3; unit norm when |a|^2 + 2|b|^2 = 3."""
    return from_monomial_coefficients(4, 3, {(2, 0, 0, 1): a, (1, 1, 1, 0): 2 * b})


S3 = sqrt(3)
S2 = sqrt(2)

# (label a, label b, a, b, real fixed points, other fixed points, real norm, complex norm)
QUTRIT_ROWS = (
    ("1/3", "2", 1 / 3, 2.0, 8, 56, 0.5774, 0.5774),
    ("1/2", "sqrt(3/2)", 1 / 2, sqrt(1.5), 8, 56, 0.5244, 0.5244),
    ("1/3", "-2", 1 / 3, -2.0, 8, 56, 0.4975, 0.5092),
    ("1/2", "-sqrt(3/2)", 1 / 2, -sqrt(1.5), 8, 56, 0.5000, 0.5000),
    ("0", "sqrt(6)", 0.0, sqrt(6), 5, 50, 0.4714, 0.4714),
    ("1/sqrt(3)", "0", 1 / S3, 0.0, 8, 56, 0.5774, 0.5774),
    ("1/6+sqrt(3)/6 i", "sqrt(2)-sqrt(2) i", complex(1 / 6, S3 / 6), complex(S2, -S2), 1, 63, None, 0.5730),
    ("1/4+sqrt(3)/4 i", "sqrt(6)/4+3sqrt(2)/4 i", complex(1 / 4, S3 / 4), complex(sqrt(6) / 4, 3 * S2 / 4), 1, 63, None, 0.5244),
)

QUQUADRIT_ROWS = (
    ("1", "1", 1.0, 1.0, 0.4444),
    ("sqrt(2)/2", "sqrt(5)/2", S2 / 2, sqrt(5) / 2, 0.4536),
    ("sqrt(5)/2", "sqrt(7/8)", sqrt(5) / 2, sqrt(7 / 8), 0.4491),
    ("sqrt(2)/2(1+i)", "1/2+sqrt(3)/2 i", S2 / 2 * (1 + 1j), complex(0.5, S3 / 2), 0.4444),
    ("sqrt(2)/2(1/2-sqrt(3)/2 i)", "sqrt(5)/2(sqrt(3)/4+sqrt(13)/4 i)",
     S2 / 2 * complex(0.5, -S3 / 2), sqrt(5) / 2 * complex(S3 / 4, sqrt(13) / 4), 0.4536),
    ("sqrt(6)/2(sqrt(2)/2+sqrt(2)/2 i)", "sqrt(3)/2(sqrt(3)/2+1/2 i)",
     sqrt(6) / 2 * complex(S2 / 2, S2 / 2), S3 / 2 * complex(S3 / 2, 0.5), 0.4714),
)

# reference f_e grids: rows follow OMEGA_GRID, columns follow T_GRID
FE_TABLES: dict[str, tuple[str, tuple[tuple[float, ...], ...]]] = {
    "table1": ("ex4", (
        (0.6787, 0.7012, 0.7358, 0.7918),
        (0.6314, 0.6442, 0.6645, 0.6989),
        (0.6662, 0.6863, 0.7172, 0.7676),
        (0.6314, 0.6442, 0.6645, 0.6989),
        (0.6787, 0.7012, 0.7358, 0.7918),
    )),
    "table2": ("ex5", (
        (0.5930, 0.6038, 0.6214, 0.6573),
        (0.5930, 0.6038, 0.6214, 0.6573),
        (0.5622, 0.5692, 0.5793, 0.5941),
        (0.5759, 0.5830, 0.5941, 0.6133),
        (0.5759, 0.5830, 0.5941, 0.6133),
    )),
    "table3": ("ex6", (
        (0.5382, 0.5590, 0.5946, 0.6545),
        (0.5382, 0.5590, 0.5946, 0.6545),
        (0.4777, 0.4811, 0.4886, 0.5076),
        (0.5054, 0.5148, 0.5312, 0.5688),
        (0.5054, 0.5148, 0.5312, 0.5688),
    )),
    "table6": ("ex7", (
        (0.5006, 0.5131, 0.5346, 0.5796),
        (0.4939, 0.5048, 0.5229, 0.5597),
        (0.4988, 0.5109, 0.5314, 0.5742),
        (0.4998, 0.5121, 0.5332, 0.5772),
        (0.4975, 0.5092, 0.5291, 0.5703),
    )),
    "table7": ("ex8", (
        (0.4946, 0.5108, 0.5374, 0.5867),
        (0.4841, 0.4979, 0.5206, 0.5630),
        (0.4919, 0.5075, 0.5330, 0.5806),
        (0.4934, 0.5093, 0.5354, 0.5840),
        (0.4898, 0.5049, 0.5297, 0.5759),
    )),
}

EXAMPLE_NORMS = {
    "ex1": (0.7027, 0.6205),
    "ex2": (sqrt(2) / 2, 0.5),
    "ex3": (sqrt(2) / 2, 0.5),
    "ex4": (0.5774, None),
    "ex5": (0.5467, None),
    "ex6": (0.4714, None),
    "ex7": (0.4508, None),
    "ex8": (0.4288, None),
}
