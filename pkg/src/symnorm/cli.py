"""Command-line front end: tensor files, subcommands and JSON reports."""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
import time
import warnings
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from itertools import combinations
from typing import Any, Sequence

import numpy as np

from . import catalog, fixedpoint, qubit
from . import tensor as tc
from .entanglement import dicke_norm, eta_sym_bounds, measures, most_entangled_dicke
from .errors import InputError, InvalidGraph, InvalidIndex, SolverStall, SymNormError, UsageError
from .fixedpoint import NormOptions
from .norms import spectral_norm

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_SOLVER, EXIT_GAP = 0, 1, 2, 3, 4

CONVENTIONS = ("monomial", "fj")
_TOP_KEYS = {"n", "d", "convention", "coeffs"}
_COEFF_KEYS = {"j", "re", "im"}


# ---------------------------------------------------------------- tensor files


@dataclass
class TensorFile:
    n: int
    d: int
    convention: str
    coeffs: list[tuple[tuple[int, ...], float, float]]

    def tensor(self) -> tc.SymTensor:
        vals = {j: complex(re, im) for j, re, im in self.coeffs}
        if self.convention == "monomial":
            return tc.from_monomial_coefficients(self.n, self.d, vals)
        return tc.from_fj(self.n, self.d, vals)

    @classmethod
    def from_tensor(cls, S: tc.SymTensor, convention: str = "fj") -> "TensorFile":
        if convention not in CONVENTIONS:
            raise UsageError(f"unknown convention {convention!r}")
        vals = S.monomial_coeffs if convention == "monomial" else S.f
        coeffs = [(j, float(v.real), float(v.imag)) for j, v in zip(S.indices, vals) if v != 0]
        return cls(S.n, S.d, convention, coeffs)


def _no_duplicate_keys(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise InputError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _int(v, what: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(f"{what} must be an integer, got {v!r}")
    return v


def _real(v, what: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise InputError(f"{what} must be a finite number, got {v!r}")
    return float(v)


def parse_tensor_file(text: str) -> TensorFile:
    try:
        obj = json.loads(text, object_pairs_hook=_no_duplicate_keys)
    except json.JSONDecodeError as e:
        raise InputError(f"not valid JSON: {e}") from None
    if not isinstance(obj, dict):
        raise InputError("tensor file must hold a JSON object")
    unknown = set(obj) - _TOP_KEYS
    if unknown:
        raise InputError(f"unknown fields {sorted(unknown)}")
    missing = _TOP_KEYS - set(obj)
    if missing:
        raise InputError(f"missing fields {sorted(missing)}")
    n, d = _int(obj["n"], "n"), _int(obj["d"], "d")
    if obj["convention"] not in CONVENTIONS:
        raise InputError(f"convention must be one of {CONVENTIONS}")
    if not isinstance(obj["coeffs"], list):
        raise InputError("coeffs must be a list")
    seen = set()
    coeffs = []
    for k, c in enumerate(obj["coeffs"]):
        if not isinstance(c, dict):
            raise InputError(f"coeffs[{k}] must be an object")
        if set(c) - _COEFF_KEYS:
            raise InputError(f"coeffs[{k}] has unknown fields {sorted(set(c) - _COEFF_KEYS)}")
        if "j" not in c or "re" not in c:
            raise InputError(f"coeffs[{k}] needs j and re")
        if not isinstance(c["j"], list):
            raise InvalidIndex(f"coeffs[{k}].j must be a list")
        j = tuple(_int(v, f"coeffs[{k}].j entry") for v in c["j"])
        if j in seen:
            raise InvalidIndex(f"duplicate index {list(j)}")
        seen.add(j)
        coeffs.append((j, _real(c["re"], f"coeffs[{k}].re"), _real(c.get("im", 0.0), f"coeffs[{k}].im")))
    tf = TensorFile(n, d, obj["convention"], coeffs)
    tf.tensor()  # validates shapes and indices
    return tf


def _num(x: float) -> str:
    # shortest repr that reads back to the same double (at most 17 significant digits)
    return "0" if x == 0 else repr(float(x))


def write_tensor_file(tf: TensorFile) -> str:
    rows = [f'    {{"j": {list(j)}, "re": {_num(re)}, "im": {_num(im)}}}' for j, re, im in tf.coeffs]
    body = ",\n".join(rows)
    return (f'{{\n  "n": {tf.n},\n  "d": {tf.d},\n  "convention": "{tf.convention}",\n'
            f'  "coeffs": [\n{body}\n  ]\n}}\n')


def read_tensor(path: str) -> tc.SymTensor:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    return parse_tensor_file(text).tensor()


def parse_edge_list(text: str, vertices: int | None = None) -> np.ndarray:
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise InvalidGraph(f"line {lineno}: expected two positive integers, got {line!r}")
        i, j = int(parts[0]), int(parts[1])
        if i < 1 or j < 1:
            raise InvalidGraph(f"line {lineno}: vertices are numbered from 1")
        if i == j:
            raise InvalidGraph(f"line {lineno}: self-loop at vertex {i}")
        edges.append((i - 1, j - 1))
    if not edges:
        raise InvalidGraph("edge list is empty")
    n = max(max(e) for e in edges) + 1
    if vertices is not None:
        if vertices < n:
            raise InvalidGraph(f"--vertices {vertices} is smaller than the largest vertex {n}")
        n = vertices
    A = np.zeros((n, n), dtype=int)
    for i, j in edges:
        A[i, j] = A[j, i] = 1
    return A


def clique_number(A: np.ndarray) -> int:
    """Exhaustive search; fine for the small graphs this tool is meant for."""
    n = len(A)
    best = 1
    for k in range(2, n + 1):
        if any(all(A[i, j] for i, j in combinations(c, 2)) for c in combinations(range(n), k)):
            best = k
        else:
            break
    return best


# ---------------------------------------------------------------- JSON helpers


def _jsonable(v: Any) -> Any:
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": _jsonable(float(v.real)), "im": _jsonable(float(v.imag))}
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if v is None or isinstance(v, str):
        return v
    return str(v)


def _emit(obj: dict, out) -> None:
    out.write(json.dumps(_jsonable(obj), sort_keys=True) + "\n")


def _norm_report(S: tc.SymTensor, args, field: str, method: str) -> tuple[dict, int]:
    opts = NormOptions(seed=args.seed, tol=args.tol, threads=args.threads)
    t0 = time.perf_counter()
    out: dict[str, Any] = {"digest": S.digest(), "n": S.n, "d": S.d, "field": field}
    try:
        rep = spectral_norm(S, field, method, opts, delta=args.delta)
    except SolverStall as e:
        out.update(error=str(e), error_class=type(e).__name__, wall_time=time.perf_counter() - t0,
                   diagnostics={"partial": _partial(e.partial)})
        return out, EXIT_SOLVER
    except InputError:
        raise
    except SymNormError as e:
        out.update(error=str(e), error_class=type(e).__name__, wall_time=time.perf_counter() - t0,
                   diagnostics={})
        return out, EXIT_SOLVER
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        m = measures(rep.value, tc.hs_norm(S))
    diag = dict(rep.diagnostics)
    if caught:
        diag["warnings"] = [str(w.message) for w in caught]
    out.update(method=rep.method, value=rep.value, witness=rep.witness, eta=m.eta, geo_distance=m.geo_distance,
               lower_bound_only=rep.lower_bound_only, diagnostics=diag, wall_time=time.perf_counter() - t0)
    return out, EXIT_GAP if diag.get("verdict") == "GAP" else EXIT_OK


def _partial(p) -> Any:
    if p is None:
        return None
    if hasattr(p, "roots"):
        return {"roots": [r.value for r in p.roots], "residuals": [r.residual for r in p.roots]}
    return str(p)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.4f}"
    return str(v)


def _print_table(rows: Sequence[tuple[str, Any]], out) -> None:
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        out.write(f"{k.ljust(width)}  {_fmt(v)}\n")


def _print_norm(rep: dict, out) -> None:
    if "error" in rep:
        _print_table([("digest", rep["digest"]), ("error", rep["error"])], out)
        return
    diag = rep["diagnostics"]
    rows = [("digest", rep["digest"]), ("field", rep["field"]), ("method", rep["method"]),
            ("norm", rep["value"]), ("eta", rep["eta"])]
    if rep["geo_distance"] is not None:
        rows.append(("distance", rep["geo_distance"]))
    if "oracle" in diag:
        rows += [("oracle lower bound", diag["oracle"]["lower_bound"]), ("verdict", diag["verdict"])]
    if rep["lower_bound_only"]:
        rows.append(("note", "tracking unreliable; value is a lower bound"))
    rows.append(("time (s)", f"{rep['wall_time']:.3f}"))
    _print_table(rows, out)


# ---------------------------------------------------------------- subcommands


def cmd_norm(args, out) -> int:
    S = read_tensor(args.file)
    rep, code = _norm_report(S, args, args.field, args.method)
    _emit(rep, out) if args.json else _print_norm(rep, out)
    return code


def cmd_entangle(args, out) -> int:
    S = read_tensor(args.file)
    rep, code = _norm_report(S, args, "complex", args.method)
    if "error" not in rep and tc.hs_norm(S) and abs(tc.hs_norm(S) - 1) > 1e-9:
        rep["diagnostics"]["normalized_eta"] = measures(rep["value"] / tc.hs_norm(S)).eta
    _emit(rep, out) if args.json else _print_norm(rep, out)
    return code


def cmd_dicke(args, out) -> int:
    d, n = args.d, args.n
    if args.index:
        j = tuple(args.index)
        if len(j) != n or sum(j) != d or min(j) < 0:
            raise InvalidIndex(f"index {list(j)} is not in J({d},{n})")
        value = dicke_norm(j)
    else:
        j, value = most_entangled_dicke(d, n)
    m = measures(value)
    res = {"d": d, "n": n, "index": list(j), "norm": value, "eta": m.eta, "geo_distance": m.geo_distance}
    if not args.index:
        lo, hi = eta_sym_bounds(d, n)
        res["eta_bounds"] = [lo, hi]
    if args.json:
        _emit(res, out)
    else:
        rows = [("index", tuple(j)), ("norm", value), ("eta", m.eta), ("distance", m.geo_distance)]
        if "eta_bounds" in res:
            rows.append(("eta bounds", f"[{res['eta_bounds'][0]:.4f}, {res['eta_bounds'][1]:.4f}]"))
        _print_table(rows, out)
    return EXIT_OK


def cmd_graph(args, out) -> int:
    try:
        text = sys.stdin.read() if args.edges == "-" else open(args.edges, encoding="utf-8").read()
    except OSError as e:
        raise InputError(f"cannot read {args.edges}: {e.strerror}") from None
    A = parse_edge_list(text, args.vertices)
    S = tc.graph_quartic(A)
    rep, code = _norm_report(S, args, "complex", "auto")
    if "error" not in rep:
        rep["kappa"] = int(round(1 / (1 - rep["value"])))
    rep["vertices"] = int(len(A))
    rep["edges"] = int(A.sum() // 2)
    if args.json:
        _emit(rep, out)
    else:
        _print_norm(rep, out)
        if "kappa" in rep:
            _print_table([("clique number", rep["kappa"])], out)
    return code


def cmd_majorana(args, out) -> int:
    S = read_tensor(args.file)
    if S.n != 2:
        raise UsageError(f"Majorana roots need n=2, got n={S.n}")
    roots = qubit.majorana_roots(qubit.build(qubit.coeffs_of(S)))
    res = []
    for z, m in roots:
        if np.isinf(abs(z)):
            res.append({"infinity": True, "multiplicity": m})
        else:
            res.append({"re": z.real, "im": z.imag, "multiplicity": m})
    if args.json:
        _emit({"digest": S.digest(), "d": S.d, "roots": res}, out)
    else:
        for r in res:
            where = "inf" if r.get("infinity") else f"{r['re']:+.6f} {r['im']:+.6f}i"
            out.write(f"{where}  x{r['multiplicity']}\n")
    return EXIT_OK


def round4(v: float) -> str:
    """Four decimals with ties to even."""
    return str(Decimal(repr(float(v))).quantize(Decimal("0.0001"), rounding=ROUND_HALF_EVEN))


TABLES = ("examples", "table1", "table2", "table3", "table4", "table5", "table6", "table7")
T_LABELS = ("1/5", "1/4", "1/3", "1/2")


def table_rows(name: str, opts: NormOptions | None = None) -> list[list[str]]:
    """Header plus data rows for a named table; every cell is a string."""
    opts = opts or NormOptions()
    if name in catalog.FE_TABLES:
        base, _ = catalog.FE_TABLES[name]
        rows = [["omega"] + [f"t={t}" for t in T_LABELS]]
        for label, w in catalog.OMEGA_GRID:
            vals = [spectral_norm(catalog.f_e(base, t * w), check=False).value for t in catalog.T_GRID]
            rows.append([label] + [round4(v) for v in vals])
        return rows
    if name == "table4":
        rows = [["a", "b", "real_fixed_points", "complex_fixed_points", "real_norm", "complex_norm"]]
        for la, lb, a, b, *_ in catalog.QUTRIT_ROWS:
            S = catalog.qutrit(a, b)
            nreal, ncomplex = fixedpoint.fixed_point_counts(S, opts)
            c = spectral_norm(S, "complex", opts=opts, check=False).value
            r = round4(spectral_norm(S, "real", opts=opts, check=False).value) if S.is_real else ""
            rows.append([la, lb, str(nreal), str(ncomplex), r, round4(c)])
        return rows
    if name == "table5":
        rows = [["a", "b", "norm"]]
        for la, lb, a, b, _ in catalog.QUQUADRIT_ROWS:
            rows.append([la, lb, round4(spectral_norm(catalog.ququadrit(a, b), opts=opts, check=False).value)])
        return rows
    if name == "examples":
        rows = [["example", "complex_norm", "real_norm"]]
        for key, S in catalog.EXAMPLES.items():
            c = spectral_norm(S, "complex", check=False).value
            r = spectral_norm(S, "real", check=False).value if S.is_real else None
            rows.append([key, round4(c), "" if r is None else round4(r)])
        return rows
    raise UsageError(f"unknown table {name!r}; choose from {', '.join(TABLES)}")


def _csv(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    for r in rows:
        buf.write(",".join(f'"{c}"' if "," in c else c for c in r) + "\n")
    return buf.getvalue()


def cmd_table(args, out) -> int:
    text = _csv(table_rows(args.name, NormOptions(seed=args.seed, threads=args.threads)))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def selfcheck_results() -> list[tuple[str, bool, str]]:
    res = []

    def check(name, got, want, tol):
        res.append((name, abs(got - want) <= tol, f"got {got:.6f}, want {want:.6f}"))

    ex1 = catalog.EXAMPLES["ex1"]
    check("qubit complex norm", spectral_norm(ex1, "complex").value, 0.7027, 5e-4)
    check("qubit real norm", spectral_norm(ex1, "real").value, 0.6205, 5e-4)
    check("exceptional two-root form", spectral_norm(catalog.EXAMPLES["ex2"]).value, math.sqrt(0.5), 1e-6)
    check("dicke closed form", spectral_norm(tc.dicke((2, 1, 1))).value, dicke_norm((2, 1, 1)), 1e-6)
    tri = tc.graph_quartic(np.ones((3, 3), dtype=int) - np.eye(3, dtype=int))
    check("triangle quartic", spectral_norm(tri).value, 2 / 3, 1e-5)
    S = catalog.qutrit(1 / 3, 2.0)
    check("qutrit via homotopy", spectral_norm(S, method="homotopy").value, 0.5774, 5e-4)
    return res


def cmd_selfcheck(args, out) -> int:
    res = selfcheck_results()
    for name, ok, detail in res:
        out.write(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})\n")
    return EXIT_OK if all(ok for _, ok, _ in res) else EXIT_CHECK_FAILED


# ---------------------------------------------------------------- argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", choices=("auto", "univariate", "homotopy"), default="auto")
    p.add_argument("--tol", type=float, default=1e-10, help="residual tolerance for accepted solutions")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None, help="overridden by SYMNORM_THREADS")
    p.add_argument("--delta", type=float, default=1e-3, help="relative error budget for exceptional binary forms")
    p.add_argument("--json", action="store_true", help="emit one JSON object")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="symnorm", description="Spectral norms and entanglement of symmetric tensors.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("norm", help="spectral norm of a tensor file")
    q.add_argument("file")
    q.add_argument("--field", choices=("complex", "real"), default="complex")
    _solver_flags(q)
    q.set_defaults(func=cmd_norm)

    q = sub.add_parser("entangle", help="geometric measure of entanglement of a tensor file")
    q.add_argument("file")
    _solver_flags(q)
    q.set_defaults(func=cmd_entangle)

    q = sub.add_parser("dicke", help="Dicke-state norms; the most entangled one unless --index is given")
    q.add_argument("d", type=int)
    q.add_argument("n", type=int)
    q.add_argument("--index", type=int, nargs="+")
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_dicke)

    q = sub.add_parser("graph", help="norm of the clique quartic of an edge list")
    q.add_argument("edges", help="file with one 'i j' pair per line (1-indexed), or - for stdin")
    q.add_argument("--vertices", type=int, default=None, help="total vertex count, for isolated vertices")
    _solver_flags(q)
    q.set_defaults(func=cmd_graph)

    q = sub.add_parser("majorana", help="Majorana roots of a binary tensor")
    q.add_argument("file")
    q.add_argument("--json", action="store_true")
    q.set_defaults(func=cmd_majorana)

    q = sub.add_parser("table", help="regenerate a reference table as CSV")
    q.add_argument("name", choices=TABLES)
    q.add_argument("--out", default=None)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--threads", type=int, default=None)
    q.set_defaults(func=cmd_table)

    q = sub.add_parser("selfcheck", help="quick end-to-end sanity checks")
    q.set_defaults(func=cmd_selfcheck)
    return p


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except InputError as e:
        err.write(f"symnorm: error: {e}\n")
        return EXIT_INPUT
    except SymNormError as e:
        err.write(f"symnorm: solver failure: {e}\n")
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
