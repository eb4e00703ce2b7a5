"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 capacity or budget exhausted
(bracketed results are still written, with ``exact`` false), 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from . import bounds, constructions, solver
from .emit import emit_csv, emit_json, point_fields, rational_fields
from .errors import CapacityError, UsageError
from .lattice import Instance, PointSet, find_witness, is_free

EXIT_OK, EXIT_USAGE, EXIT_CAPACITY, EXIT_IO = 0, 2, 3, 4

COMMANDS = ("solve", "construct", "check", "sweep", "count", "witness")
METHODS = ("auto", "exhaustive", "bb", "pairing")
CONSTRUCTIONS = ("halfplane", "tail", "odd-or-large", "simplex")


@dataclass
class RunConfig:
    command: str
    k: int = 2
    b: Optional[tuple[int, ...]] = None
    n: Optional[tuple[int, ...]] = None
    n_range: Optional[tuple[int, int]] = None
    dim: int = 2
    method: str = "auto"
    budget: int = solver.DEFAULT_BUDGET
    format: str = "json"
    out: Optional[str] = None
    verify: bool = False
    construction: str = "halfplane"
    points: Optional[list[tuple[int, ...]]] = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.budget < 1:
            raise UsageError("--budget must be at least 1")
        if self.b is not None and self.n is not None and len(self.b) != len(self.n):
            raise UsageError(f"--b and --n differ in dimension: {self.b} vs {self.n}")
        for name, p in (("--b", self.b), ("--n", self.n)):
            if p is not None and not 1 <= len(p) <= 3:
                raise UsageError(f"{name} must have 1 to 3 coordinates")

    def instance(self) -> Instance:
        if self.n is None:
            raise UsageError(f"{self.command} requires --n")
        return Instance.of(self.k, self.b if self.b is not None else self.n, self.n)


def _coords(text: str) -> tuple[int, ...]:
    try:
        p = tuple(int(c) for c in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not 1 <= len(p) <= 3:
        raise argparse.ArgumentTypeError(f"expected 1 to 3 coordinates, got {len(p)}")
    return p


def _range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(c) for c in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected START:END, got {text!r}")
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"empty or non-positive range {text!r}")
    return lo, hi


def _point_list(text: str) -> list[tuple[int, ...]]:
    return [_coords(chunk) for chunk in text.split(";") if chunk.strip()] if text else []


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ksumfree", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--k", type=int, default=2)
    parser.add_argument("--b", type=_coords, help="target point, e.g. 4,4 (default: --n)")
    parser.add_argument("--n", type=_coords, help="box extent, e.g. 4,4")
    parser.add_argument("--n-range", dest="n_range", type=_range, help="START:END for sweeps")
    parser.add_argument("--dim", type=int, choices=(1, 2, 3), default=2, help="sweep dimension")
    parser.add_argument("--method", choices=METHODS, default="auto")
    parser.add_argument("--budget", type=_positive, default=solver.DEFAULT_BUDGET)
    parser.add_argument("--format", choices=("csv", "json"), default="json")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--verify", action="store_true", help="re-check witness sets")
    parser.add_argument("--construction", choices=CONSTRUCTIONS, default="halfplane")
    parser.add_argument("--points", type=_point_list, help="set members, e.g. '1,1;2,2'")
    return parser


def _solve(inst: Instance, method: str, budget: int) -> solver.SolveResult:
    if method == "auto":
        method = "pairing" if inst.k == 2 else "bb"
    if method == "pairing":
        if inst.k != 2:
            raise UsageError("--method pairing requires --k 2")
        return solver.solve_k2_pairing(inst.target, inst.box.extent)
    if method == "exhaustive":
        return solver.solve_exhaustive(inst)
    return solver.solve_bb(inst, budget=budget)


def _members(s: PointSet) -> list[list[int]]:
    return [list(p) for p in s.points()]


class _Doc:
    def __init__(self, columns: list[str]) -> None:
        self.columns = columns
        self.rows: list[dict[str, Any]] = []
        self.extra: dict[str, Any] = {}
        self.exit_code = EXIT_OK


def _cmd_solve(cfg: RunConfig) -> _Doc:
    inst = cfg.instance()
    res = _solve(inst, cfg.method, cfg.budget)
    row = {"k": inst.k, **point_fields("b", inst.target), **point_fields("n", inst.box.extent)}
    row.update(
        mu=res.mu, exact=res.exact, lower=res.lower, upper=res.upper,
        method=res.method, nodes_explored=res.nodes_explored,
    )
    if cfg.verify:
        row["verified"] = is_free(res.witness_set, inst) and res.witness_set.cardinality == res.mu
    doc = _Doc(list(row))
    doc.rows.append(row)
    doc.extra["witness_set"] = _members(res.witness_set)
    if not res.exact:
        doc.exit_code = EXIT_CAPACITY
    return doc


def _cmd_construct(cfg: RunConfig) -> _Doc:
    if cfg.n is None:
        raise UsageError("construct requires --n")
    n = cfg.n
    verify = True if cfg.verify else None
    if cfg.construction == "halfplane":
        if len(n) != 2:
            raise UsageError("halfplane needs a 2-d --n")
        rep = constructions.halfplane_2d(cfg.k, (n[0], n[1]), verify=verify)
    elif cfg.construction == "tail":
        if len(n) != 1:
            raise UsageError("tail needs a 1-d --n")
        rep = constructions.oned_tail(cfg.k, n[0], verify=verify)
    elif cfg.construction == "odd-or-large":
        if len(n) != 1:
            raise UsageError("odd-or-large needs a 1-d --n")
        rep = constructions.oned_odd_or_large(n[0], verify=verify)
    else:
        if len(set(n)) != 1:
            raise UsageError("simplex needs a diagonal --n such as 3,3,3")
        rep = constructions.simplex_k2(n[0], len(n), verify=verify)
    row = {"construction": rep.name, "k": rep.instance.k, **point_fields("n", n)}
    row.update(
        size=rep.size, predicted_size=rep.predicted_size,
        reference_size=rep.reference_size, free=rep.free,
    )
    doc = _Doc(list(row))
    doc.rows.append(row)
    doc.extra["members"] = _members(rep.set)
    return doc


def _density_row(rep: bounds.DensityReport, key: dict[str, Any]) -> dict[str, Any]:
    row = dict(key)
    row["mu"] = rep.mu
    row.update(rational_fields("nu", rep.nu))
    row.update(rational_fields("gap_to_limit", rep.gap))
    row.update(exact=rep.exact, lower=rep.lower, upper=rep.upper)
    return row


def _cmd_check(cfg: RunConfig) -> _Doc:
    inst = cfg.instance()
    res = _solve(inst, cfg.method, cfg.budget)
    rep = bounds.verify_instance(inst, res)
    row = {**point_fields("n", inst.box.extent), "mu": rep.mu, **rational_fields("nu", rep.nu)}
    row.update(k=inst.k, **point_fields("b", inst.target), exact=rep.exact)
    for c in rep.bound_checks:
        row[f"{c.name}_ok"] = c.satisfied
        row.update(rational_fields(f"{c.name}_slack", c.slack))
    for name, value in rep.empirical_constants.items():
        row.update(rational_fields(f"{name}_constant", value))
    doc = _Doc(list(row))
    doc.rows.append(row)
    if not res.exact:
        doc.exit_code = EXIT_CAPACITY
    return doc


SWEEP_COLUMNS = [
    "n", "mu", "nu_num", "nu_den", "gap_to_limit_num", "gap_to_limit_den", "exact", "lower", "upper",
]


def _cmd_sweep(cfg: RunConfig) -> _Doc:
    if cfg.n_range is None:
        raise UsageError("sweep requires --n-range START:END")
    lo, hi = cfg.n_range
    if cfg.k < 2:
        raise UsageError(f"k must be at least 2, got {cfg.k}")
    doc = _Doc(list(SWEEP_COLUMNS))
    for rep in bounds.convergence_sweep(cfg.k, range(lo, hi + 1), cfg.dim, cfg.budget):
        doc.rows.append(_density_row(rep, {"n": rep.instance.box.extent[0]}))
        if not rep.exact:
            doc.exit_code = EXIT_CAPACITY
    return doc


def _cmd_count(cfg: RunConfig) -> _Doc:
    inst = cfg.instance()
    row = {"k": inst.k, **point_fields("b", inst.target), **point_fields("n", inst.box.extent)}
    row["free_sets"] = solver.count_free(inst)
    row["maximal_free_sets"] = solver.count_maximal_free(inst)
    doc = _Doc(list(row))
    doc.rows.append(row)
    return doc


def _cmd_witness(cfg: RunConfig) -> _Doc:
    inst = cfg.instance()
    if cfg.points is None:
        s = PointSet.full(inst.box)
    else:
        s = PointSet(inst.box, cfg.points)
    w = find_witness(s, inst)
    d = inst.box.dim
    doc = _Doc(["summand"] + [f"x{i}" for i in range(1, d + 1)])
    if w is not None:
        for i, p in enumerate(w.summands, start=1):
            doc.rows.append({"summand": i, **point_fields("x", p)})
    doc.extra["free"] = w is None
    doc.extra["witness"] = None if w is None else [list(p) for p in w.summands]
    return doc


_HANDLERS = {
    "solve": _cmd_solve,
    "construct": _cmd_construct,
    "check": _cmd_check,
    "sweep": _cmd_sweep,
    "count": _cmd_count,
    "witness": _cmd_witness,
}


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one command; return the exit code and the rendered document."""
    doc = _HANDLERS[cfg.command](cfg)
    if cfg.format == "csv":
        text = emit_csv(doc.rows, doc.columns)
    else:
        text = emit_json(doc.rows, doc.columns, doc.extra)
    return doc.exit_code, text


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command, k=args.k, b=args.b, n=args.n, n_range=args.n_range,
            dim=args.dim, method=args.method, budget=args.budget, format=args.format,
            out=args.out, verify=args.verify, construction=args.construction, points=args.points,
        )
        code, text = run(cfg)
    except UsageError as exc:
        print(f"ksumfree: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"ksumfree: capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    try:
        if cfg.out is None:
            sys.stdout.write(text)
        else:
            with open(cfg.out, "w", newline="") as fh:
                fh.write(text)
    except OSError as exc:
        print(f"ksumfree: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
