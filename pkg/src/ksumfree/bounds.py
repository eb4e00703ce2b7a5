"""Closed-form values and bounds for k-sum free densities, checked against exact solves.

All comparisons use :class:`fractions.Fraction`; nothing here is decided in
floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .constructions import halfplane_2d, k2_ddim_formula, oned_tail
from .errors import UsageError
from .lattice import Instance, min_max_coord
from .solver import DEFAULT_BUDGET, SolveResult, solve_bb


def limit_density(k: int) -> Fraction:
    """Limit of the maximum 2-d density, ``(k^2 - 2) / k^2``."""
    if k < 2:
        raise UsageError(f"k must be at least 2, got {k}")
    return Fraction(k * k - 2, k * k)


def oned_bounds(k: int, n: int) -> tuple[Fraction, Fraction]:
    """``(1 - 1/k, 1 - 1/k + 1/n)``, the sandwich for the 1-d density."""
    if k < 2 or n < 1:
        raise UsageError(f"need k >= 2 and n >= 1, got k={k}, n={n}")
    lower = 1 - Fraction(1, k)
    return lower, lower + Fraction(1, n)


def k2_exact_2d(n1: int, n2: int) -> int:
    """Maximum size of a 2-sum (n1, n2)-free subset of [n1] x [n2]."""
    if n1 < 1 or n2 < 1:
        raise UsageError(f"extents must be positive, got ({n1}, {n2})")
    return (n1 * n2 + n1 + n2 - 1) // 2


def k2_exact_ddim(n: int, d: int) -> int:
    """Maximum size of a 2-sum (n, ..., n)-free subset of [n]^d."""
    if not 1 <= d <= 3:
        raise UsageError(f"d must be 1, 2 or 3, got {d}")
    if n < 1:
        raise UsageError(f"n must be positive, got {n}")
    return k2_ddim_formula(n, d)


@dataclass(frozen=True)
class LatticeTriangle:
    a: tuple[int, int]
    b: tuple[int, int]
    c: tuple[int, int]

    @property
    def doubled_area(self) -> int:
        (ax, ay), (bx, by), (cx, cy) = self.a, self.b, self.c
        return abs((bx - ax) * (cy - ay) - (cx - ax) * (by - ay))

    @property
    def area(self) -> Fraction:
        return Fraction(self.doubled_area, 2)

    @property
    def degenerate(self) -> bool:
        return self.doubled_area == 0

    def boundary_points(self) -> int:
        verts = (self.a, self.b, self.c)
        return sum(
            math.gcd(q[0] - p[0], q[1] - p[1]) for p, q in zip(verts, verts[1:] + verts[:1])
        )


def _require_proper(t: LatticeTriangle) -> None:
    if t.degenerate:
        raise UsageError(f"degenerate triangle {t}")


def pick_interior(t: LatticeTriangle) -> int:
    """Interior lattice points by Pick's theorem, ``A - B/2 + 1``."""
    _require_proper(t)
    twice = t.doubled_area - t.boundary_points() + 2
    assert twice % 2 == 0
    return twice // 2


def triangle_interior_enumerate(t: LatticeTriangle) -> int:
    """Interior lattice points by scanning the bounding box."""
    _require_proper(t)
    xs = [p[0] for p in (t.a, t.b, t.c)]
    ys = [p[1] for p in (t.a, t.b, t.c)]

    def side(p, q, x, y):
        return (q[0] - p[0]) * (y - p[1]) - (q[1] - p[1]) * (x - p[0])

    count = 0
    for x in range(min(xs) + 1, max(xs)):
        for y in range(min(ys) + 1, max(ys)):
            s1 = side(t.a, t.b, x, y)
            s2 = side(t.b, t.c, x, y)
            s3 = side(t.c, t.a, x, y)
            if (s1 > 0 and s2 > 0 and s3 > 0) or (s1 < 0 and s2 < 0 and s3 < 0):
                count += 1
    return count


@dataclass(frozen=True)
class BoundCheck:
    name: str
    satisfied: bool
    slack: Fraction


@dataclass
class DensityReport:
    instance: Instance
    mu: int
    nu: Fraction
    # None when no limit is known (d = 3)
    limit_density: Optional[Fraction]
    gap: Optional[Fraction]
    bound_checks: list[BoundCheck] = field(default_factory=list)
    empirical_constants: dict[str, Fraction] = field(default_factory=dict)
    exact: bool = True
    lower: int = 0
    upper: int = 0

    @property
    def partial(self) -> bool:
        return not self.exact

    def check(self, name: str) -> Optional[BoundCheck]:
        for c in self.bound_checks:
            if c.name == name:
                return c
        return None


def _at_least(name: str, value: Fraction, bound: Fraction) -> BoundCheck:
    return BoundCheck(name, value >= bound, value - bound)


def _equal(name: str, value: int, expected: int) -> BoundCheck:
    return BoundCheck(name, value == expected, Fraction(-abs(value - expected)))


def _dimension_limit(k: int, d: int) -> Optional[Fraction]:
    if d == 1:
        return 1 - Fraction(1, k)
    if d == 2:
        return limit_density(k)
    return None


def verify_instance(inst: Instance, result: SolveResult) -> DensityReport:
    """Compare an exact optimum with every bound that applies to its instance.

    The theory covers the diagonal case b = n; other instances only get
    their density.  For k = 3 in two dimensions the constant hidden in the
    O(1/m(n)) term is recorded as ``(nu - 7/9) * m(n)`` instead of tested.
    A bracketed result yields a partial report with no checks.
    """
    volume = inst.box.volume
    nu = Fraction(result.mu, volume)
    d = inst.box.dim
    limit = _dimension_limit(inst.k, d) if inst.diagonal else None
    report = DensityReport(
        inst, result.mu, nu, limit, None if limit is None else nu - limit,
        exact=result.exact, lower=result.lower, upper=result.upper,
    )
    if not result.exact or not inst.diagonal:
        return report
    k, n = inst.k, inst.box.extent
    checks = report.bound_checks
    if d == 1:
        tail = oned_tail(k, n[0], verify=False)
        checks.append(_at_least("construction", nu, Fraction(tail.size, volume)))
        lo, hi = oned_bounds(k, n[0])
        checks.append(_at_least("oned_lower", nu, lo))
        checks.append(_at_least("oned_upper", hi, nu))
    elif d == 2:
        half = halfplane_2d(k, (n[0], n[1]), verify=False)
        checks.append(_at_least("construction", nu, Fraction(half.size, volume)))
        checks.append(_at_least("limit_lower", nu, limit_density(k)))
        if k == 3:
            m, _ = min_max_coord(n)
            report.empirical_constants["k3_upper"] = (nu - Fraction(7, 9)) * m
    if k == 2:
        if d == 2:
            checks.append(_equal("k2_exact_2d", result.mu, k2_exact_2d(n[0], n[1])))
        if len(set(n)) == 1:
            checks.append(_equal("k2_exact_ddim", result.mu, k2_exact_ddim(n[0], d)))
    return report


def convergence_sweep(
    k: int, sizes: Iterable[int], dim: int = 2, budget: int = DEFAULT_BUDGET
) -> list[DensityReport]:
    """One report per diagonal box ``(n, ..., n)``, ordered by n.

    Vacuous sizes (n < k) are skipped: the full box is free there.
    """
    rows = []
    for n in sorted(set(sizes)):
        if n < k:
            continue
        inst = Instance.square(k, n, dim)
        rows.append(verify_instance(inst, solve_bb(inst, budget=budget)))
    return rows
