"""Exact maximum k-sum b-free sets and counting of free sets.

Every solver works on the forbidden hypergraph: one edge per distinct support
of a solution multiset.  A set is free exactly when it contains no edge, so
the maximum free set is a maximum independent set of that hypergraph.
Points lying in no edge are in every maximal free set; points forming a
singleton edge (``k*x = b``) are in none.  What is left, the *core*, is
where the search happens.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .constructions import best_construction, box_complement_reduction
from .errors import CapacityError, UsageError
from .lattice import Box, Instance, Point, PointSet, iter_solutions, leq

EXHAUSTIVE_LIMIT = 24
COUNT_LIMIT = 20
DEFAULT_BUDGET = 2_000_000


@dataclass
class ForbiddenHypergraph:
    instance: Instance
    # supports as sorted tuples of box indices, deduplicated, in canonical order
    edges: list[tuple[int, ...]]
    adjacency: dict[int, list[int]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.adjacency = {}
        for e_id, e in enumerate(self.edges):
            for v in e:
                self.adjacency.setdefault(v, []).append(e_id)

    @property
    def vertices(self) -> list[int]:
        return sorted(self.adjacency)

    def edge_points(self) -> list[tuple[Point, ...]]:
        box = self.instance.box
        return [tuple(box.point(v) for v in e) for e in self.edges]

    def contains_edge(self, s: PointSet) -> bool:
        return any(all(s.has_index(v) for v in e) for e in self.edges)


def enumerate_forbidden(inst: Instance) -> ForbiddenHypergraph:
    """All supports of solutions to ``a_1 + ... + a_k = b`` inside the box."""
    box = inst.box
    supports = set()
    for summands in iter_solutions(inst.candidates(), inst.target, inst.k):
        supports.add(tuple(sorted({box.index(p) for p in summands})))
    return ForbiddenHypergraph(inst, sorted(supports, key=lambda e: (len(e), e)))


@dataclass
class SolveResult:
    instance: Instance
    mu: int
    witness_set: PointSet
    nodes_explored: int
    method: str
    exact: bool = True
    lower: int = 0
    upper: int = 0

    def __post_init__(self) -> None:
        if self.exact:
            self.lower = self.upper = self.mu


class _Core:
    """The hypergraph restricted to its core, with local bit positions.

    Local positions follow global index order, so comparing sorted local
    tuples compares the corresponding point sets lexicographically.
    """

    def __init__(self, hg: ForbiddenHypergraph) -> None:
        banned = {e[0] for e in hg.edges if len(e) == 1}
        live = [e for e in hg.edges if len(e) > 1 and not banned.intersection(e)]
        # drop edges containing another edge; hg.edges is sorted by size
        minimal: list[frozenset[int]] = []
        for e in live:
            fe = frozenset(e)
            if not any(f <= fe for f in minimal):
                minimal.append(fe)
        self.globals = sorted(set().union(*minimal))
        pos = {v: i for i, v in enumerate(self.globals)}
        self.edges = [sum(1 << pos[v] for v in e) for e in minimal]
        self.size = len(self.globals)
        self.all = (1 << self.size) - 1
        self.banned = banned
        taken = banned | set(self.globals)
        self.isolated = [i for i in range(hg.instance.box.volume) if i not in taken]

    def local_mask(self, s: PointSet) -> int:
        m = 0
        for i, v in enumerate(self.globals):
            if s.has_index(v):
                m |= 1 << i
        return m

    def to_pointset(self, box: Box, local: int) -> PointSet:
        s = PointSet.from_indices(box, self.isolated)
        for i, v in enumerate(self.globals):
            if local >> i & 1:
                s.add_index(v)
        return s

    def is_independent(self, local: int) -> bool:
        return not any(e & local == e for e in self.edges)


class _BranchAndBound:
    """Depth-first include/exclude search over the core hypergraph.

    Nodes are propagated (an edge with one undecided vertex left and the
    rest included forces that vertex out) and bounded by
    ``included + undecided - (greedy packing of disjoint residual edges)``.
    """

    def __init__(self, core: _Core, budget: int) -> None:
        self.core = core
        self.budget = budget
        self.nodes = 0

    def _propagate(self, inc: int, exc: int) -> tuple[Optional[int], list[int]]:
        edges = self.core.edges
        while True:
            changed = False
            residuals = []
            for e in edges:
                if e & exc:
                    continue
                r = e & ~inc
                if not r:
                    return None, []
                if r & (r - 1) == 0:
                    exc |= r
                    changed = True
                else:
                    residuals.append(r)
            if not changed:
                return exc, residuals

    def search(
        self, inc: int, exc: int, best: int, best_mask: Optional[int], *, target: Optional[int] = None
    ) -> tuple[int, Optional[int], bool, int]:
        """Return ``(best, best_mask, complete, upper)``.

        With ``target`` set, stop at the first set of that size and prune
        nodes whose bound is below it; ``best`` is then ignored for pruning.
        """
        all_bits = self.core.all
        # (inc, exc, bound inherited from the parent)
        stack = [(inc, exc, all_bits.bit_count())]
        while stack:
            if self.nodes >= self.budget:
                upper = max([best] + [b for _, _, b in stack])
                return best, best_mask, False, upper
            inc, exc, parent_bound = stack.pop()
            threshold = best if target is None else target - 1
            if parent_bound <= threshold:
                continue
            self.nodes += 1
            exc2, residuals = self._propagate(inc, exc)
            if exc2 is None:
                continue
            exc = exc2
            und = all_bits & ~(inc | exc)
            base = inc.bit_count()
            if not residuals:
                size = base + und.bit_count()
                if target is not None:
                    if size >= target:
                        return size, inc | und, True, size
                elif size > best:
                    best, best_mask = size, inc | und
                continue
            residuals.sort(key=int.bit_count)
            used = 0
            packed = 0
            for r in residuals:
                if not r & used:
                    used |= r
                    packed += 1
            bound = base + und.bit_count() - packed
            if bound <= threshold:
                continue
            r = residuals[0]
            v = r & -r
            stack.append((inc, exc | v, bound))
            stack.append((inc | v, exc, bound))
        return best, best_mask, True, best


def _greedy(core: _Core) -> int:
    mask = 0
    for i in range(core.size):
        trial = mask | 1 << i
        if core.is_independent(trial):
            mask = trial
    return mask


def _canonical(core: _Core, engine: _BranchAndBound, best: int, mask: int) -> int:
    """Refine an optimal core set to the lexicographically smallest optimum."""
    inc = exc = 0
    current = mask
    for i in range(core.size):
        bit = 1 << i
        if current & bit:
            inc |= bit
            continue
        _, found, _, _ = _feasible(engine, inc | bit, exc, best)
        if found is not None:
            inc |= bit
            current = found
        else:
            exc |= bit
    return current


def _feasible(engine: _BranchAndBound, inc: int, exc: int, target: int):
    saved = engine.budget
    engine.budget = float("inf")  # type: ignore[assignment]
    try:
        return engine.search(inc, exc, 0, None, target=target)
    finally:
        engine.budget = saved


def _vacuous(inst: Instance) -> SolveResult:
    full = PointSet.full(inst.box)
    return SolveResult(inst, inst.box.volume, full, 0, "vacuous")


def solve_bb(inst: Instance, budget: int = DEFAULT_BUDGET, canonical: bool = True) -> SolveResult:
    """Exact maximum free set by branch-and-bound on the core hypergraph.

    The incumbent is seeded from the half-plane / tail construction when the
    instance is diagonal, and from a greedy pass otherwise.  If the node
    budget runs out the result is bracketed (``exact=False``).
    """
    if budget < 1:
        raise UsageError("budget must be at least 1")
    if inst.vacuous:
        return _vacuous(inst)
    core = _Core(enumerate_forbidden(inst))
    base = len(core.isolated)
    seed = _greedy(core)
    construction = best_construction(inst)
    if construction is not None:
        from_construction = core.local_mask(construction)
        if core.is_independent(from_construction) and from_construction.bit_count() > seed.bit_count():
            seed = from_construction
    engine = _BranchAndBound(core, budget)
    best, mask, complete, upper = engine.search(0, 0, seed.bit_count(), seed)
    assert mask is not None
    if not complete:
        return SolveResult(
            inst, base + best, core.to_pointset(inst.box, mask), engine.nodes,
            "branch-and-bound", exact=False, lower=base + best, upper=base + upper,
        )
    if canonical:
        mask = _canonical(core, engine, best, mask)
    return SolveResult(inst, base + best, core.to_pointset(inst.box, mask), engine.nodes, "branch-and-bound")


def solve_exhaustive(inst: Instance) -> SolveResult:
    """Exact maximum free set by scanning kept sets in decreasing size.

    Dropping ``r`` core points leaves a free set exactly when the dropped
    points hit every edge, so sizes are tried as ``core - r`` for
    ``r = 0, 1, ...``; at each size every hitting set is generated by
    branching on the first edge not yet hit.  Among the free sets of the
    first feasible size the lexicographically smallest is returned.
    """
    if inst.vacuous:
        return _vacuous(inst)
    core = _Core(enumerate_forbidden(inst))
    if core.size > EXHAUSTIVE_LIMIT:
        raise CapacityError(
            f"exhaustive search limited to {EXHAUSTIVE_LIMIT} free-choice points, "
            f"instance has {core.size}"
        )
    edges = core.edges
    nodes = 0

    def hitting_sets(removed: int, budget_left: int, out: set[int]) -> None:
        nonlocal nodes
        nodes += 1
        for e in edges:
            if not e & removed:
                break
        else:
            out.add(removed)
            return
        if budget_left == 0:
            return
        bits = e
        while bits:
            v = bits & -bits
            bits ^= v
            hitting_sets(removed | v, budget_left - 1, out)

    for r in range(core.size + 1):
        found: set[int] = set()
        hitting_sets(0, r, found)
        kept = [core.all & ~h for h in found if h.bit_count() == r]
        if kept:
            def lex_key(mask: int) -> list[int]:
                return [i for i in range(core.size) if mask >> i & 1]
            mask = min(kept, key=lex_key)
            mu = len(core.isolated) + core.size - r
            return SolveResult(inst, mu, core.to_pointset(inst.box, mask), nodes, "exhaustive")
    raise AssertionError("removing every core point always leaves a free set")


def solve_k2_pairing(b: Point, n: Point, witness: bool = True) -> SolveResult:
    """Closed-form optimum for k = 2 via the involution ``x <-> b - x``.

    Points whose partner leaves the box are kept, one point of every
    2-cycle is kept (the lower index), fixed points ``2x = b`` are dropped.
    The paired points form the sub-box ``max(1, b-n) <= x <= min(n, b-1)``,
    so the optimum is counted without visiting points.  With
    ``witness=False`` the returned witness set is left empty.
    """
    inst = Instance.of(2, b, n)
    box = inst.box
    sides = [max(0, min(ni, bi - 1) - max(1, bi - ni) + 1) for bi, ni in zip(inst.target, box.extent)]
    paired = math.prod(sides)
    fixed = int(paired > 0 and all(bi % 2 == 0 and bi // 2 <= ni for bi, ni in zip(inst.target, box.extent)))
    mu = box.volume - paired + (paired - fixed) // 2
    s = PointSet(box)
    if witness:
        for x in box.points():
            partner = tuple(bi - xi for bi, xi in zip(inst.target, x))
            if partner == x:
                continue
            if partner not in box or x < partner:
                s.add(x)
        assert s.cardinality == mu
    return SolveResult(inst, mu, s, 0, "vacuous" if inst.vacuous else "pairing")


def mu_via_reduction(k: int, b: Point, n: Point, budget: int = DEFAULT_BUDGET) -> SolveResult:
    """``|n| - |b| + mu_{k,b}([b])`` with the inner optimum from ``solve_bb``."""
    b, n = tuple(b), tuple(n)
    if not leq(b, n):
        raise UsageError(f"reduction needs b <= n coordinate-wise, got b={b}, n={n}")
    inner = solve_bb(Instance(k, b, Box(b)), budget=budget)
    outer = Instance(k, b, Box(n))
    report = box_complement_reduction(outer, inner.witness_set, verify=False)
    shift = math.prod(n) - math.prod(b)
    return SolveResult(
        outer, shift + inner.mu, report.set, inner.nodes_explored, "reduction",
        exact=inner.exact, lower=shift + inner.lower, upper=shift + inner.upper,
    )


class _Counter:
    """Backtracking over the non-isolated points with edge-violation pruning."""

    def __init__(self, inst: Instance) -> None:
        if inst.box.volume > COUNT_LIMIT:
            raise CapacityError(
                f"counting limited to boxes of {COUNT_LIMIT} points, got {inst.box.volume}"
            )
        hg = enumerate_forbidden(inst)
        self.verts = hg.vertices
        self.isolated = inst.box.volume - len(self.verts)
        pos = {v: i for i, v in enumerate(self.verts)}
        self.m = len(self.verts)
        self.edges = []
        for e in hg.edges:
            mask = 0
            for v in e:
                mask |= 1 << pos[v]
            self.edges.append(mask)
        # edges grouped by their highest vertex: checked when that vertex is decided
        self.closing: list[list[int]] = [[] for _ in range(self.m)]
        self.touching: list[list[int]] = [[] for _ in range(self.m)]
        for e in self.edges:
            self.closing[e.bit_length() - 1].append(e)
            bits = e
            while bits:
                v = bits & -bits
                bits ^= v
                self.touching[v.bit_length() - 1].append(e)

    def _violates(self, i: int, inc: int) -> bool:
        return any(e & inc == e for e in self.closing[i])

    def count_free(self) -> int:
        m = self.m

        def rec(i: int, inc: int) -> int:
            if i == m:
                return 1
            total = rec(i + 1, inc)
            with_i = inc | 1 << i
            if not self._violates(i, with_i):
                total += rec(i + 1, with_i)
            return total

        return rec(0, 0) << self.isolated

    def _blocked_possible(self, w: int, exc: int) -> bool:
        # some edge through w avoids every other excluded vertex
        others = exc & ~(1 << w)
        return any(not e & others for e in self.touching[w])

    def _blocked(self, w: int, inc: int) -> bool:
        bit = 1 << w
        return any(e & ~bit & ~inc == 0 for e in self.touching[w])

    def count_maximal(self) -> int:
        m = self.m
        full = (1 << m) - 1

        def rec(i: int, inc: int) -> int:
            if i == m:
                exc = full & ~inc
                bits = exc
                while bits:
                    v = bits & -bits
                    bits ^= v
                    if not self._blocked(v.bit_length() - 1, inc):
                        return 0
                return 1
            total = 0
            with_i = inc | 1 << i
            if not self._violates(i, with_i):
                total += rec(i + 1, with_i)
            exc = ((1 << (i + 1)) - 1) & ~inc
            bits = exc
            ok = True
            while bits:
                v = bits & -bits
                bits ^= v
                if not self._blocked_possible(v.bit_length() - 1, exc):
                    ok = False
                    break
            if ok:
                total += rec(i + 1, inc)
            return total

        return rec(0, 0)


def count_free(inst: Instance) -> int:
    """Number of k-sum b-free subsets of the box (the empty set included)."""
    return _Counter(inst).count_free()


def count_maximal_free(inst: Instance) -> int:
    """Number of free subsets with no free proper superset."""
    return _Counter(inst).count_maximal()
