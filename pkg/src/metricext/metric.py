"""Distance tables, real functions, properness witnesses and the oracles on them.

A ``MetricTable`` is a distance function on a ``Space`` plus a flag saying
which axioms it claims. A ``ProperWitness`` certifies properness of a table
on a lazy space: ``d(p, x) >= beta(k)`` for every point ``x`` of block ``k``,
with ``p`` the space's basepoint and ``beta`` nondecreasing and unbounded.
Ball and nearest-point queries use the witness to know when to stop scanning.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Callable, Iterable

from ._rational import Q
from .errors import EmptySubset, MissingWitness, NotUnbounded, ScanLimitError
from .space import Space, Subset, subspace_of
from .valueset import HalfLine, ValueSet, unbounded_sequence

MAX_SCAN_BLOCKS = 200_000


class Flag(enum.Enum):
    PSEUDO = "pseudo"
    PSEUDO_ULTRAMETRIC = "pseudo-ultrametric"
    METRIC = "metric"
    ULTRAMETRIC = "ultrametric"

    @property
    def positive(self) -> bool:
        return self in (Flag.METRIC, Flag.ULTRAMETRIC)

    @property
    def strong(self) -> bool:
        return self in (Flag.PSEUDO_ULTRAMETRIC, Flag.ULTRAMETRIC)

    @classmethod
    def of(cls, positive: bool, strong: bool) -> Flag:
        if strong:
            return cls.ULTRAMETRIC if positive else cls.PSEUDO_ULTRAMETRIC
        return cls.METRIC if positive else cls.PSEUDO

    @classmethod
    def parse(cls, value) -> Flag:
        if isinstance(value, Flag):
            return value
        aliases = {"pseudo-metric": "pseudo", "pseudometric": "pseudo"}
        return cls(aliases.get(value, value))


@dataclass(frozen=True)
class ProperWitness:
    """Nondecreasing unbounded tail lower bound ``beta(k)`` indexed by block."""

    bound: Callable[[int], Fraction]
    rule: str = ""
    trivial: bool = False
    _memo: dict = field(default_factory=dict, compare=False, repr=False)

    def __call__(self, k: int) -> Fraction:
        try:
            return self._memo[k]
        except KeyError:
            v = self._memo[k] = Q(self.bound(k))
            return v

    @classmethod
    def zero(cls) -> ProperWitness:
        return cls(lambda k: Fraction(0), "0", trivial=True)

    @classmethod
    def linear(cls, step=1, offset=0) -> ProperWitness:
        step, offset = Q(step), Q(offset)
        if step <= 0:
            raise NotUnbounded("a linear witness needs a positive step")
        return cls(lambda k: step * k + offset, f"{step}*k + {offset}")

    def table(self, depth: int) -> list[Fraction]:
        return [self(k) for k in range(depth)]


def witness_max(*ws: ProperWitness | None) -> ProperWitness | None:
    ws = [w for w in ws if w is not None]
    if not ws:
        return None
    if len(ws) == 1:
        return ws[0]
    live = [w for w in ws if not w.trivial] or ws[:1]
    if len(live) == 1:
        return live[0]
    return ProperWitness(lambda k: max(w(k) for w in live), "max(" + ", ".join(w.rule for w in live) + ")")


class MetricTable:
    """Exact symmetric distance data on a space.

    ``dist`` is any callable; results are memoized. The flag records what the
    table claims, which ``verify_axioms`` can check independently.
    """

    def __init__(self, space: Space, dist: Callable, flag=Flag.METRIC, *,
                 valueset: ValueSet | None = None, witness: ProperWitness | None = None,
                 name: str = ""):
        self.space = space
        self._dist = dist
        self.flag = Flag.parse(flag)
        self.valueset = valueset
        self.witness = witness
        self.name = name
        self._memo: dict = {}

    @classmethod
    def from_matrix(cls, space: Space, matrix, flag=Flag.METRIC, **kw) -> MetricTable:
        pts = space.points()
        n = len(pts)
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ValueError(f"matrix must be {n}x{n}")
        pos = {x: i for i, x in enumerate(pts)}
        rows = [[Q(v) for v in row] for row in matrix]
        table = cls(space, lambda x, y: rows[pos[x]][pos[y]], flag, **kw)
        if space.is_finite and "witness" not in kw:
            table.witness = ProperWitness.zero()
        return table

    @classmethod
    def from_function(cls, space: Space, fn: Callable, flag=Flag.METRIC, **kw) -> MetricTable:
        return cls(space, lambda x, y: Q(fn(x, y)), flag, **kw)

    def __call__(self, x, y) -> Fraction:
        key = (x, y)
        try:
            return self._memo[key]
        except KeyError:
            v = self._memo[key] = self._dist(x, y)
            return v
        except TypeError:
            return self._dist(x, y)

    @property
    def is_finite(self) -> bool:
        return self.space.is_finite

    def points(self, depth: int | None = None) -> list:
        return self.space.points(depth)

    def matrix(self, points=None) -> list[list[Fraction]]:
        pts = self.points() if points is None else list(points)
        return [[self(x, y) for y in pts] for x in pts]

    def with_(self, **changes) -> MetricTable:
        kw = dict(flag=self.flag, valueset=self.valueset, witness=self.witness, name=self.name)
        kw.update(changes)
        out = MetricTable(self.space, self._dist, **kw)
        out._memo = self._memo
        return out

    def restrict(self, subset: Subset) -> MetricTable:
        """Restriction to ``subset``; the witness is re-based at the subspace basepoint."""
        sub = subset.as_space()
        if subset.space is not self.space and subspace_of(self.space) is None:
            raise ValueError("subset does not live in this table's space")
        witness = self.witness
        if witness is not None and not witness.trivial:
            shift = self(self.space.basepoint, sub.basepoint)
            w0 = witness
            witness = ProperWitness(lambda k: max(Fraction(0), w0(k) - shift), f"{w0.rule} - {shift}")
        out = MetricTable(sub, self._dist, self.flag, valueset=self.valueset,
                          witness=witness, name=self.name)
        out._memo = self._memo
        return out

    def __repr__(self):
        return f"MetricTable({self.name or '?'}, {self.flag.value}, on {self.space!r})"


class RealFunction:
    """A total function on a space with an optional properness witness.

    With a witness, ``level(f(x)) >= beta(k)`` for every ``x`` in block ``k``;
    ``level`` is the identity for real values and the block index of the
    value when ``target`` is a Space.
    """

    def __init__(self, space: Space, rule, *, witness: ProperWitness | None = None,
                 target: Space | ValueSet | None = None, name: str = ""):
        self.space = space
        if isinstance(rule, dict):
            table = {k: (v if isinstance(target, Space) else Q(v)) for k, v in rule.items()}
            rule = table.__getitem__
            if space.is_finite and witness is None:
                witness = ProperWitness.zero()
        self._rule = rule
        self.witness = witness
        self.target = target
        self.name = name
        self._memo: dict = {}

    def __call__(self, x):
        try:
            return self._memo[x]
        except KeyError:
            v = self._memo[x] = self._rule(x)
            return v

    def level(self, value) -> Fraction:
        if isinstance(self.target, Space):
            return Fraction(self.target.block_of(value))
        return Q(value)

    def values(self, depth: int | None = None) -> dict:
        return {x: self(x) for x in self.space.points(depth)}

    def __repr__(self):
        return f"RealFunction({self.name or '?'} on {self.space!r})"


def proper_function_into(X: Space, S: ValueSet) -> RealFunction:
    """The proper function sending block ``k`` to the k-th term of an unbounded sequence in S."""
    if not S.unbounded:
        raise NotUnbounded(f"{S} is bounded")
    if X.is_finite and X.n_blocks == 1 and isinstance(S, HalfLine):
        return RealFunction(X, lambda x: Fraction(0), witness=ProperWitness.zero(), target=S,
                            name="const 0")
    a = unbounded_sequence(S)
    return RealFunction(X, lambda x: a(X.block_of(x)),
                        witness=ProperWitness(a, f"a_k in {S}"), target=S, name=f"blocks->{S}")


# --- oracles -----------------------------------------------------------------


@dataclass
class Report:
    ok: bool
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return str(v)
            if isinstance(v, (list, tuple)):
                return [enc(u) for u in v]
            if isinstance(v, dict):
                return {str(k): enc(u) for k, u in v.items()}
            if isinstance(v, (str, int, bool)) or v is None:
                return v
            return repr(v)

        return {"ok": self.ok, "violations": enc(self.violations), "details": enc(self.details)}


def _integer_matrix(rows):
    """Scale a rational matrix by the lcm of its denominators; comparisons stay exact."""
    den = reduce(lcm, (v.denominator for row in rows for v in row), 1)
    return [[v.numerator * (den // v.denominator) for v in row] for row in rows]


def verify_axioms(M: MetricTable, claim=None, depth: int | None = None,
                  limit: int | None = None) -> Report:
    """Exhaustive check of every pair and triple against the claimed axioms.

    Lazy tables are checked on the first ``depth`` blocks. Violations are
    tuples ``(kind, points)``; triangle violations list the path ``(x, z, y)``.
    """
    claim = Flag.parse(claim) if claim is not None else M.flag
    pts = M.points(depth)
    n = len(pts)
    d = _integer_matrix(M.matrix(pts))
    bad = []

    def add(kind, *idx):
        bad.append((kind, tuple(pts[i] for i in idx)))

    for i in range(n):
        if d[i][i] != 0:
            add("diagonal", i)
        for j in range(i + 1, n):
            if d[i][j] < 0 or d[j][i] < 0:
                add("negative", i, j)
            if d[i][j] != d[j][i]:
                add("symmetry", i, j)
            if claim.positive and d[i][j] <= 0:
                add("positivity", i, j)
    for i in range(n):
        di = d[i]
        for j in range(i + 1, n):
            dij = di[j]
            for k in range(n):
                if k == i or k == j:
                    continue
                if claim.strong:
                    if dij > max(di[k], d[k][j]):
                        add("strong-triangle", i, k, j)
                elif dij > di[k] + d[k][j]:
                    add("triangle", i, k, j)
                if limit is not None and len(bad) >= limit:
                    return Report(False, bad, {"claim": claim.value, "points": n, "truncated": True})
    return Report(not bad, bad, {"claim": claim.value, "points": n})


def _require_witness(M: MetricTable):
    if M.is_finite:
        return M.witness or ProperWitness.zero()
    if M.witness is None:
        raise MissingWitness(f"{M!r} lives on a lazy space and carries no properness witness")
    return M.witness


def _scan_blocks(space: Space, within: Subset | None, stop: Callable[[int], bool]):
    """Yield (k, block) until ``stop(k)`` or the space runs out of blocks."""
    src = within if within is not None else space
    for k in src.block_range():
        if stop(k):
            return
        if k > MAX_SCAN_BLOCKS:
            raise ScanLimitError("scan passed the safety cap; the witness does not grow")
        yield k, src.block(k)


def ball(M: MetricTable, q, r, *, open: bool = False, within: Subset | None = None) -> list:
    """Closed (or open) ball ``{x : M(q, x) <= r}``, exact and in enumeration order.

    On lazy spaces the scan stops at the first block ``k`` with
    ``beta(k) > M(p, q) + r``: beyond it ``M(q, x) >= M(p, x) - M(p, q) > r``.
    """
    r = Q(r)
    W = _require_witness(M)
    cutoff = M(M.space.basepoint, q) + r
    inside = (lambda v: v < r) if open else (lambda v: v <= r)
    out = []
    for _, block in _scan_blocks(M.space, within, lambda k: W(k) > cutoff):
        out.extend(x for x in block if inside(M(q, x)))
    return out


def ball_blocks_scanned(M: MetricTable, q, r) -> int:
    """Number of blocks the witness-driven ball scan inspects."""
    W = _require_witness(M)
    cutoff = M(M.space.basepoint, q) + Q(r)
    n = 0
    for _ in _scan_blocks(M.space, None, lambda k: W(k) > cutoff):
        n += 1
    return n


def prefix_ball(M: MetricTable, q, r, depth: int, *, within: Subset | None = None) -> list:
    """Brute-force closed ball over the first ``depth`` blocks (no witness used)."""
    r = Q(r)
    src = within if within is not None else M.space
    return [x for k in range(depth) for x in src.block(k) if M(q, x) <= r]


def nearest(M: MetricTable, x, A: Subset):
    """``(a, M(x, a))`` minimizing distance over A; ties go to the earliest point."""
    if A.is_empty:
        raise EmptySubset("distance to the empty set is undefined")
    if A.is_finite:
        best, best_v = None, None
        for a in A.iter_members():
            v = M(x, a)
            if best_v is None or v < best_v:
                best, best_v = a, v
                if v == 0:
                    break
        return best, best_v
    W = _require_witness(M)
    dpx = M(M.space.basepoint, x)
    best, best_v = None, None
    # d(x, a) >= d(p, a) - d(p, x) >= beta(k) - d(p, x)
    stop = lambda k: best_v is not None and W(k) - dpx >= best_v
    for _, block in _scan_blocks(M.space, A, stop):
        for a in block:
            v = M(x, a)
            if best_v is None or v < best_v:
                best, best_v = a, v
        if best_v == 0:
            break
    return best, best_v


def dist_to_set(M: MetricTable, x, A: Subset) -> Fraction:
    return nearest(M, x, A)[1]


def certify_proper(X: Space, M: MetricTable, W: ProperWitness | None = None, depth: int = 64) -> Report:
    """Spot-check ``M(p, x) >= beta(block(x))`` on the first ``depth`` blocks."""
    W = W if W is not None else (M.witness or ProperWitness.zero())
    p = X.basepoint
    bad = []
    prev = None
    for k in range(depth if not X.is_finite else min(depth, X.n_blocks)):
        b = W(k)
        if prev is not None and b < prev:
            bad.append(("decreasing", k, b, prev))
        prev = b
        for x in X.block(k):
            v = M(p, x)
            if v < b:
                bad.append(("bound", k, x, v, b))
    return Report(not bad, bad, {"depth": depth, "rule": W.rule})


def certify_function(f: RealFunction, depth: int = 64) -> Report:
    """Spot-check ``level(f(x)) >= beta(block(x))`` on the first ``depth`` blocks."""
    W = f.witness or ProperWitness.zero()
    X = f.space
    bad = []
    prev = None
    for k in range(depth if not X.is_finite else min(depth, X.n_blocks)):
        b = W(k)
        if prev is not None and b < prev:
            bad.append(("decreasing", k, b, prev))
        prev = b
        for x in X.block(k):
            v = f.level(f(x))
            if v < b:
                bad.append(("bound", k, x, v, b))
    return Report(not bad, bad, {"depth": depth, "rule": W.rule})


def preimage(f: RealFunction, bound, *, depth_cap: int | None = None) -> list:
    """All ``x`` with ``level(f(x)) <= bound``, found by a witness-driven scan."""
    bound = Q(bound)
    W = f.witness
    X = f.space
    if W is None and not X.is_finite:
        raise MissingWitness("preimages on a lazy space need a witness")
    W = W or ProperWitness.zero()
    stop = (lambda k: False) if X.is_finite else (lambda k: W(k) > bound)
    out = []
    for k, block in _scan_blocks(X, None, stop):
        if depth_cap is not None and k >= depth_cap:
            break
        out.extend(x for x in block if f.level(f(x)) <= bound)
    return out


def same_points(a: Iterable, b: Iterable) -> bool:
    return set(a) == set(b)
