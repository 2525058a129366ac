"""Well-order retractions onto closed subsets of ultrametric spaces.

``bdhm_retract`` sends ``x`` to the least element, under a banded order, of
``A_x = {a in A : d(x, a) <= tau * dist(x, A)}``. The result fixes A, moves
each point at most ``tau * dist(x, A)`` and is ``tau**2``-Lipschitz.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import floor

from ._rational import Q
from .combinator import proper_ultrametric
from .errors import AxiomError, EmptySubset, FiniteSubset, MissingWitness, NoProperTarget
from .metric import MetricTable, ProperWitness, RealFunction, ball, nearest
from .space import Space, Subset
from .valueset import ValueSet, unbounded_sequence


class BandedOrder:
    """Order points by integer band ``floor(d(y0, x))``, then by enumeration index.

    ``descending=True`` puts far bands first. Bounded sets meet finitely many
    bands, so either direction is a well-order on them; only the descending
    one makes retractions onto unbounded sets metrically proper. Near bands
    first is the default.
    """

    def __init__(self, metric: MetricTable, basepoint=None, descending: bool = False):
        self.metric = metric
        self.basepoint = metric.space.basepoint if basepoint is None else basepoint
        self.descending = descending

    def band(self, x) -> int:
        return floor(self.metric(self.basepoint, x))

    def key(self, x):
        b = self.band(x)
        return (-b if self.descending else b, self.metric.space.index(x))

    def least(self, points):
        return min(points, key=self.key)


class Retraction:
    """A point map onto a subset, with its parameter and an optional block bound.

    ``block_bound(k)`` is a lower bound on the block index of ``r(x)`` for every
    ``x`` in block ``k``; it is what makes ``f o r`` certifiably proper.
    """

    def __init__(self, space: Space, subset: Subset, rule, *, tau=None, metric: MetricTable | None = None,
                 order: BandedOrder | None = None, block_bound: ProperWitness | None = None):
        self.space = space
        self.subset = subset
        self.tau = None if tau is None else Q(tau)
        self.metric = metric
        self.order = order
        self.block_bound = block_bound
        self._rule = rule
        self._memo: dict = {}

    def __call__(self, x):
        try:
            return self._memo[x]
        except KeyError:
            v = self._memo[x] = self._rule(x)
            return v

    def mapping(self, depth: int | None = None) -> dict:
        return {x: self(x) for x in self.space.points(depth)}

    @property
    def bound(self) -> Fraction | None:
        return None if self.tau is None else self.tau**2

    def ratio(self, depth: int | None = None) -> Fraction:
        return lipschitz_ratio(self, self.metric, depth)

    def preimage(self, targets) -> list:
        """Exact ``r^-1(targets)`` for a finite set of subset points."""
        targets = set(targets)
        if self.space.is_finite:
            return [x for x in self.space.points() if self(x) in targets]
        if self.block_bound is None:
            raise MissingWitness("this retraction carries no block bound")
        top = max(self.space.block_of(t) for t in targets)
        out = []
        for k in self.space.block_range():
            if self.block_bound(k) > top:
                break
            out.extend(x for x in self.space.block(k) if self(x) in targets)
        return out


def _retraction_block_bound(d: MetricTable, A: Subset, y0) -> ProperWitness:
    """Block lower bound for the descending-band retraction onto an infinite A.

    With ``s = d(y0, x)``: either some ``a`` in A has ``d(y0, a) < s`` (then by
    the isosceles property it sits in ``A_x`` or a point at distance ``s`` does),
    or every point of A is at least ``s`` away. So ``band(r(x)) >= G(s)`` where
    ``G(s)`` is the top band of ``A & U(y0, s)``, or ``floor(s)`` if that is empty.
    """
    beta = d.witness

    def top_band(t):
        inner = ball(d, y0, t, open=True, within=A)
        if not inner:
            return floor(t)
        return max(floor(d(y0, a)) for a in inner)

    def first_block_reaching(g):
        for j in A.block_range():
            if any(d(y0, a) >= g for a in A.block(j)):
                return j
        raise AssertionError("unreachable for an infinite subset")

    return ProperWitness(lambda k: first_block_reaching(top_band(beta(k))),
                         f"block bound via G({beta.rule})")


def bdhm_retract(X: Space, d: MetricTable, A: Subset, tau=2, order: BandedOrder | None = None) -> Retraction:
    """The well-order retraction of X onto A for the ultrametric d.

    Without an explicit order, near bands come first when A is finite and far
    bands come first when A is infinite.
    """
    tau = Q(tau)
    if tau <= 1:
        raise ValueError("tau must exceed 1")
    if A.is_empty:
        raise EmptySubset("cannot retract onto the empty set")
    if not (d.flag.positive and d.flag.strong):
        raise AxiomError("the well-order retraction needs an ultrametric")
    if not A.is_finite and d.witness is None:
        raise MissingWitness("retracting onto an infinite subset needs a witnessed metric")
    order = order or BandedOrder(d, descending=not A.is_finite)

    def rule(x):
        if x in A:
            return x
        _, rho = nearest(d, x, A)
        return order.least(ball(d, x, tau * rho, within=A))

    block_bound = None
    if X.is_finite:
        block_bound = ProperWitness.zero()
    elif not A.is_finite and order.descending and not d.witness.trivial:
        block_bound = _retraction_block_bound(d, A, order.basepoint)
    return Retraction(X, A, rule, tau=tau, metric=d, order=order, block_bound=block_bound)


def lipschitz_ratio(r: Retraction, d: MetricTable | None = None, depth: int | None = None) -> Fraction:
    """``max d(r(x), r(y)) / d(x, y)`` over distinct pairs (a prefix on lazy spaces)."""
    d = d if d is not None else r.metric
    pts = r.space.points(depth)
    best = Fraction(0)
    for x, y in combinations(pts, 2):
        dxy = d(x, y)
        if dxy == 0:
            continue
        best = max(best, d(r(x), r(y)) / dxy)
    return best


def identity_retraction(X: Space, A: Subset) -> Retraction:
    return Retraction(X, A, lambda x: x, block_bound=ProperWitness(lambda k: Fraction(k), "k"))


def proper_retract(X: Space, A: Subset, tau=2) -> Retraction:
    """A proper retraction onto an infinite subset of a lazy space.

    Built on the generated proper ultrametric of X, so preimages of finite
    sets are finite and computed exactly through the block bound.
    """
    if A.is_everything:
        return identity_retraction(X, A)
    if A.is_finite:
        raise FiniteSubset("a proper retraction needs an infinite (non-compact) subset")
    d = proper_ultrametric(X)
    return bdhm_retract(X, d, A, tau)


def _nth_point(Y: Space, i: int):
    seen = 0
    for k in Y.block_range():
        b = Y.block(k)
        if i < seen + len(b):
            return b[i - seen]
        seen += len(b)
    raise IndexError(i)


def _compose(f: RealFunction, r: Retraction, X: Space, target) -> RealFunction:
    wf = f.witness
    witness = None
    if wf is not None and r.block_bound is not None:
        lam = r.block_bound
        witness = wf if wf.trivial else ProperWitness(lambda k: wf(int(lam(k))), f"{wf.rule} o lambda")
    return RealFunction(X, lambda x: f(r(x)), witness=witness, target=target, name=f"{f.name} o r")


def extend_proper_map(X: Space, A: Subset, f: RealFunction, Y: Space | ValueSet, tau=2) -> RealFunction:
    """Extend a proper map ``f: A -> Y`` to a proper map on X.

    Infinite A: ``F = f o r`` for a proper retraction r. Finite A: retract
    the product ``X x N`` onto ``A x {0} | {w} x {1, 2, ...}``, send the
    second piece to a closed discrete sequence ``b_i`` of Y and restrict to
    ``X x {0}``.
    """
    if isinstance(Y, Space):
        if Y.is_finite:
            raise NoProperTarget("a proper map into a finite space exists only from finite spaces")
        b = lambda i: _nth_point(Y, i)
        level = lambda v: Fraction(Y.block_of(v))
    else:
        if not Y.unbounded:
            raise NoProperTarget(f"{Y} is bounded")
        b = unbounded_sequence(Y)
        level = Q
    if A.is_everything:
        return RealFunction(X, f, witness=f.witness, target=Y, name=f.name)
    if A.is_empty:
        raise EmptySubset("nothing to extend from the empty set")
    if not A.is_finite:
        if f.witness is None:
            raise MissingWitness("f must carry a properness witness")
        return _compose(f, proper_retract(X, A, tau), X, Y)

    Z = Space.naturals()
    XZ = Space.product(X, Z)
    omega = X.basepoint
    C = Subset(XZ, predicate=lambda c: (c[1] == 0 and c[0] in A) or (c[0] == omega and c[1] >= 1),
               label="A x 0 | w x P")

    def g_rule(c):
        x, z = c
        return f(x) if z == 0 else b(z - 1)

    m_f = min(level(f(a)) for a in A.members())
    floor_block = max(A.last_block, X.block_of(omega))
    b_omega = X.block_of(omega)
    g_witness = ProperWitness(
        lambda j: min(m_f, level(b(0))) if j <= floor_block else level(b(j - b_omega - 1)),
        "g levels by product block",
    )
    g = RealFunction(C.as_space(), g_rule, witness=g_witness, target=Y, name="g")
    G = _compose(g, proper_retract(XZ, C, tau), XZ, Y)
    return RealFunction(X, lambda x: G((x, 0)), witness=G.witness, target=Y, name=f"{f.name}^")
