"""Extending proper functions, metrics and ultrametrics from a subset to the whole space.

Every pipeline returns an ``ExtensionResult`` holding the extended table,
its witness and the intermediate terms whose join produced it, so each entry
can be traced back to the term that attains it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from ._rational import Q
from .combinator import (
    check_isosceles, join, properize, properize_ult, proper_ultrametric, pullback_abs,
    pullback_ms, quantize_metric, truncate,
)
from .errors import EmptySubset, FiniteSubset, MetricExtError, NotCharacteristic, NotUnbounded
from .metric import (
    Flag, MetricTable, ProperWitness, RealFunction, Report, certify_function, certify_proper,
    nearest, proper_function_into, verify_axioms,
)
from .retraction import Retraction, _compose, extend_proper_map, proper_retract
from .space import Dyadic, Naturals, Space, Subset
from .valueset import HalfLine, ValueSet, positive_floor, sporadic_subset

ZERO = Fraction(0)


def reference_metric(X: Space) -> MetricTable:
    """Default reference metric used to pick anchors and hang lengths.

    ``|m - n|`` on the built-in natural-number spaces, the generated proper
    ultrametric everywhere else.
    """
    gen = X.generator
    if isinstance(gen, Naturals):
        s = gen.block_size
        w = ProperWitness.linear(s)
    elif isinstance(gen, Dyadic):
        w = ProperWitness(lambda k: Fraction(2 ** (k - 1)) if k else ZERO, "2^(k-1)")
    else:
        return proper_ultrametric(X)
    return MetricTable(X, lambda x, y: Fraction(abs(x - y)), Flag.METRIC, valueset=HalfLine(),
                       witness=w, name="|m-n|")


def _on(A: Subset, d: MetricTable) -> MetricTable:
    sub = A.as_space()
    return d if d.space is sub else d.restrict(A)


def _anchor(ref: MetricTable, X: Space, A: Subset):
    """``x -> (nearest point of A, hang length)``; hang length is always positive off A."""
    memo = {}

    def anchor(x):
        try:
            return memo[x]
        except KeyError:
            pass
        a, h = nearest(ref, x, A)
        if h == 0:
            if not X.is_finite:
                raise MetricExtError("reference is degenerate at a lazy point; pass a metric reference")
            h = min((v for v in (ref(x, y) for y in X.points()) if v > 0), default=Fraction(1))
        memo[x] = (a, h)
        return a, h

    return anchor


def base_extend_metric(X: Space, A: Subset, d: MetricTable, reference: MetricTable | None = None) -> MetricTable:
    """Hang every point off A from its nearest anchor.

    ``D = d`` on A, ``t(x) + d(a(x), y)`` between an outside point and A, and
    ``t(x) + d(a(x), a(y)) + t(y)`` between two outside points.
    """
    ref = reference if reference is not None else reference_metric(X)
    if A.is_empty:
        return ref
    d = _on(A, d)
    anchor = _anchor(ref, X, A)

    def hang(x):
        return (x, ZERO) if x in A else anchor(x)

    def dist(x, y):
        if x == y:
            return ZERO
        ax, tx = hang(x)
        ay, ty = hang(y)
        return tx + d(ax, ay) + ty

    return MetricTable(X, dist, Flag.METRIC, valueset=HalfLine(),
                       witness=ProperWitness.zero() if X.is_finite else None, name="e")


def base_extend_ultrametric(X: Space, A: Subset, d: MetricTable, S: ValueSet,
                            reference: MetricTable | None = None) -> MetricTable:
    """``D(x, y) = d(a(x), a(y)) v t(x) v t(y)`` with hang lengths rounded down into S."""
    if not S.characteristic:
        raise NotCharacteristic(f"{S} is not characteristic")
    ref = reference if reference is not None else reference_metric(X)
    if A.is_empty:
        raise EmptySubset("cannot glue onto the empty set")
    d = _on(A, d)
    if d.valueset is not None and not d.valueset.issubset(S):
        raise MetricExtError(f"d takes values in {d.valueset}, not in {S}")
    anchor = _anchor(ref, X, A)

    def hang(x):
        if x in A:
            return x, ZERO
        a, h = anchor(x)
        return a, positive_floor(S, h)

    def dist(x, y):
        if x == y:
            return ZERO
        ax, tx = hang(x)
        ay, ty = hang(y)
        return max(d(ax, ay), tx, ty)

    return MetricTable(X, dist, Flag.ULTRAMETRIC, valueset=S,
                       witness=ProperWitness.zero() if X.is_finite else None, name="e")


def extend_function_proper(X: Space, A: Subset | None, f: RealFunction | None,
                           reference: MetricTable | None = None) -> RealFunction:
    """A proper ``F >= 0`` on X with ``F = f`` on A.

    Off A, ``F(x) = f(anchor(x)) v gamma(x)`` where gamma is the block index.
    """
    gamma = proper_function_into(X, HalfLine())
    if A is None or A.is_empty:
        return RealFunction(X, gamma, witness=ProperWitness.linear(1), name="gamma")
    if A.is_finite:
        for a in A.members():
            if Q(f(a)) < 0:
                raise ValueError(f"f({a!r}) is negative")
    ref = reference if reference is not None else reference_metric(X)
    anchor = _anchor(ref, X, A)

    def rule(x):
        if x in A:
            v = Q(f(x))
            if v < 0:
                raise ValueError(f"f({x!r}) is negative")
            return v
        return max(Q(f(anchor(x)[0])), gamma(x))

    wf = f.witness
    if A.is_finite:
        last = A.last_block
        witness = ProperWitness(lambda k: Fraction(k) if k > last else ZERO, f"k past block {last}")
    elif wf is None:
        witness = None
    else:
        witness = ProperWitness(lambda k: min(wf(k), Fraction(k)), f"min({wf.rule}, k)")
    return RealFunction(X, rule, witness=witness, name="F")


@dataclass
class ExtensionResult:
    space: Space
    subset: Subset
    source: MetricTable | RealFunction
    metric: MetricTable | None = None
    function: RealFunction | None = None
    terms: dict = field(default_factory=dict)
    retraction: Retraction | None = None
    eta: Fraction | None = None
    theta: Fraction | None = None
    valueset: ValueSet | None = None

    @property
    def witness(self) -> ProperWitness | None:
        return self.metric.witness if self.metric is not None else self.function.witness

    def provenance(self, x, y) -> list[str]:
        """Names of the joined terms that attain ``D(x, y)``."""
        v = self.metric(x, y)
        return [name for name, t in self.terms.items() if t(x, y) == v]

    def checks(self, depth: int = 8) -> dict[str, Report]:
        return check_extension(self, depth)


def _source_points(res: ExtensionResult, depth):
    A = res.subset
    return A.members() if A.is_finite else A.members(depth)


def check_extension(res: ExtensionResult, depth: int = 8) -> dict[str, Report]:
    """Oracle verdicts for every contract of an extension result.

    Lazy spaces are checked on the first ``depth`` blocks.
    """
    out = {}
    X = res.space
    pts = X.points(None if X.is_finite else depth)
    apts = _source_points(res, depth)
    if res.metric is None:
        F, f = res.function, res.source
        bad = [a for a in apts if F(a) != f(a)]
        out["restriction"] = Report(not bad, bad)
        out["witness"] = certify_function(F, depth)
        return out
    D, d = res.metric, res.source
    bad = [(x, y) for x, y in combinations(apts, 2) if D(x, y) != d(x, y)]
    bad += [(x,) for x in apts if D(x, x) != 0]
    out["restriction"] = Report(not bad, bad)
    ax = verify_axioms(D, D.flag, depth if not X.is_finite else None)
    out["axioms"] = ax
    if D.flag.strong:
        out["isosceles"] = check_isosceles(D, depth if not X.is_finite else None)
    if res.valueset is not None and D.flag.strong:
        S = res.valueset
        bad = [(x, y, D(x, y)) for x, y in combinations(pts, 2) if not S.contains(D(x, y))]
        out["valueset"] = Report(not bad, bad, {"valueset": str(S)})
    out["witness"] = certify_proper(X, D, D.witness, depth)
    if res.eta is not None:
        r = res.retraction
        limit = res.theta if res.theta is not None else res.eta
        bad = [(x, r(x), D(x, r(x))) for x in pts if D(x, r(x)) > limit]
        out["density"] = Report(not bad, bad, {"eta": res.eta, "theta": res.theta})
    return out


def _basepoint_function(A: Subset, d: MetricTable, target=None) -> RealFunction:
    sub = A.as_space()
    p = sub.basepoint
    return RealFunction(sub, lambda x: d(p, x), witness=d.witness, target=target, name="d(p, .)")


def extend_metric_proper(X: Space, A: Subset, d: MetricTable,
                         reference: MetricTable | None = None) -> ExtensionResult:
    """Proper metric ``D = e v E[F]`` on X restricting to d on A."""
    if A.is_empty:
        raise EmptySubset("a basepoint in A is required")
    d = _on(A, d)
    f = _basepoint_function(A, d)
    F = extend_function_proper(X, A, f, reference)
    e = base_extend_metric(X, A, d, reference)
    D = properize(e, F)
    D.name = "D"
    return ExtensionResult(X, A, d, metric=D, function=F,
                           terms={"base": e, "E[F]": pullback_abs(F)})


def _check_unbounded_characteristic(S: ValueSet):
    if not S.characteristic:
        raise NotCharacteristic(f"{S} is not characteristic")
    if not S.unbounded:
        raise NotUnbounded(f"{S} is bounded")


def extend_ultrametric_proper(X: Space, A: Subset, d: MetricTable, S: ValueSet,
                              reference: MetricTable | None = None, tau=2) -> ExtensionResult:
    """Proper ultrametric ``D = e v M_T[F]`` on X with values in S restricting to d.

    ``F`` extends ``w(p, .)`` for the quantized ``w = psi o d <= d``.
    """
    _check_unbounded_characteristic(S)
    if A.is_empty:
        raise EmptySubset("a basepoint in A is required")
    d = _on(A, d)
    T = sporadic_subset(S)
    w = quantize_metric(d, T)
    f = _basepoint_function(A, w, target=T)
    F = extend_proper_map(X, A, f, T, tau)
    e = base_extend_ultrametric(X, A, d, S, reference)
    D = properize_ult(e, F, T, S)
    D.name = "D"
    return ExtensionResult(X, A, d, metric=D, function=F, valueset=S,
                           terms={"base": e, "M_T[F]": pullback_ms(T, F)})


def _retraction_metric(X: Space, d: MetricTable, r: Retraction, flag: Flag) -> MetricTable:
    return MetricTable(X, lambda x, y: d(r(x), r(y)), flag, valueset=d.valueset, name="d(r, r)")


def _check_retraction(r: Retraction, A: Subset, depth: int = 8):
    pts = r.space.points(None if r.space.is_finite else depth)
    for x in pts:
        y = r(x)
        if y not in A:
            raise MetricExtError(f"r({x!r}) = {y!r} is not in A")
        if x in A and y != x:
            raise MetricExtError(f"r moves {x!r}, a point of A")


def extend_metric_proper_dense(X: Space, A: Subset, d: MetricTable, eta, r: Retraction,
                               reference: MetricTable | None = None) -> ExtensionResult:
    """Proper metric restricting to d in which every point lies within eta of A.

    ``D = (d(r, r) v min(e, eta)) v E[f o r]`` for a proper retraction r.
    """
    eta = Q(eta)
    if eta <= 0:
        raise ValueError("eta must be positive")
    if A.is_empty:
        raise EmptySubset("a basepoint in A is required")
    d = _on(A, d)
    _check_retraction(r, A)
    P = _retraction_metric(X, d, r, Flag.PSEUDO)
    e = base_extend_metric(X, A, d, reference)
    u = truncate(e, eta)
    v = join(P, u)
    F = _compose(_basepoint_function(A, d), r, X, None)
    D = properize(v, F)
    D.name = "D"
    return ExtensionResult(X, A, d, metric=D, function=F, retraction=r, eta=eta,
                           terms={"retraction": P, "truncation": u, "E[F]": pullback_abs(F)})


def extend_ultrametric_proper_dense(X: Space, A: Subset, d: MetricTable, S: ValueSet, eta,
                                    tau=2, reference: MetricTable | None = None) -> ExtensionResult:
    """Proper ultrametric in S restricting to d with A theta-dense, ``theta <= eta`` in S."""
    _check_unbounded_characteristic(S)
    eta = Q(eta)
    if eta <= 0:
        raise ValueError("eta must be positive")
    if A.is_finite:
        raise FiniteSubset("the dense ultrametric extension needs an infinite subset")
    d = _on(A, d)
    theta = positive_floor(S, eta)
    r = proper_retract(X, A, tau)
    P = _retraction_metric(X, d, r, Flag.PSEUDO_ULTRAMETRIC)
    e = base_extend_ultrametric(X, A, d, S, reference)
    u = truncate(e, theta)
    v = join(P, u)
    T = sporadic_subset(S)
    w = quantize_metric(d, T)
    F = _compose(_basepoint_function(A, w, target=T), r, X, T)
    D = properize_ult(v, F, T, S)
    D.name = "D"
    return ExtensionResult(X, A, d, metric=D, function=F, retraction=r, eta=eta, theta=theta,
                           valueset=S,
                           terms={"retraction": P, "truncation": u, "M_T[F]": pullback_ms(T, F)})
