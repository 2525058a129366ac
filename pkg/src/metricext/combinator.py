"""Pseudo-metric algebra: joins, truncation, pullbacks, quantization, properization.

All operations return new ``MetricTable`` objects backed by callbacks, so
they work identically on finite rosters and lazy spaces. Witnesses are
propagated by the ball-inclusion arguments rather than by rescanning.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from ._rational import Q
from .errors import AxiomError, MembershipError, MissingWitness, RosterMismatch
from .metric import (
    Flag, MetricTable, ProperWitness, RealFunction, Report, proper_function_into, witness_max,
)
from .space import Space
from .valueset import Geometric, ExplicitList, HalfLine, ValueSet, sporadic_subset, unbounded_sequence

ZERO = Fraction(0)


def ms_distance(S: ValueSet, x, y) -> Fraction:
    """The ultrametric on S itself: 0 on the diagonal, ``max(x, y)`` otherwise."""
    x, y = S.require(x), S.require(y)
    return ZERO if x == y else max(x, y)


def _same_space(d: MetricTable, e: MetricTable) -> bool:
    if d.space is e.space:
        return True
    return d.is_finite and e.is_finite and d.points() == e.points()


def _merge_valuesets(a: ValueSet | None, b: ValueSet | None) -> ValueSet | None:
    if a is None or b is None:
        return None
    if a.issubset(b):
        return b
    if b.issubset(a):
        return a
    return HalfLine()


def _function_witness(f: RealFunction) -> ProperWitness:
    if f.witness is not None:
        return f.witness
    if f.space.is_finite:
        return ProperWitness.zero()
    raise MissingWitness("properization needs a proper function with a witness")


def pullback_abs(f: RealFunction) -> MetricTable:
    """``E[f](x, y) = |f(x) - f(y)|``, a pseudo-metric."""
    return MetricTable(f.space, lambda x, y: abs(Q(f(x)) - Q(f(y))), Flag.PSEUDO,
                       valueset=HalfLine(), name=f"E[{f.name}]")


def pullback_ms(S: ValueSet, f: RealFunction) -> MetricTable:
    """``M_S[f](x, y) = M_S(f(x), f(y))``, a pseudo-ultrametric with values in S."""
    if f.space.is_finite:
        for x in f.space.points():
            if not S.contains(f(x)):
                raise MembershipError(f"f({x!r}) = {f(x)} is not in {S}")
    return MetricTable(f.space, lambda x, y: ms_distance(S, f(x), f(y)), Flag.PSEUDO_ULTRAMETRIC,
                       valueset=S, name=f"M[{f.name}]")


def join(d: MetricTable, e: MetricTable) -> MetricTable:
    """Pointwise maximum. Positive if either side is; strong only if both are."""
    if not _same_space(d, e):
        raise RosterMismatch("join needs both tables on the same points")
    flag = Flag.of(d.flag.positive or e.flag.positive, d.flag.strong and e.flag.strong)
    return MetricTable(d.space, lambda x, y: max(d(x, y), e(x, y)), flag,
                       valueset=_merge_valuesets(d.valueset, e.valueset),
                       witness=witness_max(d.witness, e.witness),
                       name=f"({d.name} v {e.name})")


def zero_table(space: Space) -> MetricTable:
    return MetricTable(space, lambda x, y: ZERO, Flag.PSEUDO_ULTRAMETRIC,
                       valueset=ExplicitList([0]), name="0")


def truncate(d: MetricTable, c) -> MetricTable:
    """``min(d, c)``; keeps the flag, and keeps the value set when ``c`` belongs to it."""
    c = Q(c)
    if c <= 0:
        raise ValueError("truncation level must be positive")
    vs = d.valueset if d.valueset is not None and d.valueset.contains(c) else None
    if vs is None and d.valueset is not None:
        vs = HalfLine()
    witness = d.witness if d.witness is not None and d.witness.trivial else None
    return MetricTable(d.space, lambda x, y: min(d(x, y), c), d.flag, valueset=vs,
                       witness=witness, name=f"min({d.name}, {c})")


def properize(d: MetricTable, f: RealFunction) -> MetricTable:
    """``d v E[f]`` with the witness ``beta_f(k) - f(p)``.

    Closed balls of the result at ``p`` sit inside ``f^-1[f(p) - r, f(p) + r]``.
    """
    if not d.flag.positive:
        raise AxiomError("properize needs a metric, not a pseudo-metric")
    wf = _function_witness(f)
    out = join(d, pullback_abs(f))
    if wf.trivial:
        out.witness = witness_max(d.witness, wf)
        return out
    fp = Q(f(d.space.basepoint))
    derived = ProperWitness(lambda k: max(ZERO, wf(k) - fp), f"{wf.rule} - {fp}")
    out.witness = witness_max(d.witness if d.witness and not d.witness.trivial else None, derived)
    return out


def properize_ult(d: MetricTable, f: RealFunction, T: Geometric, S: ValueSet | None = None) -> MetricTable:
    """``d v M_T[f]`` for an ultrametric ``d`` with values in ``S`` and ``f`` into ``T``.

    Closed balls at ``p`` sit inside ``f^-1([0, r] | {f(p)})``, so
    ``beta(k) = beta_f(k)`` once ``beta_f(k) > f(p)``.
    """
    if not (d.flag.positive and d.flag.strong):
        raise AxiomError("properize_ult needs an ultrametric")
    S = S if S is not None else (d.valueset or HalfLine())
    if d.valueset is not None and not d.valueset.issubset(S):
        raise MembershipError(f"d takes values in {d.valueset}, not inside {S}")
    if not T.issubset(S):
        raise MembershipError(f"{T} is not a subset of {S}")
    wf = _function_witness(f)
    out = join(d, pullback_ms(T, f))
    out.valueset = S
    out.flag = Flag.ULTRAMETRIC
    if wf.trivial:
        out.witness = witness_max(d.witness, wf)
        return out
    fp = Q(f(d.space.basepoint))
    derived = ProperWitness(lambda k: wf(k) if wf(k) > fp else ZERO, f"{wf.rule} past {fp}")
    out.witness = witness_max(d.witness if d.witness and not d.witness.trivial else None, derived)
    return out


def quantize_metric(d: MetricTable, T: Geometric) -> MetricTable:
    """``psi o d``: round every distance down into the sporadic set T.

    Only ultrametrics are accepted; rounding can break the ordinary triangle
    inequality. The witness is ``psi o beta`` since psi is monotone.
    """
    if not d.flag.strong:
        raise AxiomError("quantize_metric needs an ultrametric input")
    w0 = d.witness
    witness = None
    if w0 is not None:
        witness = w0 if w0.trivial else ProperWitness(lambda k: T.floor(w0(k)), f"psi({w0.rule})")
    return MetricTable(d.space, lambda x, y: T.floor(d(x, y)), d.flag, valueset=T,
                       witness=witness, name=f"psi({d.name})")


def check_isosceles(w: MetricTable, depth: int | None = None) -> Report:
    """Check ``w(x, z) < w(y, z)  =>  w(y, z) == w(x, y)`` over all distinct triples."""
    pts = w.points(depth)
    bad = []
    for x, y, z in permutations(pts, 3):
        if w(x, z) < w(y, z) and w(y, z) != w(x, y):
            bad.append((x, y, z))
    return Report(not bad, bad, {"points": len(pts)})


def ms_ball_structure(S: ValueSet, x, window: int | tuple[int, int] = 6) -> Report:
    """Open balls of ``M_S``: ``U(x, x) == {x}`` and ``U(0, x) == S & [0, x)``.

    Checked on a finite window of S: ``window`` exponents below and above x
    for geometric sets (or a ``(below, above)`` pair), the whole list otherwise.
    """
    x = S.require(x)
    if x <= 0:
        raise ValueError("x must be a positive member of S")
    if isinstance(S, Geometric):
        below, above = (window, window) if isinstance(window, int) else window
        n = S.exponent(x)
        members = [ZERO] + list(S.members(n - below, n + above))
    elif isinstance(S, ExplicitList):
        members = list(S.values)
    else:
        raise ValueError(f"{S} has no finite window to enumerate")
    at_x = [y for y in members if ms_distance(S, x, y) < x]
    at_0 = [y for y in members if ms_distance(S, ZERO, y) < x]
    expect_0 = [y for y in members if y < x]
    bad = []
    if at_x != [x]:
        bad.append(("U(x, x)", at_x))
    if at_0 != expect_0:
        bad.append(("U(0, x)", at_0, expect_0))
    return Report(not bad, bad, {"U(x,x)": at_x, "U(0,x)": at_0, "window": members})


def discrete_metric(X: Space, value=1, S: ValueSet | None = None) -> MetricTable:
    value = Q(value)
    if value <= 0:
        raise ValueError("discrete metric value must be positive")
    if S is not None:
        S.require(value)
    witness = ProperWitness.zero() if X.is_finite else None
    return MetricTable(X, lambda x, y: ZERO if x == y else value, Flag.ULTRAMETRIC,
                       valueset=S, witness=witness, name=f"disc({value})")


def proper_metric(X: Space, d: MetricTable | None = None) -> MetricTable:
    """A proper metric on X: ``d v E[f]`` for the block-index proper function."""
    d = d if d is not None else discrete_metric(X, 1, HalfLine())
    return properize(d, proper_function_into(X, HalfLine()))


def proper_ultrametric(X: Space, S: ValueSet | None = None) -> MetricTable:
    """A proper ultrametric on X with values in S.

    The discrete ultrametric at level ``a_0`` joined with ``M_T[f]`` for the
    block proper function into the sporadic ``T`` inside S. On the naturals
    in singleton blocks with the default S this is ``2**max(m, n)``.
    """
    S = S if S is not None else HalfLine()
    T = sporadic_subset(S)
    f = proper_function_into(X, T)
    base = discrete_metric(X, unbounded_sequence(T)(0), S)
    out = properize_ult(base, f, T, S)
    out.name = "generated"
    return out
