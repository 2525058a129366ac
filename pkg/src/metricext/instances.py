"""Seeded random instances for property sweeps and demos.

Finite tables are built so their class is known by construction:
ultrametrics come from dendrograms, metrics from shortest paths. Lazy
instances live on the naturals with a residue-class subset.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .combinator import properize, properize_ult
from .metric import Flag, MetricTable, proper_function_into
from .space import Space, Subset
from .valueset import Geometric, HalfLine, ValueSet, sporadic_subset

VALUESETS = (HalfLine(), Geometric(2, 1), Geometric(3, Fraction(1, 2)), Geometric(Fraction(3, 2), 1))


def _names(n):
    return [f"p{i}" for i in range(n)]


def random_rational(rng: random.Random, lo=1, hi=8, den=4) -> Fraction:
    """Uniform on the grid ``[lo, hi]`` with step ``1/den``."""
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_heights(rng: random.Random, count: int, S: ValueSet) -> list[Fraction]:
    """``count`` nondecreasing positive members of S."""
    if isinstance(S, Geometric):
        n0 = rng.randint(-3, 1)
        steps = sorted(rng.randint(0, count + 2) for _ in range(count))
        return [S.member(n0 + s) for s in steps]
    return sorted(random_rational(rng, 1, 3 * max(count, 1)) for _ in range(count))


def random_ultrametric(rng: random.Random, n: int, S: ValueSet | None = None) -> MetricTable:
    """Ultrametric from a random dendrogram with merge heights in S.

    Clusters are merged pairwise at nondecreasing heights; the distance
    between two points is the height at which their clusters first meet.
    """
    S = S if S is not None else rng.choice(VALUESETS)
    names = _names(n)
    clusters = [[i] for i in range(n)]
    D = [[Fraction(0)] * n for _ in range(n)]
    for h in random_heights(rng, n - 1, S):
        i, j = sorted(rng.sample(range(len(clusters)), 2))
        for x in clusters[i]:
            for y in clusters[j]:
                D[x][y] = D[y][x] = h
        clusters[i] += clusters.pop(j)
    return MetricTable.from_matrix(Space.finite(names), D, Flag.ULTRAMETRIC, valueset=S, name="dendrogram")


def random_metric(rng: random.Random, n: int) -> MetricTable:
    """Shortest-path metric of a complete graph with random rational weights."""
    D = [[Fraction(0) if i == j else None for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            D[i][j] = D[j][i] = random_rational(rng, 1, 10)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if D[i][k] + D[k][j] < D[i][j]:
                    D[i][j] = D[i][k] + D[k][j]
    return MetricTable.from_matrix(Space.finite(_names(n)), D, Flag.METRIC, valueset=HalfLine(),
                                   name="shortest-path")


CORRUPTIONS = ("diagonal", "negative", "asymmetric", "zero", "stretch", "none")


def random_table(rng: random.Random, n: int) -> tuple[list[list[Fraction]], str, str]:
    """A raw matrix, the kind it was drawn from and the corruption applied.

    Roughly half the tables are left intact. ``stretch`` raises one entry
    (and its mirror) which may or may not break a triangle inequality.
    """
    kind = rng.choice(("metric", "ultrametric", "pseudo"))
    if kind == "ultrametric":
        M = random_ultrametric(rng, n)
    else:
        M = random_metric(rng, n)
    D = [row[:] for row in M.matrix()]
    if kind == "pseudo" and n >= 2:
        # glue two points: copy row i onto j, a valid pseudo-metric
        i, j = rng.sample(range(n), 2)
        for k in range(n):
            D[j][k] = D[k][j] = D[i][k]
        D[j][j] = Fraction(0)
        D[i][j] = D[j][i] = Fraction(0)
    corruption = rng.choice(CORRUPTIONS) if rng.random() < 0.5 else "none"
    if n < 2 and corruption not in ("diagonal", "none"):
        corruption = "none"
    if corruption == "diagonal":
        i = rng.randrange(n)
        D[i][i] = random_rational(rng, 1, 3)
    elif corruption != "none":
        i, j = rng.sample(range(n), 2)
        if corruption == "negative":
            D[i][j] = D[j][i] = -random_rational(rng, 1, 3)
        elif corruption == "asymmetric":
            D[i][j] += random_rational(rng, 1, 3)
        elif corruption == "zero":
            D[i][j] = D[j][i] = Fraction(0)
        elif corruption == "stretch":
            D[i][j] = D[j][i] = D[i][j] * rng.choice((2, 3, 5))
    return D, kind, corruption


def random_subset(rng: random.Random, X: Space, *, proper: bool = False) -> Subset:
    """A nonempty random subset; ``proper`` keeps at least one point outside."""
    pts = X.points()
    hi = len(pts) - 1 if proper and len(pts) > 1 else len(pts)
    k = rng.randint(1, hi)
    return Subset(X, rng.sample(pts, k), label="A")


def qadic_metric(X: Space, q: int) -> MetricTable:
    """``q ** -v_q(m - n)`` on integer points: a bounded ultrametric with values in ``Geometric(q)``."""

    def dist(m, n):
        if m == n:
            return Fraction(0)
        diff, v = abs(m - n), 0
        while diff % q == 0:
            diff //= q
            v += 1
        return Fraction(1, q**v)

    return MetricTable(X, dist, Flag.ULTRAMETRIC, valueset=Geometric(q, 1), name=f"{q}-adic")


def abs_metric(X: Space) -> MetricTable:
    return MetricTable(X, lambda m, n: Fraction(abs(m - n)), Flag.METRIC, valueset=HalfLine(), name="|m-n|")


@dataclass
class LazyInstance:
    space: Space
    subset: Subset
    metric: MetricTable
    valueset: ValueSet
    description: str


def lazy_instance(rng: random.Random, *, ultrametric: bool) -> LazyInstance:
    """Naturals in blocks of 1 to 3, A a union of residue classes, a witnessed d on A.

    Ultrametric d: the q-adic metric joined with ``M_T[f]``. Metric d:
    ``|m - n|`` joined with ``E[f]``. In both cases f is the generated
    proper function on A.
    """
    X = Space.naturals(rng.randint(1, 3))
    m = rng.randint(2, 4)
    residues = frozenset(rng.sample(range(m), rng.randint(1, m - 1)))
    A = Subset(X, predicate=lambda x: x % m in residues, label=f"{sorted(residues)} mod {m}")
    sub = A.as_space()
    if ultrametric:
        q = rng.choice((2, 3))
        S = rng.choice((HalfLine(), Geometric(q, 1)))
        T = sporadic_subset(S)
        base = qadic_metric(sub, q).with_(valueset=S)
        d = properize_ult(base, proper_function_into(sub, T), T, S)
        desc = f"{q}-adic v M_T[f] on {A.label}, S = {S}"
    else:
        S = HalfLine()
        d = properize(abs_metric(sub), proper_function_into(sub, S))
        desc = f"|m-n| v E[f] on {A.label}"
    d.name = "d"
    return LazyInstance(X, A, d, S, desc)


__all__ = [
    "CORRUPTIONS", "LazyInstance", "VALUESETS", "abs_metric", "lazy_instance", "qadic_metric",
    "random_heights", "random_metric", "random_rational", "random_subset", "random_table",
    "random_ultrametric",
]
