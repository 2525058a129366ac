"""Independent reference implementations used to cross-check the package.

Nothing here imports metricext; every routine works on plain lists of
Fractions with the textbook definitions, no scaling and no shortcuts.
"""
from fractions import Fraction
from itertools import permutations


def axioms_hold(D, claim):
    """Decide whether the square matrix D satisfies the axioms of ``claim``.

    claim is one of "pseudo", "pseudo-ultrametric", "metric", "ultrametric".
    """
    n = len(D)
    positive = claim in ("metric", "ultrametric")
    strong = claim in ("ultrametric", "pseudo-ultrametric")
    for x in range(n):
        if D[x][x] != 0:
            return False
        for y in range(n):
            if D[x][y] < 0 or D[x][y] != D[y][x]:
                return False
            if positive and x != y and D[x][y] == 0:
                return False
            for z in range(n):
                bound = max(D[x][z], D[z][y]) if strong else D[x][z] + D[z][y]
                if D[x][y] > bound:
                    return False
    return True


def is_ultrametric(D):
    return axioms_hold(D, "ultrametric")


def isosceles_violations(D):
    n = len(D)
    return [(x, y, z) for x, y, z in permutations(range(n), 3)
            if D[x][z] < D[y][z] and D[y][z] != D[x][y]]


def geometric_floor(base, scale, x):
    """Largest ``scale * base**n <= x`` by walking n one step at a time."""
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    n, v = 0, Fraction(scale)
    while v > x:
        n -= 1
        v = Fraction(scale) * Fraction(base) ** n
    while Fraction(scale) * Fraction(base) ** (n + 1) <= x:
        n += 1
    return Fraction(scale) * Fraction(base) ** n


def geometric_contains(base, scale, x, span=200):
    x = Fraction(x)
    return x == 0 or any(Fraction(scale) * Fraction(base) ** n == x for n in range(-span, span + 1))


def retract_by_definition(D, A, tau, band_key):
    """For each x: the ``band_key``-least a in A with ``D[x][a] <= tau * min_a D[x][a]``."""
    out = []
    for x in range(len(D)):
        rho = min(D[x][a] for a in A)
        candidates = [a for a in A if D[x][a] <= tau * rho]
        out.append(min(candidates, key=band_key))
    return out


def max_ratio(D, image):
    best = Fraction(0)
    n = len(D)
    for x in range(n):
        for y in range(n):
            if x != y and D[x][y] > 0:
                best = max(best, D[image[x]][image[y]] / D[x][y])
    return best
