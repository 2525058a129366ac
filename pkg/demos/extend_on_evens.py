"""Extend a metric on the even numbers to all of N, lazily.

The subset is infinite, so nothing is materialized up front; distances and
balls are computed on demand and balls stop scanning once a lower bound on
block distances exceeds the radius.
"""
from fractions import Fraction

from metricext import (
    Flag, Geometric, MetricTable, ProperWitness, Space, Subset, ball, extend_metric_proper,
    extend_ultrametric_proper_dense, proper_retract,
)
from metricext.metric import ball_blocks_scanned

X = Space.naturals()
evens = Subset(X, predicate=lambda n: n % 2 == 0, label="evens")

# |m - n| / 2 on the evens: a proper metric with witness k/2 from basepoint 0
half_gap = MetricTable(evens.as_space(), lambda m, n: Fraction(abs(m - n), 2), Flag.METRIC,
                       witness=ProperWitness(lambda k: Fraction(k, 2), "k/2"))

res = extend_metric_proper(X, evens, half_gap)
D = res.metric
print("D on 0..6:")
for row in D.matrix(range(7)):
    print("  ", [str(v) for v in row])
print("restricts to |m-n|/2:", all(D(a, b) == half_gap(a, b) for a in range(0, 20, 2) for b in range(0, 20, 2)))
for radius in (1, 4, 16):
    print(f"ball(0, {radius}) = {ball(D, 0, radius)}  ({ball_blocks_scanned(D, 0, radius)} blocks scanned)")

r = proper_retract(X, evens)
print("\nretraction onto the evens:", [r(n) for n in range(10)])

# ultrametric version: 2^max on the evens, values in powers of two, every point within 1 of A
S = Geometric(2, 1)
pow_gap = MetricTable(evens.as_space(), lambda m, n: Fraction(0) if m == n else Fraction(2) ** max(m, n),
                      Flag.ULTRAMETRIC, valueset=S,
                      witness=ProperWitness(lambda k: Fraction(2) ** k, "2^k"))
dense = extend_ultrametric_proper_dense(X, evens, pow_gap, S, eta=1)
U = dense.metric
print(f"\ndense ultrametric, theta = {dense.theta}")
print("D(x, r(x)) for x < 8:", [str(U(x, dense.retraction(x))) for x in range(8)])
