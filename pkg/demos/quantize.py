"""Round an ultrametric down into a geometric value set.

Rounding every distance down to the nearest member of {c * b^n} keeps the
strong triangle inequality, never increases a distance, and is idempotent.
"""
import random

from metricext import Geometric, HalfLine, check_isosceles, quantize_metric, verify_axioms
from metricext.instances import random_ultrametric

rng = random.Random(3)
d = random_ultrametric(rng, 5, HalfLine())
for T in (Geometric(2, 1), Geometric(3, "1/2")):
    w = quantize_metric(d, T)
    print(f"\nvalues in {T}")
    for x in d.points():
        print("  ", x, [f"{d(x, y)} -> {w(x, y)}" for y in d.points() if y != x])
    print("  ultrametric:", verify_axioms(w, "ultrametric").ok,
          " isosceles:", check_isosceles(w).ok,
          " idempotent:", quantize_metric(w, T).matrix() == w.matrix())
