"""Retract a four-point ultrametric onto two of its points.

Shows how the band order decides which anchor an outlying point is sent to,
and that both choices stay within the tau^2 Lipschitz bound.
"""
from pathlib import Path

from metricext import BandedOrder, bdhm_retract, dist_to_set, lipschitz_ratio
from metricext.serialize import parse_space

data = parse_space((Path(__file__).parent / "data" / "four_point.json").read_bytes())
X, d, A = data.space, data.metric, data.subset
tau = 2

print("points:", X.points(), " subset:", A.members())
for descending in (False, True):
    r = bdhm_retract(X, d, A, tau, BandedOrder(d, descending=descending))
    label = "far bands first" if descending else "near bands first"
    print(f"\n{label}: {r.mapping()}")
    for x in X.points():
        print(f"  d({x}, r({x})) = {d(x, r(x))}  <=  tau * dist({x}, A) = {tau * dist_to_set(d, x, A)}")
    print(f"  Lipschitz ratio {lipschitz_ratio(r)} (bound {tau ** 2})")
