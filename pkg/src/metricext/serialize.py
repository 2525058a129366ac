"""JSON encoding of value sets and space files. Rationals travel as ``"p/q"`` strings."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from ._rational import Q
from .combinator import proper_metric, proper_ultrametric
from .errors import SchemaError
from .extension import reference_metric
from .metric import Flag, MetricTable, Report, verify_axioms
from .space import GENERATORS, Space, Subset
from .valueset import ExplicitList, Geometric, HalfLine, ValueSet


def valueset_to_json(S: ValueSet) -> dict:
    if isinstance(S, HalfLine):
        return {"kind": "halfline"}
    if isinstance(S, Geometric):
        return {"kind": "geometric", "base": str(S.base), "scale": str(S.scale)}
    if isinstance(S, ExplicitList):
        return {"kind": "list", "values": [str(v) for v in S.values]}
    raise TypeError(f"cannot encode {S!r}")


def _rational(value, field):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise SchemaError(field, f"expected a rational string like '5/2', got {value!r}")
    try:
        return Q(value)
    except (ValueError, ZeroDivisionError):
        raise SchemaError(field, f"not a rational: {value!r}") from None


def valueset_from_json(obj, field="valueset") -> ValueSet:
    if isinstance(obj, str):
        obj = _loads(obj, field)
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError(field, "expected an object with a 'kind'")
    kind = obj["kind"]
    try:
        if kind == "halfline":
            return HalfLine()
        if kind == "geometric":
            return Geometric(_rational(obj.get("base"), f"{field}.base"),
                             _rational(obj.get("scale", "1"), f"{field}.scale"))
        if kind == "list":
            values = obj.get("values")
            if not isinstance(values, list):
                raise SchemaError(f"{field}.values", "expected a list")
            return ExplicitList([_rational(v, f"{field}.values[{i}]") for i, v in enumerate(values)])
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(field, str(exc)) from None
    raise SchemaError(f"{field}.kind", f"unknown value set kind {kind!r}")


def _loads(data, field="json"):
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError(field, f"not UTF-8: {exc}") from None
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(field, f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None


@dataclass
class SpaceFile:
    space: Space
    metric: MetricTable
    subset: Subset | None
    valueset: ValueSet | None
    report: Report | None = None

    @property
    def lazy(self) -> bool:
        return not self.space.is_finite


def _parse_flag(obj):
    raw = obj.get("flag", "metric")
    try:
        return Flag.parse(raw)
    except ValueError:
        raise SchemaError("flag", f"unknown flag {raw!r}") from None


def _parse_finite(obj) -> SpaceFile:
    points = obj.get("points")
    if not isinstance(points, list) or not points:
        raise SchemaError("points", "expected a nonempty list of point names")
    for i, p in enumerate(points):
        if not isinstance(p, str):
            raise SchemaError(f"points[{i}]", "point names must be strings")
    if len(set(points)) != len(points):
        raise SchemaError("points", "point names must be unique")
    basepoint = obj.get("basepoint", points[0])
    if basepoint not in points:
        raise SchemaError("basepoint", f"{basepoint!r} is not a listed point")
    X = Space.finite(points, basepoint=basepoint)
    rows = obj.get("metric")
    n = len(points)
    if not isinstance(rows, list) or len(rows) != n:
        raise SchemaError("metric", f"expected {n} rows")
    matrix = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise SchemaError(f"metric[{i}]", f"expected {n} entries")
        matrix.append([_rational(v, f"metric[{i}][{j}]") for j, v in enumerate(row)])
    for i in range(n):
        if matrix[i][i] != 0:
            raise SchemaError(f"metric[{i}][{i}]", f"diagonal entry is {matrix[i][i]}, not 0")
        for j in range(n):
            if matrix[i][j] < 0:
                raise SchemaError(f"metric[{i}][{j}]", "negative distance")
            if matrix[i][j] != matrix[j][i]:
                raise SchemaError(f"metric[{i}][{j}]",
                                  f"symmetry: {matrix[i][j]} != metric[{j}][{i}] = {matrix[j][i]}")
    vs = valueset_from_json(obj["valueset"]) if "valueset" in obj else None
    M = MetricTable.from_matrix(X, matrix, _parse_flag(obj), valueset=vs, name="file")
    A = None
    if "subset" in obj:
        members = obj["subset"]
        if not isinstance(members, list):
            raise SchemaError("subset", "expected a list of point names")
        for i, a in enumerate(members):
            if a not in points:
                raise SchemaError(f"subset[{i}]", f"{a!r} is not a listed point")
        A = Subset(X, members, label="A")
    return SpaceFile(X, M, A, vs)


def _parse_lazy(obj) -> SpaceFile:
    name = obj["generator"]
    if name not in GENERATORS:
        raise SchemaError("generator", f"unknown generator {name!r}; known: {sorted(GENERATORS)}")
    params = obj.get("params", {})
    if not isinstance(params, dict):
        raise SchemaError("params", "expected an object")
    try:
        X = Space(GENERATORS[name](**params))
    except (TypeError, ValueError) as exc:
        raise SchemaError("params", str(exc)) from None
    vs = valueset_from_json(obj["valueset"]) if "valueset" in obj else None
    spec = obj.get("metric", {"kind": "generated"})
    kind = spec.get("kind") if isinstance(spec, dict) else spec
    if kind == "abs":
        M = reference_metric(X)
    elif kind == "generated":
        M = proper_ultrametric(X, vs)
    elif kind == "proper":
        M = proper_metric(X)
    else:
        raise SchemaError("metric.kind", f"unknown lazy metric {kind!r}; use abs, generated or proper")
    A = None
    sub = obj.get("subset")
    if isinstance(sub, list):
        A = Subset(X, [int(v) for v in sub], label="A")
    elif isinstance(sub, dict):
        if sub.get("kind") != "multiples":
            raise SchemaError("subset.kind", "lazy subsets are 'multiples' or an explicit list")
        m = sub.get("modulus")
        residues = sub.get("residues", [0])
        if not isinstance(m, int) or m < 1 or not residues:
            raise SchemaError("subset.modulus", "expected a positive integer modulus and residues")
        rs = frozenset(int(v) % m for v in residues)
        A = Subset(X, predicate=lambda x: x % m in rs, label=f"{sorted(rs)} mod {m}")
    elif sub is not None:
        raise SchemaError("subset", "expected a list or a 'multiples' object")
    return SpaceFile(X, M, A, vs)


def parse_space(data, verify: bool = True, depth: int = 16) -> SpaceFile:
    """Parse a space file. With ``verify`` the claimed flag is cross-checked by the axiom oracle."""
    obj = _loads(data)
    if not isinstance(obj, dict):
        raise SchemaError("json", "top level must be an object")
    sf = _parse_lazy(obj) if "generator" in obj else _parse_finite(obj)
    if verify:
        sf.report = verify_axioms(sf.metric, sf.metric.flag, None if sf.space.is_finite else depth)
    return sf


def point_key(x) -> str:
    return x if isinstance(x, str) else json.dumps(x, separators=(",", ":"))


def encode(value):
    """Recursively make library values JSON-ready."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Report):
        return value.to_json()
    if isinstance(value, ValueSet):
        return valueset_to_json(value)
    if isinstance(value, dict):
        return {point_key(k) if not isinstance(k, str) else k: encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    return value


def space_to_json(X: Space, M: MetricTable, A: Subset | None = None) -> dict:
    pts = X.points()
    out = {
        "points": [str(p) for p in pts],
        "basepoint": str(X.basepoint),
        "metric": [[str(v) for v in row] for row in M.matrix(pts)],
        "flag": M.flag.value,
    }
    if A is not None:
        out["subset"] = [str(a) for a in A.members()]
    if M.valueset is not None:
        out["valueset"] = valueset_to_json(M.valueset)
    return out
