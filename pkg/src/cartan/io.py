"""On-disk description format for groupoids, orders and dynamical systems.

A description is a single JSON document with a fixed schema (see the
repository README for the grammar).  Complex numbers are written as
[re, im] pairs, cocycle entries as [[r1, s1], [r2, s2], [re, im]]
triples.  Serialization is canonical: fields in a fixed order, arrows
sorted in the declared point order, cocycle entries equal to one
omitted; parse(serialize(x)) == x for every well-formed description.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .groupoid import Arrow, FiniteTwistedGroupoid, UnitSpace
from .semicrossed import FiniteDynamicalSystem

FORMAT_NAME = "groupoid-spec"
FORMAT_VERSION = 1


class ParseError(ValueError):
    """Malformed description document, annotated with the input position."""

    def __init__(self, message: str, offset: int | None = None, line: int | None = None, column: int | None = None):
        position = ""
        if offset is not None:
            position = f" at offset {offset}"
            if line is not None:
                position += f" (line {line}, column {column})"
        super().__init__(message + position)
        self.offset = offset
        self.line = line
        self.column = column


@dataclass(frozen=True)
class SystemSpec:
    points: tuple[str, ...]
    perm: tuple[tuple[str, str], ...]  # (point, image) pairs, in point order


@dataclass(frozen=True)
class GroupoidSpec:
    """Parsed form of a description document."""

    points: tuple[str, ...]
    arrows: tuple[tuple[str, str], ...]
    cocycle: tuple[tuple[tuple[str, str], tuple[str, str], complex], ...] = ()
    order: tuple[tuple[str, str], ...] | None = None
    system: SystemSpec | None = None


# -- parsing -----------------------------------------------------------------


def parse(text: str) -> GroupoidSpec:
    """Parse a description document, or raise a position-annotated error."""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, offset=exc.pos, line=exc.lineno, column=exc.colno) from None
    return _read_document(document)


def _fail(path: str, message: str):
    raise ParseError(f"{path}: {message}")


def _expect(value, kind, path: str):
    if not isinstance(value, kind):
        _fail(path, f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def _read_pair(value, path: str) -> tuple[str, str]:
    _expect(value, list, path)
    if len(value) != 2:
        _fail(path, f"expected a pair, got {len(value)} entries")
    return (_expect(value[0], str, path + "[0]"), _expect(value[1], str, path + "[1]"))


def _read_complex(value, path: str) -> complex:
    _expect(value, list, path)
    if len(value) != 2 or not all(isinstance(v, (int, float)) for v in value):
        _fail(path, "expected [re, im] with numeric entries")
    return complex(float(value[0]), float(value[1]))


def _read_document(document) -> GroupoidSpec:
    _expect(document, dict, "$")
    if document.get("format") != FORMAT_NAME:
        _fail("$.format", f"expected {FORMAT_NAME!r}")
    if document.get("version") != FORMAT_VERSION:
        _fail("$.version", f"expected {FORMAT_VERSION}")
    known = {"format", "version", "points", "arrows", "cocycle", "order", "system"}
    for key in document:
        if key not in known:
            _fail(f"$.{key}", "unknown field")

    points_raw = _expect(document.get("points"), list, "$.points")
    points = tuple(_expect(p, str, f"$.points[{i}]") for i, p in enumerate(points_raw))

    arrows_raw = _expect(document.get("arrows"), list, "$.arrows")
    arrows = tuple(_read_pair(a, f"$.arrows[{i}]") for i, a in enumerate(arrows_raw))

    cocycle = ()
    if "cocycle" in document:
        entries = _expect(document["cocycle"], list, "$.cocycle")
        triples = []
        for i, entry in enumerate(entries):
            path = f"$.cocycle[{i}]"
            _expect(entry, list, path)
            if len(entry) != 3:
                _fail(path, "expected [[r1, s1], [r2, s2], [re, im]]")
            triples.append(
                (_read_pair(entry[0], path + "[0]"), _read_pair(entry[1], path + "[1]"), _read_complex(entry[2], path + "[2]"))
            )
        cocycle = tuple(triples)

    order = None
    if "order" in document:
        entries = _expect(document["order"], list, "$.order")
        order = tuple(_read_pair(a, f"$.order[{i}]") for i, a in enumerate(entries))

    system = None
    if "system" in document:
        block = _expect(document["system"], dict, "$.system")
        for key in block:
            if key not in {"points", "perm"}:
                _fail(f"$.system.{key}", "unknown field")
        sys_points_raw = _expect(block.get("points"), list, "$.system.points")
        sys_points = tuple(_expect(p, str, f"$.system.points[{i}]") for i, p in enumerate(sys_points_raw))
        perm_raw = _expect(block.get("perm"), list, "$.system.perm")
        perm = tuple(_read_pair(p, f"$.system.perm[{i}]") for i, p in enumerate(perm_raw))
        system = SystemSpec(sys_points, perm)

    return GroupoidSpec(points, arrows, cocycle, order, system)


# -- serialization -----------------------------------------------------------


def serialize(spec: GroupoidSpec) -> str:
    """Canonical text form; stable under parse/serialize round trips."""
    index = {p: i for i, p in enumerate(spec.points)}

    def pair_key(pair):
        return (index.get(pair[0], len(index)), index.get(pair[1], len(index)))

    document: dict = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "points": list(spec.points),
        "arrows": [list(a) for a in sorted(spec.arrows, key=pair_key)],
    }
    entries = [
        [list(left), list(right), [value.real, value.imag]]
        for left, right, value in spec.cocycle
        if value != 1.0 + 0.0j
    ]
    if entries:
        entries.sort(key=lambda e: (pair_key(e[0]), pair_key(e[1])))
        document["cocycle"] = entries
    if spec.order is not None:
        document["order"] = [list(a) for a in sorted(spec.order, key=pair_key)]
    if spec.system is not None:
        document["system"] = {
            "points": list(spec.system.points),
            "perm": [list(p) for p in spec.system.perm],
        }
    return json.dumps(document, indent=2) + "\n"


def load(path) -> GroupoidSpec:
    return parse(Path(path).read_text())


def save(path, spec: GroupoidSpec) -> None:
    Path(path).write_text(serialize(spec))


# -- conversion to and from package objects ----------------------------------


def to_groupoid(spec: GroupoidSpec) -> FiniteTwistedGroupoid:
    units = UnitSpace(spec.points)
    arrows = frozenset(Arrow(r, s) for r, s in spec.arrows)
    cocycle = {(Arrow(*left), Arrow(*right)): value for left, right, value in spec.cocycle}
    return FiniteTwistedGroupoid(units, arrows, cocycle)


def order_arrows(spec: GroupoidSpec) -> frozenset[Arrow] | None:
    if spec.order is None:
        return None
    return frozenset(Arrow(r, s) for r, s in spec.order)


def to_system(spec: GroupoidSpec) -> FiniteDynamicalSystem | None:
    if spec.system is None:
        return None
    return FiniteDynamicalSystem(spec.system.points, dict(spec.system.perm))


def from_objects(
    groupoid: FiniteTwistedGroupoid,
    order=None,
    system: FiniteDynamicalSystem | None = None,
) -> GroupoidSpec:
    """Snapshot package objects into a canonical description."""
    key = groupoid.units.arrow_key
    cocycle = tuple(
        (tuple(a), tuple(b), complex(v))
        for (a, b), v in sorted(groupoid.cocycle.items(), key=lambda kv: (key(kv[0][0]), key(kv[0][1])))
        if complex(v) != 1.0 + 0.0j
    )
    order_pairs = None
    if order is not None:
        arrows = order.arrows if hasattr(order, "arrows") else frozenset(order)
        order_pairs = tuple(tuple(a) for a in sorted(arrows, key=key))
    system_spec = None
    if system is not None:
        system_spec = SystemSpec(system.points, tuple((p, system.phi[p]) for p in system.points))
    return GroupoidSpec(
        groupoid.units.points,
        tuple(tuple(a) for a in groupoid.sorted_arrows),
        cocycle,
        order_pairs,
        system_spec,
    )
