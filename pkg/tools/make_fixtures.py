#!/usr/bin/env python3
"""Regenerate the fixture corpus under fixtures/.

Run from the repository root:  python tools/make_fixtures.py
The output is canonical, so rerunning must leave the tree unchanged;
tests assert the checked-in files match these builders.
"""

from pathlib import Path

from cartan import io as descio
from cartan.builders import (
    build_full_relation,
    build_graph_groupoid,
    build_taf_order,
    coboundary_cocycle,
)
from cartan.groupoid import Arrow, FiniteTwistedGroupoid

TWISTED_SEED = 11

GRAPHS = {
    # single edge into a sink
    "graph_edge": (["v", "w"], [("e", "v", "w")]),
    # binary tree of depth two: four sinks, three paths each
    "graph_tree": (
        ["r", "c0", "c1", "l00", "l01", "l10", "l11"],
        [
            ("e0", "r", "c0"),
            ("e1", "r", "c1"),
            ("f00", "c0", "l00"),
            ("f01", "c0", "l01"),
            ("f10", "c1", "l10"),
            ("f11", "c1", "l11"),
        ],
    ),
    # diamond: two same-length paths to one sink, so the order is not strong
    "graph_diamond": (
        ["a", "b", "c", "d"],
        [("ab", "a", "b"), ("ac", "a", "c"), ("bd", "b", "d"), ("cd", "c", "d")],
    ),
}


def taf_fixture(n: int):
    order = build_taf_order(n)
    return descio.from_objects(order.groupoid, order)


def twisted_fixture(n: int, seed: int):
    base = build_full_relation(n)
    groupoid = FiniteTwistedGroupoid(base.units, base.arrows, coboundary_cocycle(base, seed))
    return descio.from_objects(groupoid)


def block_nontotal_fixture():
    """Non-total block order on the full relation over four points.

    Point 2 sits below the mutually incomparable points 1, 3, 4, so the
    up-sets {1,3} and {1,4} are incomparable and the lattice is not a
    nest; totality fails by design.
    """
    groupoid = build_full_relation(4)
    order = frozenset(
        {Arrow(p, p) for p in groupoid.units} | {Arrow("1", "2"), Arrow("3", "2"), Arrow("4", "2")}
    )
    return descio.from_objects(groupoid, order)


def broken_taf_fixture():
    """TAF order over four points with the pair 1 <= 2 removed entirely.

    Neither (1,2) nor (2,1) is in the order, so the order plus its
    inverses no longer spans the algebra: the density pair is strict.
    """
    order = build_taf_order(4)
    return descio.from_objects(order.groupoid, order.arrows - {Arrow("1", "2")})


def main() -> None:
    out = Path(__file__).resolve().parent.parent / "fixtures"
    out.mkdir(exist_ok=True)
    fixtures = {f"taf{n}": taf_fixture(n) for n in (2, 3, 4, 6)}
    for name, (vertices, edges) in GRAPHS.items():
        groupoid, order = build_graph_groupoid(vertices, edges)
        fixtures[name] = descio.from_objects(groupoid, order)
    fixtures["twisted4"] = twisted_fixture(4, TWISTED_SEED)
    fixtures["block_nontotal"] = block_nontotal_fixture()
    fixtures["taf4_broken"] = broken_taf_fixture()
    for name, spec in sorted(fixtures.items()):
        descio.save(out / f"{name}.json", spec)
        print(f"wrote fixtures/{name}.json")


if __name__ == "__main__":
    main()
