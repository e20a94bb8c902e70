"""Independent brute-force component counter for integer DT vectors.

This re-derives the standard-position model from scratch: arc tables are
found by exhaustive search over nonnegative solutions of the endpoint
equations (instead of the closed-form split), every marked point is
materialized as an explicit record, and components are found by following
next-pointers one step at a time.  Only the layout conventions are shared
with the library; the counting machinery is not.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from crosscap.decomposition import BOUNDARY, CROSSCAP, PUNCTURE, PantsDecomposition
from crosscap.dehn_thurston import DTVector


def solve_arc_table(x0: int, x1: int, x2: int) -> dict[tuple[int, int], int]:
    """Unique nonnegative arc family matching the slot measures.

    Searches all candidate tables with at most one self-arc type, where a
    self-arc at slot i forbids the opposite band.  Asserts uniqueness.
    """
    x = (x0, x1, x2)
    solutions = []
    top = max(x) + 1
    for a01, a02, a12 in itertools.product(range(top), repeat=3):
        for self_slot in (None, 0, 1, 2):
            for k in range(0, max(x) // 2 + 1):
                if self_slot is None and k > 0:
                    continue
                if self_slot is not None and k == 0:
                    continue
                table = {
                    (0, 1): a01,
                    (0, 2): a02,
                    (1, 2): a12,
                    (0, 0): 0,
                    (1, 1): 0,
                    (2, 2): 0,
                }
                if self_slot is not None:
                    table[(self_slot, self_slot)] = k
                    opposite = {0: (1, 2), 1: (0, 2), 2: (0, 1)}[self_slot]
                    if table[opposite] != 0:
                        continue
                ok = True
                for i in range(3):
                    measure = 2 * table[(i, i)]
                    for j in range(3):
                        if j != i:
                            measure += table[tuple(sorted((i, j)))]
                    if measure != x[i]:
                        ok = False
                        break
                if ok:
                    solutions.append(table)
    unique = {tuple(sorted(t.items())) for t in solutions}
    assert len(unique) == 1, f"measures {x}: {len(unique)} standard tables"
    return dict(next(iter(unique)))


@dataclass
class MarkedPoint:
    pants: int
    slot: int
    index: int
    arc_next: "MarkedPoint | None" = None
    glue_next: "MarkedPoint | None" = None
    glue_reverses: bool = False


def _build_points(v: DTVector) -> dict[tuple[int, int, int], MarkedPoint]:
    base = v.base
    measures: dict[tuple[int, int], int] = {}
    owners = base.slot_map()
    for ref, owner in owners.items():
        if owner[0] == "edge":
            measures[ref] = v.mt[f"e{owner[1]}"][0]
        else:
            leaf = base.leaves[owner[1]]
            if leaf.kind == BOUNDARY:
                measures[ref] = v.mt[leaf.label][0]
            elif leaf.kind == CROSSCAP:
                measures[ref] = 2 * max(v.n[leaf.label], 0)
            else:
                measures[ref] = 0
    points = {
        (p, s, i): MarkedPoint(p, s, i)
        for (p, s), m in measures.items()
        for i in range(m)
    }

    # pants arcs, laid out slot by slot:
    # [self firsts][band to next slot][self seconds][band to previous slot]
    for p in range(base.pants):
        table = solve_arc_table(*(measures[(p, s)] for s in (0, 1, 2)))
        starts = {}
        for i in range(3):
            j, prev = (i + 1) % 3, (i + 2) % 3
            k = table[(i, i)]
            to_next = table[tuple(sorted((i, j)))]
            starts[i] = {
                "self1": 0,
                "next": k,
                "self2": k + to_next,
                "prev": 2 * k + to_next,
            }
        for i in range(3):
            j = (i + 1) % 3
            band = table[tuple(sorted((i, j)))]
            left = [points[(p, i, starts[i]["next"] + q)] for q in range(band)]
            right = [points[(p, j, starts[j]["prev"] + q)] for q in range(band)]
            for a, b in zip(left, reversed(right)):
                a.arc_next = b
                b.arc_next = a
        for i in range(3):
            k = table[(i, i)]
            firsts = [points[(p, i, starts[i]["self1"] + q)] for q in range(k)]
            seconds = [points[(p, i, starts[i]["self2"] + q)] for q in range(k)]
            for a, b in zip(firsts, reversed(seconds)):
                a.arc_next = b
                b.arc_next = a

    # gluings
    for j, e in enumerate(base.edges):
        m, t = v.mt[f"e{j}"]
        if m == 0:
            continue
        (pa, sa), (pb, sb) = e.a, e.b
        for i in range(m):
            other = (i + t) % m if e.flip else (t - i) % m
            a, b = points[(pa, sa, i)], points[(pb, sb, other)]
            a.glue_next = b
            b.glue_next = a
            a.glue_reverses = b.glue_reverses = e.flip
    for leaf in base.leaves:
        if leaf.kind != CROSSCAP:
            continue
        n = v.n[leaf.label]
        if n <= 0:
            continue
        p, s = leaf.at
        for i in range(2 * n):
            a, b = points[(p, s, i)], points[(p, s, (i + n) % (2 * n))]
            a.glue_next = b
            a.glue_reverses = True
    return points


@dataclass(frozen=True)
class OracleComponent:
    closed: bool
    sided: int | None
    strands: int


def oracle_traced_components(v: DTVector) -> list[OracleComponent]:
    """Follow strands pointer by pointer; one record per traced component."""
    points = _build_points(v)
    seen: set[int] = set()
    out = []
    order = sorted(points, key=lambda key: (points[key].glue_next is not None, key))
    for key in order:
        start = points[key]
        if id(start) in seen:
            continue
        # walk forward: arc step then glue step, until closing or stopping
        strands = 0
        reverses = 0
        node = start
        seen.add(id(node))
        closed = None
        while True:
            partner = node.arc_next
            assert partner is not None
            strands += 1
            seen.add(id(partner))
            if partner.glue_next is None:
                closed = False
                break
            reverses += int(partner.glue_reverses)
            node = partner.glue_next
            if node is start:
                closed = True
                break
            seen.add(id(node))
        if not closed and start.glue_next is not None:
            # started mid-arc: walk the other direction too
            node = start
            while node.glue_next is not None:
                reverses += int(node.glue_reverses)
                node = node.glue_next
                seen.add(id(node))
                partner = node.arc_next
                strands += 1
                seen.add(id(partner))
                node = partner
        sided = None if not closed else (1 if reverses % 2 else 2)
        out.append(OracleComponent(bool(closed), sided, strands))
    return out


def oracle_component_count(v: DTVector) -> int:
    """Traced components plus directly-counted annular pieces."""
    count = len(oracle_traced_components(v))
    for label in v.n:
        n = v.n[label]
        if n < 0:
            count += (-n) // 2 + ((-n) % 2)
    for cid, (m, t) in v.mt.items():
        if m == 0:
            count += t
    return count
