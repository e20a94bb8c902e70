"""Generalized Dehn-Thurston coordinates.

A vector assigns, over a base decomposition:

* one integer (or real) ``n`` per crosscap leaf -- positive values are
  intersection numbers with the 1-sided curve, ``-2k`` means k parallel
  copies of its 2-sided double cover, ``-2k-1`` means k copies plus the core
  itself;
* one pair ``(m, t)`` per internal edge and per boundary leaf -- ``m >= 0``
  is the intersection number, ``t`` the twist, normalized to ``t >= 0``
  whenever ``m = 0`` (where it counts parallel copies of the curve).

Puncture leaves carry no coordinates.

Decoding materializes the standard-position model: per pants, arc counts for
the five essential arc types (self-arcs wrap around the next slot in the
cyclic slot order); per 2-sided gluing, an identification of marked boundary
points offset by the twist; per crosscap, the antipodal identification.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .decomposition import (
    BOUNDARY,
    CROSSCAP,
    PUNCTURE,
    PantsDecomposition,
    validate,
)
from .errors import NonStandardPositionError, UnrealizableError, ValidationError

Number = Union[int, float]

INT = "int"
REAL = "real"


# -- vector -------------------------------------------------------------------


def crosscap_labels(base: PantsDecomposition) -> list[str]:
    return sorted(leaf.label for leaf in base.leaves_of_kind(CROSSCAP))


def two_sided_ids(base: PantsDecomposition) -> list[str]:
    """Internal edges by index, then boundary labels; punctures excluded."""
    return base.edge_ids + sorted(leaf.label for leaf in base.leaves_of_kind(BOUNDARY))


@dataclass(frozen=True)
class DTVector:
    base: PantsDecomposition
    kind: str  # "int" | "real"
    n: Mapping[str, Number]
    mt: Mapping[str, tuple[Number, Number]]

    def __post_init__(self) -> None:
        validate(self.base)
        if self.kind not in (INT, REAL):
            raise ValidationError(f"bad coordinate kind {self.kind!r}")
        want_n = set(crosscap_labels(self.base))
        want_mt = set(two_sided_ids(self.base))
        if set(self.n) != want_n:
            raise ValidationError(f"n keys {sorted(self.n)} != crosscap labels {sorted(want_n)}")
        if set(self.mt) != want_mt:
            raise ValidationError(f"mt keys {sorted(self.mt)} != 2-sided ids {sorted(want_mt)}")
        for label, value in self.n.items():
            self._check_scalar(value, f"n[{label}]")
        for cid, (m, t) in self.mt.items():
            self._check_scalar(m, f"m[{cid}]")
            self._check_scalar(t, f"t[{cid}]")
            if m < 0:
                raise ValidationError(f"m[{cid}] = {m} < 0")
            if m == 0 and t < 0:
                raise ValidationError(f"t[{cid}] = {t} < 0 with m = 0 (normalized form has t >= 0)")

    def _check_scalar(self, value: Number, what: str) -> None:
        if self.kind == INT:
            if not isinstance(value, int) or isinstance(value, bool):
                raise ValidationError(f"{what} = {value!r} is not an integer")
        else:
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ValidationError(f"{what} = {value!r} is not a real number")

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "kind": self.kind,
            "n": dict(sorted(self.n.items())),
            "mt": {k: list(v) for k, v in sorted(self.mt.items())},
        }

    @staticmethod
    def from_json(doc: dict) -> "DTVector":
        try:
            base = PantsDecomposition.from_json(doc["base"])
            kind = doc["kind"]
            raw_n = doc.get("n", {})
            raw_mt = doc.get("mt", {})
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad coordinate document: {exc}") from exc
        conv = int if kind == INT else float
        n = {str(k): conv(v) for k, v in raw_n.items()}
        mt = {str(k): (conv(v[0]), conv(v[1])) for k, v in raw_mt.items()}
        return DTVector(base, kind, n, mt)


def zero_vector(base: PantsDecomposition, kind: str = INT) -> DTVector:
    zero: Number = 0 if kind == INT else 0.0
    return DTVector(
        base,
        kind,
        {label: zero for label in crosscap_labels(base)},
        {cid: (zero, zero) for cid in two_sided_ids(base)},
    )


# -- slot measures and realizability --------------------------------------------


def _slot_measures(v: DTVector) -> dict[tuple[int, int], Number]:
    base = v.base
    x: dict[tuple[int, int], Number] = {}
    owners = base.slot_map()
    for ref, owner in owners.items():
        if owner[0] == "edge":
            x[ref] = v.mt[f"e{owner[1]}"][0]
        else:
            leaf = base.leaves[owner[1]]
            if leaf.kind == BOUNDARY:
                x[ref] = v.mt[leaf.label][0]
            elif leaf.kind == CROSSCAP:
                x[ref] = 2 * max(v.n[leaf.label], 0)
            else:
                x[ref] = 0
    return x


@dataclass(frozen=True)
class Realizability:
    ok: bool
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def realizable(v: DTVector) -> Realizability:
    """Integer vectors need an even total slot measure on every pants."""
    if v.kind == REAL:
        return Realizability(True)
    x = _slot_measures(v)
    for p in range(v.base.pants):
        total = x[(p, 0)] + x[(p, 1)] + x[(p, 2)]
        if total % 2:
            return Realizability(
                False,
                f"pants {p} has odd slot-measure sum {x[(p,0)]}+{x[(p,1)]}+{x[(p,2)]}={total}",
            )
    return Realizability(True)


def pants_arc_counts(x0: int, x1: int, x2: int) -> dict[tuple[int, int], int]:
    """Arc counts {(i, j): a_ij, (i, i): self count} for one pants.

    If one measure exceeds the sum of the others the excess pairs into
    self-arcs there; otherwise the three band counts solve the endpoint
    equations.
    """
    x = (x0, x1, x2)
    if sum(x) % 2:
        raise UnrealizableError(f"odd slot-measure sum {x}")
    counts = {(0, 0): 0, (1, 1): 0, (2, 2): 0, (0, 1): 0, (0, 2): 0, (1, 2): 0}
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        if x[i] > x[j] + x[k]:
            counts[(i, i)] = (x[i] - x[j] - x[k]) // 2
            counts[tuple(sorted((i, j)))] = x[j]
            counts[tuple(sorted((i, k)))] = x[k]
            return counts
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        counts[tuple(sorted((i, j)))] = (x[i] + x[j] - x[k]) // 2
    return counts


# -- curve systems -----------------------------------------------------------------


@dataclass(frozen=True)
class CurveSystem:
    """Standard-position model: the image shape of decode()."""

    base: PantsDecomposition
    arcs: tuple[Mapping[tuple[int, int], int], ...]  # one dict per pants
    crosscap_pieces: Mapping[str, tuple[int, bool]]  # label -> (double covers, core?)
    parallels: Mapping[str, int]  # curve id -> parallel copies (m = 0 channel)
    twists: Mapping[str, int]  # curve id -> twist (m > 0 channel)

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "arcs": [
                {f"{i}{j}": c for (i, j), c in sorted(a.items()) if c}
                for a in self.arcs
            ],
            "crosscap_pieces": {
                k: {"covers": cov, "core": core}
                for k, (cov, core) in sorted(self.crosscap_pieces.items())
                if cov or core
            },
            "parallels": {k: c for k, c in sorted(self.parallels.items()) if c},
            "twists": dict(sorted(self.twists.items())),
        }

    def serialization(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def decode(v: DTVector) -> CurveSystem:
    """Standard-position curve-and-arc system named by an integer vector."""
    if v.kind != INT:
        raise ValidationError("decode is defined for integer vectors only")
    real = realizable(v)
    if not real:
        raise UnrealizableError(real.reason or "unrealizable vector")
    x = _slot_measures(v)
    arcs = tuple(
        pants_arc_counts(x[(p, 0)], x[(p, 1)], x[(p, 2)]) for p in range(v.base.pants)
    )
    pieces: dict[str, tuple[int, bool]] = {}
    for label in crosscap_labels(v.base):
        n = v.n[label]
        if n < 0:
            k, core = divmod(-n, 2)
            pieces[label] = (k, bool(core))
        else:
            pieces[label] = (0, False)
    parallels: dict[str, int] = {}
    twists: dict[str, int] = {}
    for cid in two_sided_ids(v.base):
        m, t = v.mt[cid]
        if m == 0:
            parallels[cid] = t
        else:
            twists[cid] = t
    return CurveSystem(v.base, arcs, pieces, parallels, twists)


def encode(cs: CurveSystem) -> DTVector:
    """Exact inverse of decode on standard-position systems."""
    base = cs.base
    if len(cs.arcs) != base.pants:
        raise NonStandardPositionError("one arc table per pants required")
    x: dict[tuple[int, int], int] = {}
    for p, table in enumerate(cs.arcs):
        for s in (0, 1, 2):
            measure = 2 * table.get((s, s), 0)
            for o in (0, 1, 2):
                if o != s:
                    measure += table.get(tuple(sorted((s, o))), 0)
            x[(p, s)] = measure
        expect = pants_arc_counts(x[(p, 0)], x[(p, 1)], x[(p, 2)])
        got = {k: table.get(k, 0) for k in expect}
        if got != expect:
            raise NonStandardPositionError(
                f"pants {p} arc table {got} is not the standard pattern {expect}"
            )
    owners = base.slot_map()
    n: dict[str, int] = {}
    mt: dict[str, tuple[int, int]] = {}
    for leaf in base.leaves:
        if leaf.kind == CROSSCAP:
            measure = x[leaf.at]
            covers, core = cs.crosscap_pieces.get(leaf.label, (0, False))
            if measure and (covers or core):
                raise NonStandardPositionError(
                    f"crosscap {leaf.label} carries both strands and closed pieces"
                )
            if measure:
                if measure % 2:
                    raise NonStandardPositionError(
                        f"odd strand count {measure} through crosscap {leaf.label}"
                    )
                n[leaf.label] = measure // 2
            else:
                n[leaf.label] = -(2 * covers + int(core))
        elif leaf.kind == BOUNDARY:
            mt[leaf.label] = (x[leaf.at], 0)
        elif leaf.kind == PUNCTURE and x[leaf.at]:
            raise NonStandardPositionError(f"puncture {leaf.label} carries strands")
    for j, e in enumerate(base.edges):
        if x[e.a] != x[e.b]:
            raise NonStandardPositionError(
                f"edge e{j} has mismatched end measures {x[e.a]} vs {x[e.b]}"
            )
        mt[f"e{j}"] = (x[e.a], 0)
    for cid, (m, _) in mt.items():
        if m > 0:
            if cid not in cs.twists:
                raise NonStandardPositionError(f"missing twist for {cid} with m > 0")
            mt[cid] = (m, cs.twists[cid])
        else:
            copies = cs.parallels.get(cid, 0)
            if copies < 0:
                raise NonStandardPositionError(f"negative parallel count on {cid}")
            mt[cid] = (0, copies)
    for cid in cs.twists:
        if mt.get(cid, (0, 0))[0] == 0:
            raise NonStandardPositionError(f"twist given for {cid} with m = 0")
    for cid, copies in cs.parallels.items():
        if cid not in mt:
            raise NonStandardPositionError(f"parallel copies on unknown curve {cid}")
        if mt[cid][0] > 0 and copies:
            raise NonStandardPositionError(f"parallel copies on {cid} with m > 0")
    return DTVector(base, INT, n, mt)


# -- the marked-point model and components ---------------------------------------

Point = tuple[int, int, int]  # (pants, slot, index)


def _pants_pairing(table: Mapping[tuple[int, int], int], x: Sequence[int]) -> dict[int, dict[int, tuple[int, int]]]:
    """Per-slot position pairing for one pants.

    Slot i's positions run, in the induced boundary orientation:
    [self-arc first ends][band to slot i+1][self-arc second ends][band to i+2].
    Bands pair in reversed order across the two slots; self-arcs nest.
    """
    k = [table.get((i, i), 0) for i in range(3)]

    def band_size_next(i: int) -> int:
        j = (i + 1) % 3
        return table.get(tuple(sorted((i, j))), 0)

    pairing: dict[int, dict[int, tuple[int, int]]] = {0: {}, 1: {}, 2: {}}

    def connect(si: int, pi: int, sj: int, pj: int) -> None:
        pairing[si][pi] = (sj, pj)
        pairing[sj][pj] = (si, pi)

    for i in range(3):
        j = (i + 1) % 3
        a = band_size_next(i)
        start_i = k[i]
        start_j = 2 * k[j] + band_size_next(j)
        for q in range(a):
            connect(i, start_i + q, j, start_j + (a - 1 - q))
    for i in range(3):
        for q in range(k[i]):
            first = q
            second = k[i] + band_size_next(i) + (k[i] - 1 - q)
            connect(i, first, i, second)
    for i in range(3):
        assert len(pairing[i]) == x[i], (table, x, i)
    return pairing


def _glue_maps(v: DTVector, x: dict[tuple[int, int], Number]):
    """(point -> (point, reversal)) across gluings; boundary slots are terminal."""
    base = v.base
    glue: dict[Point, tuple[Point, int]] = {}
    for j, e in enumerate(base.edges):
        m, t = v.mt[f"e{j}"]
        if m == 0:
            continue
        off = t % m
        pa, sa = e.a
        pb, sb = e.b
        for i in range(m):
            if e.flip:
                target = (i + off) % m
            else:
                target = (off - i) % m
            glue[(pa, sa, i)] = ((pb, sb, target), int(e.flip))
            glue[(pb, sb, target)] = ((pa, sa, i), int(e.flip))
    for leaf in base.leaves:
        if leaf.kind == CROSSCAP:
            n = v.n[leaf.label]
            if n <= 0:
                continue
            p, s = leaf.at
            for i in range(2 * n):
                glue[(p, s, i)] = ((p, s, (i + n) % (2 * n)), 1)
    return glue


@dataclass(frozen=True)
class Component:
    closed: bool
    sided: Optional[int]  # 1 or 2 for closed components, None for arcs
    peripheral: bool
    strands: int
    kind: str  # traced | crosscap_core | double_cover | parallel
    detail: str


@dataclass(frozen=True)
class ComponentReport:
    components: tuple[Component, ...]

    def __len__(self) -> int:
        return len(self.components)

    @property
    def closed_components(self) -> list[Component]:
        return [c for c in self.components if c.closed]

    @property
    def arc_components(self) -> list[Component]:
        return [c for c in self.components if not c.closed]


def components(v: DTVector) -> ComponentReport:
    """Connected components of the decoded system.

    Traced components follow the marked points through pants arcs and
    gluings; a closed trace is 1-sided exactly when it crosses an odd number
    of flips and crosscap passes.  Annular pieces (parallel copies, crosscap
    covers and cores) are reported directly.
    """
    if v.kind != INT:
        raise ValidationError("components is defined for integer vectors only")
    real = realizable(v)
    if not real:
        raise UnrealizableError(real.reason or "unrealizable vector")
    cs = decode(v)
    base = v.base
    x = _slot_measures(v)
    pairings = [
        _pants_pairing(cs.arcs[p], [x[(p, 0)], x[(p, 1)], x[(p, 2)]])
        for p in range(base.pants)
    ]
    glue = _glue_maps(v, x)

    def arc_partner(pt: Point) -> Point:
        p, s, i = pt
        s2, i2 = pairings[p][s][i]
        return (p, s2, i2)

    all_points = [(p, s, i) for (p, s), meas in sorted(x.items()) for i in range(meas)]
    visited: set[Point] = set()
    out: list[Component] = []

    def walk(start: Point) -> None:
        """Trace the component through start; start must be unvisited."""
        strands = 0
        reversals = 0
        pt = start
        visited.add(pt)
        closed = True
        while True:
            nxt = arc_partner(pt)
            strands += 1
            visited.add(nxt)
            hop = glue.get(nxt)
            if hop is None:
                closed = False
                break
            pt, rev = hop
            reversals += rev
            if pt == start:
                break
            visited.add(pt)
        if not closed:
            # walk the other way from the start to find the far endpoint
            hop = glue.get(start)
            pt = start
            while hop is not None:
                pt, rev = hop
                visited.add(pt)
                nxt = arc_partner(pt)
                strands += 1
                visited.add(nxt)
                pt = nxt
                hop = glue.get(pt)
            out.append(Component(False, None, False, strands, "traced", "arc"))
        else:
            sided = 1 if reversals % 2 else 2
            out.append(Component(True, sided, False, strands, "traced", "closed trace"))

    # arcs first: start from boundary-terminal marked points
    for pt in all_points:
        if pt not in visited and glue.get(pt) is None:
            walk(pt)
    for pt in all_points:
        if pt not in visited:
            walk(pt)

    for cid, copies in sorted(cs.parallels.items()):
        is_edge = cid in base.edge_ids
        for _ in range(copies):
            out.append(
                Component(True, 2, not is_edge, 0, "parallel", f"copy of {cid}")
            )
    for label, (covers, core) in sorted(cs.crosscap_pieces.items()):
        for _ in range(covers):
            out.append(Component(True, 2, False, 0, "double_cover", f"double cover of {label}"))
        if core:
            out.append(Component(True, 1, False, 0, "crosscap_core", f"core {label}"))
    return ComponentReport(tuple(out))


def intersection_number(v: DTVector, curve_id: str) -> Number:
    """i(., c) for a pants curve: m for 2-sided ids, max(n, 0) for crosscaps."""
    if curve_id in v.mt:
        return v.mt[curve_id][0]
    if curve_id in v.n:
        return max(v.n[curve_id], 0)
    raise ValidationError(f"unknown pants curve {curve_id!r}")


# -- measured-foliation chart ------------------------------------------------------


def chart_labels(base: PantsDecomposition) -> list[str]:
    labels = [f"n:{label}" for label in crosscap_labels(base)]
    for cid in two_sided_ids(base):
        labels.extend([f"fold0:{cid}", f"fold1:{cid}"])
    return labels


def mf_chart(v: DTVector) -> np.ndarray:
    """Coordinates of the foliation space: n passes through, (m,t) folds.

    Each 2-sided pair maps by (m, t) -> (t^2 - m^2, 2tm), the square of
    t + i m, which identifies (0, t) with (0, -t) and is injective for m > 0.
    """
    if v.kind != REAL:
        raise ValidationError("mf_chart is defined for real vectors")
    out: list[float] = [float(v.n[label]) for label in crosscap_labels(v.base)]
    for cid in two_sided_ids(v.base):
        m, t = (float(s) for s in v.mt[cid])
        out.extend([t * t - m * m, 2.0 * t * m])
    return np.array(out, dtype=float)


def projectivize(v: DTVector) -> DTVector:
    """Scale v so the sup-norm of its chart image is 1."""
    if v.kind != REAL:
        raise ValidationError("projectivize is defined for real vectors")
    max_n = max((abs(float(x)) for x in v.n.values()), default=0.0)
    max_fold = 0.0
    for m, t in v.mt.values():
        m, t = float(m), float(t)
        max_fold = max(max_fold, abs(t * t - m * m), abs(2 * t * m))
    if max_n == 0.0 and max_fold == 0.0:
        raise UnrealizableError("cannot projectivize the zero vector")
    scale = math.inf
    if max_n > 0:
        scale = 1.0 / max_n
    if max_fold > 0:
        scale = min(scale, 1.0 / math.sqrt(max_fold))
    n = {label: float(x) * scale for label, x in v.n.items()}
    mt = {cid: (float(m) * scale, float(t) * scale) for cid, (m, t) in v.mt.items()}
    return DTVector(v.base, REAL, n, mt)
