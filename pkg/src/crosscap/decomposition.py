"""Decorated dual graphs of pants decompositions.

A decomposition is a trivalent graph: one vertex per pair of pants, three
slots per vertex.  Each slot is used by exactly one internal-edge end or one
leaf.  Internal edges carry a flip bit (does the gluing reverse the local
pants orientations); leaves are boundary components, punctures, or crosscaps
(1-sided curves).

Flip bits are meaningful only modulo the coboundary action "reverse the
orientation of one pants": that toggles the flip of every non-self-loop edge
at the vertex, so a self-loop's flip bit is coboundary-invariant.
"""
from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from .errors import ValidationError
from .surfaces import Surface

SlotRef = tuple[int, int]

BOUNDARY = "boundary"
PUNCTURE = "puncture"
CROSSCAP = "crosscap"
LEAF_KINDS = (BOUNDARY, PUNCTURE, CROSSCAP)


@dataclass(frozen=True)
class Edge:
    """Internal edge; a self-loop uses two distinct slots of one vertex."""

    a: SlotRef
    b: SlotRef
    flip: bool

    @property
    def is_loop(self) -> bool:
        return self.a[0] == self.b[0]


@dataclass(frozen=True)
class Leaf:
    at: SlotRef
    kind: str
    label: str


@dataclass(frozen=True)
class PantsDecomposition:
    pants: int
    edges: tuple[Edge, ...]
    leaves: tuple[Leaf, ...]

    # -- structure accessors -------------------------------------------------

    def edge_id(self, index: int) -> str:
        return f"e{index}"

    @property
    def edge_ids(self) -> list[str]:
        return [f"e{i}" for i in range(len(self.edges))]

    def edge_by_id(self, edge_id: str) -> tuple[int, Edge]:
        if not edge_id.startswith("e"):
            raise ValidationError(f"bad edge id {edge_id!r}")
        try:
            idx = int(edge_id[1:])
            return idx, self.edges[idx]
        except (ValueError, IndexError):
            raise ValidationError(f"no edge {edge_id!r}") from None

    def leaf_by_label(self, label: str) -> Leaf:
        for leaf in self.leaves:
            if leaf.label == label:
                return leaf
        raise ValidationError(f"no leaf labelled {label!r}")

    def leaves_of_kind(self, kind: str) -> list[Leaf]:
        return [leaf for leaf in self.leaves if leaf.kind == kind]

    def slot_map(self) -> dict[SlotRef, tuple[str, int]]:
        """Map (pants, slot) -> ("edge"|"leaf", index); validates coverage."""
        used: dict[SlotRef, tuple[str, int]] = {}

        def claim(ref: SlotRef, owner: tuple[str, int]) -> None:
            p, s = ref
            if not (0 <= p < self.pants) or s not in (0, 1, 2):
                raise ValidationError(f"slot {ref} out of range for {owner}")
            if ref in used:
                raise ValidationError(f"slot {ref} used by both {used[ref]} and {owner}")
            used[ref] = owner

        for i, edge in enumerate(self.edges):
            if edge.a == edge.b:
                raise ValidationError(f"edge e{i} attaches twice to slot {edge.a}")
            claim(edge.a, ("edge", i))
            claim(edge.b, ("edge", i))
        for i, leaf in enumerate(self.leaves):
            claim(leaf.at, ("leaf", i))
        for p in range(self.pants):
            for s in (0, 1, 2):
                if (p, s) not in used:
                    raise ValidationError(f"dangling slot ({p}, {s})")
        return used

    # -- JSON ------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "pants": self.pants,
            "edges": [
                {"a": list(e.a), "b": list(e.b), "flip": e.flip} for e in self.edges
            ],
            "leaves": [
                {"at": list(l.at), "kind": l.kind, "label": l.label} for l in self.leaves
            ],
        }

    @staticmethod
    def from_json(doc: dict) -> "PantsDecomposition":
        try:
            edges = tuple(
                Edge(a=tuple(e["a"]), b=tuple(e["b"]), flip=bool(e["flip"]))
                for e in doc.get("edges", ())
            )
            leaves = tuple(
                Leaf(at=tuple(l["at"]), kind=l["kind"], label=str(l["label"]))
                for l in doc.get("leaves", ())
            )
            d = PantsDecomposition(pants=int(doc["pants"]), edges=edges, leaves=leaves)
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad decomposition document: {exc}") from exc
        for leaf in leaves:
            if leaf.kind not in LEAF_KINDS:
                raise ValidationError(f"unknown leaf kind {leaf.kind!r}")
        labels = [l.label for l in leaves]
        if len(set(labels)) != len(labels):
            raise ValidationError("duplicate leaf labels")
        return d


# -- validation ---------------------------------------------------------------


def _adjacency(d: PantsDecomposition) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {p: set() for p in range(d.pants)}
    for e in d.edges:
        adj[e.a[0]].add(e.b[0])
        adj[e.b[0]].add(e.a[0])
    return adj


def _check_connected(d: PantsDecomposition) -> None:
    if d.pants == 0:
        raise ValidationError("empty decomposition")
    adj = _adjacency(d)
    seen = {0}
    stack = [0]
    while stack:
        for q in adj[stack.pop()]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    missing = sorted(set(range(d.pants)) - seen)
    if missing:
        raise ValidationError(f"graph is disconnected: pants {missing} unreachable from 0")


def _orientation_witness(d: PantsDecomposition) -> Optional[list[int]]:
    """Vertex orientations making every effective flip false, if any."""
    sigma = [0] * d.pants
    assigned = [False] * d.pants
    incident: dict[int, list[Edge]] = {p: [] for p in range(d.pants)}
    for e in d.edges:
        if not e.is_loop:
            incident[e.a[0]].append(e)
            incident[e.b[0]].append(e)
    for root in range(d.pants):
        if assigned[root]:
            continue
        assigned[root] = True
        stack = [root]
        while stack:
            u = stack.pop()
            for e in incident[u]:
                v = e.b[0] if e.a[0] == u else e.a[0]
                want = sigma[u] ^ int(e.flip)
                if not assigned[v]:
                    assigned[v] = True
                    sigma[v] = want
                    stack.append(v)
    for e in d.edges:
        u, v = e.a[0], e.b[0]
        eff = int(e.flip) if u == v else int(e.flip) ^ sigma[u] ^ sigma[v]
        if eff:
            return None
    return sigma


def is_orientable_decomposition(d: PantsDecomposition) -> bool:
    """True iff the flip-bit class (crosscap leaves ignored) is a coboundary."""
    return _orientation_witness(d) is not None


def validate(d: PantsDecomposition) -> Surface:
    """Check the graph and return the unique surface it assembles."""
    d.slot_map()
    _check_connected(d)
    boundary = len(d.leaves_of_kind(BOUNDARY))
    punctures = len(d.leaves_of_kind(PUNCTURE))
    crosscaps = len(d.leaves_of_kind(CROSSCAP))
    chi = -d.pants
    holes = boundary + punctures
    non_orientable = crosscaps > 0 or not is_orientable_decomposition(d)
    if non_orientable:
        genus = 2 - chi - holes
    else:
        genus = (2 - chi - holes) // 2
    return Surface(not non_orientable, genus, boundary, punctures)


# -- census ---------------------------------------------------------------------


@dataclass(frozen=True)
class CurveCensus:
    one_sided: int
    two_sided_interior: int
    boundary: int
    punctures: int


def curve_census(d: PantsDecomposition) -> CurveCensus:
    """Counts of decomposition curves by kind (boundary curves included)."""
    return CurveCensus(
        one_sided=len(d.leaves_of_kind(CROSSCAP)),
        two_sided_interior=len(d.edges),
        boundary=len(d.leaves_of_kind(BOUNDARY)),
        punctures=len(d.leaves_of_kind(PUNCTURE)),
    )


# -- canonical keys ---------------------------------------------------------------

CanonicalKey = bytes


def canonical_key(d: PantsDecomposition, absorb: bool = True) -> CanonicalKey:
    """Representative-independent serialization of the decorated graph.

    Invariant under pants relabelling, slot permutation, leaf relabelling
    within kind, and the vertex-orientation coboundary action on flips.
    With ``absorb`` (default), flips are additionally quotiented out entirely
    whenever the graph carries a crosscap leaf: sliding a 2-sided gluing over
    a crosscap reverses its framing, and in a connected graph every edge
    admits a path to the crosscap.
    """
    n = d.pants
    leaf_kinds: list[list[str]] = [[] for _ in range(n)]
    for leaf in d.leaves:
        leaf_kinds[leaf.at[0]].append(leaf.kind)
    leaf_tuples = [tuple(sorted(kinds)) for kinds in leaf_kinds]

    flips_dead = absorb and any(leaf.kind == CROSSCAP for leaf in d.leaves)
    edge_ends = [(e.a[0], e.b[0], int(e.flip)) for e in d.edges]

    orientations: Iterable[tuple[int, ...]]
    if flips_dead or not d.edges:
        orientations = [(0,) * n]
    else:
        orientations = list(itertools.product((0, 1), repeat=n))

    best = None
    for perm in itertools.permutations(range(n)):
        vertex_part = tuple(leaf_tuples[old] for old in _inverse_perm(perm))
        if best is not None and (vertex_part,) > (best[1],):
            # vertex_part is the leading component; prune when already larger
            continue
        for orient in orientations:
            tokens = []
            for u, v, flip in edge_ends:
                eff = 0 if flips_dead else (flip if u == v else flip ^ orient[u] ^ orient[v])
                nu, nv = perm[u], perm[v]
                tokens.append((min(nu, nv), max(nu, nv), eff))
            tokens.sort()
            cand = (n, vertex_part, tuple(tokens))
            if best is None or cand < best[0]:
                best = (cand, vertex_part)
    assert best is not None
    return repr(best[0]).encode()


def _inverse_perm(perm: Sequence[int]) -> list[int]:
    inv = [0] * len(perm)
    for old, new in enumerate(perm):
        inv[new] = old
    return inv


def key_digest(key: CanonicalKey) -> str:
    """Short stable digest used in DOT exports and CLI output."""
    return hashlib.sha256(key).hexdigest()[:12]


# -- enumeration ---------------------------------------------------------------

MAX_ENUM_PANTS = 4


def _multigraph_skeletons(n: int) -> Iterator[tuple[tuple[int, ...], dict[tuple[int, int], int]]]:
    """Loop counts per vertex and multiplicities per unordered pair, deg <= 3."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for loops in itertools.product((0, 1), repeat=n):
        base_deg = [2 * l for l in loops]
        for mults in itertools.product(range(4), repeat=len(pairs)):
            deg = list(base_deg)
            ok = True
            for (u, v), m in zip(pairs, mults):
                deg[u] += m
                deg[v] += m
                if deg[u] > 3 or deg[v] > 3:
                    ok = False
                    break
            if not ok:
                continue
            mult_map = {p: m for p, m in zip(pairs, mults) if m}
            if not _pairs_connected(n, mult_map):
                continue
            yield loops, mult_map


def _pairs_connected(n: int, mult_map: dict[tuple[int, int], int]) -> bool:
    if n == 1:
        return True
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (u, v) in mult_map:
        parent[find(u)] = find(v)
    return len({find(x) for x in range(n)}) == 1


def _spanning_tree_pairs(n: int, mult_map: dict[tuple[int, int], int]) -> set[tuple[int, int]]:
    """One copy of each pair used as a tree edge (flip normalized to false)."""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree: set[tuple[int, int]] = set()
    for (u, v) in sorted(mult_map):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            tree.add((u, v))
    return tree


def _skeleton_candidates(
    n: int,
    absorption: bool,
    kinds: tuple[str, ...],
    loops: tuple[int, ...],
    mult_map: dict[tuple[int, int], int],
) -> Iterator[PantsDecomposition]:
    """All decorated, flip-normalized graphs over one multigraph skeleton."""
    free = [
        3 - 2 * loops[v] - sum(m for (u, w), m in mult_map.items() if v in (u, w))
        for v in range(n)
    ]
    tree_pairs = _spanning_tree_pairs(n, mult_map)
    # free-flip positions: loops and all parallel copies beyond the tree copy
    flip_slots: list[tuple] = []
    for v in range(n):
        for _ in range(loops[v]):
            flip_slots.append(("loop", v, 0))
    for pair, m in sorted(mult_map.items()):
        first_tree = pair in tree_pairs
        for copy in range(m):
            if copy == 0 and first_tree:
                continue
            flip_slots.append(("pair", pair, copy))

    for decoration in itertools.product(
        *[itertools.combinations_with_replacement(kinds, free[v]) for v in range(n)]
    ):
        has_crosscap = any(CROSSCAP in dec for dec in decoration)
        if absorption and has_crosscap:
            flip_choices: Iterable[tuple[int, ...]] = [(0,) * len(flip_slots)]
        else:
            flip_choices = itertools.product((0, 1), repeat=len(flip_slots))
        for flips in flip_choices:
            yield _assemble(n, loops, mult_map, decoration, dict(zip(flip_slots, flips)))


def _enumerate_shard(
    args: tuple[int, bool, tuple[str, ...], int, int]
) -> list[tuple[int, int, CanonicalKey, dict]]:
    """Worker: keys for every candidate of the shard's skeletons (JSON-coded)."""
    n, absorption, kinds, shard, jobs = args
    out = []
    for skel_idx, (loops, mult_map) in enumerate(_multigraph_skeletons(n)):
        if skel_idx % jobs != shard:
            continue
        for local_idx, d in enumerate(
            _skeleton_candidates(n, absorption, kinds, loops, mult_map)
        ):
            key = canonical_key(d, absorb=absorption)
            out.append((skel_idx, local_idx, key, d.to_json()))
    return out


@lru_cache(maxsize=32)
def _enumerate_raw(
    pants_count: int, absorption: bool, kinds: tuple[str, ...], jobs: int = 1
) -> tuple[PantsDecomposition, ...]:
    n = pants_count
    best: dict[CanonicalKey, tuple[tuple[int, int], PantsDecomposition]] = {}
    if jobs <= 1:
        for skel_idx, (loops, mult_map) in enumerate(_multigraph_skeletons(n)):
            for local_idx, d in enumerate(
                _skeleton_candidates(n, absorption, kinds, loops, mult_map)
            ):
                key = canonical_key(d, absorb=absorption)
                if key not in best:
                    best[key] = ((skel_idx, local_idx), d)
    else:
        # shard by skeleton; merging by candidate order keeps the result
        # byte-identical to the serial run regardless of the worker count
        from concurrent.futures import ProcessPoolExecutor

        work = [(n, absorption, kinds, shard, jobs) for shard in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for shard_out in pool.map(_enumerate_shard, work):
                for skel_idx, local_idx, key, doc in shard_out:
                    order = (skel_idx, local_idx)
                    if key not in best or order < best[key][0]:
                        best[key] = (order, PantsDecomposition.from_json(doc))
    return tuple(d for _, (_, d) in sorted(best.items()))


def _assemble(
    n: int,
    loops: Sequence[int],
    mult_map: dict[tuple[int, int], int],
    decoration: Sequence[Sequence[str]],
    flip_of: dict[tuple, int],
) -> PantsDecomposition:
    next_slot = [0] * n

    def take(v: int) -> SlotRef:
        s = next_slot[v]
        next_slot[v] += 1
        return (v, s)

    edges: list[Edge] = []
    for v in range(n):
        for _ in range(loops[v]):
            edges.append(Edge(take(v), take(v), bool(flip_of[("loop", v, 0)])))
    for pair, m in sorted(mult_map.items()):
        u, v = pair
        for copy in range(m):
            flip = bool(flip_of.get(("pair", pair, copy), 0))
            edges.append(Edge(take(u), take(v), flip))
    counters = {BOUNDARY: 0, PUNCTURE: 0, CROSSCAP: 0}
    prefix = {BOUNDARY: "b", PUNCTURE: "p", CROSSCAP: "cc"}
    leaves: list[Leaf] = []
    for v in range(n):
        for kind in sorted(decoration[v]):
            label = f"{prefix[kind]}{counters[kind]}"
            counters[kind] += 1
            leaves.append(Leaf(take(v), kind, label))
    return PantsDecomposition(n, tuple(edges), tuple(leaves))


def enumerate_types(
    pants_count: int,
    constraints: Optional[Surface] = None,
    *,
    absorption: bool = True,
    include_punctures: Optional[bool] = None,
    jobs: int = 1,
) -> list[PantsDecomposition]:
    """One representative per canonical key, optionally filtered to a surface.

    Puncture leaves are only generated when asked for (or when the surface
    filter has punctures); the default census is over boundary and crosscap
    leaves.  ``jobs`` shards the generation; the result does not depend on it.
    """
    if not (1 <= pants_count <= MAX_ENUM_PANTS):
        raise ValidationError(
            f"pants_count={pants_count} outside supported range 1..{MAX_ENUM_PANTS}"
        )
    if jobs < 1:
        raise ValidationError("jobs must be at least 1")
    if include_punctures is None:
        include_punctures = constraints is not None and constraints.punctures > 0
    kinds = (BOUNDARY, CROSSCAP, PUNCTURE) if include_punctures else (BOUNDARY, CROSSCAP)
    reps = _enumerate_raw(pants_count, absorption, kinds, jobs)
    if constraints is None:
        return list(reps)
    if -constraints.chi != pants_count:
        return []
    return [d for d in reps if validate(d) == constraints]


def dumps(d: PantsDecomposition) -> str:
    return json.dumps(d.to_json(), sort_keys=True)
