"""The four elementary moves as graph rewrites, macros, and move-graph search.

Move semantics at the decorated-graph level:

* I   -- flip in a one-holed torus; acts on isotopy classes, so it leaves the
         graph unchanged.  Site: the vertex carrying an unflipped self-loop.
* II  -- the four-holed-sphere rewiring.  Site: an internal edge between two
         distinct vertices plus one of the two nontrivial regroupings of the
         four outer slots.  The flip of the acted edge is first normalized to
         false by reorienting one endpoint pants; outer flips carry over.
* III -- slide of a 1-sided curve.  Site: a crosscap leaf.  Sliding the core
         across the crosscap reverses the framing of an adjacent gluing, so
         the rewrite toggles the flip of the edge at the lowest other slot of
         the same pants (a no-op when both other slots hold leaves).  Under
         crosscap absorption this is invisible to canonical keys.
* IV  -- exchange of a 1-sided pair with a 2-sided curve.  IV_merge replaces
         two crosscap leaves at one vertex by a flipped self-loop; IV_split
         is the inverse.

Slot bookkeeping after Move II is deterministic: the new vertices carry
[first of pair, second of pair, new edge], which makes both regroupings
involutions at the canonical-key level.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .decomposition import (
    CROSSCAP,
    CanonicalKey,
    Edge,
    Leaf,
    PantsDecomposition,
    canonical_key,
    enumerate_types,
    is_orientable_decomposition,
    key_digest,
    validate,
)
from .errors import (
    InapplicableMoveError,
    SearchBudgetExceededError,
    ValidationError,
)
from .surfaces import Surface

REGROUPS = ("AC|BD", "AD|BC")

_LITERAL_RE = re.compile(r"^(I|II|III|IVmerge|IVsplit)@([^:]+)(?::(AC\|BD|AD\|BC))?$")


@dataclass(frozen=True)
class Move:
    variant: str  # "I" | "II" | "III" | "IV_merge" | "IV_split"
    site: str  # vertex "v3", edge "e2", or crosscap leaf label
    regroup: Optional[str] = None  # Move II only

    @property
    def literal(self) -> str:
        name = {"IV_merge": "IVmerge", "IV_split": "IVsplit"}.get(self.variant, self.variant)
        if self.variant == "II":
            return f"{name}@{self.site}:{self.regroup}"
        return f"{name}@{self.site}"

    def __str__(self) -> str:
        return self.literal


def parse_move(literal: str) -> Move:
    match = _LITERAL_RE.match(literal.strip())
    if not match:
        raise ValidationError(f"bad move literal {literal!r}")
    name, site, regroup = match.groups()
    variant = {"IVmerge": "IV_merge", "IVsplit": "IV_split"}.get(name, name)
    if variant == "II":
        if regroup is None:
            raise ValidationError(f"move II needs a regrouping: {literal!r}")
    elif regroup is not None:
        raise ValidationError(f"only move II takes a regrouping: {literal!r}")
    return Move(variant, site, regroup)


def inverse_move(move: Move) -> Move:
    """The literal undoing `move` when applied to its own result."""
    if move.variant == "IV_merge":
        return Move("IV_split", move.site)
    if move.variant == "IV_split":
        return Move("IV_merge", move.site)
    return move  # I, II (per regrouping) and III are involutions


# -- applicability ------------------------------------------------------------


def _loop_at(d: PantsDecomposition, vertex: int) -> Optional[tuple[int, Edge]]:
    for j, e in enumerate(d.edges):
        if e.is_loop and e.a[0] == vertex:
            return j, e
    return None


def applicable_moves(d: PantsDecomposition) -> list[Move]:
    """All move sites present in d, in a fixed deterministic order."""
    moves: list[Move] = []
    for j, e in enumerate(d.edges):
        if e.is_loop and not e.flip:
            moves.append(Move("I", f"v{e.a[0]}"))
    for j, e in enumerate(d.edges):
        if not e.is_loop:
            for regroup in REGROUPS:
                moves.append(Move("II", f"e{j}", regroup))
    for leaf in d.leaves:
        if leaf.kind == CROSSCAP:
            moves.append(Move("III", leaf.label))
    cc_per_vertex: dict[int, int] = {}
    for leaf in d.leaves:
        if leaf.kind == CROSSCAP:
            cc_per_vertex[leaf.at[0]] = cc_per_vertex.get(leaf.at[0], 0) + 1
    for v in sorted(cc_per_vertex):
        if cc_per_vertex[v] >= 2:
            moves.append(Move("IV_merge", f"v{v}"))
    for j, e in enumerate(d.edges):
        if e.is_loop and e.flip:
            moves.append(Move("IV_split", f"v{e.a[0]}"))
    return moves


# -- application ---------------------------------------------------------------


def _parse_vertex(d: PantsDecomposition, site: str) -> int:
    if not site.startswith("v"):
        raise ValidationError(f"expected a vertex site, got {site!r}")
    try:
        v = int(site[1:])
    except ValueError:
        raise ValidationError(f"bad vertex site {site!r}") from None
    if not 0 <= v < d.pants:
        raise InapplicableMoveError(f"no vertex {site} in a {d.pants}-pants graph")
    return v


def _slot_owner(d: PantsDecomposition, ref: tuple[int, int]) -> tuple:
    """Descriptor ("edge", idx, "a"|"b") or ("leaf", idx) for a slot."""
    for j, e in enumerate(d.edges):
        if e.a == ref:
            return ("edge", j, "a")
        if e.b == ref:
            return ("edge", j, "b")
    for i, leaf in enumerate(d.leaves):
        if leaf.at == ref:
            return ("leaf", i)
    raise ValidationError(f"dangling slot {ref}")


def apply_move(d: PantsDecomposition, move: Move) -> PantsDecomposition:
    """Apply one elementary move; raises InapplicableMoveError on a bad site."""
    if move.variant == "I":
        v = _parse_vertex(d, move.site)
        found = _loop_at(d, v)
        if found is None or found[1].flip:
            raise InapplicableMoveError(f"move I needs an unflipped self-loop at {move.site}")
        return d
    if move.variant == "II":
        return _apply_ii(d, move)
    if move.variant == "III":
        return _apply_iii(d, move)
    if move.variant == "IV_merge":
        return _apply_iv_merge(d, move)
    if move.variant == "IV_split":
        return _apply_iv_split(d, move)
    raise ValidationError(f"unknown move variant {move.variant!r}")


def _apply_ii(d: PantsDecomposition, move: Move) -> PantsDecomposition:
    idx, e = d.edge_by_id(move.site)
    if e.is_loop:
        raise InapplicableMoveError(f"move II needs an edge between distinct pants, {move.site} is a loop")
    if move.regroup not in REGROUPS:
        raise ValidationError(f"bad regrouping {move.regroup!r}")
    u, v = e.a[0], e.b[0]

    flips = [ed.flip for ed in d.edges]
    if e.flip:
        # reorient the b-side pants so the acted edge is unflipped
        for j, ed in enumerate(d.edges):
            if ed.is_loop:
                continue
            if ed.a[0] == v or ed.b[0] == v:
                flips[j] = not flips[j]

    def outer(w: int) -> list[tuple]:
        out = []
        for s in (0, 1, 2):
            if (w, s) in (e.a, e.b):
                continue
            out.append(_slot_owner(d, (w, s)))
        return out

    a_out, b_out = outer(u), outer(v)
    A, B = a_out
    C, D = b_out
    if move.regroup == "AC|BD":
        new_u, new_v = [A, C], [B, D]
    else:
        new_u, new_v = [A, D], [C, B]

    place: dict[tuple, tuple[int, int]] = {}
    for s, item in enumerate(new_u):
        place[item] = (u, s)
    for s, item in enumerate(new_v):
        place[item] = (v, s)

    edges = []
    for j, ed in enumerate(d.edges):
        if j == idx:
            edges.append(Edge((u, 2), (v, 2), False))
            continue
        na = place.get(("edge", j, "a"), ed.a)
        nb = place.get(("edge", j, "b"), ed.b)
        edges.append(Edge(na, nb, flips[j]))
    leaves = tuple(
        Leaf(place.get(("leaf", i), leaf.at), leaf.kind, leaf.label)
        for i, leaf in enumerate(d.leaves)
    )
    return PantsDecomposition(d.pants, tuple(edges), leaves)


def _apply_iii(d: PantsDecomposition, move: Move) -> PantsDecomposition:
    leaf = d.leaf_by_label(move.site)
    if leaf.kind != CROSSCAP:
        raise InapplicableMoveError(f"move III needs a crosscap leaf, {move.site} is {leaf.kind}")
    p, slot = leaf.at
    for s in (0, 1, 2):
        if s == slot:
            continue
        owner = _slot_owner(d, (p, s))
        if owner[0] == "edge":
            j = owner[1]
            edges = list(d.edges)
            edges[j] = Edge(edges[j].a, edges[j].b, not edges[j].flip)
            return PantsDecomposition(d.pants, tuple(edges), d.leaves)
    return d  # both other slots are leaves: nothing to reframe


def _apply_iv_merge(d: PantsDecomposition, move: Move) -> PantsDecomposition:
    v = _parse_vertex(d, move.site)
    ccs = sorted(
        (leaf for leaf in d.leaves if leaf.kind == CROSSCAP and leaf.at[0] == v),
        key=lambda leaf: leaf.at[1],
    )
    if len(ccs) < 2:
        raise InapplicableMoveError(f"move IV_merge needs two crosscap leaves at {move.site}")
    first, second = ccs[0], ccs[1]
    leaves = tuple(leaf for leaf in d.leaves if leaf not in (first, second))
    edges = d.edges + (Edge(first.at, second.at, True),)
    return PantsDecomposition(d.pants, edges, leaves)


def _fresh_crosscap_labels(d: PantsDecomposition, count: int) -> list[str]:
    taken = {leaf.label for leaf in d.leaves}
    labels = []
    n = 0
    while len(labels) < count:
        cand = f"cc{n}"
        if cand not in taken:
            labels.append(cand)
        n += 1
    return labels


def _apply_iv_split(d: PantsDecomposition, move: Move) -> PantsDecomposition:
    v = _parse_vertex(d, move.site)
    found = _loop_at(d, v)
    if found is None or not found[1].flip:
        raise InapplicableMoveError(f"move IV_split needs a flipped self-loop at {move.site}")
    idx, loop = found
    s1, s2 = sorted((loop.a[1], loop.b[1]))
    labels = _fresh_crosscap_labels(d, 2)
    edges = tuple(ed for j, ed in enumerate(d.edges) if j != idx)
    leaves = d.leaves + (
        Leaf((v, s1), CROSSCAP, labels[0]),
        Leaf((v, s2), CROSSCAP, labels[1]),
    )
    return PantsDecomposition(d.pants, edges, leaves)


# -- sequences ------------------------------------------------------------------


@dataclass(frozen=True)
class MoveSequence:
    start: PantsDecomposition
    moves: tuple[Move, ...]

    def replay(self) -> list[PantsDecomposition]:
        """All intermediate decompositions, starting with `start`."""
        states = [self.start]
        for move in self.moves:
            states.append(apply_move(states[-1], move))
        return states

    def end(self) -> PantsDecomposition:
        return self.replay()[-1]

    @property
    def literals(self) -> list[str]:
        return [m.literal for m in self.moves]


# -- move graph -------------------------------------------------------------------


@dataclass
class MoveGraph:
    surface: Surface
    pants_count: int
    absorption: bool
    nodes: dict[CanonicalKey, PantsDecomposition]
    directed_edges: list[tuple[CanonicalKey, CanonicalKey, str]]
    components: int

    @property
    def undirected_edges(self) -> list[tuple[CanonicalKey, CanonicalKey, str]]:
        """One edge per unordered key pair, labelled by the move families."""
        families: dict[tuple[CanonicalKey, CanonicalKey], set[str]] = {}
        for k1, k2, literal in self.directed_edges:
            pair = (min(k1, k2), max(k1, k2))
            fam = literal.split("@")[0]
            fam = {"IVmerge": "IV", "IVsplit": "IV"}.get(fam, fam)
            families.setdefault(pair, set()).add(fam)
        return [
            (k1, k2, ",".join(sorted(fams))) for (k1, k2), fams in sorted(families.items())
        ]


def build_move_graph(
    surface: Surface, pants_count: int, *, absorption: bool = True
) -> MoveGraph:
    """Nodes are canonical keys of the surface's types; edges are single moves."""
    reps = enumerate_types(pants_count, surface, absorption=absorption)
    nodes = {canonical_key(d, absorb=absorption): d for d in reps}
    directed: list[tuple[CanonicalKey, CanonicalKey, str]] = []
    for key, d in sorted(nodes.items()):
        for move in applicable_moves(d):
            result = apply_move(d, move)
            target = canonical_key(result, absorb=absorption)
            if target == key:
                continue
            if target not in nodes:
                raise RuntimeError(
                    f"move {move.literal} left the enumerated node set of {surface}"
                )
            directed.append((key, target, move.literal))
    components = _component_count(set(nodes), directed)
    return MoveGraph(surface, pants_count, absorption, nodes, directed, components)


def _component_count(
    keys: set[CanonicalKey], edges: Iterable[tuple[CanonicalKey, CanonicalKey, str]]
) -> int:
    parent = {k: k for k in keys}

    def find(x: CanonicalKey) -> CanonicalKey:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k1, k2, _ in edges:
        parent[find(k1)] = find(k2)
    return len({find(k) for k in keys})


def to_dot(graph: MoveGraph) -> str:
    """Deterministic DOT export with the component count as a graph attribute."""
    lines = [
        "graph pants_moves {",
        f'  label="{graph.surface} ({graph.pants_count} pants)";',
        f"  components={graph.components};",
    ]
    index = {key: i for i, key in enumerate(sorted(graph.nodes))}
    for key in sorted(graph.nodes):
        lines.append(
            f'  n{index[key]} [label="{key_digest(key)}\\n{graph.surface}"];'
        )
    for k1, k2, label in graph.undirected_edges:
        lines.append(f'  n{index[k1]} -- n{index[k2]} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- search -----------------------------------------------------------------------


def find_move_path(
    d1: PantsDecomposition,
    d2: PantsDecomposition,
    *,
    absorption: bool = True,
    budget: int = 200_000,
) -> MoveSequence:
    """BFS at the canonical-key level; the returned sequence replays from d1.

    The search expands concrete decompositions so every recorded site is valid
    on the decomposition it is applied to.
    """
    if validate(d1) != validate(d2):
        raise ValidationError(
            f"decompositions of different surfaces: {validate(d1)} vs {validate(d2)}"
        )
    target = canonical_key(d2, absorb=absorption)
    start_key = canonical_key(d1, absorb=absorption)
    if start_key == target:
        return MoveSequence(d1, ())
    seen: dict[CanonicalKey, tuple] = {start_key: (None, None, d1)}
    queue = deque([start_key])
    while queue:
        key = queue.popleft()
        d = seen[key][2]
        for move in applicable_moves(d):
            result = apply_move(d, move)
            rkey = canonical_key(result, absorb=absorption)
            if rkey in seen:
                continue
            seen[rkey] = (key, move, result)
            if rkey == target:
                moves = []
                k: Optional[CanonicalKey] = rkey
                while seen[k][1] is not None:
                    moves.append(seen[k][1])
                    k = seen[k][0]
                return MoveSequence(d1, tuple(reversed(moves)))
            if len(seen) > budget:
                raise SearchBudgetExceededError(
                    f"visited more than {budget} decomposition types"
                )
            queue.append(rkey)
    raise SearchBudgetExceededError("search space exhausted without reaching the target")


# -- macros: orientability and crosscap reduction ---------------------------------


def _shortest_odd_cycle(d: PantsDecomposition) -> Optional[list[tuple[int, int]]]:
    """Shortest cycle with odd flip sum, as [(edge_idx, from_vertex), ...].

    Flipped self-loops are length-1 odd cycles.  Unflipped loops never help.
    """
    for j, e in enumerate(d.edges):
        if e.is_loop and e.flip:
            return [(j, e.a[0])]
    adjacency: dict[int, list[tuple[int, int, int]]] = {v: [] for v in range(d.pants)}
    for j, e in enumerate(d.edges):
        if e.is_loop:
            continue
        u, v = e.a[0], e.b[0]
        flip = int(e.flip)
        adjacency[u].append((j, v, flip))
        adjacency[v].append((j, u, flip))
    best: Optional[list[tuple[int, int]]] = None
    for start in range(d.pants):
        parent: dict[tuple[int, int], tuple[int, int, int]] = {}
        dist = {(start, 0): 0}
        queue = deque([(start, 0)])
        while queue:
            vertex, par = queue.popleft()
            for j, other, flip in adjacency[vertex]:
                state = (other, par ^ flip)
                if state not in dist:
                    dist[state] = dist[(vertex, par)] + 1
                    parent[state] = (vertex, par, j)
                    queue.append(state)
        if (start, 1) not in dist:
            continue
        if best is not None and dist[(start, 1)] >= len(best):
            continue
        walk: list[tuple[int, int]] = []
        state = (start, 1)
        while state != (start, 0):
            pv, pp, j = parent[state]
            walk.append((j, pv))
            state = (pv, pp)
        walk.reverse()
        best = walk
    return best


def _end_descriptor(d: PantsDecomposition, edge_idx: int, at_vertex: int) -> tuple:
    e = d.edges[edge_idx]
    if e.a[0] == at_vertex:
        return ("edge", edge_idx, "a")
    if e.b[0] == at_vertex:
        return ("edge", edge_idx, "b")
    raise ValidationError(f"edge e{edge_idx} has no end at v{at_vertex}")


def _regroup_pairing(
    d: PantsDecomposition, edge_idx: int, want_a: tuple, want_b: tuple
) -> str:
    """The regrouping of Move II at edge_idx putting want_a and want_b together."""
    e = d.edges[edge_idx]

    def outer(w: int) -> list[tuple]:
        out = []
        for s in (0, 1, 2):
            if (w, s) in (e.a, e.b):
                continue
            out.append(_slot_owner(d, (w, s)))
        return out

    A, B = outer(e.a[0])
    C, D = outer(e.b[0])
    wanted = {want_a, want_b}
    if wanted in ({A, C}, {B, D}):
        return "AC|BD"
    if wanted in ({A, D}, {B, C}):
        return "AD|BC"
    raise ValidationError("requested pairing spans one side of the edge")


def orientify(d: PantsDecomposition) -> MoveSequence:
    """Moves ending at a decomposition whose flip class is trivial.

    Strategy: repeatedly localize the shortest odd-flip cycle with II-moves
    (each shortens it by one) until it is a flipped self-loop, then IV_split
    it into two crosscaps.  Each split lowers the cycle rank, so this stops.
    """
    validate(d)
    moves: list[Move] = []
    cur = d
    for _ in range(10_000):
        if is_orientable_decomposition(cur):
            return MoveSequence(d, tuple(moves))
        walk = _shortest_odd_cycle(cur)
        assert walk is not None
        if len(walk) == 1:
            move = Move("IV_split", f"v{walk[0][1]}")
        else:
            (e1, v0), (e2, v1) = walk[0], walk[1]
            t1 = _end_descriptor(cur, e1, v1)
            if len(walk) >= 3:
                e3, v2 = walk[2]
                t2 = _end_descriptor(cur, e3, v2)
            else:
                t2 = _end_descriptor(cur, e1, v0)
            move = Move("II", f"e{e2}", _regroup_pairing(cur, e2, t1, t2))
        cur = apply_move(cur, move)
        moves.append(move)
    raise RuntimeError("orientify did not terminate")


def _cc_leaves_by_vertex(d: PantsDecomposition) -> dict[int, list[Leaf]]:
    out: dict[int, list[Leaf]] = {}
    for leaf in d.leaves:
        if leaf.kind == CROSSCAP:
            out.setdefault(leaf.at[0], []).append(leaf)
    for leaves in out.values():
        leaves.sort(key=lambda leaf: leaf.at[1])
    return out


def _vertex_path(d: PantsDecomposition, src: int, dst: int) -> list[tuple[int, int]]:
    """Simple path from src to dst as [(edge_idx, from_vertex), ...]."""
    if src == dst:
        return []
    parent: dict[int, tuple[int, int]] = {}
    seen = {src}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for j, e in enumerate(d.edges):
            if e.is_loop:
                continue
            for here, there in ((e.a[0], e.b[0]), (e.b[0], e.a[0])):
                if here == v and there not in seen:
                    seen.add(there)
                    parent[there] = (v, j)
                    queue.append(there)
    if dst not in seen:
        raise ValidationError(f"no path from v{src} to v{dst}")
    walk = []
    v = dst
    while v != src:
        pv, j = parent[v]
        walk.append((j, pv))
        v = pv
    walk.reverse()
    return walk


def reduce_crosscaps(d: PantsDecomposition) -> MoveSequence:
    """Moves ending with at most two 1-sided curves, orientably.

    Requires an orientable decomposition.  Three crosscaps are gathered onto
    adjacent pants by II-moves; merging a pair creates a flipped self-loop,
    which a II past the third crosscap and a III-slide unflips again, so each
    round removes two 1-sided curves and restores orientability.
    """
    validate(d)
    if not is_orientable_decomposition(d):
        raise ValidationError("reduce_crosscaps needs an orientable decomposition; run orientify first")
    moves: list[Move] = []
    cur = d

    def do(move: Move) -> None:
        nonlocal cur
        cur = apply_move(cur, move)
        moves.append(move)

    def transport(cc_label: str, dst: int, final_target: tuple) -> None:
        """II-steps carrying cc_label along a shortest path to dst.

        The last step pairs the crosscap with final_target (another crosscap
        leaf when gathering, or an edge end at dst).  Leaf and edge indices
        are stable under Move II, so descriptors stay valid along the way.
        """
        for _ in range(1_000):
            leaf = cur.leaf_by_label(cc_label)
            walk = _vertex_path(cur, leaf.at[0], dst)
            if not walk:
                raise RuntimeError("transport arrived without its final pairing")
            e1_idx, _ = walk[0]
            cc_desc = ("leaf", list(cur.leaves).index(leaf))
            if len(walk) == 1:
                do(Move("II", f"e{e1_idx}", _regroup_pairing(cur, e1_idx, cc_desc, final_target)))
                return
            e2_idx, v1 = walk[1]
            t2 = _end_descriptor(cur, e2_idx, v1)
            do(Move("II", f"e{e1_idx}", _regroup_pairing(cur, e1_idx, cc_desc, t2)))
        raise RuntimeError("transport did not terminate")

    for _ in range(10_000):
        by_vertex = _cc_leaves_by_vertex(cur)
        total = sum(len(leaves) for leaves in by_vertex.values())
        if total <= 2:
            return MoveSequence(d, tuple(moves))

        triple = [v for v, leaves in by_vertex.items() if len(leaves) >= 3]
        if triple:
            # single pants with three crosscaps: the closed N(3,0)
            v = triple[0]
            keep = by_vertex[v][2].label
            do(Move("IV_merge", f"v{v}"))
            do(Move("III", keep))
            continue

        paired = sorted(v for v, leaves in by_vertex.items() if len(leaves) >= 2)
        if not paired:
            # gather: move one crosscap along a shortest path onto another's pants
            pairs = []
            verts = sorted(by_vertex)
            for i, a in enumerate(verts):
                for b in verts[i + 1 :]:
                    pairs.append((len(_vertex_path(cur, a, b)), a, b))
            _, src, dst = min(pairs)
            label = by_vertex[src][0].label
            target = ("leaf", [l.label for l in cur.leaves].index(by_vertex[dst][0].label))
            transport(label, dst, target)
            continue

        p = paired[0]
        # the gathered pants has slots [cc, cc, E]; E exists since another
        # crosscap lives elsewhere, so the graph has at least two pants
        third_slots = [s for s in (0, 1, 2) if s not in {l.at[1] for l in by_vertex[p][:2]}]
        owner = _slot_owner(cur, (p, third_slots[0]))
        if owner[0] != "edge":
            raise RuntimeError("gathered pants lost its connecting edge")
        edge_idx = owner[1]
        e = cur.edges[edge_idx]
        q = e.b[0] if e.a[0] == p else e.a[0]

        others = [v for v in by_vertex if v != p]
        src = min(others, key=lambda v: len(_vertex_path(cur, v, q)))
        cc3 = by_vertex[src][0].label
        if src != q:
            target = _end_descriptor(cur, edge_idx, q)
            transport(cc3, q, target)
            # recompute: the transport rewired q's slots
            by_vertex = _cc_leaves_by_vertex(cur)
            p = min(v for v, leaves in by_vertex.items() if len(leaves) >= 2)
            third_slots = [s for s in (0, 1, 2) if s not in {l.at[1] for l in by_vertex[p][:2]}]
            owner = _slot_owner(cur, (p, third_slots[0]))
            edge_idx = owner[1]
            e = cur.edges[edge_idx]
            q = e.b[0] if e.a[0] == p else e.a[0]

        do(Move("IV_merge", f"v{p}"))
        # the merge appended the loop; pair one loop end with the third crosscap
        loop_idx, loop = _loop_at(cur, p)  # type: ignore[misc]
        conn = _slot_owner(cur, (p, [s for s in (0, 1, 2) if s not in (loop.a[1], loop.b[1])][0]))
        edge_idx = conn[1]
        loop_end = ("edge", loop_idx, "a")
        cc3_leaf = cur.leaf_by_label(cc3)
        cc3_desc = ("leaf", list(cur.leaves).index(cc3_leaf))
        do(Move("II", f"e{edge_idx}", _regroup_pairing(cur, edge_idx, loop_end, cc3_desc)))
        do(Move("III", cc3))
    raise RuntimeError("reduce_crosscaps did not terminate")
