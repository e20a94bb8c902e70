"""Isotopy-level calculus on the Klein bottle minus a disk (K1) and the
Moebius band minus a disk (M1).

The 1-sided curves of K1 form a line: vertices are integers, edges join
consecutive integers (adjacent curves are disjoint, curves two apart meet
once).  Indices are anchored so that curves 0 and 1 are the cores of the two
crosscaps of the standard two-crosscap model.  A pants decomposition of K1
is either a pair of consecutive 1-sided curves or the unique decomposition
by the 2-sided curve c2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import ValidationError


@dataclass(frozen=True)
class OneSidedCurve:
    index: int


@dataclass(frozen=True)
class Pair:
    """The decomposition {curve lower, curve lower+1}."""

    lower: int

    def __str__(self) -> str:
        return f"Pair:{self.lower}"


@dataclass(frozen=True)
class C2:
    """The unique decomposition by the primitive non-peripheral 2-sided curve."""

    def __str__(self) -> str:
        return "C2"


K1Decomposition = Union[Pair, C2]


def parse_k1(text: str) -> K1Decomposition:
    text = text.strip()
    if text == "C2":
        return C2()
    if text.startswith("Pair:"):
        try:
            return Pair(int(text[5:]))
        except ValueError:
            pass
    raise ValidationError(f"bad K1 decomposition literal {text!r}; expected Pair:<n> or C2")


def neighbors(c: OneSidedCurve) -> list[OneSidedCurve]:
    """The two 1-sided curves disjoint from c; they meet each other once."""
    return [OneSidedCurve(c.index - 1), OneSidedCurve(c.index + 1)]


def twist_c2(c: OneSidedCurve, direction: int) -> OneSidedCurve:
    """The Dehn twist along c2 translates the line of 1-sided curves by one."""
    if direction not in (1, -1):
        raise ValidationError("twist direction must be +1 or -1")
    return OneSidedCurve(c.index + direction)


@dataclass(frozen=True)
class M1Curve:
    """One of the two essential non-peripheral curves of M1."""

    position: str  # "below" | "above" the removed disk
    sided: int = 1
    intersects_other: int = 1


def m1_isotopy_decompositions() -> list[M1Curve]:
    """The two 1-sided isotopy classes of M1, each a pants decomposition."""
    return [M1Curve("below"), M1Curve("above")]


@dataclass(frozen=True)
class K1Move:
    variant: str  # "III" | "IV"
    target: K1Decomposition

    @property
    def literal(self) -> str:
        if self.variant == "III":
            return f"III@{self.target}"
        return f"IV@{self.target}"


def k1_move_adjacency(
    d: K1Decomposition, *, framings: Sequence[int] = (0,)
) -> list[K1Move]:
    """Single-move neighbors of a K1 decomposition.

    A III-move replaces one curve of a pair by the other core of the
    complementary M1, shifting the pair by one.  A IV-move exchanges a pair
    with C2; splitting C2 needs an explicit framing choice, one per entry in
    ``framings``.
    """
    if isinstance(d, Pair):
        return [
            K1Move("III", Pair(d.lower - 1)),
            K1Move("III", Pair(d.lower + 1)),
            K1Move("IV", C2()),
        ]
    if isinstance(d, C2):
        return [K1Move("IV", Pair(n)) for n in framings]
    raise ValidationError(f"not a K1 decomposition: {d!r}")


def k1_bfs_path(
    start: K1Decomposition,
    goal: K1Decomposition,
    *,
    window: int = 25,
    moves: str = "all",
) -> list[K1Move]:
    """Shortest move path within the window {Pair(n): |n| <= window} + {C2}.

    ``moves`` restricts the edge set: "all" or "III".
    """
    framings = range(-window, window + 1)

    def ok(node: K1Decomposition) -> bool:
        return isinstance(node, C2) or abs(node.lower) <= window

    if not (ok(start) and ok(goal)):
        raise ValidationError(f"start/goal outside window {window}")
    from collections import deque

    prev: dict[K1Decomposition, tuple[K1Decomposition, K1Move]] = {}
    seen = {start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node == goal:
            path = []
            while node != start:
                node, move = prev[node]
                path.append(move)
            return list(reversed(path))
        for move in k1_move_adjacency(node, framings=framings):
            if moves == "III" and move.variant != "III":
                continue
            target = move.target
            if not ok(target) or target in seen:
                continue
            seen.add(target)
            prev[target] = (node, move)
            queue.append(target)
    raise ValidationError("goal not reachable inside the window")
