"""Numerical generalized Fenchel-Nielsen coordinates.

A point assigns a length ``mu > 0`` to each crosscap leaf (the 1-sided
curve; the pants cuff it caps has length ``2 mu``) and a pair
``(ell > 0, theta)`` to each internal edge and boundary leaf.

Holonomy representations are assembled from per-pants Fuchsian blocks in the
upper half-plane.  Matrices are 2x2 real with determinant +-1 up to global
sign; an element with negative determinant acts as z -> Moebius(conjugate z),
so plain matrix multiplication composes actions.  Crosscaps contribute glide
reflections (det -1) whose square is the cuff translation; a flipped edge
contributes a det -1 stable letter.

Twist zero-point: theta = 0 makes the seam feet (endpoints of the
perpendiculars between cuff axes) coincide across a gluing.  Each cuff's
seam runs to the lowest-indexed other slot of its pants.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from .decomposition import (
    BOUNDARY,
    CROSSCAP,
    PUNCTURE,
    PantsDecomposition,
    validate,
)
from .dehn_thurston import crosscap_labels, two_sided_ids
from .errors import NumericError, ValidationError

_EPS = 1e-12


# -- isometries ---------------------------------------------------------------


@dataclass(frozen=True)
class Isometry:
    """2x2 real matrix of determinant +-1, up to global sign.

    The determinant sign is carried symbolically: products of unit-determinant
    factors stay unit-determinant in exact arithmetic, while recomputing
    ad - bc cancels catastrophically once twisting makes the entries large.
    """

    matrix: np.ndarray
    det_sign: int

    @staticmethod
    def of(mat: np.ndarray, det_sign: Optional[int] = None) -> "Isometry":
        mat = np.asarray(mat, dtype=float)
        if det_sign is None:
            det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
            if abs(det) < _EPS:
                raise NumericError("singular matrix is not an isometry")
            mat = mat / math.sqrt(abs(det))
            det_sign = 1 if det > 0 else -1
        return Isometry(_canonical_sign(mat), det_sign)

    @property
    def det(self) -> int:
        return self.det_sign

    @property
    def trace(self) -> float:
        return float(self.matrix[0, 0] + self.matrix[1, 1])

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return Isometry(
            _canonical_sign(self.matrix @ other.matrix),
            self.det_sign * other.det_sign,
        )

    def inverse(self) -> "Isometry":
        a, b = self.matrix[0]
        c, d = self.matrix[1]
        adj = np.array([[d, -b], [-c, a]])
        if self.det_sign < 0:
            adj = -adj
        return Isometry(_canonical_sign(adj), self.det_sign)


def _canonical_sign(mat: np.ndarray) -> np.ndarray:
    flat = mat.reshape(-1)
    for entry in flat:
        if entry != 0.0:
            if entry < 0:
                mat = -mat
            break
    mat = np.array(mat, dtype=float)
    mat.setflags(write=False)
    return mat


def curve_length(g: Isometry) -> float:
    """Translation length of the geodesic representative of g.

    det +1: 2 arccosh(|tr|/2); elliptic traces are rejected.
    det -1 (glide reflection): 2 arcsinh(|tr|/2); the squaring identity
    tr(g^2) = tr(g)^2 + 2 makes length(g) = length(g^2)/2.
    """
    tr = abs(g.trace)
    if g.det == 1:
        if tr < 2.0 - 1e-9:
            raise NumericError(f"elliptic element (|tr| = {tr:.6f} < 2) is not a geodesic class")
        return 2.0 * math.acosh(max(tr / 2.0, 1.0))
    return 2.0 * math.asinh(tr / 2.0)


# -- elementary matrices -------------------------------------------------------


def _translation(length: float) -> np.ndarray:
    """Translation by `length` along the imaginary axis (upward if > 0)."""
    return np.array([[math.exp(length / 2.0), 0.0], [0.0, math.exp(-length / 2.0)]])


def _perp_translation(dist: float) -> np.ndarray:
    """Translation by `dist` along the unit semicircle (through i)."""
    c, s = math.cosh(dist / 2.0), math.sinh(dist / 2.0)
    return np.array([[c, s], [s, c]])


_HALF_TURN = np.array([[0.0, -1.0], [1.0, 0.0]])  # up <-> down on the axis, det +1
_REFLECT = np.array([[0.0, 1.0], [1.0, 0.0]])  # up <-> down reversing sides, det -1


def _glide(mu: float) -> np.ndarray:
    """Glide reflection along the imaginary axis, translation length mu."""
    return np.array([[math.exp(mu / 2.0), 0.0], [0.0, -math.exp(-mu / 2.0)]])


# -- hexagons and pants blocks ----------------------------------------------------


def hexagon_seams(l1: float, l2: float, l3: float) -> tuple[float, float, float]:
    """Seam lengths (s12, s13, s23) of the pants with cuff lengths l1, l2, l3.

    cosh(s_ij) = (cosh(l_i/2) cosh(l_j/2) + cosh(l_k/2))
                 / (sinh(l_i/2) sinh(l_j/2)).
    """
    if min(l1, l2, l3) <= 0:
        raise ValidationError(f"cuff lengths must be positive, got {(l1, l2, l3)}")

    def seam(a: float, b: float, c: float) -> float:
        num = math.cosh(a / 2.0) * math.cosh(b / 2.0) + math.cosh(c / 2.0)
        den = math.sinh(a / 2.0) * math.sinh(b / 2.0)
        return math.acosh(max(num / den, 1.0))

    return (seam(l1, l2, l3), seam(l1, l3, l2), seam(l2, l3, l1))


def _fixed_points(mat: np.ndarray) -> tuple[float, float]:
    """(repelling, attracting) boundary fixed points of a hyperbolic matrix."""
    a, b = mat[0]
    c, d = mat[1]
    if abs(c) < _EPS:
        raise NumericError("axis through infinity; frame construction expects finite fixed points")
    disc = (a + d) ** 2 - 4.0
    if disc <= 0:
        raise NumericError("not a hyperbolic element")
    r = math.sqrt(disc)
    z1 = ((a - d) + r) / (2 * c)
    z2 = ((a - d) - r) / (2 * c)
    # attracting where |derivative| = 1/(c z + d)^2 < 1
    if (c * z1 + d) ** 2 > 1.0:
        return z2, z1
    return z1, z2


def _frame_to_axis(mat: np.ndarray) -> np.ndarray:
    """Isometry taking (0, infty, i) to (repelling, attracting, seam foot).

    The seam foot is the endpoint on mat's axis of the common perpendicular
    from the imaginary axis.  Conjugating mat by the inverse frame yields the
    standard upward translation.
    """
    rep, att = _fixed_points(mat)
    if rep * att <= 0:
        raise NumericError("axis crosses the reference axis; no common perpendicular")
    foot_x = 2.0 * rep * att / (rep + att)
    foot_y = math.sqrt(max(rep * att - foot_x * foot_x, 0.0))
    if foot_y <= 0:
        raise NumericError("degenerate common perpendicular")
    k_sq = (foot_x - rep) / (att - foot_x)
    if k_sq <= 0:
        raise NumericError("frame solve failed")
    k = math.copysign(math.sqrt(k_sq), att - rep)
    frame = np.array([[att * k, rep], [k, 1.0]])
    det = frame[0, 0] * frame[1, 1] - frame[0, 1] * frame[1, 0]
    return frame / math.sqrt(abs(det))


@dataclass
class _PantsBlock:
    cuffs: tuple[float, float, float]
    elements: list[np.ndarray]  # X0, X1, X2 with X0 X1 X2 = 1
    frames: list[np.ndarray]  # standard frame per slot (axis, direction, seam foot)


def _pants_block(l0: float, l1: float, l2: float) -> _PantsBlock:
    s01 = hexagon_seams(l0, l1, l2)[0]
    x0 = _translation(l0)
    r = _perp_translation(s01)
    r_inv = _perp_translation(-s01)
    x1 = r @ _translation(-l1) @ r_inv
    x01 = x0 @ x1
    det = x01[0, 0] * x01[1, 1] - x01[0, 1] * x01[1, 0]
    x2 = np.array([[x01[1, 1], -x01[0, 1]], [-x01[1, 0], x01[0, 0]]]) / det
    frame0 = np.eye(2)
    frame1 = r @ _HALF_TURN
    frame2 = _frame_to_axis(x2)
    return _PantsBlock((l0, l1, l2), [x0, x1, x2], [frame0, frame1, frame2])


# -- FN points --------------------------------------------------------------------


@dataclass(frozen=True)
class FNPoint:
    base: PantsDecomposition
    mu: Mapping[str, float]
    lt: Mapping[str, tuple[float, float]]

    def __post_init__(self) -> None:
        validate(self.base)
        want_mu = set(crosscap_labels(self.base))
        want_lt = set(two_sided_ids(self.base))
        if set(self.mu) != want_mu:
            raise ValidationError(f"mu keys {sorted(self.mu)} != crosscap labels {sorted(want_mu)}")
        if set(self.lt) != want_lt:
            raise ValidationError(f"lt keys {sorted(self.lt)} != 2-sided ids {sorted(want_lt)}")
        for label, value in self.mu.items():
            if not value > 0:
                raise ValidationError(f"mu[{label}] = {value} must be positive")
        for cid, (ell, _) in self.lt.items():
            if not ell > 0:
                raise ValidationError(f"ell[{cid}] = {ell} must be positive")

    def with_theta(self, curve_id: str, theta: float) -> "FNPoint":
        if curve_id not in self.lt:
            raise ValidationError(f"no twist coordinate on {curve_id!r}")
        lt = dict(self.lt)
        lt[curve_id] = (lt[curve_id][0], theta)
        return FNPoint(self.base, self.mu, lt)

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "mu": dict(sorted(self.mu.items())),
            "lt": {k: list(v) for k, v in sorted(self.lt.items())},
        }

    @staticmethod
    def from_json(doc: dict) -> "FNPoint":
        try:
            base = PantsDecomposition.from_json(doc["base"])
            mu = {str(k): float(v) for k, v in doc.get("mu", {}).items()}
            lt = {str(k): (float(v[0]), float(v[1])) for k, v in doc.get("lt", {}).items()}
        except (KeyError, TypeError, IndexError) as exc:
            raise ValidationError(f"bad FN document: {exc}") from exc
        return FNPoint(base, mu, lt)


# -- holonomy ---------------------------------------------------------------------


@dataclass
class Holonomy:
    point: FNPoint
    generators: dict[str, Isometry]

    def evaluate(self, word: str) -> Isometry:
        """Evaluate a whitespace-separated word; a trailing ' inverts a letter."""
        result = Isometry.of(np.eye(2), 1)
        tokens = word.split()
        if not tokens:
            raise ValidationError("empty word")
        for token in tokens:
            invert = token.endswith("'")
            name = token[:-1] if invert else token
            if name not in self.generators:
                raise ValidationError(
                    f"unknown generator {name!r}; have {sorted(self.generators)}"
                )
            g = self.generators[name]
            result = result @ (g.inverse() if invert else g)
        return result


def _cuff_lengths(fn: FNPoint, vertex: int) -> list[float]:
    base = fn.base
    owners = base.slot_map()
    cuffs = []
    for s in (0, 1, 2):
        kind, idx = owners[(vertex, s)]
        if kind == "edge":
            cuffs.append(fn.lt[f"e{idx}"][0])
        else:
            leaf = base.leaves[idx]
            if leaf.kind == BOUNDARY:
                cuffs.append(fn.lt[leaf.label][0])
            elif leaf.kind == CROSSCAP:
                cuffs.append(2.0 * fn.mu[leaf.label])
            else:
                raise ValidationError("holonomy does not support puncture leaves")
    return cuffs


def holonomy(fn: FNPoint) -> Holonomy:
    """Holonomy representation for bases with one or two pants.

    Generators: each boundary leaf and each internal edge contribute their
    cuff element (named by label / edge id); each crosscap leaf contributes
    its glide reflection (named by label); each internal edge not used as
    the connecting edge of a two-pants base contributes a crossing element
    named ``t<edge id>`` whose determinant is -1 exactly when the edge is
    flipped.
    """
    base = fn.base
    validate(base)
    if base.pants > 2:
        raise ValidationError("holonomy assembly supports bases with at most 2 pants")
    if base.leaves_of_kind(PUNCTURE):
        raise ValidationError("holonomy does not support puncture leaves")

    blocks = [_pants_block(*_cuff_lengths(fn, v)) for v in range(base.pants)]
    identity = Isometry.of(np.eye(2))
    placement = [identity for _ in range(base.pants)]
    half_turn = Isometry.of(_HALF_TURN)
    reflect = Isometry.of(_REFLECT)

    def frame_iso(vertex: int, slot: int) -> Isometry:
        return Isometry.of(blocks[vertex].frames[slot])

    tree_edge: Optional[int] = None
    if base.pants == 2:
        for j, e in enumerate(base.edges):
            if not e.is_loop:
                tree_edge = j
                break
        if tree_edge is None:
            raise ValidationError("disconnected two-pants base")
        e = base.edges[tree_edge]
        (pa, sa), (pb, sb) = e.a, e.b
        theta = fn.lt[f"e{tree_edge}"][1]
        flipper = reflect if e.flip else half_turn
        placement[pb] = (
            placement[pa]
            @ frame_iso(pa, sa)
            @ Isometry.of(_translation(theta), 1)
            @ flipper
            @ frame_iso(pb, sb).inverse()
        )

    def global_frame(vertex: int, slot: int) -> Isometry:
        return placement[vertex] @ frame_iso(vertex, slot)

    def global_element(vertex: int, slot: int) -> Isometry:
        raw = Isometry.of(blocks[vertex].elements[slot])
        return placement[vertex] @ raw @ placement[vertex].inverse()

    generators: dict[str, Isometry] = {}
    for leaf in base.leaves:
        v, s = leaf.at
        if leaf.kind == BOUNDARY:
            generators[leaf.label] = global_element(v, s)
        else:  # crosscap glide: square is the cuff element of length 2 mu
            frame = global_frame(v, s)
            glide = Isometry.of(_glide(fn.mu[leaf.label]), -1)
            generators[leaf.label] = frame @ glide @ frame.inverse()
    for j, e in enumerate(base.edges):
        (pa, sa), (pb, sb) = e.a, e.b
        generators[f"e{j}"] = global_element(pa, sa)
        if j == tree_edge:
            continue
        theta = fn.lt[f"e{j}"][1]
        flipper = reflect if e.flip else half_turn
        crossing = (
            global_frame(pa, sa)
            @ Isometry.of(_translation(theta), 1)
            @ flipper
            @ global_frame(pb, sb).inverse()
        )
        generators[f"te{j}"] = crossing
    return Holonomy(fn, generators)


def length_spectrum(fn: FNPoint, probes: Sequence[str]) -> np.ndarray:
    rep = holonomy(fn)
    return np.array([curve_length(rep.evaluate(w)) for w in probes])


def default_probe_family(base: PantsDecomposition) -> list[str]:
    """A fixed finite probe family: generators, then consecutive products."""
    names = [leaf.label for leaf in base.leaves if leaf.kind in (BOUNDARY, CROSSCAP)]
    names += base.edge_ids
    names += [f"te{j}" for j, e in enumerate(base.edges) if base.pants == 1 or e.is_loop or j > 0]
    probes = list(names)
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            probes.append(f"{a} {b}")
            probes.append(f"{a} {b}'")
    return probes


# -- Y-homeomorphism --------------------------------------------------------------


def _y_site(fn: FNPoint, pants: int) -> tuple[str, str, str]:
    base = fn.base
    ccs = sorted(
        leaf.label
        for leaf in base.leaves
        if leaf.kind == CROSSCAP and leaf.at[0] == pants
    )
    if len(ccs) != 2:
        raise ValidationError(
            f"Y-action needs exactly two crosscap leaves at pants {pants}, found {len(ccs)}"
        )
    owners = base.slot_map()
    cc_slots = {base.leaf_by_label(label).at[1] for label in ccs}
    third = [s for s in (0, 1, 2) if s not in cc_slots][0]
    kind, idx = owners[(pants, third)]
    if kind == "edge":
        curve = f"e{idx}"
    else:
        leaf = base.leaves[idx]
        if leaf.kind != BOUNDARY:
            raise ValidationError("the third slot of a Y-site must carry a 2-sided curve")
        curve = leaf.label
    return ccs[0], ccs[1], curve


def y_action(fn: FNPoint, pants: int) -> FNPoint:
    """Push the Moebius band through the crosscap pair at one pants.

    Swaps the two crosscap lengths and adds half the bounding curve's length
    to its twist; all other coordinates are fixed.
    """
    j1, j2, curve = _y_site(fn, pants)
    mu = dict(fn.mu)
    mu[j1], mu[j2] = mu[j2], mu[j1]
    lt = dict(fn.lt)
    ell, theta = lt[curve]
    lt[curve] = (ell, theta + ell / 2.0)
    return FNPoint(fn.base, mu, lt)


def coordinate_order(base: PantsDecomposition) -> list[str]:
    """Flat coordinate order: mu by label, then (ell, theta) pairs by curve."""
    order = [f"mu:{label}" for label in crosscap_labels(base)]
    for cid in two_sided_ids(base):
        order.extend([f"ell:{cid}", f"theta:{cid}"])
    return order


def y_jacobian(base: PantsDecomposition, pants: int) -> list[list[Fraction]]:
    """Exact Jacobian of the (linear) Y-action in coordinate_order."""
    probe = FNPoint(
        base,
        {label: 1.0 for label in crosscap_labels(base)},
        {cid: (1.0, 0.0) for cid in two_sided_ids(base)},
    )
    j1, j2, curve = _y_site(probe, pants)
    order = coordinate_order(base)
    n = len(order)
    jac = [[Fraction(0) for _ in range(n)] for _ in range(n)]
    for i, name in enumerate(order):
        target = name
        if name == f"mu:{j1}":
            target = f"mu:{j2}"
        elif name == f"mu:{j2}":
            target = f"mu:{j1}"
        jac[order.index(target)][i] = Fraction(1)
    jac[order.index(f"theta:{curve}")][order.index(f"ell:{curve}")] += Fraction(1, 2)
    return jac


def exact_determinant(matrix: list[list[Fraction]]) -> Fraction:
    """Fraction-exact determinant by Gaussian elimination."""
    n = len(matrix)
    m = [row[:] for row in matrix]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                factor = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    return det


# -- twist flow -------------------------------------------------------------------


@dataclass(frozen=True)
class TwistSlope:
    slope: float
    ell: float
    kappa: int
    ratio: Optional[float]  # slope / (kappa * ell), None when kappa = 0


def twist_flow_asymptotics(
    fn: FNPoint, curve_id: str, probe: str, kappa: int, steps: int = 50
) -> TwistSlope:
    """Least-squares slope of probe length along full twists of one curve.

    For a probe crossing the curve kappa times the slope approaches
    kappa * ell as the number of full twists grows.
    """
    if curve_id not in fn.lt:
        raise ValidationError(f"no twist coordinate on {curve_id!r}")
    if steps < 2:
        raise ValidationError("need at least 2 twist steps")
    ell, theta0 = fn.lt[curve_id]
    ks = np.arange(1, steps + 1, dtype=float)
    lengths = []
    for k in ks:
        shifted = fn.with_theta(curve_id, theta0 + k * ell)
        rep = holonomy(shifted)
        lengths.append(curve_length(rep.evaluate(probe)))
    slope = float(np.polyfit(ks, np.array(lengths), 1)[0])
    ratio = slope / (kappa * ell) if kappa else None
    return TwistSlope(slope, ell, kappa, ratio)
