"""Surfaces as abstract invariant bundles.

A surface is recorded by (orientable, genus, boundary, punctures).  Punctures
count like boundary components for the Euler characteristic; they are kept as
a separate leaf kind throughout the package.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import UnrealizableError, ValidationError

_LITERAL_RE = re.compile(r"^\s*([FN])\s*\(\s*(\d+)\s*,\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)\s*$")


@dataclass(frozen=True, order=True)
class Surface:
    """F(g,r,s) if orientable else N(g,r,s); s (punctures) defaults to 0."""

    orientable: bool
    genus: int
    boundary: int
    punctures: int = 0

    def __post_init__(self) -> None:
        if self.genus < 0 or self.boundary < 0 or self.punctures < 0:
            raise ValidationError(f"negative invariant in {self!r}")
        if not self.orientable and self.genus < 1:
            raise ValidationError("a non-orientable surface needs genus >= 1")

    @property
    def chi(self) -> int:
        holes = self.boundary + self.punctures
        if self.orientable:
            return 2 - 2 * self.genus - holes
        return 2 - self.genus - holes

    def __str__(self) -> str:
        letter = "F" if self.orientable else "N"
        if self.punctures:
            return f"{letter}({self.genus},{self.boundary},{self.punctures})"
        return f"{letter}({self.genus},{self.boundary})"


@dataclass(frozen=True)
class SurfaceInvariants:
    chi: int
    pants_count: int
    max_crosscaps: int
    admits: bool


def invariants(surface: Surface) -> SurfaceInvariants:
    """Euler characteristic and pants-decomposition cardinalities.

    A pants decomposition exists exactly when chi < 0; each complementary
    pair of pants contributes -1 to chi, so the decomposition has -chi pants.
    On a non-orientable surface at most `genus` of the decomposition curves
    can be 1-sided.
    """
    chi = surface.chi
    admits = chi < 0
    return SurfaceInvariants(
        chi=chi,
        pants_count=-chi if admits else 0,
        max_crosscaps=0 if surface.orientable else surface.genus,
        admits=admits,
    )


def classify(chi: int, orientable: bool, boundary: int, punctures: int = 0) -> Surface:
    """Invert the chi formula; raises UnrealizableError when no genus fits."""
    if boundary < 0 or punctures < 0:
        raise ValidationError("negative boundary or puncture count")
    if chi >= 0:
        raise UnrealizableError(f"chi={chi} is outside the pants range (chi < 0 required)")
    holes = boundary + punctures
    if orientable:
        twice_genus = 2 - chi - holes
        if twice_genus < 0 or twice_genus % 2:
            raise UnrealizableError(
                f"no orientable surface with chi={chi}, r={boundary}, s={punctures}"
                f" (genus would be {twice_genus}/2)"
            )
        return Surface(True, twice_genus // 2, boundary, punctures)
    genus = 2 - chi - holes
    if genus < 1:
        raise UnrealizableError(
            f"no non-orientable surface with chi={chi}, r={boundary}, s={punctures}"
        )
    return Surface(False, genus, boundary, punctures)


def parse_surface(literal: str) -> Surface:
    """Parse `F(g,r)` / `N(g,r,s)` literals (s optional)."""
    match = _LITERAL_RE.match(literal)
    if not match:
        raise ValidationError(f"bad surface literal {literal!r}; expected F(g,r[,s]) or N(g,r[,s])")
    letter, genus, boundary, punctures = match.groups()
    return Surface(
        orientable=letter == "F",
        genus=int(genus),
        boundary=int(boundary),
        punctures=int(punctures) if punctures is not None else 0,
    )
