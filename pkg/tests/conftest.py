from __future__ import annotations

import pytest

from crosscap import BOUNDARY, CROSSCAP, Edge, Leaf, PantsDecomposition


@pytest.fixture
def k1_crosscaps() -> PantsDecomposition:
    """Klein bottle minus a disk, decomposed by its two 1-sided curves."""
    return PantsDecomposition(
        1,
        (),
        (
            Leaf((0, 0), CROSSCAP, "cc0"),
            Leaf((0, 1), CROSSCAP, "cc1"),
            Leaf((0, 2), BOUNDARY, "b0"),
        ),
    )


@pytest.fixture
def k1_loop() -> PantsDecomposition:
    """Klein bottle minus a disk, decomposed by its 2-sided curve."""
    return PantsDecomposition(
        1, (Edge((0, 0), (0, 1), True),), (Leaf((0, 2), BOUNDARY, "b0"),)
    )


@pytest.fixture
def torus_loop() -> PantsDecomposition:
    """Torus minus a disk."""
    return PantsDecomposition(
        1, (Edge((0, 0), (0, 1), False),), (Leaf((0, 2), BOUNDARY, "b0"),)
    )


@pytest.fixture
def three_holed_sphere() -> PantsDecomposition:
    return PantsDecomposition(
        1,
        (),
        (
            Leaf((0, 0), BOUNDARY, "b0"),
            Leaf((0, 1), BOUNDARY, "b1"),
            Leaf((0, 2), BOUNDARY, "b2"),
        ),
    )


@pytest.fixture
def n30_crosscaps() -> PantsDecomposition:
    """Closed genus-3 non-orientable surface by three 1-sided curves."""
    return PantsDecomposition(
        1,
        (),
        tuple(Leaf((0, i), CROSSCAP, f"cc{i}") for i in range(3)),
    )


@pytest.fixture
def two_pants_n22() -> PantsDecomposition:
    """Two pants joined by one edge, a crosscap and a boundary on each."""
    return PantsDecomposition(
        2,
        (Edge((0, 1), (1, 1), False),),
        (
            Leaf((0, 0), CROSSCAP, "cc0"),
            Leaf((0, 2), BOUNDARY, "b0"),
            Leaf((1, 0), CROSSCAP, "cc1"),
            Leaf((1, 2), BOUNDARY, "b1"),
        ),
    )
