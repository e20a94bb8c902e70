from __future__ import annotations

import pytest

from crosscap import Surface, UnrealizableError, ValidationError, classify, invariants, parse_surface


def test_invariants_examples():
    n21 = invariants(Surface(False, 2, 1))
    assert (n21.chi, n21.pants_count, n21.max_crosscaps, n21.admits) == (-1, 1, 2, True)
    f11 = invariants(Surface(True, 1, 1))
    assert (f11.chi, f11.pants_count, f11.max_crosscaps, f11.admits) == (-1, 1, 0, True)
    n30 = invariants(Surface(False, 3, 0))
    assert (n30.chi, n30.pants_count, n30.max_crosscaps, n30.admits) == (-1, 1, 3, True)
    annulus = invariants(Surface(True, 0, 2))
    assert annulus.chi == 0 and not annulus.admits


def test_punctures_count_like_boundary_for_chi():
    assert Surface(True, 1, 1, 0).chi == Surface(True, 1, 0, 1).chi
    assert Surface(False, 2, 0, 1).chi == -1


def test_classify_examples():
    assert classify(-1, False, 1, 0) == Surface(False, 2, 1)
    assert classify(-1, True, 1, 0) == Surface(True, 1, 1)
    with pytest.raises(UnrealizableError):
        classify(-2, True, 1, 0)  # genus would be 3/2
    with pytest.raises(UnrealizableError):
        classify(0, True, 2, 0)


def test_classify_round_trips_with_invariants():
    for orientable in (True, False):
        for genus in range(0 if orientable else 1, 7):
            for boundary in range(7):
                for punctures in range(7 - boundary):
                    s = Surface(orientable, genus, boundary, punctures)
                    inv = invariants(s)
                    if not inv.admits:
                        continue
                    assert classify(inv.chi, orientable, boundary, punctures) == s
                    assert inv.pants_count == -inv.chi


def test_non_orientable_needs_genus():
    with pytest.raises(ValidationError):
        Surface(False, 0, 1)


def test_literals():
    assert parse_surface("N(2,1)") == Surface(False, 2, 1)
    assert parse_surface("F(1,1)") == Surface(True, 1, 1)
    assert parse_surface("N(1,0,2)") == Surface(False, 1, 0, 2)
    assert str(Surface(False, 2, 1)) == "N(2,1)"
    assert str(Surface(True, 0, 2, 1)) == "F(0,2,1)"
    with pytest.raises(ValidationError):
        parse_surface("X(1,2)")
