"""Shared exception taxonomy.

Exit codes used by the CLI: 2 validation, 3 unrealizable/inapplicable,
4 search budget exceeded, 5 numeric failure.
"""
from __future__ import annotations


class CrosscapError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 2


class ValidationError(CrosscapError):
    """Structurally invalid input (bad graph, bad literal, bad vector shape)."""

    exit_code = 2


class UnrealizableError(CrosscapError):
    """Data that parses but names no object (odd parity, no genus solution)."""

    exit_code = 3


class InapplicableMoveError(CrosscapError):
    """A move whose site pattern is absent from the target decomposition."""

    exit_code = 3


class NonStandardPositionError(CrosscapError):
    """A curve system that is not in the image shape of decode()."""

    exit_code = 3


class SearchBudgetExceededError(CrosscapError):
    """BFS visited more states than the configured budget."""

    exit_code = 4


class NumericError(CrosscapError):
    """Numerical failure (elliptic trace, ill-conditioned frame, ...)."""

    exit_code = 5
