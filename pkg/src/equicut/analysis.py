"""Fairness evaluation of a contiguous division.

Builds the full valuation matrix (every player's value of every piece) and
reports the four classical criteria with margins rather than bare flags:
equitability, proportionality, envy-freeness, and exactness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .measure import integral_on
from .topology import validate_cuts


@dataclass(frozen=True)
class FairnessReport:
    equitable_gap: float
    proportional_ok: bool
    proportional_margin: float
    envy_free_ok: bool
    worst_envy: float
    exact_gap: float
    assigned_values: tuple[float, ...]


def _check_sigma(sigma, n: int) -> tuple[int, ...]:
    sigma = tuple(int(k) for k in sigma)
    if sorted(sigma) != list(range(n)):
        raise DimensionMismatch(f"sigma {sigma!r} is not a permutation of 0..{n - 1}")
    return sigma


def valuation_matrix(densities, cuts, sigma=None) -> np.ndarray:
    """n x n matrix whose (i, j) entry is player i's value of piece j.

    Pieces are indexed by position from the left; who owns which piece is
    sigma's business and only enters through fairness_report. Rows sum to
    each player's total mass, i.e. to 1 up to rounding.
    """
    densities = tuple(densities)
    cuts = tuple(float(x) for x in cuts)
    n = len(densities)
    if len(cuts) != n - 1:
        raise DimensionMismatch(f"expected {n - 1} cuts for {n} players, got {len(cuts)}")
    if sigma is not None:
        _check_sigma(sigma, n)
    validate_cuts(cuts)
    edges = (0.0, *cuts, 1.0)
    m = np.empty((n, n))
    for i, d in enumerate(densities):
        for j in range(n):
            m[i, j] = integral_on(d, edges[j], edges[j + 1])
    return m


def fairness_report(matrix, sigma, tol: float = 1e-9) -> FairnessReport:
    """Judge a division from its valuation matrix and piece assignment.

    Player i's own piece is the one sigma maps to them; the report compares
    own values against each other (equitable gap), against the 1/n ideal
    (proportional margin, exact gap), and against the other pieces through
    their own eyes (worst envy). Flags allow slack tol.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"valuation matrix must be square, got shape {m.shape}")
    n = m.shape[0]
    sigma = _check_sigma(sigma, n)
    inverse = np.empty(n, dtype=int)
    inverse[list(sigma)] = np.arange(n)
    own = m[np.arange(n), inverse]
    fair_share = 1.0 / n
    proportional_margin = float(own.min() - fair_share)
    worst_envy = float((m - own[:, None]).max())
    return FairnessReport(
        equitable_gap=float(own.max() - own.min()),
        proportional_ok=proportional_margin >= -tol,
        proportional_margin=proportional_margin,
        envy_free_ok=worst_envy <= tol,
        worst_envy=worst_envy,
        exact_gap=float(np.abs(m - fair_share).max()),
        assigned_values=tuple(float(v) for v in own),
    )
