"""Piecewise valuation densities on [0, 1] with closed-form interval masses.

Each player's preferences are a nonnegative density on the unit interval,
normalized to total mass 1. Two families are supported, both with explicit
antiderivatives so interval masses and their inverses never need quadrature:

* ``piecewise_constant``: one height per piece ``[b_k, b_{k+1})``
* ``piecewise_linear``: one value per breakpoint, interpolated linearly

The half-open piece convention matters only for point evaluation; measures
here are atomless, so it never changes an integral.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from functools import cached_property

from .errors import (
    MalformedBreakpoints,
    NegativeTarget,
    NegativeValue,
    OutOfRange,
    ReversedInterval,
    ZeroMass,
)

PIECEWISE_CONSTANT = "piecewise_constant"
PIECEWISE_LINEAR = "piecewise_linear"
KINDS = (PIECEWISE_CONSTANT, PIECEWISE_LINEAR)

#: Shortfall below which the remaining cake counts as "just enough" when
#: inverting a mass target, so accumulated rounding near the right end does
#: not report a feasible target as infeasible.
INVERSE_SLACK = 1e-15


@dataclass(frozen=True)
class Density:
    """A normalized piecewise density. Build instances through
    :func:`validate_and_normalize` (or the convenience constructors below);
    the raw constructor performs no checks.

    ``scale`` records the factor the raw values were divided by, so the
    original description is recoverable.
    """

    kind: str
    breakpoints: tuple[float, ...]
    values: tuple[float, ...]
    scale: float = 1.0

    @cached_property
    def cum_mass(self) -> tuple[float, ...]:
        """Mass of [0, b_k] for every breakpoint b_k."""
        out = [0.0]
        for k in range(len(self.breakpoints) - 1):
            out.append(out[-1] + self._piece_mass(k))
        return tuple(out)

    @property
    def max_height(self) -> float:
        return max(self.values)

    def _piece_mass(self, k: int) -> float:
        width = self.breakpoints[k + 1] - self.breakpoints[k]
        if self.kind == PIECEWISE_CONSTANT:
            return self.values[k] * width
        return 0.5 * (self.values[k] + self.values[k + 1]) * width

    def piece_index(self, x: float) -> int:
        """Index k with b_k <= x < b_{k+1}; the last piece claims x = 1."""
        k = bisect_right(self.breakpoints, x) - 1
        return min(max(k, 0), len(self.breakpoints) - 2)


def validate_and_normalize(kind: str, breakpoints, values) -> Density:
    """Check a raw density description and scale it to total mass 1.

    Raises MalformedBreakpoints, NegativeValue, or ZeroMass on bad input.
    The returned density's ``scale`` is the divisor that was applied.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown density kind {kind!r}, expected one of {KINDS}")
    bp = tuple(float(b) for b in breakpoints)
    if len(bp) < 2:
        raise MalformedBreakpoints("need at least two breakpoints")
    if bp[0] != 0.0 or bp[-1] != 1.0:
        raise MalformedBreakpoints(
            f"breakpoints must run from 0 to 1, got [{bp[0]!r}, {bp[-1]!r}]"
        )
    if any(not lo < hi for lo, hi in zip(bp, bp[1:])):
        raise MalformedBreakpoints("breakpoints must be strictly increasing")
    vals = tuple(float(v) for v in values)
    expected = len(bp) - 1 if kind == PIECEWISE_CONSTANT else len(bp)
    if len(vals) != expected:
        raise MalformedBreakpoints(
            f"{kind} with {len(bp)} breakpoints needs {expected} values, got {len(vals)}"
        )
    if any(not v >= 0.0 for v in vals):  # also catches NaN
        raise NegativeValue("density values must be nonnegative")
    if any(math.isinf(v) for v in vals):
        raise NegativeValue("density values must be finite")
    total = Density(kind, bp, vals).cum_mass[-1]
    if not math.isfinite(total):
        raise NegativeValue("density values overflow when integrated")
    if total <= 0.0:
        raise ZeroMass("density integrates to zero")
    return Density(kind, bp, tuple(v / total for v in vals), total)


def uniform() -> Density:
    """The constant density of mass 1 on [0, 1]."""
    return validate_and_normalize(PIECEWISE_CONSTANT, (0.0, 1.0), (1.0,))


def piecewise_constant(breakpoints, heights) -> Density:
    return validate_and_normalize(PIECEWISE_CONSTANT, breakpoints, heights)


def piecewise_linear(breakpoints, knots) -> Density:
    return validate_and_normalize(PIECEWISE_LINEAR, breakpoints, knots)


def cumulative_mass(d: Density, x: float) -> float:
    """Mass of [0, x], read off the piecewise antiderivative."""
    j = d.piece_index(x)
    u = x - d.breakpoints[j]
    if d.kind == PIECEWISE_CONSTANT:
        return d.cum_mass[j] + d.values[j] * u
    width = d.breakpoints[j + 1] - d.breakpoints[j]
    slope = (d.values[j + 1] - d.values[j]) / width
    return d.cum_mass[j] + u * (d.values[j] + 0.5 * slope * u)


def integral_on(d: Density, a: float, b: float) -> float:
    """Mass of [a, b], clamped into [0, 1] against rounding."""
    if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
        raise OutOfRange(f"interval [{a!r}, {b!r}] not inside [0, 1]")
    if a > b:
        raise ReversedInterval(f"interval endpoints reversed: {a!r} > {b!r}")
    mass = cumulative_mass(d, b) - cumulative_mass(d, a)
    return min(max(mass, 0.0), 1.0)


def generalized_inverse(d: Density, a: float, t: float, slack: float = INVERSE_SLACK):
    """Smallest x in [a, 1] with mass of [a, x] at least t.

    Returns None when the remaining cake holds less than t (minus a small
    slack, so a target equal to the leftover mass up to rounding still
    resolves to the end of the support). For t = 0 the answer is a itself,
    even inside a zero-density plateau: ties resolve to the left end.
    """
    if not 0.0 <= a <= 1.0:
        raise OutOfRange(f"start point {a!r} not inside [0, 1]")
    if not t >= 0.0:
        raise NegativeTarget(f"mass target must be nonnegative, got {t!r}")
    if t == 0.0:
        return a
    total = d.cum_mass[-1]
    start = cumulative_mass(d, a)
    if total - start < t - slack:
        return None
    target = min(start + t, total)
    idx = bisect_left(d.cum_mass, target)
    j = max(idx - 1, 0)
    delta = target - d.cum_mass[j]
    bp = d.breakpoints
    if d.kind == PIECEWISE_CONSTANT:
        u = delta / d.values[j]
    else:
        # Solve v0*u + s*u^2/2 = delta for u; the rationalized root is
        # stable when v0 and s*delta have opposite signs.
        width = bp[j + 1] - bp[j]
        v0 = d.values[j]
        slope = (d.values[j + 1] - v0) / width
        disc = v0 * v0 + 2.0 * slope * delta
        denom = v0 + math.sqrt(max(disc, 0.0))
        u = width if denom <= 0.0 else 2.0 * delta / denom
    x = bp[j] + u
    x = min(max(x, bp[j]), bp[j + 1])
    return min(max(x, a), 1.0)


def plateau_end(d: Density, x: float) -> float:
    """Right end of the zero-density run starting at x (x itself if none).

    Every point in [x, plateau_end(d, x)] carries the same cumulative mass,
    which is what makes cut positions inside a plateau interchangeable.
    """
    if x >= 1.0:
        return 1.0
    end = x
    for k in range(d.piece_index(x), len(d.breakpoints) - 1):
        if d.kind == PIECEWISE_CONSTANT:
            flat = d.values[k] == 0.0
        else:
            flat = d.values[k] == 0.0 and d.values[k + 1] == 0.0
        if not flat:
            break
        end = d.breakpoints[k + 1]
    return min(end, 1.0)
