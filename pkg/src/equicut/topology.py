"""Sphere parametrization of cut vectors and the antipodal residual map.

Squaring the coordinates of a unit vector and summing them left to right
yields a nondecreasing cut vector, so the unit sphere in n dimensions
parametrizes all contiguous n-piece divisions. The residual map compares
each piece's value (to its assigned player) against the first piece's,
with signs carried over from the sphere coordinates; it is odd by
construction, F(-e) = -F(e), so it must vanish somewhere on the sphere
(Borsuk-Ulam), and a zero in the positive orthant is exactly an equitable
division. Evaluating its norm at a candidate solution therefore gives a
certificate that does not depend on how the candidate was found.
"""

from __future__ import annotations

import math

from .errors import DimensionMismatch, InvalidCuts, NotOnSphere
from .measure import integral_on

SPHERE_TOL = 1e-12


def _sgn(x: float) -> float:
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


def inf_norm(values) -> float:
    return max((abs(v) for v in values), default=0.0)


def check_on_sphere(e, tol: float = SPHERE_TOL) -> None:
    """Raise NotOnSphere unless the squared norm of e is 1 within tol."""
    if len(e) == 0:
        raise NotOnSphere("empty point")
    s = math.fsum(x * x for x in e)
    if abs(s - 1.0) > tol:
        raise NotOnSphere(f"squared norm is {s!r}, off unit by more than {tol}")


def validate_cuts(cuts) -> None:
    prev = 0.0
    for x in cuts:
        if not 0.0 <= x <= 1.0:
            raise InvalidCuts(f"cut {x!r} outside [0, 1]")
        if x < prev:
            raise InvalidCuts("cuts must be nondecreasing")
        prev = x


def sphere_to_cuts(e) -> tuple[float, ...]:
    """Cut vector whose piece widths are the squared coordinates of e."""
    check_on_sphere(e)
    cuts = []
    s = 0.0
    for x in e[:-1]:
        s += x * x
        cuts.append(min(s, 1.0))
    return tuple(cuts)


def cuts_to_sphere(cuts) -> tuple[float, ...]:
    """Nonnegative-orthant preimage of a cut vector; roundtrips with
    sphere_to_cuts to machine precision."""
    cuts = tuple(cuts)
    validate_cuts(cuts)
    edges = (0.0, *cuts, 1.0)
    return tuple(math.sqrt(max(hi - lo, 0.0)) for lo, hi in zip(edges, edges[1:]))


def residual_map(inst, e) -> tuple[float, ...]:
    """The odd residual F at a sphere point, one component per piece after
    the first. Exact antipodal symmetry holds in floating point because
    negating e flips only the sign factors."""
    e = tuple(float(x) for x in e)
    if len(e) != inst.n:
        raise DimensionMismatch(f"point has {len(e)} coordinates for {inst.n} players")
    check_on_sphere(e)
    densities, sigma = inst.densities, inst.sigma
    first = _sgn(e[0]) * integral_on(densities[sigma[0]], 0.0, min(e[0] * e[0], 1.0))
    out = []
    s = e[0] * e[0]
    for k in range(1, len(e)):
        lo = min(s, 1.0)
        s += e[k] * e[k]
        hi = min(max(s, lo), 1.0)
        term = _sgn(e[k]) * integral_on(densities[sigma[k]], lo, hi)
        out.append(term - first)
    return tuple(out)


def descent_refine(inst, start, tol: float = 1e-9, max_iter: int = 200) -> tuple[float, ...]:
    """Greedy coordinate descent of the squared residual norm on the sphere.

    A local improver, not a global solver: each move perturbs one
    coordinate, renormalizes, and is kept only if the squared norm strictly
    drops, with the step halved once no coordinate improves. The result is
    guaranteed no worse than the start in the max norm.
    """
    e = tuple(float(x) for x in start)
    check_on_sphere(e)

    def sq_norm(point):
        return math.fsum(f * f for f in residual_map(inst, point))

    start_sup = inf_norm(residual_map(inst, e))
    best, best_sq = e, sq_norm(e)
    if start_sup <= tol:
        return e
    step = 0.25
    for _ in range(max_iter):
        improved = False
        for j in range(len(e)):
            for direction in (step, -step):
                cand = list(best)
                cand[j] += direction
                nrm = math.sqrt(math.fsum(c * c for c in cand))
                if nrm == 0.0:
                    continue
                cand = tuple(c / nrm for c in cand)
                sq = sq_norm(cand)
                if sq < best_sq:
                    best, best_sq = cand, sq
                    improved = True
        if inf_norm(residual_map(inst, best)) <= tol:
            break
        if not improved:
            step *= 0.5
            if step < 1e-13:
                break
    if inf_norm(residual_map(inst, best)) > start_sup:
        return e
    return best
