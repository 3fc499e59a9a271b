"""Brute-force oracles for the Hilbert VPM distance.

Two computations that share no arithmetic with the closed form in
``metrics``: the cross-ratio along the line through A and B, and the
Birkhoff M/m bisection on the lifted cone driven only by a feasibility
predicate.
"""

import logging
import math
from functools import partial
from typing import Callable, Optional

from vpm_hilbert.config import get_settings
from vpm_hilbert.domains import lifted_closure_contains, vpm_eps_contains
from vpm_hilbert.exceptions import BoundaryError, DegeneratePencilError, SolverError
from vpm_hilbert.models import ConeElement, EpsilonDomain, SymMat, VpmPoint
from vpm_hilbert.symmat import check_same_dim, pencil_roots

logger = logging.getLogger(__name__)

FeasibilityPredicate = Callable[[ConeElement], bool]

BRACKET_LOW = math.exp(-50.0)
BRACKET_HIGH = math.exp(50.0)
_EXPANSION_FACTOR = math.exp(25.0)
_MAX_EXPANSIONS = 8


def line_exits(a: SymMat, b: SymMat, eps: float = 0.0) -> tuple[float, float]:
    """Parameters where A + t (B - A) leaves the open set -eps I < X < (1 + eps) I.

    Hits of the lower boundary are the roots of det(A + eps I + t D), hits of
    the upper one the roots of det((1 + eps) I - A - t D), with D = B - A.
    """
    d = b - a
    eye = SymMat.identity(a.dim)
    roots = pencil_roots(a + eps * eye, d) + pencil_roots((1.0 + eps) * eye - a, -d)
    finite = [r for r in roots if math.isfinite(r)]
    negative = [r for r in finite if r < 0]
    positive = [r for r in finite if r > 0]
    if not negative or not positive:
        raise SolverError(f"line through A and B did not exit VPM(n) on both sides (roots: {finite})")
    return max(negative), min(positive)


def boundary_intersections(a: VpmPoint, b: VpmPoint) -> tuple[float, float]:
    """Parameters where X(t) = A + t (B - A) leaves VPM(n).

    Returns:
        (t_minus, t_plus) with t_minus < 0 < 1 < t_plus.

    Raises:
        DegeneratePencilError: If A == B.
    """
    check_same_dim(a.mat, b.mat)
    if a.mat == b.mat:
        raise DegeneratePencilError("A == B: the line through A and B is undefined")
    return line_exits(a.mat, b.mat)


def _log_cross_ratio(t_minus: float, t_plus: float) -> float:
    # A sits at t = 0 and B at t = 1
    ta, tb = 0.0, 1.0
    num = abs(ta - t_plus) * abs(t_minus - tb)
    den = abs(t_minus - ta) * abs(tb - t_plus)
    return math.log(num / den)


def hilbert_cross_ratio(a: VpmPoint, b: VpmPoint) -> float:
    """Hilbert distance as the log cross-ratio in the line parameter.

    Equal inputs give 0 by convention.
    """
    if a.mat == b.mat:
        return 0.0
    return _log_cross_ratio(*boundary_intersections(a, b))


def hilbert_cross_ratio_eps(a: SymMat, b: SymMat, eps: EpsilonDomain) -> float:
    """Cross-ratio distance on VPM_eps(n), taken directly against its own boundary.

    Raises:
        BoundaryError: If A or B is not inside VPM_eps(n).
    """
    check_same_dim(a, b)
    for name, x in (("A", a), ("B", b)):
        if not vpm_eps_contains(x, eps):
            raise BoundaryError(f"{name} is not inside VPM_eps(n) for eps={eps.epsilon:g}")
    if a == b:
        return 0.0
    return _log_cross_ratio(*line_exits(a, b, eps.epsilon))


def _combine(x: ConeElement, cx: float, y: ConeElement, cy: float) -> ConeElement:
    return ConeElement(mat=SymMat(entries=cx * x.mat.entries + cy * y.mat.entries), t=cx * x.t + cy * y.t)


def _expand(ok: Callable[[float], bool], value: float, factor: float, what: str) -> float:
    """Move ``value`` geometrically by ``factor`` until ``ok`` holds."""
    for _ in range(_MAX_EXPANSIONS):
        if ok(value):
            return value
        logger.debug("birkhoff bracket: expanding %s past %.3e", what, value)
        value *= factor
    if ok(value):
        return value
    raise SolverError(f"bracket expansion for {what} failed after {_MAX_EXPANSIONS} steps (last bound {value:.3e})")


def _bisect(feasible_at: Callable[[float], bool], lo: float, hi: float, tol: float) -> float:
    """Geometric bisection for the threshold between ``lo`` and ``hi``; returns the midpoint of the final bracket."""
    while hi - lo > tol * hi:
        mid = math.sqrt(lo * hi)
        if mid <= lo or mid >= hi:
            break
        if feasible_at(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def birkhoff_bounds(
    v: ConeElement,
    w: ConeElement,
    feasible: Optional[FeasibilityPredicate] = None,
    tol: Optional[float] = None,
) -> tuple[float, float]:
    """Extreme scalings (M, m) of v against w in the cone order.

    M = inf{lam : lam w - v in closure} and m = sup{mu : v - mu w in closure},
    each found by geometric bisection to relative tolerance ``tol``. The only
    access to the cone is ``feasible``, which defaults to the Cholesky closure
    test of the lifted cone C_n.

    Raises:
        BoundaryError: If ``feasible`` rejects v or w.
        SolverError: If a bracket cannot be established.
    """
    check_same_dim(v.mat, w.mat)
    pred = feasible or partial(lifted_closure_contains, slack=0.0)
    rel = get_settings().bisect_tol if tol is None else tol
    for name, e in (("v", v), ("w", w)):
        if not pred(e):
            raise BoundaryError(f"{name} is not inside the cone")

    def upper_ok(lam: float) -> bool:
        return pred(_combine(w, lam, v, -1.0))

    def lower_ok(mu: float) -> bool:
        return pred(_combine(v, 1.0, w, -mu))

    # M: infeasible below, feasible above.
    hi = _expand(upper_ok, BRACKET_HIGH, _EXPANSION_FACTOR, "M upper bound")
    lo = _expand(lambda lam: not upper_ok(lam), BRACKET_LOW, 1.0 / _EXPANSION_FACTOR, "M lower bound")
    big_m = _bisect(upper_ok, lo, hi, rel)

    # m: feasible below, infeasible above.
    lo = _expand(lower_ok, BRACKET_LOW, 1.0 / _EXPANSION_FACTOR, "m lower bound")
    hi = _expand(lambda mu: not lower_ok(mu), BRACKET_HIGH, _EXPANSION_FACTOR, "m upper bound")
    small_m = _bisect(lambda mu: not lower_ok(mu), lo, hi, rel)

    logger.debug("birkhoff bounds: M=%.12g m=%.12g", big_m, small_m)
    return big_m, small_m


def birkhoff_bisect(
    v: ConeElement,
    w: ConeElement,
    feasible: Optional[FeasibilityPredicate] = None,
    tol: Optional[float] = None,
) -> float:
    """Birkhoff distance log(M / m) from feasibility queries alone."""
    big_m, small_m = birkhoff_bounds(v, w, feasible, tol)
    return max(math.log(big_m / small_m), 0.0)
