# GdynamicsSL.py
# V1: Map, inverse, involution, tangent propagation, symmetric trajectories.
"""
The planar map Phi(p, u) = (p^2 (u + 1) - 1, 1/p) and the objects built on it.

- `phi`, `phi_inverse`, `involution`: the map, its inverse and the swap
  (p, u) -> (u, p) that conjugates one into the other.
- `iterate`, `forward_points`: forward orbits.
- `tangent_step`: exact first and second order derivative propagation along
  an orbit, with a running Wronskian accumulator.
- `build_trajectory`: the symmetric minimizing orbit for a given n.

The second half of a trajectory is always filled from the first half through
u_j = p_{n-j}; forward iteration past the midpoint would multiply the error
by roughly rho per step.
"""
import logging
from dataclasses import dataclass

import GnumericsSL
from GnumericsSL import DomainError, InvalidInitialValueError

log = logging.getLogger(__name__)


# --- Points and the map ---

@dataclass(frozen=True)
class Point:
    p: object
    u: object


def involution(pt):
    """(p, u) -> (u, p)."""
    return Point(pt.u, pt.p)


def phi(pt, step=None):
    """One application of the map. Undefined on the u-axis."""
    p, u = pt.p, pt.u
    if p == 0:
        raise DomainError("map undefined at p = 0", step=step, value=p)
    return Point(p * p * (u + 1) - 1, 1 / p)


def phi_inverse(pt, step=None):
    """Inverse map, computed as involution . phi . involution."""
    if pt.u == 0:
        raise DomainError("inverse map undefined at u = 0", step=step, value=pt.u)
    return involution(phi(involution(pt), step=step))


def iterate(start, steps):
    """Returns [start, phi(start), ..., phi^steps(start)]."""
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    points = [start]
    for step in range(steps):
        points.append(phi(points[-1], step=step))
    return points


def forward_points(p0, steps, ctx):
    """
    Forward orbit of (p0, 0) under ``ctx``, requiring p > 0 at every point.

    Raises InvalidInitialValueError with the index of the first point that
    left the region.
    """
    mp = ctx.mp
    current = Point(mp.mpf(p0), mp.zero)
    if current.p <= 0:
        raise InvalidInitialValueError("starting p0 must be positive", step=0, value=current.p)
    points = [current]
    for step in range(steps):
        current = phi(current, step=step)
        if current.p <= 0:
            raise InvalidInitialValueError(
                "forward orbit left the region p > 0", step=step + 1, value=current.p)
        points.append(current)
    return points


# --- Tangent propagation ---

@dataclass(frozen=True)
class TangentState:
    """
    A base point with first (dp, du) and optional second (ddp, ddu) derivatives
    with respect to a curve parameter. ``wronskian`` accumulates
    ddu*dp - du*ddp through its one-step increment identity when the state
    is propagated at second order.
    """
    base: Point
    dp: object
    du: object
    ddp: object = None
    ddu: object = None
    wronskian: object = None

    @property
    def second_order(self):
        return self.ddp is not None and self.ddu is not None

    def wronskian_direct(self):
        if not self.second_order:
            raise ValueError("second derivatives are not being propagated")
        return self.ddu * self.dp - self.du * self.ddp


def tangent_step(ts, second_order=False, step=None):
    """Advance the base by phi and the derivatives by the chain rule."""
    p, u = ts.base.p, ts.base.u
    if p == 0:
        raise DomainError("tangent map undefined at p = 0", step=step, value=p)
    dp, du = ts.dp, ts.du
    p2 = p * p
    new_dp = 2 * p * (u + 1) * dp + p2 * du
    new_du = -dp / p2
    base = Point(p2 * (u + 1) - 1, 1 / p)
    if not second_order:
        return TangentState(base, new_dp, new_du)

    ddp = ts.ddp if ts.ddp is not None else 0 * dp
    ddu = ts.ddu if ts.ddu is not None else 0 * du
    new_ddp = 4 * p * dp * du + p2 * ddu + 2 * (u + 1) * dp * dp + 2 * p * (u + 1) * ddp
    new_ddu = (2 * dp * dp - p * ddp) / (p2 * p)
    w = ts.wronskian if ts.wronskian is not None else 0 * dp
    w = w + 6 * dp * dp / p2 * (p * du + (u + 1) * dp)
    return TangentState(base, new_dp, new_du, new_ddp, new_ddu, w)


# --- Trajectories ---

@dataclass(frozen=True)
class Trajectory:
    """
    Solved orbit for one n: points (p_j, u_j) for j = 0..n and the deviations
    lambda_j = 1 - u_j. ``ctx`` is the context the values live in; ``digits``
    is the precision the trajectory is reported and checked at.
    """
    n: int
    points: tuple
    lambdas: tuple
    ctx: object
    digits: int

    @property
    def p0(self):
        return self.points[0].p

    @property
    def midpoint_index(self):
        return self.n // 2

    def p(self, j):
        return self.points[j].p

    def u(self, j):
        return self.points[j].u

    def norm_index(self, j):
        """Distance of j to the nearer end of the trajectory."""
        return min(j, self.n - j)

    def to_rows(self, places=None):
        places = self.digits if places is None else places
        fmt = GnumericsSL.real_to_decimal
        return [
            {"j": j, "p": fmt(pt.p, places), "u": fmt(pt.u, places), "lambda": fmt(lam, places)}
            for j, (pt, lam) in enumerate(zip(self.points, self.lambdas))
        ]

    def as_dict(self, places=None):
        places = self.digits if places is None else places
        return {"n": self.n, "digits": places, "points": self.to_rows(places)}


def build_trajectory(n, p0, ctx, digits=None):
    """
    Forward-iterate (p0, 0) up to the midpoint k = n // 2 and fill the rest
    by symmetry. ``p0`` should solve the midpoint condition for this n.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    k = n // 2
    try:
        forward = forward_points(p0, k, ctx)
    except DomainError as e:
        raise InvalidInitialValueError(
            f"p0 does not reach the midpoint of an n={n} trajectory: {e}",
            step=e.step, value=e.value) from e

    points = list(forward)
    for j in range(k + 1, n + 1):
        mirror = points[n - j]
        points.append(Point(mirror.u, mirror.p))
    lambdas = tuple(1 - pt.u for pt in points)
    log.debug(f"Built trajectory n={n} at {ctx.working_digits} working digits.")
    return Trajectory(
        n=n,
        points=tuple(points),
        lambdas=lambdas,
        ctx=ctx,
        digits=ctx.digits if digits is None else digits,
    )

# === End of GdynamicsSL.py ===
