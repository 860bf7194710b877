# GsolverSL.py
# V1: Midpoint shooting with sign-only bisection and optional secant polish.
"""
Solves for p_{0,n}, the starting value of the n-trajectory, by shooting on
the half-trajectory midpoint condition:

    odd n = 2k+1:  R(t) = P_k(t) - 1
    even n = 2k:   R(t) = P_k(t) - U_k(t)

with (P_j(t), U_j(t)) = Phi^j(t, 0). R increases strictly in t, so the root
in [1, phi) is unique and bisection only needs residual signs. A candidate
whose orbit hits p <= 0 before the midpoint is below the root.
"""
import math
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import GnumericsSL
import GdynamicsSL
from GnumericsSL import DomainError, PrecCtx, ShallitError

log = logging.getLogger(__name__)


class Residual(NamedTuple):
    value: object
    crashed: bool
    step: int = None


@dataclass(frozen=True)
class ShootResult:
    n: int
    p0: object
    residual: object
    iterations: int
    bracket_lo: object
    bracket_hi: object
    digits: int
    refined: bool = False

    @property
    def width(self):
        return self.bracket_hi - self.bracket_lo

    def as_dict(self, places=None):
        places = self.digits if places is None else places
        fmt = GnumericsSL.real_to_decimal
        return {
            "n": self.n,
            "digits": places,
            "p0": fmt(self.p0, places),
            "residual": fmt(self.residual, places),
            "iterations": self.iterations,
        }


class Solution(NamedTuple):
    shot: ShootResult
    trajectory: object


# --- Residual ---

def residual(n, t, ctx):
    """Midpoint residual R(t) for the n-trajectory, evaluated under ``ctx``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    mp = ctx.mp
    t = mp.mpf(t)
    if t <= 0:
        raise DomainError("shooting candidate must be positive", step=0, value=t)
    k = n // 2
    p, u = t, mp.zero
    for step in range(k):
        if p <= 0:
            return Residual(-mp.one, True, step)
        # inline map step; this loop dominates solver time
        p, u = p * p * (u + 1) - 1, 1 / p
    if n % 2:
        return Residual(p - 1, False)
    return Residual(p - u, False)


# --- Bisection ---

def stop_width(ctx):
    """Bracket width at which bisection stops: 10^-(digits+1)."""
    return ctx.mp.mpf(10) ** (-(ctx.digits + 1))


def max_bisection_iterations(digits):
    return math.ceil(digits * math.log2(10)) + 5


def _secant_switch(n, ctx):
    # the residual is close to linear once the bracket is well inside rho^-k
    return ctx.mp.mpf(10) ** (-(GnumericsSL.conditioning_digits(n) + 3))


def _secant_candidate(a, b, lo, hi):
    """Secant through evaluations a=(x, r), b=(x, r); None if unusable."""
    (xa, ra), (xb, rb) = a, b
    if rb == ra:
        return None
    cand = xb - rb * (xb - xa) / (rb - ra)
    if not cand.context.isfinite(cand) or not (lo < cand < hi):
        return None
    return cand


def solve_p0(n, ctx, refine=False, lo=None):
    """
    Bracket the root of the midpoint residual in [1, phi) down to width
    10^-(digits+1).

    ``lo`` may pass any known lower bound of the root (p_{0,n-1} for
    instance). With ``refine`` on, secant steps replace bisection once the
    bracket is small, always clamped to the current bracket.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    mp = ctx.mp
    lo_t = mp.one if lo is None else max(mp.one, mp.mpf(lo))
    hi_t = GnumericsSL.phi(ctx)
    r_lo = residual(n, lo_t, ctx)
    if r_lo.value > 0 and lo is not None:
        log.warning(f"n={n}: lower bound hint {lo} is above the root; restarting from 1.")
        lo_t = mp.one
        r_lo = residual(n, lo_t, ctx)
    if r_lo.value == 0:
        log.info(f"n={n}: exact root at the lower bracket end.")
        return ShootResult(n, lo_t, r_lo.value, 0, lo_t, lo_t, ctx.digits, refine)
    r_hi = residual(n, hi_t, ctx)
    if r_lo.value > 0 or r_hi.value <= 0:
        raise ShallitError(
            f"n={n}: residual does not change sign on [{lo_t}, {hi_t}] "
            f"(R(lo)={r_lo.value}, R(hi)={r_hi.value})")

    stop = stop_width(ctx)
    switch = _secant_switch(n, ctx) if refine else None
    iterations = 0
    recent = []           # last two non-crashed evaluations, for the secant
    force_bisect = False

    while hi_t - lo_t > stop:
        width = hi_t - lo_t
        cand = None
        if refine and not force_bisect and width < switch and len(recent) == 2:
            cand = _secant_candidate(recent[0], recent[1], lo_t, hi_t)
        used_secant = cand is not None
        if cand is None:
            cand = (lo_t + hi_t) / 2

        r = residual(n, cand, ctx)
        iterations += 1
        if r.value == 0:
            lo_t = hi_t = cand
            r_lo = r
            break
        if r.value < 0:
            lo_t, r_lo = cand, r
        else:
            hi_t, r_hi = cand, r
        if not r.crashed:
            recent = (recent + [(cand, r.value)])[-2:]

        force_bisect = used_secant and (hi_t - lo_t) > width / 2
        if used_secant and len(recent) == 2 and abs(recent[1][0] - recent[0][0]) <= stop:
            # secant has settled; try to close the bracket around it directly
            left = max(lo_t, cand - stop / 2)
            right = min(hi_t, cand + stop / 2)
            r_left = residual(n, left, ctx)
            r_right = residual(n, right, ctx)
            iterations += 2
            if r_left.value <= 0:
                lo_t, r_lo = left, r_left
            if r_right.value > 0:
                hi_t, r_hi = right, r_right

    p0, res = lo_t, r_lo.value
    if refine and abs(r_hi.value) < abs(r_lo.value):
        p0, res = hi_t, r_hi.value
    log.info(f"Solved n={n} at {ctx.digits} digits in {iterations} iterations (refine={refine}).")
    return ShootResult(n, p0, res, iterations, lo_t, hi_t, ctx.digits, refine)


# --- Trajectories ---

def trajectory_context(n, ctx):
    """Context widened so the symmetric fill keeps ``ctx.digits`` digits at the midpoint."""
    return ctx.widened(GnumericsSL.conditioning_digits(n) + ctx.guard)


def solve(n, ctx, refine=False, lo=None):
    """Solve and build the n-trajectory in the widened context."""
    wide = trajectory_context(n, ctx)
    shot = solve_p0(n, wide, refine=refine, lo=lo)
    traj = GdynamicsSL.build_trajectory(n, shot.p0, wide, digits=ctx.digits)
    return Solution(shot, traj)


def solve_trajectory(n, ctx, refine=False):
    return solve(n, ctx, refine=refine).trajectory


def solve_sweep(n_values, ctx, workers=1, refine=False):
    """Independent solves for each n, returned in the order given."""
    n_values = list(n_values)
    if workers <= 1 or len(n_values) < 2:
        return [solve(n, ctx, refine=refine) for n in n_values]
    log.info(f"Solving {len(n_values)} trajectories with {workers} workers.")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda n: solve(n, ctx, refine=refine), n_values))


# --- Limit ---

def solve_limit(digits, margin=4, guard=GnumericsSL.DEFAULT_GUARD):
    """ShootResult for the planner's n; its p0 approximates p0* to ``digits``."""
    import GconstantsSL  # planner lives with the constants
    budget = GconstantsSL.plan_budget(digits, margin=margin, guard=guard)
    ctx = PrecCtx(max(digits + 2, GnumericsSL.MIN_DIGITS), guard)
    shot = solve_p0(budget.n, ctx)
    log.info(f"p0* at {digits} digits from n={budget.n}.")
    return shot


def p0_limit(digits, margin=4, guard=GnumericsSL.DEFAULT_GUARD):
    """
    Approximates p0* by p_{0,n} with n from the budget planner. The sequence
    increases with n, so the value returned is a lower bound of p0*.
    """
    return solve_limit(digits, margin=margin, guard=guard).p0

# === End of GsolverSL.py ===
