# GconstantsSL.py
# V1: A_n, four C_n forms, partial sums S_N, cubic series for C, budget planner.
"""
Per-n minima and the limit constant.

For a solved n-trajectory (k = n // 2):

    A_n  = sum_{j=0..n} (p_j + u_j + p_j u_j)
    C_n  = 3n - A_n
         = 2 sum_{j<k} (3 - 2p_j - p_j u_j) + p_k^2
         = 2 sum_{j=1..k} (lam_{j-1} - 3 lam_j) / (1 - lam_j) + p_k^2
         = 2 sum_{j=1..k} lam_j (lam_{j-1} - 2 lam_j) / u_j + 1 - (p_k - 1)^2

The four forms are computed independently from the stored points so a
bookkeeping slip in any of them shows up as disagreement.

The limit C is produced by the cubic series

    C = p0* + sum_{j>=1} lam_j^2 (lam_{j+1} - 2 lam_j + lam_j lam_{j+1}) / (u_j u_{j+1})

along the forward orbit of (p0*, 0), whose terms fall off like rho^-3j.
"""
import math
import logging
from dataclasses import dataclass

import GnumericsSL
import GdynamicsSL
import GsolverSL
from GnumericsSL import PrecCtx, PrecisionError, LN_RHO

log = logging.getLogger(__name__)

LN_10 = math.log(10.0)
# below this the planned n no longer resolves p0* to the target digits
MIN_PLANNER_MARGIN = 2


# --- Per-n values ---

def a_n(traj):
    mp = traj.ctx.mp
    return mp.fsum(pt.p + pt.u + pt.p * pt.u for pt in traj.points)


def c_n_direct(traj):
    return 3 * traj.n - a_n(traj)


def c_n_traj(traj):
    mp = traj.ctx.mp
    k = traj.midpoint_index
    head = mp.fsum(3 - 2 * traj.p(j) - traj.p(j) * traj.u(j) for j in range(k))
    return 2 * head + traj.p(k) ** 2


def c_n_traj_prime(traj):
    mp = traj.ctx.mp
    k = traj.midpoint_index
    lam = traj.lambdas
    head = mp.fsum((lam[j - 1] - 3 * lam[j]) / (1 - lam[j]) for j in range(1, k + 1))
    return 2 * head + traj.p(k) ** 2


def c_n_quad(traj):
    mp = traj.ctx.mp
    k = traj.midpoint_index
    lam = traj.lambdas
    head = mp.fsum(lam[j] * (lam[j - 1] - 2 * lam[j]) / traj.u(j) for j in range(1, k + 1))
    delta = 1 - (traj.p(k) - 1) ** 2
    return 2 * head + delta


def quad_summands(traj):
    """Individual summands of the quadratic form, j = 1..k."""
    k = traj.midpoint_index
    lam = traj.lambdas
    return [lam[j] * (lam[j - 1] - 2 * lam[j]) / traj.u(j) for j in range(1, k + 1)]


@dataclass(frozen=True)
class ConstantsReport:
    n: int
    A_n: object
    C_n_direct: object
    C_n_traj: object
    C_n_traj_prime: object
    C_n_quad: object
    digits: int

    def variants(self):
        return (self.C_n_direct, self.C_n_traj, self.C_n_traj_prime, self.C_n_quad)

    def max_disagreement(self):
        values = self.variants()
        return max(abs(a - b) for a in values for b in values)

    def as_dict(self, places=None):
        places = self.digits if places is None else places
        fmt = GnumericsSL.real_to_decimal
        return {
            "n": self.n,
            "digits": places,
            "A_n": fmt(self.A_n, places),
            "C_n": fmt(self.C_n_direct, places),
            "C_n_traj": fmt(self.C_n_traj, places),
            "C_n_traj_prime": fmt(self.C_n_traj_prime, places),
            "C_n_quad": fmt(self.C_n_quad, places),
        }


def constants_report(traj):
    a = a_n(traj)
    return ConstantsReport(
        n=traj.n,
        A_n=a,
        C_n_direct=3 * traj.n - a,
        C_n_traj=c_n_traj(traj),
        C_n_traj_prime=c_n_traj_prime(traj),
        C_n_quad=c_n_quad(traj),
        digits=traj.digits,
    )


# --- Budget planner ---

@dataclass(frozen=True)
class Budget:
    target_digits: int
    n: int
    series_terms: int
    working_digits: int
    margin: int = 4
    guard: int = GnumericsSL.DEFAULT_GUARD

    def as_dict(self):
        return {
            "target_digits": self.target_digits,
            "n": self.n,
            "series_terms": self.series_terms,
            "working_digits": self.working_digits,
        }


def steps_for_digits(digits):
    """Smallest m with rho^-m <= 10^-digits."""
    return math.ceil(digits * LN_10 / LN_RHO)


def plan_budget(target_digits, margin=4, guard=GnumericsSL.DEFAULT_GUARD):
    """Trajectory length, cubic-series terms and working digits for a target."""
    if target_digits < 10:
        raise ValueError(f"target_digits must be >= 10, got {target_digits}")
    if margin < MIN_PLANNER_MARGIN:
        raise ValueError(f"margin must be >= {MIN_PLANNER_MARGIN}, got {margin}")
    return Budget(
        target_digits=target_digits,
        n=steps_for_digits(target_digits) + margin,
        series_terms=math.ceil(2 * target_digits * LN_10 / (3 * LN_RHO)) + margin,
        working_digits=target_digits + guard,
        margin=margin,
        guard=guard,
    )


# --- Partial sums S_N ---

def s_tail_bound(N):
    """Bound on |(2 S_N + 1) - C| from |h_j*| < 2^(1-j)."""
    return 8.0 * 2.0 ** (-N)


def s_partial(traj_limit, N, ctx=None):
    """
    S_N = sum_{j=0..N} (3 - 2p_j* - p_j* u_j*), with the starred values read
    off a long solved trajectory (or any sequence of Points).
    """
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    if isinstance(traj_limit, GdynamicsSL.Trajectory):
        needed = max(2 * N + 2, N + steps_for_digits(traj_limit.digits))
        if traj_limit.n < needed:
            raise PrecisionError(
                f"S_{N} at {traj_limit.digits} digits needs a trajectory with n >= {needed}, "
                f"got n={traj_limit.n}")
        points = traj_limit.points
        mp = traj_limit.ctx.mp
    else:
        points = list(traj_limit)
        if len(points) <= N:
            raise PrecisionError(f"S_{N} needs {N + 1} points, got {len(points)}")
        mp = ctx.mp if ctx is not None else points[0].p.context
    return mp.fsum(3 - 2 * pt.p - pt.p * pt.u for pt in points[:N + 1])


# --- Cubic series ---

@dataclass(frozen=True)
class SeriesResult:
    value: object
    terms_used: int
    last_term: object


def cubic_series_terms(points):
    """Summands for j = 1..len(points)-2 given forward points from (p0*, 0)."""
    terms = []
    for j in range(1, len(points) - 1):
        u_j, u_next = points[j].u, points[j + 1].u
        lam, lam_next = 1 - u_j, 1 - u_next
        terms.append(lam * lam * (lam_next - 2 * lam + lam * lam_next) / (u_j * u_next))
    return terms


def cubic_series(p0_star_approx, terms, ctx):
    """
    Sum the cubic series along the forward orbit of (p0, 0), at most ``terms``
    summands. Stops early once a summand drops below the working epsilon: the
    orbit of an approximate p0* eventually peels away from the stable curve
    and later summands would only add that drift.
    """
    if terms < 1:
        raise ValueError(f"terms must be >= 1, got {terms}")
    mp = ctx.mp
    p0 = mp.mpf(p0_star_approx)
    eps = ctx.eps
    if p0 <= 0:
        raise GnumericsSL.InvalidInitialValueError("p0 must be positive", step=0, value=p0)
    current = GdynamicsSL.phi(GdynamicsSL.Point(p0, mp.zero), step=0)
    summands = []
    last = mp.zero
    for j in range(1, terms + 1):
        if current.p <= 0:
            raise GnumericsSL.InvalidInitialValueError(
                f"orbit left p > 0 after {j - 1} series terms; p0 is not accurate enough",
                step=j, value=current.p)
        nxt = GdynamicsSL.phi(current, step=j)
        lam, lam_next = 1 - current.u, 1 - nxt.u
        last = lam * lam * (lam_next - 2 * lam + lam * lam_next) / (current.u * nxt.u)
        summands.append(last)
        if abs(last) < eps:
            break
        current = nxt
    value = p0 + mp.fsum(summands)
    log.debug(f"Cubic series used {len(summands)} of {terms} terms.")
    return SeriesResult(value, len(summands), last)


def c_cubic_series(p0_star_approx, terms, ctx):
    return cubic_series(p0_star_approx, terms, ctx).value


# --- Limit report ---

@dataclass(frozen=True)
class LimitReport:
    C: object
    p0_star: object
    S: object
    terms_used: int
    n_used: int
    digits: int
    error_bound: object
    S_index: int = None

    def consistency(self):
        """|C - (2S + 1)|, or None when S was not computed."""
        if self.S is None:
            return None
        return abs(self.C - (2 * self.S + 1))

    def as_dict(self, places=None):
        places = self.digits if places is None else places
        fmt = GnumericsSL.real_to_decimal
        out = {
            "C": fmt(self.C, places),
            "p0_star": fmt(self.p0_star, places),
            "terms_used": self.terms_used,
            "n_used": self.n_used,
            "digits": places,
            "error_bound": GnumericsSL.real_to_scientific(self.error_bound, 5),
        }
        if self.S is not None:
            out["S"] = fmt(self.S, places)
            out["S_index"] = self.S_index
        return out


def limit_report(digits, margin=4, include_s=True, guard=GnumericsSL.DEFAULT_GUARD):
    """
    C and p0* to ``digits`` decimals: p0* from the planner's trajectory
    length, C from the cubic series seeded with it. With ``include_s`` the
    partial sum S_N is taken from a trajectory twice as long.
    """
    budget = plan_budget(digits, margin=margin, guard=guard)
    ctx = PrecCtx(max(digits, GnumericsSL.MIN_DIGITS), guard)
    shot = GsolverSL.solve_limit(digits, margin=margin, guard=guard)
    series = cubic_series(shot.p0, budget.series_terms, ctx)
    rho = GnumericsSL.rho(ctx)
    tail = abs(series.last_term) / (rho ** 3 - 1)
    error_bound = tail + rho ** (-budget.n) + ctx.eps

    s_value, s_index = None, None
    if include_s:
        n_long = 2 * (steps_for_digits(ctx.digits) + margin)
        s_index = (n_long - 2) // 2
        traj = GsolverSL.solve_trajectory(n_long, ctx, refine=True)
        s_value = ctx.convert(s_partial(traj, s_index))

    log.info(f"Limit report at {digits} digits: n={budget.n}, terms={series.terms_used}.")
    return LimitReport(
        C=series.value,
        p0_star=ctx.convert(shot.p0),
        S=s_value,
        terms_used=series.terms_used,
        n_used=budget.n,
        digits=digits,
        error_bound=error_bound,
        S_index=s_index,
    )


# --- Extrapolation cross-check ---

def extrapolate_c(n_values, ctx, refine=True, workers=1):
    """
    Shanks-accelerated limit of C_n over the even members of ``n_values``.
    A cross-check for the cubic series, not the production path.
    """
    evens = sorted(n for n in set(n_values) if n % 2 == 0)
    if len(evens) < 3:
        raise ValueError("extrapolation needs at least three even n values")
    sols = GsolverSL.solve_sweep(evens, ctx, workers=workers, refine=refine)
    seq = [ctx.convert(c_n_traj(s.trajectory)) for s in sols]
    table = ctx.mp.shanks(seq)
    row = table[-1]
    # odd positions of an mpmath Shanks row hold the estimates, even ones are auxiliary
    index = len(row) - 1 if (len(row) - 1) % 2 else len(row) - 2
    return row[index]

# === End of GconstantsSL.py ===
