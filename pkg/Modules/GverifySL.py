# GverifySL.py
# V1: Invariant suite over solved trajectories with a tabular/JSON report.
"""
Runs every identity, inequality and cross-check over a list of n and gathers
the outcomes into a VerificationReport. A failed check is a report row, never
an exception.

Identity checks compare against a tolerance relative to max(1, |value|);
inequality checks are strict comparisons with no tolerance. The oracle
cross-checks run for n <= ORACLE_MAX_N.
"""
import json
import logging
from dataclasses import dataclass, field, asdict

import mpmath
import numpy as np
import pandas as pd

import GnumericsSL
import GdynamicsSL
import GsolverSL
import GconstantsSL
import GoracleSL
import GreferenceSL

log = logging.getLogger(__name__)

ORACLE_MAX_N = 8
ORACLE_A_N_TOL = 1e-8
ORACLE_IDENTITY_TOL = 1e-12
RESIDUAL_SAMPLES = 9


@dataclass
class CheckResult:
    name: str
    ref: str
    n: int
    residual: object
    tolerance: object
    passed: bool

    def as_dict(self):
        out = asdict(self)
        out["residual"] = _short(self.residual)
        out["tolerance"] = _short(self.tolerance)
        out["pass"] = bool(out.pop("passed"))
        return out


def _short(x):
    if x is None:
        return None
    if isinstance(x, (float, int, np.floating)):
        x = mpmath.mpf(float(x))
    return GnumericsSL.real_to_scientific(x, 4)


@dataclass
class VerificationReport:
    digits: int
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def extend(self, results):
        self.checks.extend(results)

    def to_rows(self):
        return [c.as_dict() for c in self.checks]

    def to_frame(self):
        columns = ["n", "name", "ref", "residual", "tolerance", "pass"]
        return pd.DataFrame(self.to_rows(), columns=columns)

    def to_text(self):
        if not self.checks:
            return f"No checks run ({self.digits} digits). PASS\n"
        table = self.to_frame().to_string(index=False)
        verdict = "PASS" if self.passed else f"FAIL ({len(self.failures())} of {len(self.checks)})"
        return f"{table}\n\n{len(self.checks)} checks at {self.digits} digits: {verdict}\n"

    def to_json(self):
        payload = {"digits": self.digits, "passed": self.passed, "checks": self.to_rows()}
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# --- Helpers ---

def _relative(diff, scale):
    return abs(diff) / max(1, abs(scale))


def _identity(name, ref, n, residuals, tolerance):
    worst = max(residuals) if residuals else 0
    return CheckResult(name, ref, n, worst, tolerance, bool(worst <= tolerance))


def _strict(name, ref, n, slacks):
    """Passes when every slack is strictly positive; residual is the smallest."""
    worst = min(slacks) if slacks else None
    return CheckResult(name, ref, n, worst, 0, bool(worst is None or worst > 0))


def _non_negative(name, ref, n, slacks):
    worst = min(slacks) if slacks else None
    return CheckResult(name, ref, n, worst, 0, bool(worst is None or worst >= 0))


def default_tolerance(traj):
    return traj.ctx.mp.mpf(10) ** (8 - traj.digits)


# --- Trajectory checks ---

def check_trajectory(traj, tolerance=None):
    """Boundary, identity and inequality checks on a single trajectory."""
    tol = default_tolerance(traj) if tolerance is None else traj.ctx.convert(tolerance)
    n, pts, lam = traj.n, traj.points, traj.lambdas
    k = traj.midpoint_index
    phi_value = GnumericsSL.phi(traj.ctx)
    results = []

    boundary = max(abs(pts[0].u), abs(pts[n].p))
    results.append(CheckResult("boundary", "u_0 = 0 and p_n = 0 exactly", n, boundary, 0, boundary == 0))

    results.append(_identity(
        "conservation", "p'u' + u' = pu + p", n,
        [_relative((pts[j].p * pts[j].u + pts[j].u) - (pts[j - 1].p * pts[j - 1].u + pts[j - 1].p),
                   pts[j].p * pts[j].u + pts[j].u)
         for j in range(1, n + 1)], tol))

    # the second half is mirrored, so the seam step k -> k+1 is where a
    # p0 error shows up: the mirrored point must also be the image of p_k
    sym = [_relative(pts[j].u - pts[n - j].p, pts[j].u) for j in range(n + 1)]
    if pts[k].p != 0:
        seam = GdynamicsSL.phi(pts[k])
        sym += [_relative(seam.p - pts[k + 1].p, seam.p), _relative(seam.u - pts[k + 1].u, seam.u)]
    results.append(_identity("symmetry", "u_j = p_(n-j)", n, sym, tol))

    if n % 2 == 0:
        mid = [_relative(pts[k].p - pts[k].u, pts[k].p)]
        mid_ref = "p_k = u_k for n = 2k"
    else:
        mid = [abs(pts[k].p - 1), abs(pts[k + 1].u - 1)]
        mid_ref = "p_k = u_(k+1) = 1 for n = 2k+1"
    results.append(_identity("midpoint", mid_ref, n, mid, tol))

    rec = []
    for j in range(1, n):
        num = 4 * lam[j] - lam[j - 1] - 2 * lam[j] ** 2
        den = 1 + 2 * lam[j] - lam[j - 1] - lam[j] ** 2
        rec.append(_relative(lam[j + 1] - num / den, lam[j + 1]))
    results.append(_identity("lambda_recurrence", "second order recurrence in lambda", n, rec, tol))

    tele, running = [], traj.ctx.mp.zero
    for ell in range(1, n + 1):
        running += pts[ell - 1].p - pts[ell].u
        tele.append(_relative(running - pts[ell].p * pts[ell].u, running))
    results.append(_identity("telescoped_conservation", "sum (p_(j-1) - u_j) = p_l u_l", n, tele, tol))

    rev = []
    for pt in pts:
        if pt.u == 0:
            continue
        there = GdynamicsSL.phi(GdynamicsSL.involution(pt))
        back = GdynamicsSL.phi(GdynamicsSL.involution(there))
        rev.append(max(_relative(back.p - pt.p, pt.p), _relative(back.u - pt.u, pt.u)))
    results.append(_identity("reversibility", "phi . (s . phi . s) = id", n, rev, tol))

    results.append(_strict("monotone_p", "p_0 > p_1 > ... > p_n = 0", n,
                           [pts[j].p - pts[j + 1].p for j in range(n)]))
    results.append(_strict("monotone_u", "0 = u_0 < u_1 < ... < u_n", n,
                           [pts[j + 1].u - pts[j].u for j in range(n)]))
    results.append(_strict("pu_below_one", "p_j u_j < 1", n, [1 - pt.p * pt.u for pt in pts]))
    results.append(_strict("p0_below_phi", "p_0 < phi", n, [phi_value - pts[0].p]))
    results.append(_non_negative(
        "exp_p", "|p_j - 1| <= 2^-min(j, n-j)", n,
        [traj.ctx.mp.ldexp(1, -traj.norm_index(j)) - abs(pts[j].p - 1) for j in range(n + 1)]))
    results.append(_non_negative(
        "exp_pu_bound", "1 - p_j u_j <= phi 2^-min(j, n-j)", n,
        [phi_value * traj.ctx.mp.ldexp(1, -traj.norm_index(j)) - (1 - pts[j].p * pts[j].u)
         for j in range(n + 1)]))
    return results


def check_monotone_in_n(traj, previous):
    """p_(j,n) > p_(j,n-1) for 0 <= j <= n-1."""
    n = traj.n
    mp = traj.ctx.mp
    slacks = [mp.mpf(traj.p(j)) - mp.mpf(previous.p(j)) for j in range(n)]
    return _strict("monotone_in_n", "p_(j,n) > p_(j,n-1)", n, slacks)


# --- Solver checks ---

def check_solver(solution):
    """Bracket, range and residual-shape checks on one solve."""
    shot, traj = solution
    n = traj.n
    mp = shot.p0.context
    phi_value = GnumericsSL.phi(traj.ctx)
    results = [
        _non_negative("p0_at_least_one", "p_0 >= 1", n, [shot.p0 - 1]),
        _strict("p0_range_upper", "p_0 < phi", n, [phi_value - shot.p0]),
    ]
    wctx = traj.ctx
    lo_r = GsolverSL.residual(n, shot.bracket_lo, wctx)
    hi_r = GsolverSL.residual(n, shot.bracket_hi, wctx)
    straddles = lo_r.value <= 0 <= hi_r.value
    results.append(CheckResult("bracket_sign_change", "R(lo) <= 0 <= R(hi)", n,
                               shot.width, GsolverSL.stop_width(wctx), bool(straddles)))

    # residual increases strictly along [1, phi)
    samples = [1 + (phi_value - 1) * mp.mpf(i) / RESIDUAL_SAMPLES for i in range(RESIDUAL_SAMPLES)]
    values = [GsolverSL.residual(n, t, wctx) for t in samples]
    solid = [r.value for r in values if not r.crashed]
    first_solid = next((i for i, r in enumerate(values) if not r.crashed), len(values))
    crash_order = all(r.crashed for r in values[:first_solid]) and \
        not any(r.crashed for r in values[first_solid:])
    diffs = [b - a for a, b in zip(solid, solid[1:])]
    mono = _strict("residual_monotone", "R increasing on [1, phi)", n, diffs)
    if not crash_order:
        mono.passed = False
    results.append(mono)

    if not shot.refined:
        bound = GsolverSL.max_bisection_iterations(shot.digits)
        results.append(CheckResult("bisection_iterations", "iterations <= ceil(d log2 10) + 5", n,
                                   shot.iterations, bound, shot.iterations <= bound))
    return results


# --- Constant checks ---

def check_constants(traj, following=None, tolerance=None):
    """Four-way C_n agreement, 1 <= C_n < C, and growth against the n+1 trajectory."""
    tol = default_tolerance(traj) if tolerance is None else traj.ctx.convert(tolerance)
    n = traj.n
    report = GconstantsSL.constants_report(traj)
    results = [
        _identity("cn_four_way", "3n - A_n = three trajectory forms", n,
                  [report.max_disagreement() / max(1, abs(report.C_n_direct))], tol),
        _non_negative("cn_at_least_one", "C_n >= 1", n, [report.C_n_direct - 1 + tol]),
    ]
    c_ref = GreferenceSL.reference_value("C", traj.ctx)
    if c_ref is not None:
        slack = c_ref - report.C_n_traj
        # C - C_n shrinks like rho^-n; past the carried digits only C_n <= C + tol is testable
        usable = min(traj.digits, GreferenceSL.reference_places("C")) - 8
        if n * GnumericsSL.LOG10_RHO < usable:
            results.append(_strict("cn_below_c", "C_n < C", n, [slack]))
        else:
            results.append(_non_negative("cn_below_c", "C_n <= C within tolerance", n, [slack + tol]))
    if following is not None:
        mp = following.ctx.mp
        c_next = GconstantsSL.c_n_traj(following)
        c_here = mp.mpf(report.C_n_traj)
        results.append(_strict("cn_increasing", "C_(n+1) > C_n", n, [c_next - c_here]))
        if n % 2 == 0:
            k = traj.midpoint_index
            gap = (1 - mp.mpf(traj.u(k))) ** 2
            results.append(_strict("cn_gap_lower_bound", "C_(n+1) - C_n > (1 - u_k)^2", n,
                                   [c_next - c_here - gap]))
    return results


# --- Oracle checks ---

def check_oracle(traj, tol=GoracleSL.DEFAULT_TOL):
    n = traj.n
    result = GoracleSL.minimize_direct(n, tol=tol)
    a_pipeline = float(GconstantsSL.a_n(traj))
    x, u = result.x, result.u
    f_val = GoracleSL.f_n(x)
    g_val = GoracleSL.g_n(GoracleSL.x_to_u(x))
    back = GoracleSL.u_to_x(GoracleSL.x_to_u(x)).x
    lo, hi = GoracleSL.search_box(n)
    interior = u.u[1:]
    box_slack = min(float(np.min(interior - lo)), float(np.min(hi - interior)))
    return [
        CheckResult("oracle_a_n", "A_n from trajectory = min f_n", n,
                    abs(a_pipeline - result.value), ORACLE_A_N_TOL,
                    abs(a_pipeline - result.value) < ORACLE_A_N_TOL),
        CheckResult("oracle_criteq", "grad g_n = 0 at the minimizer", n,
                    result.gradient_norm, tol, result.converged and result.gradient_norm < tol),
        CheckResult("oracle_fg_identity", "f_n(x) = g_n(u(x))", n,
                    abs(f_val - g_val) / f_val, ORACLE_IDENTITY_TOL,
                    abs(f_val - g_val) <= ORACLE_IDENTITY_TOL * f_val),
        CheckResult("oracle_chvar_roundtrip", "x -> u -> x", n,
                    float(np.max(np.abs(back - x.x)) / np.max(x.x)), ORACLE_IDENTITY_TOL,
                    bool(np.max(np.abs(back - x.x)) <= ORACLE_IDENTITY_TOL * np.max(x.x))),
        CheckResult("oracle_search_box", "(3n-1)^-1 <= u_j <= 3n-1", n, box_slack, 0, box_slack >= 0),
    ]


# --- Suite ---

def run_invariant_suite(n_list, ctx, tolerance=None, workers=1, refine=False):
    """Every check for each n in ``n_list``; returns a VerificationReport."""
    report = VerificationReport(ctx.digits)
    wanted = sorted(set(int(n) for n in n_list))
    if not wanted:
        log.info("Empty n list; nothing to verify.")
        return report
    if wanted[0] < 1:
        raise ValueError(f"n values must be >= 1, got {wanted[0]}")
    needed = sorted(set(wanted) | {n - 1 for n in wanted if n > 1} | {n + 1 for n in wanted})
    sols = dict(zip(needed, GsolverSL.solve_sweep(needed, ctx, workers=workers, refine=refine)))
    log.info(f"Verifying {len(wanted)} trajectories at {ctx.digits} digits.")

    for n in wanted:
        sol = sols[n]
        traj = sol.trajectory
        report.extend(check_trajectory(traj, tolerance))
        if n > 1:
            report.checks.append(check_monotone_in_n(traj, sols[n - 1].trajectory))
        report.extend(check_solver(sol))
        report.extend(check_constants(traj, sols[n + 1].trajectory, tolerance))
        if n <= ORACLE_MAX_N:
            report.extend(check_oracle(traj))
    failures = report.failures()
    if failures:
        log.warning(f"{len(failures)} checks failed, first: {failures[0].name} at n={failures[0].n}.")
    return report

# === End of GverifySL.py ===
