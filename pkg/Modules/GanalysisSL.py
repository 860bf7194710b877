# GanalysisSL.py
# V1: Rate fitting, stable-curve slope, convexity Wronskian.
"""
Quantitative checks of the asymptotic statements.

- `fit_rate`: scaled gaps (C - C_n) rho^n, (p0* - p_{0,n}) rho^n,
  lam_j* rho^j and |u_{k,n} - 1| rho^(n/2) over a range, with their band and
  the successive-gap ratio, which should approach 1/rho.
- `slope_sigma`: slope of the stable invariant curve at (p0*, 0), from the
  fixed-point equation on derivative sums along the orbit of (p0*, 0).
- `convexity_wronskian`: sign of U''P' - U'P'' along t -> Phi^n(t, 0).
"""
import math
import logging
from dataclasses import dataclass, field

import GnumericsSL
import GdynamicsSL
import GsolverSL
import GconstantsSL
from GnumericsSL import PrecCtx, PrecisionError, ConvergenceError, DomainError

log = logging.getLogger(__name__)

RATE_QUANTITIES = ("C_gap", "p0_gap", "lambda_star", "u_mid_gap")
DEFAULT_SLOPE_TERMS = 80
MAX_SLOPE_ITERATIONS = 100


# --- Rates ---

@dataclass(frozen=True)
class RateReport:
    quantity: str
    samples: tuple          # (n or j, scaled gap)
    gaps: tuple             # unscaled gaps, same order
    band_lo: object
    band_hi: object
    ratio_estimate: object
    expected_ratio: object
    ratio_step: int
    digits: int

    @property
    def band_ratio(self):
        return self.band_hi / self.band_lo

    def to_rows(self, places=None):
        places = self.digits if places is None else places
        return [
            {"n": idx, "gap": GnumericsSL.real_to_scientific(gap, 20), "gap_times_rho_pow": GnumericsSL.real_to_decimal(scaled, places)}
            for (idx, scaled), gap in zip(self.samples, self.gaps)
        ]


def _reference_digits(ctx):
    return math.ceil(1.5 * ctx.digits)


def _gap_exponent(quantity, idx, mp):
    return mp.mpf(idx) / 2 if quantity == "u_mid_gap" else idx


def fit_rate(quantity, n_range, ctx, refine=True, workers=1):
    """
    Scaled gaps over ``n_range`` (an inclusive (a, b) pair or any iterable).
    References are computed at 1.5x the digits of ``ctx``.
    """
    if quantity not in RATE_QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}; expected one of {RATE_QUANTITIES}")
    if isinstance(n_range, tuple) and len(n_range) == 2:
        indices = list(range(n_range[0], n_range[1] + 1))
    else:
        indices = sorted(set(n_range))
    step = 2 if quantity == "u_mid_gap" else 1
    if len(indices) < step + 1:
        raise ValueError(f"{quantity} needs at least {step + 1} sample points")

    mp = ctx.mp
    ref_digits = _reference_digits(ctx)
    resolution = mp.mpf(10) ** (ctx.guard - ctx.digits)
    rho = GnumericsSL.rho(ctx)
    log.info(f"Fitting {quantity} over {indices[0]}..{indices[-1]} with {ref_digits}-digit references.")

    if quantity == "lambda_star":
        ref_ctx = PrecCtx(ref_digits, ctx.guard)
        p0_star = GsolverSL.p0_limit(ref_digits, guard=ctx.guard)
        orbit = GdynamicsSL.forward_points(p0_star, indices[-1], ref_ctx)
        gaps = [ctx.convert(1 - orbit[j].u) for j in indices]
    else:
        sols = GsolverSL.solve_sweep(indices, ctx, workers=workers, refine=refine)
        trajs = [s.trajectory for s in sols]
        if quantity == "C_gap":
            ref = GconstantsSL.limit_report(ref_digits, include_s=False, guard=ctx.guard).C
            gaps = [ctx.convert(ref - GconstantsSL.c_n_traj(t)) for t in trajs]
        elif quantity == "p0_gap":
            ref = GsolverSL.p0_limit(ref_digits, guard=ctx.guard)
            gaps = [ctx.convert(ref - t.p0) for t in trajs]
        else:
            gaps = [ctx.convert(abs(t.u(t.midpoint_index) - 1)) for t in trajs]

    for idx, gap in zip(indices, gaps):
        if not gap > resolution:
            raise PrecisionError(
                f"{quantity}: gap at {idx} is {mp.nstr(gap, 5)}, not resolvable at "
                f"{ctx.digits} digits; first unresolvable index is {idx}")

    scaled = [gap * rho ** _gap_exponent(quantity, idx, mp) for idx, gap in zip(indices, gaps)]
    ratio = gaps[-1] / gaps[-1 - step]
    return RateReport(
        quantity=quantity,
        samples=tuple(zip(indices, scaled)),
        gaps=tuple(gaps),
        band_lo=min(scaled),
        band_hi=max(scaled),
        ratio_estimate=ratio,
        expected_ratio=1 / rho,
        ratio_step=step,
        digits=ctx.digits,
    )


# --- Slope of the stable curve ---

@dataclass(frozen=True)
class SlopeResult:
    sigma: object
    iterations: int
    terms: int
    residual: object        # |sigma_new - sigma| at the returned sigma
    pu_dot_tail: object     # d(p_l u_l) at l = terms
    truncation: object      # (|dp_l| + |d(p_l u_l)|) / p0*, the dropped part
    digits: int

    def as_dict(self, places=None):
        places = self.digits if places is None else places
        sci = GnumericsSL.real_to_scientific
        return {
            "sigma": GnumericsSL.real_to_decimal(self.sigma, places),
            "iterations": self.iterations,
            "terms": self.terms,
            "residual": sci(self.residual, 5),
            "pu_dot_tail": sci(self.pu_dot_tail, 5),
            "truncation": sci(self.truncation, 5),
        }


def slope_digits_needed(terms, guard=GnumericsSL.DEFAULT_GUARD):
    return math.ceil(terms * GnumericsSL.LOG10_RHO) + guard


def slope_sigma(p0_star, terms=DEFAULT_SLOPE_TERMS, ctx=None, sigma0=-1, max_iter=MAX_SLOPE_ITERATIONS):
    """
    Solve sigma = -(1/p0*) (1 + sum_{j=1..terms} (dp_j - du_j) / dp_0) with the
    tangent started at dp_0 = -1, du_0 = -sigma on the base point (p0*, 0).

    sigma_new depends affinely on sigma with slope of order rho^terms, so the
    iteration is relaxed with a secant-estimated factor (Wegstein); the first
    step is undamped and a step with no usable secant is damped by 0.5.
    """
    if ctx is None:
        ctx = PrecCtx(slope_digits_needed(terms))
    if ctx.digits < slope_digits_needed(terms, ctx.guard):
        raise PrecisionError(
            f"slope with {terms} terms needs at least {slope_digits_needed(terms, ctx.guard)} digits, "
            f"context has {ctx.digits}")
    mp = ctx.mp
    p0 = mp.mpf(p0_star)
    # validates that the base orbit stays in p > 0
    GdynamicsSL.forward_points(p0, terms, ctx)
    base = GdynamicsSL.Point(p0, mp.zero)

    dp0 = -mp.one

    def image(sigma):
        ts = GdynamicsSL.TangentState(base, dp0, -sigma)
        total = mp.zero
        for j in range(terms):
            ts = GdynamicsSL.tangent_step(ts, step=j)
            total += ts.dp - ts.du
        new_sigma = -(1 + total / dp0) / p0
        return new_sigma, ts

    tol = ctx.tolerance()
    sigma = mp.mpf(sigma0)
    g, _ = image(sigma)
    prev = None             # (sigma, F) of the previous iterate
    last_kind = None
    for iteration in range(1, max_iter + 1):
        F = g - sigma
        oscillating = (last_kind == "secant" and abs(F) >= abs(prev[1])
                       and mp.sign(F) != mp.sign(prev[1]))
        if prev is None:
            cand, last_kind = g, "plain"
        elif F != prev[1] and not oscillating:
            cand, last_kind = sigma - F * (sigma - prev[0]) / (F - prev[1]), "secant"
        else:
            if oscillating:
                log.warning(f"slope iteration {iteration} oscillates; damping by 0.5.")
            cand, last_kind = sigma + F / 2, "damped"
        prev = (sigma, F)
        sigma = cand
        g, ts = image(sigma)
        if abs(sigma - prev[0]) <= tol * max(1, abs(sigma)):
            pu_dot = ts.dp * ts.base.u + ts.base.p * ts.du
            truncation = (abs(ts.dp) + abs(pu_dot)) / p0
            log.info(f"slope converged in {iteration} iterations with {terms} terms.")
            return SlopeResult(sigma, iteration, terms, abs(g - sigma), pu_dot, truncation, ctx.digits)
    raise ConvergenceError(
        f"slope iteration did not converge in {max_iter} iterations",
        last_iterates=(prev[0], sigma))


# --- Convexity ---

@dataclass(frozen=True)
class WronskianSample:
    n: int
    t: object
    wronskian: object            # U''P' - U'P'' from the propagated state
    wronskian_increment: object  # same quantity accumulated step by step


@dataclass
class ConvexityReport:
    n: int
    samples: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    def all_positive(self):
        return bool(self.samples) and all(s.wronskian > 0 for s in self.samples)

    def all_zero(self):
        return all(s.wronskian == 0 for s in self.samples)


def default_samples(ctx, count=20):
    """``count`` evenly spaced points strictly inside (1, phi)."""
    mp = ctx.mp
    top = GnumericsSL.phi(ctx)
    return [1 + (top - 1) * mp.mpf(i) / (count + 1) for i in range(1, count + 1)]


def convexity_wronskian(n, t_samples=None, ctx=None):
    """Propagate (t, 0) with tangent (1, 0) and zero curvature for n steps."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    ctx = ctx or PrecCtx(30)
    mp = ctx.mp
    if t_samples is None:
        t_samples = default_samples(ctx)
    report = ConvexityReport(n)
    for t in t_samples:
        t = mp.mpf(t)
        ts = GdynamicsSL.TangentState(GdynamicsSL.Point(t, mp.zero), mp.one, mp.zero,
                                      mp.zero, mp.zero, mp.zero)
        try:
            for step in range(n):
                ts = GdynamicsSL.tangent_step(ts, second_order=True, step=step)
                if ts.base.p <= 0:
                    raise DomainError("orbit left p > 0", step=step + 1, value=ts.base.p)
        except DomainError as e:
            log.warning(f"Wronskian sample t={mp.nstr(t, 8)} skipped for n={n}: {e}")
            report.skipped.append(t)
            continue
        report.samples.append(WronskianSample(n, t, ts.wronskian_direct(), ts.wronskian))
    return report

# === End of GanalysisSL.py ===
