import pytest

import GanalysisSL
import GdynamicsSL
import GnumericsSL
import GsolverSL
from GnumericsSL import ConvergenceError, PrecCtx, PrecisionError

# slope of the stable curve at (p0*, 0), from a map-only secant
SLOPE_PREFIX = -1.3032463581


@pytest.fixture(scope="module")
def ctx40():
    return PrecCtx(40)


def _inverse_rho():
    return 1 / GnumericsSL.RHO_FLOAT


# --- Rates ---

def test_c_gap_ratio_approaches_inverse_rho(ctx40):
    report = GanalysisSL.fit_rate("C_gap", (20, 40), ctx40)
    assert [idx for idx, _ in report.samples] == list(range(20, 41))
    assert 0 < report.band_lo <= report.band_hi
    assert report.band_ratio < 10
    assert float(report.ratio_estimate) == pytest.approx(_inverse_rho(), abs=1e-3)
    assert report.ratio_step == 1


def test_p0_gap_band(ctx40):
    report = GanalysisSL.fit_rate("p0_gap", [10, 12, 14, 16, 18, 20], ctx40, workers=2)
    assert report.band_ratio < 10
    assert float(report.ratio_estimate) > 0


def test_lambda_star_band(ctx40):
    report = GanalysisSL.fit_rate("lambda_star", (5, 30), ctx40)
    assert report.band_ratio < 2
    assert float(report.ratio_estimate) == pytest.approx(_inverse_rho(), rel=1e-3)


def test_u_mid_gap_uses_same_parity_ratio(ctx40):
    report = GanalysisSL.fit_rate("u_mid_gap", (20, 32), ctx40)
    assert report.ratio_step == 2
    assert report.band_hi < 10 * report.band_lo
    assert float(report.ratio_estimate) == pytest.approx(_inverse_rho(), rel=0.05)
    assert float(report.expected_ratio) == pytest.approx(_inverse_rho())


def test_rate_rows_are_plot_ready(ctx40):
    report = GanalysisSL.fit_rate("lambda_star", (5, 8), ctx40)
    rows = report.to_rows(20)
    assert [r["n"] for r in rows] == [5, 6, 7, 8]
    assert set(rows[0]) == {"n", "gap", "gap_times_rho_pow"}


def test_unresolvable_gap_names_index():
    with pytest.raises(PrecisionError) as info:
        GanalysisSL.fit_rate("p0_gap", (18, 22), PrecCtx(16))
    assert "18" in str(info.value)


def test_rate_argument_checks(ctx40):
    with pytest.raises(ValueError):
        GanalysisSL.fit_rate("speed", (5, 8), ctx40)
    with pytest.raises(ValueError):
        GanalysisSL.fit_rate("u_mid_gap", (20, 21), ctx40)


# --- Slope ---

@pytest.fixture(scope="module")
def p0_star_120():
    return GsolverSL.p0_limit(120)


def test_slope_value(p0_star_120):
    result = GanalysisSL.slope_sigma(p0_star_120, terms=80, ctx=PrecCtx(120))
    assert float(result.sigma) == pytest.approx(SLOPE_PREFIX, abs=1e-10)
    assert result.sigma < -1 / p0_star_120
    assert result.terms == 80 and result.iterations >= 1
    assert abs(result.pu_dot_tail) < 1e-20


def _stable_curve_p(u, ctx, steps=600):
    """p with (p, u) on the stable curve of (1, 1), by bisection on the escape side."""
    mp = ctx.mp
    u = mp.mpf(u)
    quarter = mp.mpf(1) / 4

    def escapes_high(p):
        pt = GdynamicsSL.Point(p, u)
        for _ in range(steps):
            pt = GdynamicsSL.phi(pt)
            if abs(pt.p - 1) > quarter:
                return pt.p > 1
        raise AssertionError(f"orbit from p={p} did not leave the fixed point")

    lo, hi = mp.mpf("1.4"), mp.mpf("1.5")
    for _ in range(150):
        mid = (lo + hi) / 2
        if escapes_high(mid):
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def test_slope_matches_secant_of_the_stable_curve(p0_star_120):
    ctx = PrecCtx(80)
    h = ctx.mp.mpf("1e-12")
    p_plus = _stable_curve_p(h, ctx)
    p_minus = _stable_curve_p(-h, ctx)
    secant = 2 * h / (p_plus - p_minus)
    result = GanalysisSL.slope_sigma(p0_star_120, terms=80, ctx=PrecCtx(120))
    assert float(secant) == pytest.approx(float(result.sigma), abs=1e-9)
    assert p_plus < ctx.convert(p0_star_120) < p_minus


def test_slope_stable_under_doubling_terms(p0_star_120):
    ctx = PrecCtx(120)
    short = GanalysisSL.slope_sigma(p0_star_120, terms=80, ctx=ctx)
    long = GanalysisSL.slope_sigma(p0_star_120, terms=160, ctx=ctx)
    assert abs(short.sigma - long.sigma) <= short.residual + short.truncation


def test_slope_default_context():
    p0 = GsolverSL.p0_limit(GanalysisSL.slope_digits_needed(20))
    result = GanalysisSL.slope_sigma(p0, terms=20)
    assert result.digits == GanalysisSL.slope_digits_needed(20)
    record = result.as_dict(16)
    assert record["sigma"].startswith("-1.30324635")
    assert record["truncation"] == GnumericsSL.real_to_scientific(result.truncation, 5)
    assert record["residual"] == GnumericsSL.real_to_scientific(result.residual, 5)


def test_slope_needs_enough_digits(p0_star_120):
    with pytest.raises(PrecisionError):
        GanalysisSL.slope_sigma(p0_star_120, terms=160, ctx=PrecCtx(50))


def test_slope_reports_non_convergence(p0_star_120):
    with pytest.raises(ConvergenceError) as info:
        GanalysisSL.slope_sigma(p0_star_120, terms=80, ctx=PrecCtx(120), max_iter=1)
    assert len(info.value.last_iterates) == 2


# --- Convexity ---

def test_wronskian_zero_steps():
    report = GanalysisSL.convexity_wronskian(0)
    assert report.samples and report.all_zero()


def test_wronskian_one_step():
    ctx = PrecCtx(30)
    t = ctx.mp.mpf("1.2")
    report = GanalysisSL.convexity_wronskian(1, [t], ctx)
    sample = report.samples[0]
    assert abs(sample.wronskian - 6 / t ** 2) < ctx.tolerance()
    assert abs(sample.wronskian_increment - sample.wronskian) < ctx.tolerance()


@pytest.mark.parametrize("n", [1, 2, 5, 12, 20, 30])
def test_wronskian_positive(n):
    report = GanalysisSL.convexity_wronskian(n)
    assert report.all_positive()
    assert len(report.samples) + len(report.skipped) == 20


def test_wronskian_skips_points_outside_domain(caplog):
    ctx = PrecCtx(30)
    with caplog.at_level("WARNING", logger="GanalysisSL"):
        report = GanalysisSL.convexity_wronskian(10, ["1.01", "1.55"], ctx)
    assert len(report.skipped) == 1 and len(report.samples) == 1
    assert any("skipped" in r.message for r in caplog.records)


def test_wronskian_rejects_negative_n():
    with pytest.raises(ValueError):
        GanalysisSL.convexity_wronskian(-1)
