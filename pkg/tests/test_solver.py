import pytest

import GnumericsSL
import GsolverSL
from GnumericsSL import DomainError, PrecCtx, ShallitError


def test_residual_n1_is_linear(ctx60):
    r = GsolverSL.residual(1, "1.25", ctx60)
    assert r.value == ctx60.mp.mpf("0.25") and not r.crashed


def test_residual_crash_counts_as_below_root(ctx60):
    r = GsolverSL.residual(40, "1.1", ctx60)
    assert r.crashed and r.value < 0 and r.step is not None


def test_residual_rejects_bad_arguments(ctx60):
    with pytest.raises(ValueError):
        GsolverSL.residual(0, "1.2", ctx60)
    with pytest.raises(DomainError):
        GsolverSL.residual(3, "0", ctx60)


@pytest.mark.parametrize("n", [2, 5, 12, 21])
def test_residual_increases_along_bracket(ctx60, n):
    mp = ctx60.mp
    top = GnumericsSL.phi(ctx60)
    samples = [1 + (top - 1) * mp.mpf(i) / 16 for i in range(17)]
    values = [GsolverSL.residual(n, t, ctx60) for t in samples]
    solid = [r.value for r in values if not r.crashed]
    assert all(b > a for a, b in zip(solid, solid[1:]))
    crashed = [r.crashed for r in values]
    assert crashed == sorted(crashed, reverse=True)


def test_n1_root_is_exactly_one(ctx60):
    shot = GsolverSL.solve_p0(1, ctx60)
    assert shot.p0 == 1 and shot.residual == 0 and shot.iterations == 0


def test_n2_root_is_plastic_number(ctx60, plastic):
    shot = GsolverSL.solve_p0(2, ctx60)
    assert abs(shot.p0 - plastic) <= GsolverSL.stop_width(ctx60)
    assert shot.width <= ctx60.mp.mpf(10) ** -ctx60.digits


def test_n3_root_is_sqrt_two(ctx60):
    shot = GsolverSL.solve_p0(3, ctx60)
    assert abs(shot.p0 - ctx60.mp.sqrt(2)) <= GsolverSL.stop_width(ctx60)


@pytest.mark.parametrize("n", [4, 17, 40])
def test_bisection_stays_within_iteration_bound(n):
    ctx = PrecCtx(50)
    shot = GsolverSL.solve_p0(n, ctx)
    assert shot.iterations <= GsolverSL.max_bisection_iterations(50)
    assert GsolverSL.residual(n, shot.bracket_lo, ctx).value <= 0 < GsolverSL.residual(n, shot.bracket_hi, ctx).value


@pytest.mark.parametrize("n", [6, 25])
def test_refined_solve_agrees_with_bisection(n):
    ctx = PrecCtx(60)
    plain = GsolverSL.solve_p0(n, ctx)
    refined = GsolverSL.solve_p0(n, ctx, refine=True)
    assert refined.refined
    assert refined.width <= GsolverSL.stop_width(ctx)
    assert abs(plain.p0 - refined.p0) <= 2 * GsolverSL.stop_width(ctx)
    assert refined.iterations < plain.iterations


def test_lower_bound_hint(ctx60):
    previous = GsolverSL.solve_p0(10, ctx60).p0
    hinted = GsolverSL.solve_p0(11, ctx60, lo=previous)
    plain = GsolverSL.solve_p0(11, ctx60)
    assert abs(hinted.p0 - plain.p0) <= GsolverSL.stop_width(ctx60)
    assert hinted.iterations <= plain.iterations


def test_hint_above_root_falls_back(ctx60):
    plain = GsolverSL.solve_p0(8, ctx60)
    hinted = GsolverSL.solve_p0(8, ctx60, lo="1.6")
    assert hinted.p0 == plain.p0


def test_solve_p0_rejects_bad_n(ctx60):
    with pytest.raises(ValueError):
        GsolverSL.solve_p0(0, ctx60)


def test_p0_increases_with_n(ctx60):
    values = [GsolverSL.solve_p0(n, ctx60).p0 for n in range(1, 16)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[-1] < GnumericsSL.phi(ctx60)


def test_solve_widens_context(ctx60):
    sol = GsolverSL.solve(30, ctx60)
    assert sol.trajectory.digits == 60
    assert sol.trajectory.ctx.digits == 60 + GnumericsSL.conditioning_digits(30) + ctx60.guard
    assert sol.shot.n == 30


def test_sweep_keeps_input_order(ctx60):
    order = [7, 3, 5]
    sols = GsolverSL.solve_sweep(order, ctx60, workers=3)
    assert [s.shot.n for s in sols] == order
    serial = GsolverSL.solve_sweep(order, ctx60)
    assert [s.shot.p0 for s in sols] == [s.shot.p0 for s in serial]


def test_shoot_result_dict(ctx60):
    shot = GsolverSL.solve_p0(5, ctx60)
    record = shot.as_dict(30)
    assert set(record) == {"n", "digits", "p0", "residual", "iterations"}
    assert record["p0"].startswith("1.")


def test_p0_limit_prefix():
    value = GsolverSL.p0_limit(20)
    assert GnumericsSL.real_to_decimal(value, 20) == "1.44705435001627940656"


@pytest.mark.parametrize("margin", [2, 4, 8])
def test_p0_limit_prefix_independent_of_margin(margin):
    import GreferenceSL
    value = GsolverSL.p0_limit(50, margin=margin)
    assert GnumericsSL.real_to_decimal(value, 50) == GreferenceSL.reference_prefix("p0_star", 50)


def test_p0_limit_rejects_small_margin():
    with pytest.raises(ValueError):
        GsolverSL.p0_limit(50, margin=1)


def test_no_sign_change_is_reported(ctx60, monkeypatch):
    monkeypatch.setattr(GsolverSL, "residual",
                        lambda n, t, ctx: GsolverSL.Residual(ctx.mp.one, False))
    with pytest.raises(ShallitError):
        GsolverSL.solve_p0(5, ctx60)
