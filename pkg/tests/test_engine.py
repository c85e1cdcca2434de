"""Prox engine: dispatch, numerical solver, envelopes, decomposition."""

import numpy as np
import pytest

import proxcalc as pc
from proxcalc.engine import SolverBudget, numerical_prox
from proxcalc.errors import DomainUnreachable

from conftest import brute_force_prox


def test_prox_quadratic_example():
    # brute-force 1D oracle: min of y^2/2 + (2-y)^2/2 at y=1, value 1.0
    f = pc.Quadratic(np.eye(2))
    y, val = brute_force_prox(pc.Quadratic(np.eye(1)), 1.0, [2.0], -1, 3, 400001)
    assert y[0] == pytest.approx(1.0, abs=1e-5)
    assert val == pytest.approx(1.0, abs=1e-8)
    res = pc.prox(f, 1.0, [2, 0])
    assert np.allclose(res.minimizer, [1, 0])
    assert res.envelope_value == pytest.approx(1.0)
    assert res.method == "closed_form"
    assert res.residual == 0.0


def test_prox_indicator_point():
    res = pc.prox(pc.IndicatorPoint([0.0, 0.0]), 1.0, [3, 4])
    assert np.allclose(res.minimizer, [0, 0])
    assert res.envelope_value == pytest.approx(12.5)


def test_prox_translated_norm():
    f = pc.Translate(pc.ScaledNorm(1.0, [0.0, 0.0]), [1.0, 0.0])
    res = pc.prox(f, 1.0, [2, 0])
    assert np.allclose(res.minimizer, [1.0, 0.0])
    y, _ = brute_force_prox(f, 1.0, [2.0, 0.0], -4, 4, 640000)
    assert np.allclose(res.minimizer, y, atol=2e-2)


def test_numerical_prox_norm_matches_formula():
    res = numerical_prox(pc.ScaledNorm(1.0, [0.0, 0.0]), 1.0, [3, 4])
    assert np.allclose(res.minimizer, [2.4, 3.2], atol=1e-6)


def test_numerical_prox_addconst_quadratic():
    # brute-force oracle: min of y^2/2 + 7 + (3-y)^2/4 -> y = 1
    f = pc.AddConst(pc.Quadratic(np.eye(2)), 7.0)
    y, _ = brute_force_prox(pc.AddConst(pc.Quadratic(np.eye(1)), 7.0), 2.0, [3.0], -1, 4, 500001)
    assert y[0] == pytest.approx(1.0, abs=1e-5)
    res = numerical_prox(f, 2.0, [3, 0])
    assert np.allclose(res.minimizer, [1, 0], atol=1e-6)
    assert res.envelope_value == pytest.approx(7.0 + 0.5 + 1.0, abs=1e-9)


def test_numerical_prox_fixed_point_short_circuit():
    # x already the minimizer: finished within two iterations
    f = pc.ScaledNorm(1.0, [0.0, 0.0])
    x = [0.0, 0.0]
    res = numerical_prox(f, 1.0, x)
    assert res.iterations <= 2
    assert np.allclose(res.minimizer, x, atol=1e-12)


def test_numerical_prox_agrees_with_closed_form(rng):
    cases = [
        pc.ScaledNorm(1.5, [0.2, -0.1]),
        pc.Quadratic(np.array([[3.0, 0.4], [0.4, 1.0]]), [0.2, 0.0], 0.5),
        pc.SupportBall([0.1, 0.0], 1.2),
        pc.Tilt(pc.ScaledNorm(1.0, [0.0, 0.0]), [0.3, 0.4]),
        pc.Envelope(pc.ScaledNorm(1.0, [0.0, 0.0]), 1.0),
    ]
    for f in cases:
        for _ in range(12):
            lam = float(rng.uniform(0.4, 2.0))
            x = rng.uniform(-4, 4, 2)
            a = numerical_prox(f, lam, x).minimizer
            b = pc.prox_closed_form(f, lam, x)
            assert np.linalg.norm(a - b) < 1e-6


def test_numerical_prox_indicator_short_circuit():
    res = numerical_prox(pc.IndicatorBox([-1, -1], [1, 1]), 1.0, [3, -0.5])
    assert res.iterations == 0
    assert np.allclose(res.minimizer, [1, -0.5])


def test_numerical_prox_domain_unreachable():
    class Nowhere:
        dim = 1

        def value_many(self, X):
            return np.full(X.shape[0], np.inf)

    with pytest.raises(DomainUnreachable):
        numerical_prox(Nowhere(), 1.0, [0.0])


def test_budget_validation():
    with pytest.raises(ValueError):
        SolverBudget(max_iters=0)
    with pytest.raises(ValueError):
        SolverBudget(tol=0.0)
    with pytest.raises(ValueError):
        pc.prox(pc.ScaledNorm(1.0, [0.0]), -1.0, [1.0])


def test_envelope_value_invariant(rng):
    f = pc.IndicatorBall([0.0, 0.0], 1.0)
    for _ in range(20):
        lam = float(rng.uniform(0.3, 2.0))
        x = rng.uniform(-4, 4, 2)
        res = pc.prox(f, lam, x)
        direct = pc.evaluate(f, res.minimizer) + np.dot(x - res.minimizer, x - res.minimizer) / (2 * lam)
        assert res.envelope_value == pytest.approx(direct, abs=1e-9)


# ---------------------------------------------------------------------------
# moreau_envelope / envelope_gradient
# ---------------------------------------------------------------------------

def test_envelope_of_ball_is_half_squared_distance():
    # distance from (3,4) to the unit ball is 4; 4^2/2 = 8
    assert pc.moreau_envelope(pc.IndicatorBall([0, 0], 1.0), 1.0, [3, 4]) == pytest.approx(8.0)


def test_envelope_quadratic():
    assert pc.moreau_envelope(pc.Quadratic(np.eye(2)), 1.0, [2, 0]) == pytest.approx(1.0)


def test_envelope_addconst_passthrough(rng):
    g = pc.ScaledNorm(1.0, [0.0, 0.0])
    f = pc.AddConst(g, 7.0)
    for _ in range(10):
        x = rng.uniform(-3, 3, 2)
        assert pc.moreau_envelope(f, 1.0, x) == pytest.approx(
            pc.moreau_envelope(g, 1.0, x) + 7.0
        )


def test_envelope_gradient_indicator_point():
    for x in ([3.0, 4.0], [-1.0, 0.5]):
        g = pc.envelope_gradient(pc.IndicatorPoint([0.0, 0.0]), 1.0, x)
        assert np.allclose(g, x)


def test_envelope_gradient_norm():
    g = pc.envelope_gradient(pc.ScaledNorm(1.0, [0.0, 0.0]), 1.0, [3, 4])
    assert np.allclose(g, [0.6, 0.8])


def test_envelope_gradient_finite_differences(rng):
    cases = [
        pc.ScaledNorm(1.0, [0.0, 0.0]),
        pc.IndicatorBall([0.0, 0.0], 1.0),
        pc.Quadratic(np.array([[2.0, 0.0], [0.0, 1.0]])),
        pc.SupportBox([-1.0, -1.0], [1.0, 1.0]),
    ]
    h = 1e-5
    for f in cases:
        for _ in range(15):
            x = rng.uniform(-3, 3, 2)
            ga = pc.envelope_gradient(f, 1.0, x)
            gfd = np.array([
                (pc.moreau_envelope(f, 1.0, x + h * e) - pc.moreau_envelope(f, 1.0, x - h * e)) / (2 * h)
                for e in np.eye(2)
            ])
            assert np.linalg.norm(ga - gfd) / max(1.0, np.linalg.norm(ga)) < 1e-4


# ---------------------------------------------------------------------------
# moreau_decomposition_residual
# ---------------------------------------------------------------------------

def test_decomposition_ball():
    assert pc.moreau_decomposition_residual(pc.IndicatorBall([0, 0], 1.0), [3, 4]) < 1e-12


def test_decomposition_point_indicator(rng):
    f = pc.IndicatorPoint([0.0, 0.0])
    for _ in range(10):
        x = rng.uniform(-5, 5, 2)
        assert pc.moreau_decomposition_residual(f, x) < 1e-12


def test_decomposition_quadratic():
    assert pc.moreau_decomposition_residual(pc.Quadratic(np.eye(2)), [2, 0]) < 1e-12


def test_decomposition_with_grid_conjugate():
    # halfspace indicator has no closed-form conjugate: use the tabulated one
    f = pc.IndicatorHalfspace([1.0], 0.5)
    table = pc.tabulate(f, pc.SampleGrid([-30.0], [30.0], [12001]))
    conj = pc.TabulatedConjugate(table)
    for x in ([2.0], [-1.0], [0.7]):
        r = pc.moreau_decomposition_residual(f, x, conj=conj)
        assert r < 1e-4
