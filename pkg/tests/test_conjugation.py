"""Grid tabulation and the numerical Legendre-Fenchel transform."""

import numpy as np
import pytest

import proxcalc as pc
from proxcalc.conjugation import conjugate_argmax, conjugate_many
from proxcalc.errors import DimensionMismatch

INF = float("inf")


def test_tabulate_half_square():
    t = pc.tabulate(pc.Quadratic(np.eye(1)), pc.SampleGrid([-1.0], [1.0], [3]))
    assert np.allclose(t.values, [0.5, 0.0, 0.5])


def test_tabulate_indicator_interval():
    t = pc.tabulate(pc.IndicatorBox([0.0], [1.0]), pc.SampleGrid([-1.0], [2.0], [4]))
    assert t.values[0] == INF and t.values[3] == INF
    assert t.values[1] == 0.0 and t.values[2] == 0.0


def test_tabulate_tilted_norm():
    # |x| - x on {-2,-1,0,1,2} is (4, 2, 0, 0, 0) by direct arithmetic
    f = pc.Tilt(pc.ScaledNorm(1.0, [0.0]), [1.0])
    t = pc.tabulate(f, pc.SampleGrid([-2.0], [2.0], [5]))
    assert np.allclose(t.values, [4.0, 2.0, 0.0, 0.0, 0.0])


def test_tabulate_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        pc.tabulate(pc.ScaledNorm(1.0, [0.0, 0.0]), pc.SampleGrid([-1.0], [1.0], [3]))


def test_grid_caps():
    with pytest.raises(DimensionMismatch):
        pc.SampleGrid([-1.0] * 4, [1.0] * 4, [3] * 4)
    with pytest.raises(ValueError):
        pc.SampleGrid([-1.0, -1.0], [1.0, 1.0], [1001, 1001])


def test_all_infinite_table_rejected():
    with pytest.raises(ValueError, match="finite"):
        pc.ValueTable(pc.SampleGrid([-1.0], [1.0], [3]), [INF, INF, INF])


def test_numerical_conjugate_half_square():
    # self-conjugacy of x^2/2 as the oracle
    t = pc.tabulate(pc.Quadratic(np.eye(1)), pc.SampleGrid([-3.0], [3.0], [601]))
    assert pc.numerical_conjugate(t, [1.0]) == pytest.approx(0.5, abs=1e-4)


def test_numerical_conjugate_point_indicator():
    # one finite node: sup over a single point gives <q, p> exactly
    f = pc.Translate(pc.IndicatorPoint([1.0]), [0.0])
    t = pc.tabulate(f, pc.SampleGrid([-2.0], [2.0], [5]))
    for q in (0.0, 0.5, -2.0):
        assert pc.numerical_conjugate(t, [q]) == pytest.approx(q)


def test_numerical_conjugate_at_zero_is_minus_min():
    f = pc.Quadratic(np.eye(1), [-1.0], 0.3)
    t = pc.tabulate(f, pc.SampleGrid([-3.0], [3.0], [601]))
    assert pc.numerical_conjugate(t, [0.0]) == pytest.approx(-float(np.min(t.values)))


def test_monotone_refinement():
    # a strict lattice refinement (2n-1 points) never decreases the sup
    f = pc.ScaledNorm(1.0, [0.3])
    coarse = pc.tabulate(f, pc.SampleGrid([-4.0], [4.0], [41]))
    fine = pc.tabulate(f, pc.SampleGrid([-4.0], [4.0], [81]))
    for q in np.linspace(-0.9, 0.9, 7):
        assert pc.numerical_conjugate(fine, [q]) >= pc.numerical_conjugate(coarse, [q]) - 1e-12


def test_fenchel_with_numerical_conjugate():
    f = pc.SupportBox([-1.0, -0.5], [1.0, 2.0])
    grid = pc.SampleGrid([-5.0, -5.0], [5.0, 5.0], [81, 81])
    t = pc.tabulate(f, grid)
    P = grid.points()
    for q in ([0.5, 0.5], [1.5, -0.2]):
        vstar = pc.numerical_conjugate(t, q)
        vals = t.values
        finite = np.isfinite(vals)
        assert np.all(vals[finite] + vstar >= P[finite] @ np.asarray(q) - 1e-12)


def test_conjugate_argmax_boundary_flag():
    # conjugating a quadratic at a far query pushes the argmax to the edge
    t = pc.tabulate(pc.Quadratic(np.eye(1)), pc.SampleGrid([-2.0], [2.0], [201]))
    _, _, boundary = conjugate_argmax(t, [5.0])
    assert boundary
    _, _, interior = conjugate_argmax(t, [0.5])
    assert not interior


def test_agreement_with_closed_form_interior():
    # >= 200 points/axis spanning 5x the query range: within 2e-3
    cases_1d = [
        pc.ScaledNorm(1.0, [0.0]),
        pc.Quadratic(np.eye(1)),
        pc.Envelope(pc.IndicatorBox([-1.0], [1.0]), 1.0),
    ]
    grid = pc.SampleGrid([-10.0], [10.0], [2001])
    queries = np.linspace(-0.9, 0.9, 11).reshape(-1, 1)
    for f in cases_1d:
        t = pc.tabulate(f, grid)
        conj = pc.conjugate_closed_form(f)
        vals, _ = conjugate_many(t, queries)
        for q, v in zip(queries, vals):
            truth = pc.evaluate(conj, q)
            if np.isfinite(truth):
                assert abs(v - truth) <= 2e-3


# ---------------------------------------------------------------------------
# envelope conjugate identity
# ---------------------------------------------------------------------------

def test_envelope_conjugate_point_indicator():
    # envelope of the point indicator at 0 is ||.||^2/2, its own conjugate
    rep = pc.verify_envelope_conjugate(
        pc.IndicatorPoint([0.0]), 1.0,
        pc.SampleGrid([-6.0], [6.0], [1201]),
        np.linspace(-1.0, 1.0, 9),
    )
    assert rep.status == "verified"
    assert rep.conclusion_residual < 1e-6


def test_envelope_conjugate_norm():
    rep = pc.verify_envelope_conjugate(
        pc.ScaledNorm(1.0, [0.0]), 1.0,
        pc.SampleGrid([-5.0], [5.0], [2001]),
        np.linspace(-2.0, 2.0, 17),
    )
    assert rep.status == "verified"
    assert rep.conclusion_residual <= 2e-3


def test_envelope_conjugate_half_square_lam2():
    # envelope of x^2/2 at lam=2 is x^2/6, whose conjugate is 1.5 q^2
    f = pc.Quadratic(np.eye(1))
    env = pc.Envelope(f, 2.0)
    assert pc.evaluate(env, [3.0]) == pytest.approx(1.5)  # 9/6
    rep = pc.verify_envelope_conjugate(
        f, 2.0, pc.SampleGrid([-8.0], [8.0], [1601]), np.linspace(-1.5, 1.5, 13)
    )
    assert rep.status == "verified"
    for q in (0.5, 1.0, 1.5):
        conj_env = pc.conjugate_closed_form(env)
        assert pc.evaluate(conj_env, [q]) == pytest.approx(1.5 * q * q, abs=1e-12)


def test_envelope_conjugate_identity_by_construction(rng):
    # evaluate(conj(Envelope(f,lam)), x) == evaluate(f*, x) + lam/2 ||x||^2
    for f in (pc.ScaledNorm(1.0, [0.0, 0.0]), pc.IndicatorBall([0.0, 0.0], 1.0)):
        lam = 0.7
        lhs_f = pc.conjugate_closed_form(pc.Envelope(f, lam))
        conj = pc.conjugate_closed_form(f)
        for _ in range(20):
            x = rng.uniform(-2, 2, 2)
            lhs = pc.evaluate(lhs_f, x)
            rhs = pc.evaluate(conj, x) + 0.5 * lam * float(np.dot(x, x))
            if np.isfinite(rhs):
                assert lhs == pytest.approx(rhs, abs=1e-12)
            else:
                assert lhs == INF


# ---------------------------------------------------------------------------
# CSV round trip
# ---------------------------------------------------------------------------

def test_table_csv_roundtrip(tmp_path):
    f = pc.IndicatorBox([0.0, 0.0], [1.0, 1.0])
    t = pc.tabulate(f, pc.SampleGrid([-1.0, -1.0], [2.0, 2.0], [7, 5]))
    path = tmp_path / "table.csv"
    pc.write_table_csv(t, str(path))
    t2 = pc.read_table_csv(str(path))
    assert np.array_equal(t.values, t2.values)
    assert np.allclose(t.grid.points(), t2.grid.points())
    assert "+inf" in path.read_text()
