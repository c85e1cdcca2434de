r"""Recovery of a convex function, up to a constant, from its prox map.

Given oracle access to prox_f and an anchor x0 in dom f, the pipeline
rebuilds f by four steps:

1. gradient field: G(x) = prox_f(x + x0) - x0 is the gradient of the
   potential u = (f* - <x0, .>)_1, a C^{1,1} convex function bounded below;
2. line integration: u(x) - u(0) = int_0^1 <G(t x), x> dt along straight
   rays from the origin (composite Simpson);
3. constant pinning: inf u = -f(x0), so knowing f(x0) fixes the table
   absolutely (otherwise the output is declared "up to a constant");
4. conjugate back: u*(x) = f(x + x0) + ||x||^2 / 2, evaluated by grid
   conjugation, so f(q) = u*(q - x0) - ||q - x0||^2 / 2.

Before integrating, the field is vetted: monotonicity and firm
nonexpansiveness on sampled pairs, discrete cross-partial symmetry, and a
ray-versus-staircase path-independence probe that doubles the quadrature
until agreement. A field that fails these is not the prox of any proper
convex l.s.c. function and reconstruction aborts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import functions as fn
from .conjugation import conjugate_many
from .errors import AnchorOutsideDomain, DimensionMismatch, NonConservativeField
from .grids import SampleGrid, ValueTable
from .reports import (
    CheckReport,
    COUNTEREXAMPLE,
    HYPOTHESIS_FAILS,
    PRECONDITION_VIOLATED,
    VERIFIED,
)
from .sampling import Lcg

MONOTONE_TOL = 1e-8
FIRM_TOL = 1e-8
SYMMETRY_TOL = 1e-3
PATH_TOL = 1e-4
MAX_PANELS = 1024


class ProxOracle:
    """Black-box prox map with batching and a call counter."""

    def __init__(self, query, dim: int, batch_query=None):
        self._query = query
        self._batch = batch_query
        self.dim = int(dim)
        self.call_count = 0

    @classmethod
    def from_function(cls, f: fn.ConvexFunction, lam: float = 1.0) -> "ProxOracle":
        def one(x):
            return f.prox_many(lam, x.reshape(1, -1))[0]

        def many(X):
            return f.prox_many(lam, X)

        return cls(one, f.dim, many)

    @classmethod
    def from_table(cls, inputs: np.ndarray, outputs: np.ndarray) -> "ProxOracle":
        """Interpolating oracle over sampled (input, output) pairs.

        1-D tables interpolate linearly per output coordinate; higher
        dimensions use barycentric-linear interpolation inside the convex
        hull of the inputs with nearest-neighbor fallback outside.
        """
        inputs = np.asarray(inputs, dtype=float)
        outputs = np.asarray(outputs, dtype=float)
        if inputs.shape != outputs.shape:
            raise DimensionMismatch("oracle table inputs/outputs must share shape")
        dim = inputs.shape[1]
        if dim == 1:
            order = np.argsort(inputs[:, 0])
            xs = inputs[order, 0]
            ys = outputs[order, 0]

            def many(X):
                return np.interp(X[:, 0], xs, ys).reshape(-1, 1)
        else:
            from scipy.interpolate import LinearNDInterpolator, NearestNDInterpolator

            lin = LinearNDInterpolator(inputs, outputs)
            near = NearestNDInterpolator(inputs, outputs)

            def many(X):
                Y = lin(X)
                bad = np.any(np.isnan(Y), axis=1)
                if np.any(bad):
                    Y[bad] = near(X[bad])
                return Y

        def one(x):
            return many(x.reshape(1, -1))[0]

        return cls(one, dim, many)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = fn.as_point(x, self.dim)
        self.call_count += 1
        out = np.asarray(self._query(x), dtype=float)
        if out.shape != (self.dim,):
            raise DimensionMismatch("oracle returned a point of the wrong dimension")
        return out

    def query_many(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        self.call_count += X.shape[0]
        if self._batch is not None:
            return np.asarray(self._batch(X), dtype=float)
        return np.array([self._query(x) for x in X])


@dataclass
class ReconstructionTask:
    oracle: ProxOracle
    x0: np.ndarray
    tilde_grid: SampleGrid
    query_points: np.ndarray
    f_at_x0: float | None = None
    quadrature_steps: int = 64

    def __post_init__(self):
        self.x0 = fn.as_point(self.x0, self.oracle.dim)
        self.query_points = np.atleast_2d(np.asarray(self.query_points, dtype=float))
        if self.query_points.shape[1] != self.oracle.dim:
            raise DimensionMismatch("query points do not match the oracle dimension")
        if self.tilde_grid.dim != self.oracle.dim:
            raise DimensionMismatch("grid does not match the oracle dimension")
        if self.quadrature_steps < 8:
            raise ValueError("quadrature_steps must be >= 8")


@dataclass
class ReconstructionReport:
    recovered: list  # (point, value) pairs
    pinned_constant: float
    gradient_symmetry_residual: float
    monotonicity_residual: float
    boundary_argmax_warnings: int
    convention: str  # "absolute" | "up to additive constant"
    path_disagreement: float = 0.0
    quadrature_panels: int = 64
    pin_min_on_boundary: bool = False
    details: dict = field(default_factory=dict)


def tilde_gradient(oracle: ProxOracle, x0, x) -> np.ndarray:
    """G(x) = oracle(x + x0) - x0, the gradient of the shifted potential."""
    x0 = fn.as_point(x0, oracle.dim)
    x = fn.as_point(x, oracle.dim)
    return oracle(x + x0) - x0


def _field_many(oracle: ProxOracle, x0: np.ndarray, X: np.ndarray) -> np.ndarray:
    return oracle.query_many(X + x0) - x0


def validate_field(oracle: ProxOracle, x0, radius: float, seed: int = 13,
                   pairs: int = 40):
    """Monotonicity, firm nonexpansiveness, and cross-partial symmetry.

    Returns (monotonicity_residual, firm_residual, symmetry_residual);
    raises NonConservativeField beyond tolerance. The symmetry check uses
    central differences at sampled points and is skipped in dimension 1.
    """
    x0 = fn.as_point(x0, oracle.dim)
    rng = Lcg(seed)
    dim = oracle.dim
    A = rng.points_in_ball(pairs, dim, radius)
    B = rng.points_in_ball(pairs, dim, radius)
    GA = _field_many(oracle, x0, A)
    GB = _field_many(oracle, x0, B)
    D = GA - GB
    inner = np.sum(D * (A - B), axis=1)
    mono = float(np.max(np.maximum(-inner, 0.0)))
    firm = float(np.max(np.maximum(np.sum(D * D, axis=1) - inner, 0.0)))

    sym = 0.0
    if dim >= 2:
        h = 1e-5
        probes = rng.points_in_ball(12, dim, radius)
        for p in probes:
            J = np.empty((dim, dim))
            for i in range(dim):
                e = np.zeros(dim)
                e[i] = h
                J[:, i] = (
                    _field_many(oracle, x0, (p + e).reshape(1, -1))[0]
                    - _field_many(oracle, x0, (p - e).reshape(1, -1))[0]
                ) / (2 * h)
            sym = max(sym, float(np.max(np.abs(J - J.T))))

    if mono > MONOTONE_TOL:
        raise NonConservativeField(f"field is not monotone (residual {mono:.3e})")
    if sym > SYMMETRY_TOL:
        raise NonConservativeField(f"cross-partials asymmetric (residual {sym:.3e})")
    return mono, firm, sym


def _simpson_weights(panels: int) -> tuple[np.ndarray, np.ndarray]:
    n = 2 * panels + 1
    t = np.linspace(0.0, 1.0, n)
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w /= 3.0 * 2.0 * panels
    return t, w


def _ray_integrals(oracle: ProxOracle, x0: np.ndarray, X: np.ndarray,
                   panels: int) -> np.ndarray:
    """int_0^1 <G(t x), x> dt for every row x of X, composite Simpson."""
    t, w = _simpson_weights(panels)
    acc = np.zeros(X.shape[0])
    for tj, wj in zip(t, w):
        G = _field_many(oracle, x0, tj * X)
        acc += wj * np.sum(G * X, axis=1)
    return acc


def _staircase_integral(oracle: ProxOracle, x0: np.ndarray, x: np.ndarray,
                        panels: int) -> float:
    """Axis-aligned path 0 -> (x1,0,..) -> (x1,x2,0,..) -> ... -> x."""
    t, w = _simpson_weights(panels)
    total = 0.0
    base = np.zeros_like(x)
    for i in range(x.size):
        seg = np.zeros_like(x)
        seg[i] = x[i]
        pts = base[None, :] + t[:, None] * seg[None, :]
        G = _field_many(oracle, x0, pts)
        total += float(np.sum(w * (G @ seg)))
        base = base + seg
    return total


def check_path_independence(oracle: ProxOracle, x0, probes: np.ndarray,
                            panels: int) -> tuple[float, int]:
    """Ray-vs-staircase disagreement; panels double until within PATH_TOL."""
    x0 = fn.as_point(x0, oracle.dim)
    probes = np.atleast_2d(probes)
    while True:
        ray = _ray_integrals(oracle, x0, probes, panels)
        stair = np.array(
            [_staircase_integral(oracle, x0, p, panels) for p in probes]
        )
        gap = float(np.max(np.abs(ray - stair)))
        if gap <= PATH_TOL or panels >= MAX_PANELS:
            return gap, panels
        panels *= 2


def integrate_tilde(oracle: ProxOracle, x0, grid: SampleGrid,
                    quadrature_steps: int = 64,
                    f_at_x0: float | None = None):
    """Tabulate the potential u on the grid by ray integration.

    Without ``f_at_x0`` the table is anchored at u(0) = 0. With it, the
    whole table is shifted so that its minimum equals -f_at_x0, the exact
    infimum of u; the shift is reliable only when the grid contains the
    minimizer, so a minimum on the grid boundary is flagged.

    Returns (ValueTable, diagnostics dict).
    """
    x0 = fn.as_point(x0, oracle.dim)
    if grid.dim != oracle.dim:
        raise DimensionMismatch("grid does not match the oracle dimension")
    mono, firm, sym = validate_field(
        oracle, x0, radius=float(np.max(np.abs(grid.hi - grid.lo))) / 2.0
    )
    probe_idx = [0, grid.size - 1, grid.size // 2, grid.size // 3]
    probes = grid.points()[sorted(set(probe_idx))]
    path_gap, panels = check_path_independence(oracle, x0, probes, quadrature_steps)

    values = _ray_integrals(oracle, x0, grid.points(), panels)

    pinned = 0.0
    pin_on_boundary = False
    if f_at_x0 is not None:
        i_min = int(np.argmin(values))
        pinned = -float(f_at_x0) - float(values[i_min])
        values = values + pinned
        pin_on_boundary = bool(grid.boundary_mask()[i_min])

    diag = {
        "monotonicity_residual": mono,
        "firm_residual": firm,
        "gradient_symmetry_residual": sym,
        "path_disagreement": path_gap,
        "quadrature_panels": panels,
        "pinned_constant": pinned,
        "pin_min_on_boundary": pin_on_boundary,
    }
    return ValueTable(grid, values), diag


def reconstruct(task: ReconstructionTask) -> ReconstructionReport:
    """Run the full pipeline and evaluate the recovered function at the queries."""
    table, diag = integrate_tilde(
        task.oracle, task.x0, task.tilde_grid, task.quadrature_steps, task.f_at_x0
    )
    Z = task.query_points - task.x0
    vals, boundary = conjugate_many(table, Z)
    rec = vals - 0.5 * np.sum(Z * Z, axis=1)
    convention = "absolute" if task.f_at_x0 is not None else "up to additive constant"
    return ReconstructionReport(
        recovered=[(q.copy(), float(v)) for q, v in zip(task.query_points, rec)],
        pinned_constant=diag["pinned_constant"],
        gradient_symmetry_residual=diag["gradient_symmetry_residual"],
        monotonicity_residual=diag["monotonicity_residual"],
        boundary_argmax_warnings=int(np.sum(boundary)),
        convention=convention,
        path_disagreement=diag["path_disagreement"],
        quadrature_panels=diag["quadrature_panels"],
        pin_min_on_boundary=diag["pin_min_on_boundary"],
        details={"oracle_calls": task.oracle.call_count, "firm_residual": diag["firm_residual"]},
    )


def determine_from_norm(f: fn.ConvexFunction, g: fn.ConvexFunction, samples,
                        x0=None, tol_h: float = 1e-8,
                        tol_c: float = 1e-6) -> CheckReport:
    """If ||prox_f - x0|| and ||prox_g - x0|| agree everywhere, f and g agree
    up to the constant f(x0) - g(x0).

    With an anchor x0 (which must lie in both domains), the conclusion
    |(f - f(x0)) - (g - g(x0))| <= tol_c is asserted at finite samples.
    Without one, the check runs the origin variant: the anchor is 0, the
    conclusion constant is the difference of sampled conjugate infima, and a
    sampled boundedness precondition on f* and g* guards the claim; the
    report carries the sampling radii as the divergence test is heuristic.
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    pf = f.prox_many(1.0, samples)
    pg = g.prox_many(1.0, samples)

    if x0 is not None:
        x0 = fn.as_point(x0, f.dim)
        f0 = fn.evaluate(f, x0)
        g0 = fn.evaluate(g, x0)
        if not (np.isfinite(f0) and np.isfinite(g0)):
            raise AnchorOutsideDomain("anchor must lie in dom f and dom g")
        hyp = float(
            np.max(
                np.abs(
                    np.linalg.norm(pf - x0, axis=1) - np.linalg.norm(pg - x0, axis=1)
                )
            )
        )
        fv = fn.evaluate_many(f, samples)
        gv = fn.evaluate_many(g, samples)
        status, concl, witnesses = _constant_difference(
            samples, fv - f0, gv - g0, 0.0, tol_c
        )
        if hyp > tol_h:
            status = HYPOTHESIS_FAILS
            concl = 0.0
            witnesses = []
        return CheckReport(
            name="determine_from_norm(anchored)",
            status=status,
            hypothesis_residual=hyp,
            conclusion_residual=concl,
            tolerance=tol_c,
            witnesses=witnesses,
            details={"anchor": x0, "samples": int(samples.shape[0])},
        )

    # origin variant: anchor 0 without domain requirement; needs bounded conjugates
    from .verify import sampled_conjugate_infimum

    hyp = float(
        np.max(np.abs(np.linalg.norm(pf, axis=1) - np.linalg.norm(pg, axis=1)))
    )
    inf_f, div_f, radii = sampled_conjugate_infimum(f)
    inf_g, div_g, _ = sampled_conjugate_infimum(g)
    fv = fn.evaluate_many(f, samples)
    gv = fn.evaluate_many(g, samples)
    status, concl, witnesses = _constant_difference(
        samples, fv, gv, inf_g - inf_f, tol_c
    )
    if hyp > tol_h:
        status = HYPOTHESIS_FAILS
        concl = 0.0
        witnesses = []
    elif div_f or div_g:
        status = PRECONDITION_VIOLATED
    return CheckReport(
        name="determine_from_norm(origin)",
        status=status,
        hypothesis_residual=hyp,
        conclusion_residual=concl,
        tolerance=tol_c,
        witnesses=witnesses,
        details={
            "sampled_inf_conj_f": inf_f,
            "sampled_inf_conj_g": inf_g,
            "conjugate_diverges": [bool(div_f), bool(div_g)],
            "sampling_radii": list(radii),
            "samples": int(samples.shape[0]),
        },
    )


def _constant_difference(samples, fv, gv, constant, tol):
    """Residual of f - g = constant over samples, extended-real aware."""
    worst = 0.0
    witnesses = []
    for x, a, b in zip(samples, fv, gv):
        fin_a, fin_b = np.isfinite(a), np.isfinite(b)
        if fin_a and fin_b:
            gap = abs((a - b) - constant)
        elif fin_a != fin_b:
            gap = float("inf")
        else:
            continue
        if gap > tol and len(witnesses) < 10:
            witnesses.append((x, f"f={a!r} g={b!r} expected_gap={constant!r}"))
        worst = max(worst, gap)
    status = VERIFIED if worst <= tol else COUNTEREXAMPLE
    return status, worst, witnesses
