r"""Empirical checkers for the comparison and determination principles.

Each checker samples its hypothesis and its conclusion over a declared point
set and reports residuals, a status, and witnesses of failure:

* ``check_comparison``: if ||prox_f(x) - x0|| <= ||prox_g(x) - x0|| for all
  x, then g - g(x0) <= f - f(x0).
* ``check_gradient_comparison``: for differentiable bounded-below functions
  (Moreau envelopes here), ||grad f|| <= ||grad g|| everywhere forces
  f - inf f <= g - inf g.
* ``check_norm_lower_bound``: ||x|| - ell <= ||prox_g(x)|| for all x forces
  g - g(0) <= ell ||.||; with ell = 0 the function is constant.
* ``check_lipschitz``: a finite-valued convex l.s.c. f is ell-Lipschitz
  exactly when ||x|| - ell <= ||prox_f(x+y) - y|| for all x, y.
* ``check_equivalences``: with f* and g* bounded below, five statements
  (prox-norm equality, equality up to the conjugate-infima constant,
  least-norm subgradient equality, subdifferential equality, prox equality)
  hold or fail together.
* ``check_support_distance``: for closed convex C containing 0,
  ||prox_f|| = dist(., C) exactly when f is the support function of C up to
  a constant.

Conclusions are never asserted when the sampled hypothesis fails. Statuses
are one of verified / hypothesis_fails / counterexample /
precondition_violated; a counterexample on a pair that passes its
preconditions would contradict a theorem and is treated as build-breaking
by the test suite.

Infima of conjugates are sampled, not proved: points are drawn log-radially
out to four times the configured radius, and divergence is declared when
the running minimum keeps dropping as the radius doubles (or falls below an
absolute cutoff). Reports carry the radii so the reader can judge adequacy.
"""

from __future__ import annotations

import numpy as np

from . import engine
from . import functions as fn
from .determination import _constant_difference, determine_from_norm
from .errors import (
    AnchorOutsideDomain,
    OriginNotInC,
    UnsupportedConjugate,
    UnsupportedSubdifferential,
)
from .grids import SampleGrid, tabulate
from .conjugation import conjugate_many, verify_envelope_conjugate
from .reports import (
    CheckReport,
    COUNTEREXAMPLE,
    HYPOTHESIS_FAILS,
    PRECONDITION_VIOLATED,
    VERIFIED,
)
from .sampling import Lcg
from .sets import EmptySet, sets_equal

TOL_CLOSED = 1e-8
TOL_NUMERICAL = 1e-4
TOL_GRID = 2e-3

INFIMUM_RADIUS = 50.0
INFIMUM_POINTS = 10_000
DIVERGENCE_CUTOFF = -1e6


def sampled_conjugate_infimum(f: fn.ConvexFunction, radius: float = INFIMUM_RADIUS,
                              n_points: int = INFIMUM_POINTS, seed: int = 101,
                              cutoff: float = DIVERGENCE_CUTOFF):
    """(sampled inf of f*, diverges flag, radii used).

    The conjugate is evaluated in closed form when possible, otherwise by
    grid conjugation of a tabulation of f. Divergence is declared when the
    nested minima keep dropping materially from radius 2R to 4R, or fall
    below the absolute cutoff.
    """
    probes = [np.zeros(f.dim)]
    try:
        conj = fn.conjugate_closed_form(f)
        probes.extend(fn.structured_probes(conj))

        def eval_conj(Y):
            return fn.evaluate_many(conj, Y)
    except UnsupportedConjugate:
        if f.dim > 3:
            raise UnsupportedConjugate(
                "no closed-form conjugate and grid conjugation needs dim <= 3"
            )
        span = 4.0 * radius
        counts = {1: 4001, 2: 201, 3: 41}[f.dim]
        table = tabulate(f, SampleGrid([-span] * f.dim, [span] * f.dim, [counts] * f.dim))

        def eval_conj(Y):
            return conjugate_many(table, Y)[0]

    rng = Lcg(seed)
    Y = rng.log_radial_points(n_points, f.dim, 1e-3, 4.0 * radius)
    Y = np.vstack([Y, np.asarray(probes)])
    norms = np.linalg.norm(Y, axis=1)
    vals = eval_conj(Y)

    minima = []
    for r in (radius, 2.0 * radius, 4.0 * radius):
        sel = vals[(norms <= r) & np.isfinite(vals)]
        minima.append(float(np.min(sel)) if sel.size else float("inf"))
    m1, m2, m4 = minima
    drop = m2 - m4 if np.isfinite(m2) and np.isfinite(m4) else 0.0
    diverges = bool(m4 < cutoff or drop > max(1e-6, 1e-3 * radius))
    return m4, diverges, (radius, 2.0 * radius, 4.0 * radius)


def check_comparison(f: fn.ConvexFunction, g: fn.ConvexFunction, x0, samples,
                     tol_h: float = TOL_CLOSED, tol_c: float = 1e-6) -> CheckReport:
    """Hypothesis ||prox_f - x0|| <= ||prox_g - x0||, conclusion
    g - g(x0) <= f - f(x0), both sampled."""
    x0 = fn.as_point(x0, f.dim)
    f0 = fn.evaluate(f, x0)
    g0 = fn.evaluate(g, x0)
    if not (np.isfinite(f0) and np.isfinite(g0)):
        raise AnchorOutsideDomain("anchor must lie in dom f and dom g")
    X = np.atleast_2d(np.asarray(samples, dtype=float))
    pf = f.prox_many(1.0, X)
    pg = g.prox_many(1.0, X)
    hyp = float(
        np.max(
            np.maximum(
                np.linalg.norm(pf - x0, axis=1) - np.linalg.norm(pg - x0, axis=1), 0.0
            )
        )
    )
    fv = fn.evaluate_many(f, X)
    gv = fn.evaluate_many(g, X)
    concl = 0.0
    witnesses = []
    for x, a, b in zip(X, fv, gv):
        # want b - g0 <= a - f0 in extended reals
        if np.isinf(b) and np.isinf(a):
            continue
        if np.isinf(b):
            gap = float("inf")
        elif np.isinf(a):
            gap = 0.0
        else:
            gap = max((b - g0) - (a - f0), 0.0)
        if gap > tol_c and len(witnesses) < 10:
            witnesses.append((x, f"g-g(x0)={b - g0!r} exceeds f-f(x0)={a - f0!r}"))
        concl = max(concl, gap)
    extended = False
    if hyp <= tol_h and concl > tol_c:
        # the hypothesis held on the declared samples but the conclusion did
        # not; widen the hypothesis sweep before blaming the implication,
        # since a too-small sample radius can hide hypothesis failures
        hyp = max(hyp, _hypothesis_extended(f, g, x0, X, tol_h))
        extended = True
    if hyp > tol_h:
        status = HYPOTHESIS_FAILS
        witnesses = []
    elif concl <= tol_c:
        status = VERIFIED
    else:
        status = COUNTEREXAMPLE
    return CheckReport(
        name="comparison",
        status=status,
        hypothesis_residual=hyp,
        conclusion_residual=concl,
        tolerance=tol_c,
        witnesses=witnesses,
        details={"anchor": x0, "samples": int(X.shape[0]), "tol_hypothesis": tol_h,
                 "hypothesis_sweep_extended": extended},
    )


def _hypothesis_extended(f, g, x0, X, tol_h) -> float:
    """Hypothesis residual over scaled copies of the samples plus a wider
    deterministic cloud."""
    radius = 4.0 * float(np.max(np.linalg.norm(X, axis=1)))
    rng = Lcg(0x5EED)
    clouds = [s * X for s in (2.0, 4.0, 8.0)]
    clouds.append(np.array([rng.point_in_ball(f.dim, radius) for _ in range(200)]))
    worst = 0.0
    for C in clouds:
        pf = f.prox_many(1.0, C)
        pg = g.prox_many(1.0, C)
        gaps = np.linalg.norm(pf - x0, axis=1) - np.linalg.norm(pg - x0, axis=1)
        worst = max(worst, float(np.max(np.maximum(gaps, 0.0))))
        if worst > tol_h:
            break
    return worst


def _envelope_gradient_many(env: fn.Envelope, X: np.ndarray) -> np.ndarray:
    return (X - env.f.prox_many(env.lam, X)) / env.lam


def check_gradient_comparison(f, g, samples, lam: float | None = None,
                              tol: float = 1e-6) -> CheckReport:
    """Envelope-based gradient comparison: ||grad f|| <= ||grad g|| sampled,
    then f - min f <= g - min g against sampled minima."""
    if lam is not None:
        f = fn.Envelope(f, lam)
        g = fn.Envelope(g, lam)
    if not isinstance(f, fn.Envelope) or not isinstance(g, fn.Envelope):
        raise ValueError("pass envelope nodes, or supply lam to wrap both")
    X = np.atleast_2d(np.asarray(samples, dtype=float))
    nf = np.linalg.norm(_envelope_gradient_many(f, X), axis=1)
    ng = np.linalg.norm(_envelope_gradient_many(g, X), axis=1)
    hyp = float(np.max(np.maximum(nf - ng, 0.0)))
    fv = fn.evaluate_many(f, X)
    gv = fn.evaluate_many(g, X)
    rel_f = fv - np.min(fv)
    rel_g = gv - np.min(gv)
    gaps = np.maximum(rel_f - rel_g, 0.0)
    concl = float(np.max(gaps))
    witnesses = []
    if hyp > tol:
        status = HYPOTHESIS_FAILS
    elif concl <= tol:
        status = VERIFIED
    else:
        status = COUNTEREXAMPLE
        worst = int(np.argmax(gaps))
        witnesses.append((X[worst], f"gap={gaps[worst]:.3e}"))
    return CheckReport(
        name="gradient_comparison",
        status=status,
        hypothesis_residual=hyp,
        conclusion_residual=concl,
        tolerance=tol,
        witnesses=witnesses,
        details={"samples": int(X.shape[0]), "sampled_min_f": float(np.min(fv)),
                 "sampled_min_g": float(np.min(gv))},
    )


def check_norm_lower_bound(g: fn.ConvexFunction, ell: float, samples,
                           tol: float = 1e-6) -> CheckReport:
    """Hypothesis ||x|| - ell <= ||prox_g(x)||, conclusion
    g - g(0) <= ell ||.||; with ell = 0, additionally g is constant."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    g0 = fn.evaluate(g, np.zeros(g.dim))
    if not np.isfinite(g0):
        raise AnchorOutsideDomain("g(0) must be finite")
    X = np.atleast_2d(np.asarray(samples, dtype=float))
    norms = np.linalg.norm(X, axis=1)
    pnorms = np.linalg.norm(g.prox_many(1.0, X), axis=1)
    hyp = float(np.max(np.maximum(norms - ell - pnorms, 0.0)))
    gv = fn.evaluate_many(g, X)
    finite = np.isfinite(gv)
    gaps = np.maximum(gv[finite] - g0 - ell * norms[finite], 0.0)
    concl = float(np.max(gaps)) if gaps.size else 0.0
    witnesses = []
    if ell == 0.0 and np.any(finite):
        spread = float(np.max(gv[finite]) - np.min(gv[finite]))
        concl = max(concl, spread)
    if hyp > tol:
        status = HYPOTHESIS_FAILS
    elif concl <= tol:
        status = VERIFIED
    else:
        status = COUNTEREXAMPLE
        idx = np.flatnonzero(finite)
        worst = idx[int(np.argmax(gaps))]
        witnesses.append((X[worst], f"gap={gaps.max():.3e}"))
    return CheckReport(
        name=f"norm_lower_bound(ell={ell})",
        status=status,
        hypothesis_residual=hyp,
        conclusion_residual=concl,
        tolerance=tol,
        witnesses=witnesses,
        details={"samples": int(X.shape[0]), "g_at_0": g0},
    )


def check_lipschitz(f: fn.ConvexFunction, ell: float, samples_x, samples_y,
                    tol: float = TOL_CLOSED) -> CheckReport:
    """Both directions of the Lipschitz characterization.

    Direction A estimates the Lipschitz constant from value differences;
    direction B measures the residual of ||x|| - ell <= ||prox_f(x+y) - y||
    over the (x, y) sample product. The two must agree: both clean, or both
    violated.
    """
    X = np.atleast_2d(np.asarray(samples_x, dtype=float))
    Y = np.atleast_2d(np.asarray(samples_y, dtype=float))
    fv = fn.evaluate_many(f, X)
    if not np.all(np.isfinite(fv)):
        raise ValueError("Lipschitz check needs f finite-valued on the samples")
    diffs = np.abs(fv[:, None] - fv[None, :])
    dists = np.linalg.norm(X[:, None, :] - X[None, :, :], axis=2)
    mask = dists > 1e-12
    lhat = float(np.max(diffs[mask] / dists[mask])) if np.any(mask) else 0.0

    residual = 0.0
    witness = None
    norms_x = np.linalg.norm(X, axis=1)
    for y in Y:
        P = f.prox_many(1.0, X + y)
        gaps = norms_x - ell - np.linalg.norm(P - y, axis=1)
        i = int(np.argmax(gaps))
        if gaps[i] > residual:
            residual = float(gaps[i])
            witness = (X[i].copy(), y.copy())

    lip_holds = lhat <= ell + tol
    ineq_holds = residual <= tol
    consistent = lip_holds == ineq_holds
    witnesses = []
    if lip_holds and ineq_holds:
        status = VERIFIED
    elif not lip_holds and not ineq_holds:
        status = COUNTEREXAMPLE
        witnesses.append(
            (witness[0], f"with y={witness[1].tolist()} violates by {residual:.3e}")
        )
    else:
        status = HYPOTHESIS_FAILS  # sampling was inconclusive
    return CheckReport(
        name=f"lipschitz(ell={ell})",
        status=status,
        hypothesis_residual=float(max(lhat - ell, 0.0)),
        conclusion_residual=residual,
        tolerance=tol,
        witnesses=witnesses,
        details={"lhat": lhat, "consistent": consistent,
                 "samples_x": int(X.shape[0]), "samples_y": int(Y.shape[0])},
    )


def check_equivalences(f: fn.ConvexFunction, g: fn.ConvexFunction, samples,
                       tol_prox: float = TOL_CLOSED, tol_value: float = 1e-6,
                       infimum_radius: float = INFIMUM_RADIUS) -> CheckReport:
    """Truth pattern of the five equivalent statements on a sample sweep.

    On a pair whose conjugates pass the sampled boundedness precondition the
    pattern must be uniform; a mixed pattern is a counterexample. Items that
    need unsupported subdifferentials degrade to 'skipped'.
    """
    X = np.atleast_2d(np.asarray(samples, dtype=float))
    pf = f.prox_many(1.0, X)
    pg = g.prox_many(1.0, X)

    inf_f, div_f, radii = sampled_conjugate_infimum(f, radius=infimum_radius)
    inf_g, div_g, _ = sampled_conjugate_infimum(g, radius=infimum_radius)
    precondition_ok = not (div_f or div_g)

    pattern: dict[str, str] = {}
    residuals: dict[str, float] = {}

    r1 = float(np.max(np.abs(np.linalg.norm(pf, axis=1) - np.linalg.norm(pg, axis=1))))
    pattern["i_prox_norms"] = "holds" if r1 <= tol_prox else "fails"
    residuals["i_prox_norms"] = r1

    fv = fn.evaluate_many(f, X)
    gv = fn.evaluate_many(g, X)
    const = inf_g - inf_f if np.isfinite(inf_g) and np.isfinite(inf_f) else 0.0
    _, r2, _ = _constant_difference(X, fv, gv, const, tol_value)
    pattern["ii_constant_shift"] = "holds" if r2 <= tol_value else "fails"
    residuals["ii_constant_shift"] = r2

    r3, r4, skipped = _subdiff_items(f, g, X, tol_prox)
    if skipped:
        pattern["iii_min_selection"] = pattern["iv_subdifferentials"] = "skipped"
    else:
        pattern["iii_min_selection"] = "holds" if r3 <= tol_prox else "fails"
        pattern["iv_subdifferentials"] = "holds" if r4 <= tol_prox else "fails"
    residuals["iii_min_selection"] = r3
    residuals["iv_subdifferentials"] = r4

    r5 = float(np.max(np.linalg.norm(pf - pg, axis=1)))
    pattern["v_prox_maps"] = "holds" if r5 <= tol_prox else "fails"
    residuals["v_prox_maps"] = r5

    outcomes = {v for v in pattern.values() if v != "skipped"}
    uniform = len(outcomes) <= 1
    if not precondition_ok:
        status = PRECONDITION_VIOLATED
    elif uniform:
        status = VERIFIED
    else:
        status = COUNTEREXAMPLE
    # the residual of the equivalence claim itself: items that hold must be
    # within tolerance (their max is reported); a uniformly failing pattern
    # violates nothing
    held = [residuals[k] for k, v in pattern.items() if v == "holds"]
    concl = float(max(held)) if held and uniform else (float("inf") if not uniform else 0.0)
    witnesses = []
    if status == COUNTEREXAMPLE:
        mixed = ", ".join(f"{k}={v}" for k, v in sorted(pattern.items()))
        witnesses.append((X[0], f"mixed truth pattern: {mixed}"))
    return CheckReport(
        name="equivalences",
        status=status,
        hypothesis_residual=residuals["i_prox_norms"],
        conclusion_residual=concl,
        tolerance=tol_prox,
        witnesses=witnesses,
        details={
            "pattern": [f"{k}={v}" for k, v in sorted(pattern.items())],
            "residuals": [f"{k}={residuals[k]:.3e}" for k in sorted(residuals)],
            "sampled_inf_conj_f": inf_f,
            "sampled_inf_conj_g": inf_g,
            "conjugate_diverges": [div_f, div_g],
            "sampling_radii": list(radii),
            "constant": const,
        },
    )


def _subdiff_items(f, g, X, tol):
    """(min-selection residual, subdifferential residual, skipped flag)."""
    r3 = 0.0
    r4 = 0.0
    rng = Lcg(77)
    try:
        for x in X:
            sf = fn.subdifferential(f, x)
            sg = fn.subdifferential(g, x)
            ef, eg = isinstance(sf, EmptySet), isinstance(sg, EmptySet)
            if ef or eg:
                if ef != eg:
                    r3 = r4 = float("inf")
                continue
            r3 = max(r3, float(np.linalg.norm(sf.min_norm_element() - sg.min_norm_element())))
            eq = sets_equal(sf, sg, tol)
            if eq is None:
                # undecidable structurally: compare support functions on probes
                for _ in range(20):
                    u = rng.unit_vector(f.dim)
                    a, b = sf.support(u), sg.support(u)
                    if np.isinf(a) and np.isinf(b):
                        continue
                    gap = abs(a - b) if np.isfinite(a) and np.isfinite(b) else float("inf")
                    r4 = max(r4, gap)
            elif not eq:
                r4 = max(r4, float("inf"))
    except UnsupportedSubdifferential:
        return r3, r4, True
    return r3, r4, False


def support_function_of(C: fn.ConvexFunction) -> fn.ConvexFunction:
    """The support function of the set behind an indicator atom."""
    if isinstance(C, fn.IndicatorBall):
        return fn.SupportBall(C.center, C.radius)
    if isinstance(C, fn.IndicatorBox):
        return fn.SupportBox(C.lo, C.hi)
    if isinstance(C, fn.IndicatorPoint):
        return fn.Affine(C.p, 0.0)
    raise ValueError("C must be an indicator atom (ball, box, or point)")


def check_support_distance(f: fn.ConvexFunction, C: fn.ConvexFunction, samples,
                           tol: float = TOL_CLOSED) -> CheckReport:
    """||prox_f(x)|| = dist(x, C) on samples, then f = support of C + const.

    C is an indicator atom whose set must contain the origin. The forward
    residual compares prox norms with distances; when it passes, the
    backward determination runs f against the support function of C.
    """
    if fn.evaluate(C, np.zeros(C.dim)) != 0.0:
        raise OriginNotInC("the support-distance check needs 0 in C")
    X = np.atleast_2d(np.asarray(samples, dtype=float))
    proj = C.prox_many(1.0, X)
    dists = np.linalg.norm(X - proj, axis=1)
    pnorms = np.linalg.norm(f.prox_many(1.0, X), axis=1)
    gaps = np.abs(pnorms - dists)
    forward = float(np.max(gaps))
    witnesses = []
    sigma = support_function_of(C)
    if forward <= tol:
        back = determine_from_norm(f, sigma, X, x0=None, tol_h=max(tol, 1e-7))
        status = back.status
        concl = back.conclusion_residual
        details = {
            "forward_residual": forward,
            "backward_status": back.status,
            "constant": back.details.get("sampled_inf_conj_g", 0.0),
            "samples": int(X.shape[0]),
        }
    else:
        status = HYPOTHESIS_FAILS
        concl = 0.0
        worst = int(np.argmax(gaps))
        witnesses.append((X[worst], f"prox norm {pnorms[worst]!r} vs distance {dists[worst]!r}"))
        details = {"forward_residual": forward, "samples": int(X.shape[0])}
    return CheckReport(
        name="support_distance",
        status=status,
        hypothesis_residual=forward,
        conclusion_residual=concl,
        tolerance=tol,
        witnesses=witnesses,
        details=details,
    )


# ---------------------------------------------------------------------------
# Batteries
# ---------------------------------------------------------------------------

def battery_samples(dim: int, seed: int, count: int = 200, radius: float = 6.0,
                    extra=()) -> np.ndarray:
    """Seeded sample cloud plus structured probes."""
    rng = Lcg(seed)
    pts = [rng.point_in_ball(dim, radius) for _ in range(count)]
    for p in extra:
        pts.append(np.asarray(p, dtype=float))
    return np.array(pts)


def standard_battery(f: fn.ConvexFunction, g: fn.ConvexFunction, anchor, seed: int,
                     count: int = 200, radius: float = 6.0,
                     ell: float | None = None,
                     tol_conclusion: float = 1e-6) -> list[CheckReport]:
    """The verify-all battery for a pair of functions."""
    anchor = fn.as_point(anchor, f.dim)
    extra = fn.structured_probes(f) + fn.structured_probes(g) + [anchor]
    X = battery_samples(f.dim, seed, count, radius, extra)
    reports: list[CheckReport] = []

    for name, a, b in (("comparison(f,g)", f, g), ("comparison(g,f)", g, f)):
        try:
            rep = check_comparison(a, b, anchor, X, tol_c=tol_conclusion)
            rep.name = name
        except AnchorOutsideDomain as exc:
            rep = CheckReport(name, PRECONDITION_VIOLATED, 0.0, 0.0, tol_conclusion,
                              details={"error": str(exc)})
        reports.append(rep)

    try:
        rep = check_equivalences(f, g, X)
        rep.name = "equivalences(f,g)"
    except UnsupportedConjugate as exc:
        rep = CheckReport("equivalences(f,g)", PRECONDITION_VIOLATED, 0.0, 0.0,
                          TOL_CLOSED, details={"error": str(exc)})
    reports.append(rep)

    for tag, h in (("f", f), ("g", g)):
        reports.append(_decomposition_report(h, X, tag))
        reports.append(_envelope_gradient_report(h, X, tag, seed))
        if h.dim <= 3:
            grid = SampleGrid([-5.0 * radius / 2] * h.dim, [5.0 * radius / 2] * h.dim,
                              [{1: 2001, 2: 301, 3: 61}[h.dim]] * h.dim)
            queries = battery_samples(h.dim, seed + 1, 25, radius / 4)
            try:
                rep = verify_envelope_conjugate(h, 1.0, grid, queries, tol=TOL_GRID)
                rep.name = f"envelope_conjugate({tag})"
                reports.append(rep)
            except UnsupportedConjugate:
                pass  # identity needs a closed-form conjugate on one side

    if ell is not None:
        Y = battery_samples(f.dim, seed + 2, 12, radius / 2)
        try:
            reports.append(check_lipschitz(f, ell, X, Y))
        except ValueError as exc:
            reports.append(CheckReport(f"lipschitz(ell={ell})", PRECONDITION_VIOLATED,
                                       0.0, 0.0, TOL_CLOSED, details={"error": str(exc)}))
        try:
            rep = check_norm_lower_bound(g, ell, X)
            reports.append(rep)
        except AnchorOutsideDomain as exc:
            reports.append(CheckReport(f"norm_lower_bound(ell={ell})",
                                       PRECONDITION_VIOLATED, 0.0, 0.0, 1e-6,
                                       details={"error": str(exc)}))

    if isinstance(g, (fn.IndicatorBall, fn.IndicatorBox, fn.IndicatorPoint)):
        try:
            reports.append(check_support_distance(f, g, X))
        except OriginNotInC as exc:
            reports.append(CheckReport("support_distance", PRECONDITION_VIOLATED,
                                       0.0, 0.0, TOL_CLOSED, details={"error": str(exc)}))
    return reports


def _decomposition_report(h, X, tag) -> CheckReport:
    try:
        conj = fn.conjugate_closed_form(h)
        tol = TOL_CLOSED
    except UnsupportedConjugate as exc:
        # grid conjugation stands in; prox of the surrogate is iterative
        if h.dim > 3:
            return CheckReport(f"moreau_decomposition({tag})", PRECONDITION_VIOLATED,
                               0.0, 0.0, TOL_GRID, details={"error": str(exc)})
        from .conjugation import TabulatedConjugate

        span = 5.0 * float(np.max(np.abs(X)))
        counts = {1: 8001, 2: 201, 3: 41}[h.dim]
        table = tabulate(h, SampleGrid([-span] * h.dim, [span] * h.dim,
                                       [counts] * h.dim))
        conj = TabulatedConjugate(table)
        tol = TOL_GRID
    worst = 0.0
    witness = None
    for x in X:
        r = engine.moreau_decomposition_residual(h, x, conj=conj)
        if r > worst:
            worst, witness = r, x
    status = VERIFIED if worst <= tol else COUNTEREXAMPLE
    witnesses = [(witness, f"residual={worst:.3e}")] if status != VERIFIED else []
    return CheckReport(
        name=f"moreau_decomposition({tag})",
        status=status,
        hypothesis_residual=0.0,
        conclusion_residual=worst,
        tolerance=tol,
        witnesses=witnesses,
        details={"samples": int(X.shape[0])},
    )


def _envelope_gradient_report(h, X, tag, seed, lam: float = 1.0,
                              step: float = 1e-5, tol: float = TOL_NUMERICAL) -> CheckReport:
    worst = 0.0
    witness = None
    for x in X:
        ga = engine.envelope_gradient(h, lam, x)
        gfd = np.empty_like(ga)
        for i in range(x.size):
            e = np.zeros(x.size)
            e[i] = step
            gfd[i] = (
                engine.moreau_envelope(h, lam, x + e)
                - engine.moreau_envelope(h, lam, x - e)
            ) / (2 * step)
        rel = float(np.linalg.norm(ga - gfd) / max(1.0, np.linalg.norm(ga)))
        if rel > worst:
            worst, witness = rel, x
    status = VERIFIED if worst <= tol else COUNTEREXAMPLE
    witnesses = [(witness, f"relative_error={worst:.3e}")] if status != VERIFIED else []
    return CheckReport(
        name=f"envelope_gradient({tag})",
        status=status,
        hypothesis_residual=0.0,
        conclusion_residual=worst,
        tolerance=tol,
        witnesses=witnesses,
        details={"samples": int(X.shape[0]), "fd_step": step, "lam": lam},
    )
