"""Closed convex set descriptors used for subdifferentials.

Every descriptor supports projection of an arbitrary point, membership
testing, a support-function evaluation, translation, and sampling. Box
bounds may be infinite, which covers orthant-style normal cones and the
full space; every other kind has finite parameters.
"""

from __future__ import annotations

import numpy as np

from .errors import EmptySubdifferential

_TOL = 1e-9


class SubdiffSet:
    """Base class; concrete kinds are Singleton/Ball/Box/Segment/HalflineCone/Empty."""

    kind = "abstract"
    dim: int

    def project(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def contains(self, v: np.ndarray, tol: float = 1e-7) -> bool:
        raise NotImplementedError

    def support(self, u: np.ndarray) -> float:
        """sup over the set of <u, .>; +inf when unbounded in direction u."""
        raise NotImplementedError

    def shift(self, w: np.ndarray) -> "SubdiffSet":
        """The set translated by +w."""
        raise NotImplementedError

    def min_norm_element(self) -> np.ndarray:
        return self.project(np.zeros(self.dim))

    def sample(self, count: int, rng) -> np.ndarray:
        """count elements of the set (box M-clamped at 10 for infinite bounds)."""
        raise NotImplementedError


class SingletonSet(SubdiffSet):
    kind = "singleton"

    def __init__(self, point):
        self.point = np.asarray(point, dtype=float)
        self.dim = self.point.size

    def project(self, z):
        return self.point.copy()

    def contains(self, v, tol=1e-7):
        return bool(np.linalg.norm(v - self.point) <= tol)

    def support(self, u):
        return float(np.dot(u, self.point))

    def shift(self, w):
        return SingletonSet(self.point + w)

    def sample(self, count, rng):
        return np.tile(self.point, (count, 1))

    def __repr__(self):
        return f"SingletonSet({self.point.tolist()})"


class BallSet(SubdiffSet):
    kind = "ball"

    def __init__(self, center, radius: float):
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        if self.radius < 0:
            raise ValueError("ball radius must be >= 0")
        self.dim = self.center.size

    def project(self, z):
        d = z - self.center
        n = np.linalg.norm(d)
        if n <= self.radius:
            return np.asarray(z, dtype=float).copy()
        return self.center + d * (self.radius / n)

    def contains(self, v, tol=1e-7):
        return bool(np.linalg.norm(v - self.center) <= self.radius + tol)

    def support(self, u):
        return float(np.dot(u, self.center) + self.radius * np.linalg.norm(u))

    def shift(self, w):
        return BallSet(self.center + w, self.radius)

    def sample(self, count, rng):
        pts = []
        while len(pts) < count:
            p = rng.point_in_cube(self.dim, self.radius)
            if np.linalg.norm(p) <= self.radius:
                pts.append(self.center + p)
        return np.array(pts)

    def __repr__(self):
        return f"BallSet({self.center.tolist()}, {self.radius})"


class BoxSet(SubdiffSet):
    kind = "box"

    def __init__(self, lo, hi):
        self.lo = np.asarray(lo, dtype=float)
        self.hi = np.asarray(hi, dtype=float)
        if np.any(self.lo > self.hi):
            raise ValueError("box needs lo <= hi componentwise")
        self.dim = self.lo.size

    def project(self, z):
        return np.clip(z, self.lo, self.hi)

    def contains(self, v, tol=1e-7):
        return bool(np.all(v >= self.lo - tol) and np.all(v <= self.hi + tol))

    def support(self, u):
        u = np.asarray(u, dtype=float)
        # 0 * inf must contribute 0, not nan
        terms = np.where(u > 0, u * self.hi, np.where(u < 0, u * self.lo, 0.0))
        return float(np.sum(terms))

    def shift(self, w):
        return BoxSet(self.lo + w, self.hi + w)

    def sample(self, count, rng, clamp: float = 10.0):
        lo = np.maximum(self.lo, -clamp)
        hi = np.minimum(self.hi, clamp)
        out = np.empty((count, self.dim))
        for i in range(count):
            out[i] = [rng.uniform(a, b) for a, b in zip(lo, hi)]
        return out

    def __repr__(self):
        return f"BoxSet({self.lo.tolist()}, {self.hi.tolist()})"


class SegmentSet(SubdiffSet):
    kind = "segment"

    def __init__(self, p, q):
        self.p = np.asarray(p, dtype=float)
        self.q = np.asarray(q, dtype=float)
        self.dim = self.p.size

    def project(self, z):
        d = self.q - self.p
        denom = float(np.dot(d, d))
        if denom <= _TOL:
            return self.p.copy()
        t = float(np.clip(np.dot(z - self.p, d) / denom, 0.0, 1.0))
        return self.p + t * d

    def contains(self, v, tol=1e-7):
        return bool(np.linalg.norm(v - self.project(v)) <= tol)

    def support(self, u):
        return float(max(np.dot(u, self.p), np.dot(u, self.q)))

    def shift(self, w):
        return SegmentSet(self.p + w, self.q + w)

    def sample(self, count, rng):
        return np.array([self.p + rng.uniform() * (self.q - self.p) for _ in range(count)])

    def __repr__(self):
        return f"SegmentSet({self.p.tolist()}, {self.q.tolist()})"


class HalflineSet(SubdiffSet):
    """Ray {anchor + t * direction : t >= 0}; normal cones use anchor 0."""

    kind = "halfline_cone"

    def __init__(self, anchor, direction):
        self.anchor = np.asarray(anchor, dtype=float)
        self.direction = np.asarray(direction, dtype=float)
        n = np.linalg.norm(self.direction)
        if n <= 0:
            raise ValueError("halfline needs a nonzero direction")
        self.dim = self.anchor.size

    def project(self, z):
        d = self.direction
        t = max(0.0, float(np.dot(z - self.anchor, d) / np.dot(d, d)))
        return self.anchor + t * d

    def contains(self, v, tol=1e-7):
        return bool(np.linalg.norm(v - self.project(v)) <= tol)

    def support(self, u):
        if np.dot(u, self.direction) > _TOL:
            return float("inf")
        return float(np.dot(u, self.anchor))

    def shift(self, w):
        return HalflineSet(self.anchor + w, self.direction)

    def sample(self, count, rng, clamp: float = 10.0):
        d = self.direction / np.linalg.norm(self.direction)
        return np.array([self.anchor + rng.uniform(0.0, clamp) * d for _ in range(count)])

    def __repr__(self):
        return f"HalflineSet({self.anchor.tolist()}, {self.direction.tolist()})"


class EmptySet(SubdiffSet):
    kind = "empty"

    def __init__(self, dim: int):
        self.dim = int(dim)

    def project(self, z):
        raise EmptySubdifferential("projection onto the empty set")

    def contains(self, v, tol=1e-7):
        return False

    def support(self, u):
        return float("-inf")

    def shift(self, w):
        return self

    def sample(self, count, rng):
        return np.empty((0, self.dim))

    def __repr__(self):
        return f"EmptySet(dim={self.dim})"


def sets_equal(a: SubdiffSet, b: SubdiffSet, tol: float = 1e-7):
    """Structural comparison; returns True/False, or None when undecidable.

    Degenerate kinds are normalized first (a radius-0 ball is its center, a
    zero-length segment is a point, a box with lo == hi is a point).
    """
    a = _normalize(a, tol)
    b = _normalize(b, tol)
    if a.kind != b.kind:
        if "empty" in (a.kind, b.kind):
            return False
        return None
    if a.dim != b.dim:
        return False
    if a.kind == "empty":
        return True
    if a.kind == "singleton":
        return bool(np.linalg.norm(a.point - b.point) <= tol)
    if a.kind == "ball":
        return bool(np.linalg.norm(a.center - b.center) <= tol and abs(a.radius - b.radius) <= tol)
    if a.kind == "box":
        return bool(_bounds_close(a.lo, b.lo, tol) and _bounds_close(a.hi, b.hi, tol))
    if a.kind == "segment":
        fwd = np.linalg.norm(a.p - b.p) <= tol and np.linalg.norm(a.q - b.q) <= tol
        rev = np.linalg.norm(a.p - b.q) <= tol and np.linalg.norm(a.q - b.p) <= tol
        return bool(fwd or rev)
    if a.kind == "halfline_cone":
        da = a.direction / np.linalg.norm(a.direction)
        db = b.direction / np.linalg.norm(b.direction)
        return bool(np.linalg.norm(a.anchor - b.anchor) <= tol and np.linalg.norm(da - db) <= tol)
    return None


def _normalize(s: SubdiffSet, tol: float) -> SubdiffSet:
    if s.kind == "ball" and s.radius <= tol:
        return SingletonSet(s.center)
    if s.kind == "segment" and np.linalg.norm(s.p - s.q) <= tol:
        return SingletonSet(s.p)
    if s.kind == "box" and np.all(np.isfinite(s.lo)) and np.all(s.hi - s.lo <= tol):
        return SingletonSet(0.5 * (s.lo + s.hi))
    return s


def _bounds_close(u, v, tol):
    both_inf = np.isinf(u) & np.isinf(v) & (np.sign(u) == np.sign(v))
    finite_close = np.isfinite(u) & np.isfinite(v) & (np.abs(u - v) <= tol)
    return np.all(both_inf | finite_close)
