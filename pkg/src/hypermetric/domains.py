"""Bounded domains of C^n: membership, Euclidean geometry, seeded sampling.

The two quantities every contraction certificate needs are an upper bound R
on the Euclidean diameter of the inner domain and a lower bound r on the gap
between the inner domain and the boundary of the outer one.  Both are exact
in closed form for disks and polydiscs and conservative (sampled, with a
safety factor) for semi-analytic domains.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Optional, Sequence

import numpy as np
from scipy.stats import qmc

from .errors import (
    ArgumentError,
    InclusionError,
    MembershipError,
    SamplingExhaustedError,
    UnsupportedDomainError,
)

DEFAULT_SAMPLES = 512
# Fraction of the box scale used when pushing sample points toward the
# boundary, so supremum estimates are not interior-biased.
NEAR_BOUNDARY_FRACTION = 0.01
# Safety factor applied to sampled gap estimates for semi-analytic domains.
GAP_SAFETY = 0.9
INCLUSION_FLOOR = 1e-9


def _finite_complex(values) -> tuple:
    out = []
    for c in values:
        c = complex(c)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ArgumentError("coordinates must be finite")
        out.append(c)
    return tuple(out)


@dataclasses.dataclass(frozen=True)
class Point:
    """A point of C^n, n >= 1."""

    coords: tuple

    def __init__(self, coords):
        if isinstance(coords, (int, float, complex)):
            coords = (coords,)
        coords = _finite_complex(coords)
        if len(coords) < 1:
            raise ArgumentError("a point needs at least one coordinate")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def as_array(self) -> np.ndarray:
        return np.array(self.coords, dtype=complex)


@dataclasses.dataclass(frozen=True)
class TangentVector:
    """A complex direction attached to a base point."""

    base: Point
    dir: tuple

    def __init__(self, base, dir):
        base = as_point(base)
        if isinstance(dir, (int, float, complex)):
            dir = (dir,)
        dir = _finite_complex(dir)
        if len(dir) != base.dim:
            raise ArgumentError("tangent vector dimension mismatch")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "dir", dir)

    def dir_array(self) -> np.ndarray:
        return np.array(self.dir, dtype=complex)


def as_point(p) -> Point:
    if isinstance(p, Point):
        return p
    return Point(p)


def as_vector(v, n: int) -> np.ndarray:
    if isinstance(v, TangentVector):
        v = v.dir
    if isinstance(v, (int, float, complex)):
        v = (v,)
    arr = np.array(_finite_complex(v), dtype=complex)
    if arr.shape != (n,):
        raise ArgumentError(f"vector must have {n} components")
    return arr


class Domain:
    """A bounded open subset of C^n."""

    dim: int

    def contains(self, p) -> bool:
        raise NotImplementedError

    def boundary_distance(self, p) -> float:
        raise NotImplementedError

    def box(self) -> np.ndarray:
        """Per-coordinate bounding box: rows (re_lo, re_hi, im_lo, im_im)."""
        raise NotImplementedError

    def box_scale(self) -> float:
        b = self.box()
        return float(max((b[:, 1] - b[:, 0]).max(), (b[:, 3] - b[:, 2]).max()))

    def box_diagonal(self) -> float:
        b = self.box()
        return float(
            math.sqrt(((b[:, 1] - b[:, 0]) ** 2 + (b[:, 3] - b[:, 2]) ** 2).sum())
        )

    def _check_point(self, p) -> Point:
        p = as_point(p)
        if p.dim != self.dim:
            raise ArgumentError(
                f"point has dimension {p.dim}, domain has dimension {self.dim}"
            )
        return p

    def to_json(self) -> dict:
        raise NotImplementedError


class Polydisc(Domain):
    """Product of coordinate disks |z_j - c_j| < rho_j."""

    def __init__(self, centers: Sequence[complex], radii: Sequence[float]):
        self.centers = np.array(_finite_complex(centers), dtype=complex)
        self.radii = np.array([float(r) for r in radii], dtype=float)
        if self.centers.shape != self.radii.shape or self.centers.size < 1:
            raise ArgumentError("centers and radii must have equal positive length")
        if not np.all(self.radii > 0):
            raise ArgumentError("radii must be strictly positive")
        self.dim = self.centers.size

    def __repr__(self):
        return f"Polydisc(centers={list(self.centers)}, radii={list(self.radii)})"

    def contains(self, p) -> bool:
        p = self._check_point(p)
        return bool(np.all(np.abs(p.as_array() - self.centers) < self.radii))

    def boundary_distance(self, p) -> float:
        p = self._check_point(p)
        gaps = self.radii - np.abs(p.as_array() - self.centers)
        if np.any(gaps <= 0):
            raise MembershipError(f"point {p.coords} is not in {self!r}")
        return float(gaps.min())

    def box(self) -> np.ndarray:
        re = self.centers.real
        im = self.centers.imag
        r = self.radii
        return np.column_stack([re - r, re + r, im - r, im + r])

    def to_json(self) -> dict:
        return {
            "kind": "polydisc",
            "centers": [[c.real, c.imag] for c in self.centers],
            "radii": [float(r) for r in self.radii],
        }


class Disk(Polydisc):
    """The n = 1 special case; Disk(0, 1) is the unit disk."""

    def __init__(self, center: complex, radius: float):
        super().__init__([center], [radius])
        self.center = complex(center)
        self.radius = float(radius)

    def __repr__(self):
        return f"Disk({self.center}, {self.radius})"

    def to_json(self) -> dict:
        return {
            "kind": "disk",
            "centers": [[self.center.real, self.center.imag]],
            "radii": [self.radius],
        }


def unit_disk() -> Disk:
    return Disk(0.0, 1.0)


class SemiAnalytic(Domain):
    """Intersection of a box with sublevel sets |g_i(z)| < t_i.

    Each constraint is a scalar-valued holomorphic expression g_i together
    with a threshold t_i; membership means strict inequality for every
    constraint and strict containment in the box.
    """

    def __init__(self, constraints, box):
        # constraints: list of (HoloMap with m=1, threshold)
        self.constraints = []
        for g, t in constraints:
            if g.m != 1:
                raise ArgumentError("constraint maps must be scalar-valued")
            t = float(t)
            if not (t > 0 and math.isfinite(t)):
                raise ArgumentError("constraint thresholds must be positive finite")
            self.constraints.append((g, t))
        box_arr = np.array(box, dtype=float)
        if box_arr.ndim != 2 or box_arr.shape[1] != 4:
            raise ArgumentError("box must be rows of (re_lo, re_hi, im_lo, im_hi)")
        if not np.all(np.isfinite(box_arr)):
            raise UnsupportedDomainError("bounding box must be finite")
        if not (np.all(box_arr[:, 1] > box_arr[:, 0]) and np.all(box_arr[:, 3] > box_arr[:, 2])):
            raise ArgumentError("box intervals must be nondegenerate")
        self._box = box_arr
        self.dim = box_arr.shape[0]
        for g, _ in self.constraints:
            if g.n != self.dim:
                raise ArgumentError("constraint dimension does not match box")
        self._anchor: Optional[np.ndarray] = None

    def __repr__(self):
        return f"SemiAnalytic({len(self.constraints)} constraints, dim={self.dim})"

    def contains(self, p) -> bool:
        p = self._check_point(p)
        z = p.as_array()
        b = self._box
        if not (
            np.all(z.real > b[:, 0]) and np.all(z.real < b[:, 1])
            and np.all(z.imag > b[:, 2]) and np.all(z.imag < b[:, 3])
        ):
            return False
        for g, t in self.constraints:
            if abs(g.eval_array(z)[0]) >= t:
                return False
        return True

    def box(self) -> np.ndarray:
        return self._box

    def interior_point(self) -> np.ndarray:
        """Some point of the domain, found once by seeded sampling."""
        if self._anchor is None:
            self._anchor = _interior_sample(self, 1, seed=0)[0]
        return self._anchor

    def _ray_exit(self, z: np.ndarray, u: np.ndarray, resolution: int = 64) -> float:
        """Distance along unit direction u at which membership first fails."""
        t_max = self.box_diagonal()
        step = t_max / resolution
        t = step
        prev = 0.0
        while t <= t_max + step:
            if not self.contains(Point(z + t * u)):
                lo, hi = prev, t
                for _ in range(30):
                    mid = 0.5 * (lo + hi)
                    if self.contains(Point(z + mid * u)):
                        lo = mid
                    else:
                        hi = mid
                return lo
            prev = t
            t += step
        return t_max

    def boundary_distance(self, p, directions: int = 32) -> float:
        p = self._check_point(p)
        if not self.contains(p):
            raise MembershipError(f"point {p.coords} is not in {self!r}")
        z = p.as_array()
        b = self._box
        box_gap = min(
            float(np.min(z.real - b[:, 0])), float(np.min(b[:, 1] - z.real)),
            float(np.min(z.imag - b[:, 2])), float(np.min(b[:, 3] - z.imag)),
        )
        best = box_gap
        for u in _sphere_directions(self.dim, directions, seed=1):
            best = min(best, self._ray_exit(z, u))
        return GAP_SAFETY * best

    def to_json(self) -> dict:
        return {
            "kind": "semianalytic",
            "constraints": [
                {"map": g.to_text(), "dim": g.n, "threshold": t}
                for g, t in self.constraints
            ],
            "box": [list(map(float, row)) for row in self._box],
        }


def domain_from_json(data: dict) -> Domain:
    kind = data.get("kind")
    if kind == "disk":
        (c,) = data["centers"]
        (r,) = data["radii"]
        return Disk(complex(c[0], c[1]), r)
    if kind == "polydisc":
        centers = [complex(c[0], c[1]) for c in data["centers"]]
        return Polydisc(centers, data["radii"])
    if kind == "semianalytic":
        from .holomap import parse

        constraints = [
            (parse(c["map"], c.get("dim", len(data["box"]))), c["threshold"])
            for c in data["constraints"]
        ]
        return SemiAnalytic(constraints, data["box"])
    raise ArgumentError(f"unknown domain kind {kind!r}")


# ---------------------------------------------------------------------------
# module-level convenience operations


def contains(d: Domain, p) -> bool:
    return d.contains(p)


def boundary_distance(d: Domain, p) -> float:
    return d.boundary_distance(p)


def diameter_bound(U: Domain, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> float:
    """Certified upper bound on the Euclidean diameter of U.

    Exact for polydiscs (2 * ||radii||_2); the bounding-box diagonal, always
    valid but possibly loose, for semi-analytic domains.
    """
    if isinstance(U, Polydisc):
        return float(2.0 * math.sqrt(float((U.radii**2).sum())))
    diag = U.box_diagonal()
    if not math.isfinite(diag):
        raise UnsupportedDomainError("domain bounding box is unbounded")
    return diag


def inner_gap(
    U: Domain, X: Domain, samples: int = DEFAULT_SAMPLES, seed: int = 0
) -> float:
    """Lower bound on the Euclidean gap between U and the boundary of X.

    Closed form for nested polydiscs; sampled infimum times a safety factor
    otherwise.  Raises InclusionError when the probed gap collapses, because
    every downstream contraction constant would be vacuous.
    """
    if U.dim != X.dim:
        raise ArgumentError("domains must share a dimension")
    if isinstance(U, Polydisc) and isinstance(X, Polydisc):
        gaps = X.radii - U.radii - np.abs(X.centers - U.centers)
        g = float(gaps.min())
        if g <= INCLUSION_FLOOR:
            raise InclusionError(
                f"inclusion is not relatively compact (gap {g:.3e})"
            )
        return g
    # the gap probe is the hot consumer of boundary_distance; keep the
    # per-point direction count modest
    pts = sample(U, min(samples, 128), seed)
    worst = math.inf
    for p in pts:
        if not X.contains(p):
            raise InclusionError(f"sampled point {p.coords} of U escapes X")
        if isinstance(X, SemiAnalytic):
            worst = min(worst, X.boundary_distance(p, directions=8))
        else:
            worst = min(worst, X.boundary_distance(p))
    g = GAP_SAFETY * worst
    if g <= INCLUSION_FLOOR:
        raise InclusionError(f"probed gap {g:.3e} below tolerance")
    return g


def _sphere_directions(n: int, count: int, seed: int) -> np.ndarray:
    """Deterministic unit directions in C^n (2n real dimensions)."""
    dirs = []
    for j in range(n):
        for w in (1.0, -1.0, 1j, -1j):
            e = np.zeros(n, dtype=complex)
            e[j] = w
            dirs.append(e)
    if len(dirs) < count:
        eng = qmc.Halton(d=2 * n, seed=seed)
        raw = eng.random(count - len(dirs))
        # inverse-normal pushforward gives a rotation-invariant direction set
        from scipy.special import ndtri

        g = ndtri(np.clip(raw, 1e-12, 1 - 1e-12))
        vec = g[:, :n] + 1j * g[:, n:]
        norms = np.linalg.norm(vec, axis=1)
        norms[norms == 0] = 1.0
        dirs.extend(vec / norms[:, None])
    return np.array(dirs[:count])


def sample(d: Domain, count: int, seed: int = 0) -> list:
    """Seeded low-discrepancy points of d, with a near-boundary share.

    Every fourth point is pushed along the ray from an interior anchor until
    its distance to the boundary is about 1% of the box scale, so suprema
    estimated on the sample are not interior-biased.
    """
    if count < 1:
        raise ArgumentError("count must be >= 1")
    pts = _interior_sample(d, count, seed)
    delta = NEAR_BOUNDARY_FRACTION * d.box_scale()
    anchor = _anchor_of(d)
    out = []
    for i, z in enumerate(pts):
        if i % 4 == 3:
            z = _push_to_boundary(d, anchor, z, delta)
        out.append(Point(z))
    return out


def _anchor_of(d: Domain) -> np.ndarray:
    if isinstance(d, Polydisc):
        return d.centers.copy()
    return d.interior_point()


def _interior_sample(d: Domain, count: int, seed: int) -> list:
    if isinstance(d, Polydisc):
        eng = qmc.Halton(d=2 * d.dim, seed=seed)
        raw = eng.random(count)
        out = []
        for row in raw:
            z = np.empty(d.dim, dtype=complex)
            for j in range(d.dim):
                u, v = row[2 * j], row[2 * j + 1]
                z[j] = d.centers[j] + d.radii[j] * math.sqrt(u) * np.exp(
                    2j * math.pi * v
                )
            out.append(z)
        return out
    eng = qmc.Halton(d=2 * d.dim, seed=seed)
    b = d.box()
    lo = np.concatenate([b[:, 0], b[:, 2]])
    hi = np.concatenate([b[:, 1], b[:, 3]])
    out = []
    attempts = 0
    cap = max(20000, 400 * count)
    while len(out) < count:
        raw = eng.random(256)
        scaled = qmc.scale(raw, lo, hi)
        for row in scaled:
            z = row[: d.dim] + 1j * row[d.dim :]
            attempts += 1
            if d.contains(Point(z)):
                out.append(z)
                if len(out) == count:
                    break
        if attempts > cap:
            raise SamplingExhaustedError(
                f"could not find {count} points in {attempts} attempts"
            )
    return out


def _push_to_boundary(
    d: Domain, anchor: np.ndarray, z: np.ndarray, delta: float
) -> np.ndarray:
    w = z - anchor
    norm = np.linalg.norm(w)
    if norm < 1e-12:
        return z
    u = w / norm
    if isinstance(d, Polydisc):
        offs = np.abs(anchor - d.centers)
        # conservative per-coordinate exit: t such that offs_j + t|w_j| = rho_j
        with np.errstate(divide="ignore"):
            exits = np.where(np.abs(w) > 0, (d.radii - offs) / np.abs(w), np.inf)
        t_exit = float(exits.min())
    else:
        # _ray_exit measures length along the unit direction; cand is
        # parametrized by t in units of w
        t_exit = d._ray_exit(anchor, u) / norm
    t = max(0.5 * t_exit, t_exit - delta / norm)
    cand = anchor + t * w
    if d.contains(Point(cand)):
        return cand
    return z


__all__ = [
    "Point",
    "TangentVector",
    "Domain",
    "Disk",
    "Polydisc",
    "SemiAnalytic",
    "unit_disk",
    "as_point",
    "as_vector",
    "contains",
    "boundary_distance",
    "diameter_bound",
    "inner_gap",
    "sample",
    "domain_from_json",
    "DEFAULT_SAMPLES",
]
