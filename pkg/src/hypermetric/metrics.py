"""Invariant pseudometrics and pseudodistances with exactness bookkeeping.

Closed forms on disks and polydiscs are exact; on semi-analytic domains the
supremum-type quantities are certified lower bounds (finite competitor
families of holomorphic maps into the unit disk) and the infimum-type ones
are upper bounds (affine analytic disks, polyline path minimization).  Every
numerical value travels inside a Bound that records the direction.
"""

from __future__ import annotations

import dataclasses
import functools
import math
from typing import Callable, Optional

import numpy as np

from . import kernels
from .domains import (
    Domain,
    Point,
    Polydisc,
    SemiAnalytic,
    _sphere_directions,
    as_point,
    as_vector,
    contains,
    sample,
)
from .errors import (
    ArgumentError,
    ConnectivityError,
    MembershipError,
    PathInvalidError,
)

EXACT = "exact"
LOWER = "lower"
UPPER = "upper"

DEFAULT_QUAD_ORDER = 32
QUAD_REL_TOL = 1e-6
QUAD_MAX_DOUBLINGS = 10
OPT_REL_TOL = 1e-6
DEFAULT_SEGMENTS = 8
DEFAULT_REFINEMENTS = 4
DEFAULT_DIRECTIONS = 64


@dataclasses.dataclass(frozen=True)
class Bound:
    """A nonnegative value tagged with its relation to the true quantity."""

    value: float
    kind: str  # exact | lower | upper
    tol: float = 0.0
    caveat: Optional[str] = None

    def __post_init__(self):
        if self.kind not in (EXACT, LOWER, UPPER):
            raise ArgumentError(f"unknown bound kind {self.kind!r}")

    def upper_value(self) -> Optional[float]:
        """Largest the true value could be, or None if unbounded above."""
        if self.kind in (EXACT, UPPER):
            return self.value + self.tol
        return None

    def lower_value(self) -> Optional[float]:
        if self.kind in (EXACT, LOWER):
            return self.value - self.tol
        return None

    def to_json(self) -> dict:
        out = {"value": self.value, "kind": self.kind, "tol": self.tol}
        if self.caveat:
            out["caveat"] = self.caveat
        return out


# ---------------------------------------------------------------------------
# Poincaré disk


def poincare_distance(z: complex, w: complex) -> float:
    """Hyperbolic distance atanh |(z - w) / (1 - conj(w) z)| on the unit disk."""
    z, w = complex(z), complex(w)
    if abs(z) >= 1 or abs(w) >= 1:
        raise MembershipError("poincare_distance requires |z| < 1 and |w| < 1")
    num = z - w
    den = 1 - w.conjugate() * z
    ratio = abs(num / den)
    if ratio >= 1.0:  # rounding at extreme eccentricity
        ratio = math.nextafter(1.0, 0.0)
    return math.atanh(ratio)


def poincare_metric(z: complex, v: complex) -> float:
    """Infinitesimal hyperbolic metric |v| / (1 - |z|^2)."""
    z, v = complex(z), complex(v)
    if abs(z) >= 1:
        raise MembershipError("poincare_metric requires |z| < 1")
    return abs(v) / (1 - abs(z) ** 2)


def _polydisc_metric_value(d: Polydisc, z: np.ndarray, v: np.ndarray) -> float:
    den = d.radii**2 - np.abs(z - d.centers) ** 2
    if np.any(den <= 0):
        raise MembershipError("point is not in the polydisc")
    return float((d.radii * np.abs(v) / den).max())


# ---------------------------------------------------------------------------
# competitor families (certified lower bounds on semi-analytic domains)


class _Competitor:
    """A holomorphic map of the domain into the unit disk."""

    def value(self, z: np.ndarray) -> complex:
        raise NotImplementedError

    def deriv(self, z: np.ndarray, v: np.ndarray) -> complex:
        raise NotImplementedError


class _LinearCompetitor(_Competitor):
    """z -> a·(z - q) / S with S >= sup over the bounding box of |a·(z - q)|."""

    def __init__(self, coeff: np.ndarray, center: np.ndarray, scale: float):
        self.coeff = coeff
        self.center = center
        self.scale = scale

    def value(self, z):
        return complex(np.dot(self.coeff, z - self.center)) / self.scale

    def deriv(self, z, v):
        return complex(np.dot(self.coeff, v)) / self.scale


class _DefiningCompetitor(_Competitor):
    """g / t for a defining inequality |g| < t; maps the domain into the disk."""

    def __init__(self, holomap, threshold: float):
        self.holomap = holomap
        self.threshold = threshold

    def value(self, z):
        return complex(self.holomap.eval_array(z)[0]) / self.threshold

    def deriv(self, z, v):
        return complex(self.holomap.jvp(Point(z), v)[0]) / self.threshold


def competitor_family(
    d: SemiAnalytic, directions: int = DEFAULT_DIRECTIONS, seed: int = 0
) -> list:
    """Defining-inequality maps plus box-normalized linear functionals."""
    comps: list = [_DefiningCompetitor(g, t) for g, t in d.constraints]
    b = d.box()
    q = 0.5 * (b[:, 0] + b[:, 1]) + 0.5j * (b[:, 2] + b[:, 3])
    half = np.hypot(0.5 * (b[:, 1] - b[:, 0]), 0.5 * (b[:, 3] - b[:, 2]))
    for a in _sphere_directions(d.dim, directions, seed):
        scale = float(np.dot(np.abs(a), half))
        if scale > 0:
            comps.append(_LinearCompetitor(a, q, scale))
    return comps


def _competitors_for(d: SemiAnalytic, directions: int, seed: int) -> list:
    cache = getattr(d, "_competitor_cache", None)
    key = (directions, seed)
    if cache is None:
        cache = {}
        d._competitor_cache = cache
    if key not in cache:
        cache[key] = competitor_family(d, directions, seed)
    return cache[key]


# ---------------------------------------------------------------------------
# pointwise metrics


def caratheodory_metric(
    d: Domain,
    x,
    v,
    directions: int = DEFAULT_DIRECTIONS,
    seed: int = 0,
) -> Bound:
    """Supremum of |phi'(x)·v| over holomorphic maps phi of d into the disk.

    Exact on polydiscs; a certified lower bound (finite competitor family)
    on semi-analytic domains.
    """
    x = as_point(x)
    if not contains(d, x):
        raise MembershipError(f"point {x.coords} is not in the domain")
    varr = as_vector(v, d.dim)
    z = x.as_array()
    if isinstance(d, Polydisc):
        return Bound(_polydisc_metric_value(d, z, varr), EXACT)
    best = 0.0
    for comp in _competitors_for(d, directions, seed):
        w = comp.value(z)
        if abs(w) >= 1:
            continue
        cand = abs(comp.deriv(z, varr)) / (1 - abs(w) ** 2)
        best = max(best, cand)
    return Bound(best, LOWER, tol=1e-12 * (1 + best))


_ZETA_RADII = (0.25, 0.5, 0.75, 0.9, 0.97, 0.995, 0.9995)
_ZETA_ANGLES = 32


@functools.lru_cache(maxsize=1)
def _zeta_grid() -> np.ndarray:
    angles = np.exp(2j * np.pi * np.arange(_ZETA_ANGLES) / _ZETA_ANGLES)
    return np.concatenate([[0j]] + [[r * a for a in angles] for r in _ZETA_RADII])


def _affine_disk_radius(d: Domain, z: np.ndarray, u: np.ndarray, tol: float) -> float:
    """Largest rho (sampled membership, bisection) with z + zeta·rho·u in d."""
    zetas = _zeta_grid()

    def fits(rho: float) -> bool:
        return all(contains(d, Point(z + zeta * rho * u)) for zeta in zetas)

    hi = d.box_diagonal()
    if fits(hi):
        return hi
    lo = 0.0
    for _ in range(60):
        if hi - lo <= tol * max(1.0, lo):
            break
        mid = 0.5 * (lo + hi)
        if fits(mid):
            lo = mid
        else:
            hi = mid
    return lo


def kobayashi_metric(
    d: Domain,
    x,
    v,
    inner: Optional[Domain] = None,
    tol: float = 1e-6,
) -> Bound:
    """Infimum of |lambda| over analytic disks through x with lambda·phi'(0) = v.

    Exact on polydiscs (where it coincides with the Carathéodory metric).
    On semi-analytic domains, an upper bound from the largest affine analytic
    disk through x in direction v, improved by the gap dilation when a
    relatively compact inner domain containing x is supplied.
    """
    x = as_point(x)
    if not contains(d, x):
        raise MembershipError(f"point {x.coords} is not in the domain")
    varr = as_vector(v, d.dim)
    z = x.as_array()
    vnorm = float(np.linalg.norm(varr))
    if vnorm == 0.0:
        return Bound(0.0, EXACT)
    if isinstance(d, Polydisc):
        return Bound(_polydisc_metric_value(d, z, varr), EXACT)
    u = varr / vnorm
    rho = _affine_disk_radius(d, z, u, tol)
    if rho <= 0:
        raise PathInvalidError("no affine analytic disk fits at this point")
    best = vnorm / rho
    if inner is not None and contains(inner, x):
        from .domains import diameter_bound, inner_gap

        R = diameter_bound(inner)
        r = inner_gap(inner, d)
        rho_inner = _affine_disk_radius(inner, z, u, tol)
        if rho_inner > 0:
            best = min(best, vnorm / (rho_inner * (1 + r / R)))
    return Bound(best, UPPER, tol=tol * best)


def caratheodory_distance(
    d: Domain,
    a,
    b,
    directions: int = DEFAULT_DIRECTIONS,
    seed: int = 0,
) -> Bound:
    """Supremum of the Poincaré distance of images under maps into the disk."""
    a, b = as_point(a), as_point(b)
    if not (contains(d, a) and contains(d, b)):
        raise MembershipError("both points must lie in the domain")
    za, zb = a.as_array(), b.as_array()
    if isinstance(d, Polydisc):
        vals = [
            poincare_distance(
                (za[j] - d.centers[j]) / d.radii[j],
                (zb[j] - d.centers[j]) / d.radii[j],
            )
            for j in range(d.dim)
        ]
        return Bound(max(vals), EXACT)
    best = 0.0
    for comp in _competitors_for(d, directions, seed):
        wa, wb = comp.value(za), comp.value(zb)
        if abs(wa) >= 1 or abs(wb) >= 1:
            continue
        best = max(best, poincare_distance(wa, wb))
    return Bound(best, LOWER, tol=1e-12 * (1 + best))


# ---------------------------------------------------------------------------
# metric fields (evaluators fed to path integration)


class MetricField:
    """Pointwise metric evaluator E(z, v) over a fixed domain."""

    kind: str
    domain: Domain
    # (centers, radii) when the closed polydisc form applies (kernel path)
    model: Optional[tuple] = None

    def eval(self, z: np.ndarray, v: np.ndarray) -> float:
        raise NotImplementedError


class PolydiscModelField(MetricField):
    """Exact Carathéodory = Kobayashi metric of a polydisc."""

    kind = EXACT

    def __init__(self, d: Polydisc):
        self.domain = d
        self.centers = np.ascontiguousarray(d.centers, dtype=complex)
        self.radii = np.ascontiguousarray(d.radii, dtype=float)
        self.model = (self.centers, self.radii)

    def eval(self, z, v):
        return _polydisc_metric_value(self.domain, z, v)


class CompetitorMetricField(MetricField):
    """Lower-bound Carathéodory metric on a semi-analytic domain."""

    kind = LOWER

    def __init__(self, d: SemiAnalytic, directions: int = DEFAULT_DIRECTIONS, seed: int = 0):
        self.domain = d
        self._comps = _competitors_for(d, directions, seed)

    def eval(self, z, v):
        best = 0.0
        for comp in self._comps:
            w = comp.value(z)
            if abs(w) >= 1:
                continue
            best = max(best, abs(comp.deriv(z, v)) / (1 - abs(w) ** 2))
        return best


class AnalyticDiskField(MetricField):
    """Upper-bound Kobayashi metric on a semi-analytic domain."""

    kind = UPPER

    def __init__(self, d: SemiAnalytic, tol: float = 1e-6):
        self.domain = d
        self.tol = tol

    def eval(self, z, v):
        vnorm = float(np.linalg.norm(v))
        if vnorm == 0:
            return 0.0
        rho = _affine_disk_radius(self.domain, z, v / vnorm, self.tol)
        if rho <= 0:
            raise PathInvalidError("no affine analytic disk fits along the path")
        return vnorm / rho


def metric_field(d: Domain, metric: str = "caratheodory", **opts) -> MetricField:
    if metric not in ("caratheodory", "kobayashi"):
        raise ArgumentError(f"unknown metric {metric!r}")
    if isinstance(d, Polydisc):
        return PolydiscModelField(d)
    if metric == "caratheodory":
        return CompetitorMetricField(d, **opts)
    return AnalyticDiskField(d, **opts)


# ---------------------------------------------------------------------------
# path length and integrated distance


@dataclasses.dataclass(frozen=True)
class Polyline:
    """Piecewise-linear path; per-segment Gauss-Legendre quadrature order."""

    vertices: tuple
    order: int = DEFAULT_QUAD_ORDER

    def __init__(self, vertices, order: int = DEFAULT_QUAD_ORDER):
        verts = tuple(as_point(p) for p in vertices)
        for p, q in zip(verts, verts[1:]):
            if p.coords == q.coords:
                raise ArgumentError("consecutive polyline vertices must be distinct")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "order", int(order))

    def as_matrix(self) -> np.ndarray:
        return np.array([p.as_array() for p in self.vertices], dtype=complex)


@functools.lru_cache(maxsize=16)
def _gauss01(order: int) -> tuple:
    x, w = np.polynomial.legendre.leggauss(order)
    return (0.5 * (x + 1.0), 0.5 * w)


def _length_of(field: MetricField, verts: np.ndarray, order: int) -> float:
    """Quadrature length of the polyline; +inf if a node leaves the domain."""
    if verts.shape[0] < 2:
        return 0.0
    nodes, weights = _gauss01(order)
    if field.model is not None:
        centers, radii = field.model
        val = kernels.polyline_length(
            np.ascontiguousarray(verts, dtype=complex), centers, radii, nodes, weights
        )
        return math.inf if val < 0 else val
    total = 0.0
    for s in range(verts.shape[0] - 1):
        seg = verts[s + 1] - verts[s]
        for t, w in zip(nodes, weights):
            z = verts[s] + t * seg
            if not contains(field.domain, Point(z)):
                return math.inf
            total += w * field.eval(z, seg)
    return total


def _refined_length(field: MetricField, verts: np.ndarray, order: int) -> tuple:
    """(length, quadrature tol) with order doubling until stable."""
    prev = _length_of(field, verts, order)
    if math.isinf(prev):
        return prev, math.inf
    for _ in range(QUAD_MAX_DOUBLINGS):
        order *= 2
        cur = _length_of(field, verts, order)
        diff = abs(cur - prev)
        if diff <= QUAD_REL_TOL * max(1e-30, abs(cur)):
            return cur, diff
        prev = cur
    return prev, abs(diff)


def path_length(field: MetricField, polyline: Polyline) -> Bound:
    """Metric length of a polyline by per-segment Gauss-Legendre quadrature."""
    verts = polyline.as_matrix()
    value, qtol = _refined_length(field, verts, polyline.order)
    if math.isinf(value):
        raise PathInvalidError("a quadrature node escapes the domain")
    if field.kind == LOWER:
        return Bound(
            value,
            LOWER,
            tol=qtol,
            caveat="length of a lower-bound metric: no valid upper direction",
        )
    return Bound(value, UPPER, tol=qtol)


def _subdivide(verts: np.ndarray) -> np.ndarray:
    mids = 0.5 * (verts[:-1] + verts[1:])
    out = np.empty((verts.shape[0] * 2 - 1, verts.shape[1]), dtype=complex)
    out[0::2] = verts
    out[1::2] = mids
    return out


def _vertex_objective(field, verts, i, order) -> Callable[[np.ndarray], float]:
    left = verts[i - 1]
    right = verts[i + 1]
    n = verts.shape[1]

    def obj(xy: np.ndarray) -> float:
        mid = xy[:n] + 1j * xy[n:]
        local = np.array([left, mid, right])
        return _length_of(field, local, order)

    return obj


def _coordinate_descent(
    field: MetricField,
    verts: np.ndarray,
    order: int,
    max_sweeps: int,
    rel_tol: float,
) -> np.ndarray:
    """Per-vertex parabolic coordinate steps, swept until stagnation.

    Ties and non-improving proposals keep the earlier iterate, so the result
    is deterministic.
    """
    verts = verts.copy()
    n = verts.shape[1]
    total = _length_of(field, verts, order)
    for _ in range(max_sweeps):
        before = total
        for i in range(1, verts.shape[0] - 1):
            obj = _vertex_objective(field, verts, i, order)
            x = np.concatenate([verts[i].real, verts[i].imag])
            f0 = obj(x)
            scale = 0.25 * max(
                np.abs(verts[i] - verts[i - 1]).max(),
                np.abs(verts[i + 1] - verts[i]).max(),
            )
            h = scale
            for _pass in range(4):
                for q in range(2 * n):
                    xp = x.copy()
                    xp[q] += h
                    fp = obj(xp)
                    xm = x.copy()
                    xm[q] -= h
                    fm = obj(xm)
                    curv = fp - 2 * f0 + fm
                    if curv > 0:
                        step = 0.5 * h * (fm - fp) / curv
                        step = max(-3 * h, min(3 * h, step))
                    elif fp < f0 or fm < f0:
                        step = h if fp < fm else -h
                    else:
                        continue
                    xc = x.copy()
                    xc[q] += step
                    fc = obj(xc)
                    if fc < f0:
                        x, f0 = xc, fc
                h *= 0.35
            verts[i] = x[:n] + 1j * x[n:]
        total = _length_of(field, verts, order)
        if before - total <= rel_tol * max(1e-30, total):
            break
    return verts


def _seed_polyline(
    field: MetricField, d: Domain, za: np.ndarray, zb: np.ndarray, m: int, seed: int
) -> np.ndarray:
    def straight(points):
        pts = [points[0]]
        per = max(1, m // (len(points) - 1))
        for p, q in zip(points, points[1:]):
            for t in np.linspace(0, 1, per + 1)[1:]:
                pts.append(p + t * (q - p))
        return np.array(pts)

    verts = straight([za, zb])
    if math.isfinite(_length_of(field, verts, 4)):
        return verts
    from .domains import _anchor_of

    candidates = [_anchor_of(d)] + [p.as_array() for p in sample(d, 32, seed)]
    for mid in candidates:
        verts = straight([za, mid, zb])
        if math.isfinite(_length_of(field, verts, 4)):
            return verts
    raise ConnectivityError("no in-domain seed polyline between the endpoints")


def integrated_distance(
    field: MetricField,
    d: Domain,
    a,
    b,
    segments: int = DEFAULT_SEGMENTS,
    refinements: int = DEFAULT_REFINEMENTS,
    rel_tol: float = OPT_REL_TOL,
    seed: int = 0,
) -> Bound:
    """Infimum of path lengths, approximated from above by polyline descent.

    Coordinate descent on interior vertices with successive vertex doubling;
    yields the integrated Carathéodory pseudodistance when fed the
    Carathéodory metric and the Kobayashi pseudodistance when fed the
    Kobayashi metric.
    """
    a, b = as_point(a), as_point(b)
    if not (contains(d, a) and contains(d, b)):
        raise MembershipError("both endpoints must lie in the domain")
    za, zb = a.as_array(), b.as_array()
    if np.array_equal(za, zb):
        return Bound(0.0, UPPER, 0.0)
    verts = _seed_polyline(field, d, za, zb, segments, seed)
    opt_order = 8
    best, _ = _refined_length(field, verts, DEFAULT_QUAD_ORDER)
    last_improvement = math.inf
    for round_idx in range(refinements + 1):
        # sweeps stop on a much finer tolerance than the caller's so that the
        # per-sweep improvements can accumulate down to rel_tol overall
        verts = _coordinate_descent(
            field, verts, opt_order, max_sweeps=24, rel_tol=0.05 * rel_tol
        )
        cur, qtol = _refined_length(field, verts, DEFAULT_QUAD_ORDER)
        last_improvement = best - cur
        best = min(best, cur)
        if round_idx < refinements:
            if 0 <= last_improvement <= rel_tol * max(1e-30, best):
                break
            verts = _subdivide(verts)
    caveat = None
    if field.kind == LOWER:
        caveat = "infimum of a lower-bound metric: value may undershoot"
    tol = qtol + max(0.0, last_improvement)
    return Bound(best, UPPER, tol=tol, caveat=caveat)


__all__ = [
    "Bound",
    "Polyline",
    "MetricField",
    "PolydiscModelField",
    "CompetitorMetricField",
    "AnalyticDiskField",
    "metric_field",
    "poincare_distance",
    "poincare_metric",
    "caratheodory_metric",
    "kobayashi_metric",
    "caratheodory_distance",
    "path_length",
    "integrated_distance",
    "competitor_family",
    "EXACT",
    "LOWER",
    "UPPER",
]
