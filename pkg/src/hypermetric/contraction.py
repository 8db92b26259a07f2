"""Contraction constants for relatively compact inclusions U in X.

Two routes with different rigor:

* tanh of the invariant diameter of U inside X.  Rigorous only when the
  diameter is exact (concentric polydiscs); a sampled diameter is a lower
  bound, so the resulting constant may be understated and the certificate
  is flagged heuristic.
* the gap dilation 1 / (1 + r/R) from a Euclidean diameter upper bound R
  and boundary-gap lower bound r.  Both ingredient directions are safe, so
  this certificate is rigorous end to end.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Optional

import numpy as np

from .domains import (
    Domain,
    Point,
    Polydisc,
    _sphere_directions,
    as_point,
    contains,
    diameter_bound,
    inner_gap,
    sample,
)
from .errors import ArgumentError
from .holomap import Const, HoloMap, add, mul, sub
from .metrics import (
    Bound,
    EXACT,
    LOWER,
    caratheodory_distance,
    caratheodory_metric,
    kobayashi_metric,
)

TANH_DIAMETER = "tanh_diameter"
DILATION = "dilation"

HOLDS = "holds"
INCONCLUSIVE = "inconclusive"
VIOLATED = "violated"

DEFAULT_VERIFY_SAMPLES = 256


@dataclasses.dataclass(frozen=True)
class ContractionCertificate:
    """A constant k < 1 with the ingredients that produced it."""

    k: float
    method: str
    rigorous: bool
    M: Optional[Bound] = None
    R: Optional[float] = None
    r: Optional[float] = None
    X: Optional[Domain] = None
    U: Optional[Domain] = None

    def __post_init__(self):
        if not (0 <= self.k < 1):
            raise ArgumentError(f"contraction constant must be in [0, 1), got {self.k}")

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "method": self.method,
            "rigorous": self.rigorous,
            "M": self.M.value if self.M is not None else None,
            "R": self.R,
            "r": self.r,
        }


def caratheodory_diameter(
    X: Domain,
    U: Domain,
    samples: int = 512,
    seed: int = 0,
    force_sampled: bool = False,
) -> Bound:
    """Diameter of U for the Carathéodory pseudodistance of X.

    Exact for concentric nested polydiscs (antipodal boundary pairs are
    extremal coordinatewise); otherwise the max over sampled boundary-biased
    pairs, a lower bound.
    """
    inner_gap(U, X, samples=samples, seed=seed)  # probes relative compactness
    if (
        not force_sampled
        and isinstance(X, Polydisc)
        and isinstance(U, Polydisc)
        and np.allclose(X.centers, U.centers)
    ):
        ratios = U.radii / X.radii
        return Bound(float(2 * np.arctanh(ratios).max()), EXACT)
    pts = [p.as_array() for p in sample(U, samples, seed)]
    pts.extend(_extremal_probes(U, seed))
    if isinstance(X, Polydisc):
        arr = np.array(pts)
        best = 0.0
        for j in range(X.dim):
            w = (arr[:, j] - X.centers[j]) / X.radii[j]
            # pairwise Poincaré distances in coordinate j, vectorized
            zz = w[:, None]
            ww = w[None, :]
            ratio = np.abs((zz - ww) / (1 - np.conj(ww) * zz))
            np.clip(ratio, 0.0, 1 - 1e-16, out=ratio)
            best = max(best, float(np.arctanh(ratio).max()))
        return Bound(best, LOWER)
    cap = min(len(pts), 64)  # pair sweep with holomorphic competitors is costly
    best = 0.0
    for i in range(cap):
        for j in range(i + 1, cap):
            best = max(
                best, caratheodory_distance(X, Point(pts[i]), Point(pts[j])).value
            )
    return Bound(best, LOWER)


def _extremal_probes(U: Domain, seed: int, backoff: float = 1e-3) -> list:
    """Near-boundary antipodal probes so sampled suprema are nearly sharp."""
    out = []
    if isinstance(U, Polydisc):
        delta = backoff * U.box_scale()
        for u in _sphere_directions(U.dim, 4 * U.dim + 8, seed):
            scale = np.where(np.abs(u) > 0, U.radii / np.maximum(np.abs(u), 1e-300), np.inf).min()
            z = U.centers + u * (scale - delta)
            mirror = U.centers - u * (scale - delta)
            if contains(U, Point(z)) and contains(U, Point(mirror)):
                out.append(z)
                out.append(mirror)
    return out


def tanh_diameter_constant(
    M: Bound, X: Optional[Domain] = None, U: Optional[Domain] = None
) -> ContractionCertificate:
    """k = tanh of the invariant diameter; heuristic unless the diameter is exact."""
    if not (math.isfinite(M.value) and M.value >= 0):
        raise ArgumentError("diameter must be finite and nonnegative")
    return ContractionCertificate(
        k=math.tanh(M.value),
        method=TANH_DIAMETER,
        rigorous=(M.kind == EXACT),
        M=M,
        X=X,
        U=U,
    )


def dilation_constant(
    R: float, r: float, X: Optional[Domain] = None, U: Optional[Domain] = None
) -> ContractionCertificate:
    """k = R / (R + r); rigorous when R is an upper and r a lower bound."""
    if not (R > 0 and r > 0):
        raise ArgumentError("R and r must be strictly positive")
    return ContractionCertificate(
        k=R / (R + r), method=DILATION, rigorous=True, R=R, r=r, X=X, U=U
    )


def certificate_for(
    X: Domain,
    U: Domain,
    method: str = DILATION,
    samples: int = 512,
    seed: int = 0,
) -> ContractionCertificate:
    """Build a contraction certificate for the inclusion U in X."""
    if method == DILATION:
        R = diameter_bound(U, samples=samples, seed=seed)
        r = inner_gap(U, X, samples=samples, seed=seed)
        return dilation_constant(R, r, X=X, U=U)
    if method == TANH_DIAMETER:
        M = caratheodory_diameter(X, U, samples=samples, seed=seed)
        return tanh_diameter_constant(M, X=X, U=U)
    raise ArgumentError(f"unknown certificate method {method!r}")


def dilate_disk(phi: HoloMap, r: float, R: float) -> HoloMap:
    """Enlarge an analytic disk about its center: (1 + r/R)(phi - phi(0)) + phi(0)."""
    if phi.n != 1:
        raise ArgumentError("dilate_disk expects a map from the unit disk")
    if not (R > 0 and r > 0):
        raise ArgumentError("R and r must be strictly positive")
    factor = 1.0 + r / R
    origin = np.zeros(1, dtype=complex)
    c0 = phi.eval_array(origin)
    comps = []
    for expr, c in zip(phi.components, c0):
        comps.append(add(mul(Const(factor), sub(expr, Const(complex(c)))), Const(complex(c))))
    return HoloMap(1, tuple(comps))


@dataclasses.dataclass(frozen=True)
class SampleVerdict:
    point: tuple
    vector: tuple
    outer: Bound
    inner: Bound
    verdict: str
    ratio: Optional[float] = None


@dataclasses.dataclass(frozen=True)
class VerificationReport:
    verdict: str
    k: float
    metric: str
    n_holds: int
    n_inconclusive: int
    n_violated: int
    max_ratio: Optional[float]
    argmax_point: Optional[tuple]
    samples: tuple

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "k": self.k,
            "metric": self.metric,
            "holds": self.n_holds,
            "inconclusive": self.n_inconclusive,
            "violated": self.n_violated,
            "max_ratio": self.max_ratio,
        }


def _metric_bound(metric: str, d: Domain, x, v) -> Bound:
    if metric == "caratheodory":
        return caratheodory_metric(d, x, v)
    if metric == "kobayashi":
        return kobayashi_metric(d, x, v)
    raise ArgumentError(f"unknown metric {metric!r}")


def verify_metric_contraction(
    X: Domain,
    U: Domain,
    k: float,
    metric: str = "caratheodory",
    samples: int = DEFAULT_VERIFY_SAMPLES,
    seed: int = 0,
    tol: float = 1e-9,
) -> VerificationReport:
    """Check E_X(x, v) <= k E_U(x, v) at sampled (x, v) with x in U.

    With exact values on both sides, verdicts are definitive; with bounds,
    a failed conservative comparison is inconclusive, never a violation.
    """
    if not (0 < k < 1):
        raise ArgumentError("k must be in (0, 1)")
    pts = sample(U, samples, seed)
    if isinstance(U, Polydisc):
        pts = [Point(U.centers)] + pts  # the analytic worst case sits at the center
    dirs = _sphere_directions(U.dim, 4 * U.dim + 8, seed + 1)
    n_h = n_i = n_v = 0
    max_ratio = None
    argmax = None
    records = []
    for idx, x in enumerate(pts):
        v = dirs[idx % len(dirs)]
        outer = _metric_bound(metric, X, x, v)
        inner = _metric_bound(metric, U, x, v)
        exact_pair = outer.kind == EXACT and inner.kind == EXACT
        ratio = None
        if exact_pair and inner.value > 0:
            ratio = outer.value / inner.value
            if max_ratio is None or ratio > max_ratio:
                max_ratio = ratio
                argmax = x.coords
        up = outer.upper_value()
        lo = inner.lower_value()
        if up is not None and lo is not None and up <= k * lo + tol:
            verdict = HOLDS
            n_h += 1
        elif exact_pair:
            verdict = VIOLATED
            n_v += 1
        else:
            verdict = INCONCLUSIVE
            n_i += 1
        records.append(
            SampleVerdict(x.coords, tuple(v), outer, inner, verdict, ratio)
        )
    overall = HOLDS if n_v == 0 and n_i == 0 else (VIOLATED if n_v else INCONCLUSIVE)
    return VerificationReport(
        verdict=overall,
        k=k,
        metric=metric,
        n_holds=n_h,
        n_inconclusive=n_i,
        n_violated=n_v,
        max_ratio=max_ratio,
        argmax_point=argmax,
        samples=tuple(records),
    )


__all__ = [
    "ContractionCertificate",
    "VerificationReport",
    "SampleVerdict",
    "caratheodory_diameter",
    "tanh_diameter_constant",
    "dilation_constant",
    "certificate_for",
    "dilate_disk",
    "verify_metric_contraction",
    "TANH_DIAMETER",
    "DILATION",
    "HOLDS",
    "INCONCLUSIVE",
    "VIOLATED",
]
