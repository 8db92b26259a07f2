"""Picard iteration with certified geometric error bounds.

For a holomorphic self-map whose image is relatively compact, the iterates
contract at rate k in the integrated invariant distance, so the distance
from the n-th iterate to the fixed point is at most k^n / (1 - k) times the
first-step distance.  The stopping rule uses either that certified tail
(when per-step invariant distances are enabled) or a Euclidean step
surrogate tol * (1 - k) / k, both conservative under the recorded k.
"""

from __future__ import annotations

import csv
import dataclasses
import math
from typing import Callable, List, Optional

import numpy as np

from .contraction import (
    DILATION,
    ContractionCertificate,
    certificate_for,
)
from .domains import Domain, Point, Polydisc, as_point, contains
from .errors import (
    ArgumentError,
    ConfigurationError,
    NonConvergenceError,
    PreconditionError,
    RangeError,
)
from .holomap import SUPPORTED, HoloMap, RangeEvidence, range_check
from .metrics import (
    Bound,
    UPPER,
    caratheodory_distance,
    integrated_distance,
    metric_field,
)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000

CONSISTENT = "consistent"
INCONCLUSIVE = "inconclusive"


def invariant_distance_upper(X: Domain, a, b, seed: int = 0) -> Bound:
    """Upper bound on the integrated invariant distance of a, b in X.

    Exact closed form on polydiscs (where the integrated Carathéodory and
    Kobayashi distances coincide with the coordinate maximum of Poincaré
    distances); an optimized Kobayashi polyline bound otherwise.
    """
    a, b = as_point(a), as_point(b)
    if isinstance(X, Polydisc):
        d = caratheodory_distance(X, a, b)
        return Bound(d.value, UPPER, tol=d.tol)
    field = metric_field(X, "kobayashi")
    return integrated_distance(field, X, a, b, seed=seed)


@dataclasses.dataclass(frozen=True)
class IterationTrace:
    """The full Picard history with the certificate that bounds its decay."""

    points: tuple
    step_euclid: tuple
    certificate: ContractionCertificate
    d0: Optional[Bound] = None
    step_invariant: Optional[tuple] = None

    def __len__(self):
        return len(self.points)


@dataclasses.dataclass(frozen=True)
class FixedPointResult:
    c: Point
    residual: float
    iterations: int
    certificate: ContractionCertificate
    certified_tail: float
    trace: IterationTrace
    range_evidence: Optional[RangeEvidence]
    stop_rule: str

    def to_json(self) -> dict:
        return {
            "fixed_point": [[z.real, z.imag] for z in self.c.coords],
            "residual": self.residual,
            "iterations": self.iterations,
            "certificate": self.certificate.to_json(),
            "certified_tail": self.certified_tail,
            "stop_rule": self.stop_rule,
            "range_evidence": (
                self.range_evidence.to_json() if self.range_evidence else None
            ),
        }


def certify_tail(trace: IterationTrace, n: int) -> float:
    """k^n / (1 - k) times the first-step distance bound: a valid tail bound."""
    if len(trace.points) == 0:
        raise ConfigurationError("trace is empty")
    if trace.d0 is None:
        raise ConfigurationError("trace has no first-step invariant distance bound")
    k = trace.certificate.k
    return k**n / (1.0 - k) * trace.d0.value


def picard_solve(
    f: HoloMap,
    X: Domain,
    U: Domain,
    x0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    certificate: Optional[ContractionCertificate] = None,
    method: str = DILATION,
    step_invariant: bool = False,
    override_range: bool = False,
    samples: int = 512,
    seed: int = 0,
) -> FixedPointResult:
    """Iterate x <- f(x) to the unique fixed point, with certified tail bounds.

    Preconditions: f maps X into U with supported range evidence (or an
    explicit override), x0 lies in X, and a contraction certificate for the
    inclusion U in X is obtainable.
    """
    x0 = as_point(x0)
    if f.n != X.dim or f.m != X.dim:
        raise ArgumentError("picard_solve needs a self-map of X")
    if not contains(X, x0):
        raise ArgumentError(f"starting point {x0.coords} is not in X")
    evidence = range_check(f, X, U, samples=samples, seed=seed)
    if evidence.verdict != SUPPORTED and not override_range:
        raise RangeError(
            f"range evidence for f(X) in U is {evidence.verdict}; "
            "pass override_range=True to proceed anyway"
        )
    if certificate is None:
        certificate = certificate_for(X, U, method=method, samples=samples, seed=seed)
    k = certificate.k

    points: List[Point] = [x0]
    steps: List[float] = []
    inv_steps: List[Bound] = []
    d0: Optional[Bound] = None
    step_floor = tol * (1.0 - k) / k if k > 0 else tol
    stop_rule = ""
    cur = x0
    converged = False
    for it in range(max_iter):
        nxt = f.eval(cur)
        if not contains(U, nxt):
            raise PreconditionError(
                f"iterate {it + 1} left U; the range evidence was too optimistic"
            )
        step = float(np.linalg.norm(nxt.as_array() - cur.as_array()))
        points.append(nxt)
        steps.append(step)
        if d0 is None:
            d0 = invariant_distance_upper(X, cur, nxt, seed=seed)
        if step_invariant:
            dn = (
                d0
                if it == 0
                else invariant_distance_upper(X, cur, nxt, seed=seed)
            )
            inv_steps.append(dn)
            tail = dn.value * k / (1.0 - k)
            if tail < tol:
                stop_rule = "certified invariant tail below tol"
                cur = nxt
                converged = True
                break
        elif step < step_floor:
            stop_rule = "euclidean step below tol*(1-k)/k surrogate"
            cur = nxt
            converged = True
            break
        cur = nxt

    trace = IterationTrace(
        points=tuple(points),
        step_euclid=tuple(steps),
        certificate=certificate,
        d0=d0,
        step_invariant=tuple(inv_steps) if step_invariant else None,
    )
    if not converged:
        raise NonConvergenceError(
            f"no convergence within {max_iter} iterations", trace=trace
        )
    residual = float(np.linalg.norm(f.eval(cur).as_array() - cur.as_array()))
    n = len(points) - 1
    tail = certify_tail(trace, n) if d0 is not None else math.inf
    if override_range and evidence.verdict != SUPPORTED:
        stop_rule += " (range evidence overridden)"
    return FixedPointResult(
        c=cur,
        residual=residual,
        iterations=n,
        certificate=certificate,
        certified_tail=tail,
        trace=trace,
        range_evidence=evidence,
        stop_rule=stop_rule,
    )


@dataclasses.dataclass(frozen=True)
class DecayReport:
    """Per-step comparison of invariant step distances against k^n decay."""

    verdict: str
    k: float
    distances: tuple  # Bound per consecutive pair
    ratios: tuple  # empirical d_{n+1} / d_n where defined
    flags: tuple  # consistent / inconclusive per step

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "k": self.k,
            "distances": [b.value for b in self.distances],
            "ratios": list(self.ratios),
            "flags": list(self.flags),
        }


def verify_decay(
    trace: IterationTrace,
    k: float,
    distance: Optional[Callable] = None,
    rel_slack: float = 1e-6,
    abs_slack: float = 1e-12,
) -> DecayReport:
    """Check d_n <= k^n d_0 over the trace, comparing upper bounds both sides.

    Both sides of the comparison are upper bounds, so a failed check is
    inconclusive rather than a violation.
    """
    if len(trace.points) < 3:
        raise ArgumentError("verify_decay needs a trace with at least 3 points")
    if distance is None:
        X = trace.certificate.X
        if X is None:
            raise ConfigurationError("no distance evaluator and no domain on record")
        distance = lambda a, b: invariant_distance_upper(X, a, b)  # noqa: E731
    ds = [
        distance(a, b)
        for a, b in zip(trace.points, trace.points[1:])
    ]
    d0 = ds[0].value
    flags = []
    ratios = []
    for n, dn in enumerate(ds):
        budget = (k**n) * d0 * (1.0 + rel_slack) + abs_slack
        flags.append(CONSISTENT if dn.value <= budget else INCONCLUSIVE)
        if n + 1 < len(ds) and dn.value > 0:
            ratios.append(ds[n + 1].value / dn.value)
    verdict = CONSISTENT if all(fl == CONSISTENT for fl in flags) else INCONCLUSIVE
    return DecayReport(
        verdict=verdict,
        k=k,
        distances=tuple(ds),
        ratios=tuple(ratios),
        flags=tuple(flags),
    )


def trace_to_csv(trace: IterationTrace, path: str) -> None:
    """Write iter, per-coordinate re/im, Euclidean step, certified tail."""
    n = trace.points[0].dim
    header = ["iter"]
    for j in range(n):
        header += [f"re{j}", f"im{j}"]
    header += ["step_euclid", "certified_tail"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i, p in enumerate(trace.points):
            row = [str(i)]
            for z in p.coords:
                row += [f"{z.real:.17g}", f"{z.imag:.17g}"]
            step = trace.step_euclid[i - 1] if i >= 1 else 0.0
            try:
                tail = certify_tail(trace, i)
            except ConfigurationError:
                tail = math.nan
            row += [f"{step:.17g}", f"{tail:.17g}"]
            writer.writerow(row)


__all__ = [
    "IterationTrace",
    "FixedPointResult",
    "DecayReport",
    "picard_solve",
    "certify_tail",
    "verify_decay",
    "invariant_distance_upper",
    "trace_to_csv",
    "CONSISTENT",
    "INCONCLUSIVE",
]
