"""Simple functions under composition: exact norms, periods, orbit statistics.

Everything testable lives in the span of cylinder indicators, so functions are
finite value tables over a truncation and composition is a permutation of the
table.  Rational specs give exact p-th powers of norms; the norms themselves
are exposed as float enclosures since p-th roots are irrational.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .maps import InducedBijection
from .scalars import Scalar, format_scalar, is_exact, scalar_sum
from .space import SimpleFunction, SystemSpec, build_truncation


def apply_composition(spec: SystemSpec, f: SimpleFunction, n: int = 1) -> SimpleFunction:
    """(C^n f)(x) = f(map^n x): pull values back along the induced bijection."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return f
    bij = InducedBijection(spec, f.depth)
    vals = f.values
    new = tuple(vals[bij.forward(c, n)] for c in range(len(vals)))
    return SimpleFunction(spec=spec, depth=f.depth, values=new)


def lp_norm_pow(spec: SystemSpec, f: SimpleFunction, p: int = 1) -> Scalar:
    """The exact p-th power of the L_p norm (integer p >= 1)."""
    if p < 1 or int(p) != p:
        raise ValueError("lp_norm_pow needs an integer p >= 1")
    tr = build_truncation(spec, f.depth)
    return scalar_sum(abs(v) ** p * tr.cell_measure(c)
                      for c, v in enumerate(f.values) if v != 0)


def lp_norm(spec: SystemSpec, f: SimpleFunction, p: Scalar = 1) -> float:
    """Float enclosure of the L_p norm, p in [1, infinity) (rational p ok)."""
    pf = float(p)
    if pf < 1:
        raise ValueError("p must be >= 1")
    if pf == int(pf):
        return float(lp_norm_pow(spec, f, int(pf))) ** (1.0 / pf)
    tr = build_truncation(spec, f.depth)
    total = math.fsum(abs(float(v)) ** pf * float(tr.cell_measure(c))
                      for c, v in enumerate(f.values) if v != 0)
    return total ** (1.0 / pf)


def lp_distance_pow(spec: SystemSpec, f: SimpleFunction, g: SimpleFunction,
                    p: int = 1) -> Scalar:
    return lp_norm_pow(spec, f - g, p)


def lp_distance(spec: SystemSpec, f: SimpleFunction, g: SimpleFunction,
                p: Scalar = 1) -> float:
    return lp_norm(spec, f - g, p)


def period_of(spec: SystemSpec, f: SimpleFunction) -> int:
    """Least d >= 1 with C^d f = f; always divides the bijection order.

    Checked over the divisors of the order, so the cost is a few permutation
    pulls rather than an iteration over every candidate d.
    """
    bij = InducedBijection(spec, f.depth)
    order = bij.order()
    for d in sorted(_divisors(order)):
        if apply_composition(spec, f, d).values == f.values:
            return d
    raise AssertionError("no period found at the bijection order")


def _divisors(n: int) -> list:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return out


@dataclass
class OrbitTrace:
    """Visit record of the orbit of f against a target g in the eps-ball."""

    spec: SystemSpec
    epsilon: float
    p: Scalar
    horizon: int
    distances: list
    visit_set: list
    running_density: list
    period: int
    tail_density_low: float
    tail_density_high: float

    def to_tsv_rows(self) -> list:
        rows = [("n", "distance", "visited", "running_density")]
        visits = set(self.visit_set)
        for n in range(1, self.horizon + 1):
            rows.append((str(n), format_scalar(self.distances[n - 1]),
                         "1" if n in visits else "0",
                         format_scalar(self.running_density[n - 1])))
        return rows


def orbit_trace(spec: SystemSpec, f: SimpleFunction, g: SimpleFunction,
                epsilon: float, p: Scalar = 1, horizon: int = 64) -> OrbitTrace:
    """Exact visit set {n <= H : ||C^n f - g||_p < eps} with density diagnostics.

    The eps-ball uses strict inequality.  Densities are #(visits in [1, m])/m;
    the tail diagnostics are their extremes over the second half of [1, H].
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    bij = InducedBijection(spec, f.depth)
    vals = f.values
    distances = []
    visit_set = []
    exact_p = float(p) == int(float(p))
    for n in range(1, horizon + 1):
        pulled = SimpleFunction(spec=spec, depth=f.depth,
                                values=tuple(vals[bij.forward(c, n)]
                                             for c in range(len(vals))))
        if exact_p and spec.backend == "rational":
            dpow = lp_distance_pow(spec, pulled, g, int(float(p)))
            dist = float(dpow) ** (1.0 / float(p))
            inside = dpow < Fraction(epsilon) ** int(float(p)) \
                if is_exact(dpow) else dist < epsilon
        else:
            dist = lp_distance(spec, pulled, g, p)
            inside = dist < epsilon
        distances.append(dist)
        if inside:
            visit_set.append(n)
    running = []
    count = 0
    visits = set(visit_set)
    for m in range(1, horizon + 1):
        if m in visits:
            count += 1
        running.append(Fraction(count, m))
    tail = running[horizon // 2:]
    return OrbitTrace(spec=spec, epsilon=epsilon, p=p, horizon=horizon,
                      distances=distances, visit_set=visit_set,
                      running_density=running, period=period_of(spec, f),
                      tail_density_low=float(min(tail)),
                      tail_density_high=float(max(tail)))


# ---------------------------------------------------------------------------
# indicator norms in Orlicz-type spaces
# ---------------------------------------------------------------------------

@dataclass
class MonotoneGauge:
    """A strictly increasing scalar gauge with an explicit inverse.

    Used only through the indicator-norm formula; `threshold` is the point
    past which the gauge is strictly increasing (inverse defined beyond
    gauge(threshold)).
    """

    name: str
    fn: Callable[[float], float]
    inverse: Callable[[float], float]
    threshold: float = 0.0


def power_gauge(p: float) -> MonotoneGauge:
    return MonotoneGauge(name=f"power-{p}", fn=lambda t: t ** p,
                         inverse=lambda y: y ** (1.0 / p))


def exp_minus_one_gauge() -> MonotoneGauge:
    return MonotoneGauge(name="exp-minus-one", fn=lambda t: math.expm1(t),
                         inverse=lambda y: math.log1p(y))


def orlicz_indicator_norm(gauge: MonotoneGauge, mu_e: float) -> float:
    """Norm of an indicator of measure mu_e: 1 / inverse(1 / mu_e)."""
    if not 0 < mu_e <= 1:
        raise ValueError("the set measure must lie in (0, 1]")
    y = 1.0 / mu_e
    if y < gauge.fn(gauge.threshold):
        raise ValueError("gauge inverse undefined at 1/mu_e")
    inv = gauge.inverse(y)
    if inv <= 0:
        raise ValueError("gauge inverse must be positive")
    return 1.0 / inv
