"""Product probability spaces, truncations, cylinder sets and simple functions.

The space is an infinite product of finite cyclic alphabets, each carrying a
strictly positive probability vector.  Everything downstream factors through
finite truncations, so a system is described by *rules*: an alphabet rule
producing the size m_i of the i-th coordinate and a measure rule producing its
weight vector.  Rules are evaluated lazily per index and are registered by
name so specs round-trip through a JSON-compatible config.

Weighted backward shifts live on a countable discrete measure space instead of
a product; they share the SystemSpec container but most product-space
operations reject them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .errors import CapExceeded
from .scalars import FLOAT_TOL, Scalar, is_exact, scalar_sum

ENUM_CAP = 1 << 24          # default cell cap for truncation enumeration
VECTOR_CAP = 1 << 16        # cap for materializing one coordinate's weights
GEOM_EXACT_CAP = 512        # longest geometric ramp kept in exact rationals

ODOMETER = "odometer"
TRANSLATION = "diagonal-translation"
SHIFT = "weighted-shift"


# ---------------------------------------------------------------------------
# alphabet rules
# ---------------------------------------------------------------------------

class AlphabetRule:
    """Rule i -> m_i (sizes of the coordinate alphabets), i >= 1."""

    def __init__(self, family: str, params: dict):
        self.family = family
        self.params = dict(params)
        self._fn = _ALPHABET_FAMILIES[family]

    def m(self, i: int) -> int:
        if i < 1:
            raise ValueError("coordinate indices start at 1")
        size = self._fn(i, self.params)
        if size < 2:
            raise ValueError(f"alphabet rule produced m_{i}={size} < 2")
        return size

    def config(self) -> dict:
        return {"family": self.family, "params": dict(self.params)}

    def __eq__(self, other):
        return (isinstance(other, AlphabetRule)
                and self.family == other.family and self.params == other.params)


def _alpha_constant(i, p):
    return int(p["m"])


def _alpha_list(i, p):
    lst = p["list"]
    if p.get("repeat", "cycle") == "cycle":
        return int(lst[(i - 1) % len(lst)])
    return int(lst[min(i - 1, len(lst) - 1)])


def _alpha_affine(i, p):
    return int(p.get("a", 1)) * i + int(p.get("b", 0))


def _alpha_cycle_range(i, p):
    lo, hi = int(p["lo"]), int(p["hi"])
    return lo + (i - 1) % (hi - lo + 1)


def _alpha_pow_blocks(i, p):
    # 2^(l+1) on the block l^2 <= i < (l+1)^2, l >= 1
    l = math.isqrt(i)
    if l * l > i:
        l -= 1
    l = max(l, 1)
    return 2 ** (l + 1)


def _alpha_power(i, p):
    return int(p["base"]) ** i


def _alpha_scaled_power(i, p):
    return int(p["scale"]) * int(p["base"]) ** i


def _alpha_superexp(i, p):
    # base^(1+2+...+i); consecutive ratios base^(i+1) are unbounded
    return int(p["base"]) ** (i * (i + 1) // 2)


_ALPHABET_FAMILIES: dict[str, Callable[[int, dict], int]] = {
    "constant": _alpha_constant,
    "list": _alpha_list,
    "affine": _alpha_affine,
    "cycle-range": _alpha_cycle_range,
    "pow-blocks": _alpha_pow_blocks,
    "power": _alpha_power,
    "scaled-power": _alpha_scaled_power,
    "superexp": _alpha_superexp,
}


# ---------------------------------------------------------------------------
# measure families
# ---------------------------------------------------------------------------

class MeasureFamily:
    """Rule i -> probability vector on [0, m_i).

    Subclasses either materialize the whole vector (small alphabets) or expose
    a piecewise-geometric description (huge alphabets).  `backend` declares
    whether weights are exact rationals ("rational") or floats ("float").
    """

    name: str = ""

    def __init__(self, params: dict):
        self.params = dict(params)

    # -- required ----------------------------------------------------------
    def weights(self, i: int, m: int) -> tuple:
        raise NotImplementedError

    @property
    def backend(self) -> str:
        return "rational"

    # -- generic accessors (overridable with closed forms) ------------------
    def weight(self, i: int, m: int, j: int) -> Scalar:
        return self.weights(i, m)[j % m]

    def eta(self, i: int, m: int) -> Scalar:
        return max(self.weights(i, m))

    def delta(self, i: int, m: int) -> Scalar:
        return min(self.weights(i, m))

    def interval_measure(self, i: int, m: int, lo: int, hi: int) -> Scalar:
        """Weight of the integer interval [lo, hi] intersected with [0, m)."""
        lo, hi = max(lo, 0), min(hi, m - 1)
        if lo > hi:
            return Fraction(0) if self.backend == "rational" else 0.0
        w = self.weights(i, m)
        return scalar_sum(w[lo:hi + 1])

    def subset_measure(self, i: int, m: int, subset: Iterable[int]) -> Scalar:
        w = self.weights(i, m)
        return scalar_sum(w[j % m] for j in subset)

    def sup_shift_ratio(self, i: int, m: int, s: int) -> Scalar:
        """sup_j mu_i(j - s mod m) / mu_i(j); equals 1 when s = 0 mod m."""
        s %= m
        if s == 0:
            return Fraction(1)
        w = self.weights(i, m)
        return max(w[(j - s) % m] / w[j] for j in range(m))

    def config(self) -> dict:
        return {"family": self.name, "params": dict(self.params)}

    def __eq__(self, other):
        return (isinstance(other, MeasureFamily)
                and self.name == other.name and self.params == other.params)


class UniformMeasure(MeasureFamily):
    name = "uniform"

    def weights(self, i, m):
        _check_vector_cap(m)
        return (Fraction(1, m),) * m

    def eta(self, i, m):
        return Fraction(1, m)

    delta = eta

    def sup_shift_ratio(self, i, m, s):
        return Fraction(1)

    def interval_measure(self, i, m, lo, hi):
        lo, hi = max(lo, 0), min(hi, m - 1)
        return Fraction(max(hi - lo + 1, 0), m)


class SameMeasure(MeasureFamily):
    """One fixed weight vector used on every coordinate."""

    name = "same"

    def __init__(self, params):
        super().__init__(params)
        from .scalars import parse_scalar
        self._nu = tuple(parse_scalar(t) if isinstance(t, str) else Fraction(t)
                         for t in params["weights"])

    def weights(self, i, m):
        if m != len(self._nu):
            raise ValueError("alphabet size does not match the fixed vector")
        return self._nu


class OrnsteinMeasure(MeasureFamily):
    """mu_i(0) = 1/2 and mu_i(j) = 1/(2i) on the alphabet of size i+1."""

    name = "ornstein"

    def weights(self, i, m):
        if m != i + 1:
            raise ValueError("this measure family expects m_i = i + 1")
        _check_vector_cap(m)
        return (Fraction(1, 2),) + (Fraction(1, 2 * i),) * i

    def eta(self, i, m):
        return Fraction(1, 2)

    def delta(self, i, m):
        return Fraction(1, 2) if i == 1 else Fraction(1, 2 * i)


class BinaryHalfPlusMeasure(MeasureFamily):
    """Binary weights (1/2 + p_i, 1/2 - p_i) with p_i = i^(-alpha).

    Where the raw perturbation makes the vector invalid (p >= 1/2) it is
    halved until 1/2 + p < 1; this keeps every index usable and keeps the
    weights rational for integer alpha.
    """

    name = "binary-half-plus"

    def __init__(self, params):
        super().__init__(params)
        from .scalars import parse_scalar
        a = params["alpha"]
        self._alpha = parse_scalar(a) if isinstance(a, str) else Fraction(a)
        self._rational = (isinstance(self._alpha, Fraction)
                          and self._alpha.denominator == 1)

    @property
    def backend(self):
        return "rational" if self._rational else "float"

    def perturbation(self, i: int) -> Scalar:
        if self._rational:
            p: Scalar = Fraction(1, i ** int(self._alpha))
            half: Scalar = Fraction(1, 2)
        else:
            p = float(i) ** (-float(self._alpha))
            half = 0.5
        while p >= half:
            p = p / 2
        return p

    def weights(self, i, m):
        if m != 2:
            raise ValueError("binary measure family on a non-binary alphabet")
        p = self.perturbation(i)
        if self._rational:
            return (Fraction(1, 2) + p, Fraction(1, 2) - p)
        return (0.5 + p, 0.5 - p)

    def eta(self, i, m):
        return self.weights(i, 2)[0]

    def delta(self, i, m):
        return self.weights(i, 2)[1]


class BinaryRatioMeasure(MeasureFamily):
    """Binary weights (i/(i+1), 1/(i+1))."""

    name = "binary-ratio"

    def weights(self, i, m):
        if m != 2:
            raise ValueError("binary measure family on a non-binary alphabet")
        return (Fraction(i, i + 1), Fraction(1, i + 1))

    def eta(self, i, m):
        return Fraction(i, i + 1)

    def delta(self, i, m):
        return Fraction(1, i + 1)


class BlocksOfThreeMeasure(MeasureFamily):
    """Binary weights in blocks of three coordinates.

    For block k >= 1: coordinates 3k+1 and 3k+2 carry (k/(k+1), 1/(k+1)) and
    coordinate 3k+3 carries (1/2, 1/2).  The k = 0 block would need weight 0,
    which the standing positivity assumption forbids, so its three
    coordinates are uniform.
    """

    name = "blocks-of-three"

    def weights(self, i, m):
        if m != 2:
            raise ValueError("binary measure family on a non-binary alphabet")
        if i <= 3:
            return (Fraction(1, 2), Fraction(1, 2))
        k, r = divmod(i - 1, 3)
        if r == 2:
            return (Fraction(1, 2), Fraction(1, 2))
        return (Fraction(k, k + 1), Fraction(1, k + 1))


class SplitGeometricMeasure(MeasureFamily):
    """Dyadic tent weights: c_i * 2^-(distance from the middle).

    m = 2 is the special pair (2/3, 1/3) (normalizer c = 1/3).  All weights
    are exact rationals and the normalizer satisfies c_i >= 1/4.
    """

    name = "split-geometric"

    def normalizer(self, m: int) -> Fraction:
        if m == 2:
            return Fraction(1, 3)
        if m % 2 == 0:
            beta = m // 2
            return 1 / (4 - Fraction(2) ** (2 - beta))
        beta = (m - 1) // 2
        return 1 / (3 - Fraction(2) ** (1 - beta))

    def weights(self, i, m):
        _check_vector_cap(m)
        if m == 2:
            return (Fraction(2, 3), Fraction(1, 3))
        c = self.normalizer(m)
        if m % 2 == 0:
            beta = m // 2
            left = [c / 2 ** (beta - 1 - j) for j in range(beta)]
            right = [c / 2 ** (j - beta) for j in range(beta, m)]
        else:
            beta = (m - 1) // 2
            left = [c / 2 ** (beta - j) for j in range(beta + 1)]
            right = [c / 2 ** (j - beta) for j in range(beta + 1, m)]
        return tuple(left + right)


class GeometricSolvedMeasure(MeasureFamily):
    """mu_i(j) = (i/(i+1)) c_i^j with c_i the root of sum_{j<m} c^j = (i+1)/i.

    The root is irrational in general, so this family runs on the float
    backend (bisection to 1e-12); eta keeps its exact closed form i/(i+1).
    """

    name = "geometric-solved"

    def __init__(self, params):
        super().__init__(params)
        self._roots: dict[int, float] = {}

    @property
    def backend(self):
        return "float"

    def ratio(self, i: int, m: int) -> float:
        key = (i, m)
        if key not in self._roots:
            from .gallery import solve_geometric_ratio
            self._roots[key] = solve_geometric_ratio(i, m)
        return self._roots[key]

    def weights(self, i, m):
        _check_vector_cap(m)
        c = self.ratio(i, m)
        scale = i / (i + 1)
        return tuple(scale * c ** j for j in range(m))

    def eta(self, i, m):
        return Fraction(i, i + 1)

    def delta(self, i, m):
        return (i / (i + 1)) * self.ratio(i, m) ** (m - 1)


class RampMeasure(MeasureFamily):
    """Flat weight with one geometrically decaying ramp, per coordinate.

    Layouts:
      "tail"  -- constant epsilon on [0, m-n), ramp of length n at the end;
      "mid"   -- constant on [0, m-2n), ramp on [m-2n, m-n), constant tail.
    The ramp runs rho^(n-1) * eps down to eps with rho = 1 + delta_i.
    Normalization: (#const) * eps + eps (rho^n - 1)/(rho - 1) = 1.

    Coordinates not selected by the `selected` rule are uniform.  Weights stay
    exact rationals while the ramp is short enough; beyond GEOM_EXACT_CAP the
    family evaluates in floats (log-space powers).
    """

    name = "ramp"

    def __init__(self, params):
        super().__init__(params)
        self.layout = params.get("layout", "tail")
        self.n_rule = params["n"]
        self.delta_rule = params["delta"]
        self.select_rule = params.get("select", "all")
        self._alphabet: Optional[AlphabetRule] = None  # set by SystemSpec

    def bind_alphabet(self, rule: AlphabetRule):
        self._alphabet = rule

    # -- per-coordinate parameters ------------------------------------------
    def selected(self, i: int) -> bool:
        rule = self.select_rule
        if rule == "all":
            return True
        if rule == "squares":
            r = math.isqrt(i)
            return r * r == i
        raise ValueError(f"unknown select rule {rule!r}")

    def ramp_len(self, i: int, m: int) -> int:
        rule = self.n_rule
        if rule == "half":
            return m // 2
        if rule == "third":
            return m // 3
        if rule == "fifth":
            return m // 5
        if rule == "eighth":
            return m // 8
        raise ValueError(f"unknown ramp-length rule {rule!r}")

    def delta_value(self, i: int) -> Fraction:
        rule = self.delta_rule
        if rule == "inv-square":
            return Fraction(1, i * i)
        if rule == "inv-ramp":
            m = self._alphabet.m(i)
            return Fraction(1, max(self.ramp_len(i, m), 1))
        if rule == "quad-over-pow":
            return Fraction(i * i, 2 ** i)
        if rule == "dyadic-over-prev-m":
            prev_m = 1 if i == 1 else self._alphabet.m(i - 1)
            return Fraction(1, 2 ** i * prev_m)
        raise ValueError(f"unknown delta rule {rule!r}")

    def _exact(self, i: int, n: int) -> bool:
        return n <= GEOM_EXACT_CAP

    def pieces(self, i: int, m: int) -> list[tuple[int, int, Scalar, Scalar]]:
        """[(start, length, first_weight, ratio)] in position order."""
        n = self.ramp_len(i, m) if self.selected(i) else 0
        if n == 0:
            u = Fraction(1, m)
            return [(0, m, u, Fraction(1))]
        delta = self.delta_value(i)
        if self._exact(i, n):
            rho = 1 + delta
            geom_sum = (rho ** n - 1) / delta
            eps = 1 / (Fraction(m - n) + geom_sum)
            top = eps * rho ** (n - 1)
            inv = 1 / rho
        else:
            log_rho = math.log1p(float(delta))
            if n * log_rho > 600:
                raise CapExceeded(
                    f"ramp at coordinate {i} spans e^{n * log_rho:.0f}, "
                    "beyond the float backend's range")
            geom_sum = math.expm1(n * log_rho) / float(delta)
            eps = 1.0 / ((m - n) + geom_sum)
            top = eps * math.exp((n - 1) * log_rho)
            # per-step decay may round to exactly 1.0 in float (delta below
            # machine epsilon); keep the log so powers stay honest
            inv = _GeomRatio(-log_rho)
        if self.layout == "tail":
            return [(0, m - n, eps, _one_like(eps)),
                    (m - n, n, top, inv)]
        if self.layout == "mid":
            head = m - 2 * n
            return [(0, head, eps, _one_like(eps)),
                    (head, n, top, inv),
                    (head + n, n, eps, _one_like(eps))]
        raise ValueError(f"unknown layout {self.layout!r}")

    @property
    def backend(self):
        # rational as long as every *used* ramp stays below the exact cap;
        # declared float once any gallery horizon materializes a long ramp.
        return "rational"

    # -- accessors built on the piece list -----------------------------------
    def weights(self, i, m):
        _check_vector_cap(m)
        out = []
        for start, length, first, ratio in self.pieces(i, m):
            w = first
            for _ in range(length):
                out.append(w)
                w = w * ratio
        return tuple(out)

    def weight(self, i, m, j):
        j %= m
        for start, length, first, ratio in self.pieces(i, m):
            if start <= j < start + length:
                return _geom_at(first, ratio, j - start)
        raise AssertionError("pieces do not cover the alphabet")

    def eta(self, i, m):
        def piece_max(length, first, ratio):
            return first if ratio <= 1 else _geom_at(first, ratio, length - 1)
        return max(piece_max(length, first, ratio)
                   for _, length, first, ratio in self.pieces(i, m))

    def delta(self, i, m):
        # the flat weight is the minimum: every ramp decays back down to it
        return self.weight(i, m, 0)

    def interval_measure(self, i, m, lo, hi):
        lo, hi = max(lo, 0), min(hi, m - 1)
        if lo > hi:
            return Fraction(0)
        total = None
        for start, length, first, ratio in self.pieces(i, m):
            a, b = max(lo, start), min(hi, start + length - 1)
            if a > b:
                continue
            part = _geom_interval_sum(first, ratio, a - start, b - start)
            total = part if total is None else total + part
        return total if total is not None else Fraction(0)

    def subset_measure(self, i, m, subset):
        return scalar_sum(self.weight(i, m, j) for j in subset)

    def sup_shift_ratio(self, i, m, s):
        s %= m
        if s == 0:
            return Fraction(1)
        # On any maximal run where j and j-s stay inside fixed pieces, the
        # ratio is geometric in j, so its sup sits at a run endpoint.
        boundaries = set()
        for start, length, _, _ in self.pieces(i, m):
            for b in (start, start + length - 1):
                boundaries.add(b % m)
                boundaries.add((b + s) % m)
        best = None
        for j in boundaries:
            for jj in (j - 1, j, j + 1):
                jj %= m
                r = self.weight(i, m, jj - s) / self.weight(i, m, jj)
                if best is None or r > best:
                    best = r
        return best


class _GeomRatio(float):
    """A float ratio remembering its exact log (for sub-epsilon decays)."""

    def __new__(cls, log_value: float):
        obj = super().__new__(cls, math.exp(log_value))
        obj.log_value = log_value
        return obj


def _one_like(x: Scalar) -> Scalar:
    return Fraction(1) if is_exact(x) else 1.0


def _geom_at(first: Scalar, ratio: Scalar, t: int) -> Scalar:
    lr = getattr(ratio, "log_value", None)
    if lr is not None:
        return float(first) * math.exp(t * lr)
    if is_exact(first) and is_exact(ratio):
        return first * ratio ** t
    if ratio == 1:
        return float(first)
    return float(first) * math.exp(t * math.log(float(ratio)))


def _geom_interval_sum(first: Scalar, ratio: Scalar, t0: int, t1: int) -> Scalar:
    """sum of first * ratio^t for t in [t0, t1]."""
    k = t1 - t0 + 1
    lr = getattr(ratio, "log_value", None)
    if lr is not None:
        head = float(first) * math.exp(t0 * lr)
        if lr == 0.0:
            return head * k
        return head * math.expm1(k * lr) / math.expm1(lr)
    if ratio == 1:
        return first * k
    head = _geom_at(first, ratio, t0)
    if is_exact(first) and is_exact(ratio):
        return head * (ratio ** k - 1) / (ratio - 1)
    r = float(ratio)
    return float(head) * (math.exp(k * math.log(r)) - 1.0) / (r - 1.0)


_MEASURE_FAMILIES = {
    cls.name: cls
    for cls in (UniformMeasure, SameMeasure, OrnsteinMeasure,
                BinaryHalfPlusMeasure, BinaryRatioMeasure,
                BlocksOfThreeMeasure, SplitGeometricMeasure,
                GeometricSolvedMeasure, RampMeasure)
}


def _check_vector_cap(m: int):
    if m > VECTOR_CAP:
        raise CapExceeded(
            f"alphabet of size {m} exceeds the materialization cap {VECTOR_CAP}; "
            "use the piecewise accessors")


# ---------------------------------------------------------------------------
# shift weights (countable discrete space)
# ---------------------------------------------------------------------------

class ShiftWeights:
    """Weights nu_i > 0 on Z or Z_+ for the weighted backward shift."""

    def __init__(self, family: str, params: dict):
        self.family = family
        self.params = dict(params)
        if family != "geometric-abs":
            raise ValueError(f"unknown shift weight family {family!r}")
        from .scalars import parse_scalar
        r = params["ratio"]
        self.ratio = parse_scalar(r) if isinstance(r, str) else Fraction(r)
        if not 0 < self.ratio < 1:
            raise ValueError("shift weight ratio must lie in (0, 1)")

    def nu(self, i: int) -> Fraction:
        return self.ratio ** abs(i)

    def total(self, index_set: str) -> Fraction:
        if index_set == "Z":
            return (1 + self.ratio) / (1 - self.ratio)
        return Fraction(1) / (1 - self.ratio)

    def config(self) -> dict:
        return {"family": self.family, "params": dict(self.params)}

    def __eq__(self, other):
        return (isinstance(other, ShiftWeights)
                and self.family == other.family and self.params == other.params)


# ---------------------------------------------------------------------------
# SystemSpec
# ---------------------------------------------------------------------------

@dataclass
class SystemSpec:
    """Full description of one dynamical system.

    kind is "odometer", "diagonal-translation" or "weighted-shift".  Product
    kinds carry an alphabet rule and a measure family; the shift kind carries
    an index set and shift weights.
    """

    kind: str
    alphabet: Optional[AlphabetRule] = None
    measure: Optional[MeasureFamily] = None
    index_set: str = "Z"
    shift_weights: Optional[ShiftWeights] = None
    gallery_id: Optional[str] = None
    enum_cap: int = ENUM_CAP

    def __post_init__(self):
        if self.kind in (ODOMETER, TRANSLATION):
            if self.alphabet is None or self.measure is None:
                raise ValueError("product-space specs need alphabet and measure")
            if isinstance(self.measure, RampMeasure):
                self.measure.bind_alphabet(self.alphabet)
        elif self.kind == SHIFT:
            if self.shift_weights is None:
                raise ValueError("weighted-shift specs need shift weights")
            if self.index_set not in ("Z", "Z+"):
                raise ValueError("index set must be 'Z' or 'Z+'")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")

    # -- product-space accessors --------------------------------------------
    def _product_only(self):
        if self.kind == SHIFT:
            raise ValueError("product-space operation on a weighted-shift spec")

    def m(self, i: int) -> int:
        self._product_only()
        return self.alphabet.m(i)

    def mu(self, i: int) -> tuple:
        self._product_only()
        return self.measure.weights(i, self.m(i))

    def mu_weight(self, i: int, j: int) -> Scalar:
        self._product_only()
        return self.measure.weight(i, self.m(i), j)

    def eta(self, i: int) -> Scalar:
        self._product_only()
        return self.measure.eta(i, self.m(i))

    def delta(self, i: int) -> Scalar:
        self._product_only()
        return self.measure.delta(i, self.m(i))

    def interval_measure(self, i: int, lo: int, hi: int) -> Scalar:
        self._product_only()
        return self.measure.interval_measure(i, self.m(i), lo, hi)

    def subset_measure(self, i: int, subset: Iterable[int]) -> Scalar:
        self._product_only()
        return self.measure.subset_measure(i, self.m(i), subset)

    def sup_shift_ratio(self, i: int, s: int) -> Scalar:
        self._product_only()
        return self.measure.sup_shift_ratio(i, self.m(i), s)

    @property
    def backend(self) -> str:
        if self.kind == SHIFT:
            return "rational"
        return self.measure.backend

    def radix_weights(self, depth: int) -> list[int]:
        """[M_1, ..., M_{depth+1}] with M_1 = 1 and M_{i+1} = M_i * m_i."""
        self._product_only()
        out = [1]
        for i in range(1, depth + 1):
            out.append(out[-1] * self.m(i))
        return out

    def cell_count(self, depth: int) -> int:
        return self.radix_weights(depth)[-1]

    def digits_of(self, k: int, depth: int) -> list[int]:
        """Mixed-radix digits (k_1, ..., k_depth) of k mod M_{depth+1}."""
        self._product_only()
        out = []
        for i in range(1, depth + 1):
            k, d = divmod(k, self.m(i))
            out.append(d)
        return out

    def translation_order(self, depth: int) -> int:
        self._product_only()
        return math.lcm(*(self.m(i) for i in range(1, depth + 1)))

    def validate_coordinate(self, i: int):
        """Assert mu_i is a strictly positive probability vector.

        Uses interval sums so that huge piecewise alphabets validate without
        materializing their weight vectors.
        """
        if self.delta(i) <= 0:
            raise ValueError(f"mu_{i} has a nonpositive weight")
        total = self.interval_measure(i, 0, self.m(i) - 1)
        if is_exact(total):
            if total != 1:
                raise ValueError(f"mu_{i} sums to {total} != 1")
        elif abs(total - 1.0) > FLOAT_TOL:
            raise ValueError(f"mu_{i} sums to {total} (off by > 1e-12)")

    # -- shift accessors ------------------------------------------------------
    def nu(self, i: int) -> Fraction:
        if self.kind != SHIFT:
            raise ValueError("nu() is a weighted-shift accessor")
        if self.index_set == "Z+" and i < 0:
            raise ValueError("Z+ index must be nonnegative")
        return self.shift_weights.nu(i)

    # -- config round-trip ----------------------------------------------------
    def to_config(self) -> dict:
        if self.kind == SHIFT:
            return {"kind": self.kind, "index_set": self.index_set,
                    "weights": self.shift_weights.config()}
        cfg = {"kind": self.kind, "alphabet": self.alphabet.config(),
               "measure": self.measure.config()}
        if self.gallery_id:
            cfg["gallery_id"] = self.gallery_id
        return cfg

    @staticmethod
    def from_config(cfg: dict) -> "SystemSpec":
        kind = cfg["kind"]
        if kind == SHIFT:
            w = cfg["weights"]
            return SystemSpec(kind=kind, index_set=cfg.get("index_set", "Z"),
                              shift_weights=ShiftWeights(w["family"], w["params"]))
        a = cfg["alphabet"]
        if "list" in a:
            alphabet = AlphabetRule("list", a)
        else:
            alphabet = AlphabetRule(a["family"], a.get("params", {}))
        mcfg = cfg["measure"]
        family = _MEASURE_FAMILIES[mcfg["family"]]
        return SystemSpec(kind=kind, alphabet=alphabet,
                          measure=family(mcfg.get("params", {})),
                          gallery_id=cfg.get("gallery_id"))

    def same_system(self, other: "SystemSpec") -> bool:
        return self.to_config() == other.to_config()


# ---------------------------------------------------------------------------
# truncations
# ---------------------------------------------------------------------------

@dataclass
class TruncatedSpace:
    """The finite quotient on the first `depth` coordinates.

    Cells are indexed 0 .. M_{depth+1}-1 in little-endian mixed radix
    (coordinate 1 varies fastest), so indices are stable across depths.
    """

    spec: SystemSpec
    depth: int
    ms: tuple
    radix: tuple            # (M_1, ..., M_{depth+1})

    @property
    def cell_count(self) -> int:
        return self.radix[-1]

    def digits(self, cell: int) -> tuple:
        out = []
        for m in self.ms:
            cell, d = divmod(cell, m)
            out.append(d)
        return tuple(out)

    def index(self, digits: Sequence[int]) -> int:
        total = 0
        for d, M, m in zip(digits, self.radix, self.ms):
            if not 0 <= d < m:
                raise ValueError("digit out of range")
            total += d * M
        return total

    def cell_measure(self, cell: int) -> Scalar:
        prod = None
        for i, m in enumerate(self.ms, start=1):
            cell, d = divmod(cell, m)
            w = self.spec.mu_weight(i, d)
            prod = w if prod is None else prod * w
        return prod

    def all_measures(self) -> list:
        """Measures of all cells in index order (memory ~ cell_count).

        Built coordinate by coordinate as an outer product, so the cost is one
        multiplication per output entry rather than one per entry and depth.
        """
        out = [Fraction(1)]
        for i, m in enumerate(self.ms, start=1):
            w = [self.spec.mu_weight(i, j) for j in range(m)]
            out = [base * wj for wj in w for base in out]
        return out


def _prod(xs):
    total = None
    for x in xs:
        total = x if total is None else total * x
    return total if total is not None else Fraction(1)


def build_truncation(spec: SystemSpec, depth: int, cap: Optional[int] = None) -> TruncatedSpace:
    """Materialize the depth-N quotient; CapExceeded beyond the cell cap."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    cap = spec.enum_cap if cap is None else cap
    ms = tuple(spec.m(i) for i in range(1, depth + 1))
    radix = [1]
    for m in ms:
        radix.append(radix[-1] * m)
        if radix[-1] > cap:
            raise CapExceeded(
                f"truncation at depth {depth} has {radix[-1]} cells > cap {cap}")
    return TruncatedSpace(spec=spec, depth=depth, ms=ms, radix=tuple(radix))


# ---------------------------------------------------------------------------
# depth sets and simple functions
# ---------------------------------------------------------------------------

@dataclass
class DepthSet:
    """A set determined by the first `depth` coordinates.

    Stored either in product form (one subset per coordinate) or as an
    explicit set of cell indices.  Product form never enumerates cells.
    """

    spec: SystemSpec
    depth: int
    factors: Optional[tuple] = None        # tuple of frozensets
    cells: Optional[frozenset] = None

    @staticmethod
    def product_form(spec: SystemSpec, factors: Sequence[Iterable[int]]) -> "DepthSet":
        fs = tuple(frozenset(f) for f in factors)
        for i, f in enumerate(fs, start=1):
            m = spec.m(i)
            if any(not 0 <= j < m for j in f):
                raise ValueError(f"factor {i} has symbols outside the alphabet")
        return DepthSet(spec=spec, depth=len(fs), factors=fs)

    @staticmethod
    def from_cells(spec: SystemSpec, depth: int, cells: Iterable[int]) -> "DepthSet":
        return DepthSet(spec=spec, depth=depth, cells=frozenset(cells))

    @staticmethod
    def basic_cylinder(spec: SystemSpec, symbols: Sequence[int]) -> "DepthSet":
        return DepthSet.product_form(spec, [{s} for s in symbols])

    def is_product(self) -> bool:
        return self.factors is not None

    def to_cells(self, cap: Optional[int] = None) -> frozenset:
        if self.cells is not None:
            return self.cells
        tr = build_truncation(self.spec, self.depth, cap)
        idx = [frozenset(f) for f in self.factors]
        cells = []
        for cell in range(tr.cell_count):
            if all(d in idx[i] for i, d in enumerate(tr.digits(cell))):
                cells.append(cell)
        return frozenset(cells)

    def explicit(self, cap: Optional[int] = None) -> "DepthSet":
        if self.cells is not None:
            return self
        return DepthSet(spec=self.spec, depth=self.depth, cells=self.to_cells(cap))


def set_measure(spec: SystemSpec, S: DepthSet) -> Scalar:
    """Exact measure of a depth set; product form avoids cell enumeration."""
    if S.is_product():
        total = None
        for i, f in enumerate(S.factors, start=1):
            part = spec.subset_measure(i, f)
            total = part if total is None else total * part
        return total if total is not None else Fraction(1)
    tr = build_truncation(spec, S.depth)
    return scalar_sum(tr.cell_measure(c) for c in sorted(S.cells))


@dataclass
class SimpleFunction:
    """A function determined by the first `depth` coordinates (one value per cell)."""

    spec: SystemSpec
    depth: int
    values: tuple

    @staticmethod
    def indicator(S: DepthSet, cap: Optional[int] = None) -> "SimpleFunction":
        tr = build_truncation(S.spec, S.depth, cap)
        cells = S.to_cells(cap)
        one, zero = Fraction(1), Fraction(0)
        vals = tuple(one if c in cells else zero for c in range(tr.cell_count))
        return SimpleFunction(spec=S.spec, depth=S.depth, values=vals)

    @staticmethod
    def constant(spec: SystemSpec, depth: int, value: Scalar) -> "SimpleFunction":
        n = spec.cell_count(depth)
        if n > spec.enum_cap:
            raise CapExceeded("constant function beyond the enumeration cap")
        return SimpleFunction(spec=spec, depth=depth, values=(value,) * n)

    def __add__(self, other: "SimpleFunction") -> "SimpleFunction":
        self._check_compatible(other)
        return SimpleFunction(self.spec, self.depth,
                              tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "SimpleFunction") -> "SimpleFunction":
        self._check_compatible(other)
        return SimpleFunction(self.spec, self.depth,
                              tuple(a - b for a, b in zip(self.values, other.values)))

    def scale(self, c: Scalar) -> "SimpleFunction":
        return SimpleFunction(self.spec, self.depth,
                              tuple(c * v for v in self.values))

    def _check_compatible(self, other: "SimpleFunction"):
        if self.depth != other.depth or not self.spec.same_system(other.spec):
            raise ValueError("simple functions live on different truncations")


# ---------------------------------------------------------------------------
# the non-atomicity monitor
# ---------------------------------------------------------------------------

def atomless_monitor(spec: SystemSpec, depth: int) -> list:
    """Partial products of the per-coordinate max weights, n = 1 .. depth.

    The sequence is positive and non-increasing; it must tend to 0 for the
    product measure to be non-atomic.  Violations are flagged by the caller,
    not forbidden here.
    """
    out = []
    prod = None
    for i in range(1, depth + 1):
        e = spec.eta(i)
        prod = e if prod is None else prod * e
        out.append(prod)
    return out
