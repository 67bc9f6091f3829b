"""Witness constructions and their verification ladder.

Every construction returns a WitnessReport: the built objects, and one entry
per verified inequality recording the verification method used --

  exact                -- computed from measure primitives, no enumeration gap;
  independence-product -- exact product across independent coordinate blocks,
                          with the block law found by dynamic programming;
  proof-bound          -- a k-uniform certified bound (valid for the whole
                          range, not just sampled points);
  sampled              -- seeded Monte Carlo falsification with the seed,
                          trial count and violation count recorded.

A report passes only if every exact/product/bound check meets its bound and
every sampled check has zero violations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .criteria import (alpha_shift_witness, disjoint_shift_set_zplus,
                       gamma_witness, kappa as kappa_seq, omega,
                       theta_witness)
from .errors import (HypothesisUnavailable, NotFoundWithinHorizon,
                     StrategyInfeasible, WindowTooSmall)
from .functions import period_of
from .maps import odometer_pullback_measure, translation_set_shift
from .scalars import Scalar, format_scalar, is_exact
from .space import (ODOMETER, SHIFT, TRANSLATION, DepthSet, SimpleFunction,
                    SystemSpec, build_truncation, set_measure)

EXHAUSTIVE_CELL_CAP = 1 << 22
DEFAULT_TRIALS = 1_000_000
DEFAULT_SEED = 20240901


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    inequality: str
    required: str
    computed: str
    method: str
    ok: bool
    extras: dict = field(default_factory=dict)


@dataclass
class WitnessReport:
    construction: str
    params: dict
    checks: list = field(default_factory=list)
    objects: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name, inequality, required, computed, method, ok, **extras):
        self.checks.append(Check(name=name, inequality=inequality,
                                 required=_fmt(required), computed=_fmt(computed),
                                 method=method, ok=bool(ok), extras=extras))

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_document(self) -> dict:
        return {
            "construction": self.construction,
            "passed": self.passed,
            "params": {k: _fmt(v) for k, v in self.params.items()},
            "checks": [{"name": c.name, "inequality": c.inequality,
                        "required": c.required, "computed": c.computed,
                        "method": c.method, "ok": c.ok,
                        **{k: _fmt(v) for k, v in c.extras.items()}}
                       for c in self.checks],
        }


def _fmt(v):
    if isinstance(v, Fraction):
        return format_scalar(v)
    if isinstance(v, float):
        return f"{v:.15g}"
    if isinstance(v, (list, tuple)):
        return [_fmt(x) for x in v]
    if isinstance(v, frozenset):
        return sorted(v)
    return v


def _complement(mass: Scalar) -> Scalar:
    """1 - mass, clamped at 0 against float rounding on the float backend."""
    rest = 1 - mass
    if not is_exact(rest) and rest < 0:
        return 0.0
    return rest


def _ceil_scalar(x: Scalar) -> int:
    return math.ceil(x) if is_exact(x) else math.ceil(x - 1e-12)


def _floor_scalar(x: Scalar) -> int:
    return math.floor(x) if is_exact(x) else math.floor(x + 1e-12)


# ---------------------------------------------------------------------------
# the concentration-based transitivity witness (odometer)
# ---------------------------------------------------------------------------

@dataclass
class TransitivityPlan:
    """Index subsequence and per-index optimal-drop data for the witness."""

    offset: int
    count: int
    indices: tuple
    drops: tuple
    sets: tuple            # optimal D per selected index
    shifts: tuple          # optimal per-index digit shift
    gap_sum: Scalar        # condition (a): sum of gap tail-weight products
    hoeffding_bound: float  # condition (b): exp(-(2/9n) (sum drops)^2)

    @property
    def depth(self) -> int:
        return self.indices[-1]


def find_transitivity_params(spec: SystemSpec, epsilon: float,
                             horizon: int = 400, beta: Optional[float] = None,
                             depth_cap: int = 4000) -> TransitivityPlan:
    """Search offsets/lengths of the index rule i_s = floor((offset+s)^beta).

    Conditions: (a) the summed gap products of top-symbol weights stay below
    epsilon; (b) the concentration bound exp(-(2/9n)(sum of drops)^2) falls
    below epsilon.  Raises StrategyInfeasible when no pair works.
    """
    if spec.kind != ODOMETER:
        raise ValueError("the transitivity witness drives the odometer")
    beta = 1.5 if beta is None else beta
    raw = []
    seen = set()
    s = 1
    while len(raw) < horizon:
        i = math.floor(s ** beta)
        s += 1
        if i < 1 or i in seen:
            continue
        seen.add(i)
        if i > depth_cap:
            break
        raw.append(i)
    drop_cache: dict[int, tuple] = {}

    def drop(i):
        if i not in drop_cache:
            drop_cache[i] = theta_witness(spec, i)
        return drop_cache[i]

    top_cache: dict[int, Scalar] = {}

    def top_weight(i):
        if i not in top_cache:
            top_cache[i] = spec.mu_weight(i, spec.m(i) - 1)
        return top_cache[i]

    usable = [i for i in raw if drop(i)[0] > 0]
    if len(usable) >= 2:
        gap_products = []
        for a, b in zip(usable, usable[1:]):
            prod = Fraction(1)
            for r in range(a + 1, b):
                prod = prod * top_weight(r)
            gap_products.append(float(prod))   # empty gap stays at mass 1
        drop_floats = [float(drop(i)[0]) for i in usable]
        for offset in range(len(usable) - 1):
            gap_sum = 0.0
            drop_sum = drop_floats[offset]
            for t in range(offset + 1, len(usable)):
                gap_sum += gap_products[t - 1]
                if gap_sum >= epsilon:
                    break
                drop_sum += drop_floats[t]
                count = t - offset + 1
                bound = math.exp(-(2.0 / (9 * count)) * drop_sum ** 2)
                if bound < epsilon:
                    chosen = usable[offset:t + 1]
                    exact_gap = Fraction(0)
                    for a, b in zip(chosen, chosen[1:]):
                        prod = Fraction(1)
                        for r in range(a + 1, b):
                            prod = prod * top_weight(r)
                        exact_gap = exact_gap + prod
                    return TransitivityPlan(
                        offset=offset, count=count, indices=tuple(chosen),
                        drops=tuple(drop(i)[0] for i in chosen),
                        sets=tuple(drop(i)[1] for i in chosen),
                        shifts=tuple(drop(i)[2] for i in chosen),
                        gap_sum=exact_gap, hoeffding_bound=bound)
    raise StrategyInfeasible(
        f"no (offset, length) met both smallness conditions below eps={epsilon}")


def _pair_sum_distribution(pairs: Sequence[tuple]) -> dict:
    """Joint law of (sum X_s, sum Y_s) for independent {0,1}^2 pairs.

    Each entry of `pairs` is (p11, p10, p01, p00).  Dict keyed by (u, v).
    """
    zero_like = pairs[0][0] * 0
    dist = {(0, 0): zero_like + 1}
    for p11, p10, p01, p00 in pairs:
        nxt: dict = {}
        for (u, v), w in dist.items():
            if p11:
                nxt[(u + 1, v + 1)] = nxt.get((u + 1, v + 1), zero_like) + w * p11
            if p10:
                nxt[(u + 1, v)] = nxt.get((u + 1, v), zero_like) + w * p10
            if p01:
                nxt[(u, v + 1)] = nxt.get((u, v + 1), zero_like) + w * p01
            if p00:
                nxt[(u, v)] = nxt.get((u, v), zero_like) + w * p00
        dist = nxt
    return dist


def transitivity_witness(spec: SystemSpec, epsilon: float,
                         horizon: int = 400, beta: Optional[float] = None,
                         trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED,
                         cell_cap: int = EXHAUSTIVE_CELL_CAP) -> WitnessReport:
    """Build the concentration witness (B, k) and verify it.

    B keeps the points whose selected-coordinate hit counts concentrate, minus
    the all-top bands between consecutive selected indices; k shifts each
    selected digit by its optimal-drop amount.  mu(B) > 1 - 3 eps is verified
    through the independence product; disjointness of B from its k-th image is
    checked exhaustively within the cell cap and by seeded sampling beyond.
    """
    plan = find_transitivity_params(spec, epsilon, horizon=horizon, beta=beta)
    report = WitnessReport(construction="transitivity",
                           params={"epsilon": epsilon, "offset": plan.offset,
                                   "count": plan.count,
                                   "indices": list(plan.indices),
                                   "seed": seed, "trials": trials})
    report.add("smallness-gaps", "sum of gap products < eps", epsilon,
               plan.gap_sum, "exact", float(plan.gap_sum) < epsilon)
    report.add("smallness-concentration", "exp bound < eps", epsilon,
               plan.hoeffding_bound, "exact", plan.hoeffding_bound < epsilon)

    pairs = []
    t_x = None
    t_y = None
    for i, D, k in zip(plan.indices, plan.sets, plan.shifts):
        m = spec.m(i)
        shifted = frozenset((x + k) % m for x in D)
        p11 = spec.subset_measure(i, D & shifted)
        p10 = spec.subset_measure(i, D - shifted)
        p01 = spec.subset_measure(i, shifted - D)
        p00 = _complement(p11 + p10 + p01)
        pairs.append((p11, p10, p01, p00))
        mu_d = p11 + p10
        mu_shift = p11 + p01
        drop = mu_d - mu_shift
        tx_term = mu_d - drop / 3
        ty_term = mu_shift + drop / 3
        t_x = tx_term if t_x is None else t_x + tx_term
        t_y = ty_term if t_y is None else t_y + ty_term
    ux_min = _ceil_scalar(t_x)
    uy_max = _floor_scalar(t_y)

    dist = _pair_sum_distribution(pairs)
    mu_xy = sum((w for (u, v), w in dist.items()
                 if u >= ux_min and v <= uy_max), pairs[0][0] * 0)
    band_factor = None
    band_measures = []
    for a, b in zip(plan.indices, plan.indices[1:]):
        prod = Fraction(1)
        for r in range(a + 1, b):
            prod = prod * spec.mu_weight(r, spec.m(r) - 1)
        band_measures.append(prod)
        band_factor = (1 - prod) if band_factor is None else band_factor * (1 - prod)
    mu_b = mu_xy * band_factor
    report.add("mass", "mu(B) > 1 - 3 eps", 1 - 3 * epsilon, mu_b,
               "independence-product", float(mu_b) > 1 - 3 * epsilon,
               concentration_mass=_fmt(mu_xy),
               band_measures=[_fmt(x) for x in band_measures])

    radix = spec.radix_weights(plan.depth)
    k_iterate = sum(ks * radix[i - 1]
                    for i, ks in zip(plan.indices, plan.shifts))
    report.params["k"] = k_iterate

    membership = _TransitivityMembership(spec, plan, ux_min, uy_max)
    cells = spec.cell_count(plan.depth)
    if cells <= cell_cap:
        violations = _exhaustive_disjointness(spec, membership, plan.depth,
                                              k_iterate)
        report.add("disjoint", "B and o^k(B) meet nowhere", 0, violations,
                   "exact", violations == 0, cells=cells)
    else:
        violations, examples = _sampled_disjointness(spec, membership,
                                                     plan.depth, k_iterate,
                                                     trials, seed)
        report.add("disjoint", "B and o^k(B) meet nowhere", 0, violations,
                   "sampled", violations == 0, seed=seed, trials=trials,
                   violating_points=examples[:3])
    report.objects.update(plan=plan, thresholds=(t_x, t_y),
                          int_thresholds=(ux_min, uy_max), k=k_iterate,
                          mu_b=mu_b, pairs=pairs)
    return report


class _TransitivityMembership:
    """Vectorized membership test for the concentration witness set B."""

    def __init__(self, spec: SystemSpec, plan: TransitivityPlan,
                 ux_min: int, uy_max: int):
        self.spec = spec
        self.plan = plan
        self.ux_min = ux_min
        self.uy_max = uy_max
        self.sel = [i - 1 for i in plan.indices]     # 0-based columns
        self.in_d = []
        self.in_shift = []
        for i, D, k in zip(plan.indices, plan.sets, plan.shifts):
            m = spec.m(i)
            d_mask = np.zeros(m, dtype=bool)
            d_mask[list(D)] = True
            s_mask = np.zeros(m, dtype=bool)
            s_mask[[(x + k) % m for x in D]] = True
            self.in_d.append(d_mask)
            self.in_shift.append(s_mask)
        self.bands = []
        for a, b in zip(plan.indices, plan.indices[1:]):
            cols = list(range(a, b - 1))             # coordinates a+1..b-1
            tops = np.array([spec.m(r + 1) - 1 for r in cols], dtype=np.int64)
            self.bands.append((cols, tops))

    def __call__(self, digits: np.ndarray) -> np.ndarray:
        x_sum = np.zeros(len(digits), dtype=np.int64)
        y_sum = np.zeros(len(digits), dtype=np.int64)
        for col, d_mask, s_mask in zip(self.sel, self.in_d, self.in_shift):
            col_digits = digits[:, col]
            x_sum += d_mask[col_digits]
            y_sum += s_mask[col_digits]
        inside = (x_sum >= self.ux_min) & (y_sum <= self.uy_max)
        for cols, tops in self.bands:
            if not cols:
                continue
            in_band = np.all(digits[:, cols] == tops, axis=1)
            inside &= ~in_band
        return inside


def _digit_matrix_from_indices(spec: SystemSpec, depth: int,
                               idx: np.ndarray) -> np.ndarray:
    out = np.empty((len(idx), depth), dtype=np.int64)
    rem = idx.copy()
    for i in range(1, depth + 1):
        m = spec.m(i)
        out[:, i - 1] = rem % m
        rem //= m
    return out


def _add_iterate(spec: SystemSpec, digits: np.ndarray, k: int) -> np.ndarray:
    depth = digits.shape[1]
    kd = spec.digits_of(k, depth)
    out = np.empty_like(digits)
    carry = np.zeros(len(digits), dtype=np.int64)
    for i in range(1, depth + 1):
        m = spec.m(i)
        t = digits[:, i - 1] + kd[i - 1] + carry
        out[:, i - 1] = t % m
        carry = (t >= m).astype(np.int64)
    return out


def _exhaustive_disjointness(spec, membership, depth, k) -> int:
    cells = spec.cell_count(depth)
    violations = 0
    chunk = 1 << 18
    # mark membership cell by cell; the image cell of c is (c + k) mod M
    in_b = np.zeros(cells, dtype=bool)
    for start in range(0, cells, chunk):
        idx = np.arange(start, min(start + chunk, cells), dtype=np.int64)
        digits = _digit_matrix_from_indices(spec, depth, idx)
        in_b[idx] = membership(digits)
    image = (np.nonzero(in_b)[0] + k) % cells
    violations = int(np.count_nonzero(in_b[image]))
    return violations


def _sampled_disjointness(spec, membership, depth, k, trials, seed,
                          chunk: int = 100_000):
    """Seeded sampling from mu; returns (violations, example points)."""
    seq = np.random.SeedSequence(seed)
    n_chunks = (trials + chunk - 1) // chunk
    child_seeds = seq.spawn(n_chunks)
    cdfs = []
    for i in range(1, depth + 1):
        w = np.array([float(x) for x in spec.mu(i)], dtype=np.float64)
        cdfs.append(np.cumsum(w))
    violations = 0
    examples = []
    done = 0
    for c in range(n_chunks):
        size = min(chunk, trials - done)
        done += size
        rng = np.random.Generator(np.random.PCG64(child_seeds[c]))
        digits = np.empty((size, depth), dtype=np.int64)
        u = rng.random((size, depth))
        for i in range(depth):
            digits[:, i] = np.searchsorted(cdfs[i], u[:, i], side="right")
        in_b = membership(digits)
        if not in_b.any():
            continue
        sub = digits[in_b]
        image = _add_iterate(spec, sub, k)
        bad = membership(image)
        n_bad = int(np.count_nonzero(bad))
        violations += n_bad
        if n_bad and len(examples) < 3:
            examples.extend(sub[bad][:3 - len(examples)].tolist())
    return violations, examples


# ---------------------------------------------------------------------------
# mixing witness (odometer)
# ---------------------------------------------------------------------------

def mixing_witness(spec: SystemSpec, epsilon: float, k: int,
                   kappa_scan: int = 40,
                   cell_cap: int = EXHAUSTIVE_CELL_CAP) -> WitnessReport:
    """Two-coordinate witness disjoint from its k-th image, k past the burn-in.

    Needs every shift-disjoint optimum at the top two digit positions of k to
    weigh at least 1 - eps/3; the burn-in threshold k_0 sums the radix weights
    up to the first index from which that holds.
    """
    if spec.kind != ODOMETER:
        raise ValueError("mixing witness drives the odometer")
    need = 1 - Fraction(epsilon).limit_denominator(10 ** 9) / 3
    kappas = {}
    i0 = None
    for i in range(1, kappa_scan + 1):
        kappas[i] = kappa_seq(spec, i)
        if float(kappas[i]) < float(need):
            i0 = None
        elif i0 is None:
            i0 = i
    if i0 is None:
        raise HypothesisUnavailable(
            f"no suffix of indices <= {kappa_scan} keeps the shift-disjoint "
            f"optimum above 1 - eps/3 = {float(need):.6g}")
    radix = spec.radix_weights(i0 + 1)
    k0 = sum(radix[i - 1] for i in range(1, i0 + 1))
    report = WitnessReport(construction="mixing",
                           params={"epsilon": epsilon, "k": k, "i0": i0,
                                   "k0": k0})
    if k < k0:
        raise HypothesisUnavailable(f"k={k} is below the burn-in k_0={k0}")

    # top digit position of k
    digits = []
    rem = k
    i = 1
    while rem > 0:
        rem, d = divmod(rem, spec.m(i))
        digits.append(d)
        i += 1
    l = max(t + 1 for t, d in enumerate(digits) if d > 0)
    k_l = digits[l - 1]
    m_l = spec.m(l)

    v1, d_prime = disjoint_shift_set_zplus(spec, l, k_l)
    if k_l == m_l - 1:
        d_second = frozenset(range(m_l))
        v2 = Fraction(1)
    else:
        v2, d_second = disjoint_shift_set_zplus(spec, l, k_l + 1)
    d_l = d_prime & d_second
    v3, d_next = disjoint_shift_set_zplus(spec, l + 1, 1)
    for name, val in (("top-digit-set", v1), ("top-digit-plus-one-set", v2),
                      ("next-coordinate-set", v3)):
        report.add(name, "optimal mass >= 1 - eps/3", float(need), val,
                   "exact", float(val) >= float(need) - 1e-15)
    if not report.passed:
        raise HypothesisUnavailable(
            "shift-disjoint optima at the top digits fall below 1 - eps/3")

    factors = [frozenset(range(spec.m(i))) for i in range(1, l - 1 + 1)]
    factors += [d_l, d_next]
    B = DepthSet.product_form(spec, factors)
    mu_b = set_measure(spec, B)
    report.add("mass", "mu(B) >= 1 - eps", 1 - epsilon, mu_b, "exact",
               float(mu_b) >= 1 - epsilon - 1e-15)

    cells = spec.cell_count(l + 1)
    if cells <= cell_cap:
        b_cells = B.to_cells()
        image = {(c + k) % cells for c in b_cells}
        overlap = len(image & b_cells)
        report.add("disjoint", "o^k(B) and B meet nowhere", 0, overlap,
                   "exact", overlap == 0, cells=cells)
    else:
        report.add("disjoint", "o^k(B) and B meet nowhere", 0, "not-enumerated",
                   "proof-bound", True,
                   note="carry case analysis; truncation beyond the cell cap")
    report.objects.update(B=B, l=l, k_l=k_l, D_l=d_l, D_next=d_next,
                          kappas=kappas)
    return report


# ---------------------------------------------------------------------------
# frequent-hypercyclicity witness (odometer)
# ---------------------------------------------------------------------------

def fhc_witness(spec: SystemSpec, epsilon: float, kappa_param,
                f: Optional[SimpleFunction] = None,
                f_symbols: Optional[Sequence[int]] = None,
                horizon: int = 400, spot_checks: int = 1000,
                seed: int = DEFAULT_SEED,
                k_budget: int = 4096) -> WitnessReport:
    """Periodic-block witness: pullbacks stay small for kd steps, then large.

    Finds a depth N where the top-interval mass omega_{N-1}(kappa) and the
    split-level defect 1 - gamma_N both fall below eps/2, builds the cylinder
    over the shifted optimal set, and verifies the two pullback families by
    k-uniform certified bounds plus exact transports (all k within budget,
    else a seeded spot sample).  When a periodic function f is supplied, the
    function-level inequalities for g = 1_B f are verified exactly at p = 1.
    """
    if spec.kind != ODOMETER:
        raise ValueError("this witness drives the odometer")
    kappa_param = Fraction(kappa_param)
    delta_target = epsilon / 2
    found = None
    for i in range(2, horizon + 1):
        om = omega(spec, i - 1, kappa_param)
        gval, D, j = gamma_witness(spec, i)
        if max(float(om), 1 - float(gval)) < delta_target:
            found = (i, om, gval, D, j)
            break
    if found is None:
        raise HypothesisUnavailable(
            f"no index <= {horizon} has omega and split defect below eps/2")
    N, om, gval, D, j = found
    m_n = spec.m(N)
    radix = spec.radix_weights(N + 1)
    n_iter = j * radix[N - 1]
    d_period = radix[N]

    report = WitnessReport(construction="fhc",
                           params={"epsilon": epsilon,
                                   "kappa": kappa_param, "N": N, "j": j,
                                   "n": n_iter, "d": d_period, "seed": seed})

    if f is None and f_symbols is not None:
        f = SimpleFunction.indicator(DepthSet.basic_cylinder(spec, f_symbols))
    if f is not None:
        per = period_of(spec, f)
        if n_iter % per != 0:
            kappa_param = kappa_param / 2
            n_iter = ((n_iter // per) + 1) * per
            report.params.update(kappa=kappa_param, n=n_iter,
                                 period_adjustment=True, f_period=per)
        else:
            report.params.update(period_adjustment=False, f_period=per)

    shifted = frozenset((x + j) % m_n for x in D)
    full = [frozenset(range(spec.m(i))) for i in range(1, N)]
    B = DepthSet.product_form(spec, full + [shifted])
    B_prime = DepthSet.product_form(spec, full + [D])
    mu_shift = spec.subset_measure(N, shifted)
    mu_d = spec.subset_measure(N, D)

    # range validity: every k <= kappa d has no digit at position N
    range_ok = kappa_param * spec.m(N - 1) * m_n < spec.m(N - 1)
    report.add("kappa-range", "kappa m_{N-1} m_N < m_{N-1}",
               spec.m(N - 1), kappa_param * spec.m(N - 1) * m_n,
               "exact", bool(range_ok))

    small_bound = mu_shift + om
    large_bound = mu_d - om
    report.add("pullback-small-all-k",
               "mu(o^-k(B)) <= mu_N(D+j) + omega <= eps for k <= kappa d",
               epsilon, small_bound, "proof-bound",
               float(small_bound) <= epsilon + 1e-15)
    report.add("pullback-large-all-k",
               "mu(o^-(n+k)(B)) >= mu_N(D) - omega >= 1 - eps for k <= kappa d",
               1 - epsilon, large_bound, "proof-bound",
               float(large_bound) >= 1 - epsilon - 1e-15)
    report.add("fixed-by-d", "o^-d(B) = B (d is the full block size)", 0, 0,
               "exact", d_period % radix[N] == 0)

    kd = int(kappa_param * d_period)
    if kd + 1 <= k_budget:
        ks = list(range(kd + 1))
        coverage = "all-k"
    else:
        rng = np.random.Generator(np.random.PCG64(seed))
        ks = sorted({0, 1, kd} | set(
            int(x) for x in rng.integers(0, kd + 1, size=spot_checks)))
        coverage = f"seeded-spot({len(ks)})"
    small_ok = large_ok = agree_ok = True
    worst_small = None
    worst_large = None
    for k in ks:
        small = odometer_pullback_measure(spec, B, k)
        large = odometer_pullback_measure(spec, B, n_iter + k)
        if worst_small is None or small > worst_small:
            worst_small = small
        if worst_large is None or large < worst_large:
            worst_large = large
        small_ok &= float(small) <= epsilon + 1e-15
        large_ok &= float(large) >= 1 - epsilon - 1e-15
        agree_ok &= (float(small) <= float(small_bound) + 1e-15
                     and float(large) >= float(large_bound) - 1e-15)
    report.add("pullback-small-transport", "exact transports <= eps",
               epsilon, worst_small, "exact", small_ok, coverage=coverage)
    report.add("pullback-large-transport", "exact transports >= 1 - eps",
               1 - epsilon, worst_large, "exact", large_ok, coverage=coverage)
    report.add("bound-vs-transport", "certified bounds dominate transports",
               "bounds", "ok" if agree_ok else "violated", "exact", agree_ok)

    if f is not None:
        g_small_ok = g_large_ok = True
        worst_g_small = worst_g_large = None
        f_factors = _indicator_factors(spec, f)
        bf = DepthSet.product_form(spec, _merge_factors(spec, f_factors,
                                                        N, shifted))
        bprime_f = DepthSet.product_form(spec, _merge_factors(spec, f_factors,
                                                              N, D))
        f_set = DepthSet.product_form(
            spec, f_factors + [frozenset(range(spec.m(r)))
                               for r in range(len(f_factors) + 1, N + 1)])
        for k in ks:
            val = odometer_pullback_measure(spec, bf, k)
            if worst_g_small is None or val > worst_g_small:
                worst_g_small = val
            g_small_ok &= float(val) <= epsilon + 1e-15
            # C^(n+k) g is the indicator of o^-k(B' and F) because o^-n
            # fixes F (n is a multiple of its period) and sends B to B'
            f_k = odometer_pullback_measure(spec, f_set, k)
            fb_k = odometer_pullback_measure(spec, bprime_f, k)
            dist = f_k - fb_k
            if worst_g_large is None or dist > worst_g_large:
                worst_g_large = dist
            g_large_ok &= float(dist) <= epsilon + 1e-15
        report.add("function-small", "||C^k g||_1 <= eps for k <= kappa d",
                   epsilon, worst_g_small, "exact", g_small_ok,
                   coverage=coverage)
        report.add("function-close", "||C^(n+k) g - C^k f||_1 <= eps",
                   epsilon, worst_g_large, "exact", g_large_ok,
                   coverage=coverage)
    report.objects.update(B=B, B_prime=B_prime, D=D, shifted=shifted, N=N,
                          n=n_iter, d=d_period, ks=ks)
    return report


def _indicator_factors(spec: SystemSpec, f: SimpleFunction) -> list:
    """Factors of the basic cylinder an indicator f was built on."""
    tr = build_truncation(spec, f.depth)
    cells = [c for c, v in enumerate(f.values) if v != 0]
    if len(cells) != 1 or any(v not in (0, 1) for v in f.values):
        raise ValueError("function-level checks expect a basic cylinder indicator")
    return [frozenset({d}) for d in tr.digits(cells[0])]


def _merge_factors(spec: SystemSpec, f_factors: list, N: int,
                   top: frozenset) -> list:
    out = list(f_factors)
    for r in range(len(f_factors) + 1, N):
        out.append(frozenset(range(spec.m(r))))
    out.append(top)
    return out


# ---------------------------------------------------------------------------
# counting witness for upper-density frequent hypercyclicity
# ---------------------------------------------------------------------------

def ufhc_count(spec: SystemSpec, epsilon: float, kappa_param=Fraction(1, 5),
               horizon: int = 200, B: Optional[DepthSet] = None,
               n_iter: Optional[int] = None,
               count_window: Optional[int] = None) -> WitnessReport:
    """Count iterates whose pullback of B nearly fills the space.

    Without a supplied B, scans for a depth where the tilted-interval
    inequality holds alongside the split pair and uses that cylinder.  The
    achieved count fraction is compared against kappa/(1+kappa).
    """
    kappa_param = Fraction(kappa_param)
    report = WitnessReport(construction="ufhc-count",
                           params={"epsilon": epsilon, "kappa": kappa_param})
    if B is None:
        delta_target = epsilon / 2
        found = None
        for i in range(2, horizon + 1):
            gval, D, j = gamma_witness(spec, i)
            if 1 - float(gval) >= delta_target:
                continue
            m_prev = spec.m(i - 1)
            lo = math.ceil(m_prev - kappa_param * j * m_prev)
            tilt = spec.interval_measure(i - 1, lo, m_prev - 1)
            if float(tilt) < delta_target:
                found = (i, D, j, tilt)
                break
        if found is None:
            raise HypothesisUnavailable(
                "no depth satisfied the tilted-interval inequality")
        i, D, j, tilt = found
        m_i = spec.m(i)
        shifted = frozenset((x + j) % m_i for x in D)
        full = [frozenset(range(spec.m(r))) for r in range(1, i)]
        B = DepthSet.product_form(spec, full + [shifted])
        n_iter = j * spec.radix_weights(i)[i - 1]
        report.params.update(depth=i, j=j, n=n_iter)
        report.add("tilted-interval", "interval mass < eps/2", delta_target,
                   tilt, "exact", float(tilt) < delta_target)
        report.add("set-small", "mu(B) <= eps", epsilon, set_measure(spec, B),
                   "exact", float(set_measure(spec, B)) <= epsilon + 1e-15)
    if n_iter is None:
        raise ValueError("n_iter is required when B is supplied")
    m_count = count_window or math.ceil((1 + kappa_param) * n_iter)
    qualifying = []
    for k in range(1, m_count + 1):
        mass = odometer_pullback_measure(spec, B, k) if spec.kind == ODOMETER \
            else set_measure(spec, translation_set_shift(spec, B, k))
        if float(1 - mass) <= epsilon + 1e-15:
            qualifying.append(k)
    achieved = Fraction(len(qualifying), m_count)
    predicted = kappa_param / (1 + kappa_param)
    slack = Fraction(2, m_count)
    report.add("count", "achieved fraction >= kappa/(1+kappa) - slack",
               predicted - slack, achieved, "exact",
               achieved >= predicted - slack,
               count=len(qualifying), window=m_count)
    report.add("fraction-sane", "achieved fraction <= 1", 1, achieved,
               "exact", achieved <= 1)
    report.objects.update(B=B, n=n_iter, qualifying=qualifying,
                          window=m_count, achieved=achieved,
                          predicted=predicted)
    return report


# ---------------------------------------------------------------------------
# runaway products (supercyclicity)
# ---------------------------------------------------------------------------

def src_evaluate(spec: SystemSpec, B: DepthSet, n: int) -> dict:
    """The runaway product mu(map^n(B)) * mu(map^-n(B)), exactly."""
    from .maps import forward_image_measure, preimage_measure
    fwd = forward_image_measure(spec, B, n)
    back = preimage_measure(spec, B, n)
    return {"forward": fwd, "backward": back, "product": fwd * back}


def _cylinder_candidates(spec: SystemSpec, i: int):
    """Prefix intervals, suffix intervals and the optimal-drop set at one site."""
    m = spec.m(i)
    for t in range(1, m):
        yield frozenset(range(t))            # prefix interval
        yield frozenset(range(t, m))         # suffix interval
    _, D, _ = theta_witness(spec, i)
    if D:
        yield D


def src_search(spec: SystemSpec, epsilon: float, depth_horizon: int = 8,
               iterate_horizon: int = 64,
               cell_cap: int = EXHAUSTIVE_CELL_CAP) -> WitnessReport:
    """Scan the product-cylinder family for a runaway pair (B, n).

    Success requires the complement of B to be small, B to miss its n-th
    image, and the runaway product to fall below eps; the two forms are
    checked independently.  Falls back to the concentration witness for
    odometers, and raises NotFoundWithinHorizon when everything fails.
    """
    report = WitnessReport(construction="src-search",
                           params={"epsilon": epsilon,
                                   "depth_horizon": depth_horizon,
                                   "iterate_horizon": iterate_horizon})

    def try_pair(B: DepthSet, n: int, method: str) -> bool:
        comp = 1 - set_measure(spec, B)
        if float(comp) >= epsilon:
            return False
        if spec.kind == TRANSLATION:
            shifted_back = translation_set_shift(spec, B, -n)
            inter = [a & b for a, b in zip(B.factors, shifted_back.factors)]
            disjoint = any(len(s) == 0 for s in inter)
        else:
            cells = spec.cell_count(B.depth)
            if cells > cell_cap:
                return False
            b_cells = B.to_cells()
            disjoint = not ({(c + n) % cells for c in b_cells} & b_cells)
        if not disjoint:
            return False
        vals = src_evaluate(spec, B, n)
        if float(vals["product"]) >= epsilon:
            return False
        report.add("complement-small", "mu(complement of B) < eps", epsilon,
                   comp, "exact", True)
        report.add("disjoint", "B misses its n-th image", 0, 0, method, True)
        report.add("runaway-product", "mu(map^n B) mu(map^-n B) < eps",
                   epsilon, vals["product"], "exact", True,
                   forward=_fmt(vals["forward"]), backward=_fmt(vals["backward"]))
        report.objects.update(B=B, n=n)
        report.params.update(n=n, depth=B.depth)
        return True

    for depth in range(1, depth_horizon + 1):
        for s in _cylinder_candidates(spec, depth):
            full = [frozenset(range(spec.m(r))) for r in range(1, depth)]
            B = DepthSet.product_form(spec, full + [s])
            if spec.kind == TRANSLATION:
                iter_set = range(1, iterate_horizon + 1)
            else:
                base = spec.radix_weights(depth)[depth - 1]
                iter_set = [j * base for j in range(1, spec.m(depth))]
            for n in iter_set:
                if n > iterate_horizon and spec.kind == TRANSLATION:
                    break
                if try_pair(B, n, "exact"):
                    return report
    if spec.kind == ODOMETER:
        try:
            tw = transitivity_witness(spec, epsilon / 3, trials=100_000)
        except StrategyInfeasible:
            tw = None
        if tw is not None and tw.passed:
            mu_b = tw.objects["mu_b"]
            comp = 1 - mu_b
            product_bound = comp  # image of B avoids B, so mu(image) <= comp
            report.add("complement-small", "mu(complement of B) < eps",
                       epsilon, comp, "independence-product",
                       float(comp) < epsilon)
            report.add("disjoint", "B misses its k-th image", 0,
                       tw.check("disjoint").computed,
                       tw.check("disjoint").method,
                       tw.check("disjoint").ok)
            report.add("runaway-product", "product < eps (via disjointness)",
                       epsilon, product_bound, "proof-bound",
                       float(product_bound) < epsilon)
            report.objects.update(inner=tw, n=tw.objects["k"])
            report.params.update(n=tw.objects["k"], route="transitivity")
            if report.passed:
                return report
    raise NotFoundWithinHorizon(
        "no candidate earned the runaway product below eps")


# ---------------------------------------------------------------------------
# translation-side witnesses
# ---------------------------------------------------------------------------

def _bounded_alphabet(spec: SystemSpec, probe: int = 64) -> Optional[int]:
    """lcm of the alphabet sizes when the rule is structurally bounded."""
    fam = spec.alphabet.family
    if fam == "constant":
        return int(spec.alphabet.params["m"])
    if fam == "list" and spec.alphabet.params.get("repeat", "cycle") == "cycle":
        return math.lcm(*(int(x) for x in spec.alphabet.params["list"]))
    if fam == "cycle-range":
        lo = int(spec.alphabet.params["lo"])
        hi = int(spec.alphabet.params["hi"])
        return math.lcm(*range(lo, hi + 1))
    return None


def translation_witnesses(spec: SystemSpec, which: str,
                          params: Optional[dict] = None) -> WitnessReport:
    """Dispatch the translation/shift constructions by name.

    which: "single-site", "hoeffding", "fhcsum", "ufhcsum", "shift-fhc".
    """
    params = dict(params or {})
    if which == "shift-fhc":
        return shift_fhc_witness(spec, **params)
    if spec.kind != TRANSLATION:
        raise ValueError("translation witness on a non-translation spec")
    order = _bounded_alphabet(spec)
    if order is not None:
        raise HypothesisUnavailable(
            f"degenerate: the translation has finite order {order} "
            "(bounded alphabets), every witness family fails")
    if which == "single-site":
        return _single_site_witness(spec, **params)
    if which == "hoeffding":
        return _translation_hoeffding_witness(spec, **params)
    if which == "fhcsum":
        return _fhcsum_witness(spec, **params)
    if which == "ufhcsum":
        return _ufhcsum_witness(spec, **params)
    raise ValueError(f"unknown translation construction {which!r}")


def _candidate_shifts(m: int) -> list:
    """Small set of shifts worth trying at one site (kept in [1, m-1])."""
    cands = {1, 2, m - 1, m // 2, m // 3, m // 5, m // 8,
             m - m // 3, m - m // 5}
    if m <= 64:
        cands.update(range(1, m))
    return sorted(c for c in cands if 1 <= c <= m - 1)


def _single_site_witness(spec: SystemSpec, epsilon: float = 0.1,
                         horizon: int = 24) -> WitnessReport:
    report = WitnessReport(construction="translation-single-site",
                           params={"epsilon": epsilon, "horizon": horizon})
    for i in range(1, horizon + 1):
        m = spec.m(i)
        best = None
        for n in _candidate_shifts(m):
            val, D = alpha_shift_witness(spec, i, n)
            if best is None or val > best[0]:
                best = (val, D, n)
        val, D, n = best
        if float(val) < 1 - epsilon:
            continue
        shifted = frozenset((x + n) % m for x in D)
        full = [frozenset(range(spec.m(r))) for r in range(1, i)]
        B = DepthSet.product_form(spec, full + [shifted])
        report.params.update(site=i, n=n)
        report.add("site-mass", "mu_i(D) >= 1 - eps", 1 - epsilon, val,
                   "exact", True)
        overlap = D & frozenset((x + n) % m for x in D)
        report.add("site-disjoint", "(D + n) misses D", 0, len(overlap),
                   "exact", len(overlap) == 0)
        back = set_measure(spec, translation_set_shift(spec, B, n))
        report.add("pullback-large", "mu(t^-n(B)) >= 1 - eps", 1 - epsilon,
                   back, "exact", float(back) >= 1 - epsilon - 1e-12)
        report.add("set-small", "mu(B) <= eps", epsilon, set_measure(spec, B),
                   "exact", float(set_measure(spec, B)) <= epsilon + 1e-12)
        report.objects.update(B=B, D=D, site=i, n=n)
        return report
    raise HypothesisUnavailable(
        f"no site <= {horizon} reaches shift-disjoint mass 1 - eps")


def _translation_hoeffding_witness(spec: SystemSpec, sites: Sequence[int],
                                   n: int, epsilon: float = 0.25) -> WitnessReport:
    """Threshold witness across several sites for one common shift n."""
    report = WitnessReport(construction="translation-hoeffding",
                           params={"sites": list(sites), "n": n,
                                   "epsilon": epsilon})
    pairs = []
    t_x = t_y = None
    drop_total = None
    for i in sites:
        m = spec.m(i)
        val, D, _ = theta_witness(spec, i, shift=n % m)
        shifted = frozenset((x + n) % m for x in D)
        p11 = spec.subset_measure(i, D & shifted)
        p10 = spec.subset_measure(i, D - shifted)
        p01 = spec.subset_measure(i, shifted - D)
        p00 = _complement(p11 + p10 + p01)
        pairs.append((p11, p10, p01, p00))
        mu_d, mu_s = p11 + p10, p11 + p01
        t_x = (mu_d - val / 3) if t_x is None else t_x + mu_d - val / 3
        t_y = (mu_s + val / 3) if t_y is None else t_y + mu_s + val / 3
        drop_total = val if drop_total is None else drop_total + val
    report.add("separation", "total drop > 0 (forces disjointness)", 0,
               drop_total, "exact", float(drop_total) > 0)
    n_sites = len(pairs)
    floor = 1 - 2 * math.exp(-(2.0 / (9 * n_sites)) * float(drop_total) ** 2)
    ux_min = _ceil_scalar(t_x)
    uy_max = _floor_scalar(t_y)
    dist = _pair_sum_distribution(pairs)
    mu_b = sum((w for (u, v), w in dist.items()
                if u >= ux_min and v <= uy_max), pairs[0][0] * 0)
    report.add("mass-vs-floor", "exact mu(B) >= concentration floor", floor,
               mu_b, "independence-product", float(mu_b) >= floor - 1e-12)
    report.add("mass-target", "mu(B) >= 1 - 2 eps", 1 - 2 * epsilon, mu_b,
               "independence-product", float(mu_b) >= 1 - 2 * epsilon - 1e-12)
    report.objects.update(thresholds=(t_x, t_y), mu_b=mu_b, pairs=pairs,
                          floor=floor)
    return report


def _fhcsum_witness(spec: SystemSpec, epsilon: float = 0.2,
                    horizon: int = 16) -> WitnessReport:
    """Flipped per-site pullback family: big for a sixth of the order, then small."""
    report = WitnessReport(construction="translation-fhcsum",
                           params={"epsilon": epsilon, "horizon": horizon})
    for i in range(3, horizon + 1):
        m = spec.m(i)
        n_i = m // 5
        if n_i < 1:
            continue
        head = m - 2 * n_i
        D = frozenset(range(head, m))    # middle ramp plus tail block
        mass = spec.interval_measure(i, head, m - 1)
        if float(mass) < 1 - epsilon:
            continue
        budget = m // 6
        ok_big = ok_small = True
        worst_big, worst_small = None, None
        for k in range(0, budget + 1):
            big = _shifted_interval_measure(spec, i, head - k, m - 1 - k)
            small = _shifted_interval_measure(spec, i, head - 2 * n_i - k,
                                              m - 1 - 2 * n_i - k)
            if worst_big is None or big < worst_big:
                worst_big = big
            if worst_small is None or small > worst_small:
                worst_small = small
            ok_big &= float(big) >= 1 - epsilon - 1e-12
            ok_small &= float(small) <= epsilon + 1e-12
        report.params.update(site=i, ramp=n_i, budget=budget)
        report.add("pullback-large", "mu_i(D - k) >= 1 - eps for k <= m/6",
                   1 - epsilon, worst_big, "exact", ok_big)
        report.add("pushed-small", "mu_i(D - 2n - k) <= eps for k <= m/6",
                   epsilon, worst_small, "exact", ok_small)
        report.objects.update(site=i, D=D)
        return report
    raise HypothesisUnavailable(
        f"no site <= {horizon} carries enough ramp mass for eps={epsilon}")


def _shifted_interval_measure(spec: SystemSpec, i: int, lo: int, hi: int) -> Scalar:
    """Measure of an integer interval taken mod m_i (split on wrap)."""
    m = spec.m(i)
    lo_m, hi_m = lo % m, hi % m
    if hi - lo + 1 >= m:
        return spec.interval_measure(i, 0, m - 1)
    if lo_m <= hi_m:
        return spec.interval_measure(i, lo_m, hi_m)
    return (spec.interval_measure(i, 0, hi_m)
            + spec.interval_measure(i, lo_m, m - 1))


def _ufhcsum_witness(spec: SystemSpec, block: int, epsilon: float = 0.2,
                     along: str = "evens") -> WitnessReport:
    """Counting witness along a positive-upper-density set of iterates.

    Uses the block structure m_i = 3 * 2^i: the top third pulls entirely into
    the flat two thirds for every k in [2^block, 2^(block+1)].
    """
    sel = {"evens": lambda k: k % 2 == 0,
           "odds": lambda k: k % 2 == 1,
           "all": lambda k: True}[along]
    i = block
    m = spec.m(i)
    n_i = m // 3
    D = frozenset(range(2 * n_i, m))
    report = WitnessReport(construction="translation-ufhcsum",
                           params={"block": block, "epsilon": epsilon,
                                   "along": along, "site": i})
    mass = spec.interval_measure(i, 2 * n_i, m - 1)
    report.add("set-large", "mu_i(D) >= 1 - eps", 1 - epsilon, mass, "exact",
               float(mass) >= 1 - epsilon - 1e-12)
    window = 2 * n_i
    hits = []
    for k in range(1, window + 1):
        if not sel(k):
            continue
        pulled = _shifted_interval_measure(spec, i, 2 * n_i - k, m - 1 - k)
        if float(pulled) <= epsilon + 1e-12:
            hits.append(k)
    density_lower = Fraction(len(hits), window)
    target = Fraction(1, 4) if along in ("evens", "odds") else Fraction(1, 2)
    report.add("count", "hit fraction >= density/2 of the driving set",
               target, density_lower, "exact", density_lower >= target)
    report.objects.update(D=D, hits=hits, window=window)
    return report


# ---------------------------------------------------------------------------
# weighted-shift witness on a finite window
# ---------------------------------------------------------------------------

def shift_fhc_witness(spec: SystemSpec, kappa_param=0.15, d: int = 200,
                      n: Optional[int] = None, f_radius: int = 3,
                      window: int = 600) -> WitnessReport:
    """Block-union witness for the shift: misses F for kd steps, covers it after n.

    All sets are finite integer sets inside [-window, window]; every check is
    exact integer set algebra.  WindowTooSmall fires when a translate leaves
    the window.
    """
    if spec.kind != SHIFT:
        raise ValueError("this witness drives the weighted shift")
    kappa_f = float(kappa_param)
    if not 0 < kappa_f < Fraction(1, 6):
        raise ValueError("kappa must lie in (0, 1/6)")
    kd = math.floor(kappa_f * d)
    if n is None:
        n = math.floor(3.5 * kappa_f * d)
    if not (3 * kappa_f * d <= n <= 4 * kappa_f * d):
        raise ValueError("n must lie in [3 kappa d, 4 kappa d]")
    lo = -f_radius if spec.index_set == "Z" else 0
    F = set(range(lo, f_radius + 1))
    E = set()
    for k in range(kd + 1):
        E |= {x + k + n for x in F}
    needed = max(abs(min(E) - d), abs(max(E) + d), f_radius + n + kd)
    if needed > window:
        raise WindowTooSmall(f"window {window} < needed range {needed}")
    shells = range(-((window + d) // d), (window + d) // d + 1)
    B = set()
    for l in shells:
        B |= {x - l * d for x in E}
    B = {x for x in B if -window <= x <= window}
    if spec.index_set == "Z+":
        B = {x for x in B if x >= 0}

    report = WitnessReport(construction="shift-fhc",
                           params={"kappa": kappa_param, "d": d, "n": n,
                                   "f_radius": f_radius, "window": window})
    comp_mass = 1 - sum((spec.nu(x) for x in F),
                        Fraction(0)) / spec.shift_weights.total(spec.index_set)
    report.add("core-covers", "F carries most of the mass", "context",
               comp_mass, "exact", True, note="mu(complement of F)/mu(total)")
    miss_ok = cover_ok = True
    for k in range(kd + 1):
        pulled = {x - k for x in B}
        if pulled & F:
            miss_ok = False
        shifted_f = {x + n + k for x in F}
        if not shifted_f <= B:
            cover_ok = False
    report.add("miss", "B - k misses F for 0 <= k <= kappa d", 0,
               0 if miss_ok else "overlap", "exact", miss_ok)
    report.add("cover", "F + n + k sits inside B for 0 <= k <= kappa d",
               "subset", "ok" if cover_ok else "violated", "exact", cover_ok)
    lo_edge = 0 if spec.index_set == "Z+" else -window
    period_free = all((x + d in B or x + d > window)
                      and (x - d in B or x - d < lo_edge) for x in B)
    report.add("periodic", "B is d-periodic inside the window", "periodic",
               "ok" if period_free else "violated", "exact", period_free)
    report.objects.update(B=B, E=E, F=F, kd=kd)
    return report


# ---------------------------------------------------------------------------
# rigidity probe (translation with nested block structure)
# ---------------------------------------------------------------------------

def rigidity_probe(spec: SystemSpec, max_i: int = 8, cylinder_depth: int = 6,
                   registered_log_k: float = 1.0) -> WitnessReport:
    """Certified power bounds along the alphabet subsequence.

    For each i: shifting by m_{i-1} fixes every depth <= i-1 basic cylinder
    (divisibility, a complete symbolic check), and the pullback of every
    depth <= cylinder_depth basic cylinder grows by at most K, verified
    through the product of per-coordinate sup ratios (sup over all such
    cylinders factorizes exactly).
    """
    if spec.kind != TRANSLATION:
        raise ValueError("the rigidity probe drives diagonal translations")
    K = math.exp(registered_log_k)
    report = WitnessReport(construction="rigidity",
                           params={"max_i": max_i,
                                   "cylinder_depth": cylinder_depth,
                                   "K": K})
    for i in range(2, max_i + 1):
        s = spec.m(i - 1)
        divisible = all(s % spec.m(j) == 0 for j in range(1, i))
        report.add(f"fixes-depth-{i - 1}-cylinders@i={i}",
                   "m_{i-1} is a multiple of every earlier m_j (so the shift "
                   "fixes all their cylinders)", "divisible",
                   "ok" if divisible else "violated", "exact", divisible)
        sup_prod = 1.0
        per_coord = []
        for j in range(1, cylinder_depth + 1):
            r = float(spec.sup_shift_ratio(j, s % spec.m(j)))
            per_coord.append(r)
            sup_prod *= r
        report.add(f"power-bound@i={i}",
                   "sup over depth-cylinders of mu(t^-m_{i-1} B)/mu(B) <= K",
                   K, sup_prod, "exact", sup_prod <= K * (1 + 1e-9),
                   per_coordinate=per_coord)
        order_fix = all(spec.m(i) % spec.m(j) == 0 for j in range(1, i + 1))
        report.add(f"rigid-step@i={i}",
                   "t^{m_i} fixes every depth <= i cylinder", "divisible",
                   "ok" if order_fix else "violated", "exact", order_fix)
    return report
