"""Lower-bound estimation of the best constants in the Loomis-Whitney type
inequalities, and numerical checks of the uniform-in-q bounds.

Every constant here is estimated from below by an explicit witness; nothing
in this module claims the true supremum.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BadAxis, BadExponent, TooLarge
from .field import field_for_order
from .functions import (
    GridFn,
    apply_A,
    bilinear_L,
    exponent,
    fmt_exponent,
    from_reciprocal,
    kernel_counts,
    lp_norm,
    lw_form,
    partial_form,
    reciprocal,
)
from .group import HeisenbergGroup
from .sets import projection_image, pure_power_exponent, sharp_example

logger = logging.getLogger(__name__)

EXHAUSTIVE_MAX_Q = 3


# -- region -----------------------------------------------------------------

@dataclass(frozen=True)
class RegionPoint:
    u1: object
    u2: object
    cls: str  # "inside" | "boundary" | "outside"


def region_classify(u1, u2) -> RegionPoint:
    """Position of (u1, u2) relative to 1/u1 + 2/u2 <= 2 and 2/u1 + 1/u2 <= 2."""
    a, b = reciprocal(u1), reciprocal(u2)
    c1, c2 = a + 2 * b, 2 * a + b
    if c1 > 2 or c2 > 2:
        cls = "outside"
    elif c1 == 2 or c2 == 2:
        cls = "boundary"
    else:
        cls = "inside"
    return RegionPoint(exponent(u1), exponent(u2), cls)


# -- reports ----------------------------------------------------------------

@dataclass
class RatioReport:
    q: int
    n: int
    exponents: list
    value: float
    witness: tuple = field(repr=False)
    iterations: int
    converged: bool
    method: str  # "exhaustive" | "ascent" | "family"
    degenerate: bool = False
    witness_ref: object = None
    extra: dict = field(default_factory=dict, repr=False)

    def to_json(self) -> dict:
        return {"q": self.q, "n": self.n, "exponents": [fmt_exponent(u) for u in self.exponents],
                "value": self.value, "witness_ref": self.witness_ref, "method": self.method,
                "iterations": self.iterations, "converged": self.converged,
                "degenerate": self.degenerate}


def lw_ratio(group: HeisenbergGroup, fs: Sequence[GridFn], exponents) -> tuple[float, bool]:
    """lw_form / prod ||f_j||_{u_j}; a vanishing denominator gives (0.0, True)."""
    denom = math.prod(lp_norm(f, u) for f, u in zip(fs, exponents))
    if denom == 0:
        return 0.0, True
    return lw_form(group, fs) / denom, False


def L_ratio(group: HeisenbergGroup, f1: GridFn, f2: GridFn, u1, u2) -> tuple[float, bool]:
    denom = lp_norm(f1, u1) * lp_norm(f2, u2)
    if denom == 0:
        return 0.0, True
    return bilinear_L(group, f1, f2) / denom, False


def reevaluate(report: RatioReport) -> float:
    """Recompute a report's value from its witness functions."""
    fs = report.witness
    g = fs[0].group
    if report.method in ("exhaustive", "family"):
        return L_ratio(g, fs[0], fs[1], *report.exponents)[0]
    if report.extra.get("kind") == "opnorm":
        return opnorm_ratio(g, fs[0], *report.exponents)
    return lw_ratio(g, fs, report.exponents)[0]


# -- the two extremal families for n = 1 ------------------------------------

def family_functions(group: HeisenbergGroup, family: str) -> tuple[GridFn, GridFn]:
    """A: (1_{x2 = x1 + 1}, 1_{(1,1)}).  B: (1_{(1,1)}, 1_{x2 = 1 - x1})."""
    F = group.field
    pts = group.all_plane_points
    one = GridFn.point_mass(group, (1, 1))
    if family == "A":
        line = GridFn(group, pts[:, 1] == F.add(pts[:, 0], 1))
        return line, one
    if family == "B":
        line = GridFn(group, pts[:, 1] == F.sub(1, pts[:, 0]))
        return one, line
    raise ValueError(f"unknown family {family!r}")


def family_exponent(u1, u2, family: str) -> Fraction:
    a, b = reciprocal(u1), reciprocal(u2)
    return a + 2 * b - 2 if family == "A" else 2 * a + b - 2


def q_power(q: int, e: Fraction) -> float:
    return 1.0 if e == 0 else float(q) ** float(e)


def family_ratio(q, u1, u2, family: str) -> RatioReport:
    """L(f1, f2) / (||f1||_{u1} ||f2||_{u2}) for the family; closed form q^e with
    e = 1/u1 + 2/u2 - 2 (A) or 2/u1 + 1/u2 - 2 (B)."""
    group = q if isinstance(q, HeisenbergGroup) else HeisenbergGroup(1, field_for_order(q))
    u1, u2 = exponent(u1), exponent(u2)
    f1, f2 = family_functions(group, family)
    value, _ = L_ratio(group, f1, f2, u1, u2)
    e = family_exponent(u1, u2, family)
    closed = q_power(group.q, e)
    return RatioReport(group.q, 1, [u1, u2], value, (f1, f2), 0, True, "family",
                       witness_ref=f"family-{family}",
                       extra={"closed_form": closed, "log_q": e,
                              "rel_err": abs(value - closed) / closed})


paper_family_ratio = family_ratio  # external name used by the experiment plan


def region_scan(qs: Sequence[int], steps: int = 20) -> list[dict]:
    """Family A/B ratios over the grid 1/u in {0, 1/steps, ..., 1}^2."""
    rows = []
    for q in qs:
        group = HeisenbergGroup(1, field_for_order(q))
        for i in range(steps + 1):
            for k in range(steps + 1):
                u1 = from_reciprocal(Fraction(i, steps))
                u2 = from_reciprocal(Fraction(k, steps))
                ra = family_ratio(group, u1, u2, "A")
                rb = family_ratio(group, u1, u2, "B")
                rows.append({"u1": fmt_exponent(u1), "u2": fmt_exponent(u2), "q": q,
                             "ratio": max(ra.value, rb.value),
                             "class": region_classify(u1, u2).cls,
                             "ratio_A": ra.value, "ratio_B": rb.value,
                             "closed_A": ra.extra["closed_form"], "closed_B": rb.extra["closed_form"]})
    return rows


# -- exhaustive oracle over indicator pairs ---------------------------------

def exhaustive_indicator_constant(q: int, u1, u2, rel_tie: float = 1e-12) -> RatioReport:
    """max over nonempty E, F in F_q^2 of L(1_E, 1_F) / (||1_E||_{u1} ||1_F||_{u2}).

    Ties within ``rel_tie`` go to the lowest (mask(E), mask(F)), where mask
    is the bitmask over plane ranks.
    """
    if q > EXHAUSTIVE_MAX_Q:
        raise TooLarge(f"2^(q^2) indicator pairs is infeasible for q = {q}", cost=4 ** (q * q))
    group = HeisenbergGroup(1, field_for_order(q))
    u1, u2 = exponent(u1), exponent(u2)
    m = group.plane_size
    masks = np.arange(1, 2**m, dtype=np.int64)
    M = ((masks[:, None] >> np.arange(m)) & 1).astype(np.int64)
    counts = M @ kernel_counts(group) @ M.T  # incidences between E and F
    sizes = M.sum(axis=1)

    def norm(size, u):
        return np.ones_like(size, dtype=float) if u == math.inf else (size / m) ** (1.0 / float(u))

    ratio = counts / q**3 / (norm(sizes, u1)[:, None] * norm(sizes, u2)[None, :])
    best = ratio.max()
    ties = np.argwhere(ratio >= best * (1 - rel_tie))
    i, k = ties[0]  # argwhere is row-major, so this is the lowest (E, F)
    E = GridFn(group, M[i])
    Fn = GridFn(group, M[k])
    c, se, sf = int(counts[i, k]), int(sizes[i]), int(sizes[k])
    R, D = exact_indicator_ratio(c, q, se, sf, m, u1, u2)
    value = 1.0 if R == 1 else float(R) ** (1.0 / D)
    return RatioReport(q, 1, [u1, u2], value, (E, Fn), len(masks) ** 2, True, "exhaustive",
                       witness_ref={"E_mask": int(masks[i]), "F_mask": int(masks[k])},
                       extra={"incidences": c, "E_size": se, "F_size": sf,
                              "ratio_power": (R, D), "float_value": float(ratio[i, k])})


def exact_indicator_ratio(incidences: int, q: int, size_e: int, size_f: int, m: int,
                          u1, u2) -> tuple[Fraction, int]:
    """(R, D) with ratio = R^(1/D) exactly, for rational 1/u1, 1/u2."""
    a, b = reciprocal(u1), reciprocal(u2)
    D = math.lcm(a.denominator, b.denominator)
    R = (Fraction(incidences, q**3) ** D * Fraction(m, size_e) ** int(a * D)
         * Fraction(m, size_f) ** int(b * D))
    return R, D


# -- alternating maximization -----------------------------------------------

def _normalize(values: np.ndarray, u) -> np.ndarray:
    nrm = lp_norm(values, u)
    return values / nrm if nrm > 0 else values


def extremize_ratio(group: HeisenbergGroup, exponents, restarts: int = 8, max_iter: int = 200,
                    tol: float = 1e-10, seed: int = 0) -> RatioReport:
    """Lower bound for the best constant in lw_form <= C prod ||f_j||_{u_j}.

    Cyclic exact maximization: with the other functions fixed the form is
    <f_k, g_k> for the fiber average g_k, maximized at f_k ~ g_k^(u_k' - 1)
    (equality in Hoelder).  Each update can only raise the ratio.  Restart 0
    starts from constants, the rest from i.i.d. Uniform(0, 1] values.
    """
    us = [exponent(u) for u in exponents]
    if len(us) != 2 * group.n:
        raise BadExponent(f"need {2 * group.n} exponents")
    if any(u == 1 or u == math.inf for u in us):
        raise BadExponent("endpoint exponents 1 and inf have closed forms; use (1, inf) interior values")
    rng = np.random.default_rng(seed)
    best = None
    for rs in range(restarts):
        if rs == 0:
            vals = [np.ones(group.plane_size) for _ in us]
        else:
            vals = [1.0 - rng.random(group.plane_size) for _ in us]
        vals = [_normalize(v, u) for v, u in zip(vals, us)]
        fs = [GridFn(group, v) for v in vals]
        history = [lw_ratio(group, fs, us)[0]]
        converged = False
        it = 0
        for it in range(1, max_iter + 1):
            start = history[-1]
            for k in range(1, 2 * group.n + 1):
                g = partial_form(group, fs, k)
                if not g.any():
                    continue
                power = 1.0 / (float(us[k - 1]) - 1.0)
                old = fs[k - 1]
                fs[k - 1] = GridFn(group, _normalize(np.power(g / g.max(), power), us[k - 1]))
                new = lw_ratio(group, fs, us)[0]
                if new < history[-1]:  # rounding only; Hoelder says it cannot drop
                    fs[k - 1], new = old, history[-1]
                history.append(new)
            if abs(history[-1] - start) <= tol * max(abs(history[-1]), 1e-300):
                converged = True
                break
        value = history[-1]
        logger.debug("restart %d: ratio %.12g after %d sweeps", rs, value, it)
        if best is None or value > best[0]:
            best = (value, rs, tuple(fs), history, it, converged)
    value, rs, fs, history, it, converged = best
    return RatioReport(group.q, group.n, us, value, fs, it, converged, "ascent",
                       witness_ref={"restart": rs, "seed": seed}, extra={"history": history})


# -- operator A -------------------------------------------------------------

def endpoint_opnorms(q: int) -> dict:
    """A(1 -> 1) as the max over point masses and A(inf -> inf) = ||A 1||_inf.

    Both come from integer incidence counts divided by q, so they are exact.
    """
    group = HeisenbergGroup(1, field_for_order(q))
    K = kernel_counts(group)
    # ||A delta_y||_1 / ||delta_y||_1 = (#x incident to y) / q
    a11 = int(K.sum(axis=0).max()) / q
    aii = int(K.sum(axis=1).max()) / q
    return {"A_1to1": a11, "A_inf_to_inf": aii}


def opnorm_ratio(group: HeisenbergGroup, f: GridFn, s, r) -> float:
    d = lp_norm(f, s)
    return 0.0 if d == 0 else lp_norm(apply_A(group, f), r) / d


def opnorm_lower_bound(q: int, s, r, restarts: int = 8, max_iter: int = 200,
                       tol: float = 1e-12, seed: int = 0) -> RatioReport:
    """Nonlinear power iteration for max ||A f||_r / ||f||_s over nonnegative f:
    f <- (A^T (A f)^(r-1))^(s'-1), renormalized.  Restart 0 is f = 1."""
    s, r = exponent(s), exponent(r)
    if s == 1 or r == 1 or math.inf in (s, r):
        raise BadExponent("need 1 < s, r < inf")
    group = q if isinstance(q, HeisenbergGroup) else HeisenbergGroup(1, field_for_order(q))
    rng = np.random.default_rng(seed)
    best = None
    for rs in range(restarts):
        v = np.ones(group.plane_size) if rs == 0 else 1.0 - rng.random(group.plane_size)
        f = GridFn(group, _normalize(v, s))
        value = opnorm_ratio(group, f, s, r)
        best_here = (value, f)
        converged = False
        it = 0
        for it in range(1, max_iter + 1):
            Af = apply_A(group, f).values
            grad = apply_A(group, GridFn(group, np.power(Af, float(r) - 1.0)), adjoint=True).values
            if not grad.any():
                break
            f = GridFn(group, _normalize(np.power(grad / grad.max(), 1.0 / (float(s) - 1.0)), s))
            new = opnorm_ratio(group, f, s, r)
            if new > best_here[0]:
                best_here = (new, f)
            if abs(new - value) <= tol * new:
                converged = True
                value = new
                break
            value = new
        if best is None or best_here[0] > best[0]:
            best = (best_here[0], best_here[1], rs, it, converged)
    value, f, rs, it, converged = best
    return RatioReport(group.q, 1, [s, r], value, (f,), it, converged, "ascent",
                       witness_ref={"restart": rs, "seed": seed}, extra={"kind": "opnorm"})


# -- mixed-exponent corpus --------------------------------------------------

def mixed_exponents(n: int, k: int) -> list[Fraction]:
    """k = 0: all n(2n+1)/(n+1).  1 <= k <= n: (2n+1)/2 at k and n+k, 2n+1 elsewhere."""
    if k == 0:
        return [Fraction(n * (2 * n + 1), n + 1)] * (2 * n)
    if not 1 <= k <= n:
        raise BadAxis(f"k must be 0 or in 1..{n}, got {k}")
    us = [Fraction(2 * n + 1)] * (2 * n)
    us[k - 1] = us[n + k - 1] = Fraction(2 * n + 1, 2)
    return us


@dataclass
class SharpEval:
    name: str
    ratio: float
    float_ratio: float
    exact: bool
    log_q: Fraction | None


def indicator_tuple_ratio(group: HeisenbergGroup, sets_ranks: Sequence[np.ndarray], exponents,
                          name: str = "") -> SharpEval:
    """Ratio for f_j = 1_{K_j}, exact as a rational power of q when all counts are powers of q."""
    q, dim = group.q, group.dim
    member = np.ones(group.order, dtype=bool)
    for j, Kj in enumerate(sets_ranks, start=1):
        member &= np.isin(group.projection_ranks(j), Kj)
    count = int(member.sum())
    fs = [GridFn.indicator(group, Kj) for Kj in sets_ranks]
    float_ratio, _ = lw_ratio(group, fs, exponents)
    ks = [pure_power_exponent(c, q) for c in [count] + [len(Kj) for Kj in sets_ranks]]
    if count and all(k is not None for k in ks):
        e = Fraction(ks[0] - dim)
        for kj, u in zip(ks[1:], exponents):
            e -= Fraction(kj - (dim - 1)) * reciprocal(u)
        return SharpEval(name, q_power(q, e), float_ratio, True, e)
    return SharpEval(name, float_ratio, float_ratio, False, None)


@dataclass
class MixedReport:
    n: int
    q: int
    k: int
    exponents: list
    samples: int
    max_ratio: float
    witness_index: int
    witness: tuple = field(repr=False)
    all_finite: bool = True
    sharp: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"n": self.n, "q": self.q, "k": self.k,
                "exponents": [fmt_exponent(u) for u in self.exponents],
                "samples": self.samples, "max_ratio": self.max_ratio,
                "witness_index": self.witness_index, "all_finite": self.all_finite,
                "sharp": [{"name": s.name, "ratio": s.ratio, "exact": s.exact,
                           "log_q": None if s.log_q is None else str(s.log_q)} for s in self.sharp]}


def _random_tuple(group, rng, i):
    m = 2 * group.n
    if i % 2 == 0:
        sparsity = rng.random()
        return [GridFn(group, rng.random(group.plane_size) * (rng.random(group.plane_size) < sparsity))
                for _ in range(m)]
    density = rng.random()
    return [GridFn(group, rng.random(group.plane_size) < density) for _ in range(m)]


def mixed_exponent_check(group: HeisenbergGroup, k: int, samples: int = 1000, seed: int = 0) -> MixedReport:
    """Ratios lw_form / prod ||f_j||_{u_j} at the uniform (k = 0) or mixed exponents
    over seeded random tuples, random indicator tuples and the sharp sets."""
    us = mixed_exponents(group.n, k)
    rng = np.random.default_rng(seed)
    best, best_i, best_fs, finite = -1.0, -1, None, True
    for i in range(samples):
        fs = _random_tuple(group, rng, i)
        val, _ = lw_ratio(group, fs, us)
        finite &= math.isfinite(val)
        if val > best:
            best, best_i, best_fs = val, i, tuple(fs)
    sharp = []
    ones = [np.arange(group.plane_size)] * (2 * group.n)
    sharp.append(indicator_tuple_ratio(group, ones, us, "constant"))
    flat = sharp_example(group, "flat")
    images = [projection_image(flat, j) for j in range(1, 2 * group.n + 1)]
    sharp.append(indicator_tuple_ratio(group, images, us, "line_t0" if group.n == 1 else "flat"))
    for s in sharp:
        finite &= math.isfinite(s.ratio)
        if s.ratio > best:
            best, best_i, best_fs = s.ratio, -1, None
    return MixedReport(group.n, group.q, k, us, samples, best, best_i, best_fs, finite, sharp)
