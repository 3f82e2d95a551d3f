"""Nonnegative functions on F_q^(2n), normalized L^u norms, the multilinear
Loomis-Whitney form, and (for n = 1) the incidence form and its operator A."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from .errors import ArityMismatch, BadExponent, ContextMismatch, WrongDimension
from .group import HeisenbergGroup

Exponent = Union[Fraction, float]  # a Fraction >= 1, or math.inf

FSUM_THRESHOLD = 10**6


def exponent(u) -> Exponent:
    """Parse ``u`` ("3/2", 1.5, Fraction, "inf", math.inf) into an exact exponent."""
    if isinstance(u, str) and u.strip().lower() in ("inf", "infinity", "oo"):
        return math.inf
    if isinstance(u, float) and math.isinf(u):
        if u < 0:
            raise BadExponent("exponent must be >= 1")
        return math.inf
    v = Fraction(u).limit_denominator(10**6) if isinstance(u, float) else Fraction(u)
    if v < 1:
        raise BadExponent(f"exponent must be >= 1, got {u}")
    return v


def reciprocal(u) -> Fraction:
    """1/u, with 1/inf = 0."""
    u = exponent(u)
    return Fraction(0) if u == math.inf else 1 / u


def from_reciprocal(r) -> Exponent:
    r = Fraction(r)
    if not 0 <= r <= 1:
        raise BadExponent(f"1/u must lie in [0, 1], got {r}")
    return math.inf if r == 0 else 1 / r


def conjugate(u) -> Exponent:
    """Hoelder conjugate u' with 1/u + 1/u' = 1."""
    return from_reciprocal(1 - reciprocal(u))


def fmt_exponent(u) -> str:
    u = exponent(u)
    return "inf" if u == math.inf else str(u)


class GridFn:
    """A nonnegative real function on F_q^(2n), stored densely by plane rank."""

    def __init__(self, group: HeisenbergGroup, values):
        v = np.array(values, dtype=np.float64).reshape(-1)
        if v.shape != (group.plane_size,):
            raise ContextMismatch(f"need {group.plane_size} values, got {v.size}")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise ValueError("values must be finite and nonnegative")
        v.setflags(write=False)
        self.group = group
        self.values = v

    @classmethod
    def constant(cls, group, c: float = 1.0):
        return cls(group, np.full(group.plane_size, float(c)))

    @classmethod
    def indicator(cls, group, ranks):
        v = np.zeros(group.plane_size)
        v[np.asarray(ranks, dtype=np.int64)] = 1.0
        return cls(group, v)

    @classmethod
    def point_mass(cls, group, point):
        return cls.indicator(group, [group.plane_rank(point)])

    @classmethod
    def from_callable(cls, group, fn: Callable[[np.ndarray], np.ndarray]):
        """``fn`` receives all plane points as a (q^(2n), 2n) array."""
        return cls(group, fn(group.all_plane_points))

    def scaled(self, c: float) -> "GridFn":
        return GridFn(self.group, self.values * c)

    def is_zero(self) -> bool:
        return not self.values.any()

    def __repr__(self):
        return f"GridFn(q={self.group.q}, n={self.group.n}, support={int((self.values > 0).sum())})"

    def to_json(self) -> dict:
        return {"q": self.group.q, "n": self.group.n, "values": self.values.tolist()}

    @classmethod
    def from_json(cls, d: dict, group: HeisenbergGroup | None = None) -> "GridFn":
        group = group or HeisenbergGroup(d["n"], d["q"])
        return cls(group, d["values"])


def _sum(x: np.ndarray) -> float:
    return math.fsum(x) if x.size > FSUM_THRESHOLD else float(np.sum(x))


def lp_norm(f: GridFn | np.ndarray, u) -> float:
    """(q^(-2n) sum f^u)^(1/u), or max f for u = inf.  Accepts a raw value array too."""
    u = exponent(u)
    v = f.values if isinstance(f, GridFn) else np.asarray(f, dtype=np.float64)
    if u == math.inf:
        return float(v.max())
    if u == 1:
        return _sum(v) / v.size
    return (_sum(np.power(v, float(u))) / v.size) ** (1.0 / float(u))


def inner(f: GridFn, g: GridFn) -> float:
    """<f, g> = q^(-2n) sum f g."""
    return _sum(f.values * g.values) / f.values.size


def _check_same(group, fs):
    for f in fs:
        if f.group != group:
            raise ContextMismatch("functions live on different groups")


def lw_form(group: HeisenbergGroup, fs: Sequence[GridFn]) -> float:
    """q^(-(2n+1)) sum over all (x, t) of prod_j f_j(pi_j(x, t))."""
    if len(fs) != 2 * group.n:
        raise ArityMismatch(f"need {2 * group.n} functions, got {len(fs)}")
    _check_same(group, fs)
    prod = np.ones(group.order)
    for j, f in enumerate(fs, start=1):
        prod *= f.values[group.projection_ranks(j)]
    return _sum(prod) / group.order


def partial_form(group: HeisenbergGroup, fs: Sequence[GridFn], k: int) -> np.ndarray:
    """g on F_q^(2n) with lw_form(fs) = <f_k, g>: the fiber average of prod_{j != k} f_j."""
    if len(fs) != 2 * group.n:
        raise ArityMismatch(f"need {2 * group.n} functions, got {len(fs)}")
    prod = np.ones(group.order)
    for j, f in enumerate(fs, start=1):
        if j != k:
            prod *= f.values[group.projection_ranks(j)]
    return np.bincount(group.projection_ranks(k), weights=prod, minlength=group.plane_size) / group.q


def incidence_pairs(group: HeisenbergGroup) -> tuple[np.ndarray, np.ndarray]:
    """Plane ranks (x, y) of all q^3 pairs with x_1 y_1 + y_2 = x_2 (n = 1)."""
    if group.n != 1:
        raise WrongDimension("the incidence form is defined for n = 1")
    cache = group.__dict__.get("_incidence_pairs")
    if cache is None:
        F, q = group.field, group.q
        x = group.all_plane_points
        xr = np.repeat(np.arange(q * q), q)
        y1 = np.tile(F.elements(), q * q)
        y2 = F.sub(x[xr, 1], F.mul(x[xr, 0], y1))
        cache = (xr, y1 * q + y2)
        group.__dict__["_incidence_pairs"] = cache
    return cache


def bilinear_L(group: HeisenbergGroup, f1: GridFn, f2: GridFn) -> float:
    """q^(-3) sum over x, y in F_q^2 with x_1 y_1 + y_2 = x_2 of f1(x) f2(y)."""
    xr, yr = incidence_pairs(group)
    _check_same(group, (f1, f2))
    return _sum(f1.values[xr] * f2.values[yr]) / group.q**3


def apply_A(group: HeisenbergGroup, f: GridFn, adjoint: bool = False) -> GridFn:
    """(A f)(x) = q^(-1) sum over y on the line y_2 = x_2 - x_1 y_1 of f(y).

    The adjoint satisfies <g, A f> = <A^T g, f> for the normalized inner product.
    """
    xr, yr = incidence_pairs(group)
    _check_same(group, (f,))
    src, dst = (xr, yr) if adjoint else (yr, xr)
    out = np.bincount(dst, weights=f.values[src], minlength=group.plane_size) / group.q
    return GridFn(group, out)


def kernel_counts(group: HeisenbergGroup) -> np.ndarray:
    """Integer incidence matrix K[x, y] = 1 iff x_1 y_1 + y_2 = x_2; A = K / q."""
    xr, yr = incidence_pairs(group)
    K = np.zeros((group.plane_size, group.plane_size), dtype=np.int64)
    K[xr, yr] = 1
    return K
