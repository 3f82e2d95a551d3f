"""Subsets of H^n(F_q): projections, Loomis-Whitney set bounds, incidences,
coverings by cosets, and the family of badly-covered hyperplanes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BadRange, EmptySet, WrongDimension
from .field import FieldCtx
from .group import HeisenbergGroup


class HSubset:
    """Membership table over the point ranks of a Heisenberg group."""

    def __init__(self, group: HeisenbergGroup, mask):
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (group.order,):
            raise ValueError(f"mask must have length {group.order}, got {mask.shape}")
        self.group = group
        self.mask = mask
        self.mask.setflags(write=False)
        self.size = int(mask.sum())

    @classmethod
    def from_ranks(cls, group, ranks):
        mask = np.zeros(group.order, dtype=bool)
        mask[np.asarray(ranks, dtype=np.int64)] = True
        return cls(group, mask)

    @classmethod
    def from_points(cls, group, points):
        pts = np.asarray(points, dtype=np.int64).reshape(-1, group.dim)
        return cls.from_ranks(group, group.rank(pts))

    @classmethod
    def empty(cls, group):
        return cls(group, np.zeros(group.order, dtype=bool))

    @classmethod
    def full(cls, group):
        return cls(group, np.ones(group.order, dtype=bool))

    def ranks(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def points(self) -> np.ndarray:
        return self.group.unrank(self.ranks()).reshape(-1, self.group.dim)

    def __len__(self):
        return self.size

    def __contains__(self, point):
        return bool(self.mask[self.group.rank(point)])

    def __eq__(self, other):
        return isinstance(other, HSubset) and self.group == other.group and np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash((self.group, self.mask.tobytes()))

    def __repr__(self):
        return f"HSubset({self.group!r}, size={self.size})"

    def __and__(self, other):
        return HSubset(self.group, self.mask & other.mask)

    def __or__(self, other):
        return HSubset(self.group, self.mask | other.mask)

    def to_json(self) -> dict:
        g = self.group
        return {"q": g.q, "n": g.n, "field": g.field.to_json(),
                "points": self.points().tolist()}

    @classmethod
    def from_json(cls, d: dict) -> "HSubset":
        group = HeisenbergGroup.from_json(d)
        return cls.from_points(group, d["points"])


# -- projections ------------------------------------------------------------

def projection_image(K: HSubset, j: int) -> np.ndarray:
    """Sorted plane ranks of pi_j(K); its length is |pi_j(K)|."""
    g = K.group
    g._axis(j)
    return np.unique(g.projection_ranks(j)[K.mask])


def projection_sizes(K: HSubset) -> list[int]:
    return [len(projection_image(K, j)) for j in range(1, 2 * K.group.n + 1)]


def sharp_example(group: HeisenbergGroup, kind: str, t0: int = 0,
                  A: Sequence[int] | None = None, B: Sequence[int] | None = None) -> HSubset:
    """Extremal sets.

    ``line_t0``: {(x_1, 0, t0)} for n = 1.  ``flat``: {(x, t0): x_{n+1} = ... = x_{2n} = 0}
    (coincides with line_t0 when n = 1).  ``box``: A x B x F_q for n = 1.
    """
    pts = group.all_points
    n = group.n
    if kind == "line_t0":
        if n != 1:
            raise WrongDimension("line_t0 is defined for n = 1; use 'flat' for larger n")
        mask = (pts[:, 1] == 0) & (pts[:, 2] == t0)
    elif kind == "flat":
        mask = ~pts[:, n:2 * n].any(axis=1) & (pts[:, -1] == t0)
    elif kind == "box":
        if n != 1:
            raise WrongDimension("box requires n = 1")
        if A is None or B is None:
            raise ValueError("box needs A and B")
        mask = np.isin(pts[:, 0], list(A)) & np.isin(pts[:, 1], list(B))
    else:
        raise ValueError(f"unknown example {kind!r}")
    return HSubset(group, mask)


def pure_power_exponent(value: int, q: int) -> int | None:
    """k with value == q**k, or None."""
    k, v = 0, value
    while v % q == 0 and v > 1:
        v //= q
        k += 1
    return k if v == 1 else None


@dataclass
class LWSetReport:
    lhs: int
    proj_sizes: list[int]
    rhs: float
    ratio: float
    exact: bool
    log_q_ratio: Fraction | None
    max_proj: int
    max_proj_bound: float

    def to_json(self) -> dict:
        d = dict(self.__dict__)
        d["log_q_ratio"] = None if self.log_q_ratio is None else str(self.log_q_ratio)
        return d


def lw_set_check(K: HSubset) -> LWSetReport:
    """Compare |K| against q^(1/(2n+1)) prod_j |pi_j(K)|^((n+1)/(n(2n+1))).

    When every size is a power of q the ratio is computed as an exact
    rational power of q, so sharp cases come out as exactly 1.0.
    """
    if K.size == 0:
        raise EmptySet("K must be nonempty")
    g = K.group
    n, q = g.n, g.q
    sizes = projection_sizes(K)
    e_q = Fraction(1, 2 * n + 1)
    e_p = Fraction(n + 1, n * (2 * n + 1))
    log_rhs = e_q * math.log(q) + float(e_p) * sum(math.log(s) for s in sizes)
    rhs = math.exp(log_rhs)
    powers = [pure_power_exponent(v, q) for v in [K.size] + sizes]
    if all(k is not None for k in powers):
        log_ratio = powers[0] - e_q - e_p * sum(powers[1:])
        ratio = 1.0 if log_ratio == 0 else float(q) ** float(log_ratio)
        exact = True
    else:
        log_ratio = None
        ratio = math.exp(math.log(K.size) - log_rhs)
        exact = False
    # max_j |pi_j(K)| >~ |K|^((2n+1)/(2(n+1))) q^(-1/(2(n+1)))
    bound = K.size ** ((2 * n + 1) / (2 * (n + 1))) * q ** (-1 / (2 * (n + 1)))
    return LWSetReport(K.size, sizes, rhs, ratio, exact, log_ratio, max(sizes), bound)


# -- incidences -------------------------------------------------------------

class Line(NamedTuple):
    """y = slope * x + intercept, or the vertical line x = intercept when slope is None."""

    slope: int | None
    intercept: int


@dataclass
class IncidenceInstance:
    field: FieldCtx
    points: tuple[tuple[int, int], ...]
    lines: tuple[Line, ...]

    def __post_init__(self):
        self.points = tuple(tuple(int(c) for c in p) for p in self.points)
        self.lines = tuple(Line(*l) for l in self.lines)
        if len(set(self.points)) != len(self.points):
            raise ValueError("duplicate points")
        if len(set(self.lines)) != len(self.lines):
            raise ValueError("duplicate lines")

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "points": [list(p) for p in self.points],
                "lines": [[l.slope, l.intercept] for l in self.lines]}

    @classmethod
    def from_json(cls, d: dict) -> "IncidenceInstance":
        return cls(FieldCtx.from_json(d["field"]), [tuple(p) for p in d["points"]],
                   [Line(*l) for l in d["lines"]])


def incidence_count(inst: IncidenceInstance) -> int:
    if not inst.points or not inst.lines:
        return 0
    F = inst.field
    P = np.asarray(inst.points, dtype=np.int64)
    slanted = [l for l in inst.lines if l.slope is not None]
    vertical = [l.intercept for l in inst.lines if l.slope is None]
    count = 0
    if slanted:
        m = np.array([l.slope for l in slanted], dtype=np.int64)
        c = np.array([l.intercept for l in slanted], dtype=np.int64)
        y = F.add(F.mul(P[:, 0, None], m[None, :]), c[None, :])
        count += int((y == P[:, 1, None]).sum())
    if vertical:
        count += int(np.isin(P[:, 0], vertical).sum())
    return count


def vinh_bound(inst: IncidenceInstance) -> float:
    """|P||L|/q + 2 sqrt(q |P||L|)."""
    q = inst.field.q
    pl = len(inst.points) * len(inst.lines)
    return pl / q + 2.0 * math.sqrt(q * pl)


@dataclass
class IncidenceSetReport:
    size: int
    n_points: int
    n_lines: int
    incidences: int
    bound: float
    lower_ok: bool
    upper_ok: bool

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok


def incidence_set_check(K: HSubset, rel_tol: float = 1e-9) -> IncidenceSetReport:
    """Chain |K| <= I(pi_1(K), pi_2(K)) <= |P||L|/q + 2 sqrt(q|P||L|) for n = 1.

    pi_1(K) is read as points (a_1, a_2), pi_2(K) as lines y = b_1 x + b_2.
    """
    g = K.group
    if g.n != 1:
        raise WrongDimension("incidence check needs n = 1")
    if K.size == 0:
        raise EmptySet("K must be nonempty")
    P = g.plane_unrank(projection_image(K, 1)).reshape(-1, 2)
    L = g.plane_unrank(projection_image(K, 2)).reshape(-1, 2)
    inst = IncidenceInstance(g.field, [tuple(p) for p in P], [Line(int(b1), int(b2)) for b1, b2 in L])
    incid = incidence_count(inst)
    bound = vinh_bound(inst)
    return IncidenceSetReport(K.size, len(P), len(L), incid, bound,
                              K.size <= incid, incid <= bound * (1 + rel_tol))


def random_incidence_instance(field: FieldCtx, rng: np.random.Generator,
                              vertical: bool = True) -> IncidenceInstance:
    """Random points and lines (vertical lines included when asked)."""
    q = field.q
    n_pts = int(rng.integers(1, q * q + 1))
    pts = rng.choice(q * q, size=n_pts, replace=False)
    n_all = q * q + (q if vertical else 0)
    n_lines = int(rng.integers(1, n_all + 1))
    codes = rng.choice(n_all, size=n_lines, replace=False)
    lines = [Line(int(c // q), int(c % q)) if c < q * q else Line(None, int(c - q * q)) for c in codes]
    return IncidenceInstance(field, [(int(p // q), int(p % q)) for p in pts], lines)


# -- coverings --------------------------------------------------------------

def additive_covering(S: HSubset, direction) -> int:
    """Number of additive cosets x + span(direction) of F_q^(2n+1) that meet S."""
    g = S.group
    F = g.field
    d = np.asarray(direction, dtype=np.int64)
    nz = np.flatnonzero(d)
    if len(nz) == 0:
        raise ValueError("direction must be nonzero")
    piv = nz[0]
    pts = S.points()
    if len(pts) == 0:
        return 0
    # canonical representative: subtract (p_piv / d_piv) d, zeroing the pivot coordinate
    c = F.mul(pts[:, piv], F.inv(int(d[piv])))
    reps = F.sub(pts, F.mul(c[:, None], d[None, :]))
    return len(np.unique(g.rank(reps)))


def covering_number(K: HSubset, j: int) -> int:
    """Number of additive cosets of L_j meeting T_j(K)."""
    g = K.group
    idx, _, _ = g._axis(j)
    pts = K.points()
    if len(pts) == 0:
        return 0
    straight = g.straighten(j, pts)
    straight[:, idx] = 0
    return len(np.unique(g.rank(straight)))


# -- Chen family of hyperplanes --------------------------------------------

@dataclass
class ChenReport:
    r: int
    size: int
    members: list = field(repr=False)
    b1: float | None
    b2: float | None
    b1_ok: bool | None
    b2_ok: bool | None
    in_neither: bool


def hyperplanes_with_normals(group: HeisenbergGroup):
    """All 2n-dimensional subspaces W of F_q^(2n+1) paired with a direction of W^perp."""
    from .subgroups import enumerate_subspaces, orth_complement

    out = []
    for W in enumerate_subspaces(group.dim, group.dim - 1, group.field):
        perp = orth_complement(W)
        out.append((W, np.asarray(perp.basis[0], dtype=np.int64)))
    return out


def chen_bounds(K: HSubset, r: int) -> tuple[float | None, float | None]:
    """(q^(2n-1) r if r <= |K|/2, r q^(4n) / ((q^(2n) - r)|K|) if 0 < r < q^(2n)); None off-range."""
    g = K.group
    q, n = g.q, g.n
    b1 = float(q ** (2 * n - 1) * r) if 2 * r <= K.size else None
    b2 = r * q ** (4 * n) / ((q ** (2 * n) - r) * K.size) if 0 < r < q ** (2 * n) else None
    return b1, b2


def chen_family(K: HSubset, r: int, hyperplanes=None) -> ChenReport:
    """Hyperplanes W such that K is covered by at most r translates of W^perp."""
    g = K.group
    if K.size == 0:
        raise EmptySet("K must be nonempty")
    if not 1 <= r < g.plane_size:
        raise BadRange(f"r must be in [1, q^(2n)), got {r}")
    if hyperplanes is None:
        hyperplanes = hyperplanes_with_normals(g)
    members = [W for W, d in hyperplanes if additive_covering(K, d) <= r]
    b1, b2 = chen_bounds(K, r)
    size = len(members)
    return ChenReport(
        r, size, members, b1, b2,
        None if b1 is None else size <= b1,
        None if b2 is None else size <= b2,
        b1 is None and b2 is None,
    )


# -- random sets ------------------------------------------------------------

SAMPLER_REGIMES = ("density0.1", "density0.5", "density0.9", "fibers", "coset")


def random_subset(group: HeisenbergGroup, rng: np.random.Generator, regime: str | None = None) -> HSubset:
    """Draw a nonempty random set.  Regimes: uniform density, unions of random
    pi_j-fibers, or a left coset of the subgroup generated by 1-2 random points."""
    if regime is None:
        regime = SAMPLER_REGIMES[int(rng.integers(len(SAMPLER_REGIMES)))]
    if regime.startswith("density"):
        delta = float(regime[len("density"):])
        mask = rng.random(group.order) < delta
        if not mask.any():
            mask[int(rng.integers(group.order))] = True
        return HSubset(group, mask)
    if regime == "fibers":
        j = int(rng.integers(1, 2 * group.n + 1))
        k = int(rng.integers(1, min(group.plane_size, 2 * group.q) + 1))
        bases = rng.choice(group.plane_size, size=k, replace=False)
        pts = np.concatenate([group.fiber(j, group.plane_unrank(int(b))) for b in bases])
        return HSubset.from_points(group, pts)
    if regime == "coset":
        from .subgroups import closure

        gens = group.unrank(rng.integers(group.order, size=int(rng.integers(1, 3))))
        H = closure(group, [tuple(int(v) for v in row) for row in np.atleast_2d(gens)])
        shift = group.unrank(int(rng.integers(group.order)))
        pts = group.mul(np.asarray(shift)[None, :], H.points())
        return HSubset.from_points(group, pts)
    raise ValueError(f"unknown regime {regime!r}")
