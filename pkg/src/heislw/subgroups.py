"""Subgroups of H^n(F_q): closure, enumeration, classification into product
and graph types, homogeneity, orthogonal complements, and subspace counts."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Sequence

import numpy as np

from .errors import BadField, BadRange, DimensionMismatch, TooLarge, Unclassifiable
from .field import FieldCtx, is_prime, prime_power
from .group import HeisenbergGroup
from .sets import HSubset

ENUMERATION_LIMIT = 1000
SUBSPACE_LIMIT = 2_000_000


# -- linear algebra over F_q ------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """Row space of ``basis``, kept in reduced row-echelon form so that equality
    of subspaces is equality of records."""

    field: FieldCtx
    ambient_dim: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, c in enumerate(row) if c) for row in self.basis)

    def matrix(self) -> np.ndarray:
        return np.asarray(self.basis, dtype=np.int64).reshape(self.dim, self.ambient_dim)

    def elements(self) -> np.ndarray:
        """All q^dim vectors, as a (q^dim, ambient_dim) array."""
        F = self.field
        if self.dim == 0:
            return np.zeros((1, self.ambient_dim), dtype=np.int64)
        coeffs = np.array(list(product(range(F.q), repeat=self.dim)), dtype=np.int64)
        B = self.matrix()
        out = np.zeros((len(coeffs), self.ambient_dim), dtype=np.int64)
        for i in range(self.dim):
            out = F.add(out, F.mul(coeffs[:, i, None], B[i][None, :]))
        return out

    def coordinates(self, v) -> np.ndarray:
        """Coefficients of v (rows) in the echelon basis: the pivot entries."""
        v = np.asarray(v, dtype=np.int64)
        return v[..., list(self.pivots)]

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64).reshape(-1, self.ambient_dim)
        return all(rref(list(self.basis) + [row.tolist()], self.field, self.ambient_dim).dim == self.dim
                   for row in v)

    def to_json(self) -> list:
        return [list(r) for r in self.basis]


def rref(rows, field: FieldCtx, ambient_dim: int | None = None) -> Subspace:
    """Canonical reduced echelon basis of the row space of ``rows``."""
    F = field
    M = np.asarray(rows, dtype=np.int64)
    if ambient_dim is None:
        if M.ndim != 2:
            raise ValueError("ambient_dim is required for an empty matrix")
        ambient_dim = M.shape[1]
    M = M.reshape(-1, ambient_dim).copy()
    r = 0
    for c in range(ambient_dim):
        if r == len(M):
            break
        nz = np.flatnonzero(M[r:, c])
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        M[[r, piv]] = M[[piv, r]]
        M[r] = F.mul(M[r], F.inv(int(M[r, c])))
        for i in range(len(M)):
            if i != r and M[i, c]:
                M[i] = F.sub(M[i], F.mul(int(M[i, c]), M[r]))
        r += 1
    return Subspace(F, ambient_dim, tuple(tuple(int(v) for v in row) for row in M[:r]))


def orth_complement(S: Subspace) -> Subspace:
    """S^perp for the standard dot product on F_q^m."""
    F, m = S.field, S.ambient_dim
    piv = S.pivots
    free = [c for c in range(m) if c not in piv]
    B = S.matrix()
    rows = []
    for f in free:
        v = np.zeros(m, dtype=np.int64)
        v[f] = 1
        for i, pc in enumerate(piv):
            v[pc] = F.neg(int(B[i, f]))
        rows.append(v)
    return rref(rows, F, m)


def symplectic_form(field: FieldCtx, n: int, x, y) -> int:
    return HeisenbergGroup(n, field).symplectic(x, y)


def is_isotropic(S: Subspace, n: int) -> bool:
    if S.ambient_dim != 2 * n:
        raise DimensionMismatch(f"ambient dimension {S.ambient_dim} != 2n = {2 * n}")
    g = HeisenbergGroup(n, S.field)
    return all(g.symplectic(a, b) == 0 for a, b in combinations(S.basis, 2))


# -- counting formulas ------------------------------------------------------

def gaussian_bracket(m: int, q: int) -> int:
    """[m]_q = 1 + q + ... + q^(m-1)."""
    if m < 0:
        raise BadRange(f"m must be >= 0, got {m}")
    return sum(q**i for i in range(m))


def q_factorial(m: int, q: int) -> int:
    out = 1
    for i in range(1, m + 1):
        out *= gaussian_bracket(i, q)
    return out


def gr_count(k: int, m: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^m."""
    if not 0 <= k <= m:
        raise BadRange(f"need 0 <= k <= {m}, got {k}")
    return q_factorial(m, q) // (q_factorial(k, q) * q_factorial(m - k, q))


def ig_count(k: int, m: int, q: int) -> int:
    """Number of k-dimensional isotropic subspaces of (F_q^m, omega), m = 2n."""
    if m % 2:
        raise BadRange(f"ambient dimension must be even, got {m}")
    n = m // 2
    if not 0 <= k <= n:
        raise BadRange(f"need 0 <= k <= {n}, got {k}")
    out = q_factorial(n, q) // (q_factorial(k, q) * q_factorial(n - k, q))
    for i in range(n - k + 1, n + 1):
        out *= q**i + 1
    return out


def subgroup_count_formula(n: int, p: int, reading: str = "pk") -> int:
    """Number of subgroups of H^n(F_p).

    Product subgroups contribute sum_k |Gr(k, 2n)|.  Each isotropic S of
    dimension k carries one graph subgroup per linear map S -> F_p, i.e.
    p^k of them (``reading="pk"``).  ``reading="kp"`` weights by k*p instead,
    which drops the trivial subgroup and undercounts; it is kept for reports.
    """
    if p % 2 == 0 or not is_prime(p):
        raise BadField(f"p must be an odd prime, got {p}")
    if reading not in ("pk", "kp"):
        raise ValueError(f"unknown reading {reading!r}")
    total = sum(gr_count(k, 2 * n, p) for k in range(2 * n + 1))
    for k in range(n + 1):
        weight = p**k if reading == "pk" else k * p
        total += weight * ig_count(k, 2 * n, p)
    return total


def homogeneous_count_formula(n: int, q: int) -> int:
    try:
        p, _ = prime_power(q)
    except Exception as exc:
        raise BadField(str(exc)) from None
    if p == 2:
        raise BadField("q must be odd")
    return (sum(gr_count(k, 2 * n, q) for k in range(2 * n + 1))
            + sum(ig_count(k, 2 * n, q) for k in range(n + 1)))


# -- subspace enumeration ---------------------------------------------------

def enumerate_subspaces(ambient_dim: int, k: int, field: FieldCtx) -> list[Subspace]:
    """Every k-dimensional subspace of F_q^m exactly once, via echelon shapes."""
    if not 0 <= k <= ambient_dim:
        raise BadRange(f"need 0 <= k <= {ambient_dim}, got {k}")
    count = gr_count(k, ambient_dim, field.q)
    if count > SUBSPACE_LIMIT:
        raise TooLarge(f"{count} subspaces exceeds the enumeration limit", cost=count)
    out = []
    for piv in combinations(range(ambient_dim), k):
        free = [(i, c) for i, pc in enumerate(piv) for c in range(pc + 1, ambient_dim) if c not in piv]
        for vals in product(range(field.q), repeat=len(free)):
            M = [[0] * ambient_dim for _ in range(k)]
            for i, pc in enumerate(piv):
                M[i][pc] = 1
            for (i, c), v in zip(free, vals):
                M[i][c] = v
            out.append(Subspace(field, ambient_dim, tuple(tuple(r) for r in M)))
    return out


def enumerate_isotropic(n: int, k: int, field: FieldCtx) -> list[Subspace]:
    return [S for S in enumerate_subspaces(2 * n, k, field) if is_isotropic(S, n)]


# -- subgroups --------------------------------------------------------------

@dataclass(frozen=True)
class SubgroupRec:
    """A subgroup given by its sorted element ranks.

    ``kind`` is ``"product"`` (S x F_q), ``"graph"`` (graph of a linear map
    rho: S -> F_q over an isotropic S) or ``"other"``; ``None`` until
    :func:`classify_subgroup` has run.
    """

    group: HeisenbergGroup
    elements: tuple[int, ...]
    generators: tuple[int, ...] = ()
    kind: str | None = None
    S: Subspace | None = None
    rho: tuple[int, ...] | None = None
    homogeneous: bool | None = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def points(self) -> np.ndarray:
        return self.group.unrank(np.asarray(self.elements, dtype=np.int64)).reshape(-1, self.group.dim)

    def as_subset(self) -> HSubset:
        return HSubset.from_ranks(self.group, list(self.elements))

    def to_json(self, with_elements: bool = False) -> dict:
        g = self.group
        d = {"q": g.q, "n": g.n, "order": self.order, "kind": self.kind,
             "S_basis": None if self.S is None else self.S.to_json(),
             "rho": None if self.rho is None else list(self.rho),
             "homogeneous": self.homogeneous,
             "generators": [list(g.unrank(r)) for r in self.generators]}
        if with_elements:
            d["elements"] = self.points().tolist()
        return d


def is_subgroup(group: HeisenbergGroup, S: HSubset) -> bool:
    """Nonempty and closed under multiplication (inverses follow by finiteness)."""
    if S.size == 0:
        return False
    pts = S.points()
    prods = group.mul(pts[:, None, :], pts[None, :, :]).reshape(-1, group.dim)
    return bool(S.mask[group.rank(prods)].all())


def _closure_mask(group: HeisenbergGroup, gens: np.ndarray, start: np.ndarray | None = None) -> np.ndarray:
    mask = np.zeros(group.order, dtype=bool)
    mask[0] = True
    frontier = np.zeros((1, group.dim), dtype=np.int64)
    if start is not None:
        mask |= start
        frontier = group.all_points[start]
    gens = gens.reshape(-1, group.dim)
    if len(gens) == 0:
        return mask
    while len(frontier):
        prods = group.mul(frontier[:, None, :], gens[None, :, :]).reshape(-1, group.dim)
        r = np.unique(group.rank(prods))
        new = r[~mask[r]]
        mask[new] = True
        frontier = group.all_points[new]
    return mask


def closure(group: HeisenbergGroup, generators: Sequence) -> SubgroupRec:
    """Smallest subgroup containing ``generators`` (breadth-first saturation)."""
    gens = np.asarray(list(generators), dtype=np.int64).reshape(-1, group.dim)
    mask = _closure_mask(group, gens)
    gen_ranks = tuple(sorted({int(r) for r in np.atleast_1d(group.rank(gens)) if r != 0})) if len(gens) else ()
    return SubgroupRec(group, tuple(int(r) for r in np.flatnonzero(mask)), gen_ranks)


def enumerate_subgroups(group: HeisenbergGroup, classify: bool = True,
                        method: str = "normal") -> list[SubgroupRec]:
    """All subgroups of a group of order <= ENUMERATION_LIMIT.

    ``method="normal"`` climbs by index-p steps: H^n(F_q) is a p-group of
    exponent p, so each subgroup G != 1 has a normal subgroup H of index p
    and G = union of g^k H for any g in G \\ H.  Starting from the trivial
    group and adjoining elements of N(H) \\ H therefore reaches everything.

    ``method="closure"`` extends each known H by single elements g with a
    full closure, skipping g in an already tried coset gH or Hg.  It makes
    no use of p-group structure and serves as the cross-check.
    """
    if group.order > ENUMERATION_LIMIT:
        raise TooLarge(f"|H| = {group.order} exceeds the enumeration limit {ENUMERATION_LIMIT}",
                       cost=group.order)
    if method == "normal":
        found = _enumerate_normal(group)
    elif method == "closure":
        found = _enumerate_closure(group)
    else:
        raise ValueError(f"unknown method {method!r}")
    recs = sorted(found, key=lambda r: (r.order, r.elements))
    if classify:
        recs = [classify_subgroup(r) for r in recs]
    return recs


def cayley_table(group: HeisenbergGroup) -> np.ndarray:
    """``T[a, b] = rank(a * b)`` over point ranks."""
    cache = group.__dict__.setdefault("_cayley", None)
    if cache is None:
        if group.order > ENUMERATION_LIMIT:
            raise TooLarge(f"Cayley table of order {group.order} is too large", cost=group.order**2)
        pts = group.all_points
        cache = group.rank(group.mul(pts[:, None, :], pts[None, :, :])).astype(np.int32)
        group.__dict__["_cayley"] = cache
    return cache


def _enumerate_normal(group):
    T = cayley_table(group)
    inv = group.rank(group.inverse(group.all_points))
    p = group.field.p
    everything = np.arange(group.order)
    trivial = SubgroupRec(group, (0,), ())
    found = {_mask_of(group, (0,)).tobytes(): trivial}
    queue = [trivial]
    head = 0
    while head < len(queue):
        H = queue[head]
        head += 1
        Hel = np.asarray(H.elements)
        Hmask = _mask_of(group, H.elements)
        conj = T[T[everything[:, None], Hel[None, :]], inv[:, None]]
        normalizer = Hmask[conj].all(axis=1)
        covered = Hmask.copy()
        for g in np.flatnonzero(normalizer & ~Hmask):
            if covered[g]:
                continue
            layers = [Hel]
            for _ in range(p - 1):
                layers.append(T[g, layers[-1]])
            mask = np.zeros(group.order, dtype=bool)
            mask[np.concatenate(layers)] = True
            covered |= mask
            key = mask.tobytes()
            gens = tuple(sorted(H.generators + (int(g),)))
            if key in found:
                if gens < found[key].generators:
                    found[key] = dataclasses.replace(found[key], generators=gens)
                continue
            rec = SubgroupRec(group, tuple(int(r) for r in np.flatnonzero(mask)), gens)
            found[key] = rec
            queue.append(rec)
    return list(found.values())


def _enumerate_closure(group):
    pts = group.all_points
    trivial = SubgroupRec(group, (0,), ())
    key0 = _mask_of(group, (0,)).tobytes()
    found = {key0: trivial}
    queue = [trivial]
    head = 0
    while head < len(queue):
        H = queue[head]
        head += 1
        Hmask = _mask_of(group, H.elements)
        Hpts = pts[Hmask]
        covered = Hmask.copy()
        base_gens = pts[list(H.generators)] if H.generators else np.zeros((0, group.dim), dtype=np.int64)
        for g in range(group.order):
            if covered[g]:
                continue
            gp = pts[g]
            covered[group.rank(group.mul(gp[None, :], Hpts))] = True
            covered[group.rank(group.mul(Hpts, gp[None, :]))] = True
            mask = _closure_mask(group, np.vstack([base_gens, gp[None, :]]), start=Hmask)
            key = mask.tobytes()
            gens = tuple(sorted(H.generators + (g,)))
            if key in found:
                if gens < found[key].generators:
                    found[key] = dataclasses.replace(found[key], generators=gens)
                continue
            rec = SubgroupRec(group, tuple(int(r) for r in np.flatnonzero(mask)), gens)
            found[key] = rec
            queue.append(rec)
    return list(found.values())


def _mask_of(group, elements) -> np.ndarray:
    mask = np.zeros(group.order, dtype=bool)
    mask[list(elements)] = True
    return mask


def is_homogeneous(rec: SubgroupRec) -> bool:
    """Invariant under every dilation s.(x, t) = (s x, s^2 t)."""
    g = rec.group
    mask = _mask_of(g, rec.elements)
    pts = rec.points()
    return all(mask[g.rank(g.dilate(int(s), pts))].all() for s in g.field.nonzero())


def classify_subgroup(rec: SubgroupRec, strict: bool | None = None) -> SubgroupRec:
    """Fill in kind, S = pi_h(G), rho and the homogeneity flag.

    ``product`` when |G| = q |S|; ``graph`` when |G| = |S| and t is an
    F_q-linear function of x on G.  Anything else is ``other``, which raises
    :class:`Unclassifiable` when ``strict`` (default: prime fields only).
    """
    g = rec.group
    F = g.field
    if strict is None:
        strict = F.r == 1
    pts = rec.points()
    xs = np.unique(pts[:, :-1], axis=0)
    S = rref(xs, F, 2 * g.n)
    kind, rho = "other", None
    if F.q**S.dim == len(xs):
        if rec.order == len(xs) * F.q:
            kind = "product"
        elif rec.order == len(xs):
            t_of = {tuple(int(v) for v in p[:-1]): int(p[-1]) for p in pts}
            rho_vals = tuple(t_of[b] for b in S.basis)
            coords = S.coordinates(pts[:, :-1])
            pred = np.zeros(len(pts), dtype=np.int64)
            for i, rv in enumerate(rho_vals):
                pred = F.add(pred, F.mul(coords[:, i], rv))
            if np.array_equal(pred, pts[:, -1]) and is_isotropic(S, g.n):
                kind, rho = "graph", rho_vals
    if kind == "other" and strict:
        raise Unclassifiable(f"subgroup of order {rec.order} fits neither product nor graph type")
    return dataclasses.replace(rec, kind=kind, S=S if kind != "other" else None,
                               rho=rho, homogeneous=is_homogeneous(rec))


def matches_homogeneous_shape(rec: SubgroupRec) -> bool:
    """G = S x F_q for an F_q-subspace S, or G = S x {0} with S isotropic."""
    rec = rec if rec.kind is not None else classify_subgroup(rec, strict=False)
    if rec.kind == "product":
        return True
    return rec.kind == "graph" and not any(rec.rho)


# -- complements ------------------------------------------------------------

@dataclass
class ComplementReport:
    subspace: Subspace
    subset: HSubset
    is_subgroup: bool
    homogeneous: bool


def as_vector_subspace(rec: SubgroupRec) -> Subspace:
    """A homogeneous subgroup viewed as a subspace of F_q^(2n+1)."""
    g = rec.group
    rec = rec if rec.kind is not None else classify_subgroup(rec, strict=False)
    if not matches_homogeneous_shape(rec):
        raise ValueError("only homogeneous subgroups are subspaces of F_q^(2n+1)")
    rows = [list(b) + [0] for b in rec.S.basis]
    if rec.kind == "product":
        rows.append([0] * (2 * g.n) + [1])
    return rref(rows, g.field, g.dim)


def heis_complement(rec: SubgroupRec) -> ComplementReport:
    g = rec.group
    perp = orth_complement(as_vector_subspace(rec))
    subset = HSubset.from_points(g, perp.elements())
    sub = is_subgroup(g, subset)
    homog = False
    if sub:
        homog = is_homogeneous(SubgroupRec(g, tuple(int(r) for r in subset.ranks())))
    return ComplementReport(perp, subset, sub, homog)


def subspace_to_subgroup(group: HeisenbergGroup, S: Subspace, vertical: bool) -> SubgroupRec:
    """S x F_q (``vertical``) or S x {0} as a subgroup record (S x {0} needs S isotropic)."""
    xs = S.elements()
    if vertical:
        t = group.field.elements()
        pts = np.concatenate([np.repeat(xs, len(t), axis=0), np.tile(t, len(xs))[:, None]], axis=1)
    else:
        pts = np.concatenate([xs, np.zeros((len(xs), 1), dtype=np.int64)], axis=1)
    rec = SubgroupRec(group, tuple(int(r) for r in np.sort(group.rank(pts))))
    return rec


# -- orbit census -----------------------------------------------------------

@dataclass
class OrbitCensus:
    n_orbits: int
    size_counts: dict
    partition_ok: bool
    sizes_ok: bool


def orbit_census(group: HeisenbergGroup) -> OrbitCensus:
    """Dilation orbits of every point: check they partition the group and have
    size q-1 (x != 0), (q-1)/2 (x = 0, t != 0) or 1 (identity)."""
    q = group.q
    images = group.orbit_ranks()
    sizes = np.array([len(np.unique(images[:, i])) for i in range(group.order)])
    rep = images.min(axis=0)
    pts = group.all_points
    x_nonzero = pts[:, :-1].any(axis=1)
    t_nonzero = pts[:, -1] != 0
    expected = np.where(x_nonzero, q - 1, np.where(t_nonzero, (q - 1) // 2, 1))
    sizes_ok = bool(np.array_equal(sizes, expected))
    reps, counts = np.unique(rep, return_counts=True)
    # every orbit's size equals the number of points mapped to its representative
    partition_ok = bool(np.array_equal(counts, sizes[reps])) and int(counts.sum()) == group.order
    values, mult = np.unique(sizes[reps], return_counts=True)
    return OrbitCensus(len(reps), {int(v): int(m) for v, m in zip(values, mult)}, partition_ok, sizes_ok)
