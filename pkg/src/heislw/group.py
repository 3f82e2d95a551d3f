"""The Heisenberg group H^n(F_q) on the underlying set F_q^(2n+1).

Points are integer-code vectors ``(x_1, ..., x_2n, t)``.  Every method
accepts either a single point (tuple/list, returned as a tuple) or an
array of shape ``(..., 2n+1)`` (returned as an array), so the same code
path serves one-off calls and exhaustive scans.

Two kinds of 2n-vectors appear and must not be confused:

* the *identified* plane point ``(x with x_j removed, t')`` in F_q^(2n),
  returned by :meth:`HeisenbergGroup.project` and used to index functions;
* the *un-identified* point of W_j, a full (2n+1)-vector with ``x_j = 0``,
  returned by :meth:`HeisenbergGroup.decompose` and :meth:`embed`.
"""
from __future__ import annotations

from functools import cached_property, reduce

import numpy as np

from .errors import BadAxis, ContextMismatch, ZeroScalar
from .field import FieldCtx, field_for_order


class HeisenbergGroup:
    """H^n(F_q) with multiplication
    ``(x,t)(x',t') = (x+x', t+t'+ omega(x,x')/2)``."""

    def __init__(self, n: int, field: FieldCtx | int):
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if isinstance(field, (int, np.integer)):
            field = field_for_order(int(field))
        self.n = int(n)
        self.field = field
        self.q = field.q
        self.dim = 2 * self.n + 1
        self.order = self.q**self.dim
        self.plane_size = self.q ** (2 * self.n)
        self._weights = self.q ** np.arange(self.dim - 1, -1, -1, dtype=np.int64)
        self._plane_weights = self._weights[1:]

    def __eq__(self, other):
        return isinstance(other, HeisenbergGroup) and (self.n, self.field) == (other.n, other.field)

    def __hash__(self):
        return hash((self.n, self.field))

    def __repr__(self):
        return f"HeisenbergGroup(n={self.n}, q={self.q})"

    # -- validation ---------------------------------------------------------
    def _points(self, a, width=None):
        width = self.dim if width is None else width
        arr = np.asarray(a, dtype=np.int64)
        if arr.ndim == 0 or arr.shape[-1] != width:
            raise ContextMismatch(f"expected vectors of length {width} for {self!r}, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise ContextMismatch(f"coordinates out of range for q={self.q}")
        return arr, arr.ndim == 1

    @staticmethod
    def _out(arr, scalar):
        return tuple(int(v) for v in arr) if scalar else arr

    def _axis(self, j: int) -> tuple[int, int, int]:
        """Sign table: 0-based axis, 0-based partner coordinate, sign of the t shift."""
        if not 1 <= j <= 2 * self.n:
            raise BadAxis(f"axis must be in 1..{2 * self.n}, got {j}")
        if j <= self.n:
            return j - 1, j - 1 + self.n, +1
        return j - 1, j - 1 - self.n, -1

    def _fsum(self, terms, axis=-1):
        F = self.field
        if F.r == 1:
            return terms.sum(axis=axis) % F.p
        terms = np.moveaxis(terms, axis, 0)
        return reduce(F.add, list(terms), np.zeros(terms.shape[1:], dtype=np.int64))

    # -- ranking ------------------------------------------------------------
    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * self.dim

    def rank(self, a):
        arr, scalar = self._points(a)
        r = arr @ self._weights
        return int(r) if scalar else r

    def unrank(self, r):
        r_arr = np.asarray(r, dtype=np.int64)
        out = (r_arr[..., None] // self._weights) % self.q
        return self._out(out, r_arr.ndim == 0)

    def plane_rank(self, y):
        arr, scalar = self._points(y, 2 * self.n)
        r = arr @ self._plane_weights
        return int(r) if scalar else r

    def plane_unrank(self, r):
        r_arr = np.asarray(r, dtype=np.int64)
        out = (r_arr[..., None] // self._plane_weights) % self.q
        return self._out(out, r_arr.ndim == 0)

    @cached_property
    def all_points(self) -> np.ndarray:
        """Every point, row i having rank i."""
        return self.unrank(np.arange(self.order, dtype=np.int64))

    @cached_property
    def all_plane_points(self) -> np.ndarray:
        return self.plane_unrank(np.arange(self.plane_size, dtype=np.int64))

    def projection_ranks(self, j: int) -> np.ndarray:
        """Plane rank of ``project(j, p)`` for every point ``p`` in rank order."""
        cache = self.__dict__.setdefault("_proj_cache", {})
        if j not in cache:
            cache[j] = self.plane_rank(self.project(j, self.all_points))
        return cache[j]

    # -- group law ----------------------------------------------------------
    def symplectic(self, x, y):
        """omega(x, y) = sum_i x_i y_{n+i} - y_i x_{n+i}."""
        F, n = self.field, self.n
        x, sx = self._points(x, 2 * n)
        y, sy = self._points(y, 2 * n)
        left = self._fsum(F.mul(x[..., :n], y[..., n:]))
        right = self._fsum(F.mul(y[..., :n], x[..., n:]))
        out = F.sub(left, right)
        return int(out) if (sx and sy) else out

    def mul(self, a, b):
        F, m = self.field, 2 * self.n
        a, sa = self._points(a)
        b, sb = self._points(b)
        x = F.add(a[..., :m], b[..., :m])
        t = F.add(F.add(a[..., m], b[..., m]), F.half(self.symplectic(a[..., :m], b[..., :m])))
        return self._out(np.concatenate([x, np.asarray(t)[..., None]], axis=-1), sa and sb)

    def inverse(self, a):
        a, s = self._points(a)
        return self._out(self.field.neg(a), s)

    def power(self, a, k: int):
        """``a**k``; equals ``(k x, k t)`` because omega(x, x) = 0."""
        a, s = self._points(a)
        return self._out(self.field.mul(a, self.field.from_int(k)), s)

    def commutator(self, a, b):
        return self.mul(self.mul(a, b), self.mul(self.inverse(a), self.inverse(b)))

    # -- projections --------------------------------------------------------
    def hv_project(self, a):
        """``(pi_h(a), pi_v(a)) = (x, t)``."""
        a, s = self._points(a)
        x, t = a[..., :-1], a[..., -1]
        if s:
            return tuple(int(v) for v in x), int(t)
        return x, t

    def project(self, j: int, a):
        """pi_j followed by the identification W_j = F_q^(2n)."""
        F = self.field
        idx, partner, sign = self._axis(j)
        a, s = self._points(a)
        shift = F.half(F.mul(a[..., idx], a[..., partner]))
        t = F.add(a[..., -1], shift) if sign > 0 else F.sub(a[..., -1], shift)
        out = np.concatenate([np.delete(a[..., :-1], idx, axis=-1), np.asarray(t)[..., None]], axis=-1)
        return self._out(out, s)

    def embed(self, j: int, y):
        """Inverse of the identification: plane point -> point of W_j (x_j = 0)."""
        idx, _, _ = self._axis(j)
        y, s = self._points(y, 2 * self.n)
        return self._out(np.insert(y, idx, 0, axis=-1), s)

    def fiber(self, j: int, base):
        """All q points ``a`` with ``project(j, a) == base``, ordered by the line parameter s."""
        F = self.field
        idx, partner, sign = self._axis(j)
        u = np.asarray(self.embed(j, base), dtype=np.int64)
        s = F.elements()
        pts = np.repeat(u[None, :], self.q, axis=0)
        pts[:, idx] = s
        shift = F.half(F.mul(u[partner], s))
        pts[:, -1] = F.sub(u[-1], shift) if sign > 0 else F.add(u[-1], shift)
        return pts

    def decompose(self, j: int, a):
        """Split ``a = base * shift`` with base in W_j and shift = (x_j e_j, 0) in L_j."""
        idx, _, _ = self._axis(j)
        arr, s = self._points(a)
        base = self.embed(j, self.project(j, arr))
        shift = np.zeros_like(arr)
        shift[..., idx] = arr[..., idx]
        return self._out(base, s), self._out(shift, s)

    def straighten(self, j: int, a):
        """T_j: keep x, move t by the same amount pi_j does.  Carries pi_j-fibers to
        additive translates of L_j."""
        F = self.field
        idx, partner, sign = self._axis(j)
        a, s = self._points(a)
        shift = F.half(F.mul(a[..., idx], a[..., partner]))
        out = a.copy()
        out[..., -1] = F.add(a[..., -1], shift) if sign > 0 else F.sub(a[..., -1], shift)
        return self._out(out, s)

    def unstraighten(self, j: int, a):
        F = self.field
        idx, partner, sign = self._axis(j)
        a, s = self._points(a)
        shift = F.half(F.mul(a[..., idx], a[..., partner]))
        out = a.copy()
        out[..., -1] = F.sub(a[..., -1], shift) if sign > 0 else F.add(a[..., -1], shift)
        return self._out(out, s)

    # -- dilations ----------------------------------------------------------
    def dilate(self, s: int, a):
        """``s . (x, t) = (s x, s^2 t)`` for nonzero s."""
        F = self.field
        if int(s) % self.q == 0 or not 0 < int(s) < self.q:
            raise ZeroScalar(f"dilation scalar must be a nonzero element, got {s}")
        a, sc = self._points(a)
        out = F.mul(a, int(s))
        out[..., -1] = F.mul(a[..., -1], F.mul(int(s), int(s)))
        return self._out(out, sc)

    def orbit(self, a) -> set[tuple[int, ...]]:
        return {self.dilate(int(s), a) for s in self.field.nonzero()}

    def orbit_ranks(self) -> np.ndarray:
        """Array of shape (q-1, order): rank of ``s . p`` for every nonzero s and point p."""
        pts = self.all_points
        return np.stack([self.rank(self.dilate(int(s), pts)) for s in self.field.nonzero()])

    # -- coordinate subgroups -----------------------------------------------
    def coordinate_subgroup(self, j: int, kind: str):
        """W_j = {x_j = 0} (``"vertical_W"``) or L_j = {(s e_j, 0)} (``"horizontal_L"``)."""
        from .sets import HSubset

        idx, _, _ = self._axis(j)
        pts = self.all_points
        if kind == "vertical_W":
            mask = pts[:, idx] == 0
        elif kind == "horizontal_L":
            others = np.delete(pts, idx, axis=1)
            mask = ~others.any(axis=1)
        else:
            raise ValueError(f"unknown kind {kind!r}")
        return HSubset(self, mask)

    # -- serialization ------------------------------------------------------
    def to_json(self) -> dict:
        return {"n": self.n, "q": self.q, "field": self.field.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> "HeisenbergGroup":
        field = FieldCtx.from_json(d["field"]) if "field" in d else field_for_order(d["q"])
        return cls(d["n"], field)
