"""Arithmetic in the finite field F_q, q = p^r with p an odd prime.

Elements are plain integer codes in ``[0, q)``.  For ``r > 1`` the base-p
digits of a code are the coefficients of a polynomial modulo the field's
irreducible ``modulus``, constant term first.  Every operation accepts
Python ints or integer numpy arrays (broadcasting), and returns the same
kind it was given.
"""
from __future__ import annotations

from itertools import product
from typing import Sequence

import numpy as np

from .errors import (
    BadField,
    DivisionByZero,
    EvenCharacteristic,
    NotPrime,
    ReducibleModulus,
    TooLarge,
)

MAX_ORDER = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, r)`` with ``q == p**r``, or raise if q is not a prime power."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    r, m = 0, q
    while m % p == 0:
        m //= p
        r += 1
    if m != 1:
        raise NotPrime(f"{q} is not a prime power")
    return p, r


# --- polynomials over F_p, coefficient lists constant term first -------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _trim(list(poly))
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _poly_mod(poly, list(low) + [1], p):
                return False
    return True


def default_modulus(p: int, r: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree r, ordered by its lower-coefficient code."""
    for code in range(p**r):
        low = [(code // p**i) % p for i in range(r)]
        cand = low + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise ReducibleModulus(f"no irreducible polynomial of degree {r} over F_{p}")  # unreachable


class FieldCtx:
    """The finite field F_q with q = p**r, p odd.

    Parameters
    ----------
    p : int
        Odd prime characteristic.
    r : int
        Extension degree.
    modulus : sequence of int, optional
        Monic irreducible polynomial of degree ``r``, constant term first
        (``r + 1`` coefficients).  Ignored for ``r == 1``.  Defaults to the
        smallest irreducible polynomial, see :func:`default_modulus`.
    """

    def __init__(self, p: int, r: int = 1, modulus: Sequence[int] | None = None):
        p, r = int(p), int(r)
        if p == 2:
            raise EvenCharacteristic("characteristic 2 is not supported (the group law needs 1/2)")
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if r < 1:
            raise BadField(f"extension degree must be >= 1, got {r}")
        if p**r > MAX_ORDER:
            raise TooLarge(f"q = {p}^{r} exceeds the cap {MAX_ORDER}", cost=p**r)
        self.p = p
        self.r = r
        self.q = p**r
        if r == 1:
            self.modulus: tuple[int, ...] = ()
        elif modulus is None:
            self.modulus = default_modulus(p, r)
        else:
            mod = tuple(int(c) % p for c in modulus)
            if len(mod) != r + 1 or mod[-1] != 1:
                raise BadField(f"modulus must be monic of degree {r}: {list(modulus)}")
            if not is_irreducible(mod, p):
                raise ReducibleModulus(f"{list(mod)} is reducible over F_{p}")
            self.modulus = mod
        self._weights = p ** np.arange(r, dtype=np.int64)
        if r > 1:
            self._build_log_tables()
        codes = np.arange(self.q, dtype=np.int64)
        inv = np.zeros(self.q, dtype=np.int64)
        if r == 1:
            inv[1:] = [pow(int(a), p - 2, p) for a in codes[1:]]
        else:
            inv[1:] = self._exp[(self.q - 1 - self._log[1:]) % (self.q - 1)]
        self._inv = inv
        self.two_inv = int(inv[2 % p])

    # -- construction helpers ---------------------------------------------
    def _poly(self, code: int) -> list[int]:
        return [(code // self.p**i) % self.p for i in range(self.r)]

    def _code(self, poly: Sequence[int]) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(poly))

    def _build_log_tables(self) -> None:
        q, p = self.q, self.p
        for g in range(p, q):
            exp = np.empty(2 * (q - 1), dtype=np.int64)
            cur = [1]
            ok = True
            for k in range(q - 1):
                code = self._code(cur)
                if k > 0 and code == 1:
                    ok = False
                    break
                exp[k] = code
                cur = _poly_mod(_poly_mul(cur, self._poly(g), p), self.modulus, p)
            if ok:
                exp[q - 1:] = exp[: q - 1]
                log = np.zeros(q, dtype=np.int64)
                log[exp[: q - 1]] = np.arange(q - 1)
                self._exp, self._log, self.generator = exp, log, g
                return
        raise ReducibleModulus("no primitive element found")  # unreachable for irreducible modulus

    # -- identity -----------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.r, self.modulus) == (
            other.p, other.r, other.modulus)

    def __hash__(self):
        return hash((self.p, self.r, self.modulus))

    def __repr__(self):
        if self.r == 1:
            return f"FieldCtx(p={self.p})"
        return f"FieldCtx(p={self.p}, r={self.r}, modulus={list(self.modulus)})"

    # -- arithmetic ---------------------------------------------------------
    @staticmethod
    def _wrap(x, *inputs):
        if all(isinstance(i, (int, np.integer)) for i in inputs):
            return int(x)
        return x

    def _digits(self, a):
        return (np.asarray(a, dtype=np.int64)[..., None] // self._weights) % self.p

    def add(self, a, b):
        if self.r == 1:
            out = (np.asarray(a, dtype=np.int64) + b) % self.p
        else:
            out = ((self._digits(a) + self._digits(b)) % self.p) @ self._weights
        return self._wrap(out, a, b)

    def neg(self, a):
        if self.r == 1:
            out = (-np.asarray(a, dtype=np.int64)) % self.p
        else:
            out = ((-self._digits(a)) % self.p) @ self._weights
        return self._wrap(out, a)

    def sub(self, a, b):
        if self.r == 1:
            out = (np.asarray(a, dtype=np.int64) - b) % self.p
        else:
            out = ((self._digits(a) - self._digits(b)) % self.p) @ self._weights
        return self._wrap(out, a, b)

    def mul(self, a, b):
        if self.r == 1:
            out = (np.asarray(a, dtype=np.int64) * b) % self.p
        else:
            a_ = np.asarray(a, dtype=np.int64)
            b_ = np.asarray(b, dtype=np.int64)
            out = np.where((a_ == 0) | (b_ == 0), 0, self._exp[self._log[a_] + self._log[b_]])
        return self._wrap(out, a, b)

    def inv(self, a):
        a_ = np.asarray(a, dtype=np.int64)
        if np.any(a_ == 0):
            raise DivisionByZero("inverse of zero")
        return self._wrap(self._inv[a_], a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def half(self, a):
        """``a / 2``."""
        return self.mul(a, self.two_inv)

    def from_int(self, k):
        """Image of an integer under Z -> F_p -> F_q."""
        return self._wrap(np.asarray(k, dtype=np.int64) % self.p, k)

    def power(self, a, k: int):
        out = 1 if isinstance(a, (int, np.integer)) else np.ones_like(np.asarray(a, dtype=np.int64))
        base = a
        if k < 0:
            base, k = self.inv(a), -k
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def arith(self, op: str, a, b=None):
        """Dispatch ``op`` in {add, sub, mul, neg, inv, half}."""
        if op in ("add", "sub", "mul"):
            if b is None:
                raise TypeError(f"{op} needs two operands")
            return getattr(self, op)(a, b)
        if op in ("neg", "inv", "half"):
            return getattr(self, op)(a)
        raise ValueError(f"unknown op {op!r}")

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def nonzero(self) -> np.ndarray:
        return np.arange(1, self.q, dtype=np.int64)

    def subfield_prime(self) -> np.ndarray:
        """Codes of the prime subfield F_p (constant polynomials)."""
        return np.arange(self.p, dtype=np.int64)

    def to_json(self) -> dict:
        return {"p": self.p, "r": self.r, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, d: dict) -> "FieldCtx":
        return cls(d["p"], d.get("r", 1), d.get("modulus") or None)


def field_create(p: int, r: int = 1, modulus: Sequence[int] | None = None) -> FieldCtx:
    return FieldCtx(p, r, modulus)


def field_for_order(q: int) -> FieldCtx:
    """F_q with the default modulus."""
    p, r = prime_power(q)
    return FieldCtx(p, r)


def enumerate_elements(ctx: FieldCtx) -> list[int]:
    return list(range(ctx.q))
