"""Exhaustive structural checks on a concrete H^n(F_q)."""
from __future__ import annotations

import numpy as np

from .errors import TooLarge
from .group import HeisenbergGroup

ASSOC_LIMIT = 800  # order^3 table lookups


def verify_group_axioms(group: HeisenbergGroup) -> dict:
    """Associativity over all triples, identity, inverses, and a noncommuting pair."""
    if group.order > ASSOC_LIMIT:
        raise TooLarge(f"all-triples associativity needs order <= {ASSOC_LIMIT}", cost=group.order**3)
    pts = group.all_points
    T = group.rank(group.mul(pts[:, None, :], pts[None, :, :]))
    idx = np.arange(group.order)
    assoc = bool(all(np.array_equal(T[T[a], :], T[a][T]) for a in idx))
    e = group.rank(group.identity)
    identity = bool(np.array_equal(T[e], idx) and np.array_equal(T[:, e], idx))
    inv = group.rank(group.inverse(pts))
    inverse = bool(np.all(T[idx, inv] == e) and np.all(T[inv, idx] == e))
    a, b = np.argwhere(T != T.T)[0] if (T != T.T).any() else (None, None)
    witness = None if a is None else [list(group.unrank(int(a))), list(group.unrank(int(b)))]
    return {"order": group.order, "triples": group.order**3, "associative": assoc,
            "identity": identity, "inverses": inverse, "noncommuting_pair": witness}


def verify_projection_structure(group: HeisenbergGroup) -> dict:
    """For every point and every axis j: a = embed(pi_j(a)) * (x_j e_j, 0); each
    pi_j-fiber is the left coset base * L_j; the straightened fiber is an
    additive translate of L_j."""
    pts = group.all_points
    F = group.field
    out = {"decomposition": True, "fiber_is_coset": True, "straightened_is_translate": True,
           "failures": []}
    for j in range(1, 2 * group.n + 1):
        base, shift = group.decompose(j, pts)
        if not np.array_equal(group.mul(base, shift), pts):
            out["decomposition"] = False
            out["failures"].append({"j": j, "check": "decomposition"})
        idx, _, _ = group._axis(j)
        line = np.zeros((group.q, group.dim), dtype=np.int64)
        line[:, idx] = F.elements()
        line_ranks = set(group.rank(line).tolist())
        for y in group.all_plane_points:
            fib = group.fiber(j, y)
            u = np.asarray(group.embed(j, y))
            coset = group.mul(np.broadcast_to(u, line.shape), line)
            if (set(group.rank(fib).tolist()) != set(group.rank(coset).tolist())
                    or not np.all(group.project(j, fib) == y)):
                out["fiber_is_coset"] = False
                out["failures"].append({"j": j, "check": "fiber", "base": y.tolist()})
            st = group.straighten(j, fib)
            diff = F.sub(st, st[:1])
            if set(group.rank(diff).tolist()) != line_ranks:
                out["straightened_is_translate"] = False
                out["failures"].append({"j": j, "check": "straighten", "base": y.tolist()})
    out["ok"] = out["decomposition"] and out["fiber_is_coset"] and out["straightened_is_translate"]
    return out
