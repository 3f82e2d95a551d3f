"""Command-line experiment runner.

Every subcommand writes one JSON object per line (region-scan can write CSV),
checks the invariants it is about, and exits 0 if they all hold, 1 on a
violation (the offending witness is in the report) and 2 on bad usage.
Output depends only on the arguments: items get their own seeded generator
and are emitted in input order whatever ``--threads`` is.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .checks import verify_group_axioms, verify_projection_structure
from .constants import (
    endpoint_opnorms,
    exhaustive_indicator_constant,
    extremize_ratio,
    mixed_exponent_check,
    opnorm_lower_bound,
    reevaluate,
    region_scan,
)
from .errors import HeisError, TooLarge
from .field import field_for_order, prime_power
from .functions import exponent, fmt_exponent
from .group import HeisenbergGroup
from .sets import (
    chen_family,
    hyperplanes_with_normals,
    incidence_count,
    incidence_set_check,
    lw_set_check,
    random_incidence_instance,
    random_subset,
    sharp_example,
    vinh_bound,
)
from .subgroups import (
    ENUMERATION_LIMIT,
    enumerate_subgroups,
    homogeneous_count_formula,
    subgroup_count_formula,
)

logger = logging.getLogger("heislw")

REGION_COLUMNS = ["u1", "u2", "q", "ratio", "class", "ratio_A", "ratio_B"]


@dataclass
class RunConfig:
    command: str
    n: int = 1
    qs: list = field(default_factory=lambda: [3])
    p: int | None = None
    seed: int = 0
    samples: int | None = None
    tol: float = 1e-9
    out: str | None = None
    fmt: str = "jsonl"
    threads: int = 1
    grid: float = 0.05
    k: int | None = None
    exponents: list | None = None
    method: str = "ascent"
    restarts: int = 8
    max_iter: int = 200
    r_max: int = 8
    action: str | None = None
    with_elements: bool = False


def _rng(cfg: RunConfig, *salt: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, *salt])


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    raise TypeError(f"cannot serialize {type(x).__name__}")


# -- subcommands: each returns (records, violations) ------------------------

def _verify_group(cfg, q):
    g = HeisenbergGroup(cfg.n, q)
    try:
        axioms = verify_group_axioms(g)
    except TooLarge:
        rng = _rng(cfg, q, cfg.n)
        a, b, c = (rng.integers(g.order, size=cfg.samples or 10000) for _ in range(3))
        A, B, C = (g.unrank(v) for v in (a, b, c))
        axioms = {"order": g.order, "triples": int(len(a)), "sampled": True,
                  "associative": bool(np.array_equal(g.mul(g.mul(A, B), C), g.mul(A, g.mul(B, C)))),
                  "identity": True, "inverses": True, "noncommuting_pair": None}
    proj = verify_projection_structure(g)
    rec = {"check": "verify-group", "n": cfg.n, "q": q, **axioms,
           **{k: v for k, v in proj.items() if k != "failures"}}
    bad = [] if (axioms["associative"] and axioms["identity"] and axioms["inverses"] and proj["ok"]) \
        else [{"check": "verify-group", "q": q, "failures": proj["failures"][:10]}]
    return [rec], bad


def _region(cfg, q):
    steps = int(round(1 / cfg.grid))
    if not math.isclose(steps * cfg.grid, 1.0):
        raise HeisError(f"--grid must divide 1, got {cfg.grid}")
    rows = region_scan([q], steps)
    bad = []
    for r in rows:
        for fam in "AB":
            err = abs(r[f"ratio_{fam}"] - r[f"closed_{fam}"]) / r[f"closed_{fam}"]
            if err > cfg.tol:
                bad.append({"check": "family-closed-form", "family": fam, **r})
        if r["class"] == "boundary" and abs(r["ratio"] - 1.0) > 1e-12:
            bad.append({"check": "boundary-ratio", **r})
    out = [{k: r[k] for k in REGION_COLUMNS} for r in rows]
    return out, bad


def _lw_check(cfg, q):
    g = HeisenbergGroup(cfg.n, q)
    ks = range(cfg.n + 1) if cfg.k is None else [cfg.k]
    recs, bad = [], []
    for k in ks:
        rep = mixed_exponent_check(g, k, samples=cfg.samples or 1000, seed=cfg.seed)
        d = {"check": "lw-check", **rep.to_json()}
        recs.append(d)
        if not rep.all_finite or any(s.ratio != 1.0 for s in rep.sharp):
            bad.append(d)
    return recs, bad


def _extremize(cfg, q):
    us = cfg.exponents or ["3/2", "3/2"]
    if cfg.method == "exhaustive":
        rep = exhaustive_indicator_constant(q, *us)
    elif cfg.method == "opnorm":
        rep = opnorm_lower_bound(q, *us, restarts=cfg.restarts, max_iter=cfg.max_iter,
                                 tol=cfg.tol, seed=cfg.seed)
    elif cfg.method == "ascent":
        rep = extremize_ratio(HeisenbergGroup(cfg.n, q), us, restarts=cfg.restarts,
                              max_iter=cfg.max_iter, tol=cfg.tol, seed=cfg.seed)
    else:
        raise HeisError(f"unknown method {cfg.method!r}")
    again = reevaluate(rep)
    rec = {"check": "extremize", **rep.to_json(), "reevaluated": again}
    if cfg.method == "opnorm":
        rec["endpoints"] = endpoint_opnorms(q)
    bad = [] if abs(again - rep.value) <= 1e-9 * max(1.0, rep.value) else [rec]
    return [rec], bad


def _set_lw(cfg, q):
    g = HeisenbergGroup(cfg.n, q)
    rng = _rng(cfg, q, cfg.n)
    recs, bad = [], []
    sharp = [("flat", sharp_example(g, "flat"))]
    if cfg.n == 1:
        sharp.append(("line_t0", sharp_example(g, "line_t0")))
        for m in (1, 2):
            sharp.append((f"box{m}", sharp_example(g, "box", A=range(m), B=range(m))))
    for name, K in sharp:
        rep = lw_set_check(K)
        d = {"check": "set-lw-sharp", "q": q, "n": cfg.n, "name": name, **rep.to_json()}
        if name in ("flat", "line_t0") and rep.ratio != 1.0:
            bad.append(d)
        if cfg.n == 1:
            inc = incidence_set_check(K, cfg.tol)
            d["incidences"], d["chain_ok"] = inc.incidences, inc.ok
            if not inc.ok:
                bad.append(d)
        recs.append(d)
    worst, chain_bad = None, 0
    for i in range(cfg.samples or 500):
        K = random_subset(g, rng)
        rep = lw_set_check(K)
        if worst is None or rep.ratio > worst[0]:
            worst = (rep.ratio, i, rep.lhs, rep.proj_sizes)
        if cfg.n == 1:
            inc = incidence_set_check(K, cfg.tol)
            if not inc.ok:
                chain_bad += 1
                bad.append({"check": "incidence-chain", "q": q, "sample": i, "points": K.points().tolist()})
    recs.append({"check": "set-lw", "q": q, "n": cfg.n, "samples": cfg.samples or 500,
                 "max_ratio": worst[0], "max_sample": worst[1], "max_size": worst[2],
                 "max_proj_sizes": worst[3], "chain_violations": chain_bad})
    return recs, bad


def _incidence(cfg, q):
    F = field_for_order(q)
    rng = _rng(cfg, q)
    bad, worst = [], 0.0
    total = cfg.samples or 500
    for i in range(total):
        inst = random_incidence_instance(F, rng, vertical=True)
        c, b = incidence_count(inst), vinh_bound(inst)
        worst = max(worst, c / b)
        if c > b * (1 + cfg.tol):
            bad.append({"check": "vinh", "q": q, "sample": i, "count": c, "bound": b, **inst.to_json()})
    return [{"check": "incidence", "q": q, "samples": total, "max_count_over_bound": worst,
             "violations": len(bad)}], bad


def _chen(cfg, q):
    g = HeisenbergGroup(cfg.n, q)
    hyper = hyperplanes_with_normals(g)
    rng = _rng(cfg, q, cfg.n)
    bad, checks, neither = [], 0, 0
    counts = {"b1_checked": 0, "b1_failed": 0, "b2_checked": 0, "b2_failed": 0}
    for i in range(cfg.samples or 500):
        K = random_subset(g, rng)
        for r in range(1, min(cfg.r_max, g.plane_size - 1) + 1):
            rep = chen_family(K, r, hyper)
            checks += 1
            neither += rep.in_neither
            for b in ("b1", "b2"):
                ok = getattr(rep, f"{b}_ok")
                if ok is not None:
                    counts[f"{b}_checked"] += 1
                    if not ok:
                        counts[f"{b}_failed"] += 1
                        bad.append({"check": f"chen-{b}", "q": q, "sample": i, "r": r,
                                    "family_size": rep.size, "bound": getattr(rep, b),
                                    "K": K.points().tolist()})
    return [{"check": "chen", "q": q, "n": cfg.n, "hyperplanes": len(hyper), "samples": cfg.samples or 500,
             "r_max": cfg.r_max, "checks": checks, "in_neither": neither, **counts}], bad


def _subgroups(cfg, q):
    if cfg.action == "count":
        p = q
        pk = subgroup_count_formula(cfg.n, p, "pk")
        kp = subgroup_count_formula(cfg.n, p, "kp")
        g = HeisenbergGroup(cfg.n, p)
        enumerated = homog = None
        if g.order <= ENUMERATION_LIMIT:
            recs = enumerate_subgroups(g)
            enumerated = len(recs)
            homog = sum(r.homogeneous for r in recs)
        rec = {"check": "subgroups-count", "n": cfg.n, "p": p, "formula": pk, "formula_kp": kp,
               "enumerated": enumerated, "match": None if enumerated is None else pk == enumerated,
               "match_kp": None if enumerated is None else kp == enumerated,
               "homogeneous_formula": homogeneous_count_formula(cfg.n, p), "homogeneous_enumerated": homog}
        bad = [rec] if enumerated is not None and (pk != enumerated or homog != rec["homogeneous_formula"]) else []
        return [rec], bad
    g = HeisenbergGroup(cfg.n, q)
    recs = enumerate_subgroups(g)
    out = [{"check": "subgroup", "index": i, **r.to_json(cfg.with_elements)} for i, r in enumerate(recs)]
    by_order: dict = {}
    kinds: dict = {}
    for r in recs:
        by_order[r.order] = by_order.get(r.order, 0) + 1
        kinds[r.kind] = kinds.get(r.kind, 0) + 1
    out.append({"check": "subgroups-enumerate", "n": cfg.n, "q": q, "total": len(recs),
                "homogeneous": sum(r.homogeneous for r in recs),
                "by_order": {str(k): v for k, v in sorted(by_order.items())},
                "kinds": dict(sorted(kinds.items()))})
    return out, []


COMMANDS: dict[str, Callable] = {
    "verify-group": _verify_group,
    "region-scan": _region,
    "lw-check": _lw_check,
    "extremize": _extremize,
    "set-lw": _set_lw,
    "incidence": _incidence,
    "chen": _chen,
    "subgroups": _subgroups,
}


def _render(cfg: RunConfig, records: list) -> str:
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=REGION_COLUMNS if cfg.command == "region-scan"
                           else sorted({k for r in records for k in r}), extrasaction="ignore",
                           lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow({k: (json.dumps(v, default=_jsonable) if isinstance(v, (list, dict)) else v)
                        for k, v in r.items()})
        return buf.getvalue()
    return "".join(json.dumps(r, sort_keys=True, default=_jsonable) + "\n" for r in records)


def run(cfg: RunConfig) -> int:
    """Execute one subcommand; returns the exit code."""
    fn = COMMANDS[cfg.command]
    items = [cfg.p] if (cfg.command == "subgroups" and cfg.action == "count") else cfg.qs
    with ThreadPoolExecutor(max_workers=max(1, cfg.threads)) as pool:
        results = list(pool.map(lambda q: fn(cfg, q), items))
    records = [r for recs, _ in results for r in recs]
    violations = [v for _, bad in results for v in bad]
    if cfg.fmt == "jsonl":
        records.append({"check": "summary", "command": cfg.command, "items": len(items),
                        "violations": len(violations), "status": "fail" if violations else "pass"})
        records.extend({"violation": v} for v in violations[:20])
    text = _render(cfg, records)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if violations:
        logger.warning("%s: %d violation(s)", cfg.command, len(violations))
    return 1 if violations else 0


def _int_list(s: str) -> list[int]:
    return [int(v) for v in s.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=1)
    common.add_argument("--q", type=int, dest="q_single")
    common.add_argument("--q-list", type=_int_list)
    common.add_argument("--p", type=int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--out")
    common.add_argument("--format", dest="fmt", choices=["jsonl", "csv"])
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="heislw", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("verify-group", parents=[common], help="group axioms, decomposition, fibers")
    rs = sub.add_parser("region-scan", parents=[common], help="family ratios over an exponent grid")
    rs.add_argument("--grid", type=float, default=0.05)
    lw = sub.add_parser("lw-check", parents=[common], help="uniform and mixed exponent ratio corpus")
    lw.add_argument("--k", type=int)
    ex = sub.add_parser("extremize", parents=[common], help="lower bounds for best constants")
    ex.add_argument("--exponents", type=lambda s: s.split(","))
    ex.add_argument("--method", choices=["ascent", "exhaustive", "opnorm"], default="ascent")
    ex.add_argument("--restarts", type=int, default=8)
    ex.add_argument("--max-iter", type=int, default=200)
    sub.add_parser("set-lw", parents=[common], help="set inequalities and the incidence chain")
    sub.add_parser("incidence", parents=[common], help="random point-line instances against Vinh")
    ch = sub.add_parser("chen", parents=[common], help="hyperplane covering families")
    ch.add_argument("--r-max", type=int, default=8)
    sg = sub.add_parser("subgroups", parents=[common], help="enumerate or count subgroups")
    sg.add_argument("action", choices=["enumerate", "count"])
    sg.add_argument("--with-elements", action="store_true")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    qs = ns.q_list or ([ns.q_single] if ns.q_single else [3])
    for q in qs:
        p, _ = prime_power(q)
        if p == 2:
            raise HeisError(f"q must be odd, got {q}")
    cfg = RunConfig(ns.command, n=ns.n, qs=qs, p=ns.p, seed=ns.seed, samples=ns.samples,
                    tol=ns.tol, out=ns.out, threads=ns.threads)
    cfg.fmt = ns.fmt or ("csv" if ns.command == "region-scan" else "jsonl")
    for name in ("grid", "k", "exponents", "method", "restarts", "max_iter", "r_max", "action",
                 "with_elements"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if cfg.exponents:
        cfg.exponents = [fmt_exponent(exponent(u)) for u in cfg.exponents]
    if cfg.command == "subgroups" and cfg.action == "count" and cfg.p is None:
        cfg.p = qs[0]
    return cfg


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return run(config_from_args(ns))
    except (HeisError, ValueError) as exc:
        print(f"heislw: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
