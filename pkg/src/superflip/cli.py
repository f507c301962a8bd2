"""Command-line front end: the ``superflip`` tool.

Subcommands wrap one workflow each: ``flip`` and ``twist`` transform a
state file, ``orbit`` runs a seeded random flip word, ``markoff``
enumerates classical triples, ``identity`` runs the truncated identity
sum, ``spectrum`` dumps the region table below a norm-length cutoff,
``generators`` builds and checks the holonomy pair, and ``selftest``
runs a quick battery.  All numeric output is full-precision decimal and
deterministic for a fixed configuration and seed; exit status 0 means
every asserted tolerance passed.  Set SUPERFLIP_LOG=debug|info|warning
for logging.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import random
import sys

from .grassmann import GrassmannNumber
from . import identity as identity_mod
from . import markoff as markoff_mod
from . import osp12
from . import torus

class CliError(Exception):
    """User-facing failure with a machine-readable payload."""

    def __init__(self, message: str, payload: dict | None = None, code: int = 1):
        super().__init__(message)
        self.payload = payload or {}
        self.code = code


def _json_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _load_state(path: str | None, n: int = 2) -> torus.DecoratedTorusState:
    if path is None:
        sc = GrassmannNumber.scalar
        z = GrassmannNumber.zero(n)
        return torus.DecoratedTorusState(sc(n, 1), sc(n, 1), sc(n, 1), z, z)
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as e:
        raise CliError(
            f"malformed state JSON at {path}:{e.lineno}:{e.colno}: {e.msg}",
            {"error": "parse", "path": path, "line": e.lineno, "col": e.colno},
            code=2,
        ) from None
    except OSError as e:
        raise CliError(f"cannot read state file: {e}", {"error": "io"}, code=2) from None
    return torus.DecoratedTorusState.from_obj(obj)


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _fmt_g(x: GrassmannNumber) -> str:
    return json.dumps(x.to_obj(), sort_keys=True)


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------
def cmd_flip(args) -> int:
    state = _load_state(args.state)
    h0 = torus.semi_perimeter(state)
    out = torus.flip(state, args.edge)
    h1 = torus.semi_perimeter(out)
    drift = (h1 - h0).norm() / max(1.0, h0.norm())
    print(f"h before: {_fmt_g(h0)}")
    print(f"h after:  {_fmt_g(h1)}")
    print(f"relative drift: {drift!r}")
    _write(args.out, _json_dumps(out.to_obj()))
    if drift > 1e-11:
        raise CliError("semi-perimeter drifted", {"error": "h_drift", "drift": drift})
    return 0


def cmd_twist(args) -> int:
    state = _load_state(args.state)
    h0 = torus.semi_perimeter(state)
    out = torus.dehn_twist(state, args.edge, power=args.power)
    h1 = torus.semi_perimeter(out)
    drift = (h1 - h0).norm() / max(1.0, h0.norm())
    print(f"h before: {_fmt_g(h0)}")
    print(f"h after:  {_fmt_g(h1)}")
    print(f"relative drift: {drift!r}")
    _write(args.out, _json_dumps(out.to_obj()))
    if drift > 1e-11:
        raise CliError("semi-perimeter drifted", {"error": "h_drift", "drift": drift})
    return 0


def cmd_orbit(args) -> int:
    state = _load_state(args.state)
    rng = random.Random(args.seed)
    h0 = torus.semi_perimeter(state)
    cur = state
    word = []
    for _ in range(args.length):
        edges = ["a", "b", "c"]
        rng.shuffle(edges)
        for e in edges:
            nxt = torus.flip(cur, e)
            if max(x.body for x in nxt.lambdas()) < 1e100:
                cur = nxt
                word.append(e)
                break
        else:
            raise CliError("orbit left the floating-point range", {"error": "overflow"})
    h1 = torus.semi_perimeter(cur)
    drift = (h1 - h0).norm() / max(1.0, h0.norm())
    print(f"word: {''.join(word)}")
    print(f"relative h drift: {drift!r}")
    _write(args.out, _json_dumps(cur.to_obj()))
    if drift > 1e-9:
        raise CliError("semi-perimeter drifted", {"error": "h_drift", "drift": drift})
    return 0


def cmd_markoff(args) -> int:
    state = _load_state(args.state)
    classical = state.sigma.is_zero() and state.theta.is_zero() and all(
        x.soul().is_zero() for x in state.lambdas()
    )
    if not classical and not args.body_only:
        raise CliError(
            "state has nonzero odd or soul data; pass --body-only to project",
            {"error": "not_classical"},
        )
    sink = markoff_mod.find_sink(state)
    h = sink.h.body
    triple0 = tuple(sorted(r.lam.body for r in sink.regions))
    rows = []
    seen = set()
    worst = 0.0
    queue = [(tuple(r.lam.body for r in sink.regions), -1, 0)]
    while queue:
        tri, parent, depth = queue.pop(0)
        key = tuple(sorted(tri))
        if key not in seen:
            seen.add(key)
            res = abs(sum(x * x for x in key) - h * key[0] * key[1] * key[2])
            rel = res / (h * key[0] * key[1] * key[2])
            worst = max(worst, rel)
            rows.append(
                {"a": key[0], "b": key[1], "c": key[2], "residual": rel, "depth": depth}
            )
        if depth >= args.depth:
            continue
        for i in range(3):
            if i == parent:
                continue
            j, k = [x for x in range(3) if x != i]
            new = (tri[j] ** 2 + tri[k] ** 2) / tri[i]
            child = list(tri)
            child[i] = new
            queue.append((tuple(child), i, depth + 1))
    rows.sort(key=lambda r: (r["depth"], r["a"], r["b"], r["c"]))
    buf = ["a,b,c,residual,depth"]
    for r in rows:
        buf.append(f"{r['a']!r},{r['b']!r},{r['c']!r},{r['residual']!r},{r['depth']}")
    _write(args.out, "\n".join(buf) + "\n")
    print(f"{len(rows)} triples, worst relative residual {worst!r}")
    if worst > 1e-12:
        raise CliError("Markoff residual above tolerance", {"error": "residual", "worst": worst})
    return 0


def cmd_identity(args) -> int:
    state = _load_state(args.state)
    report = identity_mod.verify_identity(
        state,
        cutoff_length=args.cutoff_length,
        tol_body=args.tol,
        tol_norm=max(args.tol, 1e-5),
        delta=args.delta,
        workers=args.workers,
    )
    payload = report.to_obj()
    _write(args.out, _json_dumps(payload))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(report.rows[0].keys()))
            writer.writeheader()
            writer.writerows(report.rows)
    print(
        f"regions={report.region_count} deviation_body={report.deviation_body!r} "
        f"deviation_norm={report.deviation_norm!r} tail={report.tail_bound!r}"
    )
    if not report.converged:
        raise CliError("identity deviation above tolerance", {"error": "identity", **payload})
    return 0


def cmd_spectrum(args) -> int:
    state = _load_state(args.state)
    sink = markoff_mod.find_sink(state)
    h = sink.h
    cutoff = math.exp(args.lmax) * 2.0 * h.body
    regions = markoff_mod.enumerate_regions(state, cutoff, workers=args.workers)
    pairs = [
        (row, reg)
        for row, reg in zip(markoff_mod.region_table_rows(regions, h), regions)
        if math.log(reg.lam.norm()) < args.lmax
    ]
    buf = ["address,slope_p,slope_q,body_lambda,norm_soul,body_length"]
    for row, _ in pairs:
        buf.append(
            f"{row['address']},{row['slope_p']},{row['slope_q']},"
            f"{row['body_lambda']!r},{row['norm_soul']!r},{row['body_length']!r}"
        )
    _write(args.out, "\n".join(buf) + "\n")
    if args.sidecar:
        sidecar = markoff_mod.region_sidecar([reg for _, reg in pairs], h)
        with open(args.sidecar, "w") as fh:
            fh.write(_json_dumps(sidecar))
    print(f"{len(pairs)} curves with log-norm below {args.lmax}")
    return 0


def cmd_generators(args) -> int:
    state = _load_state(args.state)
    pair = osp12.build_generators(state)
    payload = {
        "g_a": pair.g_a.to_obj(),
        "g_b": pair.g_b.to_obj(),
        "r_a": pair.r_a.to_obj(),
        "r_b": pair.r_b.to_obj(),
        "residuals": pair.residuals,
    }
    _write(args.out, _json_dumps(payload))
    for name, value in sorted(pair.residuals.items()):
        print(f"{name}: {value!r}")
    bad = {
        k: v
        for k, v in pair.residuals.items()
        if v > (1e-9 if "mapping" in k else 1e-10)
    }
    if bad:
        raise CliError("generator residuals above tolerance", {"error": "generators", **bad})
    return 0


def cmd_selftest(args) -> int:
    rng = random.Random(args.seed)
    failures = []

    def check(name, ok, detail=""):
        print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
        if not ok:
            failures.append(name)

    n = 2
    sc = GrassmannNumber.scalar
    b1, b2 = GrassmannNumber.generator(n, 1), GrassmannNumber.generator(n, 2)

    x = sc(n, 2) + b1 * b2
    check("grassmann inverse", (x * x.inverse() - 1).norm() < 1e-14)
    check("grassmann sqrt", (x.sqrt() ** 2 - x).norm() < 1e-14)

    st = torus.DecoratedTorusState(sc(n, 1), sc(n, 1), sc(n, 1), b1 * 0.1, b2 * 0.1)
    check("flip involution", torus.flip(torus.flip(st, "c"), "c").isclose(st, 1e-12))

    drift = 0.0
    for _ in range(10):
        s = torus.random_state(rng)
        h0 = torus.semi_perimeter(s)
        cur = s
        for _ in range(12):
            for e in rng.sample(["a", "b", "c"], 3):
                nxt = torus.flip(cur, e)
                if max(v.body for v in nxt.lambdas()) < 1e100:
                    cur = nxt
                    break
        drift = max(drift, (torus.semi_perimeter(cur) - h0).norm() / max(1.0, h0.norm()))
    check("semi-perimeter invariance", drift < 1e-9, f"drift={drift:.2e}")

    rep = identity_mod.verify_identity(st, cutoff_length=18.0)
    check(
        "identity partial sum",
        rep.deviation_norm < 1e-3 and rep.deviation_body < 1e-6,
        f"dev={rep.deviation_norm:.2e}",
    )

    pair = osp12.build_generators(torus.random_state(rng))
    worst = max(pair.residuals.values())
    check("generator contracts", worst < 1e-9, f"worst={worst:.2e}")

    if failures:
        raise CliError("selftest failed: " + ", ".join(failures), {"error": "selftest"})
    print("all selftests passed")
    return 0


# ----------------------------------------------------------------------
# argument wiring
# ----------------------------------------------------------------------
def _add_common(p: argparse.ArgumentParser, edge=False) -> None:
    p.add_argument("--state", help="state JSON file (default: classical (1,1,1))")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--cutoff-length", dest="cutoff_length", type=float, default=24.0)
    if edge:
        p.add_argument("--edge", choices=["a", "b", "c"], default="c")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superflip",
        description="super Ptolemy flips, Markoff trees and the super McShane identity",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("flip", help="flip one edge of a state file")
    _add_common(p, edge=True)
    p.set_defaults(func=cmd_flip)

    p = sub.add_parser("twist", help="Dehn twist a state file")
    _add_common(p, edge=True)
    p.add_argument("--power", type=int, default=1)
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("orbit", help="seeded random flip word, reports h drift")
    _add_common(p)
    p.add_argument("--length", type=int, default=25)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("markoff", help="classical triple tree with residuals")
    _add_common(p)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--body-only", action="store_true")
    p.set_defaults(func=cmd_markoff)

    p = sub.add_parser("identity", help="truncated super McShane identity")
    _add_common(p)
    p.add_argument("--csv", help="also write the per-curve table here")
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("spectrum", help="length spectrum table below --Lmax")
    _add_common(p)
    p.add_argument("--Lmax", dest="lmax", type=float, default=10.0)
    p.add_argument("--sidecar", help="also write full Grassmann values to this JSON path")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("generators", help="holonomy generators and residuals")
    _add_common(p)
    p.set_defaults(func=cmd_generators)

    p = sub.add_parser("selftest", help="quick verification battery")
    _add_common(p)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    level = os.environ.get("SUPERFLIP_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        sys.stderr.write(_json_dumps({"failure": str(e), **e.payload}))
        return e.code


if __name__ == "__main__":
    sys.exit(main())
