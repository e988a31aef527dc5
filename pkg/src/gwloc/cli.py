"""Command-line driver: config parsing, invariant computation, identity
verification, oracle tables, graph dumps, and a content-addressed result
cache.

Exit codes: 0 success (and verification pass), 1 computational failure or
verification failure, 2 usage/schema error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from . import __version__
from .coh_ring import BundleSpec
from .exprparse import ParseError, parse_insertion
from .identity_suite import (IdentityCase, bundled_cases, case_from_dict,
                             run_case)
from .loc_engine import (MODE_EULER, MODE_INVERSE, TwistSpec, compute_invariant,
                         nonequivariant_limit)
from .oracles import aspinwall_morrison, lines_on_hypersurface, qh_pn_checks, quintic_lines, wdvv_p2
from .graph_enum import enumerate_graphs
from .target_model import CurveClass, TargetModel, build_target


class UsageError(Exception):
    pass


def _schema(name: str) -> dict:
    with resources.files("gwloc").joinpath(f"schema/{name}").open("r") as f:
        return json.load(f)


def load_config(path: str) -> dict:
    try:
        with open(path) as f:
            config = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    try:
        jsonschema.validate(config, _schema("config.schema.json"))
    except jsonschema.ValidationError as exc:
        raise UsageError(f"config schema violation: {exc.message}")
    return config


def build_model(config: dict) -> TargetModel:
    t = config["target"]
    kind = t["kind"]
    if kind == "point":
        return build_target("point")
    if kind == "projective_space":
        return build_target("projective_space", BundleSpec(t["base_dim"], (0,)))
    spec = BundleSpec(t["base_dim"], tuple(t["twists"]))
    return build_target("proj_bundle", spec, allow_negative=bool(t.get("allow_negative", False)))


def build_class(config: dict, model: TargetModel) -> CurveClass:
    c = config.get("class", {})
    if model.kind == "proj_bundle":
        return CurveClass(int(c.get("d_base", 0)), int(c.get("d_h", 0)))
    return CurveClass(int(c.get("d", c.get("d_base", 0))), None)


def build_twist(config: dict) -> TwistSpec | None:
    t = config.get("twist")
    if not t:
        return None
    mode = t.get("mode", MODE_INVERSE)
    if t.get("tautological"):
        return TwistSpec.tautological_sub(mode=mode)
    return TwistSpec.bundle_sum(t["summands"], mode=mode)


def build_insertions(config: dict, model: TargetModel, cls: CurveClass):
    exprs = config.get("insertions", [])
    n = len(exprs)
    bound = max(model.dimension + model.anticanonical_pairing(cls) + n - 3, 0)
    return [parse_insertion(s, model.ring, bound) for s in exprs]


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------

def cache_dir(config: dict) -> Path | None:
    path = config.get("cache_dir") or os.environ.get("GWLOC_CACHE_DIR")
    return Path(path) if path else None


def cache_key(config: dict) -> str:
    """Content address of a compute config; the weight seed is excluded
    because invariant results are seed-independent."""
    stripped = {k: v for k, v in config.items() if k not in ("seed", "cache_dir")}
    payload = json.dumps({"config": stripped, "version": __version__}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()


def cache_load(cdir: Path | None, key: str) -> dict | None:
    if cdir is None:
        return None
    path = cdir / f"{key}.json"
    if not path.exists():
        return None
    try:
        with open(path) as f:
            entry = json.load(f)
        if entry.get("engine_version") != __version__:
            return None
        return entry
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"warning: ignoring corrupt cache entry {path}: {exc}", file=sys.stderr)
        return None


def cache_store(cdir: Path | None, key: str, entry: dict) -> None:
    if cdir is None:
        return
    cdir.mkdir(parents=True, exist_ok=True)
    tmp = cdir / f"{key}.json.tmp"
    with open(tmp, "w") as f:
        json.dump(entry, f, sort_keys=True)
    tmp.replace(cdir / f"{key}.json")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_compute(args) -> int:
    config = load_config(args.config)
    cdir = cache_dir(config)
    key = cache_key(config)
    cached = cache_load(cdir, key)
    if cached is not None:
        cached["cache"] = "hit"
        print(json.dumps(cached, sort_keys=True, indent=2))
        return 0
    model = build_model(config)
    cls = build_class(config, model)
    twist = build_twist(config)
    insertions = build_insertions(config, model, cls)
    t0 = time.time()
    res = compute_invariant(model, cls, insertions, twist, seed=int(config.get("seed", 0)))
    report = {
        "config": {k: v for k, v in config.items() if k != "cache_dir"},
        "laurent": res.value.as_strings(),
        "graphs": res.graphs,
        "timing_s": round(time.time() - t0, 3),
        "seeds": list(res.weight_seeds),
        "engine_version": __version__,
        "cache": "miss",
    }
    if args.limit:
        report["nonequivariant_limit"] = str(nonequivariant_limit(res))
    cache_store(cdir, key, report)
    print(json.dumps(report, sort_keys=True, indent=2))
    return 0


def _load_case(path: str) -> IdentityCase:
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read case {path}: {exc}")
    try:
        jsonschema.validate(data, _schema("case.schema.json"))
    except jsonschema.ValidationError as exc:
        raise UsageError(f"case schema violation: {exc.message}")
    return case_from_dict(data)


def cmd_verify(args) -> int:
    if args.case:
        cases = [_load_case(args.case)]
    elif args.all:
        cases = bundled_cases()
    else:
        cases = [c for c in bundled_cases() if c.identity == args.identity]
        if not cases:
            raise UsageError(f"no bundled cases for identity {args.identity!r}")
    if args.identity:
        cases = [c for c in cases if c.identity == args.identity]
        if not cases:
            raise UsageError("selected case does not match the requested identity")
    reports = []
    all_pass = True
    for case in cases:
        t0 = time.time()
        rep = run_case(case, seed=args.seed)
        all_pass &= rep.passed
        entry = rep.as_json()
        entry["timing_s"] = round(time.time() - t0, 3)
        reports.append(entry)
    out = {"reports": reports, "verdict": "pass" if all_pass else "fail",
           "engine_version": __version__}
    print(json.dumps(out, sort_keys=True, indent=2))
    return 0 if all_pass else 1


def cmd_oracle(args) -> int:
    name = args.name
    if name == "wdvv_p2":
        table = wdvv_p2(args.d_max or 4)
        out = {str(k): str(v) for k, v in table.entries.items()}
    elif name == "quintic_lines":
        out = {"quintic_lines": str(quintic_lines())}
    elif name == "lines_on_hypersurface":
        out = {"value": str(lines_on_hypersurface(args.n or 4, args.k or 5))}
    elif name == "aspinwall_morrison":
        out = {str(d): str(aspinwall_morrison(d)) for d in range(1, (args.d_max or 3) + 1)}
    elif name == "qh_pn_checks":
        out = {k: str(v) for k, v in qh_pn_checks().entries.items()}
    else:
        raise UsageError(f"unknown oracle {name!r}")
    print(json.dumps(out, sort_keys=True, indent=2))
    return 0


def cmd_dump_graphs(args) -> int:
    config = load_config(args.config)
    model = build_model(config)
    cls = build_class(config, model)
    n = len(config.get("insertions", []))
    for g in enumerate_graphs(model, cls, n):
        record = {
            "vertices": [model.fixed_points[fp].label for fp in g.vertices],
            "edges": [{"ends": [a, b], "line": li, "degree": d} for (a, b, li, d) in g.edges],
            "markings": list(g.markings),
            "aut_factor": g.aut_factor,
        }
        print(json.dumps(record, sort_keys=True))
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gwloc",
                                description="Exact localization computations of genus-0 "
                                            "(twisted) Gromov-Witten invariants.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="compute one invariant from a config file")
    c.add_argument("--config", required=True)
    c.add_argument("--limit", action="store_true",
                   help="also report the nonequivariant (lambda^0) limit")
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify", help="verify bundle-to-base identities")
    v.add_argument("--identity", choices=("rel1", "cor_main", "rel2", "rel3", "rel4",
                                          "pn_fibration_demo"))
    v.add_argument("--case", help="JSON case file")
    v.add_argument("--all", action="store_true", help="run every bundled case")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="print an engine-independent oracle table")
    o.add_argument("name", choices=("wdvv_p2", "quintic_lines", "lines_on_hypersurface",
                                    "aspinwall_morrison", "qh_pn_checks"))
    o.add_argument("--d-max", type=int, dest="d_max")
    o.add_argument("--n", type=int)
    o.add_argument("--k", type=int)
    o.set_defaults(func=cmd_oracle)

    d = sub.add_parser("dump-graphs", help="dump decorated graphs as JSON lines")
    d.add_argument("--config", required=True)
    d.set_defaults(func=cmd_dump_graphs)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (UsageError, ParseError) as exc:
        print(json.dumps({"error": str(exc), "kind": "usage"}), file=sys.stderr)
        return 2
    except Exception as exc:  # engine errors: structured, exit 1
        print(json.dumps({"error": str(exc), "kind": type(exc).__name__}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
