"""Command-line front end: scenario configs, verifier dispatch, reports.

Exit codes: 0 pass/informational, 1 config error, 2 fail,
3 hypothesis-violated, 4 refused-cap.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import yaml

from .rings import (FiniteRing, RingConstructionError, ring_from_descriptor)
from .ideals import (Ideal, IdealError, ideal_generated, all_ideals,
                     ideal_sum, ideal_intersection, ideal_product,
                     symmetrised_product, ideal_quotient,
                     verify_ideal_identities, verify_level_identity)
from .reports import (VerificationReport, CapExceeded, EXIT_CODES, PASS,
                      REFUSED_CAP)
from .subgroups import (DEFAULT_GROUP_CAP, verify_lemma1, verify_lemma2,
                        verify_lemma3, verify_lemma4, verify_lemma5,
                        verify_lemma6, verify_lemma7, verify_lemma8,
                        k1_data, z_group, explore_lemma9_equation)
from .centralisers import verify_theorem1, verify_theorem2
from .acceptance import run_acceptance_suite


def parse_ring(spec) -> FiniteRing:
    """Ring from config: 'zmod 4', 'triangular 2', 'local-f2', or a
    descriptor mapping {kind: ..., ...}."""
    if isinstance(spec, dict):
        return ring_from_descriptor(spec)
    parts = str(spec).split()
    kind = parts[0]
    if kind == "zmod":
        return ring_from_descriptor({"kind": "zmod", "m": int(parts[1])})
    if kind == "triangular":
        return ring_from_descriptor({"kind": "triangular", "m": int(parts[1])})
    if kind in ("local-f2", "local_f2"):
        return ring_from_descriptor({"kind": "local-f2"})
    raise RingConstructionError(f"cannot parse ring spec {spec!r}")


def parse_ideal(R: FiniteRing, spec) -> Ideal:
    """Ideal from config: generator list, a single index, or a string
    like '(2)' / '(2,3)' of element indices (residues for Z/m)."""
    if isinstance(spec, Ideal):
        return spec
    if isinstance(spec, int):
        return ideal_generated(R, [spec])
    if isinstance(spec, (list, tuple)):
        return ideal_generated(R, spec)
    s = str(spec).strip().strip("()")
    gens = [int(tok) for tok in s.split(",") if tok.strip() != ""]
    return ideal_generated(R, gens)


CHECKS_NEED = {
    "theorem1": ("A", "B"), "theorem2": ("A", "B"),
    "lemma1": ("A",), "lemma2": ("A", "B"), "lemma3": ("A", "B"),
    "lemma4": ("A", "B"), "lemma5": ("A", "B"), "lemma6": ("A", "B"),
    "lemma7": ("A", "B"), "lemma8": ("A", "B"),
    "ideal-identities": (), "level-identity": ("A", "B"),
    "k1": ("A",), "z-group": ("A",), "explore-lemma9": ("A", "B"),
}


class ConfigError(ValueError):
    pass


def load_scenario(cfg: dict):
    """Validate a scenario mapping; collect every violation at once."""
    problems = []
    check = cfg.get("check")
    if check not in CHECKS_NEED:
        problems.append(f"unknown or missing check: {check!r} "
                        f"(known: {', '.join(sorted(CHECKS_NEED))})")
    R = None
    if "ring" not in cfg:
        problems.append("missing ring")
    else:
        try:
            R = parse_ring(cfg["ring"])
        except Exception as exc:
            problems.append(f"bad ring: {exc}")
    n = cfg.get("n", 3)
    if not isinstance(n, int) or n < 2:
        problems.append(f"bad n: {n!r}")
    ideals = {}
    if R is not None and check in CHECKS_NEED:
        for name in CHECKS_NEED[check]:
            key = name if name in cfg else name.lower()
            if key not in cfg:
                problems.append(f"check {check} needs ideal {name}")
                continue
            try:
                ideals[name] = parse_ideal(R, cfg[key])
            except Exception as exc:
                problems.append(f"bad ideal {name}: {exc}")
    mode = cfg.get("mode", "exhaustive")
    if mode not in ("exhaustive", "sample"):
        problems.append(f"bad mode: {mode!r}")
    if problems:
        raise ConfigError("; ".join(problems))
    return {"check": check, "ring": R, "n": n, "ideals": ideals,
            "mode": mode, "seed": int(cfg.get("seed", 0)),
            "cap": int(cfg.get("cap", DEFAULT_GROUP_CAP)),
            "sample_count": int(cfg.get("sample_count", 100_000)),
            "workers": int(cfg.get("workers", 1))}


def dispatch(sc) -> VerificationReport:
    R, n, I = sc["ring"], sc["n"], sc["ideals"]
    cap, seed, workers = sc["cap"], sc["seed"], sc["workers"]
    check = sc["check"]
    t0 = time.perf_counter()
    try:
        if check == "theorem1":
            return verify_theorem1(R, n, I["A"], I["B"], mode=sc["mode"],
                                   sample_count=sc["sample_count"],
                                   seed=seed, workers=workers, cap=cap)
        if check == "theorem2":
            return verify_theorem2(R, n, I["A"], I["B"], seed=seed,
                                   workers=workers, cap=cap)
        if check == "lemma1":
            return verify_lemma1(R, n, I["A"], cap=cap)
        if check == "lemma2":
            return verify_lemma2(R, n, I["A"], I["B"], cap=cap)
        if check == "lemma3":
            return verify_lemma3(R, n, I["A"], I["B"], cap=cap)
        if check == "lemma4":
            return verify_lemma4(R, n, I["A"], I["B"], seed=seed, cap=cap)
        if check == "lemma5":
            return verify_lemma5(R, n, I["A"], I["B"], cap=cap)
        if check == "lemma6":
            return verify_lemma6(R, n, I["A"], I["B"], cap=cap)
        if check == "lemma7":
            return verify_lemma7(R, n, I["A"], I["B"], cap=cap)
        if check == "lemma8":
            return verify_lemma8(R, n, I["A"], I["B"], cap=cap)
        if check == "ideal-identities":
            return verify_ideal_identities(R)
        if check == "level-identity":
            return verify_level_identity(R, I["A"], I["B"])
        if check == "k1":
            return k1_data(R, n, I["A"], cap=cap)
        if check == "z-group":
            Z = z_group(R, n, I["A"], cap=cap, seed=seed)
            rep = VerificationReport(claim="z-group", ring=R.descriptor,
                                     n=n, ideals={"I": I["A"].label()})
            rep.details["order"] = len(Z)
            rep.checked_count = len(Z)
            rep.verdict = PASS
            return rep
        if check == "explore-lemma9":
            return explore_lemma9_equation(R, n, I["A"], I["B"], cap=cap)
    except CapExceeded as exc:
        rep = VerificationReport(claim=check, ring=R.descriptor, n=n,
                                 ideals={k: v.label() for k, v in I.items()})
        rep.verdict = REFUSED_CAP
        rep.details["reason"] = str(exc)
        rep.wall_time_ms = (time.perf_counter() - t0) * 1000
        return rep
    raise ConfigError(f"unhandled check {check!r}")


def cmd_run(args):
    try:
        with open(args.config) as fh:
            cfg = yaml.safe_load(fh)
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a mapping")
        for key, val in (("seed", args.seed), ("cap", args.cap),
                         ("workers", args.workers)):
            if val is not None:
                cfg[key] = val
        sc = load_scenario(cfg)
    except (ConfigError, OSError, yaml.YAMLError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    rep = dispatch(sc)
    if args.format == "machine":
        print(rep.to_json(include_timing=not args.no_timing))
    else:
        print(rep.human())
    return rep.exit_code


def cmd_accept(args):
    summary = run_acceptance_suite(workers=args.workers or 1,
                                   seed=args.seed or 0,
                                   emit=lambda line: print(line, flush=True))
    if args.format == "machine":
        print(json.dumps(summary, default=str))
    else:
        verdictw = "all criteria pass" if summary["all_pass"] else \
            "FAILURES present"
        print(f"acceptance suite: {verdictw}")
    return summary["exit_code"]


def cmd_describe_ring(args):
    try:
        R = parse_ring(args.descriptor)
    except Exception as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    print(f"ring {R.descriptor}  size={R.size}  "
          f"commutative={R.commutative}")
    print("index  element  unit")
    for i in range(R.size):
        print(f"{i:5d}  {R.names[i]:>12s}  {'yes' if R.is_unit(i) else ''}")
    return 0


def cmd_ideal_ops(args):
    try:
        R = parse_ring(args.descriptor)
        ideals = all_ideals(R)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"{len(ideals)} ideals of {R.descriptor}:")
    for I in ideals:
        print(f"  {I.label():20s} members {sorted(int(x) for x in I.array)}")
    print("\npairwise operations (A down, B across): "
          "sum | intersection | product AB | A∘B | quotient (B:A)")
    for A in ideals:
        for B in ideals:
            print(f"  A={A.label():12s} B={B.label():12s} "
                  f"A+B={ideal_sum(A, B).label():12s} "
                  f"A∩B={ideal_intersection(A, B).label():12s} "
                  f"AB={ideal_product(A, B).label():12s} "
                  f"A∘B={symmetrised_product(A, B).label():12s} "
                  f"(B:A)={ideal_quotient(B, A).label()}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="relgl",
        description="verify relative-subgroup theorems of GL(n,R) over "
                    "finite rings")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel chunks for exhaustive scans")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--cap", type=int, default=None,
                   help="subgroup-size cap for closures")
    p.add_argument("--format", choices=("human", "machine"),
                   default="human")
    p.add_argument("--no-timing", action="store_true",
                   help="omit wall-clock fields from machine reports")
    sub = p.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run a scenario config file")
    r.add_argument("config")
    r.set_defaults(fn=cmd_run)
    a = sub.add_parser("accept", help="run the acceptance suite")
    a.set_defaults(fn=cmd_accept)
    d = sub.add_parser("describe-ring",
                       help="print the index/element table of a ring")
    d.add_argument("descriptor")
    d.set_defaults(fn=cmd_describe_ring)
    i = sub.add_parser("ideal-ops",
                       help="print the ideal lattice and quotient tables")
    i.add_argument("descriptor")
    i.set_defaults(fn=cmd_ideal_ops)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
