"""Command-line front end.

Exit codes: 0 pass, 1 property/validation failure, 2 I/O error, 3 parse
error, 4 resource bound.  The WPML_BUDGET environment variable overrides
the exhaustive-sweep budget.  All JSON output is key-sorted, so identical
inputs produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import __version__
from .duality import fil_l, round_trip_iso
from .errors import (
    FormulaSyntaxError,
    ResourceBound,
    SizeCap,
    WpmlError,
    resolve_budget,
)
from .formulas import parse_formula, pretty
from .interpolation import (
    InterpolationProblem,
    craig_interpolant,
    distributive_fragment_interpolant,
)
from .lframe import ModalLFrame, fil_f, fil_f_lattice
from .serialize import (
    PayloadError,
    dumps,
    frame_to_json,
    lattice_to_json,
    load_artifact,
    proof_to_json,
    space_to_json,
    unwrap,
    vformation_to_json,
    wrap,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_IO = 2
EXIT_PARSE = 3
EXIT_RESOURCE = 4


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        print(f"error: {path} is not valid JSON: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _emit(obj: dict, out_path) -> None:
    text = dumps(obj)
    if out_path:
        try:
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {out_path}: {exc}", file=sys.stderr)
            raise SystemExit(EXIT_IO)
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    obj = _read_json(args.path)
    try:
        kind, _ = load_artifact(obj)
    except PayloadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except WpmlError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(f"valid {kind}")
    return EXIT_PASS


def cmd_dualize(args) -> int:
    obj = _read_json(args.path)
    try:
        kind, artifact = load_artifact(obj)
    except PayloadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except WpmlError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_FAIL
    direction = args.direction
    if direction == "auto":
        direction = (
            "algebra-to-space" if kind in ("lattice", "modal_lattice") else "space-to-algebra"
        )
    if direction == "algebra-to-space":
        if kind == "lattice":
            from .duality import fil_l_plain, plain_round_trip_ok

            frame, provenance = fil_l_plain(artifact)
            result = wrap("lframe", frame_to_json(frame, provenance=provenance))
            if args.round_trip:
                from .serialize import frame_from_json

                reloaded = frame_from_json(result["payload"])
                ok = reloaded == frame and plain_round_trip_ok(artifact)
                if not ok:
                    print("round trip failed", file=sys.stderr)
                    return EXIT_FAIL
                result["round_trip"] = {"isomorphic": True}
            _emit(result, args.out)
            return EXIT_PASS
        if kind != "modal_lattice":
            print("error: algebra-to-space needs a (modal) lattice", file=sys.stderr)
            return EXIT_PARSE
        space = fil_l(artifact)
        payload = space_to_json(space)
        result = wrap("modal_lframe", payload)
        if args.round_trip:
            from .serialize import frame_from_json

            reloaded = frame_from_json(payload)
            if reloaded != space.frame:
                print("round trip failed: reimport differs", file=sys.stderr)
                return EXIT_FAIL
            round_trip_iso(artifact)  # raises on failure
            result["round_trip"] = {"isomorphic": True}
        _emit(result, args.out)
        return EXIT_PASS
    if kind == "modal_lframe":
        lat = fil_f(artifact)
        _emit(wrap("modal_lattice", lattice_to_json(lat)), args.out)
    elif kind == "lframe":
        lat = fil_f_lattice(artifact)
        _emit(wrap("lattice", lattice_to_json(lat)), args.out)
    else:
        print("error: space-to-algebra needs an L-frame", file=sys.stderr)
        return EXIT_PARSE
    return EXIT_PASS


def cmd_amalgamate(args) -> int:
    from .amalgam import check_supamal_claim, superamalgamate
    from .serialize import vformation_from_json

    obj = _read_json(args.vformation)
    try:
        kind, payload = unwrap(obj)
        if kind != "vformation":
            raise PayloadError(f"expected a vformation, found {kind!r}")
        v = vformation_from_json(payload)
    except PayloadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except WpmlError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_FAIL
    res = superamalgamate(v)
    claim_problems = check_supamal_claim(res.pb)
    report = {
        "verdict": res.report.verdict,
        "commutes": res.report.commutes,
        "p1_injective": res.report.p1_injective,
        "p2_injective": res.report.p2_injective,
        "embeddings_are_filters": res.report.p1_filters_ok and res.report.p2_filters_ok,
        "pullback_points": [list(p) for p in res.pb.points],
        "witnesses": [
            {"a": a, "b": b, "c": c} for (a, b), c in res.report.witnesses
        ],
        "missing_witnesses": [list(t) for t in res.report.missing],
        "claim_checks": claim_problems,
    }
    _emit(wrap("amalgam_report", report), args.out)
    ok = res.report.verdict == "pass" and not claim_problems
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_correspond(args) -> int:
    from .correspondence import AXIOMS, correspondence_check

    obj = _read_json(args.frame)
    try:
        kind, artifact = load_artifact(obj)
    except PayloadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except WpmlError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if not isinstance(artifact, ModalLFrame):
        print("error: correspond needs a modal_lframe", file=sys.stderr)
        return EXIT_PARSE
    if args.axiom not in AXIOMS:
        print(f"error: unknown axiom {args.axiom!r}", file=sys.stderr)
        return EXIT_PARSE
    try:
        rep = correspondence_check(artifact, args.axiom, budget=resolve_budget())
    except ResourceBound as exc:
        print(f"resource bound: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    report = {
        "axiom": rep.axiom,
        "condition": rep.condition,
        "condition_holds": rep.condition_holds,
        "condition_witness": list(rep.condition_witness)
        if rep.condition_witness
        else None,
        "pairs": [{"pair": s, "valid": ok} for s, ok in rep.pair_results],
        "tight": rep.tight,
        "space_condition_failures": [
            [name, list(w)] for name, w in rep.space_condition_failures
        ],
        "sound": rep.sound,
    }
    _emit(wrap("correspondence_report", report), args.out)
    ok = rep.sound and (
        not rep.tight or rep.condition_holds == rep.all_pairs_valid
    )
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_interpolate(args) -> int:
    try:
        phi = parse_formula(args.phi)
        psi = parse_formula(args.psi)
    except FormulaSyntaxError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    tags = tuple(t for t in args.axioms.split(",") if t) if args.axioms else ()
    try:
        if args.distributive:
            if tags:
                print("error: --distributive takes no axioms", file=sys.stderr)
                return EXIT_PARSE
            res = distributive_fragment_interpolant(phi, psi)
        else:
            prob = InterpolationProblem(
                phi,
                psi,
                tags,
                proof_depth=args.proof_depth,
                cand_size=args.cand_depth,
                model_size=args.model_size,
            )
            res = craig_interpolant(prob)
    except ResourceBound as exc:
        print(f"resource bound: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    report: dict = {"verdict": res.verdict, "phi": pretty(phi), "psi": pretty(psi)}
    if res.verdict == "interpolant":
        report["interpolant"] = pretty(res.interpolant)
        report["proof_left"] = proof_to_json(res.proof_left)
        report["proof_right"] = proof_to_json(res.proof_right)
    elif res.verdict == "no-entailment":
        cm = res.countermodel
        if cm.kind == "frame":
            report["countermodel"] = {
                "kind": "frame",
                "frame": frame_to_json(cm.structure),
                "valuation": {k: hex(m) for k, m in sorted(cm.valuation.items())},
            }
        else:
            report["countermodel"] = {
                "kind": "algebra",
                "lattice": lattice_to_json(cm.structure),
                "valuation": dict(sorted(cm.valuation.items())),
            }
    else:
        report["diagnostics"] = res.diagnostics
    _emit(wrap("interpolation_report", report), args.out)
    return EXIT_PASS if res.verdict != "unknown" else EXIT_RESOURCE


def cmd_fuzz(args) -> int:
    from .sweeps import run_fuzz

    if args.count < 1:
        print("error: --count must be at least 1", file=sys.stderr)
        return EXIT_IO
    start = time.monotonic()
    report = run_fuzz(args.target, args.seed, args.count)
    if args.timings:
        report["elapsed_seconds"] = round(time.monotonic() - start, 3)
    _emit(wrap("fuzz_report", report), args.out)
    return EXIT_PASS if report["ok"] else EXIT_FAIL


def cmd_generate(args) -> int:
    from .generators import (
        sample_lframe,
        sample_modal_lattice,
        sample_modal_lframe,
        sample_vformation,
    )

    rng = random.Random(args.seed)
    try:
        if args.kind == "lattice":
            frame = sample_lframe(rng, args.size)
            _emit(wrap("lattice", lattice_to_json(fil_f_lattice(frame))), args.out)
        elif args.kind == "modal_lattice":
            lat = sample_modal_lattice(rng, args.size)
            _emit(wrap("modal_lattice", lattice_to_json(lat)), args.out)
        elif args.kind == "modal_lframe":
            frame = sample_modal_lframe(rng, args.size)
            _emit(wrap("modal_lframe", frame_to_json(frame)), args.out)
        elif args.kind == "vformation":
            v = sample_vformation(rng, max_l=min(args.size if args.size > 1 else 5, 5))
            _emit(wrap("vformation", vformation_to_json(v)), args.out)
        else:
            print(f"error: unknown kind {args.kind!r}", file=sys.stderr)
            return EXIT_PARSE
    except SizeCap as exc:
        print(f"size cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wpml",
        description="Finite-model workbench for weak positive modal logic",
    )
    parser.add_argument("--version", action="version", version=f"wpml {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a JSON artifact")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("dualize", help="dualize a lattice or frame")
    p.add_argument("path")
    p.add_argument(
        "--direction",
        choices=("auto", "algebra-to-space", "space-to-algebra"),
        default="auto",
    )
    p.add_argument("--round-trip", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dualize)

    p = sub.add_parser("amalgamate", help="run the dual pullback construction")
    p.add_argument("--vformation", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_amalgamate)

    p = sub.add_parser("correspond", help="frame-condition / axiom report")
    p.add_argument("--frame", required=True)
    p.add_argument("--axiom", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_correspond)

    p = sub.add_parser("interpolate", help="search for a Craig interpolant")
    p.add_argument("phi")
    p.add_argument("psi")
    p.add_argument("--axioms", default="")
    p.add_argument("--proof-depth", type=int, default=6)
    p.add_argument("--cand-depth", type=int, default=4)
    p.add_argument("--model-size", type=int, default=4)
    p.add_argument("--distributive", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("fuzz", help="run a seeded theorem sweep")
    p.add_argument(
        "target",
        choices=("superamalgamation", "correspondence", "duality", "jonsson"),
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--timings", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("generate", help="generate a seeded random artifact")
    p.add_argument(
        "kind", choices=("lattice", "modal_lattice", "modal_lframe", "vformation")
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, default=4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_IO
    except ResourceBound as exc:
        print(f"resource bound: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except WpmlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
