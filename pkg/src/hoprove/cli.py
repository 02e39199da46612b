"""Command-line entry point: ``hoprove prove|check-trace|validate|enumerate|properties``."""
from __future__ import annotations

import argparse
import json
import sys

import jsonschema

from . import __version__
from .core import show
from .errors import HoproveError, ParseError
from .orders import validate_precedence, validate_type_order
from .parser import load_spec, parse_type
from .trace import METHODS, check_trace, dumps, run_method, to_text

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _write(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_prove(args) -> int:
    spec = load_spec(args.file)
    doc = run_method(spec, args.method, args.budget, args.beta_steps)
    if args.trace:
        _write(dumps(doc) + "\n" if args.trace == "json" else to_text(doc), args.out)
    if args.out or not args.trace:
        for i, v in enumerate(doc.verdicts):
            root = f" (root case {v.proof.case})" if v.proof else ""
            print(f"rule {i + 1}: {v.status}{root}  {v.rule}")
    return EXIT_OK if doc.all_accepted else EXIT_FAIL


def cmd_check_trace(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        d = json.load(fh)
    try:
        results = check_trace(d)
    except jsonschema.ValidationError as e:
        print(f"trace does not match the schema: {e.message}")
        return EXIT_FAIL
    for r in results:
        print(f"rule {r.index + 1}: {'ok' if r.ok else 'FAILED'} ({r.message})")
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


def cmd_validate(args) -> int:
    spec = load_spec(args.file)
    found = validate_precedence(spec.sig) + validate_type_order(spec.sig, args.depth)
    for v in found[: args.show]:
        print(v)
    if len(found) > args.show:
        print(f"... {len(found) - args.show} more")
    print(f"{len(found)} violation(s)")
    return EXIT_OK if not found else EXIT_FAIL


def _enum_spec(spec, args):
    from .harness import EnumSpec

    binders = tuple(parse_type(spec.sig, b) for b in (args.binder or []))
    filt = parse_type(spec.sig, args.type) if getattr(args, "type", None) else None
    return EnumSpec(spec.sig, dict(spec.env), args.size, binders, filt)


def cmd_enumerate(args) -> int:
    from .harness import enumerate_terms

    spec = load_spec(args.file)
    n = 0
    for t in enumerate_terms(_enum_spec(spec, args)):
        n += 1
        if not args.count:
            print(f"{show(t)} : {t.type}")
    print(f"{n} term(s)")
    return EXIT_OK


def cmd_properties(args) -> int:
    from .properties import run_suite

    spec = load_spec(args.file)
    reports = run_suite(spec, _enum_spec(spec, args), samples=args.samples, seed=args.seed)
    if args.json:
        print(json.dumps([{"name": r.name, "instances": r.instances, "ok": r.ok,
                           "counterexamples": [[str(x) for x in c] for c in r.counterexamples],
                           "elapsed": r.elapsed, "seed": r.seed, "notes": r.notes}
                          for r in reports], indent=2))
    else:
        for r in reports:
            print(r.summary())
            for n in r.notes:
                print(f"    {n}")
            for c in r.counterexamples[:3]:
                print("    " + " | ".join(str(x) for x in c))
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hoprove", description="termination provers for higher-order rewriting")
    ap.add_argument("--version", action="version", version=f"hoprove {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prove", help="orient every rule of a system")
    p.add_argument("file")
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--budget", type=int, default=None, help="search depth (schema, chorpo)")
    p.add_argument("--beta-steps", type=int, default=None, help="step bound inside closure rule 3")
    p.add_argument("--trace", choices=("text", "json"))
    p.add_argument("--out")
    p.set_defaults(fn=cmd_prove)

    p = sub.add_parser("check-trace", help="replay a JSON trace")
    p.add_argument("file")
    p.set_defaults(fn=cmd_check_trace)

    p = sub.add_parser("validate", help="check the precedence and the type-order axioms")
    p.add_argument("file")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--show", type=int, default=20)
    p.set_defaults(fn=cmd_validate)

    for name, fn, helptext in (("enumerate", cmd_enumerate, "list well-typed terms"),
                               ("properties", cmd_properties, "run the empirical property suite")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("file")
        p.add_argument("--size", type=int, default=4)
        p.add_argument("--binder", action="append", help="type a lambda may bind (repeatable)")
        if name == "enumerate":
            p.add_argument("--type", help="only terms of this type")
            p.add_argument("--count", action="store_true")
        else:
            p.add_argument("--samples", type=int, default=200)
            p.add_argument("--seed", type=int, default=None)
            p.add_argument("--json", action="store_true")
        p.set_defaults(fn=fn)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as e:
        print(e, file=sys.stderr)
        return EXIT_INPUT
    except (HoproveError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
