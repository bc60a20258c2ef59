"""Command-line driver.

Exit codes: ``synth`` 0 realizable, 3 unrealizable, 4 unknown up to the
rank bound; ``check`` 0 verified, 2 counterexample; 1 on any input error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .abt import build_abt, dump_abt
from .nested_word import dumps_trace, from_trace
from .nwba import Nwba, check_automaton, nwba_from_json, nwba_to_json, spec_automaton, \
    translate_nwtl
from .nwtl import Formula, evaluate, parse
from .oracle import brute_force_realizable, model_check
from .rlc import Library, composition_from_json, library_from_json, simulate, \
    validate_composition, validate_library
from .solver import outcome_from_json, outcome_to_json, synthesize

EXIT = {"realizable": 0, "unrealizable": 3, "unknown_up_to_rank": 4}


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    paths: dict = field(default_factory=dict)
    max_rank: int = 8
    max_elements: int = 4
    dump_graph: bool = False
    dump_abt: bool = False
    seed: int = 0


def _json(path) -> dict:
    p = Path(path)
    if not p.exists():
        raise InputError(f"{path}: no such file")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: not valid JSON ({e})") from None


def load_library(path) -> Library:
    try:
        lib = library_from_json(_json(path))
    except ValueError as e:
        raise InputError(f"{path}: {e}") from None
    defects = validate_library(lib)
    if defects:
        raise InputError(f"{path}: " + "; ".join(defects))
    return lib


def load_composition(path, lib):
    try:
        comp = composition_from_json(_json(path))
    except ValueError as e:
        raise InputError(f"{path}: {e}") from None
    defects = validate_composition(comp, lib)
    if defects:
        raise InputError(f"{path}: " + "; ".join(defects))
    return comp


def load_spec(path, sigma_in=None, sigma_out=None) -> Formula | Nwba:
    """A JSON object is an automaton of bad behaviours; anything else is a formula."""
    p = Path(path)
    if not p.exists():
        raise InputError(f"{path}: no such file")
    text = p.read_text().strip()
    try:
        if text.startswith("{"):
            A = nwba_from_json(json.loads(text))
            report = check_automaton(A)
            if not report.valid:
                raise InputError(f"{path}: " + "; ".join(report.defects))
            return A
        return parse(text, sigma_in, sigma_out)
    except ValueError as e:
        raise InputError(f"{path}: {e}") from None


def _emit(data, out):
    text = json.dumps(data, indent=2, sort_keys=True) if not isinstance(data, str) else data
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


# -- subcommands ----------------------------------------------------------------------


def cmd_synth(args, cfg: RunConfig) -> int:
    lib = load_library(args.library)
    spec = load_spec(args.spec, lib.sigma_in, lib.sigma_out)
    try:
        A = spec_automaton(spec, lib.sigma_in, lib.sigma_out)
        abt = build_abt(lib, A)
    except ValueError as e:
        raise InputError(str(e)) from None
    if cfg.dump_graph:
        for g in abt.graphs.values():
            print(g.dump(), file=sys.stderr)
    if cfg.dump_abt:
        print(dump_abt(abt), file=sys.stderr)
    out = synthesize(lib, A, cfg.max_rank, abt=abt)
    _emit(outcome_to_json(out), args.output)
    if args.cross_check:
        bf = brute_force_realizable(lib, A, cfg.max_elements)
        print(f"brute force up to {cfg.max_elements} elements: "
              f"{'witness found' if hasattr(bf, 'composition') else 'none'}", file=sys.stderr)
    return EXIT[out.status]


def cmd_check(args, cfg: RunConfig) -> int:
    lib = load_library(args.library)
    comp = load_composition(args.composition, lib)
    spec = load_spec(args.spec, lib.sigma_in, lib.sigma_out)
    try:
        A = spec_automaton(spec, lib.sigma_in, lib.sigma_out)
    except ValueError as e:
        raise InputError(str(e)) from None
    res = model_check(comp, lib, A)
    if not res:
        print("verified: no computation violates the specification")
        return 0
    _emit({"counterexample": res.kind, "sketch": res.sketch}, None)
    return 2


def cmd_simulate(args, cfg: RunConfig) -> int:
    lib = load_library(args.library)
    comp = load_composition(args.composition, lib)
    bad = [a for a in args.input if a not in lib.sigma_in]
    if bad:
        raise InputError(f"input letters outside the input alphabet: {sorted(set(bad))}")
    w, terminated = simulate(comp, lib, args.input)
    _emit(dumps_trace(w), None)
    if terminated:
        print("computation terminated", file=sys.stderr)
    return 0


def cmd_translate(args, cfg: RunConfig) -> int:
    if args.library:
        lib = load_library(args.library)
        sigma_in, sigma_out = lib.sigma_in, lib.sigma_out
    else:
        sigma_in, sigma_out = args.inputs.split(","), args.outputs.split(",")
    spec = load_spec(args.spec, sigma_in, sigma_out)
    if isinstance(spec, Nwba):
        raise InputError(f"{args.spec}: expected a formula")
    _emit(nwba_to_json(translate_nwtl(spec, sigma_in, sigma_out)), args.output)
    return 0


def cmd_eval(args, cfg: RunConfig) -> int:
    try:
        w = from_trace(_json(args.trace))
    except (KeyError, ValueError) as e:
        raise InputError(f"{args.trace}: {e}") from None
    spec = load_spec(args.spec)
    if isinstance(spec, Nwba):
        raise InputError(f"{args.spec}: expected a formula")
    print("true" if len(w) and evaluate(w, 1, spec) else "false")
    return 0


def cmd_validate(args, cfg: RunConfig) -> int:
    kind = args.kind
    if kind == "library":
        load_library(args.file)
    elif kind == "composition":
        if not args.library:
            raise InputError("validating a composition needs --library")
        load_composition(args.file, load_library(args.library))
    elif kind == "trace":
        try:
            from_trace(_json(args.file))
        except (KeyError, ValueError) as e:
            raise InputError(f"{args.file}: {e}") from None
    elif kind == "automaton":
        if not isinstance(load_spec(args.file), Nwba):
            raise InputError(f"{args.file}: not an automaton file")
    elif kind == "formula":
        load_spec(args.file)
    else:
        n_c = load_library(args.library).n_c if args.library else 1
        try:
            outcome_from_json(_json(args.file), n_c)
        except ValueError as e:
            raise InputError(f"{args.file}: {e}") from None
    print(f"{args.file}: valid {kind}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nwsynth", description=__doc__.splitlines()[0])
    ap.add_argument("--max-rank", type=int, default=8)
    ap.add_argument("--max-elements", type=int, default=4)
    ap.add_argument("--dump-graph", action="store_true", help="print configuration graphs to stderr")
    ap.add_argument("--dump-abt", action="store_true", help="print tree-automaton statistics to stderr")
    ap.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("synth", help="synthesize a composition")
    p.add_argument("library")
    p.add_argument("spec", help="formula text file or bad-behaviour automaton JSON")
    p.add_argument("-o", "--output")
    p.add_argument("--cross-check", action="store_true",
                   help="also run the brute-force search up to --max-elements")
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("check", help="model-check a composition")
    p.add_argument("library")
    p.add_argument("composition")
    p.add_argument("spec")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("simulate", help="print the trace of a composition on an input word")
    p.add_argument("library")
    p.add_argument("composition")
    p.add_argument("--input", required=True)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("translate", help="formula to automaton")
    p.add_argument("spec")
    p.add_argument("--library")
    p.add_argument("--inputs", default="a")
    p.add_argument("--outputs", default="x,y")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("eval", help="evaluate a formula at the first position of a trace")
    p.add_argument("trace")
    p.add_argument("spec")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("validate", help="parse and validate a file")
    p.add_argument("kind", choices=["library", "composition", "trace", "automaton",
                                    "formula", "outcome"])
    p.add_argument("file")
    p.add_argument("--library")
    p.set_defaults(fn=cmd_validate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.max_rank < 1:
        print("error: --max-rank must be positive", file=sys.stderr)
        return 1
    cfg = RunConfig(args.subcommand, {}, args.max_rank, args.max_elements,
                    args.dump_graph, args.dump_abt, args.seed)
    random.seed(cfg.seed)
    try:
        return args.fn(args, cfg)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
