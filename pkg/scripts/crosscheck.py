"""Compare the synthesis pipeline with brute-force enumeration on the fixture suite.

Usage: python scripts/crosscheck.py [--max-rank K] [--max-elements N] [NAME ...]
"""
import argparse
import sys
import time

from nwsynth import fixtures
from nwsynth.nwtl import parse
from nwsynth.oracle import RealizableWitness, brute_force_realizable
from nwsynth.solver import Realizable, synthesize


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("names", nargs="*", help="restrict to these instances")
    ap.add_argument("--max-rank", type=int, default=8)
    ap.add_argument("--max-elements", type=int, default=4)
    args = ap.parse_args(argv)
    disagreements = 0
    for name, factory, text, _ in fixtures.CROSSCHECK:
        if args.names and name not in args.names:
            continue
        lib, spec = factory(), parse(text)
        t0 = time.time()
        brute = isinstance(brute_force_realizable(lib, spec, args.max_elements),
                           RealizableWitness)
        t1 = time.time()
        out = synthesize(lib, spec, args.max_rank)
        t2 = time.time()
        agree = brute == isinstance(out, Realizable)
        disagreements += not agree
        rank = getattr(out, "rank", "-")
        print(f"{name:20s} brute={str(brute):5s} ({t1 - t0:6.1f}s)  "
              f"synth={out.status:18s} rank={rank} ({t2 - t1:6.1f}s)  "
              f"{'agree' if agree else 'DISAGREE'}", flush=True)
    return 1 if disagreements else 0


if __name__ == "__main__":
    sys.exit(main())
