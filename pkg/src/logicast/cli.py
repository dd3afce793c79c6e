"""Command-line surface: encode/decode statement files, prove entailment,
run simulations, print bound tables, emit sweep CSVs.

Exit codes: 0 on success, 1 on a domain failure (including a failed
proof), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .algset import entails
from .errors import LogicastError
from .groebner import entails_groebner
from .poly import PolySet
from .protocols import (
    peek_header,
    read_transmission,
    t1_decode,
    t1_encode,
    t2_decode,
    t2_encode,
    t3_decode,
    t3_encode,
    t4_decode,
    t4_encode,
    t5_decode,
    t5_encode,
)
from .simlab import (
    Conditional,
    Nested,
    Single,
    bounds_table,
    run_trials,
    sweep_lambda_vs_naive,
)
from .statements import parse_statements, render_statements


class _UsageError(Exception):
    """Flag combination rejected before any work happens."""


_SCENARIOS = ("t1", "t2", "t3", "t4", "t5")
_NEEDS_BACKGROUND = ("t2", "t3", "t5")
_NEEDS_QUERY = ("t4", "t5")


def _load_statements(path: str, m: int | None) -> PolySet:
    return parse_statements(Path(path).read_text(), m)


def _codec_for(scenario: str, flag: str | None) -> str | None:
    if scenario in _NEEDS_QUERY:
        return flag or "linear"
    if flag is not None:
        raise _UsageError(f"{scenario} does not take --codec")
    return None


# ----------------------------------------------------------------- encode

def cmd_encode(args: argparse.Namespace) -> int:
    scenario = args.scenario
    if scenario in _NEEDS_BACKGROUND and not args.background:
        raise _UsageError(f"{scenario} needs --background")
    if scenario not in _NEEDS_BACKGROUND and args.background:
        raise _UsageError(f"{scenario} does not take --background")
    if scenario in _NEEDS_QUERY and not args.query:
        raise _UsageError(f"{scenario} needs --query")
    if scenario not in _NEEDS_QUERY and args.query:
        raise _UsageError(f"{scenario} does not take --query")
    codec = _codec_for(scenario, args.codec)

    s = _load_statements(args.infile, args.vars)
    if scenario == "t1":
        tx = t1_encode(s, seed=args.seed)
    elif scenario in ("t2", "t3"):
        r = _load_statements(args.background, args.vars)
        enc = t2_encode if scenario == "t2" else t3_encode
        tx = enc(s, r, seed=args.seed)
    elif scenario == "t4":
        q = _load_statements(args.query, args.vars)
        tx = t4_encode(s, q, codec=codec, seed=args.seed)
    else:
        q = _load_statements(args.query, args.vars)
        r = _load_statements(args.background, args.vars)
        tx = t5_encode(s, q, r, codec=codec, seed=args.seed)
    Path(args.out).write_bytes(tx.to_bytes())
    print(f"payload_bits={len(tx.payload)}")
    return 0


# ----------------------------------------------------------------- decode

def cmd_decode(args: argparse.Namespace) -> int:
    data = Path(args.infile).read_bytes()
    scenario, _, m = peek_header(data)
    if scenario in _NEEDS_BACKGROUND:
        if not args.background:
            raise _UsageError(f"{scenario} needs --background to decode")
        r = _load_statements(args.background, m)
        tx, _ = read_transmission(data, r=r)
        if scenario == "t2":
            out = t2_decode(tx, r)
        elif scenario == "t3":
            out = t3_decode(tx, r)
        else:
            out = t5_decode(tx, r)
    else:
        tx, _ = read_transmission(data)
        out = t1_decode(tx) if scenario == "t1" else t4_decode(tx)
    Path(args.out).write_text(render_statements(out))
    print(f"scenario={scenario}")
    return 0


# ----------------------------------------------------------------- prove

def cmd_prove(args: argparse.Namespace) -> int:
    k = _load_statements(args.knowledge, None)
    q = _load_statements(args.query, None)
    m = max(k.m, q.m, 1)
    k = PolySet(m, k.polys)
    q = PolySet(m, q.polys)
    check = entails if args.engine == "brute" else entails_groebner
    if check(k, q):
        print("entailed")
        return 0
    print("not entailed")
    return 1


# ----------------------------------------------------------------- simlab

_LAW_FLAGS = ("ps", "pq", "pr", "ps_in", "pq_in", "ps_out", "pq_out")


def _law_from_flags(scenario: str, args: argparse.Namespace):
    """Map decimal CLI densities onto a law.

    For t2/t3 the natural knobs are the background density --pr and the
    conditional inclusion --ps, so the stored inner marginal is their
    product.
    """
    wanted = {
        "t1": ("ps",),
        "t2": ("pr", "ps"),
        "t3": ("pr", "ps"),
        "t4": ("ps", "pq"),
        "t5": ("pr", "ps_in", "pq_in", "ps_out", "pq_out"),
    }[scenario]
    for name in _LAW_FLAGS:
        given = getattr(args, name) is not None
        if given and name not in wanted:
            raise _UsageError(f"{scenario} does not take --{name.replace('_', '-')}")
        if not given and name in wanted:
            raise _UsageError(f"{scenario} needs --{name.replace('_', '-')}")
    if scenario == "t1":
        return Single(args.ps)
    if scenario in ("t2", "t3"):
        return Nested(args.pr * args.ps, args.pr)
    if scenario == "t4":
        return Nested(args.ps, args.pq)
    return Conditional(args.pr, args.ps_in, args.pq_in, args.ps_out, args.pq_out)


def cmd_simulate(args: argparse.Namespace) -> int:
    codec = _codec_for(args.scenario, args.codec)
    law = _law_from_flags(args.scenario, args)
    rep = run_trials(args.scenario, law, args.m, trials=args.trials,
                     codec=codec, seed=args.seed)
    print(rep.to_text(), end="")
    return 0


def cmd_bounds(args: argparse.Namespace) -> int:
    codec = _codec_for(args.scenario, args.codec)
    law = _law_from_flags(args.scenario, args)
    rep = bounds_table(args.scenario, law, args.m, codec=codec)
    lines = rep.lines()
    if args.scenario in ("t4", "t5"):
        lines.append(f"lambda={rep.lower_bound:.6f}")
    print("\n".join(lines))
    return 0


def _parse_grid(spec: str) -> list[float]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise _UsageError("grid must look like start:step:stop")
    try:
        start, step, stop = (float(p) for p in parts)
    except ValueError:
        raise _UsageError(f"grid {spec!r} is not numeric") from None
    if step <= 0 or stop < start:
        raise _UsageError("grid must increase from start to stop")
    count = int(round((stop - start) / step)) + 1
    axis = [round(start + i * step, 12) for i in range(count)]
    return [a for a in axis if a <= stop + 1e-12]


def cmd_sweep(args: argparse.Namespace) -> int:
    axis = _parse_grid(args.grid)
    pairs = [(a, b) for a in axis for b in axis if a + b <= 1.0]
    print(sweep_lambda_vs_naive(pairs, n=args.n), end="")
    return 0


# ----------------------------------------------------------------- parser

def _add_law_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--ps", type=float, help="density of Z(s); conditional for t2/t3")
    sub.add_argument("--pq", type=float, help="density of Z(q) (t4)")
    sub.add_argument("--pr", type=float, help="density of Z(r) (t2/t3/t5)")
    sub.add_argument("--ps-in", type=float, help="density of s inside Z(r) (t5)")
    sub.add_argument("--pq-in", type=float, help="density of q inside Z(r) (t5)")
    sub.add_argument("--ps-out", type=float, help="density of s outside Z(r) (t5)")
    sub.add_argument("--pq-out", type=float, help="density of q outside Z(r) (t5)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logicast",
        description="Transmit propositional knowledge near its entropy.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    enc = subs.add_parser("encode", help="encode a statement file")
    enc.add_argument("--scenario", required=True, choices=_SCENARIOS)
    enc.add_argument("--in", dest="infile", required=True, metavar="S.LOGIC")
    enc.add_argument("--background", metavar="R.LOGIC",
                     help="shared background (t2/t3/t5)")
    enc.add_argument("--query", metavar="Q.LOGIC", help="query density (t4/t5)")
    enc.add_argument("--vars", type=int, required=True, metavar="M")
    enc.add_argument("--codec", choices=("random", "linear"),
                     help="partition codec (t4/t5, default linear)")
    enc.add_argument("--seed", type=int, default=0)
    enc.add_argument("--out", required=True, metavar="TX.BIN")
    enc.set_defaults(func=cmd_encode)

    dec = subs.add_parser("decode", help="decode a transmission file")
    dec.add_argument("--in", dest="infile", required=True, metavar="TX.BIN")
    dec.add_argument("--background", metavar="R.LOGIC",
                     help="required for t2/t3/t5 transmissions")
    dec.add_argument("--out", required=True, metavar="SHAT.LOGIC")
    dec.set_defaults(func=cmd_decode)

    prv = subs.add_parser("prove", help="check entailment between files")
    prv.add_argument("--knowledge", required=True, metavar="K.LOGIC")
    prv.add_argument("--query", required=True, metavar="Q.LOGIC")
    prv.add_argument("--engine", choices=("brute", "groebner"), default="brute")
    prv.set_defaults(func=cmd_prove)

    sim = subs.add_parser("simulate", help="Monte-Carlo rate measurement")
    sim.add_argument("--scenario", required=True, choices=_SCENARIOS)
    sim.add_argument("--m", type=int, default=12)
    sim.add_argument("--trials", type=int, default=200)
    sim.add_argument("--codec", choices=("random", "linear"))
    sim.add_argument("--seed", type=int, default=0)
    _add_law_flags(sim)
    sim.set_defaults(func=cmd_simulate)

    bnd = subs.add_parser("bounds", help="print analytic rate bounds")
    bnd.add_argument("--scenario", required=True, choices=_SCENARIOS)
    bnd.add_argument("--m", type=int, default=12)
    bnd.add_argument("--codec", choices=("random", "linear"))
    _add_law_flags(bnd)
    bnd.set_defaults(func=cmd_bounds)

    swp = subs.add_parser("sweep", help="CSV of Lambda against naive rates")
    swp.add_argument("--grid", required=True, metavar="START:STEP:STOP")
    swp.add_argument("--n", type=int, default=4096,
                     help="block length for the finite-n linear rate")
    swp.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except LogicastError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
