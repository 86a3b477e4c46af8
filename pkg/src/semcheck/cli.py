"""Command-line interface.

Subcommands read a system description (file path or ``-`` for stdin), print a
JSON report on stdout and a one-line human summary on stderr, and exit with
0 when the checked property holds, 1 when it fails, and 2 on any error.
State arguments accept display names (when the file carries a ``names`` line)
or numeric indices; names win when both could apply.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import List, Optional, Sequence, Tuple

from .bench import decide, default_cases, gen_chain, gen_cycles, gen_interleave, run_matrix
from .brzozowski import brzozowski_minimize
from .decorations import (
    SEMANTICS,
    TOP,
    decorate,
    render_eff_label,
    render_output,
)
from .gps import GPS_SEMANTICS, gps_equiv
from .hkc import hkc_check, preorder_check
from .lts import FormatError, Gps, Lts, format_lts, parse_gps, parse_lts
from .moore import DEFAULT_CAP, CapExceeded, naive_bisim

EXIT_HOLDS, EXIT_FAILS, EXIT_ERROR = 0, 1, 2


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _resolve_set(system, tokens: str) -> frozenset:
    return frozenset(system.resolve_state(t) for t in tokens.split(",") if t)


def _render_detstate(state, lts: Lts) -> str:
    if state is TOP:
        return "TOP"
    return "{" + ",".join(lts.state_name(x) for x in sorted(state)) + "}"


def _emit(report: dict, summary: str) -> None:
    print(json.dumps(report, indent=2))
    print(summary, file=sys.stderr)


def cmd_equiv(args) -> int:
    lts = parse_lts(_read_source(args.file))
    left, right = _resolve_set(lts, args.left), _resolve_set(lts, args.right)
    d = decorate(lts, args.sem)
    t0 = time.perf_counter()
    counterexample: Optional[Tuple] = None
    witness = None
    states = pairs = None
    if args.algo == "naive":
        equal, payload = naive_bisim(d, left, right, args.cap)
        if equal:
            pairs = len(payload)
            witness = [[_render_detstate(l, lts), _render_detstate(r, lts)]
                       for l, r in payload]
        else:
            counterexample = payload
    elif args.algo == "hkc":
        rep = hkc_check(d, left, right, args.cap)
        equal, pairs = rep.equal, len(rep.relation)
        if equal:
            witness = [[_render_detstate(l, lts), _render_detstate(r, lts)]
                       for l, r in rep.relation]
        else:
            counterexample = rep.counterexample
    else:  # brzozowski
        equal, states, _ = decide(d, "brzozowski", left, right, args.cap)
    ms = (time.perf_counter() - t0) * 1000.0
    report = {
        "schema": 1, "result": equal, "semantics": args.sem,
        "algorithm": args.algo,
        "stats": {"states": states, "pairs": pairs, "time_ms": ms},
    }
    if counterexample is not None:
        report["counterexample"] = [render_eff_label(l) for l in counterexample]
    if witness is not None:
        report["witness"] = witness
    verdict = "equivalent" if equal else "not equivalent"
    _emit(report, f"{verdict} under {args.sem} ({args.algo}, {ms:.1f} ms)")
    return EXIT_HOLDS if equal else EXIT_FAILS


def cmd_preorder(args) -> int:
    lts = parse_lts(_read_source(args.file))
    x, y = lts.resolve_state(args.left), lts.resolve_state(args.right)
    d = decorate(lts, args.sem)
    rep = preorder_check(d, args.sem, x, y, args.cap)
    report = {
        "schema": 1, "result": rep.equal, "semantics": args.sem,
        "algorithm": "hkc",
        "stats": {"states": None, "pairs": len(rep.relation),
                  "time_ms": rep.wall_time * 1000.0},
    }
    if rep.counterexample is not None:
        report["counterexample"] = [render_eff_label(l) for l in rep.counterexample]
    rel = "below" if rep.equal else "not below"
    _emit(report, f"{args.left} {rel} {args.right} in the {args.sem} preorder")
    return EXIT_HOLDS if rep.equal else EXIT_FAILS


def cmd_minimize(args) -> int:
    lts = parse_lts(_read_source(args.file))
    inits = _resolve_set(lts, args.init)
    if not inits:
        raise ValueError("--init needs at least one state")
    d = decorate(lts, args.sem)
    t0 = time.perf_counter()
    intermediate, minimal = brzozowski_minimize(d, inits, args.cap)
    ms = (time.perf_counter() - t0) * 1000.0
    machine = {
        "states": minimal.n_states,
        "intermediate_states": intermediate.n_states,
        "init": minimal.inits[0],
        "alphabet": [render_eff_label(l) for l in minimal.alphabet],
        "outputs": [render_output(o, lts.alphabet) for o in minimal.outputs],
        "steps": [{render_eff_label(l): row[l] for l in minimal.alphabet}
                  for row in minimal.steps],
    }
    report = {
        "schema": 1, "result": machine, "semantics": args.sem,
        "algorithm": "brzozowski",
        "stats": {"states": minimal.n_states, "pairs": None, "time_ms": ms},
    }
    _emit(report, f"minimal machine: {minimal.n_states} states "
                  f"(intermediate {intermediate.n_states}, {ms:.1f} ms)")
    return EXIT_HOLDS


def cmd_gps_equiv(args) -> int:
    g = parse_gps(_read_source(args.file))
    x, y = g.resolve_state(args.left), g.resolve_state(args.right)
    t0 = time.perf_counter()
    equal, word = gps_equiv(g, args.sem, x, y)
    if equal and args.with_trace and args.sem != "g_trace":
        equal, word = gps_equiv(g, "g_trace", x, y)
    ms = (time.perf_counter() - t0) * 1000.0
    report = {
        "schema": 1, "result": equal, "semantics": args.sem,
        "algorithm": "span",
        "stats": {"states": g.n_states, "pairs": None, "time_ms": ms},
    }
    if word is not None:
        report["counterexample"] = list(word)
    verdict = "equivalent" if equal else "not equivalent"
    _emit(report, f"{verdict} under {args.sem} (exact rational arithmetic)")
    return EXIT_HOLDS if equal else EXIT_FAILS


def cmd_gen(args) -> int:
    maker = {"interleave": gen_interleave, "chain": gen_chain,
             "cycles": gen_cycles}[args.family]
    sys.stdout.write(format_lts(maker(args.n)))
    return EXIT_HOLDS


def cmd_bench(args) -> int:
    if args.spec:
        spec = json.loads(_read_source(args.spec))
        from .bench import BenchCase
        cases = []
        for c in spec["cases"]:
            lts = parse_lts(_read_source(c["file"]))
            cases.append(BenchCase(c.get("name", c["file"]), lts,
                                   _resolve_set(lts, str(c["left"])),
                                   _resolve_set(lts, str(c["right"]))))
        semantics = spec.get("semantics", ["trace", "may", "must"])
        algorithms = spec.get("algorithms",
                              ["oracle", "naive", "hkc", "brzozowski"])
        cap = spec.get("cap", DEFAULT_CAP)
    else:
        cases = default_cases()
        semantics = ["trace", "ready", "failure", "may", "must"]
        algorithms = ["oracle", "naive", "hkc", "brzozowski"]
        cap = DEFAULT_CAP
    report = run_matrix(cases, semantics, algorithms, cap)
    text = report.to_csv() if args.format == "csv" else report.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    n_dis = len(report.disagreements)
    print(f"bench: {len(report.records)} records, {n_dis} disagreements",
          file=sys.stderr)
    return EXIT_HOLDS if n_dis == 0 else EXIT_FAILS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="semcheck",
        description="Decide behavioural equivalences and preorders on finite "
                    "transition systems.")
    sub = p.add_subparsers(dest="command", required=True)

    eq = sub.add_parser("equiv", help="decide equivalence of two state sets")
    eq.add_argument("--sem", required=True, choices=SEMANTICS)
    eq.add_argument("--algo", default="hkc",
                    choices=["naive", "hkc", "brzozowski"])
    eq.add_argument("--cap", type=int, default=DEFAULT_CAP,
                    help="state/pair budget (default %(default)s)")
    eq.add_argument("file")
    eq.add_argument("left", help="state or comma-separated state set")
    eq.add_argument("right", help="state or comma-separated state set")
    eq.set_defaults(fn=cmd_equiv)

    po = sub.add_parser("preorder", help="decide a testing preorder")
    po.add_argument("--sem", required=True, choices=["may", "must"])
    po.add_argument("--cap", type=int, default=DEFAULT_CAP)
    po.add_argument("file")
    po.add_argument("left")
    po.add_argument("right")
    po.set_defaults(fn=cmd_preorder)

    mi = sub.add_parser("minimize",
                        help="minimal Moore machine by double reversal")
    mi.add_argument("--sem", required=True, choices=SEMANTICS)
    mi.add_argument("--init", required=True,
                    help="comma-separated initial state set")
    mi.add_argument("--cap", type=int, default=DEFAULT_CAP)
    mi.add_argument("file")
    mi.set_defaults(fn=cmd_minimize)

    gq = sub.add_parser("gps-equiv",
                        help="decide a probabilistic equivalence exactly")
    gq.add_argument("--sem", required=True, choices=list(GPS_SEMANTICS))
    gq.add_argument("--with-trace", action="store_true", dest="with_trace",
                    help="additionally require probabilistic trace equality")
    gq.add_argument("file")
    gq.add_argument("left")
    gq.add_argument("right")
    gq.set_defaults(fn=cmd_gps_equiv)

    ge = sub.add_parser("gen", help="emit a parametric benchmark family")
    ge.add_argument("--family", required=True,
                    choices=["interleave", "chain", "cycles"])
    ge.add_argument("--n", type=int, required=True)
    ge.set_defaults(fn=cmd_gen)

    be = sub.add_parser("bench", help="run the cross-check matrix")
    be.add_argument("--spec", help="JSON file describing cases to run")
    be.add_argument("--format", default="json", choices=["json", "csv"])
    be.add_argument("--out", help="write the report here instead of stdout")
    be.set_defaults(fn=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (FormatError, ValueError, KeyError) as exc:
        print(f"semcheck: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except CapExceeded as exc:
        print(f"semcheck: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"semcheck: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
