#!/usr/bin/env python3
"""Measure how the parametric families separate the back ends.

Three sweeps, each printing one table:

  chain       reverse-pass state counts double per step while the forward
              subset construction stays linear (n+2 states);
  interleave  the congruence basis stays linear (n+2 pairs) while plain
              determinisation grows past 2^n subset states;
  cycles      the superposition of n disjoint cycles reaches lcm(1..n)
              subset states yet reverses to a single-state machine.

Usage:
    python scripts/family_growth.py
    python scripts/family_growth.py --chain-max 12 --interleave-max 10
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass
from typing import Sequence

from semcheck import (
    CapExceeded,
    brzozowski_minimize,
    cycle_starts,
    decorate,
    disjoint_union,
    gen_chain,
    gen_cycles,
    gen_interleave,
    hkc_check,
    parse_lts,
    reachable_machine,
)


@dataclass
class GrowthConfig:
    chain_min: int = 4
    chain_max: int = 10
    interleave_max: int = 8
    cycles_max: int = 5
    subset_cap: int = 4096


def sweep_chain(cfg: GrowthConfig) -> None:
    print("chain family, must semantics (start: far end of the chain)")
    print(f"{'n':>3} {'forward':>8} {'reverse1':>9} {'ratio':>6} {'ms':>8}")
    prev = None
    for n in range(cfg.chain_min, cfg.chain_max + 1):
        lts = gen_chain(n)
        d = decorate(lts, "must")
        top = frozenset({lts.names.index(f"x{n}")})
        t0 = time.perf_counter()
        forward = reachable_machine(d, [top])
        inter, _ = brzozowski_minimize(d, top)
        ms = (time.perf_counter() - t0) * 1000
        ratio = f"{inter.n_states / prev:.2f}" if prev else "-"
        print(f"{n:>3} {forward.n_states:>8} {inter.n_states:>9} "
              f"{ratio:>6} {ms:>8.1f}")
        prev = inter.n_states
    print()


def sweep_interleave(cfg: GrowthConfig) -> None:
    print("interleave family, must semantics (x vs y)")
    print(f"{'n':>3} {'hkc pairs':>10} {'subsets':>10} {'ms':>8}")
    for n in range(2, cfg.interleave_max + 1):
        lts = gen_interleave(n)
        d = decorate(lts, "must")
        x = frozenset({lts.names.index("x")})
        y = frozenset({lts.names.index("y")})
        t0 = time.perf_counter()
        rep = hkc_check(d, x, y)
        assert rep.equal
        try:
            subsets = str(reachable_machine(d, [x], cap=cfg.subset_cap).n_states)
        except CapExceeded:
            subsets = f">{cfg.subset_cap}"
        ms = (time.perf_counter() - t0) * 1000
        print(f"{n:>3} {len(rep.relation):>10} {subsets:>10} {ms:>8.1f}")
    print()


def sweep_cycles(cfg: GrowthConfig) -> None:
    print("cycles family, trace semantics (superposition of all cycles)")
    print(f"{'n':>3} {'lcm(1..n)':>10} {'subsets':>8} {'reverse1':>9} {'loop pairs':>11}")
    for n in range(2, cfg.cycles_max + 1):
        lts = gen_cycles(n)
        d = decorate(lts, "trace")
        starts = cycle_starts(n)
        m = reachable_machine(d, [starts])
        inter, _ = brzozowski_minimize(d, starts)
        lcm = math.lcm(*range(1, n + 1))
        # Compare against a fresh one-state loop to force the full period.
        joint = disjoint_union(lts, parse_lts("lts 1\nalphabet a\n0 a 0\n"))
        rep = hkc_check(decorate(joint, "trace"), starts,
                        frozenset({lts.n_states}))
        assert rep.equal
        print(f"{n:>3} {lcm:>10} {m.n_states:>8} {inter.n_states:>9} "
              f"{len(rep.relation):>11}")
    print()


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--chain-max", type=int, default=10)
    parser.add_argument("--interleave-max", type=int, default=8)
    parser.add_argument("--cycles-max", type=int, default=5)
    parser.add_argument("--subset-cap", type=int, default=4096)
    ns = parser.parse_args(sys.argv[1:] if argv is None else argv)
    cfg = GrowthConfig(chain_max=ns.chain_max,
                       interleave_max=ns.interleave_max,
                       cycles_max=ns.cycles_max,
                       subset_cap=ns.subset_cap)
    sweep_chain(cfg)
    sweep_interleave(cfg)
    sweep_cycles(cfg)
    return 0


if __name__ == "__main__":
    sys.exit(main())
