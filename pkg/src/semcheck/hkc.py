"""Equivalence checking by bisimulation up to congruence.

Works on the determinised machine of a decorated LTS without building it:
candidate state-set pairs are discharged when they already lie in the
congruence closure of the relation collected so far, which prunes the search
exponentially on systems whose subset construction blows up.  The closure is
computed by saturating a set with the collected pairs (join a pair's other
component whenever one component is dominated) until a fixpoint.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .decorations import TOP, DecoratedLts, EffLabel
from .moore import DEFAULT_CAP, CapExceeded, DetState, det_output, det_step


def _leq(a: DetState, b: DetState) -> bool:
    """Set inclusion extended with an absorbing top element."""
    if b is TOP:
        return True
    if a is TOP:
        return False
    return a <= b


def _join(a: DetState, b: DetState) -> DetState:
    if a is TOP or b is TOP:
        return TOP
    return a | b


def saturate(pairs: Sequence[Tuple[DetState, DetState]], z: DetState) -> DetState:
    """Least fixpoint of widening ``z`` by the given pairs: whenever one
    component of a pair is dominated by ``z``, join in the other component."""
    changed = True
    while changed:
        changed = False
        for u, v in pairs:
            if _leq(u, z) and not _leq(v, z):
                z = _join(z, v)
                changed = True
            if _leq(v, z) and not _leq(u, z):
                z = _join(z, u)
                changed = True
    return z


def in_congruence(pairs: Sequence[Tuple[DetState, DetState]],
                  left: DetState, right: DetState) -> bool:
    """Whether ``(left, right)`` lies in the congruence closure of ``pairs``
    (both sides saturate to the same set)."""
    return saturate(pairs, left) == saturate(pairs, right)


@dataclass
class HkcReport:
    """Outcome of a congruence-based equivalence check."""

    equal: bool
    relation: List[Tuple[DetState, DetState]]
    pairs_processed: int
    counterexample: Optional[Tuple[EffLabel, ...]]
    wall_time: float


def hkc_check(d: DecoratedLts, left: DetState, right: DetState,
              cap: int = DEFAULT_CAP) -> HkcReport:
    """Decide determinised equality of ``left`` and ``right``.

    Pairs are processed first-in-first-out and successors pushed in alphabet
    order, so the relation returned for a fixed input is reproducible.  On
    failure the counterexample word distinguishes the two behaviours."""
    t0 = time.perf_counter()

    def key(s: DetState):
        return ("TOP",) if s is TOP else s

    todo: List[Tuple[DetState, DetState]] = [(left, right)]
    parent: Dict[Tuple, Optional[Tuple]] = {(key(left), key(right)): None}
    relation: List[Tuple[DetState, DetState]] = []
    processed = 0
    qi = 0
    while qi < len(todo):
        l, r = todo[qi]
        qi += 1
        processed += 1
        if processed > cap:
            raise CapExceeded("pair exploration", processed)
        basis = relation + todo[qi:]
        if in_congruence(basis, l, r):
            continue
        if det_output(d, l) != det_output(d, r):
            word: List[EffLabel] = []
            node = parent[(key(l), key(r))]
            while node is not None:
                prev, label = node
                word.append(label)
                node = parent[prev]
            return HkcReport(False, relation, processed,
                             tuple(reversed(word)), time.perf_counter() - t0)
        for label in d.eff_alphabet:
            nl, nr = det_step(d, l, label), det_step(d, r, label)
            k = (key(nl), key(nr))
            if k not in parent:
                parent[k] = ((key(l), key(r)), label)
            todo.append((nl, nr))
        relation.append((l, r))
    return HkcReport(True, relation, processed, None, time.perf_counter() - t0)


def preorder_check(d: DecoratedLts, semantics: str, x: int, y: int,
                   cap: int = DEFAULT_CAP) -> HkcReport:
    """Testing preorders as determinised equalities over joined state sets.

    may:  x below y iff joining x onto y leaves y's behaviour unchanged;
    must: x below y iff joining y onto x leaves x's behaviour unchanged.
    """
    if semantics not in ("may", "must"):
        raise ValueError(f"preorders are defined for may/must, not {semantics!r}")
    if d.semantics != semantics:
        raise ValueError(f"system decorated for {d.semantics!r}, expected {semantics!r}")
    joined = frozenset({x, y})
    if semantics == "may":
        return hkc_check(d, joined, frozenset({y}), cap)
    return hkc_check(d, joined, frozenset({x}), cap)
