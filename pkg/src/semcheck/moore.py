"""Generalised subset construction over a decorated LTS.

A decorated system determinises into a Moore machine whose states are sets of
base states (plus an absorbing TOP under must testing): outputs join pointwise
and steps are unions of rows.  This module provides lazy evaluation of that
machine (``det_output`` / ``det_step`` / ``behavior``), explicit construction
of its reachable part, a naive bisimulation check on it, and partition
refinement to its coarsest quotient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .decorations import (
    TOP,
    DecoratedLts,
    EffLabel,
    Output,
    Top,
    VariantMismatch,
    bottom_output,
    join_outputs,
)
from .lts import full_mask, submasks

#: A determinised state: a set of base states, or the absorbing top element
#: (must testing only).  Probabilistic systems determinise into distributions
#: instead; those live in :mod:`semcheck.gps` as ``Distribution``.
DetState = Union[FrozenSet[int], Top]

DEFAULT_CAP = 1_000_000


class CapExceeded(RuntimeError):
    """State-count budget exhausted during an explicit construction."""

    def __init__(self, stage: str, states_built: int):
        self.stage = stage
        self.states_built = states_built
        super().__init__(f"{stage}: exceeded cap after building {states_built} states")


def det_output(d: DecoratedLts, state: DetState) -> Output:
    """Pointwise join of the member states' outputs (bottom for the empty set;
    the TOP state is only meaningful under must testing)."""
    if state is TOP:
        if d.output_kind != "top_or_family":
            raise VariantMismatch("TOP state outside must semantics")
        return Output("top_or_family", TOP)
    out = bottom_output(d.output_kind)
    for x in state:
        out = join_outputs(out, d.outputs[x])
    return out


def det_step(d: DecoratedLts, state: DetState, label: EffLabel) -> DetState:
    """Union of the member states' transition rows; TOP rows absorb."""
    if label not in d.eff_alphabet:
        raise ValueError(f"unknown label {label!r}")
    if state is TOP:
        return TOP
    acc: set = set()
    for x in state:
        row = d.transitions.get((x, label), frozenset())
        if row is TOP:
            return TOP
        acc.update(row)
    return frozenset(acc)


def behavior(d: DecoratedLts, state: DetState, word: Iterable[EffLabel]) -> Output:
    """Output after running ``word`` from ``state`` in the determinised machine."""
    for label in word:
        state = det_step(d, state, label)
    return det_output(d, state)


@dataclass
class MooreMachine:
    """An explicit finite Moore machine with total transitions.

    ``state_keys`` records what each state index denotes (a ``DetState`` for
    subset constructions, a coordinate tuple for reversal passes) so callers
    can inspect the construction; ``inits`` aligns with the initial states the
    machine was built from, in order.
    """

    semantics: str
    alphabet: Tuple[EffLabel, ...]
    outputs: List[Output]
    steps: List[Dict[EffLabel, int]]
    inits: List[int]
    state_keys: List[object] = field(default_factory=list)

    @property
    def n_states(self) -> int:
        return len(self.outputs)

    def run(self, word: Iterable[EffLabel], start: Optional[int] = None) -> Output:
        q = self.inits[0] if start is None else start
        for label in word:
            q = self.steps[q][label]
        return self.outputs[q]


def reachable_machine(d: DecoratedLts, inits: Sequence[DetState],
                      cap: int = DEFAULT_CAP) -> MooreMachine:
    """Breadth-first construction of the determinised machine reachable from
    ``inits`` (labels explored in alphabet order).  Raises :class:`CapExceeded`
    once more than ``cap`` states would be materialised."""
    index: Dict[object, int] = {}
    keys: List[DetState] = []
    order: List[DetState] = []

    def intern(s: DetState) -> int:
        k = ("TOP",) if s is TOP else s
        if k not in index:
            if len(keys) >= cap:
                raise CapExceeded("determinisation", len(keys))
            index[k] = len(keys)
            keys.append(s)
            order.append(s)
        return index[k]

    init_idx = [intern(s) for s in inits]
    steps: List[Dict[EffLabel, int]] = []
    i = 0
    while i < len(order):
        s = order[i]
        row = {}
        for label in d.eff_alphabet:
            row[label] = intern(det_step(d, s, label))
        steps.append(row)
        i += 1
    outputs = [det_output(d, s) for s in keys]
    return MooreMachine(d.semantics, d.eff_alphabet, outputs, steps, init_idx, keys)


def naive_bisim(d: DecoratedLts, left: DetState, right: DetState,
                cap: int = DEFAULT_CAP):
    """Breadth-first bisimulation on the determinised machine.

    Returns ``(True, relation)`` where ``relation`` lists the processed state
    pairs in discovery order, or ``(False, word)`` with a distinguishing word.
    """
    def key(s: DetState):
        return ("TOP",) if s is TOP else s

    start = (left, right)
    seen = {(key(left), key(right))}
    queue: List[Tuple[DetState, DetState]] = [start]
    parent: Dict[Tuple, Optional[Tuple]] = {(key(left), key(right)): None}
    relation: List[Tuple[DetState, DetState]] = []
    qi = 0
    while qi < len(queue):
        l, r = queue[qi]
        qi += 1
        if det_output(d, l) != det_output(d, r):
            word: List[EffLabel] = []
            node = parent[(key(l), key(r))]
            while node is not None:
                prev, label = node
                word.append(label)
                node = parent[prev]
            return False, tuple(reversed(word))
        relation.append((l, r))
        for label in d.eff_alphabet:
            nl, nr = det_step(d, l, label), det_step(d, r, label)
            k = (key(nl), key(nr))
            if k not in seen:
                if len(seen) >= cap:
                    raise CapExceeded("pair exploration", len(seen))
                seen.add(k)
                parent[k] = ((key(l), key(r)), label)
                queue.append((nl, nr))
    return True, relation


def moore_partition_classes(machine: MooreMachine) -> Tuple[int, ...]:
    """Coarsest output-and-step-respecting partition of the machine's states,
    as block identifiers numbered by first occurrence."""
    def renumber(sig: List[object]) -> Tuple[int, ...]:
        ids: Dict[object, int] = {}
        return tuple(ids.setdefault(s, len(ids)) for s in sig)

    blocks = renumber([repr(o) for o in machine.outputs])
    while True:
        sig = [(blocks[q],
                tuple(blocks[machine.steps[q][a]] for a in machine.alphabet))
               for q in range(machine.n_states)]
        refined = renumber(sig)
        if refined == blocks:
            return blocks
        blocks = refined


# ---------------------------------------------------------------------------
# Output coarsenings along semantic inclusions
# ---------------------------------------------------------------------------

def coarsen_failure_to_ctrace(v: Output, alphabet: Tuple[str, ...]) -> Output:
    """A failure-family output is a completed trace exactly when the whole
    alphabet is refusable."""
    if v.kind != "family":
        raise VariantMismatch("expected a family output")
    return Output("bit", 1 if full_mask(alphabet) in v.value else 0)


def coarsen_ready_to_failure(v: Output, alphabet: Tuple[str, ...]) -> Output:
    """Failure family induced by a ready family: everything disjoint from some
    member's enabled set."""
    if v.kind != "family":
        raise VariantMismatch("expected a family output")
    full = full_mask(alphabet)
    acc: set = set()
    for ready in v.value:
        acc.update(submasks(full & ~ready))
    return Output("family", frozenset(acc))
