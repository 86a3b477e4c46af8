"""Semantic decorations of an LTS.

A decoration equips each state with an output drawn from a join-semilattice
and (for some semantics) adjusts the transition structure; determinising the
decorated system then turns behavioural equivalence for the chosen semantics
into Moore-machine equivalence.  Supported semantics tags:

==========  =========================================================
language    accepted-word indicator (needs final states)
trace       constant-true output, strong transitions
ctrace      completed traces: true exactly at deadlocked states
ready       singleton family holding the enabled-action set
failure     downward-closed family of refusable action sets
pfutures    possible futures: trace-equivalence class identifier
rtrace      ready traces: ready outputs over readiness-annotated labels
ftrace      failure traces: failure outputs over the same labels
may         may testing: weak transitions, constant-true output
must        must testing: weak transitions with a divergence top element
==========  =========================================================

Outputs are tagged values; families of action subsets use bitmasks over the
alphabet tuple (see :mod:`semcheck.lts`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

from .lts import (
    TAU,
    Lts,
    StateSet,
    divergent_states,
    downclose_masks,
    fail_sets,
    full_mask,
    initial_actions,
    labels_of,
    mask_of,
    submasks,
    weak_successors,
)

SEMANTICS = ("language", "trace", "ctrace", "ready", "failure",
             "pfutures", "rtrace", "ftrace", "may", "must")

#: semantics tag -> output kind
OUTPUT_KIND = {
    "language": "bit", "trace": "bit", "ctrace": "bit", "may": "bit",
    "ready": "family", "failure": "family", "rtrace": "family", "ftrace": "family",
    "pfutures": "class_set",
    "must": "top_or_family",
}

#: semantics whose family outputs are downward closed (eligible for the
#: antichain compaction in :func:`compact_output`).
DOWNCLOSED_FAMILY_SEMANTICS = ("failure", "ftrace", "must")


class VariantMismatch(ValueError):
    """An output or determinised state was used at the wrong variant."""


@dataclass(frozen=True)
class Top:
    """Absorbing top element (divergence under must testing)."""

    def __repr__(self) -> str:
        return "TOP"


TOP = Top()

#: Effective transition label: a plain action, or an action paired with the
#: emitting state's enabled-action set (ready/failure traces).
EffLabel = Union[str, Tuple[str, FrozenSet[str]]]


@dataclass(frozen=True)
class Output:
    """A decorated output value.

    kind        payload
    ----        -------
    bit         0 or 1
    family      frozenset of action-subset bitmasks
    top_or_family  TOP, or a frozenset of bitmasks
    class_set   frozenset of trace-class identifiers
    prob        exact Fraction
    prob_family mapping action-subset mask -> Fraction, as sorted tuple pairs
    """

    kind: str
    value: object

    def is_top(self) -> bool:
        return self.kind == "top_or_family" and self.value is TOP


def bottom_output(kind: str) -> Output:
    if kind == "bit":
        return Output("bit", 0)
    if kind in ("family", "top_or_family", "class_set"):
        return Output(kind, frozenset())
    if kind == "prob":
        return Output("prob", Fraction(0))
    if kind == "prob_family":
        return Output("prob_family", ())
    raise VariantMismatch(f"unknown output kind {kind!r}")


def join_outputs(a: Output, b: Output) -> Output:
    """Join in the output semilattice.  Probabilistic outputs are linear-only
    and refuse to join."""
    if a.kind != b.kind:
        raise VariantMismatch(f"cannot join {a.kind} with {b.kind}")
    if a.kind == "bit":
        return Output("bit", a.value | b.value)
    if a.kind in ("family", "class_set"):
        return Output(a.kind, a.value | b.value)
    if a.kind == "top_or_family":
        if a.value is TOP or b.value is TOP:
            return Output(a.kind, TOP)
        return Output(a.kind, a.value | b.value)
    raise VariantMismatch(f"outputs of kind {a.kind} admit no join")


def join_all(kind: str, values: Iterable[Output]) -> Output:
    out = bottom_output(kind)
    for v in values:
        out = join_outputs(out, v)
    return out


# ---------------------------------------------------------------------------
# Downset / antichain correspondence
# ---------------------------------------------------------------------------

def antichain_min(masks: Iterable[int]) -> FrozenSet[int]:
    """Inclusion-minimal members of a family of action subsets."""
    ms = set(masks)
    return frozenset(m for m in ms
                     if not any(o != m and o & m == o for o in ms))


def downset_to_antichain(family: FrozenSet[int], alphabet: Tuple[str, ...]) -> FrozenSet[int]:
    """The antichain of complements of the maximal members of a downset.

    Inverse of :func:`antichain_to_downset`; the full powerset maps to the
    singleton antichain holding the empty set."""
    full = full_mask(alphabet)
    return antichain_min(full & ~m for m in family)


def antichain_to_downset(antichain: FrozenSet[int], alphabet: Tuple[str, ...]) -> FrozenSet[int]:
    """Downward closure of the complements of an antichain's members."""
    full = full_mask(alphabet)
    return downclose_masks(full & ~m for m in antichain)


def compact_output(v: Output, alphabet: Tuple[str, ...], semantics: str) -> Output:
    """Antichain form of a downward-closed family output (top element kept);
    outputs of other semantics are returned unchanged."""
    if semantics not in DOWNCLOSED_FAMILY_SEMANTICS:
        return v
    if v.kind == "family":
        return Output("family", downset_to_antichain(v.value, alphabet))
    if v.kind == "top_or_family":
        if v.value is TOP:
            return v
        return Output("top_or_family", downset_to_antichain(v.value, alphabet))
    return v


# ---------------------------------------------------------------------------
# Decorated systems
# ---------------------------------------------------------------------------

@dataclass
class DecoratedLts:
    """An LTS after decoration: per-state outputs, an effective alphabet, and
    transition rows that may be marked TOP (must testing under divergence).
    Treated as immutable."""

    semantics: str
    n_states: int
    alphabet: Tuple[str, ...]
    eff_alphabet: Tuple[EffLabel, ...]
    outputs: Tuple[Output, ...]
    transitions: Dict[Tuple[int, EffLabel], Union[StateSet, Top]]

    @property
    def output_kind(self) -> str:
        return OUTPUT_KIND[self.semantics]

    def row(self, x: int, label: EffLabel) -> Union[StateSet, Top]:
        if label not in self.eff_alphabet:
            raise ValueError(f"unknown label {label!r}")
        return self.transitions.get((x, label), frozenset())

    def output(self, x: int) -> Output:
        return self.outputs[x]


def trace_class_of(lts: Lts, cap: int = 1_000_000) -> Tuple[int, ...]:
    """Trace-equivalence class of every state, as small integers numbered by
    first occurrence.  Classes are read off the trace-decorated Moore machine
    built from all singleton state sets and refined to its coarsest partition."""
    from .moore import moore_partition_classes, reachable_machine

    d = decorate(lts, "trace")
    singletons = [frozenset({x}) for x in range(lts.n_states)]
    machine = reachable_machine(d, singletons, cap=cap)
    blocks = moore_partition_classes(machine)
    renumber: Dict[int, int] = {}
    out = []
    for x in range(lts.n_states):
        b = blocks[x]  # singleton inits occupy the first n state indices
        out.append(renumber.setdefault(b, len(renumber)))
    return tuple(out)


def relabel_for_trace_decorations(lts: Lts) -> Lts:
    """Annotate every transition label with the source state's enabled-action
    set; the result is an LTS over pair labels ``(action, readiness)``.  Only
    pairs that actually occur are materialised."""
    pair_trans: Dict[Tuple[int, EffLabel], StateSet] = {}
    pairs = set()
    for x in range(lts.n_states):
        ready = frozenset(labels_of(initial_actions(lts, x), lts.alphabet))
        for a in lts.alphabet:
            ys = lts.successors(x, a)
            if ys:
                lab = (a, ready)
                pairs.add(lab)
                pair_trans[(x, lab)] = ys
    order = {a: i for i, a in enumerate(lts.alphabet)}
    alphabet = tuple(sorted(pairs, key=lambda p: (order[p[0]], sorted(p[1]))))
    return Lts(lts.n_states, alphabet, pair_trans, lts.finals, lts.names)


def _must_rows(lts: Lts, div: StateSet) -> Dict[Tuple[int, str], Union[StateSet, Top]]:
    rows: Dict[Tuple[int, str], Union[StateSet, Top]] = {}
    for x in range(lts.n_states):
        for a in lts.alphabet:
            ws = weak_successors(lts, x, a)
            if x in div or any(y in div for y in ws):
                rows[(x, a)] = TOP
            elif ws:
                rows[(x, a)] = ws
    return rows


def _must_outputs(lts: Lts, div: StateSet,
                  rows: Dict[Tuple[int, str], Union[StateSet, Top]]) -> List[Output]:
    full = full_mask(lts.alphabet)
    memo: Dict[int, Output] = {}

    def out(x: int) -> Output:
        if x in memo:
            return memo[x]
        if x in div:
            v = Output("top_or_family", TOP)
        else:
            taus = lts.successors(x, TAU)
            if taus:
                # Unstable but convergent: acceptance is decided after the
                # internal steps resolve.
                v = join_all("top_or_family", (out(y) for y in taus))
            else:
                enabled = 0
                for i, a in enumerate(lts.alphabet):
                    r = rows.get((x, a), frozenset())
                    if r is TOP or r:
                        enabled |= 1 << i
                v = Output("top_or_family", frozenset(submasks(full & ~enabled)))
        memo[x] = v
        return v

    return [out(x) for x in range(lts.n_states)]


def decorate(lts: Lts, semantics: str, cap: int = 1_000_000) -> DecoratedLts:
    """Decorate ``lts`` for the given semantics tag.

    Strong semantics read only visible transitions (tau edges, if present,
    are internal and do not participate); may/must use weak transitions.
    ``language`` requires the system to declare final states."""
    if semantics not in SEMANTICS:
        raise ValueError(f"unknown semantics {semantics!r}")
    n, alphabet = lts.n_states, lts.alphabet
    strong = {(x, a): lts.successors(x, a)
              for x in range(n) for a in alphabet if lts.successors(x, a)}

    if semantics == "language":
        if lts.finals is None:
            raise ValueError("language semantics needs a 'final' line")
        outputs = [Output("bit", 1 if x in lts.finals else 0) for x in range(n)]
        return DecoratedLts(semantics, n, alphabet, alphabet, tuple(outputs), strong)

    if semantics == "trace":
        outputs = [Output("bit", 1)] * n
        return DecoratedLts(semantics, n, alphabet, alphabet, tuple(outputs), strong)

    if semantics == "ctrace":
        outputs = [Output("bit", 1 if initial_actions(lts, x) == 0 else 0)
                   for x in range(n)]
        return DecoratedLts(semantics, n, alphabet, alphabet, tuple(outputs), strong)

    if semantics == "ready":
        outputs = [Output("family", frozenset({initial_actions(lts, x)}))
                   for x in range(n)]
        return DecoratedLts(semantics, n, alphabet, alphabet, tuple(outputs), strong)

    if semantics == "failure":
        outputs = [Output("family", fail_sets(lts, x)) for x in range(n)]
        return DecoratedLts(semantics, n, alphabet, alphabet, tuple(outputs), strong)

    if semantics == "pfutures":
        classes = trace_class_of(lts, cap=cap)
        outputs = [Output("class_set", frozenset({classes[x]})) for x in range(n)]
        return DecoratedLts(semantics, n, alphabet, alphabet, tuple(outputs), strong)

    if semantics in ("rtrace", "ftrace"):
        relabelled = relabel_for_trace_decorations(lts)
        if semantics == "rtrace":
            outputs = [Output("family", frozenset({initial_actions(lts, x)}))
                       for x in range(n)]
        else:
            outputs = [Output("family", fail_sets(lts, x)) for x in range(n)]
        return DecoratedLts(semantics, n, alphabet, relabelled.alphabet,
                            tuple(outputs), dict(relabelled.transitions))

    if semantics == "may":
        weak = {(x, a): weak_successors(lts, x, a)
                for x in range(n) for a in alphabet if weak_successors(lts, x, a)}
        outputs = [Output("bit", 1)] * n
        return DecoratedLts(semantics, n, alphabet, alphabet, tuple(outputs), weak)

    # must
    div = divergent_states(lts)
    rows = _must_rows(lts, div)
    outputs = _must_outputs(lts, div, rows)
    return DecoratedLts(semantics, n, alphabet, alphabet, tuple(outputs), rows)


# ---------------------------------------------------------------------------
# Rendering helpers (used by the CLI and in test diagnostics)
# ---------------------------------------------------------------------------

def render_action_set(mask: int, alphabet: Tuple[str, ...]) -> str:
    return "{" + ",".join(labels_of(mask, alphabet)) + "}"


def render_output(v: Output, alphabet: Tuple[str, ...]) -> str:
    if v.kind == "bit":
        return str(v.value)
    if v.kind in ("family", "top_or_family"):
        if v.value is TOP:
            return "TOP"
        parts = sorted(v.value)
        return "{" + ",".join(render_action_set(m, alphabet) for m in parts) + "}"
    if v.kind == "class_set":
        return "{" + ",".join(str(c) for c in sorted(v.value)) + "}"
    if v.kind == "prob":
        return str(v.value)
    if v.kind == "prob_family":
        return "{" + ",".join(f"{render_action_set(m, alphabet)}:{p}"
                              for m, p in v.value) + "}"
    return repr(v)


def render_eff_label(label: EffLabel) -> str:
    if isinstance(label, str):
        return label
    a, ready = label
    return f"<{a},{{{','.join(sorted(ready))}}}>"
