"""Core data model for finite labelled transition systems (LTS) and generative
probabilistic systems (GPS).

Provides the text-format parser/serialiser and the tau-aware primitives
(weak transitions, divergence, convergence, initial-action and failure sets)
that the semantic decorations are built from.  Action subsets and families of
action subsets are represented as bitmasks over the system's alphabet tuple.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

TAU = "tau"

StateSet = FrozenSet[int]

_LABEL_RE = re.compile(r"[A-Za-z0-9_]+\Z")


class FormatError(ValueError):
    """Malformed system description.  Carries the offending 1-based line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


# ---------------------------------------------------------------------------
# Bitmask helpers for action subsets and families of action subsets.
# A subset of the alphabet is an int whose bit i stands for alphabet[i];
# a family of subsets is a frozenset of such ints.
# ---------------------------------------------------------------------------

def mask_of(labels: Iterable[str], alphabet: Tuple[str, ...]) -> int:
    m = 0
    for lab in labels:
        m |= 1 << alphabet.index(lab)
    return m


def labels_of(mask: int, alphabet: Tuple[str, ...]) -> Tuple[str, ...]:
    return tuple(a for i, a in enumerate(alphabet) if mask >> i & 1)


def full_mask(alphabet: Tuple[str, ...]) -> int:
    return (1 << len(alphabet)) - 1


def submasks(mask: int) -> List[int]:
    """All subsets of ``mask``, including 0 and ``mask`` itself."""
    out = []
    sub = mask
    while True:
        out.append(sub)
        if sub == 0:
            return out
        sub = (sub - 1) & mask


def downclose_masks(masks: Iterable[int]) -> FrozenSet[int]:
    """Downward closure of a family of subsets under inclusion."""
    out = set()
    for m in masks:
        if m not in out:
            out.update(submasks(m))
    return frozenset(out)


def is_downclosed(masks: FrozenSet[int]) -> bool:
    # Closed under removing a single element iff closed under inclusion.
    for m in masks:
        bits = m
        while bits:
            low = bits & -bits
            if (m & ~low) not in masks:
                return False
            bits ^= low
    return True


# ---------------------------------------------------------------------------
# Labelled transition systems
# ---------------------------------------------------------------------------

@dataclass
class Lts:
    """A finite LTS over a fixed visible alphabet, with optional final states
    (for language semantics) and optional display names.

    ``transitions`` maps ``(state, label)`` to the (possibly empty) set of
    successors; absent keys mean the empty set.  The label ``"tau"`` is the
    internal action and never part of ``alphabet``.  Instances are treated as
    immutable after construction.
    """

    n_states: int
    alphabet: Tuple[str, ...]
    transitions: Dict[Tuple[int, str], StateSet] = field(default_factory=dict)
    finals: Optional[StateSet] = None
    names: Optional[Tuple[str, ...]] = None

    def successors(self, x: int, label: str) -> StateSet:
        return self.transitions.get((x, label), frozenset())

    def state_name(self, x: int) -> str:
        return self.names[x] if self.names else str(x)

    def resolve_state(self, token: str) -> int:
        """Map a display name or numeric index to a state; names win ties."""
        if self.names and token in self.names:
            return self.names.index(token)
        if token.isdigit() and int(token) < self.n_states:
            return int(token)
        raise ValueError(f"unknown state {token!r}")


@dataclass
class Gps:
    """A generative probabilistic system: each state emits each action with an
    exact rational probability; the row over all actions sums to at most 1 and
    the deficit is the probability of termination.
    """

    n_states: int
    alphabet: Tuple[str, ...]
    transitions: Dict[Tuple[int, str], Dict[int, Fraction]] = field(default_factory=dict)
    names: Optional[Tuple[str, ...]] = None

    def row(self, x: int, label: str) -> Dict[int, Fraction]:
        return self.transitions.get((x, label), {})

    def emission_mass(self, x: int) -> Fraction:
        return sum((p for a in self.alphabet for p in self.row(x, a).values()),
                   Fraction(0))

    def termination_mass(self, x: int) -> Fraction:
        return 1 - self.emission_mass(x)

    def state_name(self, x: int) -> str:
        return self.names[x] if self.names else str(x)

    def resolve_state(self, token: str) -> int:
        if self.names and token in self.names:
            return self.names.index(token)
        if token.isdigit() and int(token) < self.n_states:
            return int(token)
        raise ValueError(f"unknown state {token!r}")


# ---------------------------------------------------------------------------
# Text format (version 1)
#
#   lts <n_states>              (or: gps <n_states>)
#   alphabet <label> <label> ...
#   final <idx> <idx> ...       (optional, LTS only)
#   names <name> <name> ...     (optional)
#   <src> <label> <dst>         (LTS transition)
#   <src> <label> <p>/<q> <dst> (GPS transition)
#
# '#' starts a comment; blank lines are ignored.
# ---------------------------------------------------------------------------

def _content_lines(text: str) -> List[Tuple[int, List[str]]]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((i, line.split()))
    return out


def _parse_header(lines, kind: str):
    if not lines:
        raise FormatError("empty description")
    ln, toks = lines[0]
    if len(toks) != 2 or toks[0] != kind or not toks[1].isdigit():
        raise FormatError(f"expected '{kind} <n_states>'", ln)
    n = int(toks[1])
    if n < 1:
        raise FormatError("need at least one state", ln)
    if len(lines) < 2:
        raise FormatError("missing 'alphabet' line", ln)
    ln2, toks2 = lines[1]
    if toks2[0] != "alphabet" or len(toks2) < 2:
        raise FormatError("expected 'alphabet <label> ...'", ln2)
    alphabet = tuple(toks2[1:])
    for lab in alphabet:
        if not _LABEL_RE.match(lab):
            raise FormatError(f"bad label {lab!r}", ln2)
        if lab == TAU:
            raise FormatError("'tau' is reserved and may not appear in the alphabet", ln2)
    if len(set(alphabet)) != len(alphabet):
        raise FormatError("duplicate label in alphabet", ln2)
    return n, alphabet


def _parse_state(tok: str, n: int, ln: int) -> int:
    if not tok.isdigit() or int(tok) >= n:
        raise FormatError(f"bad state index {tok!r}", ln)
    return int(tok)


def parse_lts(text: str) -> Lts:
    """Parse the LTS text format; raise :class:`FormatError` with a line number
    on any violation (unknown labels, out-of-range states, bad header)."""
    lines = _content_lines(text)
    n, alphabet = _parse_header(lines, "lts")
    finals: Optional[StateSet] = None
    names: Optional[Tuple[str, ...]] = None
    trans: Dict[Tuple[int, str], set] = {}
    for ln, toks in lines[2:]:
        if toks[0] == "final":
            if finals is not None:
                raise FormatError("duplicate 'final' line", ln)
            finals = frozenset(_parse_state(t, n, ln) for t in toks[1:])
        elif toks[0] == "names":
            if len(toks) - 1 != n:
                raise FormatError(f"expected {n} names, got {len(toks) - 1}", ln)
            if names is not None:
                raise FormatError("duplicate 'names' line", ln)
            names = tuple(toks[1:])
        else:
            if len(toks) != 3:
                raise FormatError("expected '<src> <label> <dst>'", ln)
            src = _parse_state(toks[0], n, ln)
            lab = toks[1]
            if lab != TAU and lab not in alphabet:
                raise FormatError(f"unknown label {lab!r}", ln)
            dst = _parse_state(toks[2], n, ln)
            trans.setdefault((src, lab), set()).add(dst)
    return Lts(n, alphabet, {k: frozenset(v) for k, v in trans.items()}, finals, names)


def parse_gps(text: str) -> Gps:
    """Parse the GPS text format.  Probabilities are exact rationals ``p/q``;
    each state's total emission mass must be at most 1."""
    lines = _content_lines(text)
    n, alphabet = _parse_header(lines, "gps")
    names: Optional[Tuple[str, ...]] = None
    trans: Dict[Tuple[int, str], Dict[int, Fraction]] = {}
    for ln, toks in lines[2:]:
        if toks[0] == "names":
            if len(toks) - 1 != n:
                raise FormatError(f"expected {n} names, got {len(toks) - 1}", ln)
            names = tuple(toks[1:])
            continue
        if len(toks) != 4:
            raise FormatError("expected '<src> <label> <p>/<q> <dst>'", ln)
        src = _parse_state(toks[0], n, ln)
        lab = toks[1]
        if lab not in alphabet:
            raise FormatError(f"unknown label {lab!r}", ln)
        try:
            p = Fraction(toks[2])
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"bad probability {toks[2]!r}", ln) from None
        if not 0 < p <= 1:
            raise FormatError(f"probability {toks[2]} outside (0, 1]", ln)
        dst = _parse_state(toks[3], n, ln)
        row = trans.setdefault((src, lab), {})
        row[dst] = row.get(dst, Fraction(0)) + p
    g = Gps(n, alphabet, trans, names)
    for x in range(n):
        if g.emission_mass(x) > 1:
            raise FormatError(f"state {x} emits total mass {g.emission_mass(x)} > 1")
    return g


def format_lts(lts: Lts) -> str:
    """Serialise back to the text format; ``parse_lts`` round-trips it."""
    out = [f"lts {lts.n_states}", "alphabet " + " ".join(lts.alphabet)]
    if lts.finals is not None:
        out.append("final " + " ".join(str(x) for x in sorted(lts.finals)))
    if lts.names is not None:
        out.append("names " + " ".join(lts.names))
    labels = list(lts.alphabet) + [TAU]
    for x in range(lts.n_states):
        for lab in labels:
            for y in sorted(lts.successors(x, lab)):
                out.append(f"{x} {lab} {y}")
    return "\n".join(out) + "\n"


def format_gps(g: Gps) -> str:
    out = [f"gps {g.n_states}", "alphabet " + " ".join(g.alphabet)]
    if g.names is not None:
        out.append("names " + " ".join(g.names))
    for x in range(g.n_states):
        for lab in g.alphabet:
            for y, p in sorted(g.row(x, lab).items()):
                out.append(f"{x} {lab} {p.numerator}/{p.denominator} {y}")
    return "\n".join(out) + "\n"


def disjoint_union(a: Lts, b: Lts) -> Lts:
    """Place two systems side by side (states of ``b`` shifted by ``a.n_states``).
    Alphabets must agree; names are kept when both systems carry them."""
    if a.alphabet != b.alphabet:
        raise ValueError("alphabet mismatch in disjoint union")
    trans = dict(a.transitions)
    for (x, lab), ys in b.transitions.items():
        trans[(x + a.n_states, lab)] = frozenset(y + a.n_states for y in ys)
    finals = None
    if a.finals is not None or b.finals is not None:
        finals = frozenset(a.finals or ()) | frozenset(
            y + a.n_states for y in (b.finals or ()))
    names = None
    if a.names is not None and b.names is not None:
        names = a.names + b.names
    return Lts(a.n_states + b.n_states, a.alphabet, trans, finals, names)


# ---------------------------------------------------------------------------
# tau-aware primitives
# ---------------------------------------------------------------------------

def tau_closure(lts: Lts, x: int) -> StateSet:
    """States reachable from ``x`` by zero or more tau steps."""
    seen = {x}
    stack = [x]
    while stack:
        y = stack.pop()
        for z in lts.successors(y, TAU):
            if z not in seen:
                seen.add(z)
                stack.append(z)
    return frozenset(seen)


def weak_successors(lts: Lts, x: int, label: str) -> StateSet:
    """Weak transition targets: tau* label tau* from ``x``."""
    if label == TAU or label not in lts.alphabet:
        raise ValueError(f"label {label!r} not in the visible alphabet")
    out: set = set()
    for y in tau_closure(lts, x):
        for z in lts.successors(y, label):
            out.update(tau_closure(lts, z))
    return frozenset(out)


def divergent_states(lts: Lts) -> StateSet:
    """States that admit an infinite tau run: those that tau-reach a tau-cycle.

    tau-cycles are found as strongly connected components of the tau graph
    that contain a tau edge (size >= 2, or a tau self-loop)."""
    succ = {x: sorted(lts.successors(x, TAU)) for x in range(lts.n_states)}
    index: Dict[int, int] = {}
    low: Dict[int, int] = {}
    on_stack: set = set()
    stack: List[int] = []
    cyclic: set = set()
    counter = 0

    for root in range(lts.n_states):
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                if len(comp) >= 2 or comp[0] in succ[comp[0]]:
                    cyclic.update(comp)

    # Backward closure: everything that tau-reaches a cyclic state diverges.
    preds: Dict[int, List[int]] = {x: [] for x in range(lts.n_states)}
    for x, ys in succ.items():
        for y in ys:
            preds[y].append(x)
    out = set(cyclic)
    frontier = list(cyclic)
    while frontier:
        y = frontier.pop()
        for x in preds[y]:
            if x not in out:
                out.add(x)
                frontier.append(x)
    return frozenset(out)


def diverges(lts: Lts, x: int) -> bool:
    """True iff ``x`` admits an infinite run of tau steps."""
    return x in divergent_states(lts)


def converges_on(lts: Lts, x: int, word: Iterable[str]) -> bool:
    """Convergence along a visible word: ``x`` converges on the empty word iff
    it does not diverge, and on ``a w`` iff it converges on the empty word and
    every weak a-successor converges on ``w``."""
    word = tuple(word)
    div = divergent_states(lts)
    memo: Dict[Tuple[int, int], bool] = {}

    def conv(y: int, i: int) -> bool:
        key = (y, i)
        if key not in memo:
            if y in div:
                memo[key] = False
            elif i == len(word):
                memo[key] = True
            else:
                memo[key] = all(conv(z, i + 1)
                                for z in weak_successors(lts, y, word[i]))
        return memo[key]

    return conv(x, 0)


def initial_actions(lts: Lts, x: int) -> int:
    """Bitmask of visible labels enabled at ``x`` (strong transitions)."""
    m = 0
    for i, a in enumerate(lts.alphabet):
        if lts.successors(x, a):
            m |= 1 << i
    return m


def fail_sets(lts: Lts, x: int) -> FrozenSet[int]:
    """Failure sets of ``x``: every action subset disjoint from its enabled
    labels, i.e. the downward closure of the complement of ``initial_actions``."""
    comp = full_mask(lts.alphabet) & ~initial_actions(lts, x)
    return frozenset(submasks(comp))
