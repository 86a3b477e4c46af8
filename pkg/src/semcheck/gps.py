"""Behavioural equivalences for generative probabilistic systems.

A GPS determinises into a machine over state distributions; the probabilistic
ready/failure/trace decorations make the outputs linear in the distribution,
so equality of two states' behaviours reduces to every word sending their
difference vector to output zero.  That is decided exactly (Fraction
arithmetic) by a breadth-first linear-span search: the difference vector's
orbit under the transition maps spans a subspace of dimension at most the
number of states, so at most that many basis insertions occur before the
queue drains.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .decorations import Output, VariantMismatch
from .lts import Gps, full_mask, submasks

GPS_SEMANTICS = ("g_ready", "g_failure", "g_mfailure", "g_trace", "g_mtrace")


@dataclass(frozen=True)
class Distribution:
    """A sparse rational vector over states.

    Unsigned distributions (``signed=False``) are sub-probability: entries
    positive, total mass at most 1.  Signed vectors arise as differences
    inside the equivalence check and relax both constraints."""

    entries: Tuple[Tuple[int, Fraction], ...]
    signed: bool = False

    def __post_init__(self):
        if any(p == 0 for _, p in self.entries):
            raise ValueError("distribution entries must be nonzero")
        if not self.signed:
            if any(p < 0 for _, p in self.entries):
                raise ValueError("unsigned distribution with negative mass")
            if self.mass() > 1:
                raise ValueError("unsigned distribution with mass above 1")

    @staticmethod
    def from_dict(weights: Dict[int, Fraction], signed: bool = False) -> "Distribution":
        entries = tuple(sorted((x, p) for x, p in weights.items() if p != 0))
        return Distribution(entries, signed)

    @staticmethod
    def point(x: int) -> "Distribution":
        return Distribution(((x, Fraction(1)),))

    def as_dict(self) -> Dict[int, Fraction]:
        return dict(self.entries)

    def mass(self) -> Fraction:
        return sum((p for _, p in self.entries), Fraction(0))

    def sub(self, other: "Distribution") -> "Distribution":
        w = self.as_dict()
        for x, p in other.entries:
            w[x] = w.get(x, Fraction(0)) - p
        return Distribution.from_dict(w, signed=True)

    def is_zero(self) -> bool:
        return not self.entries


@dataclass
class GpsDecorated:
    """A GPS with per-state probabilistic outputs for one semantics tag."""

    semantics: str
    gps: Gps
    outputs: Tuple[Output, ...]


def _initials_mask(g: Gps, x: int) -> int:
    m = 0
    for i, a in enumerate(g.alphabet):
        if g.row(x, a):
            m |= 1 << i
    return m


def gps_decorate(g: Gps, semantics: str) -> GpsDecorated:
    """Attach probabilistic outputs.

    g_ready     unit weight on the enabled-action set
    g_failure   unit weight on every refusable set
    g_mfailure  unit weight on the complement of the enabled set
    g_trace     the constant 1
    g_mtrace    the termination mass
    """
    if semantics not in GPS_SEMANTICS:
        raise ValueError(f"unknown GPS semantics {semantics!r}")
    full = full_mask(g.alphabet)
    outs: List[Output] = []
    for x in range(g.n_states):
        enabled = _initials_mask(g, x)
        if semantics == "g_ready":
            outs.append(Output("prob_family", ((enabled, Fraction(1)),)))
        elif semantics == "g_failure":
            fam = tuple(sorted((z, Fraction(1)) for z in submasks(full & ~enabled)))
            outs.append(Output("prob_family", fam))
        elif semantics == "g_mfailure":
            outs.append(Output("prob_family", ((full & ~enabled, Fraction(1)),)))
        elif semantics == "g_trace":
            outs.append(Output("prob", Fraction(1)))
        else:  # g_mtrace
            outs.append(Output("prob", g.termination_mass(x)))
    return GpsDecorated(semantics, g, tuple(outs))


def gps_det_step(g: Gps, phi: Distribution, label: str) -> Distribution:
    """Push a distribution through one action: the linear image under the
    action's substochastic matrix."""
    if label not in g.alphabet:
        raise ValueError(f"unknown label {label!r}")
    out: Dict[int, Fraction] = {}
    for x, p in phi.entries:
        for y, q in g.row(x, label).items():
            out[y] = out.get(y, Fraction(0)) + p * q
    return Distribution.from_dict(out, signed=phi.signed)


def gps_det_output(dec: GpsDecorated, phi: Distribution) -> Output:
    """Linear extension of the state outputs to a distribution."""
    if dec.semantics in ("g_trace", "g_mtrace"):
        total = Fraction(0)
        for x, p in phi.entries:
            total += p * dec.outputs[x].value
        return Output("prob", total)
    acc: Dict[int, Fraction] = {}
    for x, p in phi.entries:
        for mask, w in dec.outputs[x].value:
            acc[mask] = acc.get(mask, Fraction(0)) + p * w
    fam = tuple(sorted((m, w) for m, w in acc.items() if w != 0))
    return Output("prob_family", fam)


def _is_zero_output(v: Output) -> bool:
    return v.value == 0 if v.kind == "prob" else not v.value


def gps_equiv(g: Gps, semantics: str, x: int, y: int
              ) -> Tuple[bool, Optional[Tuple[str, ...]]]:
    """Decide whether states ``x`` and ``y`` have the same behaviour under the
    given probabilistic semantics; on failure, return a distinguishing word.

    Explores the words breadth-first, carrying the exact difference vector of
    the two determinised runs, and prunes any vector already in the linear
    span of those seen: at most ``n_states`` vectors are ever inserted into
    the basis, so the search terminates."""
    dec = gps_decorate(g, semantics)
    v0 = Distribution.point(x).sub(Distribution.point(y))
    queue: List[Tuple[Distribution, Tuple[str, ...]]] = [(v0, ())]
    # Row-echelon basis: pivot state -> vector normalised to 1 at the pivot.
    basis: Dict[int, Dict[int, Fraction]] = {}
    qi = 0
    while qi < len(queue):
        vec, word = queue[qi]
        qi += 1
        w = vec.as_dict()
        for pivot, b in basis.items():
            c = w.get(pivot, Fraction(0))
            if c != 0:
                for s, p in b.items():
                    w[s] = w.get(s, Fraction(0)) - c * p
        w = {s: p for s, p in w.items() if p != 0}
        if not w:
            continue
        if not _is_zero_output(gps_det_output(dec, vec)):
            return False, word
        pivot = min(w)
        scale = w[pivot]
        basis[pivot] = {s: p / scale for s, p in w.items()}
        for a in g.alphabet:
            queue.append((gps_det_step(g, vec, a), word + (a,)))
    return True, None


# ---------------------------------------------------------------------------
# Collapses along the probabilistic spectrum
# ---------------------------------------------------------------------------

def ready_to_trace_collapse(v: Output) -> Output:
    """Total mass of a probabilistic ready family is the trace output."""
    if v.kind != "prob_family":
        raise VariantMismatch("expected a prob_family output")
    return Output("prob", sum((p for _, p in v.value), Fraction(0)))


def failure_from_ready(v: Output, alphabet: Tuple[str, ...]) -> Output:
    """Failure weights induced by ready weights: each refusal set collects the
    mass of every enabled set disjoint from it."""
    if v.kind != "prob_family":
        raise VariantMismatch("expected a prob_family output")
    full = full_mask(alphabet)
    fam = []
    for z in range(full + 1):
        w = sum((p for mask, p in v.value if mask & z == 0), Fraction(0))
        if w != 0:
            fam.append((z, w))
    return Output("prob_family", tuple(fam))


def mfailure_from_ready(v: Output, alphabet: Tuple[str, ...]) -> Output:
    """Maximal-failure weights: each refusal set takes exactly the mass of its
    complementary enabled set."""
    if v.kind != "prob_family":
        raise VariantMismatch("expected a prob_family output")
    full = full_mask(alphabet)
    acc: Dict[int, Fraction] = {}
    for mask, p in v.value:
        z = full & ~mask
        acc[z] = acc.get(z, Fraction(0)) + p
    return Output("prob_family", tuple(sorted((z, p) for z, p in acc.items() if p != 0)))
