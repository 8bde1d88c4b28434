"""Isolating mincuts, Steiner mincut values and the connectivity partition.

A t-isolating mincut separates terminal t from every other terminal at
minimum cost.  Two extreme solutions are unique: the inclusion-minimal one
(found with the bit-signature isolating cut procedure) and the
inclusion-maximal one (found with a pivoted divide-and-conquer that contracts
the complement of each half's maximal mincut).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import TooFewTerminals, VertexOutOfRange
from .graph import Cut, Hypergraph, is_hypergraph, quotient
from .maxflow import max_flow, maximal_cut, minimal_source_side


@dataclass(frozen=True)
class IsolatingCutSet:
    """Per-terminal isolating cuts over terminal set ``terminals``."""

    terminals: tuple[int, ...]
    cuts: Mapping[int, Cut]

    @property
    def values(self) -> dict[int, int]:
        return {t: c.value for t, c in self.cuts.items()}

    def total_size(self) -> int:
        return sum(len(c.side) for c in self.cuts.values())

    def __getitem__(self, t: int) -> Cut:
        return self.cuts[t]


@dataclass(frozen=True)
class Subproblem:
    """A contracted copy of the input with its terminals.

    ``pivot`` is the single contracted vertex of an isolating-cut subproblem
    (or the anchor of a cactus subproblem); it is always one of the terminals.
    """

    graph: Hypergraph
    terminals: tuple[int, ...]
    pivot: int | None = None
    origin: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.pivot is not None and self.pivot not in self.terminals:
            raise ValueError("pivot must be a terminal")


def _terminals(g: Hypergraph, T: Iterable[int] | None) -> tuple[int, ...]:
    if T is None:
        return tuple(range(g.n))
    out = tuple(sorted(set(T)))
    for t in out:
        if not 0 <= t < g.n:
            raise VertexOutOfRange(f"terminal {t} not in [0, {g.n})")
    if len(out) < 2:
        raise TooFewTerminals("at least two terminals required")
    return out


def minimal_isolating_mincuts(g: Hypergraph, T: Iterable[int] | None = None) -> IsolatingCutSet:
    """Minimal t-isolating mincuts for every terminal.

    ⌈log2 |T|⌉ flows split the terminals by each bit of their index; the
    vertices sharing t's side in all of them form a region U_t that contains
    the minimal t-isolating mincut, and one flow per terminal inside its
    region finishes the job.  Regions are disjoint, so are the results.
    """
    T = _terminals(g, T)
    k = len(T)
    signature = [0] * g.n
    for b in range(max(1, math.ceil(math.log2(k)))):
        A = [t for i, t in enumerate(T) if not (i >> b) & 1]
        B = [t for i, t in enumerate(T) if (i >> b) & 1]
        if not A or not B:
            continue
        side = max_flow(g, A, B).min_side
        bit = 1 << b
        for v in range(g.n):
            if v not in side:
                signature[v] |= bit
    cuts = {}
    for i, t in enumerate(T):
        sig = signature[t]
        outside = [v for v in range(g.n) if signature[v] != sig]
        cuts[t] = minimal_source_side(max_flow(g, [t], outside))
    return IsolatingCutSet(T, cuts)


def _maximal_recursive(
    g: Hypergraph,
    T: list[int],
    pivot: int | None,
    origin: list[int],
    out: dict[int, Cut],
) -> None:
    """Pivoted recursion; ``origin`` maps local vertices to input vertices."""
    free = sorted((t for t in T if t != pivot), key=lambda v: origin[v])
    if len(T) <= 4:
        for v in free:
            cut = maximal_cut(g, [v], [u for u in T if u != v])
            out[origin[v]] = Cut(frozenset(origin[x] for x in cut.side), cut.value)
        return
    half = len(free) // 2
    for part in (free[:half], free[half:]):
        part_set = set(part)
        X = maximal_cut(g, part, [u for u in T if u not in part_set]).side
        keep = sorted(X)
        part_of = [len(keep)] * g.n
        for i, v in enumerate(keep):
            part_of[v] = i
        labels = [g.labels[v] for v in keep] + [None]
        sub = quotient(g, part_of, len(keep) + 1, labels)
        new_pivot = len(keep)
        sub_T = [part_of[v] for v in part] + [new_pivot]
        sub_origin = [origin[v] for v in keep] + [-1]
        _maximal_recursive(sub, sub_T, new_pivot, sub_origin, out)


def maximal_isolating_mincuts(g: Hypergraph, T: Iterable[int] | None = None) -> IsolatingCutSet:
    """Maximal t-isolating mincuts for every terminal via pivoted recursion.

    Each level splits the non-pivot terminals into two halves A and B by id,
    computes the maximal A-mincut and B-mincut against all other terminals
    (the pivot included), contracts each complement into a fresh pivot and
    recurses.  Sets of at most four terminals are solved with one flow per
    terminal.  On hypergraphs every maximal side is connectivity-normalized.
    """
    T = _terminals(g, T)
    out: dict[int, Cut] = {}
    _maximal_recursive(g, list(T), None, list(range(g.n)), out)
    return IsolatingCutSet(T, {t: out[t] for t in T})


def maximal_isolating_mincuts_hyper(h: Hypergraph, T: Iterable[int] | None = None) -> IsolatingCutSet:
    """Hypergraph form; identical recursion with connected-side extraction."""
    if not is_hypergraph(h):
        raise TypeError("expected a WeightedHypergraph")
    return maximal_isolating_mincuts(h, T)


def sampling_rounds(n: int, reps: float) -> int:
    """R = ⌈c · ln n⌉ repetitions (at least one)."""
    return max(1, math.ceil(reps * math.log(max(n, 2))))


def sample_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent stream for one sampling round, keyed by its position."""
    return np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, *key])


def _samples(T: Sequence[int], seed: int, reps: float, n: int, rates: range, key: tuple):
    """Yield terminal subsamples of size ≥ 2, one per (round, rate)."""
    arr = np.asarray(T)
    for r in range(sampling_rounds(n, reps)):
        for i in rates:
            rng = sample_rng(seed, *key, r, i)
            pick = arr[rng.random(len(T)) < 2.0 ** -i]
            if len(pick) >= 2:
                yield tuple(pick.tolist())


def steiner_mincut_value(
    g: Hypergraph,
    T: Iterable[int] | None = None,
    mode: str = "exact",
    seed: int = 0,
    reps: float = 48.0,
) -> int:
    """λ(T): the minimum cut value separating any two terminals.

    ``exact`` runs |T|−1 flows from the smallest terminal.  ``sampled`` takes
    the minimum over minimal isolating cuts of random terminal subsamples; it
    never underestimates and is correct with high probability.
    """
    T = _terminals(g, T)
    if mode == "exact":
        t0 = T[0]
        return min(max_flow(g, [t0], [t]).value for t in T[1:])
    if mode != "sampled":
        raise ValueError("mode must be 'exact' or 'sampled'")
    best = None
    rates = range(0, math.ceil(math.log2(len(T))) + 1)
    for sample in _samples(T, seed, reps, g.n, rates, (0,)):
        for cut in minimal_isolating_mincuts(g, sample).cuts.values():
            if best is None or cut.value < best:
                best = cut.value
    return best


def _refine(classes: list[list[int]], side: frozenset[int]) -> list[list[int]]:
    out = []
    for c in classes:
        a = [t for t in c if t in side]
        b = [t for t in c if t not in side]
        out.extend(x for x in (a, b) if x)
    return out


def connectivity_partition(
    g: Hypergraph,
    T: Iterable[int] | None,
    lam: int,
    seed: int = 0,
    reps: float = 48.0,
) -> list[list[int]]:
    """Partition T so that u, v are split iff λ(u, v) = λ.

    Candidate λ-cuts come from minimal isolating mincuts of sampled terminal
    subsets.  The resulting classes are then certified: within each class,
    a flow from its smallest member to every other member must exceed λ.  A
    flow that hits λ instead yields a separating λ-cut and the class is
    refined.  Because λ(u, w) ≥ min(λ(u, v), λ(v, w)), certifying against one
    representative suffices.  Parts are sorted lists ordered by first member.
    """
    T = _terminals(g, T)
    classes = [list(T)]
    rates = range(0, math.ceil(math.log2(len(T))) + 1)
    for sample in _samples(T, seed, reps, g.n, rates, (1,)):
        for cut in minimal_isolating_mincuts(g, sample).cuts.values():
            if cut.value == lam:
                classes = _refine(classes, cut.side)
    certified: list[list[int]] = []
    pending = classes
    while pending:
        c = pending.pop()
        r = c[0]
        for u in c[1:]:
            fr = max_flow(g, [r], [u])
            if fr.value == lam:
                pending.extend(_refine([c], fr.min_side))
                break
        else:
            certified.append(c)
    return sorted((sorted(c) for c in certified), key=lambda c: c[0])


def terminal_labels(g: Hypergraph, T: Iterable[int]) -> list[Hashable]:
    return [g.labels[t] for t in T]
