"""Brute-force ground truth for desk-scale instances."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Mapping

import numpy as np

from .cactus import Cactus, represented_bipartitions
from .errors import TooManyTerminals
from .graph import Hypergraph
from .isolating import IsolatingCutSet, _terminals
from .maxflow import maximal_cut, max_flow

MAX_TABLE_TERMINALS = 20


@dataclass(frozen=True)
class BipartitionTable:
    """Mincut value of every terminal bipartition.

    Keys are terminal-label sets: the side that omits the smallest terminal.
    """

    terminals: tuple[Hashable, ...]
    values: Mapping[frozenset, int]

    @property
    def lam(self) -> int:
        return min(self.values.values())

    def tight(self) -> set[frozenset]:
        lam = self.lam
        return {A for A, v in self.values.items() if v == lam}

    def __len__(self) -> int:
        return len(self.values)


def _all_cut_values(h: Hypergraph) -> np.ndarray:
    """C(S) for every vertex set S given as a bitmask over all n vertices."""
    n = h.n
    masks = np.arange(1 << n, dtype=np.int64)
    values = np.zeros(1 << n, dtype=np.int64)
    for members, w in h.edges:
        em = 0
        for v in members:
            em |= 1 << v
        inter = masks & em
        values += np.where((inter != 0) & (inter != em), w, 0)
    return values


def brute_bipartition_table(g: Hypergraph, T: Iterable[int] | None = None) -> BipartitionTable:
    """Exact value of every terminal bipartition, one flow each.

    When every vertex is a terminal the cut of a bipartition is fixed, so all
    values are read off a vectorized enumeration of vertex subsets instead.
    """
    T = _terminals(g, T)
    if len(T) > MAX_TABLE_TERMINALS:
        raise TooManyTerminals(f"|T| = {len(T)} exceeds {MAX_TABLE_TERMINALS}")
    labels = g.labels
    rest = T[1:]
    values: dict[frozenset, int] = {}
    if len(T) == g.n:
        all_values = _all_cut_values(g)
        for mask in range(1, 1 << len(rest)):
            full = 0
            for i, v in enumerate(rest):
                if mask >> i & 1:
                    full |= 1 << v
            side = frozenset(labels[v] for i, v in enumerate(rest) if mask >> i & 1)
            values[side] = int(all_values[full])
    else:
        for mask in range(1, 1 << len(rest)):
            A = [v for i, v in enumerate(rest) if mask >> i & 1]
            inside = set(A)
            B = [t for t in T if t not in inside]
            values[frozenset(labels[v] for v in A)] = max_flow(g, A, B).value
    return BipartitionTable(tuple(labels[t] for t in T), values)


def direct_maximal_isolating(g: Hypergraph, T: Iterable[int] | None = None) -> IsolatingCutSet:
    """One flow per terminal, maximal side (connected-side on hypergraphs)."""
    T = _terminals(g, T)
    cuts = {t: maximal_cut(g, [t], [u for u in T if u != t]) for t in T}
    return IsolatingCutSet(T, cuts)


@dataclass
class EquivalenceReport:
    """Outcome of comparing a cactus against a bipartition table."""

    checked: int
    lam_table: int
    lam_cactus: int
    missing: list[frozenset] = field(default_factory=list)
    spurious: list[frozenset] = field(default_factory=list)
    unmapped: list[Hashable] = field(default_factory=list)

    @property
    def violations(self) -> int:
        return len(self.missing) + len(self.spurious) + len(self.unmapped) + (self.lam_table != self.lam_cactus)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def summary(self) -> str:
        return f"{self.violations} violations / {self.checked} bipartitions"


def check_equivalence(c: Cactus, table: BipartitionTable) -> EquivalenceReport:
    """Compare (value == λ) with "separated by a cactus mincut", per bipartition.

    ``missing`` lists tight bipartitions the cactus fails to separate;
    ``spurious`` lists separated bipartitions that are not tight.
    """
    report = EquivalenceReport(len(table), table.lam, c.lam)
    report.unmapped = [t for t in table.terminals if t not in c.phi]
    if report.unmapped:
        return report
    t0 = table.terminals[0]
    rep = set()
    terms = frozenset(table.terminals)
    for side in represented_bipartitions(c):
        side = frozenset(side)
        rep.add(terms - side if t0 in side else side)
    tight = table.tight()
    report.missing = sorted((A for A in tight if A not in rep), key=sorted)
    report.spurious = sorted((A for A in rep if A not in tight), key=sorted)
    return report


def brute_min_cuts(g: Hypergraph, A: Iterable[int], B: Iterable[int], connected: bool = False) -> tuple[int, list[frozenset]]:
    """All minimum A-vs-B cut sides by exhaustive enumeration (tiny n only).

    With ``connected`` only sides X whose A-contracted induced subhypergraph
    is connected are considered.
    """
    from .graph import component_containing, cut_value

    A = frozenset(A)
    B = frozenset(B)
    free = [v for v in range(g.n) if v not in A and v not in B]
    best = None
    sides: list[frozenset] = []
    for r in range(len(free) + 1):
        for extra in combinations(free, r):
            X = A | frozenset(extra)
            if connected:
                inside = [v in X for v in range(g.n)]
                if component_containing(g, A, inside) != X:
                    continue
            val = cut_value(g, X)
            if best is None or val < best:
                best, sides = val, [X]
            elif val == best:
                sides.append(X)
    return best, sides
