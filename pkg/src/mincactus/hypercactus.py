"""Steiner hypercacti of hypergraphs.

The divide-and-conquer driver is shared with graphs (see :mod:`.steiner`).
What changes for hypergraphs:

* maximal isolating mincuts keep only the part of each maximal side that is
  connected once the terminal is contracted, so splits never cut a
  higher-rank hyperedge of the answer non-trivially;
* a part without splits is either a star or a brittle (one hyperedge on all
  terminals), told apart by one flow;
* anchors may sit on hyperedges, which adds leaf/hyperedge, cycle/hyperedge
  and hyperedge/hyperedge gluing.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Sequence

from .cactus import HYPER, Cactus
from .graph import Hypergraph, as_graph, as_hypergraph
from .steiner import (
    BuildTrace,
    CactusConfig,
    Decomposition,
    SplitCollection,
    build_cactus,
    good_split_collection,
    merge_cactus,
    star_or_brittle_cactus,
)

__all__ = [
    "build_hypercactus",
    "check_never_splits_hyperedge",
    "compute_steiner_hypercactus",
    "good_split_collection_hyper",
    "merge_hypercactus",
    "star_or_brittle_cactus",
]


def build_hypercactus(h: Hypergraph, T: Iterable[int] | None = None, config: CactusConfig = CactusConfig()) -> tuple[Cactus, BuildTrace]:
    return build_cactus(as_hypergraph(h), T, config)


def compute_steiner_hypercactus(h: Hypergraph, T: Iterable[int] | None = None, config: CactusConfig = CactusConfig()) -> Cactus:
    """T-Steiner hypercactus of a connected hypergraph (T defaults to V).

    A bipartition of T is a λ-valued Steiner mincut of ``h`` exactly when
    the returned structure separates it.
    """
    return build_cactus(as_hypergraph(h), T, config)[0]


def good_split_collection_hyper(
    h: Hypergraph,
    T: Iterable[int],
    lam: int,
    config: CactusConfig = CactusConfig(),
    path: tuple[int, ...] = (),
) -> SplitCollection:
    return good_split_collection(as_hypergraph(h), T, lam, config, path)


def merge_hypercactus(
    h: Hypergraph,
    T: Iterable[int],
    decomposition: Decomposition,
    subs: Sequence[Cactus],
    lam: int | None = None,
) -> Cactus:
    return merge_cactus(h, T, decomposition, subs, lam)


def graph_pipeline_cactus(h: Hypergraph, T: Iterable[int] | None = None, config: CactusConfig = CactusConfig()) -> Cactus:
    """Run the graph pipeline on a hypergraph whose edges all have rank 2."""
    return build_cactus(as_graph(h), T, config)[0]


def check_never_splits_hyperedge(splits: BuildTrace | Iterable[Iterable[Hashable]], truth: Cactus) -> bool:
    """Every split meets each rank-≥3 hyperedge of ``truth`` in 0, 1, r−1 or r members.

    A split is a set of terminal labels.  A member counts as inside when all
    terminals hanging off it are in the split and outside when none are;
    members carrying no terminal may go either way, and a member whose
    terminals straddle the split means the split does not cross the
    hyperedge at all.
    """
    if isinstance(splits, BuildTrace):
        splits = splits.splits
    bt = truth._tree
    hyper_blocks = [b for b, (kind, _) in enumerate(bt.blocks) if kind == HYPER]
    for split in splits:
        a = 0
        for t in split:
            a |= 1 << bt.tindex[t]
        for b in hyper_blocks:
            inside = outside = 0
            mixed = False
            for _, tm in bt.hangs(b):
                if tm == 0:
                    continue
                if tm & a == tm:
                    inside += 1
                elif tm & a == 0:
                    outside += 1
                else:
                    mixed = True
                    break
            if not mixed and inside >= 2 and outside >= 2:
                return False
    return True
