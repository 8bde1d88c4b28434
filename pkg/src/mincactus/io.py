"""Text instance format.

::

    c comment
    p graph 4 4          (or: p hgraph <n> <m>)
    e 0 1 1              edge u v w
    h 3 0 1 2 1          hyperedge k v1 .. vk w   (hgraph only)
    t 0                  terminal (none given: every vertex)

Vertex ids are 0-based, ``m`` counts ``e`` and ``h`` lines, weights are ≥ 1.
Errors carry the offending line number.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import InstanceParseError
from .graph import Hypergraph, build_graph, build_hypergraph

KINDS = ("graph", "hgraph")


@dataclass
class Instance:
    kind: str
    n: int
    edges: list[tuple[tuple[int, ...], int]] = field(default_factory=list)
    terminals: list[int] | None = None
    comments: list[str] = field(default_factory=list)

    @property
    def m(self) -> int:
        return len(self.edges)

    def graph(self) -> Hypergraph:
        if self.kind == "graph":
            return build_graph(self.n, ((u, v, w) for (u, v), w in self.edges))
        return build_hypergraph(self.n, self.edges)


def _int(tok: str, line: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InstanceParseError(line, f"{what} {tok!r} is not an integer") from None


def parse_instance(text: str) -> Instance:
    inst: Instance | None = None
    declared_m = 0
    terminals: list[int] = []
    seen_t: set[int] = set()
    comments: list[str] = []
    last = 0
    for no, raw in enumerate(text.splitlines(), start=1):
        last = no
        line = raw.strip()
        if not line:
            continue
        tag, *rest = line.split()
        if tag == "c":
            comments.append(line[1:].strip())
            continue
        if tag == "p":
            if inst is not None:
                raise InstanceParseError(no, "duplicate problem line")
            if len(rest) != 3 or rest[0] not in KINDS:
                raise InstanceParseError(no, "expected 'p graph|hgraph <n> <m>'")
            n = _int(rest[1], no, "vertex count")
            declared_m = _int(rest[2], no, "edge count")
            if n < 1 or declared_m < 0:
                raise InstanceParseError(no, "vertex count must be ≥ 1 and edge count ≥ 0")
            inst = Instance(rest[0], n)
            continue
        if inst is None:
            raise InstanceParseError(no, f"'{tag}' line before the problem line")
        nums = [_int(tok, no, "field") for tok in rest]
        if tag == "e":
            if len(nums) != 3:
                raise InstanceParseError(no, "expected 'e <u> <v> <w>'")
            members, w = tuple(nums[:2]), nums[2]
        elif tag == "h":
            if inst.kind != "hgraph":
                raise InstanceParseError(no, "hyperedge line in a graph instance")
            if not nums or nums[0] < 2 or len(nums) != nums[0] + 2:
                raise InstanceParseError(no, "expected 'h <k> <v1> .. <vk> <w>' with k ≥ 2")
            members, w = tuple(nums[1:-1]), nums[-1]
        elif tag == "t":
            if len(nums) != 1:
                raise InstanceParseError(no, "expected 't <v>'")
            v = nums[0]
            if not 0 <= v < inst.n:
                raise InstanceParseError(no, f"terminal {v} out of range [0, {inst.n})")
            if v in seen_t:
                raise InstanceParseError(no, f"duplicate terminal {v}")
            seen_t.add(v)
            terminals.append(v)
            continue
        else:
            raise InstanceParseError(no, f"unknown line type {tag!r}")
        for v in members:
            if not 0 <= v < inst.n:
                raise InstanceParseError(no, f"vertex {v} out of range [0, {inst.n})")
        if len(set(members)) != len(members):
            raise InstanceParseError(no, "repeated vertex in edge")
        if w < 1:
            raise InstanceParseError(no, f"weight {w} must be ≥ 1")
        inst.edges.append((members, w))
    if inst is None:
        raise InstanceParseError(last, "missing problem line")
    if inst.m != declared_m:
        raise InstanceParseError(last, f"problem line declares {declared_m} edges, found {inst.m}")
    inst.terminals = terminals or None
    inst.comments = comments
    return inst


def read_instance(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text())


def serialize_instance(inst: Instance) -> str:
    lines = [f"c {c}".rstrip() for c in inst.comments]
    lines.append(f"p {inst.kind} {inst.n} {inst.m}")
    for members, w in inst.edges:
        if len(members) == 2:
            lines.append(f"e {members[0]} {members[1]} {w}")
        else:
            lines.append(f"h {len(members)} {' '.join(map(str, members))} {w}")
    for t in inst.terminals or ():
        lines.append(f"t {t}")
    return "\n".join(lines) + "\n"


def parse_trace(text: str) -> list[tuple[int, ...]]:
    """Insertion trace: one hyperedge per line as vertex ids; ``c`` lines skipped."""
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.split()[0] == "c":
            continue
        members = tuple(_int(tok, no, "vertex") for tok in line.split())
        if not members:
            raise InstanceParseError(no, "empty hyperedge")
        out.append(members)
    return out
