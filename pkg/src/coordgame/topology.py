"""Graphs abstracted to component profiles, plus canonical constructors and enumeration.

A profile is the multiset of (edges, nodes) pairs of edged components plus a
lone-node count. The node budget is hard-wired to n = 2m, so the lone count
is always derived, never stored.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .core import Component, ResourceLimitError

SPARSE = "SPARSE"
LINE = "LINE"
COMPLETE = "COMPLETE"
CANONICAL_KINDS = (SPARSE, LINE, COMPLETE)

# Enumeration is exhaustive over integer partitions with node choices; above
# this many edges the profile count (and downstream exact search) blows up.
MAX_ENUMERATION_EDGES = 10

_PROFILE_RE = re.compile(r"^(\d+)lone$")


@dataclass(frozen=True)
class GraphTopology:
    """A component profile: sorted edged components, lone nodes filling to 2m."""

    edged: tuple[Component, ...]

    def __post_init__(self) -> None:
        comps = tuple(sorted(self.edged, key=lambda c: (c.edges, c.nodes)))
        if not comps:
            raise ValueError("a profile needs at least one edged component")
        if any(c.is_lone for c in comps):
            raise ValueError("lone nodes are implied, not listed")
        object.__setattr__(self, "edged", comps)
        if self.lone_count < 0:
            raise ValueError("component nodes exceed the 2m node budget")

    @property
    def m(self) -> int:
        return sum(c.edges for c in self.edged)

    @property
    def n(self) -> int:
        return 2 * self.m

    @property
    def lone_count(self) -> int:
        return self.n - sum(c.nodes for c in self.edged)

    def all_components(self) -> Iterator[Component]:
        """Every component including one entry per lone node."""
        yield from self.edged
        for _ in range(self.lone_count):
            yield Component(0, 1)

    @classmethod
    def from_components(cls, pairs: Iterable[tuple[int, int]]) -> "GraphTopology":
        return cls(tuple(Component(m_c, n_c) for m_c, n_c in pairs))


def min_complete_nodes(m: int) -> int:
    """Smallest d with d*(d-1)/2 >= m."""
    if m < 1:
        raise ValueError(f"edge count must be >= 1, got {m}")
    d = max(2, math.isqrt(2 * m))
    while d * (d - 1) // 2 < m:
        d += 1
    return d


def is_feasible_component(m_c: int, n_c: int) -> bool:
    """Whether (m_c, n_c) is a lone node or a connected simple graph."""
    if m_c < 0 or n_c < 1:
        return False
    if m_c == 0:
        return n_c == 1
    return n_c - 1 <= m_c <= n_c * (n_c - 1) // 2


def canonical_graph(kind: str, m: int) -> GraphTopology:
    """One of the three named designs on m edges and 2m nodes."""
    if m < 1:
        raise ValueError(f"edge count must be >= 1, got {m}")
    if kind == SPARSE:
        return GraphTopology.from_components([(1, 2)] * m)
    if kind == LINE:
        return GraphTopology.from_components([(m, m + 1)])
    if kind == COMPLETE:
        return GraphTopology.from_components([(m, min_complete_nodes(m))])
    raise ValueError(f"unknown canonical kind {kind!r}; expected one of {CANONICAL_KINDS}")


def _component_choices(m_c: int) -> list[tuple[int, int]]:
    return [(m_c, n_c) for n_c in range(min_complete_nodes(m_c), m_c + 2)]


@lru_cache(maxsize=None)
def all_profiles(m: int) -> tuple[GraphTopology, ...]:
    """Every distinct profile on m edges, in lexicographic component order."""
    if m < 1:
        raise ValueError(f"edge count must be >= 1, got {m}")
    if m > MAX_ENUMERATION_EDGES:
        raise ResourceLimitError(
            f"profile enumeration is capped at m <= {MAX_ENUMERATION_EDGES}, got {m}"
        )

    def rec(remaining: int, floor: tuple[int, int]) -> Iterator[tuple[tuple[int, int], ...]]:
        if remaining == 0:
            yield ()
            return
        for m_c in range(max(1, floor[0]), remaining + 1):
            for pair in _component_choices(m_c):
                if pair < floor:
                    continue
                for rest in rec(remaining - m_c, pair):
                    yield (pair,) + rest

    return tuple(GraphTopology.from_components(combo) for combo in rec(m, (1, 2)))


def enumerate_profiles(m: int) -> Iterator[GraphTopology]:
    """Stream of all distinct profiles on m edges (see `all_profiles`)."""
    yield from all_profiles(m)


def format_profile(g: GraphTopology) -> str:
    """Text form `m:n,m:n,...+Llone`, omitting the suffix when L is zero."""
    body = ",".join(f"{c.edges}:{c.nodes}" for c in g.edged)
    return f"{body}+{g.lone_count}lone" if g.lone_count else body


def parse_profile(text: str) -> GraphTopology:
    """Inverse of `format_profile`; the lone count, when given, must match n=2m."""
    text = text.strip()
    if not text:
        raise ValueError("empty profile string")
    parts = text.split("+")
    if len(parts) > 2:
        raise ValueError(f"malformed profile {text!r}")
    declared_lone = None
    if len(parts) == 2:
        match = _PROFILE_RE.match(parts[1].strip())
        if not match:
            raise ValueError(f"malformed lone suffix in {text!r}")
        declared_lone = int(match.group(1))
    pairs = []
    for item in parts[0].split(","):
        bits = item.strip().split(":")
        if len(bits) != 2:
            raise ValueError(f"malformed component {item!r}")
        pairs.append((int(bits[0]), int(bits[1])))
    profile = GraphTopology.from_components(pairs)
    if declared_lone is not None and declared_lone != profile.lone_count:
        raise ValueError(
            f"profile {text!r} declares {declared_lone} lone nodes, "
            f"but n=2m implies {profile.lone_count}"
        )
    return profile
