"""Exact arithmetic for the two-convention coordination game.

Everything here is computed with `fractions.Fraction` so that ceiling
thresholds and potential ties are decided exactly; floating point never
enters the core math.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence, Union

X = "x"
Y = "y"
ACTIONS = (X, Y)

Rational = Union[Fraction, int, str]


class DomainError(ValueError):
    """Input lies outside the model's domain."""


class ResourceLimitError(RuntimeError):
    """Instance exceeds a documented exhaustive-search ceiling."""


def _fraction(value: Rational) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class GameParams:
    """Payoff gain `alpha` and personal cost `p`, with 0 < p < alpha <= 1."""

    alpha: Fraction
    p: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", _fraction(self.alpha))
        object.__setattr__(self, "p", _fraction(self.p))
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if not 0 < self.p < self.alpha:
            raise ValueError(f"p must be in (0, alpha), got p={self.p} alpha={self.alpha}")


@dataclass(frozen=True)
class Component:
    """A connected piece of the interaction graph, reduced to (edges, nodes).

    A lone node is (0, 1); an edged component must be realizable as a
    connected simple graph: nodes-1 <= edges <= nodes*(nodes-1)/2.
    """

    edges: int
    nodes: int

    def __post_init__(self) -> None:
        if self.edges < 0 or self.nodes < 1:
            raise ValueError(f"invalid component ({self.edges}, {self.nodes})")
        if self.edges == 0:
            if self.nodes != 1:
                raise ValueError(f"edgeless component must be a lone node, got {self.nodes} nodes")
        elif not self.nodes - 1 <= self.edges <= self.nodes * (self.nodes - 1) // 2:
            raise ValueError(
                f"({self.edges}, {self.nodes}) is not a connected simple graph"
            )

    @property
    def is_lone(self) -> bool:
        return self.edges == 0


LONE = Component(0, 1)


def pairwise_payoff(a_i: str, a_j: str, params: GameParams) -> Fraction:
    """Payoff one endpoint of an edge receives: (x,x) -> 1+alpha, (y,y) -> 1, else 0."""
    if a_i not in ACTIONS or a_j not in ACTIONS:
        raise DomainError(f"actions must be in {ACTIONS}")
    if a_i != a_j:
        return Fraction(0)
    return 1 + params.alpha if a_i == X else Fraction(1)


@dataclass(frozen=True)
class Graph:
    """Concrete node-level graph on nodes 0..n-1 with an undirected edge list."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("graph needs at least one node")
        canon = []
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self-loop at node {a}")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"edge ({a}, {b}) out of range")
            canon.append((a, b) if a < b else (b, a))
        canon.sort()
        if len(set(canon)) != len(canon):
            raise ValueError("duplicate edge")
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(ns)) for ns in adj)


def connected_components(graph: Graph) -> tuple[tuple[int, ...], ...]:
    """Connected components as sorted node tuples, ordered by smallest node."""
    seen = [False] * graph.n
    out = []
    for start in range(graph.n):
        if seen[start]:
            continue
        stack, nodes = [start], []
        seen[start] = True
        while stack:
            v = stack.pop()
            nodes.append(v)
            for w in graph.neighbors[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        out.append(tuple(sorted(nodes)))
    return tuple(out)


def _check_profile(profile: Sequence[str], graph: Graph) -> None:
    if len(profile) != graph.n:
        raise DomainError(f"profile length {len(profile)} != {graph.n} nodes")


def agent_utility(agent: int, profile: Sequence[str], graph: Graph, params: GameParams) -> Fraction:
    """Sum of edge payoffs with neighbors, minus p if the agent plays y."""
    if not 0 <= agent < graph.n:
        raise DomainError(f"unknown agent {agent}")
    _check_profile(profile, graph)
    total = sum(
        (pairwise_payoff(profile[agent], profile[j], params) for j in graph.neighbors[agent]),
        Fraction(0),
    )
    if profile[agent] == Y:
        total -= params.p
    return total


def perturbed_utility(
    agent: int,
    profile: Sequence[str],
    attacks_on_agent: int,
    graph: Graph,
    params: GameParams,
) -> Fraction:
    """Utility including +1 per attached impostor while the agent plays y."""
    if attacks_on_agent < 0:
        raise DomainError("attack count must be non-negative")
    base = agent_utility(agent, profile, graph, params)
    return base + attacks_on_agent if profile[agent] == Y else base


def system_welfare(profile: Sequence[str], graph: Graph, params: GameParams) -> Fraction:
    """Sum of nominal utilities; impostor bonuses never count toward welfare."""
    _check_profile(profile, graph)
    return sum(
        (agent_utility(i, profile, graph, params) for i in range(graph.n)), Fraction(0)
    )


def global_potential(
    profile: Sequence[str],
    node_attacks: Sequence[int],
    graph: Graph,
    params: GameParams,
) -> Fraction:
    """Exact potential: (1+alpha)|E_x| + |E_y| - p*N_y + N_Ky.

    N_Ky counts every impostor attached to a y-playing agent, so multiple
    attacks on one agent each contribute.
    """
    _check_profile(profile, graph)
    if len(node_attacks) != graph.n:
        raise DomainError("node_attacks must give a count per node")
    e_x = e_y = 0
    for a, b in graph.edges:
        if profile[a] == profile[b]:
            if profile[a] == X:
                e_x += 1
            else:
                e_y += 1
    n_y = sum(1 for a in profile if a == Y)
    n_ky = sum(k for k, a in zip(node_attacks, profile) if a == Y)
    return (1 + params.alpha) * e_x + e_y - params.p * n_y + n_ky


def component_potential(c: Component, label: str, attack_count: int, params: GameParams) -> Fraction:
    """Potential of a uniformly-labeled component holding `attack_count` impostors."""
    if label not in ACTIONS:
        raise DomainError(f"label must be in {ACTIONS}")
    if attack_count < 0:
        raise DomainError("attack count must be non-negative")
    if label == X:
        return c.edges * (1 + params.alpha)
    return c.edges - c.nodes * params.p + attack_count


@lru_cache(maxsize=None)
def k_star(c: Component, params: GameParams) -> int:
    """Minimum attack count making the all-y labeling weakly potential-optimal.

    Equals ceil(edges*alpha + nodes*p); the tie at equality goes to y.
    """
    return math.ceil(c.edges * params.alpha + c.nodes * params.p)


@lru_cache(maxsize=None)
def delta_welfare(c: Component, params: GameParams) -> Fraction:
    """Welfare lost when a component switches from all-x to all-y: 2*edges*alpha + nodes*p."""
    return 2 * c.edges * params.alpha + c.nodes * params.p
