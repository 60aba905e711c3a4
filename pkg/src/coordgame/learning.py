"""Monte Carlo validation of emergent states via asynchronous log-linear learning.

One uniformly chosen agent revises per step with a Boltzmann choice over its
own two actions, using the impostor-perturbed utilities. The stationary
distribution of this chain is the Gibbs measure over the exact potential, so
the analytically labeled emergent state should dominate the visit counts at
low temperature.

Randomness comes from `random.Random` (Mersenne Twister), which is seedable
and stable across platforms; identical (seed, config) reruns produce
bit-identical trajectories.

Chains start at the analytic emergent state unless told otherwise: at the low
temperatures these checks run at, crossing a potential barrier takes
exp(barrier/temperature) steps, so the meaningful desk-scale test is that the
claimed state absorbs the chain rather than leaks away; equilibrium itself is
validated separately against the Gibbs measure at moderate temperature.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import (
    X,
    Y,
    DomainError,
    GameParams,
    Graph,
    ResourceLimitError,
    connected_components,
    global_potential,
    k_star,
    Component,
)
from .adversary import AttackAllocation
from .topology import GraphTopology

MAX_SIMULATION_AGENTS = 20
MAX_EXACT_STATE_AGENTS = 16
MAX_STABILITY_AGENTS = 8


def realize_profile(profile: GraphTopology) -> Graph:
    """Deterministic concrete graph for a profile: each component is a path
    plus extra edges in lexicographic pair order; lone nodes come last."""
    edges: list[tuple[int, int]] = []
    offset = 0
    for comp in profile.edged:
        nodes = list(range(offset, offset + comp.nodes))
        comp_edges = [(nodes[i], nodes[i + 1]) for i in range(comp.nodes - 1)]
        need = comp.edges - len(comp_edges)
        if need:
            present = set(comp_edges)
            for i in range(comp.nodes):
                for j in range(i + 1, comp.nodes):
                    if need == 0:
                        break
                    e = (nodes[i], nodes[j])
                    if e not in present:
                        present.add(e)
                        comp_edges.append(e)
                        need -= 1
                if need == 0:
                    break
        edges.extend(comp_edges)
        offset += comp.nodes
    return Graph(profile.n, tuple(edges))


def attach_attacks(profile: GraphTopology, allocation: AttackAllocation) -> tuple[int, ...]:
    """Per-node impostor counts on `realize_profile`'s node order.

    Component budgets spread round-robin across the component's nodes; the
    j-th attacked lone node is the j-th lone node.
    """
    allocation.check(profile)
    counts = [0] * profile.n
    offset = 0
    for comp, k_c in zip(profile.edged, allocation.edged_counts):
        for j in range(k_c):
            counts[offset + j % comp.nodes] += 1
        offset += comp.nodes
    for idx, cnt in enumerate(allocation.lone_counts):
        counts[offset + idx] = cnt
    return tuple(counts)


def analytic_node_profile(
    graph: Graph, node_attacks: Sequence[int], params: GameParams
) -> tuple[str, ...]:
    """Per-node emergent actions: each connected component is uniformly y iff
    its total attack count reaches the component's flip threshold."""
    if len(node_attacks) != graph.n:
        raise DomainError("node_attacks must give a count per node")
    labels = [X] * graph.n
    for nodes in connected_components(graph):
        members = set(nodes)
        m_c = sum(1 for a, b in graph.edges if a in members)
        comp = Component(m_c, len(nodes))
        k_c = sum(node_attacks[v] for v in nodes)
        if k_c >= k_star(comp, params):
            for v in nodes:
                labels[v] = Y
    return tuple(labels)


def choice_probability(u_x: float, u_y: float, temperature: float) -> float:
    """Boltzmann probability of picking x over y, overflow-safe."""
    if temperature <= 0:
        raise DomainError("temperature must be positive")
    d = (float(u_y) - float(u_x)) / float(temperature)
    if d > 700:
        return 0.0
    if d < -700:
        return 1.0
    return 1.0 / (1.0 + math.exp(d))


@dataclass(frozen=True)
class LearningConfig:
    """Inputs for one chain: concrete graph, per-node attacks, and run knobs."""

    graph: Graph
    node_attacks: tuple[int, ...]
    temperature: float
    steps: int
    seed: int
    burn_in_fraction: float = 0.1
    start: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if not 0 <= self.burn_in_fraction < 1:
            raise ValueError("burn-in fraction must lie in [0, 1)")
        if len(self.node_attacks) != self.graph.n:
            raise ValueError("node_attacks must give a count per node")


@dataclass
class TrajectorySummary:
    """Visit counts over joint states (bitmask with bit i set when node i plays y)."""

    n: int
    counted_steps: int
    counts: dict[int, int] = field(default_factory=dict)

    def modal_mask(self) -> int:
        best = max(self.counts.values())
        return min(mask for mask, cnt in self.counts.items() if cnt == best)

    def state_actions(self, mask: int) -> tuple[str, ...]:
        return tuple(Y if mask >> i & 1 else X for i in range(self.n))

    def state_string(self, mask: int) -> str:
        return "".join(self.state_actions(mask))

    def frequency(self, mask: int) -> float:
        return self.counts.get(mask, 0) / self.counted_steps

    def rows(self) -> list[tuple[str, int, float]]:
        """(state, visits, frequency) sorted by visits descending, then state."""
        ordered = sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return [
            (self.state_string(mask), cnt, cnt / self.counted_steps)
            for mask, cnt in ordered
        ]


def run_lll(config: LearningConfig, params: GameParams) -> TrajectorySummary:
    """Run one asynchronous log-linear learning chain and tally visited states."""
    graph = config.graph
    n = graph.n
    if n > MAX_SIMULATION_AGENTS:
        raise ResourceLimitError(f"simulation is capped at {MAX_SIMULATION_AGENTS} agents")

    start = config.start or analytic_node_profile(graph, config.node_attacks, params)
    if len(start) != n or any(a not in (X, Y) for a in start):
        raise DomainError("start profile must assign x or y to every node")

    alpha = float(params.alpha)
    p = float(params.p)
    tau = float(config.temperature)
    # prob_x[i][cx]: revision probability of x for agent i with cx x-neighbors.
    prob_x = []
    for i in range(n):
        deg = len(graph.neighbors[i])
        k_i = config.node_attacks[i]
        row = []
        for cx in range(deg + 1):
            u_x = (1.0 + alpha) * cx
            u_y = (deg - cx) + k_i - p
            row.append(choice_probability(u_x, u_y, tau))
        prob_x.append(row)

    y_flag = [1 if a == Y else 0 for a in start]
    mask = 0
    for i, f in enumerate(y_flag):
        if f:
            mask |= 1 << i
    neighbors = [list(ns) for ns in graph.neighbors]
    rng = random.Random(config.seed)
    randrange, rand = rng.randrange, rng.random
    burn = int(config.steps * config.burn_in_fraction)
    counts: dict[int, int] = {}

    for t in range(config.steps):
        i = randrange(n)
        cx = 0
        for j in neighbors[i]:
            cx += 1 - y_flag[j]
        new = 0 if rand() < prob_x[i][cx] else 1
        if new != y_flag[i]:
            y_flag[i] = new
            mask ^= 1 << i
        if t >= burn:
            counts[mask] = counts.get(mask, 0) + 1

    return TrajectorySummary(n, config.steps - burn, counts)


def potential_maximizers(
    graph: Graph, node_attacks: Sequence[int], params: GameParams
) -> set[int]:
    """Bitmasks of all joint states attaining the maximum exact potential."""
    if graph.n > MAX_EXACT_STATE_AGENTS:
        raise ResourceLimitError(
            f"exact state enumeration is capped at {MAX_EXACT_STATE_AGENTS} agents"
        )
    best = None
    argmax: set[int] = set()
    for mask in range(1 << graph.n):
        profile = tuple(Y if mask >> i & 1 else X for i in range(graph.n))
        phi = global_potential(profile, node_attacks, graph, params)
        if best is None or phi > best:
            best = phi
            argmax = {mask}
        elif phi == best:
            argmax.add(mask)
    return argmax


def gibbs_distribution(
    graph: Graph, node_attacks: Sequence[int], params: GameParams, temperature: float
) -> dict[int, float]:
    """Exact stationary distribution exp(potential/temperature), normalized."""
    if temperature <= 0:
        raise DomainError("temperature must be positive")
    if graph.n > MAX_EXACT_STATE_AGENTS:
        raise ResourceLimitError(
            f"exact state enumeration is capped at {MAX_EXACT_STATE_AGENTS} agents"
        )
    phis = {}
    for mask in range(1 << graph.n):
        profile = tuple(Y if mask >> i & 1 else X for i in range(graph.n))
        phis[mask] = global_potential(profile, node_attacks, graph, params)
    top = max(phis.values())
    weights = {
        mask: math.exp(float(phi - top) / float(temperature)) for mask, phi in phis.items()
    }
    z = sum(weights.values())
    return {mask: w / z for mask, w in weights.items()}


def stability_check(
    profile: GraphTopology,
    attacks: AttackAllocation,
    params: GameParams,
    temperature: float = 0.05,
    steps: int = 1_000_000,
    seed: int = 0,
    burn_in_fraction: float = 0.1,
) -> bool:
    """True when the chain's modal state matches the analytic emergent state.

    A modal state that differs is still accepted when it ties the analytic
    state as a global potential maximizer.
    """
    if profile.n > MAX_STABILITY_AGENTS:
        raise ResourceLimitError(
            f"stability check is capped at {MAX_STABILITY_AGENTS} agents"
        )
    graph = realize_profile(profile)
    node_attacks = attach_attacks(profile, attacks)
    config = LearningConfig(
        graph, node_attacks, temperature, steps, seed, burn_in_fraction
    )
    summary = run_lll(config, params)
    modal = summary.modal_mask()
    analytic = analytic_node_profile(graph, node_attacks, params)
    if summary.state_actions(modal) == analytic:
        return True
    return modal in potential_maximizers(graph, node_attacks, params)
