"""Budgeted adversary best responses over component profiles.

Both adversary kinds reduce to an exact 0/1 knapsack over whole-component
flips: partial attacks never change the emergent state, so an optimal
allocation puts exactly k*(c) impostors on each flipped component and one on
each flipped lone node, leaving the rest of the budget unspent.

Tie-breaking is pessimistic for the operator and deterministic:
(1) maximize the adversary's objective, (2) among ties minimize system
welfare, (3) among remaining ties take the lexicographically first flipped
component set (edged components in profile order, then lone nodes),
(4) finally the componentwise-smallest count vector.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .core import (
    LONE,
    X,
    Y,
    DomainError,
    GameParams,
    ResourceLimitError,
    delta_welfare,
    k_star,
)
from .topology import GraphTopology

MALICIOUS = "malicious"
ADVERTISER = "advertiser"
ADVERSARY_KINDS = (MALICIOUS, ADVERTISER)

# Brute-force oracle ceilings (exhaustive over capped count vectors).
MAX_BRUTE_FORCE_COMPONENTS = 12


@dataclass(frozen=True)
class AdversaryType:
    """An adversary's intent (malicious or advertiser) and attack budget k."""

    kind: str
    k: int

    def __post_init__(self) -> None:
        if self.kind not in ADVERSARY_KINDS:
            raise ValueError(f"kind must be one of {ADVERSARY_KINDS}, got {self.kind!r}")
        if self.k < 0:
            raise ValueError(f"budget must be non-negative, got {self.k}")

    @classmethod
    def malicious(cls, k: int) -> "AdversaryType":
        return cls(MALICIOUS, k)

    @classmethod
    def advertiser(cls, k: int) -> "AdversaryType":
        return cls(ADVERTISER, k)

    @property
    def short(self) -> str:
        return "M" if self.kind == MALICIOUS else "A"


@dataclass(frozen=True)
class AttackAllocation:
    """Impostor counts per edged component plus counts on attacked lone nodes.

    Lone nodes are interchangeable, so `lone_counts` holds one entry (>= 1)
    per attacked lone node, sorted descending.
    """

    edged_counts: tuple[int, ...]
    lone_counts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if any(c < 0 for c in self.edged_counts):
            raise ValueError("attack counts must be non-negative")
        if any(c < 1 for c in self.lone_counts):
            raise ValueError("attacked lone nodes carry at least one impostor")
        object.__setattr__(
            self, "lone_counts", tuple(sorted(self.lone_counts, reverse=True))
        )

    @property
    def total(self) -> int:
        return sum(self.edged_counts) + sum(self.lone_counts)

    def check(self, graph: GraphTopology) -> None:
        if len(self.edged_counts) != len(graph.edged):
            raise DomainError(
                f"allocation covers {len(self.edged_counts)} edged components, "
                f"graph has {len(graph.edged)}"
            )
        if len(self.lone_counts) > graph.lone_count:
            raise DomainError(
                f"allocation attacks {len(self.lone_counts)} lone nodes, "
                f"graph has {graph.lone_count}"
            )


def empty_allocation(graph: GraphTopology) -> AttackAllocation:
    return AttackAllocation((0,) * len(graph.edged), ())


@dataclass(frozen=True)
class EmergentState:
    """Uniform per-component labels: one per edged component plus a lone y count."""

    edged_labels: tuple[str, ...]
    lone_y_count: int


def emergent_state(graph: GraphTopology, attacks: AttackAllocation, params: GameParams) -> EmergentState:
    """Label each component y iff its attack count reaches k*(c); ties go to y."""
    attacks.check(graph)
    labels = tuple(
        Y if k_c >= k_star(c, params) else X
        for c, k_c in zip(graph.edged, attacks.edged_counts)
    )
    # k*(lone) = ceil(p) = 1, so every attacked lone node flips.
    return EmergentState(labels, len(attacks.lone_counts))


def state_welfare(graph: GraphTopology, state: EmergentState, params: GameParams) -> Fraction:
    """Welfare of a uniform state: 2m(1+alpha) minus the loss of each y component."""
    total = 2 * graph.m * (1 + params.alpha)
    for c, label in zip(graph.edged, state.edged_labels):
        if label == Y:
            total -= delta_welfare(c, params)
    total -= state.lone_y_count * params.p
    return total


def state_edge_counts(graph: GraphTopology, state: EmergentState) -> tuple[int, int]:
    """(E_x, E_y) edge counts under a uniform state."""
    e_y = sum(c.edges for c, lab in zip(graph.edged, state.edged_labels) if lab == Y)
    return graph.m - e_y, e_y


def state_y_nodes(graph: GraphTopology, state: EmergentState) -> int:
    return (
        sum(c.nodes for c, lab in zip(graph.edged, state.edged_labels) if lab == Y)
        + state.lone_y_count
    )


def successful_attacks(state: EmergentState, attacks: AttackAllocation) -> int:
    """N_Ky: impostors attached to y-playing agents (multi-attacks each count)."""
    edged = sum(
        k_c for k_c, lab in zip(attacks.edged_counts, state.edged_labels) if lab == Y
    )
    return edged + sum(attacks.lone_counts)


def advertiser_payoff(state: EmergentState, graph: GraphTopology) -> int:
    """Number of agents selecting y at the emergent state."""
    return state_y_nodes(graph, state)


def malicious_payoff(state: EmergentState, graph: GraphTopology, params: GameParams) -> Fraction:
    """Negated system welfare."""
    return -state_welfare(graph, state, params)


def adversary_objective(
    state: EmergentState, graph: GraphTopology, kind: str, params: GameParams
):
    if kind == ADVERTISER:
        return advertiser_payoff(state, graph)
    if kind == MALICIOUS:
        return malicious_payoff(state, graph, params)
    raise ValueError(f"unknown adversary kind {kind!r}")


def k_r(graph: GraphTopology, params: GameParams) -> int:
    """Budget at which every component (lone nodes included) can be flipped."""
    return sum(k_star(c, params) for c in graph.all_components())


def _item_values(graph: GraphTopology, kind: str, params: GameParams):
    """(cost, objective value, welfare-loss value) per edged component, plus the lone item."""
    edged = []
    for c in graph.edged:
        loss = delta_welfare(c, params)
        value = Fraction(c.nodes) if kind == ADVERTISER else loss
        edged.append((k_star(c, params), value, loss))
    lone_value = Fraction(1) if kind == ADVERTISER else params.p
    return edged, lone_value


def best_response(
    graph: GraphTopology, adversary: AdversaryType, params: GameParams
) -> AttackAllocation:
    """Objective-maximal allocation via exact dynamic programming.

    Values are exact rationals; the DP tracks (objective, welfare loss) pairs
    so boundary ties resolve by the documented hierarchy.
    """
    k = adversary.k
    items, lone_value = _item_values(graph, adversary.kind, params)
    n_items = len(items)
    lones = graph.lone_count
    p = params.p

    # suffix[i][b]: best (objective, welfare loss) using items i.. with cost
    # exactly b, or None when unreachable.
    width = k + 1
    suffix: list[list[Optional[tuple[Fraction, Fraction]]]] = [
        [None] * width for _ in range(n_items + 1)
    ]
    suffix[n_items][0] = (Fraction(0), Fraction(0))
    for i in range(n_items - 1, -1, -1):
        cost, value, loss = items[i]
        row = suffix[i]
        nxt = suffix[i + 1]
        for b in range(width):
            best = nxt[b]
            if cost <= b and nxt[b - cost] is not None:
                cand = (nxt[b - cost][0] + value, nxt[b - cost][1] + loss)
                if best is None or cand > best:
                    best = cand
            row[b] = best

    def with_lones(value: tuple[Fraction, Fraction], spent: int) -> tuple[Fraction, Fraction]:
        j = min(lones, k - spent)
        return (value[0] + lone_value * j, value[1] + p * j)

    target = max(
        with_lones(suffix[0][b], b) for b in range(width) if suffix[0][b] is not None
    )

    # Greedy reconstruction: including the earliest item whenever the optimum
    # stays reachable yields the lexicographically first flipped set.
    chosen = []
    spent = 0
    acc = (Fraction(0), Fraction(0))
    for i in range(n_items):
        cost, value, loss = items[i]
        if spent + cost > k:
            continue
        cand_acc = (acc[0] + value, acc[1] + loss)
        reachable = any(
            suffix[i + 1][b] is not None
            and with_lones(
                (cand_acc[0] + suffix[i + 1][b][0], cand_acc[1] + suffix[i + 1][b][1]),
                spent + cost + b,
            )
            == target
            for b in range(width - spent - cost)
        )
        if reachable:
            chosen.append(i)
            spent += cost
            acc = cand_acc

    lone_used = min(lones, k - spent)
    counts = [0] * n_items
    for i in chosen:
        counts[i] = items[i][0]
    return AttackAllocation(tuple(counts), (1,) * lone_used)


@lru_cache(maxsize=None)
def welfare_under_attack(
    graph: GraphTopology, adversary: AdversaryType, params: GameParams
) -> Fraction:
    """System welfare at the emergent state induced by the best response."""
    allocation = best_response(graph, adversary, params)
    return state_welfare(graph, emergent_state(graph, allocation, params), params)


def brute_force_best_response(
    graph: GraphTopology, adversary: AdversaryType, params: GameParams
) -> AttackAllocation:
    """Exhaustive oracle over per-component count vectors with total <= k.

    Counts above a component's k*(c) leave the emergent state unchanged while
    costing more budget, so each coordinate is capped at k*(c); within the
    caps every vector is evaluated. Ties resolve by the same hierarchy as
    `best_response`.
    """
    k = adversary.k
    n_components = len(graph.edged) + graph.lone_count
    if n_components > MAX_BRUTE_FORCE_COMPONENTS:
        raise ResourceLimitError(
            f"brute force is capped at {MAX_BRUTE_FORCE_COMPONENTS} components, "
            f"got {n_components}"
        )
    if k > 3 * graph.m:
        raise ResourceLimitError(f"brute force is capped at k <= 3m, got k={k}")

    caps = [min(k, k_star(c, params)) for c in graph.edged]
    lone_cap = min(graph.lone_count, k)
    n_edged = len(graph.edged)

    best = None  # (objective, -? handled manually), allocation tuple fields
    for vector in itertools.product(*(range(c + 1) for c in caps)):
        used = sum(vector)
        if used > k:
            continue
        for j in range(0, min(lone_cap, k - used) + 1):
            allocation = AttackAllocation(vector, (1,) * j)
            state = emergent_state(graph, allocation, params)
            objective = adversary_objective(state, graph, adversary.kind, params)
            welfare = state_welfare(graph, state, params)
            flipped = tuple(
                i for i, lab in enumerate(state.edged_labels) if lab == Y
            ) + tuple(range(n_edged, n_edged + j))
            key = (objective, welfare, flipped, vector, j)
            if best is None or _beats(key, best[0]):
                best = (key, allocation)
    assert best is not None  # the empty vector is always feasible
    return best[1]


def _beats(key, other) -> bool:
    """Order: higher objective, then lower welfare, then lex-smaller flip set/vector."""
    obj_a, wel_a, set_a, vec_a, j_a = key
    obj_b, wel_b, set_b, vec_b, j_b = other
    if obj_a != obj_b:
        return obj_a > obj_b
    if wel_a != wel_b:
        return wel_a < wel_b
    if set_a != set_b:
        return set_a < set_b
    return (vec_a, j_a) < (vec_b, j_b)
