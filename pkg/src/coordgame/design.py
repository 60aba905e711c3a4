"""Operator-side design: budget thresholds, optimal topologies, regret, bound checks.

Closed-form thresholds are paired with exhaustive profile-search oracles so
that every formula can be validated exactly at desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .core import Component, DomainError, GameParams, ResourceLimitError, k_star
from .adversary import (
    ADVERSARY_KINDS,
    ADVERTISER,
    MALICIOUS,
    AdversaryType,
    best_response,
    emergent_state,
    k_r,
    welfare_under_attack,
)
from .topology import (
    COMPLETE,
    LINE,
    SPARSE,
    GraphTopology,
    all_profiles,
    canonical_graph,
    format_profile,
    is_feasible_component,
    min_complete_nodes,
)

# Exact optimum search enumerates every profile; documented ceiling.
EXACT_SEARCH_MAX_EDGES = 10

DEFAULT_PARAM_GRID: tuple[GameParams, ...] = (
    GameParams(Fraction(1, 2), Fraction(1, 4)),
    GameParams(Fraction(3, 5), Fraction(1, 4)),
    GameParams(Fraction(3, 4), Fraction(1, 2)),
    GameParams(Fraction(1), Fraction(1, 2)),
    GameParams(Fraction(1), Fraction(3, 4)),
    GameParams(Fraction(1), Fraction(9, 10)),
)

VERIFY_SUITES = (
    "lemma_slope",
    "lemma_sparse_mid",
    "lemma_B",
    "lemma_line_2p",
    "thm2_regret",
    "thm3_gap",
)

# Generous desk-scale constant for the scaling check: max_k R(M)*sqrt(m) must
# stay below this across all tested m.
REGRET_SCALING_CEILING = 1.0


def _check_m(m: int) -> None:
    if m < 1:
        raise ValueError(f"edge count must be >= 1, got {m}")


def k_max_malicious(m: int, params: GameParams) -> int:
    """Largest budget below which some graph keeps every edged component on x
    against a malicious best responder: ceil(m*alpha + (m+1)*p), attained by LINE."""
    _check_m(m)
    return math.ceil(m * params.alpha + (m + 1) * params.p)


def is_ordinary(m: int, params: GameParams) -> bool:
    """Whether some graph makes every component advertiser-resistant (n_c < k*).

    The node budget n = 2m forces any lone-free graph to be all single edges,
    so the condition collapses to alpha + 2p > 2.
    """
    _check_m(m)
    return params.alpha + 2 * params.p > 2


def k_max_advertiser(m: int, params: GameParams) -> int:
    """Advertiser analogue of `k_max_malicious`.

    When the densest component on d nodes is itself advertiser-resistant
    (d < ceil(m*alpha + d*p)), that component plus 2m-d lone nodes holds out
    until the advertiser can cover the lone-node shortfall:
    2m - 2d + ceil(m*alpha + d*p). No adversary can flip an edged component
    with fewer than k*(c) impostors, so the LINE threshold `k_max_malicious`
    is always available too; the answer is the larger of the two. When even
    the densest component cannot resist, every edged component flips as soon
    as it is affordable and the threshold equals the malicious one.

    (Resistance of the densest component is the operative condition; it is
    implied by, but weaker than, the ordinary property checked by
    `is_ordinary`. Validated exhaustively against the profile-search oracle.)
    """
    _check_m(m)
    k_mal = k_max_malicious(m, params)
    d = min_complete_nodes(m)
    dense_threshold = math.ceil(m * params.alpha + d * params.p)
    if d < dense_threshold:
        return max(k_mal, 2 * m - 2 * d + dense_threshold)
    return k_mal


# ---------------------------------------------------------------------------
# Exhaustive oracles


def oracle_k_max_malicious(m: int, params: GameParams) -> int:
    """Max over profiles of the cheapest edged flip; the malicious adversary
    flips an edged component as soon as it can afford one."""
    return max(
        min(k_star(c, params) for c in profile.edged) for profile in all_profiles(m)
    )


def advertiser_flip_threshold(graph: GraphTopology, params: GameParams) -> int:
    """Least budget at which the advertiser's best response flips an edged component."""
    for k in range(k_r(graph, params) + 1):
        allocation = best_response(graph, AdversaryType.advertiser(k), params)
        state = emergent_state(graph, allocation, params)
        if any(label == "y" for label in state.edged_labels):
            return k
    raise AssertionError("full-budget best response must flip every component")


def oracle_k_max_advertiser(m: int, params: GameParams) -> int:
    return max(advertiser_flip_threshold(g, params) for g in all_profiles(m))


def oracle_is_ordinary(m: int, params: GameParams) -> bool:
    """Profile search for a graph whose every component resists the advertiser.

    A lone node never resists (k* = 1 = n_c), so witnesses must have no lone
    nodes at all.
    """
    return any(
        g.lone_count == 0 and all(c.nodes < k_star(c, params) for c in g.edged)
        for g in all_profiles(m)
    )


# ---------------------------------------------------------------------------
# Canonical decision rule


def k_intersect(m: int, params: GameParams) -> Optional[int]:
    """First budget >= k_max_malicious where COMPLETE weakly overtakes SPARSE
    against a malicious adversary; None when the curves never cross by 3m."""
    _check_m(m)
    if params.alpha + 2 * params.p > 2:
        raise DomainError("k_intersect applies to the alpha + 2p <= 2 regime")
    sparse = canonical_graph(SPARSE, m)
    complete = canonical_graph(COMPLETE, m)
    for k in range(k_max_malicious(m, params), 3 * m + 1):
        adv = AdversaryType.malicious(k)
        if welfare_under_attack(complete, adv, params) >= welfare_under_attack(
            sparse, adv, params
        ):
            return k
    return None


def canonical_rule(adversary: AdversaryType, m: int, params: GameParams) -> str:
    """The closed-form case rule over the three canonical designs.

    LINE while the budget is below the malicious threshold; past it, the
    advertiser case switches to COMPLETE (then SPARSE past the advertiser
    threshold in the alpha+2p > 2 regime) and the malicious case to SPARSE
    (via the SPARSE/COMPLETE crossing budget in the alpha+2p <= 2 regime).
    """
    _check_m(m)
    k = adversary.k
    if k < k_max_malicious(m, params):
        return LINE
    high_gain = params.alpha + 2 * params.p > 2
    if adversary.kind == ADVERTISER:
        if not high_gain:
            return COMPLETE
        return COMPLETE if k < k_max_advertiser(m, params) else SPARSE
    if high_gain:
        return SPARSE
    crossing = k_intersect(m, params)
    if crossing is None or k < crossing:
        return SPARSE
    return COMPLETE


def optimal_canonical_graph(adversary: AdversaryType, m: int, params: GameParams) -> str:
    """Welfare-maximizing choice among SPARSE, LINE, COMPLETE.

    The case rule is used whenever it attains the maximum of the three exact
    welfare curves (including all ties). It can be strictly suboptimal in a
    known corner: for budgets below ceil(alpha + 2p), SPARSE concedes nothing
    (no lone nodes, edges still resist) while LINE loses a lone node per
    attack. There the exact curve argmax is returned instead, ties broken in
    SPARSE, LINE, COMPLETE order.
    """
    rule_choice = canonical_rule(adversary, m, params)
    welfares = {
        kind: welfare_under_attack(canonical_graph(kind, m), adversary, params)
        for kind in (SPARSE, LINE, COMPLETE)
    }
    best = max(welfares.values())
    if welfares[rule_choice] == best:
        return rule_choice
    for kind in (SPARSE, LINE, COMPLETE):
        if welfares[kind] == best:
            return kind
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# Curves, exact optima, regret


@dataclass(frozen=True)
class WelfarePoint:
    k: int
    welfare: Fraction


@dataclass(frozen=True)
class WelfareCurve:
    graph_label: str
    adversary_kind: str
    m: int
    alpha: Fraction
    p: Fraction
    points: tuple[WelfarePoint, ...]


def welfare_curve(
    graph: GraphTopology,
    adversary_kind: str,
    params: GameParams,
    k_values: Iterable[int],
    label: str | None = None,
) -> WelfareCurve:
    """Welfare at the induced emergent state for each budget in `k_values`."""
    if adversary_kind not in ADVERSARY_KINDS:
        raise ValueError(f"unknown adversary kind {adversary_kind!r}")
    ks = sorted(set(int(k) for k in k_values))
    if not ks:
        raise ValueError("empty budget range")
    if ks[0] < 0 or ks[-1] > 3 * graph.m:
        raise DomainError(f"budgets must lie in [0, 3m] = [0, {3 * graph.m}]")
    points = tuple(
        WelfarePoint(k, welfare_under_attack(graph, AdversaryType(adversary_kind, k), params))
        for k in ks
    )
    return WelfareCurve(
        label or format_profile(graph), adversary_kind, graph.m, params.alpha, params.p, points
    )


@lru_cache(maxsize=None)
def exact_optimal_profile(
    adversary: AdversaryType, m: int, params: GameParams
) -> tuple[GraphTopology, Fraction]:
    """Argmax of welfare-under-attack over every profile on m edges.

    Ties go to the lexicographically first profile in enumeration order.
    """
    _check_m(m)
    if m > EXACT_SEARCH_MAX_EDGES:
        raise ResourceLimitError(
            f"exact search is capped at m <= {EXACT_SEARCH_MAX_EDGES}, got {m}"
        )
    best_graph = None
    best_welfare = None
    for profile in all_profiles(m):
        w = welfare_under_attack(profile, adversary, params)
        if best_welfare is None or w > best_welfare:
            best_graph, best_welfare = profile, w
    return best_graph, best_welfare


@dataclass(frozen=True)
class RegretReport:
    planned: str
    realized: str
    k: int
    m: int
    planned_graph: str
    optimal_graph: str
    optimal_welfare: Fraction
    planned_welfare: Fraction
    regret: Fraction


def relative_regret(
    planned: str,
    realized: str,
    k: int,
    m: int,
    params: GameParams,
    exact: bool = True,
) -> RegretReport:
    """Fraction of welfare lost by planning for `planned` when `realized` shows up."""
    _check_m(m)
    for kind in (planned, realized):
        if kind not in ADVERSARY_KINDS:
            raise ValueError(f"unknown adversary kind {kind!r}")
    if k < 0 or k > 3 * m:
        raise DomainError(f"budget must lie in [0, 3m], got {k}")
    realized_adv = AdversaryType(realized, k)
    planned_adv = AdversaryType(planned, k)
    if exact:
        planned_graph, _ = exact_optimal_profile(planned_adv, m, params)
        optimal_graph, _ = exact_optimal_profile(realized_adv, m, params)
        planned_label = format_profile(planned_graph)
        optimal_label = format_profile(optimal_graph)
    else:
        planned_label = optimal_canonical_graph(planned_adv, m, params)
        optimal_label = optimal_canonical_graph(realized_adv, m, params)
        planned_graph = canonical_graph(planned_label, m)
        optimal_graph = canonical_graph(optimal_label, m)
    optimal_welfare = welfare_under_attack(optimal_graph, realized_adv, params)
    planned_welfare = welfare_under_attack(planned_graph, realized_adv, params)
    if planned_welfare <= 0:
        raise DomainError("regret denominator must be positive")
    regret = (optimal_welfare - planned_welfare) / planned_welfare
    return RegretReport(
        planned,
        realized,
        k,
        m,
        planned_label,
        optimal_label,
        optimal_welfare,
        planned_welfare,
        regret,
    )


# ---------------------------------------------------------------------------
# Bound verification


@dataclass(frozen=True)
class VerifyCase:
    suite: str
    case_id: str
    m: int
    alpha: Fraction
    p: Fraction
    k: int
    lhs: object
    rhs: object
    passed: bool


def _grid(params_grid: Optional[Sequence[GameParams]]) -> Sequence[GameParams]:
    return DEFAULT_PARAM_GRID if params_grid is None else tuple(params_grid)


def _slope_cases(m_max: int, grid: Sequence[GameParams]) -> list[VerifyCase]:
    """Every edged component loses more welfare per flip than k*(c) lone nodes."""
    cases = []
    for params in grid:
        for m_c in range(1, m_max + 1):
            for n_c in range(2, m_c + 2):
                if not is_feasible_component(m_c, n_c):
                    continue
                c = Component(m_c, n_c)
                lhs = 2 * m_c * params.alpha + n_c * params.p
                rhs = k_star(c, params) * params.p
                cases.append(
                    VerifyCase(
                        "lemma_slope",
                        f"{m_c}:{n_c}",
                        m_c,
                        params.alpha,
                        params.p,
                        k_star(c, params),
                        lhs,
                        rhs,
                        lhs > rhs,
                    )
                )
    return cases


def _sparse_mid_cases(m_max: int, grid: Sequence[GameParams]) -> list[VerifyCase]:
    """Upper bound on malicious-case optimal welfare in the middle budget band."""
    cases = []
    for params in grid:
        for m in range(1, m_max + 1):
            lo = k_max_malicious(m, params)
            hi = k_max_advertiser(m, params)
            for k in range(lo, hi):
                adv = AdversaryType.malicious(k)
                graph, lhs = exact_optimal_profile(adv, m, params)
                rhs = 2 * m * (1 + params.alpha) - (k // 3) * (
                    2 * params.alpha + 2 * params.p
                )
                cases.append(
                    VerifyCase(
                        "lemma_sparse_mid",
                        format_profile(graph),
                        m,
                        params.alpha,
                        params.p,
                        k,
                        lhs,
                        rhs,
                        lhs <= rhs,
                    )
                )
    return cases


def _benefit_cases(m_max: int, grid: Sequence[GameParams]) -> list[VerifyCase]:
    """Advertiser-case benefit of the exact optimum over LINE, below the malicious threshold."""
    cases = []
    for params in grid:
        for m in range(1, m_max + 1):
            line = canonical_graph(LINE, m)
            for k in range(k_max_malicious(m, params)):
                adv = AdversaryType.advertiser(k)
                graph, w_opt = exact_optimal_profile(adv, m, params)
                benefit = w_opt - welfare_under_attack(line, adv, params)
                weakest = min(graph.edged, key=lambda c: k_star(c, params))
                cap = math.ceil(weakest.edges * (params.alpha + params.p) + params.p)
                rhs = params.p * min(len(graph.edged) - 1, cap)
                cases.append(
                    VerifyCase(
                        "lemma_B",
                        format_profile(graph),
                        m,
                        params.alpha,
                        params.p,
                        k,
                        benefit,
                        rhs,
                        benefit <= rhs,
                    )
                )
    return cases


def _line_2p_cases(m_max: int, grid: Sequence[GameParams]) -> list[VerifyCase]:
    """LINE is within 2p of the exact optimum against a malicious adversary."""
    cases = []
    for params in grid:
        for m in range(1, m_max + 1):
            line = canonical_graph(LINE, m)
            for k in range(k_max_malicious(m, params)):
                adv = AdversaryType.malicious(k)
                graph, w_opt = exact_optimal_profile(adv, m, params)
                gap = w_opt - welfare_under_attack(line, adv, params)
                rhs = 2 * params.p
                cases.append(
                    VerifyCase(
                        "lemma_line_2p",
                        format_profile(graph),
                        m,
                        params.alpha,
                        params.p,
                        k,
                        gap,
                        rhs,
                        gap <= rhs,
                    )
                )
    return cases


def _thm2_cases(m_max: int, grid: Sequence[GameParams]) -> list[VerifyCase]:
    """Scaling check: max over k < k_max(M) of R(M) * sqrt(m) stays bounded."""
    cases = []
    for params in grid:
        for m in range(4, m_max + 1):
            worst = 0.0
            worst_k = 0
            for k in range(k_max_malicious(m, params)):
                report = relative_regret(MALICIOUS, ADVERTISER, k, m, params, exact=True)
                value = float(report.regret) * math.sqrt(m)
                if value > worst:
                    worst, worst_k = value, k
            cases.append(
                VerifyCase(
                    "thm2_regret",
                    "scaling",
                    m,
                    params.alpha,
                    params.p,
                    worst_k,
                    worst,
                    REGRET_SCALING_CEILING,
                    worst <= REGRET_SCALING_CEILING,
                )
            )
    return cases


def _thm3_cases(m_max: int, grid: Sequence[GameParams]) -> list[VerifyCase]:
    """Welfare advantage of facing an advertiser in the middle budget band."""
    cases = []
    for params in grid:
        for m in range(4, m_max + 1):
            lo = k_max_malicious(m, params)
            hi = k_max_advertiser(m, params)
            for k in range(lo, hi + 1):
                g_a, w_a = exact_optimal_profile(AdversaryType.advertiser(k), m, params)
                g_m, w_m = exact_optimal_profile(AdversaryType.malicious(k), m, params)
                lhs = w_a - w_m
                rhs = (k // 3) * (2 * params.alpha + 2 * params.p) - k * params.p
                cases.append(
                    VerifyCase(
                        "thm3_gap",
                        f"{format_profile(g_a)}|{format_profile(g_m)}",
                        m,
                        params.alpha,
                        params.p,
                        k,
                        lhs,
                        rhs,
                        lhs >= rhs,
                    )
                )
    return cases


def verify_bounds(
    suite: str, m_max: int, params_grid: Optional[Sequence[GameParams]] = None
) -> tuple[VerifyCase, ...]:
    """Evaluate one named bound suite exactly; see VERIFY_SUITES for names."""
    grid = _grid(params_grid)
    if suite == "lemma_slope":
        return tuple(_slope_cases(m_max, grid))
    if m_max > EXACT_SEARCH_MAX_EDGES:
        raise ResourceLimitError(
            f"exact-search suites are capped at m <= {EXACT_SEARCH_MAX_EDGES}"
        )
    if suite == "lemma_sparse_mid":
        return tuple(_sparse_mid_cases(m_max, grid))
    if suite == "lemma_B":
        return tuple(_benefit_cases(m_max, grid))
    if suite == "lemma_line_2p":
        return tuple(_line_2p_cases(m_max, grid))
    if suite == "thm2_regret":
        return tuple(_thm2_cases(m_max, grid))
    if suite == "thm3_gap":
        return tuple(_thm3_cases(m_max, grid))
    raise ValueError(f"unknown suite {suite!r}; expected one of {VERIFY_SUITES}")


def oracle_agreement_cases(
    m_max: int, params_grid: Optional[Sequence[GameParams]] = None
) -> tuple[VerifyCase, ...]:
    """Knapsack vs brute-force best-response agreement in objective value."""
    from .adversary import adversary_objective, brute_force_best_response

    if m_max > 5:
        raise ResourceLimitError("oracle agreement sweep is capped at m <= 5")
    grid = _grid(params_grid)
    cases = []
    for params in grid:
        for m in range(1, m_max + 1):
            for graph in all_profiles(m):
                for kind in ADVERSARY_KINDS:
                    for k in range(0, 3 * m + 1):
                        adv = AdversaryType(kind, k)
                        fast = best_response(graph, adv, params)
                        slow = brute_force_best_response(graph, adv, params)
                        obj_fast = adversary_objective(
                            emergent_state(graph, fast, params), graph, kind, params
                        )
                        obj_slow = adversary_objective(
                            emergent_state(graph, slow, params), graph, kind, params
                        )
                        cases.append(
                            VerifyCase(
                                "oracle_br",
                                f"{format_profile(graph)}|{kind}",
                                m,
                                params.alpha,
                                params.p,
                                k,
                                obj_fast,
                                obj_slow,
                                obj_fast == obj_slow,
                            )
                        )
    return tuple(cases)
