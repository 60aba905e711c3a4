"""Coordination games on networks under budgeted adversarial influence.

Exact (rational-arithmetic) game computations, adversary best responses,
operator-side topology design, and Monte Carlo validation of the emergent
solution concept via log-linear learning.
"""

from .core import (
    ACTIONS,
    LONE,
    X,
    Y,
    Component,
    DomainError,
    GameParams,
    Graph,
    ResourceLimitError,
    agent_utility,
    component_potential,
    connected_components,
    delta_welfare,
    global_potential,
    k_star,
    pairwise_payoff,
    perturbed_utility,
    system_welfare,
)
from .topology import (
    CANONICAL_KINDS,
    COMPLETE,
    LINE,
    SPARSE,
    GraphTopology,
    all_profiles,
    canonical_graph,
    enumerate_profiles,
    format_profile,
    is_feasible_component,
    min_complete_nodes,
    parse_profile,
)
from .adversary import (
    ADVERSARY_KINDS,
    ADVERTISER,
    MALICIOUS,
    AdversaryType,
    AttackAllocation,
    EmergentState,
    advertiser_payoff,
    adversary_objective,
    best_response,
    brute_force_best_response,
    emergent_state,
    empty_allocation,
    k_r,
    malicious_payoff,
    state_edge_counts,
    state_welfare,
    state_y_nodes,
    successful_attacks,
    welfare_under_attack,
)
from .design import (
    DEFAULT_PARAM_GRID,
    EXACT_SEARCH_MAX_EDGES,
    VERIFY_SUITES,
    RegretReport,
    VerifyCase,
    WelfareCurve,
    WelfarePoint,
    advertiser_flip_threshold,
    exact_optimal_profile,
    is_ordinary,
    k_intersect,
    k_max_advertiser,
    k_max_malicious,
    optimal_canonical_graph,
    oracle_agreement_cases,
    oracle_is_ordinary,
    oracle_k_max_advertiser,
    oracle_k_max_malicious,
    relative_regret,
    verify_bounds,
    welfare_curve,
)
from .learning import (
    LearningConfig,
    TrajectorySummary,
    analytic_node_profile,
    attach_attacks,
    choice_probability,
    gibbs_distribution,
    potential_maximizers,
    realize_profile,
    run_lll,
    stability_check,
)

__version__ = "0.1.0"
