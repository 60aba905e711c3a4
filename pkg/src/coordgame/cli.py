"""Command-line surface: threshold queries, welfare curves, optimization,
regret, bound verification, and learning simulation with deterministic CSV
output.

Exit codes: 0 success, 1 verification failure, 2 argument error, 3 I/O error,
4 resource ceiling exceeded, 5 domain error.
"""

from __future__ import annotations

import os
import sys
import tempfile
from fractions import Fraction
from typing import Sequence

import click

from .core import DomainError, GameParams, ResourceLimitError
from .adversary import (
    ADVERTISER,
    MALICIOUS,
    AdversaryType,
    AttackAllocation,
    emergent_state,
)
from .design import (
    VERIFY_SUITES,
    exact_optimal_profile,
    is_ordinary,
    k_max_advertiser,
    k_max_malicious,
    optimal_canonical_graph,
    oracle_agreement_cases,
    relative_regret,
    verify_bounds,
    welfare_curve,
)
from .learning import (
    LearningConfig,
    analytic_node_profile,
    attach_attacks,
    realize_profile,
    run_lll,
)
from .topology import (
    CANONICAL_KINDS,
    GraphTopology,
    canonical_graph,
    format_profile,
    parse_profile,
)
from .adversary import welfare_under_attack

EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_RESOURCE = 4
EXIT_DOMAIN = 5

_KIND_ALIASES = {
    "A": ADVERTISER,
    "M": MALICIOUS,
    ADVERTISER: ADVERTISER,
    MALICIOUS: MALICIOUS,
}


def format_rational(x: Fraction) -> str:
    """Exact decimal when the expansion terminates, else `a/b`."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{x.numerator}/{x.denominator}"
    exp = max(twos, fives)
    scaled = abs(x.numerator) * 10**exp // x.denominator
    digits = str(scaled).rjust(exp + 1, "0")
    sign = "-" if x < 0 else ""
    return f"{sign}{digits[:-exp]}.{digits[-exp:]}"


def _format_value(value) -> str:
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, float):
        return f"{value:.9f}"
    return str(value)


def parse_rational(text: str, name: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise click.UsageError(f"{name} must be a rational like '1/2' or '0.25', got {text!r}")


def parse_params(alpha: str, p: str) -> GameParams:
    try:
        return GameParams(parse_rational(alpha, "--alpha"), parse_rational(p, "--p"))
    except ValueError as exc:
        raise click.UsageError(str(exc))


def parse_kind(value: str) -> str:
    kind = _KIND_ALIASES.get(value)
    if kind is None:
        raise click.UsageError(f"adversary must be one of A, M, advertiser, malicious; got {value!r}")
    return kind


def parse_graph(selector: str, m: int) -> tuple[GraphTopology, str]:
    if selector in CANONICAL_KINDS:
        return canonical_graph(selector, m), selector
    try:
        profile = parse_profile(selector)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if profile.m != m:
        raise click.UsageError(f"profile has {profile.m} edges but --m is {m}")
    return profile, format_profile(profile)


def parse_k_range(text: str, m: int) -> list[int]:
    text = text.strip()
    try:
        if ".." in text:
            lo_s, hi_s = text.split("..")
            lo, hi = int(lo_s), int(hi_s)
        else:
            lo = hi = int(text)
    except ValueError:
        raise click.UsageError(f"--k-range must be 'lo..hi' or an integer, got {text!r}")
    if lo > hi:
        raise click.UsageError("--k-range lower bound exceeds upper bound")
    if lo < 0 or hi > 3 * m:
        raise click.UsageError(f"--k-range must lie within [0, {3 * m}]")
    return list(range(lo, hi + 1))


def parse_attacks(text: str, profile: GraphTopology) -> AttackAllocation:
    """Allocation text `index:count,...`; edged components first, then lone nodes."""
    n_edged = len(profile.edged)
    edged = [0] * n_edged
    lone: list[int] = []
    text = text.strip()
    if text:
        for item in text.split(","):
            bits = item.strip().split(":")
            if len(bits) != 2:
                raise click.UsageError(f"malformed attack entry {item!r}; expected index:count")
            try:
                idx, cnt = int(bits[0]), int(bits[1])
            except ValueError:
                raise click.UsageError(f"malformed attack entry {item!r}")
            if cnt < 0:
                raise click.UsageError("attack counts must be non-negative")
            if idx < 0 or idx >= n_edged + profile.lone_count:
                raise click.UsageError(
                    f"component index {idx} out of range for {format_profile(profile)}"
                )
            if idx < n_edged:
                edged[idx] += cnt
            elif cnt > 0:
                lone.append(cnt)
    try:
        return AttackAllocation(tuple(edged), tuple(lone))
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _out_path(out: str) -> str:
    base = os.environ.get("COORDGAME_OUT_DIR", "")
    return os.path.join(base, out) if base and not os.path.isabs(out) else out


def write_atomic(path: str, text: str) -> None:
    """write-temp-then-rename so reruns are all-or-nothing."""
    path = _out_path(path)
    directory = os.path.dirname(path) or "."
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".coordgame-")
        with os.fdopen(fd, "w", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise click.ClickException(f"cannot write {path}: {exc}")


def _csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_format_value(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guarded(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ResourceLimitError as exc:
        _fail(EXIT_RESOURCE, str(exc))
    except DomainError as exc:
        _fail(EXIT_DOMAIN, str(exc))


@click.group()
def main() -> None:
    """Coordination games on networks under budgeted adversarial influence."""


@main.command()
@click.option("--m", type=int, required=True, help="Number of edges.")
@click.option("--alpha", required=True, help="Payoff gain, rational.")
@click.option("--p", "p_", required=True, help="Personal cost, rational.")
def kmax(m: int, alpha: str, p_: str) -> None:
    """Budget thresholds below which some graph resists each adversary type."""
    if m < 1:
        raise click.UsageError(f"--m must be >= 1, got {m}")
    params = parse_params(alpha, p_)
    from .topology import min_complete_nodes

    k_m = _guarded(k_max_malicious, m, params)
    k_a = _guarded(k_max_advertiser, m, params)
    ordinary = is_ordinary(m, params)
    d = min_complete_nodes(m)
    click.echo(f"kmaxM={k_m} kmaxA={k_a} ordinary={str(ordinary).lower()} d={d}")
    click.echo(
        f"m={m} alpha={format_rational(params.alpha)} p={format_rational(params.p)}: "
        f"malicious threshold {k_m}, advertiser threshold {k_a} "
        f"({'ordinary' if ordinary else 'not ordinary'}, densest component uses {d} nodes)"
    )


@main.command()
@click.option("--graph", "graph_", required=True, help="SPARSE, LINE, COMPLETE, or a profile like 3:4+2lone.")
@click.option("--adv", required=True, help="Adversary kind: A or M.")
@click.option("--m", type=int, required=True)
@click.option("--alpha", required=True)
@click.option("--p", "p_", required=True)
@click.option("--k-range", "k_range", default=None, help="Budget range lo..hi (default 0..3m).")
@click.option("--out", required=True, help="Output CSV path.")
def curve(graph_: str, adv: str, m: int, alpha: str, p_: str, k_range: str, out: str) -> None:
    """Welfare-vs-budget curve as CSV: k,welfare,graph,adversary,m,alpha,p."""
    if m < 1:
        raise click.UsageError(f"--m must be >= 1, got {m}")
    params = parse_params(alpha, p_)
    kind = parse_kind(adv)
    topo, label = parse_graph(graph_, m)
    ks = parse_k_range(k_range if k_range is not None else f"0..{3 * m}", m)
    result = _guarded(welfare_curve, topo, kind, params, ks, label)
    short = "A" if kind == ADVERTISER else "M"
    rows = [
        (
            point.k,
            point.welfare,
            label,
            short,
            m,
            params.alpha,
            params.p,
        )
        for point in result.points
    ]
    write_atomic(out, _csv(("k", "welfare", "graph", "adversary", "m", "alpha", "p"), rows))
    click.echo(f"wrote {len(rows)} rows to {_out_path(out)}")


@main.command()
@click.option("--adv", required=True, help="Adversary kind: A or M.")
@click.option("--k", type=int, required=True, help="Attack budget.")
@click.option("--m", type=int, required=True)
@click.option("--alpha", required=True)
@click.option("--p", "p_", required=True)
@click.option("--exact", is_flag=True, help="Also search all profiles exhaustively.")
def optimize(adv: str, k: int, m: int, alpha: str, p_: str, exact: bool) -> None:
    """Welfare-maximizing topology against a best-responding adversary."""
    if m < 1 or k < 0:
        raise click.UsageError("--m must be >= 1 and --k >= 0")
    params = parse_params(alpha, p_)
    adversary = AdversaryType(parse_kind(adv), k)
    label = _guarded(optimal_canonical_graph, adversary, m, params)
    welfare = _guarded(welfare_under_attack, canonical_graph(label, m), adversary, params)
    click.echo(f"graph={label} welfare={format_rational(welfare)}")
    if exact:
        profile, best = _guarded(exact_optimal_profile, adversary, m, params)
        gap = best - welfare
        click.echo(
            f"exact={format_profile(profile)} welfare={format_rational(best)} "
            f"gap={format_rational(gap)}"
        )


@main.command()
@click.option("--planned", required=True, help="Planned adversary kind: A or M.")
@click.option("--realized", required=True, help="Realized adversary kind: A or M.")
@click.option("--k", type=int, required=True)
@click.option("--m", type=int, required=True)
@click.option("--alpha", required=True)
@click.option("--p", "p_", required=True)
@click.option("--exact/--canonical", default=True, help="Exhaustive vs canonical-rule optimizer.")
def regret(planned: str, realized: str, k: int, m: int, alpha: str, p_: str, exact: bool) -> None:
    """Relative welfare loss from planning for the wrong adversary type."""
    if m < 1 or k < 0:
        raise click.UsageError("--m must be >= 1 and --k >= 0")
    params = parse_params(alpha, p_)
    report = _guarded(
        relative_regret, parse_kind(planned), parse_kind(realized), k, m, params, exact
    )
    numerator = report.optimal_welfare - report.planned_welfare
    click.echo(
        f"planned_graph={report.planned_graph} optimal_graph={report.optimal_graph} "
        f"numerator={format_rational(numerator)} denominator={format_rational(report.planned_welfare)} "
        f"regret={report.regret} regret_decimal={float(report.regret):.9f}"
    )


@main.command()
@click.option("--suite", required=True, help=f"One of {', '.join(VERIFY_SUITES + ('oracle_br',))}.")
@click.option("--m-max", "m_max", type=int, required=True)
@click.option("--grid", default=None, help="Semicolon-separated alpha,p pairs; default built-in grid.")
@click.option("--out", required=True, help="Output CSV path.")
def verify(suite: str, m_max: int, grid: str, out: str) -> None:
    """Run a bound-verification suite; exit 0 only when every case passes."""
    if m_max < 1:
        raise click.UsageError("--m-max must be >= 1")
    params_grid = None
    if grid:
        params_grid = []
        for pair in grid.split(";"):
            bits = pair.split(",")
            if len(bits) != 2:
                raise click.UsageError(f"malformed grid entry {pair!r}; expected alpha,p")
            params_grid.append(parse_params(bits[0].strip(), bits[1].strip()))
    if suite == "oracle_br":
        cases = _guarded(oracle_agreement_cases, m_max, params_grid)
    elif suite in VERIFY_SUITES:
        cases = _guarded(verify_bounds, suite, m_max, params_grid)
    else:
        raise click.UsageError(f"unknown suite {suite!r}")
    rows = [
        (
            case.suite,
            case.case_id,
            case.m,
            case.alpha,
            case.p,
            case.k,
            case.lhs,
            case.rhs,
            str(case.passed).lower(),
        )
        for case in cases
    ]
    write_atomic(out, _csv(("suite", "case_id", "m", "alpha", "p", "k", "lhs", "rhs", "pass"), rows))
    failures = sum(1 for case in cases if not case.passed)
    click.echo(f"suite={suite} cases={len(cases)} failures={failures}")
    if failures:
        sys.exit(EXIT_VERIFY_FAILED)


@main.command()
@click.option("--profile", "profile_", required=True, help="Profile string, e.g. 3:4+2lone.")
@click.option("--attacks", default="", help="Allocation as index:count pairs, e.g. 0:3,1:1.")
@click.option("--alpha", required=True)
@click.option("--p", "p_", required=True)
@click.option("--temperature", default="0.05", help="Learning temperature, rational or decimal.")
@click.option("--steps", type=int, default=1_000_000)
@click.option("--seed", type=int, default=0)
@click.option("--burn-in", "burn_in", type=float, default=0.1)
@click.option("--out", required=True, help="Output CSV path.")
def simulate(
    profile_: str,
    attacks: str,
    alpha: str,
    p_: str,
    temperature: str,
    steps: int,
    seed: int,
    burn_in: float,
    out: str,
) -> None:
    """Log-linear learning run; CSV of visit frequencies plus a modal-match line."""
    params = parse_params(alpha, p_)
    try:
        topo = parse_profile(profile_)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    allocation = parse_attacks(attacks, topo)
    tau = float(parse_rational(temperature, "--temperature"))
    graph = realize_profile(topo)
    node_attacks = attach_attacks(topo, allocation)
    try:
        config = LearningConfig(graph, node_attacks, tau, steps, seed, burn_in)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    summary = _guarded(run_lll, config, params)
    rows = [(state, visits, freq) for state, visits, freq in summary.rows()]
    write_atomic(out, _csv(("state", "visits", "frequency"), rows))
    modal = summary.state_string(summary.modal_mask())
    analytic = "".join(analytic_node_profile(graph, node_attacks, params))
    click.echo(f"modal={modal} analytic={analytic} match={str(modal == analytic).lower()}")


if __name__ == "__main__":
    main()
