"""Cost-effectiveness post-processing: cumulated infectious burden,
efficiency index, and incremental cost-effectiveness ratio (ICER)
ranking with strong-dominance elimination."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import I_H
from .ode import Trajectory


@dataclass(frozen=True)
class StrategyReport:
    """Outcome summary for one control strategy."""

    name: str
    cumulated_ih: float        # person-days of infectiousness
    efficiency_percent: float  # vs the no-control baseline
    total_cost: float
    infections_averted: float


@dataclass(frozen=True)
class IcerRow:
    strategy: str
    averted: float
    cost: float
    icer: float | None       # vs the previous kept strategy (None: baseline row pending)
    status: str              # kept | dominated | equivalent


@dataclass(frozen=True)
class IcerTable:
    rows: list
    eliminations: list       # (round, eliminated strategy, reason)
    kept: list               # surviving strategy names, ascending averted
    equivalent: list         # groups of mutually equivalent strategies
    comparisons: list        # (round, first, second, icer_first, icer_pair)


def cumulated_infectious(traj: Trajectory) -> float:
    """Trapezoidal integral of the infectious-human compartment."""
    return float(np.trapezoid(traj.values[:, I_H], dx=traj.grid.dt))


def efficiency_index(controlled: float, baseline: float) -> float:
    """(1 - controlled/baseline) * 100; baseline must be positive."""
    if baseline <= 0.0:
        raise ZeroDivisionError(
            f"baseline cumulated infectious must be > 0, got {baseline!r}")
    return (1.0 - controlled / baseline) * 100.0


def _pair_icer(d_cost: float, d_averted: float) -> float | None:
    if d_averted == 0.0:
        return None
    return d_cost / d_averted


def icer_analysis(reports: list[StrategyReport],
                  rtol: float = 1e-12) -> IcerTable:
    """Strong-dominance elimination over incremental ICERs.

    Strategies are ordered by ascending infections averted (i.e.
    descending total infections).  Each round compares the two
    least-effective remaining strategies: a negative incremental ICER
    eliminates the cheaper-but-less-effective one; an incremental ICER
    above the first strategy's own ratio eliminates the second.  Ties in
    both cost and effect are reported as equivalent, never divided.
    """
    if len(reports) < 2:
        raise ValueError("need at least 2 strategies")
    if any(r.infections_averted <= 0 for r in reports):
        raise ValueError("all strategies must avert a positive number of infections")

    order = sorted(reports, key=lambda r: r.infections_averted)
    rows: list[IcerRow] = []
    eliminations = []
    equivalent_groups = []
    comparisons = []
    remaining = list(order)
    round_no = 0

    def close(a: float, b: float) -> bool:
        return math.isclose(a, b, rel_tol=rtol, abs_tol=0.0)

    while len(remaining) >= 2:
        first, second = remaining[0], remaining[1]
        if (close(first.infections_averted, second.infections_averted)
                and close(first.total_cost, second.total_cost)):
            equivalent_groups.append([first.name, second.name])
            rows.append(IcerRow(second.name, second.infections_averted,
                                second.total_cost, None, "equivalent"))
            remaining.pop(1)
            continue
        round_no += 1
        icer_first = first.total_cost / first.infections_averted
        d_averted = second.infections_averted - first.infections_averted
        d_cost = second.total_cost - first.total_cost
        icer_pair = _pair_icer(d_cost, d_averted)
        comparisons.append((round_no, first.name, second.name,
                            icer_first, icer_pair))
        if icer_pair is None:
            # Same effect, different cost: the dearer one is dominated.
            loser = first if first.total_cost > second.total_cost else second
            eliminations.append((round_no, loser.name,
                                 "same effect at higher cost"))
            rows.append(IcerRow(loser.name, loser.infections_averted,
                                loser.total_cost, None, "dominated"))
            remaining.remove(loser)
            continue
        if icer_pair < 0.0:
            eliminations.append(
                (round_no, first.name,
                 f"negative incremental ICER {icer_pair:.6g} vs {second.name}"))
            rows.append(IcerRow(first.name, first.infections_averted,
                                first.total_cost, icer_first, "dominated"))
            remaining.pop(0)
        elif icer_pair > icer_first:
            eliminations.append(
                (round_no, second.name,
                 f"incremental ICER {icer_pair:.6g} exceeds "
                 f"{first.name}'s ratio {icer_first:.6g}"))
            rows.append(IcerRow(second.name, second.infections_averted,
                                second.total_cost, icer_pair, "dominated"))
            remaining.pop(1)
        else:
            break

    for i, rep in enumerate(remaining):
        if i == 0:
            icer = rep.total_cost / rep.infections_averted
        else:
            prev = remaining[i - 1]
            icer = _pair_icer(rep.total_cost - prev.total_cost,
                              rep.infections_averted - prev.infections_averted)
        rows.append(IcerRow(rep.name, rep.infections_averted,
                            rep.total_cost, icer, "kept"))

    return IcerTable(rows=rows, eliminations=eliminations,
                     kept=[r.name for r in remaining],
                     equivalent=equivalent_groups,
                     comparisons=comparisons)
