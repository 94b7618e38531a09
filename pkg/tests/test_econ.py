"""Cumulated burden, efficiency index, and ICER dominance chain."""

import numpy as np
import pytest

from arbo.econ import (
    StrategyReport, cumulated_infectious, efficiency_index, icer_analysis,
)
from arbo.model import I_H
from arbo.ode import TimeGrid, Trajectory


def _report(name, averted, cost):
    return StrategyReport(name=name, cumulated_ih=0.0, efficiency_percent=0.0,
                          total_cost=cost, infections_averted=averted)


def test_cumulated_infectious_trapezoid():
    """[TRIVIAL] Linear I_h integrates to the exact trapezoid value."""
    grid = TimeGrid(0.0, 2.0, 4)
    values = np.zeros((5, 10))
    values[:, I_H] = np.linspace(0.0, 4.0, 5)
    assert cumulated_infectious(Trajectory(grid, values)) == pytest.approx(4.0)


def test_efficiency_index():
    """[TRIVIAL] Percent reduction vs baseline; zero baseline rejected."""
    assert efficiency_index(25.0, 100.0) == pytest.approx(75.0)
    assert efficiency_index(100.0, 100.0) == pytest.approx(0.0)
    with pytest.raises(ZeroDivisionError):
        efficiency_index(1.0, 0.0)


def test_icer_requires_two_strategies():
    """[TRIVIAL] A single strategy cannot be ranked."""
    with pytest.raises(ValueError):
        icer_analysis([_report("A", 10.0, 100.0)])


def test_icer_rejects_nonpositive_effect():
    """[TRIVIAL] Strategies must avert some infections."""
    with pytest.raises(ValueError):
        icer_analysis([_report("A", 0.0, 1.0), _report("B", 5.0, 2.0)])


def test_icer_simple_kept_chain():
    """[DERIVED] Two efficient strategies both survive with the
    incremental ratio on the second."""
    table = icer_analysis([_report("A", 100.0, 1000.0),
                           _report("B", 200.0, 1500.0)])
    assert table.kept == ["A", "B"]
    rows = {r.strategy: r for r in table.rows}
    assert rows["A"].icer == pytest.approx(10.0)
    assert rows["B"].icer == pytest.approx(5.0)
    assert not table.eliminations


def test_icer_negative_increment_eliminates_first():
    """[DERIVED] Cheaper-and-better second strategy dominates the first."""
    table = icer_analysis([_report("A", 100.0, 1000.0),
                           _report("B", 200.0, 900.0)])
    assert table.kept == ["B"]
    assert table.eliminations[0][1] == "A"


def test_icer_expensive_increment_eliminates_second():
    """[DERIVED] An incremental ratio above the first strategy's own
    ratio removes the second."""
    table = icer_analysis([_report("A", 100.0, 1000.0),
                           _report("B", 101.0, 5000.0),
                           _report("C", 300.0, 1200.0)])
    assert "B" not in table.kept
    assert table.eliminations[0][1] == "B"


def test_icer_equivalent_strategies_grouped():
    """[TRIVIAL] Identical cost and effect are reported as equivalent."""
    table = icer_analysis([_report("A", 100.0, 1000.0),
                           _report("A2", 100.0, 1000.0),
                           _report("B", 200.0, 1500.0)])
    assert ["A", "A2"] in table.equivalent
    assert "A" in table.kept and "A2" not in table.kept


def test_icer_same_effect_higher_cost_dominated():
    """[TRIVIAL] Equal effect at higher cost is strongly dominated."""
    table = icer_analysis([_report("A", 100.0, 2000.0),
                           _report("B", 100.0, 1000.0),
                           _report("C", 300.0, 2500.0)])
    assert "A" not in table.kept
    reason = [why for _, name, why in table.eliminations if name == "A"]
    assert reason and "same effect" in reason[0]


def test_icer_documented_cost_table(table5):
    """[PAPER] The bundled cost table reproduces the documented chain."""
    rows = table5.config["icer"]["strategies"]
    reports = [_report(r["name"], r["averted"], r["cost"]) for r in rows]
    table = icer_analysis(reports)
    assert [name for _, name, _ in table.eliminations] == ["Z4", "Z2", "Z3"]
    assert table.kept == ["Z1"]
    assert table.equivalent == [["Z1", "Z"]]
