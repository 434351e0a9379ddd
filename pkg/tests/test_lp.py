import random
from fractions import Fraction

import pytest

from chdiv.core import Instance, Valuation, Block, Solution, PLUS, MINUS, verify
from chdiv.lp import (breakpoints, midpoint_solution, SlotAssignment,
                      lp_feasible, solve_with_budget, refine_exact)
from chdiv.simplex import LinearProgram, OPTIMAL, INFEASIBLE, UNBOUNDED
from conftest import random_single_block_instance, random_dblock_instance


F = Fraction


def two_agent(b1, b2):
    return Instance([Valuation([Block(*b1)]), Valuation([Block(*b2)])], k=2)


# --- simplex ---------------------------------------------------------------


def test_simplex_minimizes_with_bounds():
    lp = LinearProgram(1)
    lp.set_objective({0: 1})
    lp.set_bounds(0, 2, 10)
    status, x, z = lp.solve()
    assert status == OPTIMAL and x[0] == 2 and z == 2


def test_simplex_equality_system():
    # x + y = 1, x - y = 1/3  ->  x = 2/3, y = 1/3
    lp = LinearProgram(2)
    lp.add({0: 1, 1: 1}, "=", 1)
    lp.add({0: 1, 1: -1}, "=", F(1, 3))
    status, x, _ = lp.solve()
    assert status == OPTIMAL
    assert x[0] == F(2, 3) and x[1] == F(1, 3)


def test_simplex_detects_infeasibility():
    lp = LinearProgram(1)
    lp.set_bounds(0, 0, 1)
    lp.add({0: 1}, ">=", 2)
    status, _, _ = lp.solve()
    assert status == INFEASIBLE


def test_simplex_detects_unboundedness():
    lp = LinearProgram(1)
    lp.set_objective({0: -1})
    lp.set_bounds(0, 0, None)
    status, _, _ = lp.solve()
    assert status == UNBOUNDED


# --- breakpoints and midpoints ----------------------------------------------


def test_breakpoints_examples():
    assert breakpoints(two_agent((0, F(1, 2), 2), (F(1, 2), 1, 2))) \
        == [0, F(1, 2), 1]
    assert breakpoints(two_agent((F(1, 4), F(3, 4), 2), (F(1, 2), 1, 2))) \
        == [F(1, 4), F(1, 2), F(3, 4), 1]
    assert breakpoints(Instance([Valuation([Block(0, 1, 1)])])) == [0, 1]


def test_midpoint_solution_examples():
    inst = Instance([Valuation([Block(0, 1, 1)])])
    assert midpoint_solution(inst).cuts == (F(1, 2),)
    inst = two_agent((0, F(1, 2), 2), (F(1, 2), 1, 2))
    sol = midpoint_solution(inst)
    assert sol.cuts == (F(1, 4), F(3, 4))
    assert sol.labels == (PLUS, MINUS, PLUS)


def test_midpoint_solution_is_exact_and_small():
    rng = random.Random(31)
    for _ in range(20):
        inst = random_single_block_instance(rng, rng.randrange(1, 7))
        sol = midpoint_solution(inst)
        assert verify(inst, sol, 0).satisfied
        assert len(sol.cuts) <= 2 * inst.n - 1


def test_lp_feasible_full_subset_and_unique_cut():
    inst = Instance([Valuation([Block(0, 1, 1)])])
    grid = breakpoints(inst)
    pos = lp_feasible(inst, SlotAssignment(grid, [0]))
    assert pos == [F(1, 2)]


def test_lp_feasible_every_cell_has_the_midpoint_witness():
    inst = two_agent((0, F(1, 2), 2), (F(1, 2), 1, 2))
    grid = breakpoints(inst)
    pos = lp_feasible(inst, SlotAssignment(grid, [0, 1]))
    assert pos is not None
    sol = Solution(sorted(pos), [PLUS, MINUS, PLUS])
    assert verify(inst, sol, 0).satisfied


def test_lp_feasible_reports_infeasibility():
    # one cut in the left cell can never halve the right-cell agent
    inst = two_agent((0, F(1, 2), 2), (F(1, 2), 1, 2))
    grid = breakpoints(inst)
    assert lp_feasible(inst, SlotAssignment(grid, [0])) is None


def test_solve_with_budget_ell1_always_succeeds():
    rng = random.Random(37)
    for _ in range(10):
        inst = random_dblock_instance(rng, rng.randrange(1, 4), d=2)
        sol = solve_with_budget(inst, 1)
        assert sol is not None
        assert verify(inst, sol, 0).satisfied


def test_solve_with_budget_tight_budget():
    v = Valuation([Block(0, 1, 1)])
    inst = Instance([v, v])
    sol = solve_with_budget(inst, 3)      # budget 1
    assert sol is not None and sol.cuts == (F(1, 2),)


def test_solve_with_budget_certifies_impossibility():
    inst = two_agent((0, F(1, 2), 2), (F(1, 2), 1, 2))
    assert solve_with_budget(inst, 3) is None     # budget 1


def test_refine_recovers_midpoint():
    inst = Instance([Valuation([Block(0, 1, 1)])])
    approx = Solution([F(501, 1000)], [PLUS, MINUS])
    refined, z = refine_exact(inst, approx)
    assert z == 0 and refined.cuts == (F(1, 2),)


def test_refine_keeps_exact_solutions_exact():
    inst = two_agent((0, F(1, 2), 2), (F(1, 2), 1, 2))
    exact = midpoint_solution(inst)
    refined, z = refine_exact(inst, exact)
    assert z == 0
    assert verify(inst, refined, 0).satisfied


def test_refine_three_labels():
    inst = Instance([Valuation([Block(0, 1, 1)])], k=3)
    approx = Solution([F(333, 1000), F(667, 1000)], ["A", "B", "C"])
    refined, z = refine_exact(inst, approx)
    assert z == 0
    assert refined.cuts == (F(1, 3), F(2, 3))


def test_refine_never_worsens_the_discrepancy():
    rng = random.Random(41)
    for _ in range(10):
        inst = random_single_block_instance(rng, rng.randrange(1, 4))
        sol = midpoint_solution(inst)
        jitter = [c + F(rng.randrange(-100, 101), 10 ** 7)
                  for c in sol.cuts]
        approx = Solution(sorted(jitter), sol.labels)
        before = verify(inst, approx, 1).max_discrepancy
        refined, z = refine_exact(inst, approx)
        assert z <= before
        assert verify(inst, refined, z).satisfied
