"""Shared generators and invariant checkers for the test suite."""

from fractions import Fraction

from chdiv.core import (Instance, Valuation, Block, Solution, PLUS, MINUS,
                        balance, verify)
from chdiv import greedy


HALF = Fraction(1, 2)


def random_single_block_instance(rng, n, M=64):
    """n single-block agents with endpoints on the 1/M grid."""
    agents = []
    for _ in range(n):
        a = rng.randrange(0, M)
        b = rng.randrange(a + 1, M + 1)
        left, right = Fraction(a, M), Fraction(b, M)
        agents.append(Valuation([Block(left, right, 1 / (right - left))]))
    return Instance(agents, k=2)


def random_dblock_instance(rng, n, d=3, M=64):
    """n agents with up to d equal-height blocks each."""
    agents = []
    for _ in range(n):
        j = rng.randrange(1, d + 1)
        pts = sorted(rng.sample(range(M + 1), 2 * j))
        blocks = []
        for t in range(j):
            l, r = Fraction(pts[2 * t], M), Fraction(pts[2 * t + 1], M)
            if r > l:
                blocks.append((l, r))
        if not blocks:
            blocks = [(Fraction(0), Fraction(1))]
        total = sum(r - l for l, r in blocks)
        agents.append(Valuation([Block(l, r, 1 / total) for l, r in blocks]))
    return Instance(agents, k=2)


def alternating_solution(cuts):
    labels = [PLUS if i % 2 == 0 else MINUS for i in range(len(cuts) + 1)]
    return Solution(cuts, labels)


def _label_masses_on(v, cuts, lo, hi):
    """(plus, minus) mass of v on [lo, hi] under alternating labels
    starting with '+' at 0."""
    cuts = sorted(cuts)
    edges = [lo] + [c for c in cuts if lo < c < hi] + [hi]
    plus = minus = Fraction(0)
    for a, b in zip(edges, edges[1:]):
        m = v.mass_between(a, b)
        below = sum(1 for c in cuts if c <= a)
        if below % 2 == 0:
            plus += m
        else:
            minus += m
    return plus, minus


def check_greedy_invariants(inst):
    """Run the greedy solver and assert its step invariants:
    - every previously processed agent stays 1/2-satisfied after each
      later step;
    - right after an agent's own step, every reserved region contained
      in its block has value at most 1/2 for it, and every reserved
      region straddling a block endpoint has label imbalance at most
      1/4 for it;
    - every reserved region carries equal lengths of the two labels;
    - no cut ever lands strictly inside a pre-existing reserved region;
    - at most one cut per agent overall.
    Returns the solution."""
    trace = []
    sol = greedy.solve_half(inst, trace=trace)
    assert len(sol.cuts) <= inst.n
    rep = verify(inst, sol, HALF)
    assert rep.satisfied, rep.max_discrepancy
    processed = []
    prev_cuts, prev_rrs = set(), []
    for snap in trace:
        i = snap["agent"]
        processed.append(i)
        cuts = snap["cuts"]
        rrs = snap["rrs"]
        cur = alternating_solution(cuts)
        for a in processed:
            b = balance(inst.agents[a], cur, inst.domain_right)
            assert abs(b) <= HALF, (a, b)
        v = inst.agents[i]
        blk = v.blocks[0]
        for l, r in rrs:
            # equal label lengths inside every reserved region
            pl, mn = _label_masses_on(
                Valuation([Block(0, inst.domain_right,
                                 Fraction(1, inst.domain_right))]),
                cuts, l, r)
            assert pl == mn, (l, r, pl, mn)
            if blk.left <= l and r <= blk.right:
                assert v.mass_between(l, r) <= HALF, (i, l, r)
            elif r > blk.left and l < blk.right:
                pm, mm = _label_masses_on(v, cuts, l, r)
                assert abs(pm - mm) <= Fraction(1, 4), (i, l, r, pm - mm)
        for c in set(cuts) - prev_cuts:
            for l, r in prev_rrs:
                assert not (l < c < r), (c, l, r)
        prev_cuts, prev_rrs = set(cuts), list(rrs)
    return sol
