"""Exact consensus-halving via rational linear programming.

Three layers: the one-cut-per-cell midpoint construction, feasibility of
a prescribed cut/cell subset (2n - ell cuts), and refinement of an
approximate solution to an exact one with frozen combinatorics.
"""

from fractions import Fraction
import itertools

from .core import Instance, Solution, PLUS, MINUS, verify, rat
from .simplex import LinearProgram, OPTIMAL


def breakpoints(inst):
    """Sorted union of block endpoints; density is constant between
    consecutive points and zero outside [first, last]."""
    pts = set()
    for v in inst.agents:
        for b in v.blocks:
            pts.add(b.left)
            pts.add(b.right)
    return sorted(pts)


def midpoint_solution(inst):
    """One cut in the middle of every breakpoint cell, alternating
    labels: every agent's mass in every cell is split exactly in half,
    so the solution is exact (discrepancy 0) with m cuts."""
    pts = breakpoints(inst)
    cuts = [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    labels = [PLUS if i % 2 == 0 else MINUS for i in range(len(cuts) + 1)]
    return Solution(cuts, labels)


class SlotAssignment:
    """A subset S of breakpoint cells, one cut each, with alternating
    orientation and leftmost label "+"."""

    def __init__(self, grid, cells):
        self.grid = list(grid)            # breakpoints a_1..a_{m+1}
        self.cells = sorted(cells)        # indices into [0, m)
        m = len(self.grid) - 1
        if any(j < 0 or j >= m for j in self.cells):
            raise ValueError("cell index out of range")

    def cell_label(self, j):
        """Label of the cut-free part of cell j left of any cut in it."""
        below = sum(1 for s in self.cells if s < j)
        return PLUS if below % 2 == 0 else MINUS


def _cell_masses(v, grid):
    return [v.mass_between(a, b) for a, b in zip(grid, grid[1:])]


def _cell_density(v, grid, j):
    a, b = grid[j], grid[j + 1]
    return v.mass_between(a, b) / (b - a)


def lp_feasible(inst, slots):
    """Exact feasibility of placing one cut x_j in each chosen cell so
    that every agent is perfectly halved.  Returns the list of cut
    positions, or None."""
    grid = slots.grid
    cells = slots.cells
    var = {j: t for t, j in enumerate(cells)}
    lp = LinearProgram(len(cells))
    for j in cells:
        lp.set_bounds(var[j], grid[j], grid[j + 1])
    m = len(grid) - 1
    for v in inst.agents:
        masses = _cell_masses(v, grid)
        coeffs = {}
        const = Fraction(0)
        for j in range(m):
            sign = 1 if slots.cell_label(j) == PLUS else -1
            if j in var:
                # [a_j, x_j] keeps the incoming label, the rest flips
                dens = _cell_density(v, grid, j)
                # contribution: sign*(dens*(x - a_j)) - sign*(mass - dens*(x - a_j))
                coeffs[var[j]] = coeffs.get(var[j], Fraction(0)) + 2 * sign * dens
                const += -sign * masses[j] - 2 * sign * dens * grid[j]
            else:
                const += sign * masses[j]
        lp.add(coeffs, "=", -const)
    status, x, _ = lp.solve()
    if status != OPTIMAL:
        return None
    return [x[var[j]] for j in cells]


def _solution_from_cells(slots, positions):
    labels = [PLUS if i % 2 == 0 else MINUS
              for i in range(len(positions) + 1)]
    return Solution(sorted(positions), labels)


def solve_with_budget(inst, ell):
    """Exact consensus-halving with at most 2n - ell cuts, or None if no
    such solution exists.  Enumerates cell subsets lexicographically."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    grid = breakpoints(inst)
    m = len(grid) - 1
    budget = 2 * inst.n - ell
    if budget < 0:
        return None
    if m <= budget:
        return midpoint_solution(inst)
    for cells in itertools.combinations(range(m), budget):
        slots = SlotAssignment(grid, cells)
        pos = lp_feasible(inst, slots)
        if pos is not None:
            return _solution_from_cells(slots, pos)
    return None


def refine_exact(inst, approx, eps=None):
    """Turn an approximate solution into an exact one by re-optimizing
    the cut positions with frozen labels and frozen breakpoint cells:
    minimize z = max pairwise label discrepancy subject to each cut
    staying inside the cell of the grid it currently occupies and the
    cut order being preserved.  Returns (solution, z_star); z_star = 0
    means the result is exact."""
    grid = [Fraction(0)] + breakpoints(inst) + [inst.domain_right]
    grid = sorted(set(grid))
    labs = inst.labels()
    T = len(approx.cuts)
    # variables: cuts 0..T-1, z = T
    lp = LinearProgram(T + 1)
    lp.set_objective({T: 1})
    lp.set_bounds(T, 0, None)
    cell_of = []
    for t, x in enumerate(approx.cuts):
        j = _containing_cell(grid, x)
        cell_of.append(j)
        lp.set_bounds(t, grid[j], grid[j + 1])
    for t in range(T - 1):
        lp.add({t: 1, t + 1: -1}, "<=", 0)
    for v in inst.agents:
        # mass of label L as affine form over cut variables
        forms = {lab: _AffineForm() for lab in labs}
        edges = [(None, Fraction(0))] + [(t, None) for t in range(T)] \
            + [(None, inst.domain_right)]
        for seg in range(T + 1):
            lab = approx.labels[seg]
            lo_var, lo_const = edges[seg]
            hi_var, hi_const = edges[seg + 1]
            # mu([lo, hi]) = F(hi) - F(lo); F affine on each cut's cell
            if hi_var is None:
                forms[lab].const += v.mass_between(0, hi_const)
            else:
                forms[lab].add_cdf(v, grid, cell_of[hi_var], hi_var, +1)
            if lo_var is None:
                forms[lab].const -= v.mass_between(0, lo_const)
            else:
                forms[lab].add_cdf(v, grid, cell_of[lo_var], lo_var, -1)
        for l1, l2 in itertools.combinations(labs, 2):
            diff = forms[l1].minus(forms[l2])
            coeffs = dict(diff.coeffs)
            coeffs[T] = Fraction(-1)
            lp.add(coeffs, "<=", -diff.const)
            coeffs = {k: -cv for k, cv in diff.coeffs.items()}
            coeffs[T] = Fraction(-1)
            lp.add(coeffs, "<=", diff.const)
    status, x, z = lp.solve()
    if status != OPTIMAL:
        raise ValueError("refinement LP unsolvable: %s" % status)
    refined = Solution(sorted(x[:T]), approx.labels)
    return refined, z


class _AffineForm:
    def __init__(self):
        self.coeffs = {}
        self.const = Fraction(0)

    def add_cdf(self, v, grid, j, var, sign):
        """Add sign * mu([0, x_var]) where x_var lies in cell j:
        mu([0, x]) = mu([0, a_j]) + dens_j * (x - a_j)."""
        a = grid[j]
        dens = v.mass_between(grid[j], grid[j + 1]) / (grid[j + 1] - grid[j])
        self.const += sign * (v.mass_between(0, a) - dens * a)
        self.coeffs[var] = self.coeffs.get(var, Fraction(0)) + sign * dens
    def minus(self, other):
        out = _AffineForm()
        out.const = self.const - other.const
        out.coeffs = dict(self.coeffs)
        for k, cv in other.coeffs.items():
            out.coeffs[k] = out.coeffs.get(k, Fraction(0)) - cv
        return out


def _containing_cell(grid, x):
    for j in range(len(grid) - 1):
        if grid[j] <= x <= grid[j + 1]:
            if x < grid[j + 1] or j == len(grid) - 2:
                return j
    raise ValueError("cut %s outside grid" % x)
