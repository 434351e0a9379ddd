"""Dense two-phase simplex over exact rationals.

Bland's rule throughout, so no cycling and no tolerances.  Sizes here
are tiny (tens of rows), a tableau is plenty.
"""

from fractions import Fraction


OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def _pivot(T, basis, row, col):
    piv = T[row][col]
    T[row] = [v / piv for v in T[row]]
    for i, r in enumerate(T):
        if i != row and r[col] != 0:
            f = r[col]
            T[i] = [a - f * b for a, b in zip(r, T[row])]
    basis[row] = col


def _run(T, basis, cost, ncols):
    """Minimize cost (list over columns) given tableau T (rows = A|b)
    with a feasible basis.  Returns status; T/basis updated in place."""
    m = len(T)
    while True:
        # reduced costs
        y = [cost[basis[i]] for i in range(m)]
        red = list(cost[:ncols])
        for i in range(m):
            if y[i] != 0:
                for j in range(ncols):
                    red[j] -= y[i] * T[i][j]
        enter = None
        for j in range(ncols):
            if red[j] < 0:
                enter = j
                break
        if enter is None:
            return OPTIMAL
        leave = None
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best is None or ratio < best or \
                        (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return UNBOUNDED
        _pivot(T, basis, leave, enter)


def solve_eq(c, A, b):
    """min c.x subject to A x = b, x >= 0.  Exact rationals.
    Returns (status, x, objective)."""
    m = len(A)
    n = len(c)
    T = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        T.append(row + [Fraction(0)] * m + [rhs])
    for i in range(m):
        T[i][n + i] = Fraction(1)
    basis = [n + i for i in range(m)]
    ncols = n + m
    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    status = _run(T, basis, phase1, ncols)
    assert status == OPTIMAL  # phase 1 is bounded below by 0
    obj1 = sum(T[i][-1] for i in range(m) if basis[i] >= n)
    if obj1 > 0:
        return INFEASIBLE, None, None
    # drive artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            for j in range(n):
                if T[i][j] != 0:
                    _pivot(T, basis, i, j)
                    break
    # drop rows still basic in an artificial (redundant constraints)
    keep = [i for i in range(m) if basis[i] < n]
    T = [T[i][:n] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    phase2 = [Fraction(v) for v in c]
    status = _run(T, basis, phase2, n)
    if status != OPTIMAL:
        return status, None, None
    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        x[bi] = T[i][-1]
    obj = sum(ci * xi for ci, xi in zip(phase2, x))
    return OPTIMAL, x, obj


class LinearProgram:
    """min c.x with rows  a.x <= b / a.x = b  and bounds lb <= x <= ub
    (lb/ub may be None for free sides).  Converted to standard form by
    splitting free directions and adding slacks."""

    def __init__(self, nvars):
        self.nvars = nvars
        self.obj = [Fraction(0)] * nvars
        self.rows = []   # (coeffs dict, sense, rhs) with sense in {"<=", "=", ">="}
        self.lb = [None] * nvars
        self.ub = [None] * nvars

    def set_objective(self, coeffs):
        for j, v in coeffs.items():
            self.obj[j] = Fraction(v)

    def add(self, coeffs, sense, rhs):
        self.rows.append(({j: Fraction(v) for j, v in coeffs.items()},
                          sense, Fraction(rhs)))

    def set_bounds(self, j, lb=None, ub=None):
        self.lb[j] = None if lb is None else Fraction(lb)
        self.ub[j] = None if ub is None else Fraction(ub)

    def solve(self):
        """Returns (status, x, objective) with x in original variables."""
        # variable mapping: x_j = lb_j + p_j        (lb finite)
        #                   x_j = ub_j - q_j        (only ub finite)
        #                   x_j = p_j - q_j         (both free)
        rows = list(self.rows)
        cols = []   # one or two standard-form columns per variable
        shift = [Fraction(0)] * self.nvars
        colmap = []
        for j in range(self.nvars):
            if self.lb[j] is not None:
                shift[j] = self.lb[j]
                colmap.append([(len(cols), 1)])
                cols.append(j)
                if self.ub[j] is not None:
                    rows.append(({j: Fraction(1)}, "<=", self.ub[j]))
            elif self.ub[j] is not None:
                shift[j] = self.ub[j]
                colmap.append([(len(cols), -1)])
                cols.append(j)
            else:
                colmap.append([(len(cols), 1), (len(cols) + 1, -1)])
                cols.append(j)
                cols.append(j)
        n0 = len(cols)
        # build equality system with slacks
        A, b = [], []
        nslack = sum(1 for r in rows if r[1] != "=")
        si = 0
        for coeffs, sense, rhs in rows:
            row = [Fraction(0)] * (n0 + nslack)
            rr = rhs
            for j, v in coeffs.items():
                rr -= v * shift[j]
                for col, sgn in colmap[j]:
                    row[col] += sgn * v
            if sense == "<=":
                row[n0 + si] = Fraction(1)
                si += 1
            elif sense == ">=":
                row[n0 + si] = Fraction(-1)
                si += 1
            A.append(row)
            b.append(rr)
        c = [Fraction(0)] * (n0 + nslack)
        for j in range(self.nvars):
            for col, sgn in colmap[j]:
                c[col] += sgn * self.obj[j]
        status, xs, _ = solve_eq(c, A, b)
        if status != OPTIMAL:
            return status, None, None
        x = list(shift)
        for j in range(self.nvars):
            for col, sgn in colmap[j]:
                x[j] += sgn * xs[col]
        obj = sum(self.obj[j] * x[j] for j in range(self.nvars))
        return OPTIMAL, x, obj
