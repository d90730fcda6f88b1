"""Exact linear maximization over {x >= 0 : Ax <= b} in Fraction arithmetic.

Dense tableau simplex with Bland's rule, which cannot cycle, so termination
is guaranteed.  Sized for the winner-subset pricing oracle: a handful of
variables and constraints, where exactness matters and speed does not.
"""

from fractions import Fraction

from .errors import InputError

ZERO = Fraction(0)
ONE = Fraction(1)


def maximize(objective, rows, bounds) -> tuple[Fraction, list[Fraction]]:
    """Maximize objective . x subject to rows[i] . x <= bounds[i], x >= 0.

    All bounds must be nonnegative (the origin is then a feasible basis and
    no phase-1 is needed).  Returns (optimal value, an optimal vertex x).
    Raises InputError on malformed input or an unbounded program.
    """
    objective = [Fraction(v) for v in objective]
    bounds = [Fraction(v) for v in bounds]
    n = len(objective)
    m = len(rows)
    if len(bounds) != m:
        raise InputError(f"{m} constraint rows but {len(bounds)} bounds")
    if any(b < 0 for b in bounds):
        raise InputError("bounds must be nonnegative for the slack-basis start")

    # Columns: n originals, m slacks, then the right-hand side.
    tableau = []
    for i, row in enumerate(rows):
        row = [Fraction(v) for v in row]
        if len(row) != n:
            raise InputError(f"constraint row {i} has {len(row)} coefficients, want {n}")
        slack = [ONE if j == i else ZERO for j in range(m)]
        tableau.append(row + slack + [bounds[i]])
    # Reduced-cost row; its rhs entry accumulates -(objective value).
    cost = objective + [ZERO] * (m + 1)
    basis = [n + i for i in range(m)]

    while True:
        entering = next((j for j in range(n + m) if cost[j] > 0), None)
        if entering is None:
            break
        candidates = [
            (tableau[i][-1] / tableau[i][entering], basis[i], i)
            for i in range(m)
            if tableau[i][entering] > 0
        ]
        if not candidates:
            raise InputError("linear program is unbounded")
        _, _, r = min(candidates)  # least ratio, then least basis index (Bland)

        pivot = tableau[r][entering]
        tableau[r] = [v / pivot for v in tableau[r]]
        for i in range(m):
            if i != r and tableau[i][entering] != 0:
                factor = tableau[i][entering]
                tableau[i] = [a - factor * b for a, b in zip(tableau[i], tableau[r])]
        if cost[entering] != 0:
            factor = cost[entering]
            cost = [a - factor * b for a, b in zip(cost, tableau[r])]
        basis[r] = entering

    x = [ZERO] * n
    for i, variable in enumerate(basis):
        if variable < n:
            x[variable] = tableau[i][-1]
    return -cost[-1], x
