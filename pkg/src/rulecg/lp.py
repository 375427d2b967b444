"""Dense tableau simplex for the restricted master LPs.

Solves min c.x subject to A x = b, x >= 0 for problems that come with a
ready-made identity basis (the master LP's slack block), so no phase-1 is
required. Pivoting is Dantzig's rule with smallest-index tie-breaks,
falling back to Bland's rule after a run of degenerate pivots; every
choice is deterministic, so repeated solves of the same problem yield
bit-identical primal and dual solutions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverError

PIVOT_TOL = 1e-9
DEGENERATE_STALL_LIMIT = 200


@dataclass
class LpSolution:
    x: np.ndarray
    objective: float
    duals: np.ndarray
    n_pivots: int


def simplex_min(
    c: np.ndarray,
    A: np.ndarray,
    b: np.ndarray,
    basis: list[int],
    max_pivots: int | None = None,
) -> LpSolution:
    """Minimize c.x s.t. A x = b, x >= 0 from a starting identity basis.

    ``basis`` must index columns of A that form the identity matrix and a
    feasible start (b >= 0). Duals are recovered from the reduced costs of
    those initial basis columns.
    """
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    m, n = A.shape
    if b.shape != (m,) or c.shape != (n,) or len(basis) != m:
        raise SolverError("inconsistent LP dimensions")
    if (b < 0).any():
        raise SolverError("initial basis is infeasible (b must be >= 0)")

    T = A.copy()
    rhs = b.copy()
    basis = list(basis)
    init_basis = list(basis)
    reduced = c - c[basis] @ T
    objective = float(c[basis] @ rhs)

    if max_pivots is None:
        max_pivots = 50 * (m + n) + 1000

    bland = False
    stall = 0
    n_pivots = 0
    while True:
        candidates = np.flatnonzero(reduced < -PIVOT_TOL)
        if candidates.size == 0:
            break
        if bland:
            enter = int(candidates[0])
        else:
            # argmin returns the first minimum, i.e. the smallest index
            enter = int(candidates[np.argmin(reduced[candidates])])

        col = T[:, enter]
        rows = np.flatnonzero(col > PIVOT_TOL)
        if rows.size == 0:
            raise SolverError("LP is unbounded below")
        ratios = rhs[rows] / col[rows]
        best = ratios.min()
        ties = rows[ratios == best]
        # leaving variable: smallest basic-variable index among tied rows
        leave_row = int(ties[np.argmin(np.array([basis[i] for i in ties]))])

        pivot = T[leave_row, enter]
        T[leave_row] /= pivot
        rhs[leave_row] /= pivot
        factors = T[:, enter].copy()
        factors[leave_row] = 0.0
        T -= np.outer(factors, T[leave_row])
        rhs -= factors * rhs[leave_row]
        objective += reduced[enter] * rhs[leave_row]
        reduced = reduced - reduced[enter] * T[leave_row]
        basis[leave_row] = enter

        n_pivots += 1
        if rhs[leave_row] <= PIVOT_TOL:
            stall += 1
            if stall > DEGENERATE_STALL_LIMIT:
                bland = True
        else:
            stall = 0
        if n_pivots > max_pivots:
            raise SolverError(f"simplex exceeded {max_pivots} pivots")

    x = np.zeros(n)
    x[basis] = np.maximum(rhs, 0.0)
    duals = c[init_basis] - reduced[init_basis]
    return LpSolution(x=x, objective=objective, duals=duals, n_pivots=n_pivots)
