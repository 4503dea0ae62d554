"""Dense revised-simplex solver for the split-variable flat-norm LP.

The instance solved is

    min  w_r . (r+ + r-) + w_q . (q+ + q-)
    s.t. (r+ - r-) + D (q+ - q-) = b,   all variables >= 0,

whose identity start (r columns) makes phase one unnecessary.  Costs are
nonnegative, so the problem is never unbounded; an unbounded ray or a pivot
stall therefore signals a broken instance and raises.
"""

from __future__ import annotations

import numpy as np

from .errors import FlatNormError

ENTER_TOL = 1e-9
PIVOT_TOL = 1e-11
REFACTOR_EVERY = 200


def solve_split_lp(w_r: np.ndarray, w_q: np.ndarray, D: np.ndarray,
                   b: np.ndarray, max_iter: int | None = None):
    """Solve the LP above; returns (value, r, q, iterations)."""
    m = len(b)
    p = D.shape[1] if D.size else 0
    w_r = np.asarray(w_r, dtype=float)
    w_q = np.asarray(w_q, dtype=float)
    b = np.asarray(b, dtype=float)
    nvar = 2 * m + 2 * p
    cost = np.concatenate([w_r, w_r, w_q, w_q])
    if max_iter is None:
        max_iter = 20000 + 60 * (m + p)

    def column(j: int) -> np.ndarray:
        if j < m:
            col = np.zeros(m)
            col[j] = 1.0
        elif j < 2 * m:
            col = np.zeros(m)
            col[j - m] = -1.0
        elif j < 2 * m + p:
            col = D[:, j - 2 * m].astype(float)
        else:
            col = -D[:, j - 2 * m - p].astype(float)
        return col

    basis = np.where(b >= 0, np.arange(m), np.arange(m) + m).astype(np.int64)
    binv = np.diag(np.where(b >= 0, 1.0, -1.0))
    xb = np.abs(b).astype(float)

    in_basis = np.zeros(nvar, dtype=bool)
    in_basis[basis] = True

    bland = False
    stall = 0
    last_obj = np.inf
    reduced = np.empty(nvar)

    def refactor():
        nonlocal binv
        bmat = np.column_stack([column(j) for j in basis])
        try:
            binv = np.linalg.inv(bmat)
        except np.linalg.LinAlgError as exc:
            raise FlatNormError("singular basis during refactorization") from exc

    for it in range(max_iter):
        y = binv.T @ cost[basis]
        np.subtract(w_r, y, out=reduced[:m])
        np.add(w_r, y, out=reduced[m:2 * m])
        if p:
            u = D.T @ y
            np.subtract(w_q, u, out=reduced[2 * m:2 * m + p])
            np.add(w_q, u, out=reduced[2 * m + p:])
        reduced[in_basis] = 0.0

        if bland:
            cand = np.flatnonzero(reduced < -ENTER_TOL)
            if cand.size == 0:
                break
            enter = int(cand[0])
        else:
            enter = int(np.argmin(reduced))
            if reduced[enter] >= -ENTER_TOL:
                break

        direction = binv @ column(enter)
        pos = direction > PIVOT_TOL
        if not np.any(pos):
            raise FlatNormError("unbounded LP: the complex is inconsistent")
        ratios = np.full(m, np.inf)
        ratios[pos] = xb[pos] / direction[pos]
        theta = ratios.min()
        leave_rows = np.flatnonzero(ratios <= theta + 1e-15)
        leave = int(leave_rows[np.argmin(basis[leave_rows])])

        xb = xb - theta * direction
        xb[leave] = theta
        xb = np.maximum(xb, 0.0)
        piv = direction[leave]
        row = binv[leave] / piv
        binv = binv - np.outer(direction, row)
        binv[leave] = row
        in_basis[basis[leave]] = False
        in_basis[enter] = True
        basis[leave] = enter

        obj = float(cost[basis] @ xb)
        if obj < last_obj - 1e-12:
            last_obj = obj
            stall = 0
        else:
            stall += 1
            if stall > 200 and not bland:
                bland = True
        if (it + 1) % REFACTOR_EVERY == 0:
            refactor()
            xb = np.maximum(binv @ b, 0.0)
    else:
        raise FlatNormError("simplex iteration cap reached")

    x = np.zeros(nvar)
    x[basis] = xb
    value = float(cost @ x)
    r = x[:m] - x[m:2 * m]
    q = x[2 * m:2 * m + p] - x[2 * m + p:]
    return value, r, q, it + 1
