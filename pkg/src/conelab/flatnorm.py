"""Flat distance between chains, solved as an LP with an integer brute-force oracle.

The distance between k-chains T and S on a common complex is the minimum of
mass(R) + mass(Q) over decompositions T - S = R + boundary(Q), with R a k-chain
and Q a (k+1)-chain on the same complex.  Masses are measured inside the ball
B_R(0) when a ball radius is given (the constraint always holds on the whole
complex); weights are the ball-clipped simplex measures.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .currents import Chain, boundary, mass
from .errors import FlatNormError
from .lp import solve_split_lp

INTEGRALITY_TOL = 1e-6
FEASIBILITY_TOL = 1e-9
BRUTE_FORCE_STATE_CAP = 20_000_000


@dataclass
class FlatNormCertificate:
    """Minimizing pair witnessing a flat-distance value."""

    value: float
    R: Chain
    Q: Chain
    ball_radius: float | None
    integral: bool
    lp_value: float
    residual: float
    iterations: int

    def feasible(self, T: Chain, S: Chain, tol: float = FEASIBILITY_TOL) -> bool:
        """Re-check T - S = R + dQ independently of the solver."""
        gap = (T - S) - (self.R + boundary(self.Q))
        if self.integral:
            return gap.is_zero()
        return all(abs(c) <= tol for c in gap.coeffs.values())


def _ball_weights(complex, k: int, ball_radius: float | None) -> np.ndarray:
    if ball_radius is None:
        return complex.measures(k).copy()
    from .mesh import clip_measure_to_ball
    center = np.zeros(complex.ambient_dim)
    return np.array([clip_measure_to_ball(complex, k, i, center, ball_radius)
                     for i in range(complex.simplex_count(k))])


def flat_distance(T: Chain, S: Chain, ball_radius: float | None = None) -> FlatNormCertificate:
    """Flat distance with certificate; integral certificates are rounded exactly.

    Raises FlatNormError on dimension mismatch or when the complex carries no
    (k+1)-simplices to fill with.
    """
    if T.complex is not S.complex:
        raise FlatNormError("chains must share a complex")
    if T.dim != S.dim:
        raise FlatNormError("chain dimension mismatch")
    cx = T.complex
    k = T.dim
    if cx.simplex_count(k + 1) == 0:
        raise FlatNormError(f"complex has no {k + 1}-simplices to fill with")

    diff = T - S
    m = cx.simplex_count(k)
    b = np.zeros(m)
    for sid, c in diff.coeffs.items():
        b[sid] = c
    D = cx.boundary_matrix(k + 1).astype(float)
    w_r = _ball_weights(cx, k, ball_radius)
    w_q = _ball_weights(cx, k + 1, ball_radius)

    lp_value, r, q, iters = solve_split_lp(w_r, w_q, D, b)

    r_int = np.rint(r)
    q_int = np.rint(q)
    integral = (np.max(np.abs(r - r_int), initial=0.0) <= INTEGRALITY_TOL
                and np.max(np.abs(q - q_int), initial=0.0) <= INTEGRALITY_TOL)
    if integral:
        R = Chain(cx, k, {i: int(v) for i, v in enumerate(r_int) if v})
        Q = Chain(cx, k + 1, {i: int(v) for i, v in enumerate(q_int) if v})
        value = float(w_r @ np.abs(r_int) + w_q @ np.abs(q_int))
        residual = 0.0
    else:
        warnings.warn("flat-norm LP optimum is not integral; returning the "
                      "relaxed certificate", RuntimeWarning, stacklevel=2)
        R = Chain(cx, k, {i: int(v) for i, v in enumerate(np.rint(r)) if v})
        Q = Chain(cx, k + 1, {i: int(v) for i, v in enumerate(np.rint(q)) if v})
        value = lp_value
        residual = float(np.max(np.abs(b - r - D @ q), initial=0.0))

    cert = FlatNormCertificate(value=value, R=R, Q=Q, ball_radius=ball_radius,
                               integral=integral, lp_value=lp_value,
                               residual=residual, iterations=iters)
    if integral and not cert.feasible(T, S):
        raise FlatNormError("rounded certificate is infeasible")
    return cert


def trivial_certificate(T: Chain, S: Chain, ball_radius: float | None = None) -> FlatNormCertificate:
    """The no-filling certificate R = T - S, Q = 0 (an upper bound)."""
    diff = T - S
    value = mass(diff, None if ball_radius is None
                 else (np.zeros(T.complex.ambient_dim), ball_radius))
    return FlatNormCertificate(value=value, R=diff,
                               Q=Chain(T.complex, T.dim + 1, {}),
                               ball_radius=ball_radius, integral=True,
                               lp_value=value, residual=0.0, iterations=0)


def flat_distance_bruteforce(T: Chain, S: Chain, coeff_bound: int = 1,
                             ball_radius: float | None = None) -> float:
    """Exact minimum over integer fillings q with |q| <= coeff_bound, per entry.

    Only usable on small complexes: at most 14 (k+1)-simplices, bound <= 3,
    and at most ~2e7 enumerated states.
    """
    if T.complex is not S.complex or T.dim != S.dim:
        raise FlatNormError("chains must share a complex and dimension")
    cx = T.complex
    k = T.dim
    p = cx.simplex_count(k + 1)
    if p > 14 or coeff_bound > 3:
        raise FlatNormError("instance too large for brute force")
    states = (2 * coeff_bound + 1) ** p
    if states > BRUTE_FORCE_STATE_CAP:
        raise FlatNormError("instance too large for brute force")

    m = cx.simplex_count(k)
    b = np.zeros(m)
    for sid, c in (T - S).coeffs.items():
        b[sid] = c
    D = cx.boundary_matrix(k + 1).astype(float)
    w_r = _ball_weights(cx, k, ball_radius)
    w_q = _ball_weights(cx, k + 1, ball_radius)

    vals = np.arange(-coeff_bound, coeff_bound + 1, dtype=np.int64)
    best = np.inf
    chunk = 200_000
    base = len(vals)
    for start in range(0, states, chunk):
        idx = np.arange(start, min(start + chunk, states), dtype=np.int64)
        digits = np.empty((len(idx), p), dtype=np.int64)
        rem = idx.copy()
        for t in range(p):
            digits[:, t] = vals[rem % base]
            rem //= base
        r = b[None, :] - digits @ D.T
        cost = np.abs(r) @ w_r + np.abs(digits) @ w_q
        best = min(best, float(cost.min()))
    return best


def flat_converges(chains, limit: Chain, ball_radius: float | None = None) -> list[float]:
    """Per-element flat distances of a sequence to its limit chain."""
    return [flat_distance(c, limit, ball_radius).value for c in chains]


def metric_checks(chains, ball_radius=None, n_triples: int = 10, seed: int = 0):
    """Spot-check symmetry and the triangle inequality on random triples."""
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n_triples):
        i, j, l = rng.integers(0, len(chains), size=3)
        dij = flat_distance(chains[i], chains[j], ball_radius).value
        dji = flat_distance(chains[j], chains[i], ball_radius).value
        dil = flat_distance(chains[i], chains[l], ball_radius).value
        dlj = flat_distance(chains[l], chains[j], ball_radius).value
        rows.append({"symmetry_gap": abs(dij - dji),
                     "triangle_slack": dil + dlj - dij})
    return rows
