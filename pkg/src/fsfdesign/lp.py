"""Dense simplex solver for small inequality-form linear programs.

Problems have the shape::

    minimize    c @ x
    subject to  A @ x <= b,   lo <= x <= hi

with a handful of variables and up to tens of thousands of rows.  The
solver works on the dual, ``min h @ y  s.t.  G.T @ y = -c, y >= 0``, whose
equality block has one row per primal variable, so every basis is a tiny
square matrix no matter how many constraints the primal carries.  Data are
equilibrated first and every basis solve is refined with extended-precision
residuals, because deep stopbands push optima down to ~1e-14 where plain
solves on ill-conditioned bases pick wrong pivots.  Primal values are the
simplex multipliers of the final basis.  Pivots favour well-conditioned
bases and fall back to Bland's smallest-index rule when progress stalls.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Infeasible, NoConvergence, Unbounded


@dataclass(frozen=True)
class LpProblem:
    """``min c@x  s.t.  a_ub@x <= b_ub,  bounds[i][0] <= x[i] <= bounds[i][1]``.

    Infinite bounds are allowed and simply produce no row.
    """

    c: np.ndarray
    a_ub: np.ndarray
    b_ub: np.ndarray
    bounds: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).ravel()
        a = np.asarray(self.a_ub, dtype=float).reshape(-1, c.size)
        b = np.asarray(self.b_ub, dtype=float).ravel()
        if c.size == 0:
            raise ValueError("LP needs at least one variable")
        if a.shape[0] != b.size:
            raise ValueError(f"{a.shape[0]} constraint rows but {b.size} right-hand sides")
        bounds = self.bounds
        if bounds is None:
            bounds = tuple((-np.inf, np.inf) for _ in range(c.size))
        if len(bounds) != c.size:
            raise ValueError("one (lo, hi) pair per variable is required")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("LP data must be finite")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "a_ub", a)
        object.__setattr__(self, "b_ub", b)
        object.__setattr__(self, "bounds", tuple((float(lo), float(hi)) for lo, hi in bounds))

    def stacked(self) -> tuple[np.ndarray, np.ndarray]:
        """All constraints, bound rows included, as ``G @ x <= h``."""
        rows, rhs = [self.a_ub], [self.b_ub]
        p = self.c.size
        for i, (lo, hi) in enumerate(self.bounds):
            if np.isfinite(lo):
                r = np.zeros(p)
                r[i] = -1.0
                rows.append(r[None])
                rhs.append(np.array([-lo]))
            if np.isfinite(hi):
                r = np.zeros(p)
                r[i] = 1.0
                rows.append(r[None])
                rhs.append(np.array([hi]))
        return np.vstack(rows), np.concatenate(rhs)


@dataclass(frozen=True)
class LpSolution:
    x: np.ndarray
    objective: float
    status: str
    active: tuple[int, ...]
    iterations: int


def _refined_solve(B: np.ndarray, rhs: np.ndarray, steps: int = 2) -> np.ndarray:
    """``B^-1 @ rhs`` polished by iterative refinement.

    Residuals are formed in extended precision where the platform has it,
    so the result stays accurate even for badly conditioned bases.
    """
    x = np.linalg.solve(B, rhs)
    Bl, rl = B.astype(np.longdouble), rhs.astype(np.longdouble)
    for _ in range(steps):
        r = (rl - Bl @ x.astype(np.longdouble)).astype(float)
        x = x + np.linalg.solve(B, r)
    return x


def _simplex(A: np.ndarray, b: np.ndarray, cost: np.ndarray, basis: list[int],
             tol: float, max_iter: int, stall: int = 50) -> tuple[list[int], int, bool]:
    """Revised simplex on ``min cost@y, A@y = b, y >= 0``.

    Pivots use the most negative reduced cost, and the ratio test breaks
    ties by the largest pivot, which keeps the basis well conditioned.  After ``stall`` consecutive degenerate pivots
    both choices switch to Bland's smallest-index rule until progress
    resumes, so the method cannot cycle.

    Returns (basis, iterations, unbounded).
    """
    it = degenerate = 0
    while it < max_iter:
        B = A[:, basis]
        yB = _refined_solve(B, b)
        pi = _refined_solve(B.T, cost[basis])
        reduced = cost - pi @ A
        reduced[basis] = 0.0
        candidates = np.flatnonzero(reduced < -tol)
        if candidates.size == 0:
            return basis, it, False
        bland = degenerate >= stall
        j = int(candidates[0] if bland else candidates[np.argmin(reduced[candidates])])
        d = _refined_solve(B, A[:, j])
        # every positive entry limits the step, else basics go negative
        pos = np.flatnonzero(d > 1e-13 * max(1.0, float(np.max(np.abs(d)))))
        if pos.size == 0:
            return basis, it, True
        ratios = np.maximum(yB[pos], 0.0) / d[pos]
        best = ratios.min()
        ties = pos[ratios <= best + 1e-14 * max(1.0, abs(best))]
        leave = min(ties, key=lambda r: basis[r]) if bland else int(ties[np.argmax(d[ties])])
        degenerate = degenerate + 1 if best <= 1e-14 * max(1.0, float(np.max(np.abs(yB)))) else 0
        basis[leave] = j
        it += 1
    raise NoConvergence(f"simplex exceeded {max_iter} pivots")


def solve_lp(problem: LpProblem, tol: float | None = None, max_iter: int = 100_000) -> LpSolution:
    """Optimal basic solution of ``problem``.

    Raises
    ------
    NoConvergence
        The pivot limit was hit or a basis became numerically singular.
    Infeasible
        No ``x`` satisfies the constraints.
    Unbounded
        The objective decreases without limit (or, for degenerate data, the
        dual has no feasible point).
    """
    try:
        return _solve(problem, tol, max_iter)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"singular simplex basis: {exc}") from exc


def _solve(problem: LpProblem, tol: float | None, max_iter: int) -> LpSolution:
    G, h = problem.stacked()
    c = problem.c
    p, m = c.size, G.shape[0]
    if m == 0:
        if np.any(c != 0):
            raise Unbounded("no constraints and a nonzero objective")
        return LpSolution(np.zeros(p), 0.0, "optimal", (), 0)

    scale = max(1.0, float(np.max(np.abs(h))), float(np.max(np.abs(G))))
    tol = 64 * np.finfo(float).eps * scale if tol is None else tol
    # rounding noise in the data would otherwise be pivoted on
    G = np.where(np.abs(G) <= tol, 0.0, G)
    # equilibrate: unit columns over the general rows, then unit rows
    k = problem.a_ub.shape[0]
    colmax = np.max(np.abs(G[:k]), axis=0) if k else np.ones(p)
    D = np.where(colmax > 0, 1.0 / np.where(colmax > 0, colmax, 1.0), 1.0)
    G, c = G * D, c * D
    rmax = np.max(np.abs(G), axis=1)
    rmax[rmax == 0] = 1.0
    G, h = G / rmax[:, None], h / rmax

    A = G.T.copy()
    b = -c.copy()
    sign = np.where(b < 0, -1.0, 1.0)
    A *= sign[:, None]
    b *= sign

    # phase I: artificial columns m..m+p-1 start as the basis
    A1 = np.hstack([A, np.eye(p)])
    cost1 = np.concatenate([np.zeros(m), np.ones(p)])
    basis = list(range(m, m + p))
    basis, it1, _ = _simplex(A1, b, cost1, basis, tol, max_iter)
    yB = np.linalg.solve(A1[:, basis], b)
    infeas = float(cost1[basis] @ yB)
    if infeas > 1e-9 * max(1.0, float(np.max(np.abs(b)))):
        raise Unbounded("dual infeasible: objective is unbounded over the constraints")

    # pivot leftover zero-level artificials out; drop rows that cannot be
    rows = list(range(p))
    for r in range(p):
        if basis[r] < m:
            continue
        Binv_row = np.linalg.solve(A1[:, basis].T, np.eye(p)[r])
        alpha = Binv_row @ A
        alpha[[bj for bj in basis if bj < m]] = 0.0
        cand = np.flatnonzero(np.abs(alpha) > 1e-9)
        if cand.size:
            basis[r] = int(cand[0])
        else:
            rows.remove(r)
    keep = [basis[r] for r in range(p) if r in rows]
    A2, b2 = A[rows], b[rows]

    basis2, it2, dual_unbounded = _simplex(A2, b2, h, keep, tol, max_iter)
    if dual_unbounded:
        raise Infeasible("constraints admit no feasible point")

    active = sorted(basis2)
    Gb, hb = G[active], h[active]
    if len(active) == p:
        x = _refined_solve(Gb, hb)
    else:
        x = np.linalg.lstsq(Gb, hb, rcond=None)[0]
    x = x * D
    return LpSolution(x, float(problem.c @ x), "optimal", tuple(active), it1 + it2)

