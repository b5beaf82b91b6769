"""Per-step SPD solves of (sigma*I - kappa*L) x = r.

L is the (negative definite) discrete Laplacian, so the shifted operator
is symmetric positive definite for sigma, kappa > 0. The workhorse is a
matrix-free conjugate gradient iteration with Jacobi scaling; a dense
direct factorization backs it as an oracle on small grids.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spatial import DENSE_LIMIT, SpaceGrid, apply_laplacian, assemble_dense, check_field


@dataclass(frozen=True)
class ShiftedOperator:
    """sigma * I - kappa * L on the interior of ``grid``."""

    sigma: float
    kappa: float
    grid: SpaceGrid

    def __post_init__(self):
        if self.sigma <= 0.0 or self.kappa < 0.0:
            raise ValueError(
                f"operator must be SPD: sigma={self.sigma}, kappa={self.kappa}"
            )

    def apply(self, v: np.ndarray) -> np.ndarray:
        if self.kappa == 0.0:
            return self.sigma * check_field(v, self.grid)
        return self.sigma * v - self.kappa * apply_laplacian(v, self.grid)

    def diagonal(self) -> float:
        """Constant diagonal entry, used for Jacobi scaling."""
        g = self.grid
        return self.sigma + 2.0 * self.kappa * (1.0 / g.hx**2 + 1.0 / g.hy**2)

    def as_dense(self) -> np.ndarray:
        n = self.grid.n_interior
        return self.sigma * np.eye(n) - self.kappa * assemble_dense(self.grid)


class SolveFailure(RuntimeError):
    """CG did not reach the requested tolerance within max_iter.

    Carries the best iterate seen and its residual norm.
    """

    def __init__(self, message, best_x, residual, iterations):
        super().__init__(message)
        self.best_x = best_x
        self.residual = residual
        self.iterations = iterations


@dataclass
class CGResult:
    x: np.ndarray
    iterations: int
    residuals: list[float] = field(default_factory=list)


def cg_solve(op: ShiftedOperator, rhs: np.ndarray, tol: float = 1e-10,
             max_iter: int | None = None, x0: np.ndarray | None = None) -> CGResult:
    """Jacobi-scaled conjugate gradients to relative residual ``tol``.

    Parameters
    ----------
    op : ShiftedOperator
        SPD operator to invert.
    rhs : ndarray
        Right-hand side on the interior nodes.
    tol : float
        Relative 2-norm residual target, in (0, 1).
    max_iter : int, optional
        Iteration cap; defaults to 10 * (Nx + Ny).
    x0 : ndarray, optional
        Warm start (default zero).

    Returns
    -------
    CGResult
        Solution, iterations used, and the residual-norm history
        (initial residual first, then one entry per iteration).

    Raises
    ------
    SolveFailure
        If the tolerance is not met within ``max_iter`` iterations.
    """
    rhs = check_field(rhs, op.grid)
    if not 0.0 < tol < 1.0:
        raise ValueError(f"tol must lie in (0, 1), got {tol}")
    if max_iter is None:
        max_iter = 10 * (op.grid.nx + op.grid.ny)

    b_norm = float(np.linalg.norm(rhs))
    if b_norm == 0.0:
        return CGResult(x=np.zeros_like(rhs), iterations=0, residuals=[0.0])

    x = np.zeros_like(rhs) if x0 is None else check_field(x0, op.grid).copy()
    r = rhs - op.apply(x)
    d = op.diagonal()
    z = r / d
    rz = float(r @ z)
    p = z.copy()

    res = float(np.linalg.norm(r))
    history = [res]
    best_x, best_res = x.copy(), res
    k = 0
    while res > tol * b_norm:
        if k >= max_iter:
            raise SolveFailure(
                f"CG stalled at relative residual {res / b_norm:.3e} "
                f"after {k} iterations (target {tol:g})",
                best_x=best_x, residual=best_res, iterations=k,
            )
        q = op.apply(p)
        alpha = rz / float(p @ q)
        x += alpha * p
        r -= alpha * q
        res = float(np.linalg.norm(r))
        history.append(res)
        if res < best_res:
            best_res, best_x = res, x.copy()
        z = r / d
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
        k += 1
    return CGResult(x=x, iterations=k, residuals=history)


def direct_solve_small(op: ShiftedOperator, rhs: np.ndarray) -> np.ndarray:
    """Dense factorization solve; oracle for grids up to DENSE_LIMIT nodes."""
    rhs = check_field(rhs, op.grid)
    if op.grid.n_interior > DENSE_LIMIT:
        raise ValueError(
            f"direct solve limited to {DENSE_LIMIT} interior nodes, "
            f"got {op.grid.n_interior}"
        )
    return np.linalg.solve(op.as_dense(), rhs)
