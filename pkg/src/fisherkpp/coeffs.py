"""Coefficient triples (a, b, c) for one shifted-BDF2 IMEX step.

The time derivative at the shifted point t* = t_n + beta * (t_{n+1} - t_n)
is approximated by a three-node difference formula with weights ``a``;
the implicit value u(t*) by a two-node combination of (u^n, u^{n+1}) with
weights ``b``; the explicit value u(t*) by a two-node combination of
(u^{n-1}, u^n) with weights ``c``. Each weight set is the unique solution
of a small Vandermonde system in the node offsets from t*.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class CoefficientError(ValueError):
    """Inadmissible shift or node configuration."""


@dataclass(frozen=True)
class StepCoefficients:
    """One step's weight sets.

    Attributes
    ----------
    beta : float
        Shift parameter, > 1.
    a : (a0, a1, a2)
        Derivative weights for (u^{n-1}, u^n, u^{n+1}). When ``dt_scaled``
        is True they are in unit-step form and must be divided by the step
        size at use sites; otherwise they carry units of 1/time.
    b : (b0, b1)
        Implicit interpolation weights for (u^n, u^{n+1}).
    c : (c0, c1)
        Explicit extrapolation weights for (u^{n-1}, u^n).
    t_eval : float
        The evaluation time t*. For dt-scaled (uniform) coefficients this
        is the offset beta in unit-step coordinates; for nonuniform
        coefficients it is the absolute time.
    dt_scaled : bool
        True when ``a`` is in unit-step form (output of uniform_coeffs).
    """

    beta: float
    a: tuple[float, float, float]
    b: tuple[float, float]
    c: tuple[float, float]
    t_eval: float
    dt_scaled: bool


def _derivative_weights(d0: float, d1: float, d2: float) -> tuple[float, float, float]:
    # Cramer elimination of the 3x3 Vandermonde system in the offsets d_q:
    #   sum a_q = 0,  sum a_q d_q = 1,  sum a_q d_q^2 = 0.
    a0 = -(d1 + d2) / ((d1 - d0) * (d2 - d0))
    a1 = (d0 + d2) / ((d1 - d0) * (d2 - d1))
    a2 = -(d0 + d1) / ((d2 - d0) * (d2 - d1))
    return a0, a1, a2


def _interp_weights(dl: float, dr: float) -> tuple[float, float]:
    # 2x2 system: wl + wr = 1, wl*dl + wr*dr = 0.
    wl = dr / (dr - dl)
    return wl, 1.0 - wl


def uniform_coeffs(beta: float) -> StepCoefficients:
    """Weights for a uniform step, in unit-step (dt-scaled) form.

    The node offsets from t* are (-1-beta, -beta, 1-beta) in units of the
    step size; the returned ``a`` must be divided by the actual step at
    use sites.
    """
    if beta <= 1.0:
        raise CoefficientError(f"shift parameter must exceed 1, got beta={beta}")
    d0, d1, d2 = -1.0 - beta, -beta, 1.0 - beta
    a = _derivative_weights(d0, d1, d2)
    b0, b1 = _interp_weights(d1, d2)
    c0, c1 = _interp_weights(d0, d1)
    return StepCoefficients(
        beta=float(beta), a=a, b=(b0, b1), c=(c0, c1), t_eval=float(beta),
        dt_scaled=True,
    )


def _check_nodes(t_prev: float, t_curr: float, t_next: float, beta: float) -> float:
    if beta <= 1.0:
        raise CoefficientError(f"shift parameter must exceed 1, got beta={beta}")
    if not (t_prev < t_curr < t_next):
        raise CoefficientError(
            f"nodes must be strictly increasing, got ({t_prev}, {t_curr}, {t_next})"
        )
    return t_curr + beta * (t_next - t_curr)


def vandermonde_condition(t_prev: float, t_curr: float, t_next: float,
                          beta: float) -> float:
    """1-norm condition number of the 3x3 offset Vandermonde matrix."""
    t_star = _check_nodes(t_prev, t_curr, t_next, beta)
    d = np.array([t_prev, t_curr, t_next]) - t_star
    v = np.vstack([np.ones(3), d, d * d])
    return float(np.linalg.cond(v, 1))


def nonuniform_coeffs(t_prev: float, t_curr: float, t_next: float, beta: float,
                      cond_limit: float = 1e12) -> StepCoefficients:
    """Weights for one step over the node triple (t_prev, t_curr, t_next).

    The shifted evaluation time is t* = t_curr + beta * (t_next - t_curr),
    which reduces to (n + beta) * dt on a uniform grid. The ``a`` weights
    carry units of 1/time (no further scaling at use sites).

    Raises
    ------
    CoefficientError
        For non-monotone nodes, beta <= 1, or a node triple so skewed that
        the Vandermonde condition number exceeds ``cond_limit``.
    """
    t_star = _check_nodes(t_prev, t_curr, t_next, beta)
    if vandermonde_condition(t_prev, t_curr, t_next, beta) > cond_limit:
        raise CoefficientError(
            f"near-degenerate node triple ({t_prev}, {t_curr}, {t_next}): "
            f"Vandermonde condition exceeds {cond_limit:g}"
        )
    d0, d1, d2 = t_prev - t_star, t_curr - t_star, t_next - t_star
    a = _derivative_weights(d0, d1, d2)
    b0, b1 = _interp_weights(d1, d2)
    c0, c1 = _interp_weights(d0, d1)
    return StepCoefficients(
        beta=float(beta), a=a, b=(b0, b1), c=(c0, c1), t_eval=t_star,
        dt_scaled=False,
    )


def lagrange_coeffs(t_prev: float, t_curr: float, t_next: float,
                    beta: float) -> StepCoefficients:
    """Same weights obtained from Lagrange basis polynomials.

    Cross-check route for nonuniform_coeffs: ``a`` are the derivatives of
    the three quadratic basis polynomials over (t_prev, t_curr, t_next)
    evaluated at t*; ``b`` and ``c`` are two-node basis values at t*.
    """
    t_star = _check_nodes(t_prev, t_curr, t_next, beta)
    a0 = (2.0 * t_star - t_curr - t_next) / ((t_prev - t_curr) * (t_prev - t_next))
    a1 = (2.0 * t_star - t_prev - t_next) / ((t_curr - t_prev) * (t_curr - t_next))
    a2 = (2.0 * t_star - t_prev - t_curr) / ((t_next - t_prev) * (t_next - t_curr))
    b1 = (t_star - t_curr) / (t_next - t_curr)
    b0 = (t_star - t_next) / (t_curr - t_next)
    c1 = (t_star - t_prev) / (t_curr - t_prev)
    c0 = (t_star - t_curr) / (t_prev - t_curr)
    return StepCoefficients(
        beta=float(beta), a=(a0, a1, a2), b=(b0, b1), c=(c0, c1), t_eval=t_star,
        dt_scaled=False,
    )
