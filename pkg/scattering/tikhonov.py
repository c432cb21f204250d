"""
Tikhonov reconstruction: solve (F*F + εI) η = F*Λ by conjugate gradients.

The normal operator is Hermitian positive definite for ε > 0, so plain CG
on the complex iterate applies. Convergence is measured on the relative
residual ‖(F*F + εI)η − F*Λ‖ / ‖F*Λ‖. A run that exhausts its iteration
budget returns the last iterate with converged=False instead of raising.
"""

import logging
from dataclasses import dataclass

import numpy as np

from config.settings import settings
from scattering.born import BornOperator
from scattering.geometry import ScatterGeometry

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TikhonovResult:
    eta: np.ndarray          # real part of the solution, (n_y, n_y)
    solution: np.ndarray     # complex CG iterate
    residual: float          # relative
    iterations: int
    converged: bool


def tikhonov_reconstruct(data: np.ndarray, geometry: ScatterGeometry | BornOperator, epsilon: float,
                         tol: float | None = None, max_iter: int | None = None) -> TikhonovResult:
    if epsilon <= 0:
        raise ValueError(f"Regularization parameter must be positive, got {epsilon}")
    op = geometry if isinstance(geometry, BornOperator) else BornOperator(geometry)
    tol = settings.CG_TOL if tol is None else tol
    max_iter = settings.CG_MAX_ITER if max_iter is None else max_iter

    def apply(x: np.ndarray) -> np.ndarray:
        return op.normal(x) + epsilon * x

    rhs = op.adjoint(data)
    rhs_norm = float(np.linalg.norm(rhs))
    x = np.zeros(op.inshape, dtype=np.complex128)
    if rhs_norm == 0:
        return TikhonovResult(eta=x.real.copy(), solution=x, residual=0.0, iterations=0, converged=True)

    r = rhs.copy()
    p = r.copy()
    rr = float(np.vdot(r, r).real)
    residual = 1.0
    iterations = 0
    while iterations < max_iter:
        if np.sqrt(rr) / rhs_norm <= tol:
            # the recursive residual drifts from the true one; restart from the true one
            r = rhs - apply(x)
            residual = float(np.linalg.norm(r)) / rhs_norm
            if residual <= tol:
                break
            p = r.copy()
            rr = float(np.vdot(r, r).real)
        ap = apply(p)
        alpha = rr / float(np.vdot(p, ap).real)
        x = x + alpha * p
        r = r - alpha * ap
        rr_new = float(np.vdot(r, r).real)
        p = r + (rr_new / rr) * p
        rr = rr_new
        iterations += 1
    else:
        residual = float(np.linalg.norm(apply(x) - rhs)) / rhs_norm

    converged = residual <= tol
    if converged:
        logger.info(f"CG converged in {iterations} iterations (ε={epsilon:g}, residual {residual:.2e})")
    else:
        logger.warning(f"CG stopped after {iterations} iterations without converging "
                       f"(ε={epsilon:g}, residual {residual:.2e})")
    return TikhonovResult(eta=x.real.copy(), solution=x, residual=residual,
                          iterations=iterations, converged=bool(converged))
