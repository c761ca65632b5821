"""Dense real-matrix kernels: Lyapunov solver, stability test, integration oracle.

Everything here is physics-agnostic.  The drift matrices this package
produces are at most 8x8, so the Lyapunov equation ``A V + V A^T = -D``
is solved by vectorizing it into an n^2 x n^2 dense linear system; at
this scale the O(n^6) cost is negligible and the method has no tuning
knobs.  A slow explicit time integrator is provided as an independent
oracle for testing the direct solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import DimensionMismatch, EigenFailure, NotConverged, SingularSystem

#: Relative Frobenius residual required of the direct solver.
LYAPUNOV_RESIDUAL_TOL = 1e-10


def _check_square(a: NDArray[np.float64], name: str) -> NDArray[np.float64]:
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"{name} must be a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionMismatch(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class StabilityReport:
    """Spectral stability summary of a drift matrix.

    ``margin`` is the largest eigenvalue real part; the system counts as
    stable only when the margin clears ``-eps`` with
    ``eps = 1e-9 * max(1, max|lambda|)``, because the Lyapunov solve is
    ill-conditioned at the boundary.  Margins inside the band are
    reported unstable and flagged ``marginal``.
    """

    is_stable: bool
    eigen_real_parts: NDArray[np.float64]
    margin: float
    marginal: bool


def stability(a: NDArray[np.float64]) -> StabilityReport:
    """Classify asymptotic stability of ``dx/dt = A x`` via the full spectrum."""
    arr = _check_square(a, "A")
    try:
        eigvals = np.linalg.eigvals(arr)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"eigenvalue iteration failed: {exc}") from exc
    real_parts = np.sort(eigvals.real)
    margin = float(real_parts[-1])
    eps = 1e-9 * max(1.0, float(np.max(np.abs(eigvals)))) if eigvals.size else 1e-9
    return StabilityReport(
        is_stable=margin < -eps,
        eigen_real_parts=real_parts,
        margin=margin,
        marginal=abs(margin) <= eps,
    )


def lyapunov_residual(
    a: NDArray[np.float64], d: NDArray[np.float64], v: NDArray[np.float64]
) -> float:
    """Relative Frobenius residual ||A V + V A^T + D||_F / ||D||_F."""
    num = np.linalg.norm(a @ v + v @ a.T + d)
    den = np.linalg.norm(d)
    return float(num / den) if den > 0 else float(num)


def solve_lyapunov(
    a: NDArray[np.float64], d: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Solve ``A V + V A^T = -D`` for the steady-state second moments.

    The equation is vectorized into ``(I (x) A + A (x) I) vec(V) = -vec(D)``
    and solved densely.  The result is symmetrized as ``(V + V^T)/2`` and
    must satisfy the relative residual bound
    :data:`LYAPUNOV_RESIDUAL_TOL`; a violated bound (or an exactly
    singular system) raises :class:`SingularSystem`, which in practice
    means the drift matrix sits on the stability boundary.
    """
    a = _check_square(a, "A")
    d = _check_square(d, "D")
    if a.shape != d.shape:
        raise DimensionMismatch(f"A and D differ in shape: {a.shape} vs {d.shape}")
    if not np.allclose(d, d.T, rtol=0.0, atol=1e-12 * max(1.0, float(np.abs(d).max()))):
        raise DimensionMismatch("D must be symmetric")
    n = a.shape[0]
    eye = np.eye(n)
    system = np.kron(eye, a) + np.kron(a, eye)
    try:
        vec = np.linalg.solve(system, -d.reshape(-1))
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"vectorized Lyapunov system is singular: {exc}") from exc
    v = vec.reshape(n, n)
    v = 0.5 * (v + v.T)
    residual = lyapunov_residual(a, d, v)
    if not np.isfinite(residual) or residual > LYAPUNOV_RESIDUAL_TOL:
        raise SingularSystem(
            f"Lyapunov residual {residual:.3e} exceeds {LYAPUNOV_RESIDUAL_TOL:.1e}; "
            "drift matrix is numerically marginal"
        )
    return v


def integrate_lyapunov_oracle(
    a: NDArray[np.float64],
    d: NDArray[np.float64],
    dt: float | None = None,
    tol: float = 1e-12,
    max_steps: int = 2_000_000,
    max_halvings: int = 8,
) -> NDArray[np.float64]:
    """Fixed point of ``dV/dt = A V + V A^T + D`` by explicit time stepping.

    Deliberately independent of :func:`solve_lyapunov` so the two can
    cross-check each other.  Classic RK4 steps run from ``V(0) = 0``
    until ``||dV/dt||_F < tol``; if the residual diverges the step is
    halved and the integration restarted.  Exhausting the budget raises
    :class:`NotConverged` (an unstable ``A`` never converges).
    """
    a = _check_square(a, "A")
    d = _check_square(d, "D")
    if a.shape != d.shape:
        raise DimensionMismatch(f"A and D differ in shape: {a.shape} vs {d.shape}")
    if dt is None:
        eigvals = np.linalg.eigvals(a)
        fastest = float(np.max(np.abs(eigvals))) if eigvals.size else 1.0
        slowest_decay = float(np.max(eigvals.real))
        dt = min(0.1 / max(abs(slowest_decay), 1e-300), 1.0 / max(fastest, 1e-300))
    if dt <= 0:
        raise DimensionMismatch("dt must be positive")

    def rate(v: NDArray[np.float64]) -> NDArray[np.float64]:
        return a @ v + v @ a.T + d

    initial_residual = float(np.linalg.norm(d))
    for _ in range(max_halvings):
        v = np.zeros_like(a)
        steps = 0
        diverged = False
        while steps < max_steps:
            r1 = rate(v)
            if float(np.linalg.norm(r1)) < tol:
                return 0.5 * (v + v.T)
            k2 = rate(v + 0.5 * dt * r1)
            k3 = rate(v + 0.5 * dt * k2)
            k4 = rate(v + dt * k3)
            v = v + (dt / 6.0) * (r1 + 2.0 * k2 + 2.0 * k3 + k4)
            steps += 1
            if steps % 256 == 0:
                norm = float(np.linalg.norm(rate(v)))
                if not np.isfinite(norm) or norm > 10.0 * initial_residual:
                    diverged = True
                    break
        if diverged:
            dt *= 0.5
            continue
        break
    raise NotConverged(
        f"Lyapunov integration did not reach ||dV/dt|| < {tol:.1e} "
        f"within {max_steps} steps (dt={dt:.3e}); A may be unstable"
    )
