"""Quantities extracted from a steady-state covariance matrix.

Covariances follow the vacuum-1/2 convention (``X = (do^dag+do)/sqrt(2)``),
so the uncertainty bound reads ``V + (i/2) Omega >= 0`` (all symplectic
eigenvalues >= 1/2), a thermal mode has diagonal ``(2 nbar + 1)/2``, and
the EPR-variance inseparability threshold is 2.

Clamping thresholds (1e-12 on the two-mode discriminant, 1e-9 of
physicality slack) absorb Lyapunov-solver roundoff only; anything beyond
them raises :class:`UnphysicalCovariance` instead of being silently
repaired, so model bugs stay distinguishable from numerics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import UnknownMode, UnphysicalCovariance
from .linalg import solve_lyapunov
from .model import LinearModel

#: Discriminant slack in the symplectic-eigenvalue formula.
DISCRIMINANT_TOL = 1e-12
#: Allowed shortfall below the vacuum floor 1/2.
PHYSICALITY_SLACK = 1e-9


def symplectic_form(n_modes: int) -> NDArray[np.float64]:
    """Block-diagonal symplectic form in (X1, Y1, ..., XN, YN) ordering."""
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def symplectic_eigenvalues(v: NDArray[np.float64]) -> NDArray[np.float64]:
    """Symplectic spectrum of a 2N x 2N covariance matrix, ascending."""
    n_modes = v.shape[0] // 2
    vals = np.abs(np.linalg.eigvals(1j * symplectic_form(n_modes) @ v))
    vals.sort()
    return vals[::2]  # moduli come in identical pairs


@dataclass(frozen=True)
class Covariance:
    """Steady-state covariance matrix with its mode labeling."""

    matrix: NDArray[np.float64]
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.matrix.shape != (2 * len(self.labels), 2 * len(self.labels)):
            raise ValueError(
                f"covariance shape {self.matrix.shape} does not match "
                f"{len(self.labels)} labeled modes"
            )

    def mode_slice(self, label: str) -> slice:
        try:
            k = self.labels.index(label)
        except ValueError:
            raise UnknownMode(f"mode {label!r} not among {self.labels}") from None
        return slice(2 * k, 2 * k + 2)

    def validate(self) -> None:
        """Raise :class:`UnphysicalCovariance` outside the tolerance band.

        Physicality is the uncertainty bound ``V + (i/2) Omega >= 0``,
        i.e. every symplectic eigenvalue at least 1/2 (minus slack).
        Individual diagonal entries may legitimately dip below the
        vacuum 1/2: the driven network weakly squeezes the plasmon
        quadratures at strong coupling.
        """
        v = self.matrix
        scale = max(1.0, float(np.abs(v).max()))
        if not np.allclose(v, v.T, rtol=0.0, atol=1e-12 * scale):
            raise UnphysicalCovariance("covariance is not symmetric to 1e-12")
        nu_min = float(symplectic_eigenvalues(v)[0])
        if nu_min < 0.5 - PHYSICALITY_SLACK:
            raise UnphysicalCovariance(
                f"smallest symplectic eigenvalue {nu_min:.6g} violates the "
                "uncertainty bound"
            )

    def is_physical(self) -> bool:
        try:
            self.validate()
        except UnphysicalCovariance:
            return False
        return True


def steady_covariance(model: LinearModel) -> Covariance:
    """Solve the Lyapunov equation for the model and validate physicality."""
    v = solve_lyapunov(model.drift, model.diffusion)
    cov = Covariance(matrix=v, labels=model.topology.mode_labels)
    cov.validate()
    return cov


def reduce_modes(cov: Covariance, bipartition: tuple[str, str]) -> NDArray[np.float64]:
    """4x4 covariance of two selected modes, ordered (X_m, Y_m, X_n, Y_n)."""
    m, n = bipartition
    if m == n:
        raise UnknownMode(f"bipartition needs two distinct modes, got {m!r} twice")
    sm, sn = cov.mode_slice(m), cov.mode_slice(n)
    idx = [sm.start, sm.start + 1, sn.start, sn.start + 1]
    return cov.matrix[np.ix_(idx, idx)]


def _blocks(
    v4: NDArray[np.float64],
) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
    return v4[:2, :2], v4[2:, 2:], v4[:2, 2:]


def min_symplectic_pt(v4: NDArray[np.float64]) -> float:
    """Smallest symplectic eigenvalue of the partial transpose of ``v4``.

    Computed from the two-mode determinant formula: with blocks
    (A, B, C), ``sigma = det A + det B - 2 det C`` and
    ``nu- = sqrt((sigma - sqrt(sigma^2 - 4 det V)) / 2)``.
    """
    if v4.shape != (4, 4):
        raise ValueError(f"expected a 4x4 reduced covariance, got {v4.shape}")
    a, b, c = _blocks(v4)
    det_v = float(np.linalg.det(v4))
    if det_v < -DISCRIMINANT_TOL:
        raise UnphysicalCovariance(f"det V = {det_v:.3e} < 0 beyond tolerance")
    sigma = float(np.linalg.det(a) + np.linalg.det(b) - 2.0 * np.linalg.det(c))
    disc = sigma * sigma - 4.0 * det_v
    if disc < -DISCRIMINANT_TOL:
        raise UnphysicalCovariance(f"negative discriminant {disc:.3e} beyond tolerance")
    inner = 0.5 * (sigma - math.sqrt(max(disc, 0.0)))
    if inner < -DISCRIMINANT_TOL:
        raise UnphysicalCovariance(f"negative nu^2 = {inner:.3e} beyond tolerance")
    return math.sqrt(max(inner, 0.0))


def log_negativity(v4: NDArray[np.float64]) -> float:
    """Logarithmic negativity max(0, -ln 2 nu-) of a two-mode covariance."""
    nu = min_symplectic_pt(v4)
    if nu <= 0.0:
        raise UnphysicalCovariance("vanishing partial-transpose eigenvalue")
    return max(0.0, -math.log(2.0 * nu))


def min_symplectic_pt_eig(v4: NDArray[np.float64]) -> float:
    """Independent route to nu-: symplectic spectrum of the mirrored state.

    Partial transposition flips the second mode's momentum,
    ``V -> P V P`` with ``P = diag(1, 1, 1, -1)``; the result's smallest
    symplectic eigenvalue must agree with the determinant formula.
    """
    p = np.diag([1.0, 1.0, 1.0, -1.0])
    return float(symplectic_eigenvalues(p @ v4 @ p)[0])


def phonon_occupation(cov: Covariance, label: str = "b") -> float:
    """Steady phonon number (V_xx + V_yy - 1)/2 of the vibration mode."""
    s = cov.mode_slice(label)
    value = 0.5 * (cov.matrix[s.start, s.start] + cov.matrix[s.start + 1, s.start + 1] - 1.0)
    if value < 0.0:
        if value < -PHYSICALITY_SLACK:
            raise UnphysicalCovariance(f"phonon number {value:.3e} below -1e-9")
        return 0.0
    return value


def duan_sum(
    cov: Covariance,
    bipartition: tuple[str, str],
    lo_phase: str = "optimal",
) -> float:
    """EPR-variance sum Var(X_m + X_n) + Var(Y_m - Y_n); < 2 proves inseparability.

    ``lo_phase="fixed"`` evaluates the sum at the quadratures as stored.
    ``lo_phase="optimal"`` (default) minimizes it over independent
    single-mode phase rotations, which is what a homodyne measurement
    with tunable local-oscillator phases realizes.  The minimum has the
    closed form ``tr A + tr B - 2 (s1 + s2)`` for ``det C <= 0`` (else
    ``- 2 (s1 - s2)``) with ``s1 >= s2`` the singular values of the
    cross block.  Any value below 2 still certifies entanglement.
    """
    v4 = reduce_modes(cov, bipartition)
    a, b, c = _blocks(v4)
    if lo_phase == "fixed":
        var_x = a[0, 0] + b[0, 0] + 2.0 * c[0, 0]
        var_y = a[1, 1] + b[1, 1] - 2.0 * c[1, 1]
        return float(var_x + var_y)
    if lo_phase != "optimal":
        raise ValueError(f"lo_phase must be 'fixed' or 'optimal', got {lo_phase!r}")
    s1, s2 = np.linalg.svd(c, compute_uv=False)
    cross = s1 + s2 if np.linalg.det(c) <= 0.0 else s1 - s2
    return float(np.trace(a) + np.trace(b) - 2.0 * cross)
