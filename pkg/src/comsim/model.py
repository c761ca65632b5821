"""Physical parameters, classical steady states, and linearized drift/diffusion models.

The network couples a driven plasmonic mode ``c`` to a molecular
vibration ``b`` (radiation pressure, single-photon rate ``g_c``) and to
one or two whispering-gallery optical modes (beam-splitter coupling
``J``).  Quadratures are ``X = (do^dag + do)/sqrt(2)``,
``Y = i(do^dag - do)/sqrt(2)``, so a vacuum mode has variance 1/2 per
quadrature and diffusion entry equal to its amplitude decay rate.

Three topologies are supported, with canonical quadrature ordering:

* ``SINGLE_WGM``   -- modes (a, b, c), 6x6 matrices;
* ``TWO_WGM``      -- modes (a1, b, c, a2), 8x8; the second resonator
  sits at its own detuning and both share the fiber vacuum input, which
  correlates their noise (off-diagonal kappa_a blocks in D);
* ``DEGENERATE_WGM_PAIR`` -- modes (a1, b, c, a2) for the co-resonant
  CW/CCW pair; both couple to the plasmon with the same J and carry
  independent vacuum inputs (counter-propagating channels).

All rates and frequencies are angular, in rad/ps.  Pump power and
temperature are the only SI quantities (W and K).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from numpy.typing import NDArray

from .errors import (
    FixedPointDiverged,
    NegativePower,
    NonPositiveTemperature,
    UnknownMode,
    UnresolvedCoupling,
)
from .units import HBAR, K_B, RADPS_TO_RADS, angular_from_thz


class Topology(Enum):
    """Network variant; the value doubles as the configuration keyword."""

    SINGLE_WGM = "single_wgm"
    DEGENERATE_WGM_PAIR = "degenerate_wgm_pair"
    TWO_WGM = "two_wgm"

    @property
    def mode_labels(self) -> tuple[str, ...]:
        if self is Topology.SINGLE_WGM:
            return ("a", "b", "c")
        return ("a1", "b", "c", "a2")

    @property
    def n_modes(self) -> int:
        return len(self.mode_labels)

    def mode_index(self, label: str) -> int:
        """Position of a mode label in the canonical ordering."""
        try:
            return self.mode_labels.index(label)
        except ValueError:
            raise UnknownMode(
                f"mode {label!r} not in topology {self.value} (has {self.mode_labels})"
            ) from None


def thermal_occupation(omega_b: float, temperature: float) -> float:
    """Bose occupation 1/(exp(hbar w / kB T) - 1) for ``omega_b`` in rad/ps."""
    if temperature <= 0.0:
        raise NonPositiveTemperature(f"temperature must be > 0 K, got {temperature}")
    if omega_b <= 0.0:
        raise ValueError(f"omega_b must be positive, got {omega_b}")
    x = HBAR * omega_b * RADPS_TO_RADS / (K_B * temperature)
    if x > 700.0:  # exp would overflow; occupation is numerically zero
        return 0.0
    return 1.0 / math.expm1(x)


def pump_amplitude(power: float, omega_l: float, kappa_c: float) -> float:
    """Coherent drive amplitude eps_L = sqrt(kappa_c P / hbar omega_L), in rad/ps.

    ``power`` is in W; ``omega_l`` and ``kappa_c`` in rad/ps.  This
    normalization makes quoted pump powers round-trip exactly through
    the steady-state relation ``|c_s| = eps_L / |i Delta_s + kappa_c|``.
    """
    if power < 0.0:
        raise NegativePower(f"pump power must be >= 0, got {power}")
    eps_si = math.sqrt(kappa_c * RADPS_TO_RADS * power / (HBAR * omega_l * RADPS_TO_RADS))
    return eps_si / RADPS_TO_RADS


@dataclass(frozen=True)
class SystemParams:
    """All rates, detunings, couplings, and bath occupations of one model.

    Detunings are stored explicitly (the sweeps are parameterized by
    them); ``omega_c`` is only needed when the effective coupling is
    derived from pump power, to fix the drive photon energy via
    ``omega_L = omega_c - delta_c``.  Exactly one of ``g_eff`` or
    ``(power, g_c)`` may be supplied as the source of the effective
    plasmon-vibration coupling.
    """

    omega_b: float
    kappa_a: float
    kappa_c: float
    gamma: float
    delta_a: float
    delta_c: float
    delta_a2: float | None = None
    j: float = 0.0
    j2: float | None = None
    g_c: float | None = None
    g_eff: float | None = None
    power: float | None = None  # W
    n_bar: float | None = None
    temperature: float | None = None  # K
    omega_a: float | None = None
    omega_c: float | None = None

    def __post_init__(self) -> None:
        for name in ("kappa_a", "kappa_c", "gamma"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.omega_b <= 0.0:
            raise ValueError(f"omega_b must be positive, got {self.omega_b}")
        if self.g_eff is not None and self.power is not None:
            raise ValueError("give either g_eff or pump power, not both")
        if self.n_bar is not None and self.n_bar < 0.0:
            raise ValueError(f"n_bar must be >= 0, got {self.n_bar}")
        if self.n_bar is not None and self.temperature is not None:
            raise ValueError("give either n_bar or temperature, not both")

    @classmethod
    def from_thz(
        cls,
        *,
        omega_b: float,
        kappa_a: float,
        kappa_c: float,
        gamma: float,
        delta_a: float,
        delta_c: float,
        delta_a2: float | None = None,
        j: float = 0.0,
        j2: float | None = None,
        g_c: float | None = None,
        g_eff: float | None = None,
        power_mw: float | None = None,
        n_bar: float | None = None,
        temperature_k: float | None = None,
        omega_a: float | None = None,
        omega_c: float | None = None,
    ) -> "SystemParams":
        """Build from quoted value/2pi frequencies in THz (power in mW)."""

        def ang(x: float | None) -> float | None:
            return None if x is None else angular_from_thz(x)

        return cls(
            omega_b=angular_from_thz(omega_b),
            kappa_a=angular_from_thz(kappa_a),
            kappa_c=angular_from_thz(kappa_c),
            gamma=angular_from_thz(gamma),
            delta_a=angular_from_thz(delta_a),
            delta_c=angular_from_thz(delta_c),
            delta_a2=ang(delta_a2),
            j=angular_from_thz(j),
            j2=ang(j2),
            g_c=ang(g_c),
            g_eff=ang(g_eff),
            power=None if power_mw is None else power_mw * 1e-3,
            n_bar=n_bar,
            temperature=temperature_k,
            omega_a=ang(omega_a),
            omega_c=ang(omega_c),
        )

    @property
    def occupation(self) -> float:
        """Thermal phonon occupation, direct or derived from temperature."""
        if self.n_bar is not None:
            return self.n_bar
        if self.temperature is not None:
            return thermal_occupation(self.omega_b, self.temperature)
        return 0.0

    @property
    def omega_l(self) -> float:
        """Drive frequency omega_c - delta_c (requires omega_c)."""
        if self.omega_c is None:
            raise ValueError("omega_c is required to derive the drive frequency")
        return self.omega_c - self.delta_c

    def with_(self, **changes: object) -> "SystemParams":
        """Functional update preserving immutability."""
        return replace(self, **changes)


@dataclass(frozen=True)
class SteadyAmplitudes:
    """Classical mean fields and the derived effective coupling.

    The phase reference of the drive is chosen so that ``c_s`` lands on
    the positive real axis; the same rotation is applied to the optical
    amplitudes (they enter only through phase-covariant beam-splitter
    terms), while ``b_s`` keeps its own phase because its steady-state
    equation depends on ``|c_s|^2`` only.  ``drive_phase`` records the
    rotation so the fixed-point equations can be re-checked exactly.
    """

    a_s: complex
    b_s: complex
    c_s: complex
    a2_s: complex | None
    g_eff: float
    delta_s: float
    drive_phase: float
    pump: float
    method: str
    iterations: int = 0


def _optical_channels(
    params: SystemParams, topology: Topology
) -> list[tuple[float, float]]:
    """(J_i, delta_i) pairs of the optical modes coupled to the plasmon."""
    if topology is Topology.SINGLE_WGM:
        return [(params.j, params.delta_a)]
    if topology is Topology.DEGENERATE_WGM_PAIR:
        return [(params.j, params.delta_a), (params.j, params.delta_a)]
    j2 = params.j2 if params.j2 is not None else params.j
    if params.delta_a2 is None:
        raise ValueError("two-WGM topology requires delta_a2")
    return [(params.j, params.delta_a), (j2, params.delta_a2)]


def steady_state(
    params: SystemParams,
    method: str = "approx",
    topology: Topology = Topology.SINGLE_WGM,
    max_iter: int = 200,
) -> SteadyAmplitudes:
    """Classical steady state of the driven network.

    ``method="approx"`` identifies the dressed plasmon detuning with the
    bare one (Delta_s = Delta_c) and solves the remaining linear system;
    ``method="self_consistent"`` iterates
    ``Delta_s <- Delta_c - g_c (b_s* + b_s)`` to a fixed point with
    relative residual below 1e-12.
    """
    if method not in ("approx", "self_consistent"):
        raise ValueError(f"unknown steady-state method {method!r}")
    if params.power is None or params.power == 0.0:
        eps = 0.0
    else:
        eps = pump_amplitude(params.power, params.omega_l, params.kappa_c)
    channels = _optical_channels(params, topology)
    g_c = params.g_c or 0.0

    def solve(delta_s: float) -> tuple[complex, list[complex], complex]:
        denom = 1j * delta_s + params.kappa_c
        denom += sum(
            j * j / (1j * d + params.kappa_a) for j, d in channels
        )
        c_s = eps / denom
        optics = [-1j * j * c_s / (1j * d + params.kappa_a) for j, d in channels]
        b_s = 1j * g_c * abs(c_s) ** 2 / (1j * params.omega_b + params.gamma)
        return c_s, optics, b_s

    delta_s = params.delta_c
    iterations = 0
    c_s, optics, b_s = solve(delta_s)
    if method == "self_consistent" and g_c != 0.0 and eps != 0.0:
        for iterations in range(1, max_iter + 1):
            new_delta = params.delta_c - 2.0 * g_c * b_s.real
            if abs(new_delta - delta_s) <= 1e-12 * max(1.0, abs(new_delta)):
                delta_s = new_delta
                c_s, optics, b_s = solve(delta_s)
                break
            delta_s = new_delta
            c_s, optics, b_s = solve(delta_s)
        else:
            raise FixedPointDiverged(
                f"detuning fixed point not reached in {max_iter} iterations; "
                "use method='approx'"
            )

    phase = cmath.phase(c_s) if abs(c_s) > 0.0 else 0.0
    rot = cmath.exp(-1j * phase)
    optics = [o * rot for o in optics]
    return SteadyAmplitudes(
        a_s=optics[0],
        b_s=b_s,
        c_s=abs(c_s),
        a2_s=optics[1] if len(optics) > 1 else None,
        g_eff=2.0 * g_c * abs(c_s),
        delta_s=delta_s,
        drive_phase=phase,
        pump=eps,
        method=method,
        iterations=iterations,
    )


def resolve_coupling(
    params: SystemParams, topology: Topology = Topology.SINGLE_WGM
) -> float:
    """Effective plasmon-vibration coupling G, direct or via the steady state."""
    if params.g_eff is not None:
        return params.g_eff
    if params.power is not None and params.g_c is not None:
        return steady_state(params, topology=topology).g_eff
    raise UnresolvedCoupling(
        "effective coupling unresolved: set g_eff directly or provide (power, g_c)"
    )


def pump_power_for_coupling(
    params: SystemParams,
    g_target: float,
    topology: Topology = Topology.SINGLE_WGM,
) -> float:
    """Pump power (W) that realizes the effective coupling ``g_target``.

    Inverts the steady state at the bare plasmon detuning: the required
    plasmon amplitude is ``|c_s| = G / (2 g_c)`` and the drive amplitude
    follows from the dressed linear response including the optical
    back-action channels.
    """
    if params.g_c is None or params.g_c == 0.0:
        raise UnresolvedCoupling("g_c is required to convert a coupling into pump power")
    c_s = g_target / (2.0 * params.g_c)
    denom = 1j * params.delta_c + params.kappa_c
    denom += sum(
        j * j / (1j * d + params.kappa_a)
        for j, d in _optical_channels(params, topology)
    )
    eps = c_s * abs(denom)
    return eps * eps * HBAR * params.omega_l * RADPS_TO_RADS**2 / params.kappa_c


@dataclass(frozen=True)
class LinearModel:
    """Drift and diffusion matrices of the linearized fluctuation dynamics."""

    drift: NDArray[np.float64]
    diffusion: NDArray[np.float64]
    topology: Topology
    params: SystemParams
    g_effective: float

    @property
    def size(self) -> int:
        return self.drift.shape[0]


def _single_wgm_matrices(
    p: SystemParams, g: float
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    ka, kc, gm = p.kappa_a, p.kappa_c, p.gamma
    da, dc, wb, j = p.delta_a, p.delta_c, p.omega_b, p.j
    drift = np.array(
        [
            [-ka, da, 0.0, 0.0, 0.0, j],
            [-da, -ka, 0.0, 0.0, -j, 0.0],
            [0.0, 0.0, -gm, wb, 0.0, 0.0],
            [0.0, 0.0, -wb, -gm, g, 0.0],
            [0.0, j, 0.0, 0.0, -kc, dc],
            [-j, 0.0, g, 0.0, -dc, -kc],
        ]
    )
    nb = p.occupation
    diffusion = np.diag([ka, ka, gm * (2.0 * nb + 1.0), gm * (2.0 * nb + 1.0), kc, kc])
    return drift, diffusion


def _pair_drift(
    p: SystemParams, g: float, da1: float, da2: float, j1: float, j2: float
) -> NDArray[np.float64]:
    ka, kc, gm = p.kappa_a, p.kappa_c, p.gamma
    dc, wb = p.delta_c, p.omega_b
    return np.array(
        [
            [-ka, da1, 0.0, 0.0, 0.0, j1, 0.0, 0.0],
            [-da1, -ka, 0.0, 0.0, -j1, 0.0, 0.0, 0.0],
            [0.0, 0.0, -gm, wb, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, -wb, -gm, g, 0.0, 0.0, 0.0],
            [0.0, j1, 0.0, 0.0, -kc, dc, 0.0, j2],
            [-j1, 0.0, g, 0.0, -dc, -kc, -j2, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, j2, -ka, da2],
            [0.0, 0.0, 0.0, 0.0, -j2, 0.0, -da2, -ka],
        ]
    )


def build_model(params: SystemParams, topology: Topology) -> LinearModel:
    """Populate the drift/diffusion matrices for the requested topology."""
    g = resolve_coupling(params, topology)
    if topology is Topology.SINGLE_WGM:
        drift, diffusion = _single_wgm_matrices(params, g)
        return LinearModel(drift, diffusion, topology, params, g)

    ka, kc, gm = params.kappa_a, params.kappa_c, params.gamma
    nb = params.occupation
    gvib = gm * (2.0 * nb + 1.0)
    diffusion = np.diag([ka, ka, gvib, gvib, kc, kc, ka, ka])
    if topology is Topology.TWO_WGM:
        if params.delta_a2 is None:
            raise ValueError("two-WGM topology requires delta_a2")
        j2 = params.j2 if params.j2 is not None else params.j
        drift = _pair_drift(params, g, params.delta_a, params.delta_a2, params.j, j2)
        # both resonators see the same fiber zero-point fluctuations
        diffusion[0, 6] = diffusion[6, 0] = ka
        diffusion[1, 7] = diffusion[7, 1] = ka
        return LinearModel(drift, diffusion, topology, params, g)
    if topology is Topology.DEGENERATE_WGM_PAIR:
        drift = _pair_drift(params, g, params.delta_a, params.delta_a, params.j, params.j)
        return LinearModel(drift, diffusion, topology, params, g)
    raise ValueError(f"unknown topology {topology!r}")


def degenerate_pair_model(params: SystemParams) -> LinearModel:
    """CW/CCW co-resonant pair, both coupled to the plasmon with strength J."""
    return build_model(params, Topology.DEGENERATE_WGM_PAIR)
