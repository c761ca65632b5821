"""Closed-form spectral quantities of the linearized network.

Covers the Fano-type response of the optical/plasmonic pair to the
red-shifted scattering sideband, the radiation-pressure force noise
spectrum S_FF(omega) seen by the vibration, the absorption/emission
rates A+/A- it induces, and the perturbative steady phonon number.

The force is normalized with x_zpf = 1: the zero-point length appears
only as G^2/(2 x_zpf^2) inside S_FF and is multiplied back by x_zpf^2 in
``A+- = S_FF(-+omega_b) x_zpf^2``, so it cancels from every observable
and the molecular mass never enters.

The printed S_FF closed form assumes the plasmon is driven on the
red sideband (delta_c = -omega_b); other detunings are rejected rather
than silently extrapolated.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy.integrate import IntegrationWarning, quad

from .errors import HeatingRunaway, QuadratureNotConverged, UnsupportedDetuning
from .model import SystemParams, resolve_coupling
from .units import TWO_PI

#: Half-width of the finely resolved quadrature window, in units of gamma.
LORENTZIAN_WINDOW = 50.0
#: Relative tolerance of the absorption-rate quadrature.
QUAD_RTOL = 1e-8


@dataclass(frozen=True)
class ResponsePair:
    """Sideband response amplitudes of the optical (f_a) and plasmonic (f_c) modes."""

    f_a: complex
    f_c: complex
    ratio: complex


@dataclass(frozen=True)
class CoolingRates:
    """Absorption/emission rates and the perturbative phonon number."""

    a_plus: float
    a_minus: float
    n_b: float
    method: str
    a_plus_error: float = 0.0


def stokes_response(params: SystemParams, at: float | None = None) -> ResponsePair:
    """Response of both optical channels to a unit force on the plasmon.

    Evaluated at frequency ``at`` (default: the red sideband -omega_b).
    The ratio f_a/f_c measures how strongly the scattered sideband is
    redirected from the lossy plasmon into the resonator.
    """
    w = -params.omega_b if at is None else at
    za = params.kappa_a + 1j * (params.delta_a - w)
    zc = params.kappa_c + 1j * (params.delta_c - w)
    denom = params.j * params.j + za * zc
    f_a = -1j * params.j / denom
    f_c = za / denom
    return ResponsePair(f_a=f_a, f_c=f_c, ratio=f_a / f_c)


def redirection_ratio(params: SystemParams, at: float | None = None) -> complex:
    """Closed form of the response ratio, -iJ / (kappa_a + i(delta_a - omega))."""
    w = -params.omega_b if at is None else at
    return -1j * params.j / (params.kappa_a + 1j * (params.delta_a - w))


def _require_red_sideband(params: SystemParams) -> None:
    if abs(params.delta_c + params.omega_b) > 1e-9 * max(1.0, params.omega_b):
        raise UnsupportedDetuning(
            "the closed-form force spectrum is only valid at delta_c = -omega_b "
            f"(got delta_c = {params.delta_c:.6g}, omega_b = {params.omega_b:.6g})"
        )


def _force_spectrum(w: float, g: float, params: SystemParams) -> float:
    j, ka, kc = params.j, params.kappa_a, params.kappa_c
    da, wb = params.delta_a, params.omega_b
    det_a = w - da
    num = j * j * ka + kc * (ka * ka + det_a * det_a)
    den = (
        j ** 4
        + 2.0 * j * j * (ka * kc - det_a * (w + wb))
        + (ka * ka + det_a * det_a) * (kc * kc + (w + wb) ** 2)
    )
    return 0.5 * g * g * num / den


def noise_spectrum(params: SystemParams, omega: float) -> float:
    """Radiation-pressure force noise spectrum S_FF(omega), x_zpf = 1 units."""
    _require_red_sideband(params)
    g = resolve_coupling(params)
    return _force_spectrum(omega, g, params)


def absorption_rate_point(params: SystemParams, g: float | None = None) -> float:
    """A+ from the spectrum value at the red sideband (closed form).

    Valid at delta_c = -omega_b for any resonator detuning; identical to
    ``noise_spectrum(params, -omega_b)``.
    """
    _require_red_sideband(params)
    if g is None:
        g = resolve_coupling(params)
    j2 = params.j * params.j
    ka, kc = params.kappa_a, params.kappa_c
    off = params.omega_b + params.delta_a
    core = j2 + ka * kc
    num = ka * core + kc * off * off
    return 0.5 * g * g * num / (core * core + kc * kc * off * off)


def emission_rate_closed_form(params: SystemParams, g: float | None = None) -> float:
    """A- closed form for a resonator parked on the red sideband (delta_a = -omega_b)."""
    if g is None:
        g = resolve_coupling(params)
    j2 = params.j * params.j
    ka, kc, wb = params.kappa_a, params.kappa_c, params.omega_b
    four_wb2 = 4.0 * wb * wb
    num = j2 * ka + (four_wb2 + ka * ka) * kc
    den = j2 * j2 + j2 * (-8.0 * wb * wb + 2.0 * ka * kc) + (four_wb2 + ka * ka) * (
        four_wb2 + kc * kc
    )
    return 0.5 * g * g * num / den


def _absorption_rate_lorentzian(
    params: SystemParams, g: float, rtol: float
) -> tuple[float, float]:
    """A+ weighted by the vibration's normalized Lorentzian response.

    Integrates S_FF(omega) * L(omega) over the negative frequency axis,
    with L(omega) = (gamma/pi) / ((omega + omega_b)^2 + gamma^2).  A
    finely resolved window of +-50 gamma around -omega_b captures the
    narrow spectral dip; the smooth tails are integrated out to -inf and
    up to 0 separately.  Returns (value, error estimate).
    """
    wb, gm = params.omega_b, params.gamma

    def integrand(w: float) -> float:
        lor = (gm / math.pi) / ((w + wb) ** 2 + gm * gm)
        return _force_spectrum(w, g, params) * lor

    lo = -wb - LORENTZIAN_WINDOW * gm
    hi = min(0.0, -wb + LORENTZIAN_WINDOW * gm)
    total = 0.0
    err = 0.0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        for piece in (
            quad(integrand, lo, hi, epsrel=rtol, limit=400, points=[-wb]),
            quad(integrand, -math.inf, lo, epsrel=rtol, limit=400),
            quad(integrand, hi, 0.0, epsrel=rtol, limit=400),
        ):
            total += piece[0]
            err += piece[1]
    if caught and err > 1e-6 * max(abs(total), 1e-300):
        raise QuadratureNotConverged(
            f"absorption-rate quadrature error {err:.3e} on value {total:.3e}"
        )
    return total, err


def cooling_rates(
    params: SystemParams, method: str = "point", quad_rtol: float = QUAD_RTOL
) -> CoolingRates:
    """Perturbative phonon budget: A+, A- and the steady occupation.

    ``method="point"`` evaluates both rates from the spectrum at
    -+omega_b; ``method="lorentzian"`` replaces A+ by the integral over
    the vibration's Lorentzian response, which matters once the spectral
    dip near -omega_b is narrower than gamma (kappa_a << gamma).  The
    steady occupation is ``(2 nbar gamma + A+) / (2 gamma - A+ + A-)``;
    a non-positive denominator means the perturbative picture has broken
    down and raises :class:`HeatingRunaway`.
    """
    _require_red_sideband(params)
    g = resolve_coupling(params)
    a_minus = _force_spectrum(params.omega_b, g, params)
    if method == "point":
        a_plus = absorption_rate_point(params, g)
        err = 0.0
    elif method == "lorentzian":
        a_plus, err = _absorption_rate_lorentzian(params, g, quad_rtol)
    else:
        raise ValueError(f"method must be 'point' or 'lorentzian', got {method!r}")
    gm, nbar = params.gamma, params.occupation
    denom = 2.0 * gm - a_plus + a_minus
    if denom <= 0.0:
        raise HeatingRunaway(
            f"2 gamma - A+ + A- = {denom:.6g} <= 0: perturbative cooling invalid"
        )
    n_b = (2.0 * nbar * gm + a_plus) / denom
    return CoolingRates(a_plus=a_plus, a_minus=a_minus, n_b=n_b, method=method, a_plus_error=err)


def simplified_absorption(params: SystemParams, g: float | None = None) -> float:
    """Large-J shortcut A+ ~= G^2 kappa_a / (2 J^2).

    Quoted for J/2pi above 0.1 THz; below that the neglected
    ``kappa_a kappa_c`` term is no longer small and a warning is emitted
    (the value is still returned).
    """
    if g is None:
        g = resolve_coupling(params)
    if params.j <= 0.1 * TWO_PI:
        warnings.warn(
            "simplified absorption rate used at J/2pi <= 0.1 THz; "
            "prefer the exact point formula here",
            stacklevel=2,
        )
    if params.j == 0.0:
        return math.inf
    return 0.5 * g * g * params.kappa_a / (params.j * params.j)
