"""Bundled run configurations reproducing the reference result set.

Each entry maps one named figure-style dataset to a complete run
configuration (canonical dict form, see :mod:`comsim.cli`); the
``reproduce`` subcommand turns a name into the corresponding table.
The shared baseline is the standard operating point of the network:
vibration at 30 THz with 0.01 THz linewidth and 0.01 thermal phonons,
plasmon at 15 THz linewidth, resonator linewidth 1e-4 THz, both optical
detunings on the red sideband.
"""

from __future__ import annotations

from typing import Any


def baseline_params(*drop: str, **overrides: Any) -> dict[str, Any]:
    """Reference parameter block (frequencies as value/2pi in THz).

    Positional names are removed (for keys supplied by a sweep axis
    instead); keyword arguments override or extend the block.
    """
    block: dict[str, Any] = {
        "omega_b_thz_over_2pi": 30.0,
        "kappa_a_thz_over_2pi": 1e-4,
        "kappa_c_thz_over_2pi": 15.0,
        "gamma_thz_over_2pi": 0.01,
        "delta_a_thz_over_2pi": -30.0,
        "delta_c_thz_over_2pi": -30.0,
        "n_bar": 0.01,
        "omega_c_thz_over_2pi": 330.0,
    }
    for key in drop:
        block.pop(key, None)
    block.update(overrides)
    return block


def _bundle(
    params: dict[str, Any],
    sweep: dict[str, Any],
    topology: str = "single_wgm",
) -> dict[str, Any]:
    return {
        "topology": {"variant": topology},
        "params": params,
        "sweep": sweep,
        "output": {"format": "csv", "precision": 12},
    }


BUNDLES: dict[str, dict[str, Any]] = {
    # entanglement vs detuning for the bare and coupled network
    "fig2a": _bundle(
        baseline_params(
            "delta_a_thz_over_2pi", "delta_c_thz_over_2pi", g_thz_over_2pi=0.7
        ),
        {
            "axis1": "j : 0 : 0.7 : 2",
            "axis2": "delta_a+delta_c : -90 : 30 : 241",
            "outputs": "en_ab, en_cb",
        },
    ),
    # plasmon-vibration entanglement collapse over the coupling plane
    "fig2d": _bundle(
        baseline_params(),
        {
            "axis1": "j : 0 : 1.5 : 61",
            "axis2": "g : 0 : 2 : 81",
            "outputs": "en_cb",
        },
    ),
    # resonator-vibration entanglement over the coupling plane
    "fig2e": _bundle(
        baseline_params(),
        {
            "axis1": "j : 0 : 1.5 : 61",
            "axis2": "g : 0 : 2 : 81",
            "outputs": "en_ab",
        },
    ),
    "fig3a": _bundle(
        baseline_params(),
        {
            "axis1": "j : 0.5 : 1.5 : 3",
            "axis2": "g : 0.025 : 2 : 80",
            "outputs": "en_ab",
        },
    ),
    "fig3b": _bundle(
        baseline_params(),
        {
            "axis1": "g : 0.7 : 2 : 3",
            "axis2": "j : 0.025 : 1.5 : 60",
            "outputs": "en_ab",
        },
    ),
    # local maxima along either coupling, tuning the other
    "fig3c": _bundle(
        baseline_params(),
        {
            "mode": "trace_both",
            "axis1": "j : 0.1 : 1.5 : 29",
            "axis2": "g : 0.05 : 2 : 40",
        },
    ),
    "fig4a": _bundle(
        baseline_params(),
        {
            "axis1": "j : 0.05 : 1.5 : 30",
            "axis2": "g : 0.05 : 2 : 40",
            "outputs": "nb_cm, en_ab",
        },
    ),
    # same traces as fig3c, with the phonon number at each optimum
    "fig4b": _bundle(
        baseline_params(),
        {
            "mode": "trace_both",
            "axis1": "j : 0.1 : 1.5 : 29",
            "axis2": "g : 0.05 : 2 : 40",
        },
    ),
    # covariance vs perturbative phonon number, broad and narrow resonator
    "figS2d": _bundle(
        baseline_params("kappa_a_thz_over_2pi", g_thz_over_2pi=0.7),
        {
            "axis1": "kappa_a : 1e-4 : 0.1 : 2 : log",
            "axis2": "j : 0.1 : 1.5 : 29",
            "outputs": "nb_cm, nb_pert_point, nb_pert_lorentzian",
        },
    ),
    # two-resonator protocol: pair entanglement over (J, G)
    "figS3a": _bundle(
        baseline_params(
            kappa_a_thz_over_2pi=1e-3,
            delta_c_thz_over_2pi=0.0,
            delta_a2_thz_over_2pi=30.0,
        ),
        {
            "axis1": "j1+j2 : 0.3 : 1.5 : 41",
            "axis2": "g : 0.5 : 2 : 31",
            "outputs": "en_a1a2",
        },
        topology="two_wgm",
    ),
    # single resonator vs co-resonant CW/CCW pair on the same grid
    "figS6": _bundle(
        baseline_params(kappa_a_thz_over_2pi=1e-3),
        {
            "mode": "compare_topologies",
            "axis1": "j : 0.05 : 1.5 : 30",
            "axis2": "g : 0.05 : 2 : 40",
        },
    ),
}
