"""Norm-resolvent limits of 1-D Schrodinger operators with shrinking
rank-two perturbations coupled with delta-like potentials."""

from _pointlim import (
    Profile,
    Triple,
    Tolerances,
    ScatteringData,
    classify,
    invariants,
    half_bound_states,
    scattering_eps,
    scattering_limit,
    scattering_convergence,
    fit_rate,
    fixture,
    fixture_names,
)

__all__ = [
    "Profile",
    "Triple",
    "Tolerances",
    "ScatteringData",
    "classify",
    "invariants",
    "half_bound_states",
    "scattering_eps",
    "scattering_limit",
    "scattering_convergence",
    "fit_rate",
    "fixture",
    "fixture_names",
]
