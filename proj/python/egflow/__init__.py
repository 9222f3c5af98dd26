"""Extrinsic geometric flows on codimension-one foliations."""

import json as _json

from ._egflow import (
    InvalidInputError,
    NotHyperbolicError,
    BlowupError,
    NumericalSolveError,
    sigma_from_tau,
    tau_from_sigma,
    profile_from_roots,
    beta_coefficient,
    dtau_decomposition,
    closure_matrix,
    closure_eigensystem,
    analyze_flow,
    ricci_discriminant_n3,
    umbilical_psi,
    solve_transport,
    solve_conservation_law,
    blowup_time_conservation,
    ricci_umbilical_blowup_time,
    gauss_curvature_rotational,
    gauss_curvature_efg,
    run_scenario_json,
    scenario_names,
)

__all__ = [
    "InvalidInputError",
    "NotHyperbolicError",
    "BlowupError",
    "NumericalSolveError",
    "sigma_from_tau",
    "tau_from_sigma",
    "profile_from_roots",
    "beta_coefficient",
    "dtau_decomposition",
    "closure_matrix",
    "closure_eigensystem",
    "analyze_flow",
    "ricci_discriminant_n3",
    "umbilical_psi",
    "solve_transport",
    "solve_conservation_law",
    "blowup_time_conservation",
    "ricci_umbilical_blowup_time",
    "gauss_curvature_rotational",
    "gauss_curvature_efg",
    "run_scenario",
    "scenario_names",
]


def run_scenario(name, **kwargs):
    """Run a named worked example and return its report as a dict."""
    return _json.loads(run_scenario_json(name, **kwargs))
