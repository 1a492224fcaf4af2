"""Satellite-to-ground channel model.

Thin Python layer over the C++ core: ray geometry through an exponential
refractivity profile, Doppler over a pass, Shadowed-Rician fading and the
outage / ergodic rate / BER / goodput metrics, with Monte-Carlo checks.
"""

from ._core import (
    ConfigError,
    GeometryScenario,
    McEstimate,
    NumericalDomainError,
    PreconditionError,
    RayPath,
    RefractionProfile,
    Scenario,
    ShadowedRicianParams,
    bending_length,
    ber_upper_bound,
    cdf_power,
    cdf_power_lemma,
    doppler_table,
    ergodic_rate,
    estimate_ergodic_rate,
    estimate_outage,
    flat_earth_slant,
    geometry_table,
    goodput_lower_bound,
    ground_range,
    outage_probability,
    pdf_power,
    perf_table,
    run_cli,
    sample_power,
    trace,
    validate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
