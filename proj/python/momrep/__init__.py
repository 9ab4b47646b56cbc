"""Equilibrium momentum distributions for quantum fluids, crystals and condensates.

Thin Python face of the C++ core; the heavy lifting lives in the compiled
``_momrep`` extension.
"""

try:
    from ._momrep import (  # type: ignore[import-not-found]
        PhysicalParams,
        condensate_peaks,
        config_digest,
        fermi_energy,
        make_params,
        normalization_constant_fluid,
        rho1_momentum_fluid,
        tau_ideal_fermi_zero_temp,
    )
except ImportError:  # test tree: extension built next to the package, not inside it
    from _momrep import (  # type: ignore[import-not-found]
        PhysicalParams,
        condensate_peaks,
        config_digest,
        fermi_energy,
        make_params,
        normalization_constant_fluid,
        rho1_momentum_fluid,
        tau_ideal_fermi_zero_temp,
    )

__all__ = [
    "PhysicalParams",
    "condensate_peaks",
    "config_digest",
    "fermi_energy",
    "make_params",
    "normalization_constant_fluid",
    "rho1_momentum_fluid",
    "tau_ideal_fermi_zero_temp",
]
