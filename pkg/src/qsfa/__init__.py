"""Photoelectron momentum distributions from two-color ionization where the
weak color is a quantized mode (squeezed vacuum, coherent, or thermal)."""

__version__ = "0.1.0"

from qsfa.fields import (
    AtomSpec,
    FieldConfig,
    HELIUM,
    electric_field,
    intensity_to_amplitude,
    squeezing_from_intensity,
    vector_potential,
)
from qsfa.phase_space import (
    CoherentState,
    SqueezedVacuum,
    ThermalState,
    husimi_eval,
    make_nodes,
    rotate_dist,
)

__all__ = [
    "AtomSpec",
    "FieldConfig",
    "HELIUM",
    "electric_field",
    "intensity_to_amplitude",
    "squeezing_from_intensity",
    "vector_potential",
    "CoherentState",
    "SqueezedVacuum",
    "ThermalState",
    "husimi_eval",
    "make_nodes",
    "rotate_dist",
]
