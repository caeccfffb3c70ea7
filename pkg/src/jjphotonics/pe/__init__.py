from .grids import (
    EmissionMap,
    EnvironmentImpedance,
    FrequencyGrid,
    JunctionParams,
    PEFunction,
)
from .solver import MinnhagenOptions, check_pe, solve_minnhagen
from .forward import band_rate, emission_rate_density, tunneling_rate

__all__ = [
    "EmissionMap",
    "EnvironmentImpedance",
    "FrequencyGrid",
    "JunctionParams",
    "MinnhagenOptions",
    "PEFunction",
    "band_rate",
    "check_pe",
    "emission_rate_density",
    "solve_minnhagen",
    "tunneling_rate",
]
