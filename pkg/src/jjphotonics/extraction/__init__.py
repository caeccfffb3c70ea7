from .weights import WeightFunction, sigma_beta_from_pe, sigma_p_from_map, sigma_v_two_gaussians
from .inverse import (
    ExtractionError,
    ExtractionResult,
    extract_beta,
    extract_ic,
    extract_impedance,
    extract_pe,
    run_extraction,
)
from .fit import CircuitFit, FitOptions, fit_circuit, forward_map

__all__ = [
    "CircuitFit",
    "ExtractionError",
    "ExtractionResult",
    "FitOptions",
    "WeightFunction",
    "extract_beta",
    "extract_ic",
    "extract_impedance",
    "extract_pe",
    "fit_circuit",
    "forward_map",
    "run_extraction",
    "sigma_beta_from_pe",
    "sigma_p_from_map",
    "sigma_v_two_gaussians",
]
