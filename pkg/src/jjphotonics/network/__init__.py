from .elements import (
    Capacitor,
    CircuitModel,
    CoupledLine,
    Inductor,
    InvalidModelError,
    Port,
    Resistor,
    SquidInductor,
    TransmissionLine,
)
from .solver import (
    AdmittanceMatrix,
    SParameterSet,
    SingularFrequencyWarning,
    assemble_admittance,
    input_impedance,
    s_parameters,
    write_impedance_csv,
    write_touchstone,
)
from .design import (
    INFINITE_INDUCTANCE,
    anti_resonance_frequency,
    anti_resonance_flux_sweep,
    resonator_summary,
    squid_inductance,
)
from .models import (
    PAPER_F_DESIGN,
    beamsplitter_bias_tee,
    paper_circuit_impedance,
    rc_branch,
    resonator_branch,
)

__all__ = [
    "AdmittanceMatrix",
    "Capacitor",
    "CircuitModel",
    "CoupledLine",
    "Inductor",
    "InvalidModelError",
    "Port",
    "Resistor",
    "SParameterSet",
    "SingularFrequencyWarning",
    "SquidInductor",
    "TransmissionLine",
    "INFINITE_INDUCTANCE",
    "PAPER_F_DESIGN",
    "anti_resonance_frequency",
    "anti_resonance_flux_sweep",
    "assemble_admittance",
    "beamsplitter_bias_tee",
    "input_impedance",
    "paper_circuit_impedance",
    "rc_branch",
    "resonator_branch",
    "resonator_summary",
    "s_parameters",
    "squid_inductance",
    "write_impedance_csv",
    "write_touchstone",
]
