"""Circuit netlist: lumped and distributed elements, ports, JSON ingestion.

All element values are in SI units (ohm, farad, henry, seconds of delay,
meters, m/s, ampere, weber).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


class InvalidModelError(ValueError):
    """Raised when a netlist violates its structural invariants."""


@dataclass(frozen=True)
class Resistor:
    r: float
    nodes: tuple[str, str]


@dataclass(frozen=True)
class Capacitor:
    c: float
    nodes: tuple[str, str]


@dataclass(frozen=True)
class Inductor:
    l: float
    nodes: tuple[str, str]


@dataclass(frozen=True)
class TransmissionLine:
    """Lossless line of characteristic impedance z0 and one-way delay [s]."""

    z0: float
    delay: float
    nodes: tuple[str, str]


@dataclass(frozen=True)
class CoupledLine:
    """Symmetric pair of coupled lines over ground.

    c_coupling is the capacitance per length between the two conductors,
    c_total the total capacitance per length of either conductor (ground +
    mutual). Even/odd mode impedances follow from these and the shared
    phase velocity. Nodes are (line1_left, line2_left, line1_right,
    line2_right).
    """

    c_coupling: float
    c_total: float
    length: float
    velocity: float
    nodes: tuple[str, str, str, str]


@dataclass(frozen=True)
class SquidInductor:
    """Flux-tunable SQUID stamped as its linear inductance."""

    ic: float
    flux: float
    nodes: tuple[str, str]


@dataclass(frozen=True)
class Port:
    node: str
    z: float


Element = Resistor | Capacitor | Inductor | TransmissionLine | CoupledLine | SquidInductor


@dataclass
class CircuitModel:
    nodes: list[str]
    ground: str
    elements: list[Element] = field(default_factory=list)
    ports: list[Port] = field(default_factory=list)

    def __post_init__(self):
        self.validate()

    def validate(self):
        known = set(self.nodes)
        if self.ground not in known:
            raise InvalidModelError(f"ground node {self.ground!r} not in node list")
        if len(known) != len(self.nodes):
            raise InvalidModelError("duplicate node names")
        for el in self.elements:
            for n in el.nodes:
                if n not in known:
                    raise InvalidModelError(f"element references unknown node {n!r}")
            if isinstance(el, Resistor) and el.r <= 0:
                raise InvalidModelError("resistance must be > 0")
            if isinstance(el, Capacitor) and el.c <= 0:
                raise InvalidModelError("capacitance must be > 0")
            if isinstance(el, Inductor) and el.l <= 0:
                raise InvalidModelError("inductance must be > 0")
            if isinstance(el, TransmissionLine) and (el.z0 <= 0 or el.delay <= 0):
                raise InvalidModelError("transmission line needs z0 > 0 and delay > 0")
            if isinstance(el, CoupledLine):
                if el.length <= 0 or el.velocity <= 0:
                    raise InvalidModelError("coupled line needs length > 0 and velocity > 0")
                if not 0 < el.c_coupling < el.c_total:
                    raise InvalidModelError("coupled line needs 0 < C'_C < C'_T")
            if isinstance(el, SquidInductor) and el.ic <= 0:
                raise InvalidModelError("SQUID critical current must be > 0")
        port_nodes = [p.node for p in self.ports]
        if len(set(port_nodes)) != len(port_nodes):
            raise InvalidModelError("ports must reference distinct nodes")
        for p in self.ports:
            if p.node not in known or p.node == self.ground:
                raise InvalidModelError(f"port node {p.node!r} invalid")
            if p.z <= 0:
                raise InvalidModelError("port reference impedance must be > 0")

    @property
    def live_nodes(self) -> list[str]:
        """Non-ground nodes, in declaration order."""
        return [n for n in self.nodes if n != self.ground]

    # --- JSON netlist format ------------------------------------------------

    @classmethod
    def from_json(cls, text: str) -> "CircuitModel":
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_dict(cls, d: dict) -> "CircuitModel":
        try:
            nodes = list(d["nodes"])
            ground = d["ground"]
            elements = [_element_from_dict(e) for e in d.get("elements", [])]
            ports = [Port(node=p["node"], z=float(p["z"])) for p in d.get("ports", [])]
        except (KeyError, TypeError) as exc:
            raise InvalidModelError(f"malformed netlist: {exc}") from exc
        return cls(nodes=nodes, ground=ground, elements=elements, ports=ports)

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "ground": self.ground,
            "elements": [_element_to_dict(e) for e in self.elements],
            "ports": [{"node": p.node, "z": p.z} for p in self.ports],
        }

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _element_from_dict(e: dict) -> Element:
    kind = e.get("type")
    nodes = tuple(e["nodes"])
    if kind == "resistor":
        return Resistor(r=float(e["r"]), nodes=nodes)
    if kind == "capacitor":
        return Capacitor(c=float(e["c"]), nodes=nodes)
    if kind == "inductor":
        return Inductor(l=float(e["l"]), nodes=nodes)
    if kind == "tline":
        return TransmissionLine(z0=float(e["z0"]), delay=float(e["delay_s"]), nodes=nodes)
    if kind == "coupled_line":
        return CoupledLine(
            c_coupling=float(e["cc_per_m"]),
            c_total=float(e["ct_per_m"]),
            length=float(e["length_m"]),
            velocity=float(e["velocity_m_per_s"]),
            nodes=nodes,
        )
    if kind == "squid":
        return SquidInductor(ic=float(e["ic"]), flux=float(e["flux"]), nodes=nodes)
    raise InvalidModelError(f"unknown element type {kind!r}")


def _element_to_dict(el: Element) -> dict:
    if isinstance(el, Resistor):
        return {"type": "resistor", "r": el.r, "nodes": list(el.nodes)}
    if isinstance(el, Capacitor):
        return {"type": "capacitor", "c": el.c, "nodes": list(el.nodes)}
    if isinstance(el, Inductor):
        return {"type": "inductor", "l": el.l, "nodes": list(el.nodes)}
    if isinstance(el, TransmissionLine):
        return {"type": "tline", "z0": el.z0, "delay_s": el.delay, "nodes": list(el.nodes)}
    if isinstance(el, CoupledLine):
        return {
            "type": "coupled_line",
            "cc_per_m": el.c_coupling,
            "ct_per_m": el.c_total,
            "length_m": el.length,
            "velocity_m_per_s": el.velocity,
            "nodes": list(el.nodes),
        }
    if isinstance(el, SquidInductor):
        return {"type": "squid", "ic": el.ic, "flux": el.flux, "nodes": list(el.nodes)}
    raise TypeError(f"unknown element {el!r}")
