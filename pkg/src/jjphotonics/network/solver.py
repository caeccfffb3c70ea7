"""Admittance assembly, S-parameters and driving-point impedance.

Lumped elements stamp as two-node admittances, transmission lines and
coupled lines as exact frequency-domain multiport blocks. Ports are
reduced onto by Schur complement of the interior nodes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .design import INFINITE_INDUCTANCE, squid_inductance
from .elements import (
    Capacitor,
    CircuitModel,
    CoupledLine,
    Inductor,
    InvalidModelError,
    Resistor,
    SquidInductor,
    TransmissionLine,
)

_SIN_TOL = 1e-9


class SingularFrequencyWarning(UserWarning):
    """A sweep point hit an exact line pole; the row is flagged NaN."""


class _SingularFrequency(ArithmeticError):
    pass


@dataclass
class AdmittanceMatrix:
    frequency: float
    matrix: np.ndarray          # complex, indexed by `nodes`
    nodes: list[str]            # non-ground nodes


@dataclass
class SParameterSet:
    frequencies: np.ndarray
    s: np.ndarray               # shape (n_freq, n_ports, n_ports), NaN where singular
    port_nodes: list[str]
    warnings: list[str]


def _line_y(z0: float, theta: float | np.ndarray) -> np.ndarray:
    s = np.sin(theta)
    if np.any(np.abs(s) < _SIN_TOL):
        raise _SingularFrequency("transmission line at an exact resonance pole")
    c = np.cos(theta)
    y = 1.0 / (1j * z0 * s)
    return np.array([[c * y, -y], [-y, c * y]])


def _coupled_line_y(el: CoupledLine, f: float) -> np.ndarray:
    """4-port admittance of a symmetric coupled pair via even/odd modes.

    Port order (line1_left, line2_left, line1_right, line2_right).
    """
    c_even = el.c_total - el.c_coupling
    c_odd = el.c_total + el.c_coupling
    z_even = 1.0 / (el.velocity * c_even)
    z_odd = 1.0 / (el.velocity * c_odd)
    theta = 2.0 * np.pi * f * el.length / el.velocity
    ye = _line_y(z_even, theta)
    yo = _line_y(z_odd, theta)
    y = np.zeros((4, 4), dtype=complex)
    # indices: 0=1L, 1=2L, 2=1R, 3=2R; mode transform (V1 +- V2)/2
    y[0, 0] = y[1, 1] = y[2, 2] = y[3, 3] = (ye[0, 0] + yo[0, 0]) / 2
    y[0, 1] = y[1, 0] = y[2, 3] = y[3, 2] = (ye[0, 0] - yo[0, 0]) / 2
    y[0, 2] = y[2, 0] = y[1, 3] = y[3, 1] = (ye[0, 1] + yo[0, 1]) / 2
    y[0, 3] = y[3, 0] = y[1, 2] = y[2, 1] = (ye[0, 1] - yo[0, 1]) / 2
    return y


def _stamp(mat: np.ndarray, idx: list[int | None], block: np.ndarray):
    for a, ia in enumerate(idx):
        if ia is None:
            continue
        for b, ib in enumerate(idx):
            if ib is None:
                continue
            mat[ia, ib] += block[a, b]


def assemble_admittance(model: CircuitModel, f: float) -> AdmittanceMatrix:
    """Nodal admittance matrix over non-ground nodes at frequency f [Hz]."""
    if f <= 0:
        raise ValueError("frequency must be > 0")
    live = model.live_nodes
    index = {n: i for i, n in enumerate(live)}
    n = len(live)
    mat = np.zeros((n, n), dtype=complex)
    w = 2.0 * np.pi * f

    def node_idx(names):
        return [None if m == model.ground else index[m] for m in names]

    for el in model.elements:
        if isinstance(el, Resistor):
            y = 1.0 / el.r
        elif isinstance(el, Capacitor):
            y = 1j * w * el.c
        elif isinstance(el, Inductor):
            y = 1.0 / (1j * w * el.l)
        elif isinstance(el, SquidInductor):
            l_sq = squid_inductance(el.ic, el.flux)
            if l_sq is INFINITE_INDUCTANCE or np.isinf(l_sq):
                continue  # junction on its voltage branch: open
            y = 1.0 / (1j * w * l_sq)
        elif isinstance(el, TransmissionLine):
            theta = w * el.delay
            _stamp(mat, node_idx(el.nodes), _line_y(el.z0, theta))
            continue
        elif isinstance(el, CoupledLine):
            _stamp(mat, node_idx(el.nodes), _coupled_line_y(el, f))
            continue
        else:
            raise InvalidModelError(f"cannot stamp element {el!r}")
        ia, ib = node_idx(el.nodes)
        block = np.array([[y, -y], [-y, y]])
        _stamp(mat, [ia, ib], block)

    return AdmittanceMatrix(frequency=f, matrix=mat, nodes=live)


def _port_reduced(model: CircuitModel, f: float) -> np.ndarray:
    """Admittance seen at the port nodes, interior eliminated (Schur)."""
    adm = assemble_admittance(model, f)
    index = {n: i for i, n in enumerate(adm.nodes)}
    p_idx = [index[p.node] for p in model.ports]
    i_idx = [i for i in range(len(adm.nodes)) if i not in set(p_idx)]
    y = adm.matrix
    ypp = y[np.ix_(p_idx, p_idx)]
    if not i_idx:
        return ypp
    ypi = y[np.ix_(p_idx, i_idx)]
    yip = y[np.ix_(i_idx, p_idx)]
    yii = y[np.ix_(i_idx, i_idx)]
    sol = np.linalg.solve(yii, yip)
    return ypp - ypi @ sol


def s_parameters(model: CircuitModel, frequencies) -> SParameterSet:
    """S-matrix per frequency, referenced to each port's z.

    Frequencies where a line pole makes the stamping or the interior block
    singular produce a NaN entry and a warning record instead of aborting.
    """
    if not model.ports:
        raise InvalidModelError("at least one port is required")
    freqs = np.atleast_1d(np.asarray(frequencies, dtype=float))
    np_ports = len(model.ports)
    out = np.full((freqs.size, np_ports, np_ports), np.nan + 0j, dtype=complex)
    sqrt_z = np.sqrt(np.array([p.z for p in model.ports]))
    eye = np.eye(np_ports)
    notes = []
    for k, f in enumerate(freqs):
        try:
            yp = _port_reduced(model, f)
            m = (sqrt_z[:, None] * yp) * sqrt_z[None, :]
            out[k] = np.linalg.solve((eye + m).T, (eye - m).T).T
        except (_SingularFrequency, np.linalg.LinAlgError) as exc:
            notes.append(f"f={f:.6g} Hz singular: {exc}")
    if notes:
        warnings.warn(
            f"{len(notes)} singular sweep point(s) flagged NaN", SingularFrequencyWarning
        )
    return SParameterSet(frequencies=freqs, s=out, port_nodes=[p.node for p in model.ports],
                         warnings=notes)


def input_impedance(model: CircuitModel, node: str, frequencies) -> np.ndarray:
    """Complex impedance from `node` to ground with all declared ports
    terminated by their reference impedances."""
    if node not in model.nodes or node == model.ground:
        raise InvalidModelError(f"node {node!r} not a live node")
    freqs = np.atleast_1d(np.asarray(frequencies, dtype=float))
    z = np.empty(freqs.size, dtype=complex)
    for k, f in enumerate(freqs):
        try:
            adm = assemble_admittance(model, f)
            index = {n: i for i, n in enumerate(adm.nodes)}
            mat = adm.matrix.copy()
            for p in model.ports:
                mat[index[p.node], index[p.node]] += 1.0 / p.z
            rhs = np.zeros(len(adm.nodes), dtype=complex)
            rhs[index[node]] = 1.0
            z[k] = np.linalg.solve(mat, rhs)[index[node]]
        except (_SingularFrequency, np.linalg.LinAlgError):
            z[k] = np.nan + 0j
    return z


# --- exports ---------------------------------------------------------------


def write_touchstone(path, sps: SParameterSet):
    """Whitespace-separated text: freq_Hz then Re/Im per entry, row-major."""
    n = sps.s.shape[1]
    with open(path, "w") as fh:
        fh.write(f"# jjphotonics s-parameters, {n} ports, entries row-major re im\n")
        for f, mat in zip(sps.frequencies, sps.s):
            cells = [f"{f:.9e}"]
            for row in mat:
                for v in row:
                    cells.append(f"{v.real:.9e}")
                    cells.append(f"{v.imag:.9e}")
            fh.write(" ".join(cells) + "\n")


def write_impedance_csv(path, frequencies, z):
    with open(path, "w") as fh:
        fh.write("f_hz,re_z_ohm,im_z_ohm\n")
        for f, v in zip(frequencies, z):
            fh.write(f"{f:.9e},{v.real:.9e},{v.imag:.9e}\n")
