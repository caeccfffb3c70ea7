"""Command-line front end.

Subcommands read a JSON config validated against a strict schema (unknown
keys rejected), compute, and write CSV/JSON artifacts atomically into the
output directory. Exit codes: 0 ok, 2 config error, 3 numerical failure,
4 I/O error. Identical config and seed produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

try:
    import jsonschema
except ImportError:  # pragma: no cover
    jsonschema = None


class ConfigError(ValueError):
    pass


# --- config schemas ---------------------------------------------------------

def _obj(props, required=()):
    return {"type": "object", "properties": props,
            "required": list(required), "additionalProperties": False}

_GRID = _obj({"f_min_hz": {"type": "number"}, "f_max_hz": {"type": "number"},
              "df_hz": {"type": "number", "exclusiveMinimum": 0}},
             ("f_min_hz", "f_max_hz", "df_hz"))

_CIRCUIT = _obj({
    "r_ohm": {"type": "number"}, "c_farad": {"type": "number"},
    "l_p_henry": {"type": "number"}, "z0_ohm": {"type": "number"},
    "z1_ohm": {"type": "number"}, "z_load_ohm": {"type": "number"},
    "f_design_hz": {"type": "number"},
})

SCHEMAS = {
    "network": _obj({
        "schema_version": {"const": 1},
        "netlist": {"type": ["object", "string"]},
        "frequencies": _GRID,
        "impedance_node": {"type": "string"},
        "anti_resonance": _obj({
            "l_eff_henry": {"type": "number"}, "c_eff_farad": {"type": "number"},
            "ic_amp": {"type": "number"}, "v_bias_volt": {"type": "number"},
            "r_series_ohm": {"type": "number"},
            "flux_points": {"type": "integer", "minimum": 3}},
            ("l_eff_henry", "c_eff_farad", "ic_amp", "v_bias_volt", "r_series_ohm")),
    }, ("schema_version", "netlist", "frequencies")),
    "pe": _obj({
        "schema_version": {"const": 1},
        "circuit": _CIRCUIT,
        "temperature_k": {"type": "number", "exclusiveMinimum": 0},
        "grid": _obj({"half_span_hz": {"type": "number"},
                      "df_hz": {"type": "number"}},
                     ("half_span_hz", "df_hz")),
        "z_table_max_hz": {"type": "number"},
        "solver": _obj({"tol": {"type": "number"},
                        "max_iter": {"type": "integer"}}),
    }, ("schema_version", "temperature_k", "grid")),
    "map": _obj({
        "schema_version": {"const": 1},
        "circuit": _CIRCUIT,
        "temperature_k": {"type": "number", "exclusiveMinimum": 0},
        "grid": _obj({"half_span_hz": {"type": "number"},
                      "df_hz": {"type": "number"}},
                     ("half_span_hz", "df_hz")),
        "z_table_max_hz": {"type": "number"},
        "ic_amp": {"type": "number", "exclusiveMinimum": 0},
        "map": _obj({"f_min_hz": {"type": "number"}, "f_max_hz": {"type": "number"},
                     "df_hz": {"type": "number"}, "vj_min_hz": {"type": "number"},
                     "vj_max_hz": {"type": "number"}, "dvj_hz": {"type": "number"}},
                    ("f_min_hz", "f_max_hz", "df_hz", "vj_min_hz", "vj_max_hz", "dvj_hz")),
        "flux_sweep": _obj({"flux_fracs": {"type": "array"},
                            "band_hz": {"type": "array"},
                            "vj_points": {"type": "integer"}},
                           ("flux_fracs", "band_hz")),
    }, ("schema_version", "temperature_k", "grid", "ic_amp", "map")),
    "extract": _obj({
        "schema_version": {"const": 1},
        "map_csv": {"type": "string"},
        "r_dc_ohm": {"type": "number"},
        "fit": _obj({"enabled": {"type": "boolean"},
                     "fixed_r_ohm": {"type": "number"},
                     "init": {"type": "object"},
                     "max_nfev": {"type": "integer"}}),
    }, ("schema_version", "map_csv")),
    "simulate": _obj({
        "schema_version": {"const": 1},
        "seed": {"type": "integer"},
        "duration_s": {"type": "number", "exclusiveMinimum": 0},
        "source": _obj({
            "base_rate_hz": {"type": "number"}, "rc_time_s": {"type": "number"},
            "charging_energy_joule": {"type": "number"},
            "bias_detuning_hz": {"type": "number"},
            "kappa_hz": {"type": "number"}, "t_eff_k": {"type": "number"},
            "charge_reset": {"type": "boolean"},
            "drive": _obj({"period_s": {"type": "number"}, "fwhm_s": {"type": "number"},
                           "base_flux_frac": {"type": "number"},
                           "pulse_flux_frac": {"type": "number"}}),
            "latch": _obj({"enabled": {"type": "boolean"},
                           "enter_ic_frac": {"type": "number"},
                           "exit_ic_frac": {"type": "number"},
                           "exit_on_frustration": {"type": "boolean"}}),
        }, ("base_rate_hz",)),
        "waveform": _obj({"sample_interval_s": {"type": "number"},
                          "kappa_hz": {"type": "number"}}),
        "g2": _obj({"bin_s": {"type": "number"}, "max_tau_s": {"type": "number"}},
                   ("bin_s", "max_tau_s")),
    }, ("schema_version", "seed", "duration_s", "source")),
    "correlate": _obj({
        "schema_version": {"const": 1},
        "seed": {"type": "integer"},
        "n_blocks": {"type": "integer", "minimum": 4},
        "n_groups": {"type": "integer", "minimum": 2},
        "chain": _obj({
            "g0": {"type": "number"}, "g1": {"type": "number"},
            "n0": {"type": "number"}, "n1": {"type": "number"},
            "cross_noise": {"type": "number"}, "crosstalk": {"type": "number"},
            "f0_hz": {"type": "number"}, "f_lo_hz": {"type": "number"},
            "dt_s": {"type": "number"}, "block_size": {"type": "integer"}}),
        "input": _obj({
            "kind": {"enum": ["none", "coherent", "thermal", "events"]},
            "photons_per_sample": {"type": "number"},
            "events_csv": {"type": "string"},
            "kappa_hz": {"type": "number"}},
            ("kind",)),
        "fock_correction_kappa_hz": {"type": "number"},
    }, ("schema_version", "seed", "n_blocks", "input")),
    "thermal": _obj({
        "schema_version": {"const": 1},
        "r_ohm": {"type": "number", "exclusiveMinimum": 0},
        "rc_time_s": {"type": "number", "exclusiveMinimum": 0},
        "t_phonon_k": {"type": "number"},
        "geometry": _obj({
            "wire_length_m": {"type": "number"}, "wire_width_m": {"type": "number"},
            "wire_thickness_m": {"type": "number"}, "n_wires": {"type": "integer"},
            "total_volume_m3": {"type": "number"},
            "sigma_ep": {"type": "number"}}),
    }, ("schema_version", "r_ohm", "rc_time_s")),
}


def validate_config(command: str, cfg: dict):
    schema = SCHEMAS[command]
    if jsonschema is not None:
        try:
            jsonschema.validate(cfg, schema)
        except jsonschema.ValidationError as exc:
            raise ConfigError(f"config invalid: {exc.message}") from exc
    elif not isinstance(cfg, dict):  # pragma: no cover
        raise ConfigError("config must be an object")


# --- atomic outputs ---------------------------------------------------------

class OutputDir:
    def __init__(self, root):
        self.root = root
        os.makedirs(root, exist_ok=True)
        self.written = []

    def path(self, name):
        return os.path.join(self.root, name)

    def write_text(self, name, text):
        self._atomic(name, text.encode())

    def write_json(self, name, obj):
        self._atomic(name, (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode())

    def _atomic(self, name, data: bytes):
        target = self.path(name)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=name + ".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        self.written.append(target)

    def via_file(self, name, writer):
        """Atomic variant for writers that need a path."""
        target = self.path(name)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=name + ".tmp")
        os.close(fd)
        try:
            writer(tmp)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        self.written.append(target)


# --- shared builders --------------------------------------------------------

def _impedance_from_cfg(cfg) -> tuple:
    from .network.models import PAPER_F_DESIGN, paper_circuit_impedance
    from .pe import EnvironmentImpedance, FrequencyGrid

    circ = cfg.get("circuit", {})
    kw = {
        "r": circ.get("r_ohm", 32.1e3), "c": circ.get("c_farad", 56.7e-15),
        "l_p": circ.get("l_p_henry", 53e-12), "z0": circ.get("z0_ohm", 110.0),
        "z1": circ.get("z1_ohm", 22.0), "z_load": circ.get("z_load_ohm", 50.0),
        "f_design": circ.get("f_design_hz", PAPER_F_DESIGN),
    }
    half = cfg["grid"]["half_span_hz"]
    df = cfg["grid"]["df_hz"]
    z_max = cfg.get("z_table_max_hz", half + 2 * df)
    z = EnvironmentImpedance.from_function(
        lambda f: paper_circuit_impedance(f, **kw), z_max, df / 2)
    grid = FrequencyGrid.symmetric(half, df)
    return z, grid, kw


def _solve_pe_from_cfg(cfg):
    from .pe import MinnhagenOptions, solve_minnhagen

    z, grid, kw = _impedance_from_cfg(cfg)
    sol = cfg.get("solver", {})
    opts = MinnhagenOptions(tol=sol.get("tol", 1e-10),
                            max_iter=sol.get("max_iter", 500))
    pe = solve_minnhagen(z, cfg["temperature_k"], grid, opts)
    return pe, z, kw


# --- subcommands ------------------------------------------------------------

def cmd_network(cfg, out: OutputDir, threads: int):
    from .network import (CircuitModel, anti_resonance_flux_sweep, input_impedance,
                          s_parameters, write_impedance_csv, write_touchstone)
    from .constants import Phi_0

    if isinstance(cfg["netlist"], str):
        with open(cfg["netlist"]) as fh:
            model = CircuitModel.from_json(fh.read())
    else:
        model = CircuitModel.from_dict(cfg["netlist"])
    fr = cfg["frequencies"]
    freqs = np.arange(fr["f_min_hz"], fr["f_max_hz"] + fr["df_hz"] / 2, fr["df_hz"])

    def chunks(seq, n):
        step = max(1, len(seq) // max(n, 1))
        return [seq[i:i + step] for i in range(0, len(seq), step)]

    if model.ports:
        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                parts = list(pool.map(lambda c: s_parameters(model, c), chunks(freqs, threads)))
            s = np.concatenate([p.s for p in parts])
            sps = parts[0]
            sps.frequencies, sps.s = freqs, s
        else:
            sps = s_parameters(model, freqs)
        out.via_file("sparams.txt", lambda p: write_touchstone(p, sps))
    node = cfg.get("impedance_node")
    if node:
        zv = input_impedance(model, node, freqs)
        out.via_file("impedance.csv", lambda p: write_impedance_csv(p, freqs, zv))
    ar = cfg.get("anti_resonance")
    if ar:
        fluxes = np.linspace(0.0, 1.0, ar.get("flux_points", 201)) * Phi_0
        nu0, latched = anti_resonance_flux_sweep(
            ar["l_eff_henry"], ar["c_eff_farad"], ar["ic_amp"], fluxes,
            ar["v_bias_volt"], ar["r_series_ohm"])
        lines = ["flux_frac,nu0_hz,latched"]
        for phi, nu, la in zip(fluxes / Phi_0, nu0, latched):
            lines.append(f"{phi:.6f},{nu:.9e},{int(la)}")
        out.write_text("anti_resonance.csv", "\n".join(lines) + "\n")
    return {"frequencies": len(freqs)}


def cmd_pe(cfg, out: OutputDir, threads: int):
    from .pe import check_pe

    pe, z, kw = _solve_pe_from_cfg(cfg)
    out.via_file("pe.csv", lambda p: pe.write_csv(p, sidecar=False))
    report = dict(check_pe(pe))
    report.update(pe.metadata)
    report["circuit"] = kw
    out.write_json("pe_check.json", report)
    return report


def cmd_map(cfg, out: OutputDir, threads: int):
    from .pe import FrequencyGrid, JunctionParams, band_rate, emission_rate_density

    pe, z, kw = _solve_pe_from_cfg(cfg)
    mp = cfg["map"]
    fg = FrequencyGrid.step(mp["f_min_hz"], mp["f_max_hz"], mp["df_hz"])
    vg = FrequencyGrid.step(mp["vj_min_hz"], mp["vj_max_hz"], mp["dvj_hz"])
    emap = emission_rate_density(pe, z, JunctionParams(ic=cfg["ic_amp"]), fg, vg)
    out.via_file("map.csv", emap.write_csv)
    fmax, vjmax = emap.argmax()
    meta = {"argmax_f_hz": fmax, "argmax_vj_hz": vjmax,
            "temperature_k": cfg["temperature_k"], "ic_amp": cfg["ic_amp"]}
    sweep = cfg.get("flux_sweep")
    if sweep:
        lo, hi = sweep["band_hz"]
        vj_pts = np.linspace(vg.f_min + (hi - lo), vg.f_max, sweep.get("vj_points", 120))
        lines = ["flux_frac,vj_hz,band_rate_hz"]
        ic0 = cfg["ic_amp"]
        for frac in sweep["flux_fracs"]:
            ic_eff = ic0 * abs(np.cos(np.pi * frac))
            scale = (ic_eff / ic0) ** 2 if ic0 > 0 else 0.0
            for vj in vj_pts:
                rate = scale * band_rate(emap, lo, hi, vj)
                lines.append(f"{frac:.6f},{vj:.9e},{rate:.9e}")
        out.write_text("band_rate.csv", "\n".join(lines) + "\n")
    out.write_json("map_meta.json", meta)
    return meta


def cmd_extract(cfg, out: OutputDir, threads: int):
    from .extraction import fit_circuit, run_extraction
    from .pe import EmissionMap

    emap = EmissionMap.read_csv(cfg["map_csv"])
    res = run_extraction(emap, r_dc=cfg.get("r_dc_ohm"))
    # charging energy from the extracted charge-peak centroid
    nu, p = res.pe.nu, res.pe.values
    selw = (nu > -3e9) & (nu < 4.5e9)
    ec_ghz = float(np.sum(nu[selw] * p[selw]) / np.sum(p[selw]) / 1e9)
    report = {
        "t_eff_K": res.t_eff,
        "beta": res.beta,
        "ic_A": res.ic,
        "ec_GHz": ec_ghz,
        "residuals": {"pe_norm": res.pe.norm_residual(),
                      "pe_balance": res.pe.balance_residual(floor_frac=1e-4)},
        "warnings": res.diagnostics.get("warnings", []),
        "sigma_f_containment": res.diagnostics.get("sigma_f_containment"),
    }
    out.via_file("extracted_pe.csv", lambda pth: res.pe.write_csv(pth, sidecar=False))
    out.via_file("extracted_impedance.csv", res.z_extracted.write_csv)
    fit_cfg = cfg.get("fit", {})
    if fit_cfg.get("enabled"):
        from .extraction import FitOptions
        init = {"c": 56.7e-15, "l_p": 53e-12, "z0": 110.0, "z1": 22.0,
                "t": res.t_eff, "ic": res.ic}
        init.update(fit_cfg.get("init", {}))
        fit = fit_circuit(emap, fit_cfg.get("fixed_r_ohm", 32.1e3), init,
                          FitOptions(max_nfev=fit_cfg.get("max_nfev", 400)))
        report["fit"] = {"params": fit.params, "residual_norm": fit.residual_norm,
                         "iterations": fit.iterations, "converged": fit.converged,
                         "ec_GHz": fit.ec_ghz}
    out.write_json("extract_report.json", report)
    return report


def cmd_simulate(cfg, out: OutputDir, threads: int):
    from .correlator import write_record
    from .dynamics import (DriveParams, LatchParams, SourceParams, events_to_envelope,
                           g2_from_events, simulate_source)

    s = cfg["source"]
    drive = None
    if "drive" in s:
        d = s["drive"]
        drive = DriveParams(period=d.get("period_s", 6e-9), fwhm=d.get("fwhm_s", 1.5e-9),
                            base_flux_frac=d.get("base_flux_frac", 0.30),
                            pulse_flux_frac=d.get("pulse_flux_frac", 0.50))
    latch = LatchParams()
    if "latch" in s:
        la = s["latch"]
        latch = LatchParams(enabled=la.get("enabled", False),
                            enter_ic_frac=la.get("enter_ic_frac", 0.0),
                            exit_ic_frac=la.get("exit_ic_frac", 0.3),
                            exit_on_frustration=la.get("exit_on_frustration", True))
    params = SourceParams(
        base_rate=s["base_rate_hz"], rc_time=s.get("rc_time_s", 1.64e-9),
        charging_energy=s.get("charging_energy_joule", 9.05e-25),
        bias_detuning=s.get("bias_detuning_hz", 0.0),
        kappa=s.get("kappa_hz", 1 / 0.28e-9), t_eff=s.get("t_eff_k", 0.021),
        drive=drive, latch=latch, charge_reset=s.get("charge_reset", False))
    rec = simulate_source(params, cfg["duration_s"], cfg["seed"])
    out.via_file("events.csv", rec.write_csv)
    meta = {"n_events": int(rec.times.size), "duration_s": cfg["duration_s"],
            "seed": cfg["seed"]}
    wf = cfg.get("waveform")
    if wf:
        env = events_to_envelope(rec.times, wf.get("kappa_hz", params.kappa),
                                 wf["sample_interval_s"], cfg["duration_s"],
                                 seed=cfg["seed"] + 1)
        out.via_file("waveform.bin", lambda p: write_record(
            p, [env], wf["sample_interval_s"], kind="envelope"))
    g2cfg = cfg.get("g2")
    if g2cfg and rec.times.size >= 2:
        tau, g2, sig = g2_from_events(rec.times, g2cfg["bin_s"], g2cfg["max_tau_s"],
                                      rec.duration)
        lines = ["tau_s,g2,sigma"]
        for t, g, sg in zip(tau, g2, sig):
            lines.append(f"{t:.9e},{g:.9e},{sg:.9e}")
        out.write_text("event_g2.csv", "\n".join(lines) + "\n")
    out.write_json("simulate_meta.json", meta)
    return meta


def cmd_correlate(cfg, out: OutputDir, threads: int):
    from .correlator import (ChainModel, CorrelatorAccumulator, assemble_g1_g2,
                             demodulate_envelopes, on_off_input, read_record,
                             simulate_chain)

    ch = cfg.get("chain", {})
    chain = ChainModel(g0=ch.get("g0", 1e4), g1=ch.get("g1", 1e4),
                       n0=ch.get("n0", 7.0), n1=ch.get("n1", 7.0),
                       cross_noise=ch.get("cross_noise", 0.0),
                       crosstalk=ch.get("crosstalk", 0.0),
                       f0=ch.get("f0_hz", 6e9), f_lo=ch.get("f_lo_hz", 4.5e9),
                       dt=ch.get("dt_s", 0.5e-9),
                       block_size=ch.get("block_size", 128))
    n_blocks = cfg["n_blocks"]
    n_adc = 2 * chain.block_size * n_blocks
    rng = np.random.default_rng(cfg["seed"])
    inp = cfg["input"]
    if inp["kind"] == "none":
        signal = np.zeros(n_adc, dtype=complex)
    elif inp["kind"] == "coherent":
        nph = inp.get("photons_per_sample", 1.0)
        signal = np.full(n_adc, np.sqrt(nph / chain.dt), dtype=complex)
    elif inp["kind"] == "thermal":
        nph = inp.get("photons_per_sample", 1.0)
        signal = (rng.standard_normal(n_adc) + 1j * rng.standard_normal(n_adc)) \
            * np.sqrt(nph / chain.dt / 2)
    else:
        channels, meta = read_record(inp["events_csv"])
        signal = channels[0]
    gated, tags = on_off_input(signal, chain, n_blocks)
    v0, v1 = simulate_chain(gated, chain, n_adc, rng=rng)
    env = demodulate_envelopes(v0, v1, chain, block_tags=tags)
    acc = CorrelatorAccumulator(chain.block_size, chain.envelope_interval,
                                cfg.get("n_groups", 16))
    acc.add(env)
    res = assemble_g1_g2(acc.finalize(), chain,
                         packet_decay_rate=cfg.get("fock_correction_kappa_hz"))
    out.via_file("correlation.csv", res.write_csv)
    zl = chain.block_size - 1
    meta = {"g2_zero": float(res.g2[zl]), "sigma_g2_zero": float(res.sigma_g2[zl]),
            "g1_zero": float(np.real(res.g1[zl])),
            "n_blocks_on": res.n_blocks_on, "n_blocks_off": res.n_blocks_off}
    out.write_json("correlate_meta.json", meta)
    return meta


def cmd_thermal(cfg, out: OutputDir, threads: int):
    from .thermal import PAPER_RESISTOR, Material, ResistorGeometry, thermal_report

    geom = PAPER_RESISTOR
    g = cfg.get("geometry")
    if g:
        geom = ResistorGeometry(
            wire_length=g.get("wire_length_m", 20e-6),
            wire_width=g.get("wire_width_m", 0.3e-6),
            wire_thickness=g.get("wire_thickness_m", 15e-9),
            n_wires=g.get("n_wires", 12),
            total_volume=g.get("total_volume_m3", 2000e-18),
            sigma_ep=g.get("sigma_ep", 0.2e9))
    report = thermal_report(cfg["r_ohm"], cfg["rc_time_s"], geom,
                            cfg.get("t_phonon_k", 15e-3))
    out.write_json("thermal.json", report)
    return report


COMMANDS = {
    "network": cmd_network,
    "pe": cmd_pe,
    "map": cmd_map,
    "extract": cmd_extract,
    "simulate": cmd_simulate,
    "correlate": cmd_correlate,
    "thermal": cmd_thermal,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="jjphotonics",
                                     description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="JSON config path")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads (results are invariant to this)")
    parser.add_argument("--dry-run", action="store_true",
                        help="validate the config and print the plan only")
    args = parser.parse_args(argv)

    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        print(json.dumps({"error": "io", "detail": str(exc)}), file=sys.stderr)
        return 4
    except json.JSONDecodeError as exc:
        print(json.dumps({"error": "config", "detail": str(exc)}), file=sys.stderr)
        return 2

    try:
        validate_config(args.command, cfg)
    except ConfigError as exc:
        print(json.dumps({"error": "config", "detail": str(exc)}), file=sys.stderr)
        return 2

    if args.dry_run:
        print(json.dumps({"command": args.command, "out": args.out,
                          "threads": args.threads, "config": cfg}, indent=2))
        return 0

    try:
        out = OutputDir(args.out)
        summary = COMMANDS[args.command](cfg, out, args.threads)
    except (ConfigError, KeyError) as exc:
        print(json.dumps({"error": "config", "detail": str(exc)}), file=sys.stderr)
        return 2
    except OSError as exc:
        print(json.dumps({"error": "io", "detail": str(exc)}), file=sys.stderr)
        return 4
    except (ValueError, ArithmeticError, np.linalg.LinAlgError, RuntimeError) as exc:
        print(json.dumps({"error": "numerical", "detail": str(exc)}), file=sys.stderr)
        return 3

    print(json.dumps({"command": args.command, "outputs": out.written,
                      "summary": summary}, indent=2, sort_keys=True, default=float))
    return 0


if __name__ == "__main__":
    sys.exit(main())
