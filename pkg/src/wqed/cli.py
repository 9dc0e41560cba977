"""Command-line front end: JSON run configurations in, CSV/JSON tables out.

Subcommands: ``spectrum | modes | dispersion | g2 | pairstates | lattice2d |
protocol``.  Every run is described by a JSON config with a parameter block
mirroring the target operation, an optional grid specification and an output
block; the emitted file echoes the full config in its header so any result
can be re-parsed into the run that produced it.

Exit codes: 0 success, 2 config/schema error, 3 numerical-convergence error.
CSV uses '.' decimals and ',' separators, complex values split into Re/Im
columns, divergences printed as the literal token ``inf``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib.metadata import version as _pkg_version

import numpy as np

try:
    import jsonschema
except ImportError:  # pragma: no cover
    jsonschema = None

from . import chiral, lattice2d, modes, protocols, spectra1d, twophoton
from ._rng import trial_rng
from .types import AtomChain, Coupling

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_NUMERIC = 3


def _version() -> str:
    try:
        return _pkg_version("wqed")
    except Exception:  # pragma: no cover
        return "unknown"


# ---------------------------------------------------------------------------
# config schema


_GRID_SCHEMA = {
    "type": "object",
    "properties": {
        "min": {"type": "number"},
        "max": {"type": "number"},
        "points": {"type": "integer", "minimum": 2},
        "scale": {"enum": ["linear", "log"]},
    },
    "required": ["min", "max", "points"],
    "additionalProperties": False,
}

_OUTPUT_SCHEMA = {
    "type": "object",
    "properties": {
        "path": {"type": "string"},
        "format": {"enum": ["csv", "json"]},
    },
    "additionalProperties": False,
}

_RATE = {"type": "number", "minimum": 0.0}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "command": {
            "enum": ["spectrum", "modes", "dispersion", "g2", "pairstates",
                     "lattice2d", "protocol"]
        },
        "params": {"type": "object"},
        "grid": _GRID_SCHEMA,
        "output": _OUTPUT_SCHEMA,
        "seed": {"type": "integer", "minimum": 0},
        "threads": {"type": "integer", "minimum": 1},
    },
    "required": ["command", "params"],
    "additionalProperties": False,
}

_PARAM_SCHEMAS = {
    "spectrum": {
        "type": "object",
        "properties": {
            "kind": {"enum": ["dicke", "chain", "ensemble", "eit"]},
            "n": {"type": "integer", "minimum": 0},
            "phi": {"type": "number"},
            "phases": {"type": "array", "items": {"type": "number"}},
            "gamma1d": {"type": "number", "exclusiveMinimum": 0.0},
            "gamma_nr": _RATE,
            "gamma_right": _RATE,
            "gamma_left": _RATE,
            "gamma_over_omega0": _RATE,
            "markovian": {"type": "boolean"},
            "sites": {"type": "integer", "minimum": 1},
            "fill": {"type": "number", "minimum": 0.0, "maximum": 1.0},
            "trials": {"type": "integer", "minimum": 1},
            "omega_c": _RATE,
            "gamma": _RATE,
        },
        "required": ["kind"],
        "additionalProperties": False,
    },
    "modes": {
        "type": "object",
        "properties": {
            "n": {"type": "integer", "minimum": 1},
            "phi": {"type": "number"},
            "phases": {"type": "array", "items": {"type": "number"}},
            "gamma1d": {"type": "number", "exclusiveMinimum": 0.0},
            "gamma_nr": _RATE,
            "gamma_right": _RATE,
            "gamma_left": _RATE,
            "dump_eigenvectors": {"type": "boolean"},
        },
        "additionalProperties": False,
    },
    "dispersion": {
        "type": "object",
        "properties": {
            "kind": {"enum": ["guided", "freespace", "chiral"]},
            "phi": {"type": "number"},
            "d_over_lambda0": {"type": "number", "exclusiveMinimum": 0.0},
            "xi": _RATE,
            "gamma1d": {"type": "number", "exclusiveMinimum": 0.0},
            "delta_omega": {"type": "number"},
            "gamma": _RATE,
        },
        "required": ["kind"],
        "additionalProperties": False,
    },
    "g2": {
        "type": "object",
        "properties": {
            "kind": {"enum": ["dicke_tau", "dicke_zero_n", "chiral_n", "chiral_single"]},
            "eps": {"type": "number"},
            "n": {"type": "integer", "minimum": 1},
            "geometry": {"enum": ["transmit", "reflect"]},
            "gamma1d": {"type": "number", "exclusiveMinimum": 0.0},
            "gamma_nr": _RATE,
            "gamma_right": {"type": "number", "exclusiveMinimum": 0.0},
            "method": {"enum": ["residue", "contour", "asymptotic"]},
        },
        "required": ["kind"],
        "additionalProperties": False,
    },
    "pairstates": {
        "type": "object",
        "properties": {
            "n": {"type": "integer", "minimum": 2},
            "phi": {"type": "number"},
            "gamma1d": {"type": "number", "exclusiveMinimum": 0.0},
            "gamma_nr": _RATE,
            "classify": {"type": "boolean"},
        },
        "required": ["n", "phi"],
        "additionalProperties": False,
    },
    "lattice2d": {
        "type": "object",
        "properties": {
            "gamma0": {"type": "number", "exclusiveMinimum": 0.0},
            "gamma_nr": _RATE,
            "method": {"enum": ["direct", "reciprocal", "closed_form"]},
            "radius": {"type": "number", "exclusiveMinimum": 0.0},
        },
        "additionalProperties": False,
    },
    "protocol": {
        "type": "object",
        "properties": {
            "kind": {"enum": ["ghz", "transfer"]},
            "n_qubits": {"type": "integer", "minimum": 2, "maximum": protocols.MAX_QUBITS},
            "shots": {"type": "integer", "minimum": 1},
            "c_plus_re": {"type": "number"},
            "c_plus_im": {"type": "number"},
            "c_minus_re": {"type": "number"},
            "c_minus_im": {"type": "number"},
        },
        "required": ["kind"],
        "additionalProperties": False,
    },
}


class ConfigError(ValueError):
    pass


def validate_config(cfg: dict) -> None:
    if jsonschema is None:  # pragma: no cover
        raise RuntimeError("jsonschema is required for config validation")
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
        jsonschema.validate(cfg["params"], _PARAM_SCHEMAS[cfg["command"]])
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid config field '{path}': {exc.message}") from exc


def make_grid(cfg: dict) -> np.ndarray:
    grid = cfg.get("grid")
    if grid is None:
        raise ConfigError("this command requires a 'grid' block")
    if grid.get("scale", "linear") == "log":
        if grid["min"] <= 0 or grid["max"] <= 0:
            raise ConfigError("log grid requires positive bounds")
        return np.geomspace(grid["min"], grid["max"], grid["points"])
    return np.linspace(grid["min"], grid["max"], grid["points"])


# ---------------------------------------------------------------------------
# output plumbing


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _plain(value):
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return "inf" if math.isinf(value) and value > 0 else \
            ("-inf" if math.isinf(value) else value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    return value


def write_table(path, fmt, cfg, columns, rows, footer=None) -> None:
    payload_cfg = json.dumps(cfg, sort_keys=True)
    if fmt == "json":
        doc = {
            "wqed-config": json.loads(payload_cfg),
            "wqed-version": _version(),
            "columns": list(columns),
            "rows": [[_plain(v) for v in row] for row in rows],
            "footer": footer or {},
        }
        text = json.dumps(doc, indent=1)
    else:
        lines = [f"# wqed-config: {payload_cfg}", f"# wqed-version: {_version()}"]
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        for key, value in (footer or {}).items():
            lines.append(f"# {key}: {value}")
        text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def parse_config_echo(path: str) -> dict:
    """Recover the run configuration echoed in an output file header."""
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
        if first.startswith("{"):
            doc = json.loads(first + fh.read())
            return doc["wqed-config"]
        if first.startswith("# wqed-config: "):
            return json.loads(first[len("# wqed-config: "):])
    raise ConfigError(f"no config echo found in {path}")


def _parallel_map(fn, values, threads: int):
    if threads <= 1 or len(values) < 4:
        return [fn(v) for v in values]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, values))


def _coupling_from(params: dict) -> Coupling:
    kw = {}
    for key in ("gamma1d", "gamma_nr", "gamma_right", "gamma_left",
                "gamma_over_omega0", "markovian"):
        if key in params:
            kw[key] = params[key]
    return Coupling(**kw)


def _chain_from(params: dict) -> AtomChain:
    if "phases" in params:
        return AtomChain(tuple(params["phases"]))
    return AtomChain.periodic(params["n"], params.get("phi", 0.0))


# ---------------------------------------------------------------------------
# command implementations


def cmd_spectrum(cfg: dict, threads: int, seed: int | None):
    params = cfg["params"]
    grid = make_grid(cfg)
    kind = params["kind"]
    columns = ["detuning", "re_r", "im_r", "re_t", "im_t", "R", "T", "loss"]
    footer = None

    if kind == "dicke":
        coupling = _coupling_from(params)
        r, t = spectra1d.dicke_rt(params.get("n", 1), grid, coupling)
        rows = _spectrum_rows(grid, r, t)
    elif kind == "chain":
        coupling = _coupling_from(params)
        chain = _chain_from(params)

        def one(w):
            return spectra1d.chain_rt(chain, coupling, w)

        rt = _parallel_map(one, list(grid), threads)
        r = np.array([x[0] for x in rt])
        t = np.array([x[1] for x in rt])
        rows = _spectrum_rows(grid, r, t)
    elif kind == "ensemble":
        coupling = _coupling_from(params)
        if seed is None:
            raise ConfigError("ensemble runs require a seed")
        spec = spectra1d.EnsembleSpec(
            sites=params["sites"], fill=params["fill"], trials=params["trials"],
            seed=seed, phase=params["phi"], coupling=coupling,
        )
        res = spectra1d.ensemble_bragg_reflectance(spec, grid)
        columns = columns + ["stderr_R"]
        rows = []
        for i, w in enumerate(grid):
            loss = 1.0 - res.mean_R[i] - res.mean_T[i]
            rows.append([w, res.mean_r_amp[i].real, res.mean_r_amp[i].imag,
                         res.mean_t_amp[i].real, res.mean_t_amp[i].imag,
                         res.mean_R[i], res.mean_T[i], loss, res.stderr_R[i]])
    elif kind == "eit":
        coupling = _coupling_from(params)
        chain = _chain_from(params)
        h = modes.effective_hamiltonian(chain, coupling)
        mode_set = modes.eigenmodes(h)
        t = spectra1d.eit_transmission(mode_set, grid, params["omega_c"], params.get("gamma", 0.0))
        r = np.zeros_like(t)
        rows = _spectrum_rows(grid, r, t)
        footer = {"group-velocity-over-d": spectra1d.group_velocity_over_d(
            mode_set, params["omega_c"], params.get("gamma", 0.0))}
    else:  # pragma: no cover
        raise ConfigError(f"unknown spectrum kind {kind}")
    return columns, rows, footer


def _spectrum_rows(grid, r, t):
    rows = []
    for i, w in enumerate(grid):
        big_r = abs(r[i]) ** 2
        big_t = abs(t[i]) ** 2
        rows.append([float(w), r[i].real, r[i].imag, t[i].real, t[i].imag,
                     big_r, big_t, 1.0 - big_r - big_t])
    return rows


def cmd_modes(cfg: dict, threads: int, seed):
    params = cfg["params"]
    coupling = _coupling_from(params)
    chain = _chain_from(params)
    h = modes.effective_hamiltonian(chain, coupling)
    ms = modes.eigenmodes(h)
    columns = ["index", "re_omega", "im_omega", "bloch_k"]
    rows = [[i, ms.eigenvalues[i].real, ms.eigenvalues[i].imag, float(ms.bloch_k[i])]
            for i in range(ms.n)]
    trace = ms.trace_sum()
    footer = {"trace-sum": f"{trace.real!r},{trace.imag!r}",
              "trace-expected": f"0.0,{-chain.n * (coupling.gamma1d + coupling.gamma_nr)!r}"}
    if params.get("dump_eigenvectors"):
        footer["eigenvectors"] = json.dumps(
            [[[v.real, v.imag] for v in row] for row in ms.eigenvectors])
    return columns, rows, footer


def cmd_dispersion(cfg: dict, threads: int, seed):
    params = cfg["params"]
    grid = make_grid(cfg)  # K*d values
    kind = params["kind"]
    if kind == "guided":
        columns = ["kd", "re_omega", "im_omega"]
        rows = []
        for kd in grid:
            w = modes.omega_of_k(kd, params["phi"], params.get("gamma1d", 1.0),
                                 params.get("delta_omega", 0.0), params.get("gamma", 0.0))
            rows.append([float(kd), w.real, w.imag])
    elif kind == "freespace":
        columns = ["kd", "re_omega"]

        def one(kd):
            return modes.dispersion_freespace(kd, params["d_over_lambda0"])

        vals = _parallel_map(one, list(grid), threads)
        rows = [[float(kd), v] for kd, v in zip(grid, vals)]
    else:
        columns = ["kd", "re_omega", "im_omega"]
        rows = []
        for kd in grid:
            w = modes.dispersion_chiral(kd, params["xi"], params["phi"],
                                        params.get("gamma1d", 1.0))
            rows.append([float(kd), w.real, w.imag])
    return columns, rows, None


def cmd_g2(cfg: dict, threads: int, seed):
    params = cfg["params"]
    kind = params["kind"]
    geometry = params.get("geometry", "transmit")
    if kind == "dicke_tau":
        grid = make_grid(cfg)
        coupling = _coupling_from(params)

        def one(tau):
            return twophoton.g2_tau(params.get("eps", 0.0), tau, geometry,
                                    params.get("n", 1), coupling)

        vals = _parallel_map(one, list(grid), threads)
        return ["tau", "g2"], [[float(t), v] for t, v in zip(grid, vals)], None
    if kind == "dicke_zero_n":
        grid = make_grid(cfg)
        ns = sorted({int(round(x)) for x in grid})
        rows = [[n, twophoton.g2_zero_resonant(
            n, 2.0 * params.get("gamma1d", 1.0), 2.0 * params.get("gamma_nr", 0.0), geometry)]
            for n in ns]
        return ["n", "g2"], rows, None
    if kind == "chiral_single":
        rows = [[1, chiral.g2_single_chiral(params.get("gamma_nr", 0.0),
                                            params.get("gamma_right", 1.0))]]
        return ["n", "g2"], rows, None
    # chiral_n sweep
    grid = make_grid(cfg)
    ns = sorted({int(round(x)) for x in grid})
    method = params.get("method", "residue")

    def one(n):
        req = chiral.ChiralG2Request(n_atoms=n, gamma_right=params.get("gamma_right", 1.0),
                                     gamma_nr=params.get("gamma_nr", 0.0), method=method)
        return chiral.g2_chain_chiral(req)

    vals = _parallel_map(one, ns, threads)
    footer = {"n-star": chiral.n_star_chiral(
        params.get("gamma_nr", 0.0) / params.get("gamma_right", 1.0))} \
        if params.get("gamma_nr", 0.0) > 0 else None
    return ["n", "g2"], [[n, v] for n, v in zip(ns, vals)], footer


def cmd_pairstates(cfg: dict, threads: int, seed):
    params = cfg["params"]
    coupling = _coupling_from(params)
    chain = _chain_from(params)
    h = modes.effective_hamiltonian(chain, coupling)
    states = twophoton.pair_eigenstates(h, classify=params.get("classify", True))
    columns = ["index", "re_eps", "im_eps", "label", "overlap", "dominant_k"]
    rows = []
    for i, st in enumerate(states):
        k_dom = float(st.kmap_k[int(np.argmax(st.kmap))])
        rows.append([i, st.energy.real, st.energy.imag, st.label, st.overlap, k_dom])
    return columns, rows, None


def cmd_lattice2d(cfg: dict, threads: int, seed):
    params = cfg["params"]
    grid = make_grid(cfg)  # spacing over lambda0

    def one(a):
        spec = lattice2d.LatticeSpec(
            spacing_over_lambda=float(a), gamma0=params.get("gamma0", 1.0),
            gamma_nr=params.get("gamma_nr", 0.0), method=params.get("method", "reciprocal"),
            radius=params.get("radius", 150.0),
        )
        lamb, g2d = lattice2d.collective_params(spec)
        r0, _ = lattice2d.metasurface_rt(spec, 0.0)
        return [float(a), g2d, lamb, abs(r0)]

    rows = _parallel_map(one, list(grid), threads)
    return ["a_over_lambda0", "gamma2d", "lamb_shift", "abs_r_resonant"], rows, None


def cmd_protocol(cfg: dict, threads: int, seed):
    params = cfg["params"]
    if params["kind"] == "ghz":
        n = params.get("n_qubits", 2)
        shots = params.get("shots", 1)
        if seed is None and shots > 1:
            raise ConfigError("sampled protocol runs require a seed")
        counts = {"down": 0, "up": 0}
        rng = trial_rng(seed or 0, 0)
        fidelities = {}
        for ch, name, sign in ((protocols.DOWN, "down", -1), (protocols.UP, "up", +1)):
            reg, prob = protocols.run_ghz(n, ch)
            target = protocols.ghz_target(n, sign)
            fidelities[name] = (abs(np.vdot(target, reg)) ** 2, prob)
        for _ in range(shots):
            counts["up" if rng.random() < fidelities["up"][1] else "down"] += 1
        columns = ["channel", "probability", "fidelity", "count"]
        rows = [[name, fidelities[name][1], fidelities[name][0], counts[name]]
                for name in ("down", "up")]
        return columns, rows, {"shots": shots}
    c_plus = complex(params.get("c_plus_re", 1.0), params.get("c_plus_im", 0.0))
    c_minus = complex(params.get("c_minus_re", 0.0), params.get("c_minus_im", 0.0))
    norm = math.sqrt(abs(c_plus) ** 2 + abs(c_minus) ** 2)
    out, meta = protocols.run_state_transfer(c_plus / norm, c_minus / norm)
    fid = abs(np.vdot(np.array([c_plus / norm, c_minus / norm]), out)) ** 2
    columns = ["re_a_plus", "im_a_plus", "re_a_minus", "im_a_minus", "fidelity"]
    rows = [[out[0].real, out[0].imag, out[1].real, out[1].imag, fid]]
    return columns, rows, meta


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "modes": cmd_modes,
    "dispersion": cmd_dispersion,
    "g2": cmd_g2,
    "pairstates": cmd_pairstates,
    "lattice2d": cmd_lattice2d,
    "protocol": cmd_protocol,
}


def run_config(cfg: dict, threads: int | None = None, seed: int | None = None,
               out: str | None = None, fmt: str | None = None) -> int:
    validate_config(cfg)
    output = dict(cfg.get("output", {}))
    path = out or output.get("path", "-")
    file_format = fmt or output.get("format", "csv")
    threads = threads or cfg.get("threads") or os.cpu_count() or 1
    seed = seed if seed is not None else cfg.get("seed")
    columns, rows, footer = _COMMANDS[cfg["command"]](cfg, threads, seed)
    write_table(path, file_format, cfg, columns, rows, footer)
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="wqed",
        description="Waveguide-QED spectra, eigenmodes, correlations and protocols",
    )
    parser.add_argument("subcommand", choices=sorted(_COMMANDS), nargs="?",
                        help="must match the 'command' field of the config")
    parser.add_argument("--config", required=True, help="path to a JSON run configuration")
    parser.add_argument("--out", help="output path (default from config, '-' for stdout)")
    parser.add_argument("--format", choices=["csv", "json"], dest="fmt")
    parser.add_argument("--threads", type=int, help="worker pool size (default: cpu count)")
    parser.add_argument("--seed", type=int, help="override the config seed")
    args = parser.parse_args(argv)

    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    if args.subcommand and cfg.get("command") != args.subcommand:
        print(f"error: config command {cfg.get('command')!r} does not match "
              f"subcommand {args.subcommand!r}", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        return run_config(cfg, threads=args.threads, seed=args.seed,
                          out=args.out, fmt=args.fmt)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except lattice2d.LatticeConvergenceError as exc:
        print(f"error: numerical convergence: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except modes.SingularFrequencyError as exc:
        print(f"error: numerical convergence: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
