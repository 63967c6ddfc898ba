"""Command-line driver: ``parallel-spectra <command> --config FILE``.

Exit codes: 0 success, 1 verification or audit failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import copy
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .analytic import (
    n2_hermitian_even_odd_spectrum,
    n2_nonhermitian_eigensystem,
    gaussian_packet,
    ssh_zero_modes,
    symmetrize_state,
    uniform_zero_modes,
    zero_mode_order,
)
from .correspondence import build_correspondence, correspondence_reports
from .dynamics import evolve_states, expand_in_common_subspace, parallel_evolve, probability_audit
from .errors import ConstraintError, DomainError, InvalidSpecError, ParallelSpectraError, SymmetryError
from .lattice import (
    CouplingParams,
    CustomGraph,
    SSHChain,
    UniformChain,
    build_triple,
    parity_operator,
)
from .spectral import (
    Tolerances,
    detect_coalescence,
    eig_general,
    match_eigensystems,
    triple_eigensystems,
)

log = logging.getLogger("parallel_spectra")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
COMMANDS = ("spectrum", "sweep", "verify", "zero-modes", "evolve")

EVOLVE_DEFAULTS = {"center": None, "alpha": 0.2, "k": math.pi / 2, "dt": 0.5, "T": 200.0,
                   "dump_times": None, "audit_tol": 1e-8, "max_leak": None}
SWEEP_DEFAULTS = {"param": "gamma", "from": 0.0, "to": 3.0, "steps": 301, "resolution": 1e-3}


class ConfigError(Exception):
    """Raised for anything that maps to exit code 2."""


# ---------------------------------------------------------------- I/O helpers

def _schema(name: str) -> dict:
    text = resources.files("parallel_spectra").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(doc: dict, name: str) -> None:
    jsonschema.Draft202012Validator(_schema(name)).validate(doc)


def _reject_constant(token):
    raise ConfigError(f"non-finite number {token} in config")


def load_config(path: str | os.PathLike) -> dict:
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f, parse_constant=_reject_constant)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc


def apply_overrides(config: dict, assignments: list[str]) -> dict:
    """Apply ``dotted.key=value`` overrides; values are parsed as JSON when possible."""
    out = copy.deepcopy(config)
    for item in assignments:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        try:
            value = json.loads(raw, parse_constant=_reject_constant)
        except json.JSONDecodeError:
            value = raw
        node = out
        *parents, leaf = key.split(".")
        for p in parents:
            node = node.setdefault(p, {})
            if not isinstance(node, dict):
                raise ConfigError(f"--set {key}: {p!r} is not a block")
        node[leaf] = value
    return out


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": _jsonable(x.real), "im": _jsonable(x.imag)}
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class Bundle:
    """Collects output files and writes them atomically with run metadata."""

    def __init__(self, outdir: Path, command: str, config: dict, options: dict):
        self.outdir = outdir
        self.command = command
        self.config = config
        self.options = options
        self.files: list[str] = []

    def csv(self, name: str, header: list[str], rows) -> None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
        self._put(name, buf.getvalue())

    def json(self, name: str, doc: dict, schema: str | None = None) -> None:
        doc = _jsonable(doc)
        if schema:
            try:
                validate(doc, schema)
            except jsonschema.ValidationError as exc:
                raise RuntimeError(f"{name} does not match its schema: {exc.message}") from exc
        self._put(name, json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n")

    def _put(self, name: str, text: str) -> None:
        self.outdir.mkdir(parents=True, exist_ok=True)
        _atomic_write(self.outdir / name, text)
        self.files.append(name)

    def finish(self) -> None:
        epoch = os.environ.get("SOURCE_DATE_EPOCH")
        stamp = None
        if epoch is not None:
            try:
                stamp = datetime.fromtimestamp(int(epoch), timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
            except ValueError:
                stamp = None
        meta = {"command": self.command, "version": __version__, "timestamp": stamp,
                "config": self.config, "options": self.options,
                "outputs": sorted(self.files + ["metadata.json"])}
        self.json("metadata.json", meta, "metadata")


# ---------------------------------------------------------------- config -> objects

def model_spec(config: dict):
    m = config["model"]
    J = float(config.get("params", {}).get("J", 1.0))
    if m["type"] == "uniform":
        if "total_sites" in m:
            return UniformChain.from_total_sites(m["total_sites"], J)
        return UniformChain(m["chain_length"], J)
    if m["type"] == "ssh":
        return SSHChain(m["sites"], J, float(m["delta"]))
    return CustomGraph(m["sites"], tuple(tuple(e) for e in m["edges"]), m["a"], m["b"],
                       float(m["g"]), m.get("mirror"))


def coupling(config: dict) -> CouplingParams:
    p = config.get("params", {})
    return CouplingParams(float(p.get("gamma", 0.0)), float(p.get("kappa", 0.0)), float(p.get("V", 0.0)))


def tolerances(config: dict) -> Tolerances:
    return Tolerances(**{k: float(v) for k, v in config.get("tolerances", {}).items()})


def _scenario(config: dict, defaults: dict) -> dict:
    out = dict(defaults)
    out.update({k: v for k, v in config.get("scenario", {}).items() if k in defaults})
    return out


def _J(config: dict) -> float:
    return float(config.get("params", {}).get("J", 1.0))


# ---------------------------------------------------------------- commands

def cmd_spectrum(config: dict, bundle: Bundle, match: bool = False) -> int:
    triple = build_triple(model_spec(config), coupling(config))
    tol = tolerances(config)
    systems = triple_eigensystems(triple, tol)
    names = ("H", "N", "NDAG")
    flagged = {n: set() for n in names}
    if match:
        matches = match_eigensystems(*systems, tol)
        for m in matches:
            flagged["H"].add(m.idxH)
            flagged["N"].add(m.idxN)
            flagged["NDAG"].add(m.idxNdag)
        bundle.csv("matches.csv", ["energy", "idx_h", "idx_n", "idx_ndag", "match_residual"],
                   ([m.energy, m.idxH, m.idxN, m.idxNdag, m.matchResidual] for m in matches))
    header = ["index", "system", "re_energy", "im_energy", "residual"] + (["matched"] if match else [])
    rows = []
    for name, es in zip(names, systems):
        for k, lam in enumerate(es.eigenvalues):
            row = [k, name, lam.real, lam.imag, es.residuals[k]]
            if match:
                row.append(k in flagged[name])
            rows.append(row)
    bundle.csv("spectrum.csv", header, rows)
    return EXIT_OK


def _sweep_point(spec, params: CouplingParams, param: str, value: float, tol: Tolerances):
    if param == "delta":
        spec = SSHChain(spec.sites, spec.J, value)
    else:
        params = CouplingParams(**{**vars(params), param: value})
    triple = build_triple(spec, params)
    return eig_general(triple.Hn, tol, "N"), triple


def _real_count(es, tol: Tolerances) -> int:
    return int(np.sum(np.abs(es.eigenvalues.imag) <= tol.tolReal))


def _bisect(f, lo: float, hi: float, n_lo: int, width: float):
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if f(mid) == n_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _ep_reports(spec, params, param, value, tol):
    es, triple = _sweep_point(spec, params, param, value, tol)
    left = eig_general(triple.HnDag, tol, "NDAG")
    return [r for r in detect_coalescence(es, left, tol) if r.is_ep]


def _pool_size() -> int:
    cap = os.environ.get("PARALLEL_SPECTRA_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise ConfigError(f"PARALLEL_SPECTRA_THREADS must be an integer, got {cap!r}")
    return n


def cmd_sweep(config: dict, bundle: Bundle) -> int:
    sc = _scenario(config, SWEEP_DEFAULTS)
    param, lo, hi, steps = sc["param"], float(sc["from"]), float(sc["to"]), int(sc["steps"])
    if param not in ("gamma", "kappa", "V", "delta"):
        raise ConfigError(f"cannot sweep {param!r}")
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise ConfigError(f"bad sweep range [{lo}, {hi}]")
    if steps < 1 or (hi > lo and steps < 2):
        raise ConfigError("a non-degenerate sweep needs at least 2 steps")
    spec, params, tol = model_spec(config), coupling(config), tolerances(config)
    if param == "delta" and not isinstance(spec, SSHChain):
        raise ConfigError("delta sweeps need the ssh model")
    values = [lo] if hi == lo else [float(v) for v in np.linspace(lo, hi, steps)]
    if param == "delta" and any(abs(v) >= 1 for v in values):
        raise ConfigError("delta must stay inside (-1, 1)")

    def point(v):
        return _sweep_point(spec, params, param, v, tol)[0]

    with concurrent.futures.ThreadPoolExecutor(max_workers=_pool_size()) as pool:
        systems = list(pool.map(point, values))
    rows = [[v, k, lam.real, lam.imag] for v, es in zip(values, systems) for k, lam in enumerate(es.eigenvalues)]
    bundle.csv("sweep.csv", ["param_value", "index", "re", "im"], rows)

    def count(v):
        return _real_count(point(v), tol)

    counts = [_real_count(es, tol) for es in systems]
    transitions = []
    for i in range(len(values) - 1):
        if counts[i] == counts[i + 1]:
            continue
        a, b = _bisect(count, values[i], values[i + 1], counts[i], float(sc["resolution"]))
        fa, fb = _bisect(count, a, b, counts[i], 1e-10 * max(1.0, abs(a)))
        eps = []
        for x in (fa, fb):
            eps = _ep_reports(spec, params, param, x, tol)
            if eps:
                break
        best = min(eps, key=lambda r: abs(r.center.imag)) if eps else None
        transitions.append({
            "value": 0.5 * (a + b), "lower": a, "upper": b,
            "real_count_lower": counts[i], "real_count_upper": counts[i + 1],
            "ep": bool(eps), "ep_location": 0.5 * (fa + fb),
            "ep_energy": best.center if best else None,
            "ep_cluster_size": best.size if best else None,
        })
    bundle.json("transitions.json", {"param": param, "from": lo, "to": hi, "steps": len(values),
                                     "resolution": float(sc["resolution"]), "transitions": transitions},
                "transitions")
    return EXIT_OK


def _reference_proportionality(triple, energy: float, tol: Tolerances):
    """Constant c in phi + phi~ = c psi with the closed-form normalizations (two-site chain)."""
    J = triple.spec.J
    p = triple.params
    try:
        phis = n2_nonhermitian_eigensystem(p.gamma, J, radical_branch=(p.gamma / J) ** 2 <= 4)
    except DomainError:
        return None
    psis = n2_hermitian_even_odd_spectrum(p.V, p.kappa, J)
    phi = next((s for s in phis if abs(s.energy - energy) <= tol.tolMatch * max(1.0, abs(energy)) * 10), None)
    if phi is None:
        return None
    s = phi.vector + phi.vector.conj()
    best = None
    for key, psi in sorted(psis.items()):
        if abs(psi.energy - energy) > 1e-8 * max(1.0, abs(energy)):
            continue
        c = np.vdot(psi.vector, s) / np.vdot(psi.vector, psi.vector)
        d = float(np.linalg.norm(s - c * psi.vector))
        if best is None or d < best["defect"]:
            best = {"re": float(c.real), "im": float(c.imag), "defect": d, "reference": key,
                    "state": phi.source.split(":", 1)[1]}
    return best


def cmd_verify(config: dict, bundle: Bundle) -> int:
    triple = build_triple(model_spec(config), coupling(config))
    tol = tolerances(config)
    P = parity_operator(triple)
    reports = correspondence_reports(triple, P, tol)
    two_site = isinstance(triple.spec, UniformChain) and triple.spec.chain_length == 2
    states = []
    for r in reports:
        x = r.extra
        row = {
            "energy": r.energy, "status": x["status"], "verified": r.verified,
            "constraint": r.constraint.as_dict() if r.constraint else None,
            "proportionality": r.proportionality,
            "superpositionResidual": r.superpositionResidual,
            "referenceDefect": r.referenceDefect, "gaugeNote": r.gaugeNote,
            "idxH": x["idxH"], "idxN": x["idxN"], "idxNdag": x["idxNdag"],
            "matchResidual": x["matchResidual"], "parity": x.get("parity"),
            "residuals": x.get("residuals"), "endpointResiduals": x.get("endpointResiduals"),
        }
        if two_site:
            row["reference_proportionality"] = _reference_proportionality(triple, r.energy, tol)
        states.append(row)
    summary = {k: sum(s["status"] == k for s in states) for k in ("verified", "failed", "skipped")}
    summary["matched"] = len(states)
    summary["all_verified"] = summary["failed"] == 0
    bundle.json("correspondence.json", {"summary": summary, "states": states}, "correspondence")
    return EXIT_OK if summary["all_verified"] else EXIT_FAIL


def _state_info(s) -> dict:
    return {"residual": s.residual, "energy": s.energy, "norm": s.norm, "source": s.source,
            "requires": s.requires}


def _relation(lhs, rhs) -> dict:
    c = np.vdot(rhs, lhs) / np.vdot(rhs, rhs)
    return {"constant": complex(c), "defect": float(np.linalg.norm(lhs - c * rhs))}


def cmd_zero_modes(config: dict, bundle: Bundle) -> int:
    spec = model_spec(config)
    tol = tolerances(config)
    J = _J(config)
    if isinstance(spec, UniformChain):
        m = zero_mode_order(spec.total_sites)
        V = float(config.get("params", {}).get("V", 0.0))
        zm = uniform_zero_modes(m, J, V)
        states = {"Phi_minus": zm.phi_minus, "Phi_plus": zm.phi_plus, "Psi": zm.psi}
        triple = build_triple(spec, CouplingParams(gamma=zm.gamma, kappa=V, V=V))
        parameters = {"m": m, "total_sites": spec.total_sites, "gamma": zm.gamma, "kappa": V, "V": V, "J": J}
        relations = {"Phi_plus+Phi_minus=c*Psi": _relation(zm.phi_plus.vector + zm.phi_minus.vector,
                                                           zm.psi.vector)}
        overlap = zm.biorthogonal_overlap
        model = "uniform"
    elif isinstance(spec, SSHChain):
        zm = ssh_zero_modes(spec.sites, J, spec.delta)
        states = {"psi_1": zm.psi_1, "psi_2": zm.psi_2, "psi_plus": zm.psi_plus, "psi_minus": zm.psi_minus,
                  "phi_zm": zm.phi_zm, "eta_zm": zm.eta_zm}
        triple = build_triple(spec, CouplingParams(gamma=zm.gamma_c, kappa=zm.kappa_c))
        parameters = {"sites": spec.sites, "delta": spec.delta, "J": J, "kappa_c": zm.kappa_c,
                      "gamma_c": zm.gamma_c, "Delta": zm.Delta, "norm": zm.norm}
        f, e = zm.phi_zm.vector, zm.eta_zm.vector
        relations = {"phi_zm+eta_zm=c*psi_1": _relation(f + e, zm.psi_1.vector),
                     "phi_zm-eta_zm=c*psi_2": _relation(f - e, zm.psi_2.vector)}
        overlap = complex(np.vdot(e, f))
        model = "ssh"
    else:
        raise ConfigError("zero-modes needs the uniform or ssh model")
    es = eig_general(triple.Hn, tol, "N")
    left = eig_general(triple.HnDag, tol, "NDAG")
    coalescence = [{"center": r.center, "size": r.size, "min_overlap": r.min_overlap,
                    "span_rank": r.span_rank, "is_ep": r.is_ep} for r in detect_coalescence(es, left, tol)]
    rows = []
    for name, s in states.items():
        for i, a in enumerate(s.vector):
            rows.append([name, triple.site_label(i), a.real, a.imag])
    bundle.csv("zero_modes.csv", ["state", "site", "re", "im"], rows)
    bundle.json("zero_modes.json", {"model": model, "parameters": parameters,
                                    "states": {k: _state_info(s) for k, s in states.items()},
                                    "relations": relations, "biorthogonal_overlap": overlap,
                                    "coalescence": coalescence}, "zero_modes")
    return EXIT_OK


def _on_grid(t: float, dt: float) -> int:
    k = round(t / dt)
    if abs(k * dt - t) > 1e-9 * max(1.0, abs(t)):
        raise ConfigError(f"time {t} is not a multiple of dt = {dt}")
    return int(k)


def run_evolution(config: dict):
    """Common-subspace parallel evolution for an evolve config; returns everything the CLI writes."""
    sc = _scenario(config, EVOLVE_DEFAULTS)
    spec = model_spec(config)
    triple = build_triple(spec, coupling(config))
    tol = tolerances(config)
    P = parity_operator(triple)
    n = triple.dimension
    dt, T = float(sc["dt"]), float(sc["T"])
    steps = _on_grid(T, dt)
    dumps = sc["dump_times"]
    if dumps is None:
        dumps = [float(x) for x in np.linspace(0.0, T, 5)] if T > 0 else [0.0]
    dump_idx = sorted({_on_grid(float(t), dt) for t in dumps})
    if dump_idx and dump_idx[-1] > steps:
        raise ConfigError("dump times beyond T")
    times = dt * np.arange(steps + 1)
    center = n / 3 if sc["center"] is None else float(sc["center"])
    packet = gaussian_packet(n, center, float(sc["k"]), float(sc["alpha"]))
    psi0 = symmetrize_state(packet, P)
    systems = triple_eigensystems(triple, tol)
    matches = match_eigensystems(*systems, tol)
    family = build_correspondence(triple, matches, P, tol, systems=systems)
    if not family:
        raise ParallelSpectraError("no common real eigenstates to expand in")
    ex = expand_in_common_subspace(psi0, family, sc["max_leak"])
    trace = parallel_evolve(triple, ex.phi0, ex.phi_tilde0, ex.psi0, times)
    audit = probability_audit(trace, P)
    # how far Hn / HnDag evolution departs from plain H evolution of the same states
    shadow = 0.0
    for name, M, v in (("phi", triple.Hn, ex.phi0), ("phi_tilde", triple.HnDag, ex.phi_tilde0)):
        ref = np.abs(evolve_states(v, triple.H, times)) ** 2
        shadow = max(shadow, float(np.max(np.abs(trace.probabilities[name] - ref))))
    return {"triple": triple, "trace": trace, "audit": audit, "expansion": ex, "family": family,
            "dump_idx": dump_idx, "shadow": shadow, "scenario": sc, "steps": steps}


def cmd_evolve(config: dict, bundle: Bundle) -> int:
    r = run_evolution(config)
    trace, audit, ex, triple = r["trace"], r["audit"], r["expansion"], r["triple"]
    probs = trace.probabilities
    rows = []
    for k in r["dump_idx"]:
        for i in range(triple.dimension):
            rows.append([trace.times[k], triple.site_label(i), probs["phi"][k, i],
                         probs["phi_tilde"][k, i], probs["psi"][k, i]])
    bundle.csv("trace.csv", ["time", "site", "prob_phi", "prob_phitilde", "prob_psi"], rows)
    thr = float(r["scenario"]["audit_tol"])
    passed = audit.passed(thr)
    sc = r["scenario"]
    doc = {
        "deviations": audit.deviations(), "defect": audit.defect, "parity": audit.parity,
        "theta": audit.theta, "truncation_residual": ex.truncationResidual, "threshold": thr,
        "passed": passed, "boundary_free_deviation": r["shadow"],
        "norms0": {k: float(trace.norms(k)[0]) for k in ("phi", "phi_tilde", "psi")},
        "common_states": len(r["family"]),
        "times": {"dt": float(sc["dt"]), "T": float(sc["T"]), "steps": r["steps"],
                  "dump": [float(trace.times[k]) for k in r["dump_idx"]]},
    }
    bundle.json("audit.json", doc, "audit")
    return EXIT_OK if passed else EXIT_FAIL


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parallel-spectra", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--output-dir", default=".", help="directory for output files")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config field, e.g. params.gamma=0.5 (repeatable)")
        p.add_argument("-v", "--verbose", action="store_true")
        if name == "spectrum":
            p.add_argument("--match", action="store_true", help="flag common real eigenvalues")
        if name == "sweep":
            p.add_argument("--param", choices=["gamma", "kappa", "V", "delta"])
            p.add_argument("--from", dest="start", type=float)
            p.add_argument("--to", dest="stop", type=float)
            p.add_argument("--steps", type=int)
    return parser


_CONFIG_ERRORS = (ConfigError, jsonschema.ValidationError, InvalidSpecError, DomainError,
                  ConstraintError, SymmetryError)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = apply_overrides(load_config(args.config), args.overrides)
        if args.command == "sweep":
            block = config.setdefault("scenario", {})
            for key, value in (("param", args.param), ("from", args.start), ("to", args.stop),
                               ("steps", args.steps)):
                if value is not None:
                    block[key] = value
        validate(config, "config")
        options = {"match": bool(getattr(args, "match", False))}
        bundle = Bundle(Path(args.output_dir), args.command, config, options)
        if args.command == "spectrum":
            code = cmd_spectrum(config, bundle, options["match"])
        elif args.command == "sweep":
            code = cmd_sweep(config, bundle)
        elif args.command == "verify":
            code = cmd_verify(config, bundle)
        elif args.command == "zero-modes":
            code = cmd_zero_modes(config, bundle)
        else:
            code = cmd_evolve(config, bundle)
        bundle.finish()
    except _CONFIG_ERRORS as exc:
        msg = exc.message if isinstance(exc, jsonschema.ValidationError) else str(exc)
        print(f"parallel-spectra: configuration error: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    except ParallelSpectraError as exc:
        print(f"parallel-spectra: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if code != EXIT_OK:
        print(f"parallel-spectra: {args.command} did not pass; see {args.output_dir}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
