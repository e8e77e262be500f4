"""Command-line front end.

Every command writes one or more CSV tables.  Without ``--out`` they go to
stdout, each preceded by a ``# name`` line and separated by a blank line.
With ``--out PATH`` the first table is written to ``PATH`` and any further
table ``name`` to ``PATH`` with ``_name`` inserted before the suffix.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import channels as chn
from .gates import CircuitProgram, Gate, parse_circuit, rotation, run_circuit
from .matrix_oracle import represent
from .multiqubit import (
    DensityOperator,
    Ket,
    QubitError,
    expectation,
    ket_from_spinor,
    product_operator_expand,
    sigma,
    spinor_from_ket,
)
from .schmidt import is_product_state, reconstruct, schmidt_decompose, tangle_invariant
from .spacetime import RelativisticDensity, boost_density, boost_polarization

COMMANDS = ("simulate", "schmidt", "channel", "demo-nmr", "demo-boost")

DEFAULTS = {
    "common": {"seed": 0, "tol": None, "qubits": None, "in": None, "out": None},
    "simulate": {"initial": None, "random_gates": 0},
    "schmidt": {"ket": None},
    "channel": {"phase_damping": None},
    "demo-nmr": {"omega": "6.283185307179586,12.566370614359172,21.991148575128552",
                 "alpha": 1.0, "gamma": 1.0, "duration": 10.0, "samples": 256},
    "demo-boost": {"alpha": None, "beta": None, "epsilon": None,
                   "lam_min": -2.0, "lam_max": 2.0, "steps": 101},
}

TYPES = {"seed": int, "tol": float, "qubits": int, "random_gates": int, "alpha": float,
         "gamma": float, "duration": float, "samples": int, "beta": float, "epsilon": float,
         "lam_min": float, "lam_max": float, "steps": int, "phase_damping": float}


class CliError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    n_qubits: int | None = None
    seed: int = 0
    tol: float | None = None
    params: dict = field(default_factory=dict)


@dataclass
class Table:
    name: str
    header: list[str]
    rows: list[list] = field(default_factory=list)


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x) + 0.0, ".15g")
    return str(x)


def render(t: Table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(t.header)
    for r in t.rows:
        w.writerow([fmt(x) for x in r])
    return buf.getvalue()


def _read_text(path: str | None, what: str) -> str:
    if path is None:
        raise CliError(f"{what} needs --in")
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def normalize_phase(a: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate the global phase so the first nonzero amplitude is real positive."""
    a = np.asarray(a, dtype=complex)
    nz = np.flatnonzero(np.abs(a) > tol)
    if nz.size == 0:
        return a
    ph = a[nz[0]] / abs(a[nz[0]])
    out = a / ph
    out[nz[0]] = abs(a[nz[0]])
    return out


def ket_table(amps: np.ndarray, name: str = "ket") -> Table:
    n = int(round(math.log2(len(amps))))
    t = Table(name, ["bitstring", "re", "im"])
    for i, c in enumerate(normalize_phase(amps)):
        t.rows.append([format(i, f"0{n}b"), c.real, c.imag])
    return t


def _parse_ket_tokens(tokens: list[str]) -> np.ndarray:
    try:
        return np.array([complex(t.replace("i", "j")) for t in tokens])
    except ValueError as exc:
        raise CliError(f"bad amplitude: {exc}") from None


def parse_ket(text: str) -> Ket:
    """Either whitespace/comma separated amplitudes, or ``bitstring,re,im`` rows."""
    rows = [r.split("#", 1)[0].strip() for r in text.splitlines()]
    rows = [r for r in rows if r and not r.lower().startswith("bitstring")]
    parts = [[p for p in r.replace(",", " ").split()] for r in rows]
    if parts and all(len(p) == 3 and set(p[0]) <= {"0", "1"} for p in parts):
        n = len(parts[0][0])
        amps = np.zeros(2 ** n, dtype=complex)
        for p in parts:
            if len(p[0]) != n:
                raise CliError("inconsistent bitstring lengths")
            amps[int(p[0], 2)] = complex(float(p[1]), float(p[2]))
    else:
        amps = _parse_ket_tokens([t for p in parts for t in p])
    if amps.size == 0:
        raise CliError("empty ket")
    try:
        return Ket(amps)
    except QubitError as exc:
        raise CliError(str(exc)) from None


# -- commands ------------------------------------------------------------------


def random_circuit(n: int, k: int, rng: np.random.Generator) -> CircuitProgram:
    gates = []
    for _ in range(k):
        kind = rng.choice(["NOT", "HADAMARD", "ROTATION", "PHASE"] + (["CNOT"] if n > 1 else []))
        if kind == "CNOT":
            c, t = rng.choice(np.arange(1, n + 1), size=2, replace=False)
            gates.append(Gate("CNOT", (int(c), int(t))))
            continue
        q = int(rng.integers(1, n + 1))
        params = {}
        if kind in ("ROTATION", "PHASE"):
            params["angle"] = float(rng.uniform(-math.pi, math.pi))
        if kind == "ROTATION":
            v = rng.normal(size=3)
            params["axis"] = v / np.linalg.norm(v)
        gates.append(Gate(str(kind), (q,), params))
    return CircuitProgram(n, gates)


def cmd_simulate(cfg: RunConfig) -> list[Table]:
    p = cfg.params
    if p["random_gates"]:
        n = cfg.n_qubits or 2
        prog = random_circuit(n, p["random_gates"], np.random.default_rng(cfg.seed))
    else:
        prog = parse_circuit(_read_text(cfg.input, "simulate"), cfg.n_qubits)
    n = prog.n_qubits
    bits = p["initial"] or "0" * n
    if len(bits) != n or set(bits) - {"0", "1"}:
        raise CliError(f"initial state must be a {n}-bit string, got {bits!r}")
    init = Ket.basis(bits)
    psi = run_circuit(prog, init)
    ket = ket_from_spinor(psi).amplitudes
    # oracle route: multiply the ket by the matrix of each gate
    ref = np.asarray(init.amplitudes, dtype=complex)
    for g in prog.gates:
        ref = represent(g.element(n)) @ ref
    resid = float(np.abs(ket - ref).max())
    rho = psi.density()
    dens = Table("density", ["term", "coefficient"])
    for label, c in product_operator_expand(rho, tol=1e-14).items():
        dens.rows.append([label, c])
    summary = Table("summary", ["quantity", "value"],
                    [["qubits", n], ["gates", len(prog.gates)], ["oracle_residual", resid]])
    return [ket_table(ket), dens, summary]


def cmd_schmidt(cfg: RunConfig) -> list[Table]:
    text = cfg.params["ket"] if cfg.params["ket"] is not None else _read_text(cfg.input, "schmidt")
    k = parse_ket(text)
    if k.n != 2:
        raise CliError(f"schmidt needs a two-qubit ket (4 amplitudes), got {len(k.amplitudes)}")
    k = k.normalized()
    psi = spinor_from_ket(k)
    f = schmidt_decompose(psi)
    back = ket_from_spinor(reconstruct(f)).amplitudes
    resid = float(np.abs(back - k.amplitudes).max())
    vs_ga, _ = tangle_invariant(psi)
    tol = cfg.tol if cfg.tol is not None else 1e-8
    v11, v22 = f.singular_values
    rows = [["theta", f.theta], ["phi", f.phi], ["vartheta", f.vartheta], ["varphi", f.varphi],
            ["varsigma", f.varsigma], ["tau", f.tau], ["phase", f.phase], ["omega", f.omega],
            ["v11", v11], ["v22", v22], ["varsigma_invariant", vs_ga],
            ["reconstruction_residual", resid], ["product_state", is_product_state(k, tol)]]
    return [Table("schmidt", ["quantity", "value"], rows)]


def _channel_from(cfg: RunConfig):
    pd = cfg.params["phase_damping"]
    if pd is not None:
        return chn.phase_damping(pd)
    return chn.parse_channel(_read_text(cfg.input, "channel"), cfg.n_qubits)


def cmd_channel(cfg: RunConfig) -> list[Table]:
    ch = _channel_from(cfg)
    tol = cfg.tol if cfg.tol is not None else chn.CP_TOL
    rows: list[list] = []
    if isinstance(ch, chn.AffineMap1Q):
        aff = ch
        rows += [["kind", "affine"], ["normal", True], ["unital", bool(np.abs(aff.t).max() <= tol)]]
        lam = np.diag(aff.S).copy() if aff.is_diagonal() else chn._proper_svd(aff.S)[1]
    else:
        if ch.n != 1:
            raise CliError("channel analysis is for single-qubit channels")
        normal, unital = chn.check_normal(ch), chn.check_unital(ch)
        if normal != chn.check_normal_quaternion(ch) or unital != chn.check_unital_quaternion(ch):
            raise CliError("operator-sum and quaternion checks disagree")
        rows += [["kind", "kraus"], ["operators", len(ch.ops)], ["normal", normal], ["unital", unital]]
        if not normal:
            raise CliError("affine analysis needs a normal channel")
        aff = chn.affine_form(ch)
        if aff.is_diagonal():
            # already diagonal: keep the axis order instead of the SVD's sorted one
            rotated, lam = ch, np.diag(aff.S).copy()
        else:
            rotated, lam = chn.diagonalize_channel(ch)
        if unital:
            # second route: wedge formula on the rotated, now diagonal, channel
            lam_w = chn.diagonal_eigenvalues(rotated)
            rows.append(["lambda_route_discrepancy", float(np.abs(lam_w - lam).max())])
    for i, ax in enumerate("xyz"):
        rows.append([f"t_{ax}", aff.t[i]])
    for j, col in enumerate("xyz"):
        for i, ax in enumerate("xyz"):
            rows.append([f"s_{col}_{ax}", aff.S[i, j]])
    for i, ax in enumerate("xyz"):
        rows.append([f"lambda_{ax}", lam[i]])
    tet = chn.tetrahedron_check(lam)
    rows.append(["tetrahedron_inside", tet.inside])
    for name, c in zip(("b0", "bx", "by", "bz"), tet.barycentric):
        rows.append([f"barycentric_{name}", c])
    rows.append(["tetrahedron_margin", tet.margin])
    cp, mineig = chn.cp_check_choi(ch, tol)
    rows += [["choi_min_eigenvalue", mineig], ["completely_positive", cp]]
    return [Table("channel", ["quantity", "value"], rows)]


def _omegas(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    try:
        return [float(x) for x in str(text).replace(";", ",").split(",") if x.strip()]
    except ValueError as exc:
        raise CliError(f"bad omega list: {exc}") from None


def nmr_signal(omegas, alpha: float, gamma: float, times) -> np.ndarray:
    """``gamma sum_q <s_x^q>`` for ``2^-N (1 + alpha sum s_x^q)`` evolved by ``exp(-iota Z t)``."""
    n = len(omegas)
    rho0 = sum((sigma(n, q, "x") for q in range(2, n + 1)), sigma(n, 1, "x"))
    rho0 = DensityOperator((1.0 + alpha * rho0) * 2.0 ** -n)
    obs = [sigma(n, q, "x") for q in range(1, n + 1)]
    out = []
    for t in times:
        U = rotation(1, "z", omegas[0] * t, n)
        for q in range(2, n + 1):
            U = U * rotation(q, "z", omegas[q - 1] * t, n)
        rho = DensityOperator(U * rho0.value * U.dagger, check=False)
        out.append(gamma * sum(expectation(o, rho) for o in obs))
    return np.array(out)


def cmd_demo_nmr(cfg: RunConfig) -> list[Table]:
    p = cfg.params
    om = _omegas(p["omega"])
    if not om:
        raise CliError("need at least one frequency")
    samples, duration = p["samples"], p["duration"]
    if samples < 2 or not duration > 0:
        raise CliError("need samples >= 2 and duration > 0")
    times = np.arange(samples) * (duration / samples)
    mx = nmr_signal(om, p["alpha"], p["gamma"], times)
    closed = p["alpha"] * p["gamma"] * np.cos(np.outer(times, om)).sum(axis=1)
    series = Table("signal", ["t", "mx", "mx_closed_form"],
                   [[t, a, b] for t, a, b in zip(times, mx, closed)])
    mag = np.abs(np.fft.rfft(mx))
    spectrum = Table("spectrum", ["bin", "frequency", "magnitude"],
                 [[k, k / duration, m] for k, m in enumerate(mag)])
    expected = [int(round(w / (2 * math.pi) * duration)) for w in om]
    summary = Table("summary", ["quantity", "value"],
                    [["max_closed_form_error", float(np.abs(mx - closed).max())]]
                    + [[f"expected_bin_{q + 1}", b] for q, b in enumerate(expected)])
    return [series, spectrum, summary]


def boost_tanh(alpha: float, lam: float) -> float:
    if abs(alpha) >= 1.0:
        return math.copysign(1.0, alpha)
    return math.tanh(math.atanh(alpha) - lam)


def cmd_demo_boost(cfg: RunConfig) -> list[Table]:
    p = cfg.params
    if p["alpha"] is not None:
        alpha = p["alpha"]
    elif p["beta"] is not None and p["epsilon"] is not None:
        alpha = math.tanh(-p["beta"] * p["epsilon"] / 2)
    else:
        alpha = 0.0
    if not abs(alpha) <= 1.0:
        raise CliError("alpha must lie in [-1, 1]")
    if p["steps"] < 1:
        raise CliError("steps must be positive")
    lams = np.linspace(p["lam_min"], p["lam_max"], p["steps"])
    t = Table("boost", ["lambda", "alpha_rational", "alpha_tanh", "alpha_spacetime"])
    worst = 0.0
    for lam in lams:
        a = boost_polarization(alpha, lam)
        b = boost_tanh(alpha, lam)
        c = float("nan")
        if abs(alpha) < 1.0:
            rho = boost_density(RelativisticDensity.from_polarization([0, 0, alpha]), lam)
            c = float(rho.polarization()[2])
            worst = max(worst, abs(a - c))
        worst = max(worst, abs(a - b))
        t.rows.append([lam, a, b, c])
    return [t, Table("summary", ["quantity", "value"], [["alpha", alpha], ["max_discrepancy", worst]])]


HANDLERS = {"simulate": cmd_simulate, "schmidt": cmd_schmidt, "channel": cmd_channel,
            "demo-nmr": cmd_demo_nmr, "demo-boost": cmd_demo_boost}


# -- plumbing ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="geoqubit", description="Geometric-algebra qubit toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--in", dest="in", default=None, help="input file ('-' for stdin)")
        sp.add_argument("--out", default=None, help="output CSV path")
        sp.add_argument("--qubits", type=int, default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--config", default=None, help="file of 'key = value' lines")
        return sp

    s = common(sub.add_parser("simulate", help="run a gate circuit"))
    s.add_argument("--initial", default=None, help="initial basis state, e.g. 11")
    s.add_argument("--random-gates", type=int, default=None, help="ignore --in and run K random gates")
    s = common(sub.add_parser("schmidt", help="two-qubit factorization"))
    s.add_argument("--ket", default=None, help="four amplitudes, e.g. '0 0.7071 -0.7071 0'")
    s = common(sub.add_parser("channel", help="single-qubit channel analysis"))
    s.add_argument("--phase-damping", type=float, default=None, help="analyse phase damping with this p")
    s = common(sub.add_parser("demo-nmr", help="free-induction signal and spectrum"))
    s.add_argument("--omega", default=None, help="comma-separated angular frequencies")
    s.add_argument("--alpha", type=float, default=None)
    s.add_argument("--gamma", type=float, default=None)
    s.add_argument("--duration", type=float, default=None)
    s.add_argument("--samples", type=int, default=None)
    s = common(sub.add_parser("demo-boost", help="polarization seen from a boosted frame"))
    s.add_argument("--alpha", type=float, default=None)
    s.add_argument("--beta", type=float, default=None)
    s.add_argument("--epsilon", type=float, default=None)
    s.add_argument("--lam-min", type=float, default=None)
    s.add_argument("--lam-max", type=float, default=None)
    s.add_argument("--steps", type=int, default=None)
    return ap


def read_config(path: str) -> dict:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected 'key = value'")
        k, v = (x.strip() for x in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def resolve(ns: argparse.Namespace) -> RunConfig:
    """Merge flags over config file over defaults."""
    flags = {k: v for k, v in vars(ns).items() if k not in ("command", "config")}
    conf = read_config(ns.config) if ns.config else {}
    keys = {**DEFAULTS["common"], **DEFAULTS[ns.command]}
    unknown = set(conf) - set(keys)
    if unknown:
        raise CliError(f"unknown config keys: {', '.join(sorted(unknown))}")
    merged = {}
    for k, d in keys.items():
        if flags.get(k) is not None:
            merged[k] = flags[k]
        elif k in conf:
            try:
                merged[k] = TYPES.get(k, str)(conf[k])
            except ValueError:
                raise CliError(f"config value for {k!r} is not valid: {conf[k]!r}") from None
        else:
            merged[k] = d
    common = {k: merged.pop(k) for k in DEFAULTS["common"]}
    return RunConfig(ns.command, common["in"], common["out"], common["qubits"],
                     common["seed"], common["tol"], merged)


def write_tables(tables: list[Table], out: str | None, stream=None):
    if out is None:
        stream = stream or sys.stdout
        stream.write("\n".join(f"# {t.name}\n{render(t)}" for t in tables))
        return
    path = Path(out)
    for i, t in enumerate(tables):
        target = path if i == 0 else path.with_name(f"{path.stem}_{t.name}{path.suffix}")
        target.write_text(render(t))


def run(argv=None) -> list[Table]:
    ns = build_parser().parse_args(argv)
    cfg = resolve(ns)
    tables = HANDLERS[cfg.command](cfg)
    write_tables(tables, cfg.output)
    return tables


def main(argv=None) -> int:
    try:
        run(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ValueError, OSError) as exc:
        # QubitError, CircuitError, ChannelError and CliError are all ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
