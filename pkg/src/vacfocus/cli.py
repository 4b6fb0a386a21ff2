"""Command-line front end: ray tables, observable sweeps, lab estimates, self-checks.

Settings come from an INI file (``--config``) and are overridden by flags.
Output is CSV (RFC 4180, header first) or a JSON array with the same keys.
Floats are written with ``repr`` so values round-trip exactly.

Exit codes: 0 success, 1 configuration error, 2 computation error,
3 a verification check failed.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from . import lab
from . import multiray
from . import observables as obs
from . import quadrature as quad
from . import verify

EXIT_OK, EXIT_CONFIG, EXIT_COMPUTE, EXIT_VERIFY = 0, 1, 2, 3

COMMANDS = ("trace", "observables", "lab", "verify")
GEOMETRIES = ("revolution", "cylinder")
METHODS = ("closed_form", "numeric", "both")
FORMATS = ("csv", "json")


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


@dataclass(frozen=True)
class RunConfig:
    geometry: str = "revolution"
    b: float = 1.0
    xi0: float = 0.1
    a_grid: tuple = ()  # empty: command default
    method: str = "closed_form"
    kinds: tuple = ("phi_sq", "E_sq")
    theta_points: int = 9
    taper_width: float = obs.TAPER_WIDTH
    tolerance: float = 1e-4  # relative, for numeric observables
    regulators: tuple = quad.OMEGA_REGULATORS
    atom: str = "Na"
    lam: float | None = None  # Lambda for the lab estimates; None: closed form
    t: float = 1e-3
    plasma_wavelength: float = lab.PLASMA_WAVELENGTH
    allow_sub_plasma: bool = False
    suite: str = "all"
    format: str = "csv"
    out: str = "-"
    jobs: int = 1
    atoms: dict = field(default_factory=lambda: dict(lab.ATOMS))
    constants: lab.PhysicalConstants = lab.CGS

    def validate(self) -> "RunConfig":
        def need(ok, name, msg):
            if not ok:
                raise ConfigError(f"{name}: {msg}")

        need(self.geometry in GEOMETRIES, "geometry", f"must be one of {GEOMETRIES}")
        need(self.b > 0, "b", "must be positive")
        need(0 <= self.xi0 < 2 * math.pi / 3, "xi0", "must lie in [0, 2pi/3)")
        need(all(a > 0 for a in self.a_grid), "a_grid", "distances must be positive")
        need(self.method in METHODS, "method", f"must be one of {METHODS}")
        need(all(k in ("phi_sq", "E_sq") for k in self.kinds) and self.kinds,
             "kinds", "must be a non-empty subset of phi_sq, E_sq")
        need(self.theta_points >= 2, "theta_points", "must be at least 2")
        need(0 <= self.taper_width < 1, "taper_width", "must lie in [0, 1)")
        need(self.tolerance > 0, "tolerance", "must be positive")
        need(len(self.regulators) >= 2 and all(r > 0 for r in self.regulators),
             "regulators", "need at least two positive values")
        need(self.atom in self.atoms, "atom", f"unknown atom; known: {sorted(self.atoms)}")
        need(self.lam is None or self.lam > 0, "lambda", "must be positive")
        need(self.t >= 0, "t", "must be non-negative")
        need(self.plasma_wavelength > 0, "plasma_wavelength", "must be positive")
        need(self.suite in ("all", *verify.SUITES), "suite",
             f"must be 'all' or one of {sorted(verify.SUITES)}")
        need(self.format in FORMATS, "format", f"must be one of {FORMATS}")
        need(self.jobs >= 1, "jobs", "must be at least 1")
        return self


# -- config parsing ---------------------------------------------------------------

def parse_grid(text: str) -> tuple:
    """``"0.5, 1, 2"`` or ``"log:START:STOP:COUNT"`` (log-spaced, inclusive)."""
    text = text.strip()
    try:
        if text.startswith("log:"):
            start, stop, count = text[4:].split(":")
            return tuple(float(x) for x in np.geomspace(float(start), float(stop), int(count)))
        return tuple(float(x) for x in text.replace(",", " ").split())
    except ValueError as exc:
        raise ConfigError(f"a_grid: cannot parse {text!r} ({exc})") from None


def _as_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


_SCALARS = {"geometry": str, "b": float, "xi0": float, "method": str,
            "theta_points": int, "taper_width": float, "tolerance": float,
            "atom": str, "lambda": float, "t": float, "plasma_wavelength": float,
            "allow_sub_plasma": _as_bool, "suite": str, "format": str, "out": str,
            "jobs": int}


def load_config(path: str | None) -> dict:
    """Read an INI file into ``RunConfig`` keyword arguments."""
    if path is None:
        return {}
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path} ({exc.strerror})") from None
    except configparser.Error as exc:
        raise ConfigError(f"config: {exc}") from None
    out: dict = {}
    atoms = dict(lab.ATOMS)
    for section in parser.sections():
        items = parser[section]
        if section.startswith("atom:"):
            name = section[5:]
            try:
                atoms[name] = lab.AtomSpec(name, float(items["mass"]),
                                           float(items["polarizability"]))
            except (KeyError, ValueError) as exc:
                raise ConfigError(f"[{section}]: {exc}") from None
            continue
        if section == "constants":
            try:
                kw = {k: (v if k == "version" else float(v)) for k, v in items.items()}
                out["constants"] = lab.PhysicalConstants(**kw)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"[constants]: {exc}") from None
            continue
        for key, raw in items.items():
            name = key.replace("-", "_")
            try:
                if name in ("a", "a_grid"):
                    out["a_grid"] = parse_grid(raw)
                elif name == "kinds":
                    out["kinds"] = tuple(raw.replace(",", " ").split())
                elif name == "regulators":
                    out["regulators"] = tuple(float(x) for x in raw.replace(",", " ").split())
                elif name in _SCALARS:
                    out["lam" if name == "lambda" else name] = _SCALARS[name](raw)
                else:
                    raise ConfigError(f"[{section}] {key}: unknown setting")
            except ValueError as exc:
                if isinstance(exc, ConfigError):
                    raise
                raise ConfigError(f"[{section}] {key}: {exc}") from None
    out["atoms"] = atoms
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    kw = load_config(args.config)
    flags = {"geometry": args.geometry, "b": args.b, "xi0": args.xi0, "method": args.method,
             "atom": args.atom, "format": args.format, "out": args.out,
             "taper_width": args.taper_width, "tolerance": args.tolerance,
             "lam": args.lambda_, "t": args.t, "jobs": args.jobs,
             "theta_points": args.theta_points}
    kw.update({k: v for k, v in flags.items() if v is not None})
    if args.a_grid is not None:
        kw["a_grid"] = parse_grid(args.a_grid)
    if args.a is not None:
        kw["a_grid"] = tuple(args.a)
    if args.allow_sub_plasma:
        kw["allow_sub_plasma"] = True
    if getattr(args, "suite", None):
        kw["suite"] = args.suite
    return RunConfig(**kw).validate()


# -- commands ---------------------------------------------------------------------

def _grid(cfg: RunConfig, default: tuple) -> tuple:
    return cfg.a_grid or default


def _trace_row(cfg: RunConfig, a: float, theta_prime: float) -> dict:
    mirror = geo.ParabolicMirror(cfg.b, cfg.xi0, cfg.geometry)
    row = {"command": "trace", "geometry": cfg.geometry, "b[len]": cfg.b,
           "xi0[rad]": cfg.xi0, "a[len]": a, "theta_prime[rad]": theta_prime}
    sol = geo.reflect(mirror, a, theta_prime)
    row.update({"theta[rad]": sol.theta, "x_i[len]": sol.x_i, "y_i[len]": sol.y_i,
                "ell[len]": sol.ell})
    xi1 = theta_prime - geo.CRITICAL_RIM_ANGLE
    partner, dl, status = None, None, "ok"
    if cfg.xi0 == 0:
        status = "sub-critical"
    elif xi1 == 0:
        partner, dl, status = theta_prime, 0.0, "critical"
    else:
        xi2 = multiray.conjugate_sum(xi1) - xi1
        partner = geo.CRITICAL_RIM_ANGLE + xi2
        dl = geo.path_difference(a, theta_prime, partner)
        if xi2 > cfg.xi0:
            status = "partner-beyond-rim"
    row.update({"theta2_prime[rad]": partner, "delta_ell[len]": dl, "status": status,
                "constants": cfg.constants.version})
    return row


def cmd_trace(cfg: RunConfig) -> list[dict]:
    if cfg.xi0 > 0:
        lo = max(geo.CRITICAL_RIM_ANGLE - cfg.xi0, 1e-3)
        thetas = np.linspace(lo, geo.CRITICAL_RIM_ANGLE + cfg.xi0, cfg.theta_points)
    else:
        thetas = np.linspace(math.pi / 6, geo.CRITICAL_RIM_ANGLE, cfg.theta_points)
    return [_trace_row(cfg, a, float(t)) for a in _grid(cfg, (0.01 * cfg.b,)) for t in thetas]


def _observable_rows(cfg: RunConfig, a: float, kind: str) -> list[dict]:
    func = obs.phi_sq if kind == "phi_sq" else obs.E_sq
    methods = ("closed_form", "numeric") if cfg.method == "both" else (cfg.method,)
    rows, closed = [], None
    for method in methods:
        res = func(cfg.geometry, a, cfg.xi0, method, taper_width=cfg.taper_width)
        if method == "closed_form":
            closed = res.value
        status = res.status
        if (method == "numeric" and status == "ok"
                and res.error > cfg.tolerance * abs(res.value)):
            status = "above-tolerance"
        ratio = res.value / closed if (closed and method == "numeric") else None
        rows.append({"command": "observables", "geometry": cfg.geometry, "xi0[rad]": cfg.xi0,
                     "a[len]": a, "kind": kind, "method": res.method.value,
                     "taper_width": cfg.taper_width if method == "numeric" else None,
                     "value": res.value, "error": res.error,
                     "units": f"len^{res.scaling_exponent} (hbar=c=1)",
                     "ratio_to_closed_form": ratio, "status": status,
                     "constants": cfg.constants.version})
    return rows


def _observables_point(args):
    cfg, a, kind = args
    return _observable_rows(cfg, a, kind)


def cmd_observables(cfg: RunConfig) -> list[dict]:
    tasks = [(cfg, a, k) for a in _grid(cfg, (1.0,)) for k in cfg.kinds]
    if cfg.jobs > 1 and len(tasks) > 1:
        # map keeps submission order, so output order does not depend on timing
        with ProcessPoolExecutor(cfg.jobs) as pool:
            chunks = list(pool.map(_observables_point, tasks))
    else:
        chunks = [_observables_point(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


def cmd_lab(cfg: RunConfig) -> list[dict]:
    atom = cfg.atoms[cfg.atom]
    const = cfg.constants
    if cfg.lam is not None:
        lam = cfg.lam
    else:
        lam = lab.LambdaCoefficient.mirror(cfg.geometry, cfg.xi0).value if cfg.xi0 > 0 else 0.0
    if not lam > 0:
        raise ValueError("Lambda vanishes for a sub-critical mirror; set lambda explicitly")
    floor = {"plasma_wavelength": cfg.plasma_wavelength,
             "allow_sub_plasma": cfg.allow_sub_plasma}
    base = {"command": "lab", "atom": atom.name, "geometry": cfg.geometry,
            "xi0[rad]": cfg.xi0, "lambda": lam, "t[s]": cfg.t}
    rows = []

    def emit(a, quantity, value, units, status="ok"):
        rows.append({**base, "a[cm]": a, "quantity": quantity, "value": value,
                     "units": units, "status": status, "constants": const.version})

    lev = lab.levitation_height(atom, lam, constants=const,
                                plasma_wavelength=cfg.plasma_wavelength)
    emit(None, "levitation_height", lev.height, "cm",
         "viable" if lev.viable else "below-plasma-wavelength")
    for a in _grid(cfg, (1e-5, 1e-4)):
        emit(a, "potential", lab.casimir_polder_potential(atom, lam, a, constants=const, **floor),
             "erg")
        emit(a, "deflection_ratio",
             lab.deflection_ratio(atom, lam, a, cfg.t, constants=const, **floor), "1")
        temp = lab.trap_temperature(atom, lam, a, constants=const, **floor)
        status = "ok"
        if a == 1e-5 and lam == 1e-3 and atom == lab.SODIUM and temp.discrepant:
            status = f"differs from quoted {temp.quoted!r} K by factor {temp.ratio_to_quoted:.3g}"
        emit(a, "trap_temperature", temp.kelvin, "K", status)
        if cfg.xi0 > 0:
            emit(a, "phase_shift",
                 lab.phase_shift(atom, a, cfg.t, cfg.xi0, constants=const, **floor),
                 "rad", "cylinder")
    return rows


def cmd_verify(cfg: RunConfig) -> list[dict]:
    return [c.as_row() for c in verify.run(cfg.suite, regulators=cfg.regulators)]


HANDLERS = {"trace": cmd_trace, "observables": cmd_observables, "lab": cmd_lab,
            "verify": cmd_verify}


# -- output -----------------------------------------------------------------------

def _cell(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _json_value(value):
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def render(rows: list[dict], fmt: str) -> str:
    keys: list = []
    for row in rows:
        keys.extend(k for k in row if k not in keys)
    if fmt == "json":
        data = [{k: _json_value(row.get(k)) for k in keys} for row in rows]
        return json.dumps(data, indent=1, allow_nan=True) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(keys)
    for row in rows:
        writer.writerow([_cell(row.get(k)) for k in keys])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vacfocus", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", metavar="PATH")
        p.add_argument("--geometry", choices=GEOMETRIES)
        p.add_argument("--b", type=float)
        p.add_argument("--xi0", type=float)
        p.add_argument("--a", type=float, nargs="+")
        p.add_argument("--a-grid", dest="a_grid", metavar="SPEC",
                       help="comma list or log:START:STOP:COUNT")
        p.add_argument("--atom")
        p.add_argument("--lambda", dest="lambda_", type=float)
        p.add_argument("--t", type=float, help="interaction time, s")
        p.add_argument("--method", choices=METHODS)
        p.add_argument("--format", choices=FORMATS)
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--taper-width", dest="taper_width", type=float)
        p.add_argument("--tolerance", type=float)
        p.add_argument("--theta-points", dest="theta_points", type=int)
        p.add_argument("--jobs", type=int)
        p.add_argument("--allow-sub-plasma", dest="allow_sub_plasma", action="store_true")
        if name == "verify":
            p.add_argument("suite", nargs="?", choices=("all", *verify.SUITES))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        cfg = build_config(args)
    except (ConfigError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        rows = HANDLERS[args.command](cfg)
    except Exception as exc:  # report any numerical failure as a computation error
        print(f"computation error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    text = render(rows, cfg.format)
    if cfg.out == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    if args.command == "verify" and not all(r["passed"] for r in rows):
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
