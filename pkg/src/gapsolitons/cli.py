"""Command-line front end: ``gapsolitons <command> [--config FILE] [--set k=v] ...``.

Exit codes: 0 success, 1 validation failure, 2 numerical failure,
3 physics violation (necessary condition fails).
"""

from __future__ import annotations

import argparse
import copy
import json
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import medium as med
from . import solitons as sol
from .errors import (DomainError, EffectiveMassWarning, NCViolation, NumericalError, SpectrumError,
                     SuperluminalWarning)
from .medium import Band, MediumParams
from .numerics import SolverConfig
from .rapidity import AtomChainParams, RapidityMode, taylor_ab
from .strings import (approx_pair_params, bae_residual, build_string, check_nc, image_consistency,
                      solve_pair_params, string_image)
from .tables import Table, to_csv, to_json

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_PHYSICS = 0, 1, 2, 3

DEFAULT_CONFIG = {
    "medium": {"omega_perp": 1.0, "omega_par": 2.0, "c": 1.0},
    "atoms": {"omega12": 1.5, "beta": 0.01, "gamma": 0.015, "rho": 1.0, "length": None, "m_atoms": None},
    "solver": {},
    "rapidity_mode": "FGM",
    "output_format": "csv",
    "grid": None,
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    start: float | None = None
    stop: float | None = None
    points: int | None = None
    values: tuple | None = None

    def __post_init__(self):
        if self.values is not None:
            if len(self.values) == 0:
                raise ConfigError("grid.values: empty grid")
            return
        if self.points is None or self.start is None or self.stop is None:
            raise ConfigError("grid: need start, stop and points (or values)")
        if int(self.points) != self.points or self.points < 2:
            raise ConfigError("grid.points: must be an integer >= 2")
        if not self.start < self.stop:
            raise ConfigError("grid: start must be < stop")

    def array(self) -> list:
        if self.values is not None:
            return [float(v) for v in self.values]
        return [float(x) for x in np.linspace(self.start, self.stop, int(self.points))]


@dataclass(frozen=True)
class RunConfig:
    medium: MediumParams
    atoms: AtomChainParams
    solver: SolverConfig
    rapidity_mode: RapidityMode
    output_format: str
    grid: Grid | None


def _build(cls, section: str, data):
    if not isinstance(data, dict):
        raise ConfigError(f"{section}: expected an object")
    fields = cls.__dataclass_fields__
    unknown = set(data) - set(fields)
    if unknown:
        raise ConfigError(f"{section}: unknown field(s) {', '.join(sorted(unknown))}")
    try:
        return cls(**{k: v for k, v in data.items() if v is not None})
    except ConfigError as exc:
        raise ConfigError(str(exc)) from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{section}: {exc}") from exc


def parse_config(doc: dict) -> RunConfig:
    unknown = set(doc) - set(DEFAULT_CONFIG)
    if unknown:
        raise ConfigError(f"unknown top-level field(s) {', '.join(sorted(unknown))}")
    try:
        mode = RapidityMode(str(doc.get("rapidity_mode", "FGM")).upper())
    except ValueError as exc:
        raise ConfigError("rapidity_mode: must be FGM or VACUUM") from exc
    fmt = doc.get("output_format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError("output_format: must be csv or json")
    grid_doc = doc.get("grid")
    if grid_doc is not None and "values" in grid_doc and grid_doc["values"] is not None:
        grid_doc = dict(grid_doc, values=tuple(grid_doc["values"]))
    return RunConfig(
        medium=_build(MediumParams, "medium", doc.get("medium", {})),
        atoms=_build(AtomChainParams, "atoms", doc.get("atoms", {})),
        solver=_build(SolverConfig, "solver", doc.get("solver", {})),
        rapidity_mode=mode,
        output_format=fmt,
        grid=None if grid_doc is None else _build(Grid, "grid", grid_doc),
    )


def apply_override(doc: dict, assignment: str) -> None:
    """Apply ``a.b.c=value`` to a nested dict; ``value`` is parsed as JSON when possible."""
    if "=" not in assignment:
        raise ConfigError(f"--set {assignment!r}: expected key=value")
    key, raw = assignment.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    parts = key.split(".")
    node = doc
    for p in parts[:-1]:
        if node.get(p) is None:
            node[p] = {}
        node = node[p]
        if not isinstance(node, dict):
            raise ConfigError(f"--set {key}: {p} is not an object")
    node[parts[-1]] = value


def load_config(path: str | None, overrides=()) -> RunConfig:
    doc = copy.deepcopy(DEFAULT_CONFIG)
    if path:
        try:
            user = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
        except OSError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        if not isinstance(user, dict):
            raise ConfigError(f"{path}: top level must be an object")
        for key, value in user.items():
            if isinstance(value, dict) and isinstance(doc.get(key), dict):
                doc[key].update(value)
            else:
                doc[key] = value
    for assignment in overrides:
        apply_override(doc, assignment)
    return parse_config(doc)


# -- commands ---------------------------------------------------------------------

def _grid(cfg: RunConfig, default: list) -> list:
    return cfg.grid.array() if cfg.grid is not None else default


def _status(exc) -> str:
    return "ok" if exc is None else type(exc).__name__


def cmd_medium(cfg: RunConfig) -> list:
    m, sc = cfg.medium, cfg.solver
    table = Table("medium", ["xi", "band", "epsilon", "n", "k", "nu", "kappa", "status"])
    default = list(np.linspace(0.05 * m.omega_perp, 1.5 * m.omega_par, 50))
    for xi in _grid(cfg, default):
        row = {"xi": xi}
        try:
            band = med.classify(xi, m, sc)
            row["band"] = band.value
            row["epsilon"] = float(med.permeability(xi, m, sc))
            if band is Band.Gap:
                row["nu"] = med.nu(xi, m, sc)
                row["kappa"] = med.kappa(xi, m, sc)
            else:
                row["n"] = med.band_index(xi, m, sc)
                row["k"] = xi * row["n"] / m.c
            row["status"] = "ok"
        except SpectrumError as exc:
            row["status"] = _status(exc)
        table.add(**row)
    return [table]


def cmd_string(cfg: RunConfig, H: float, n: int, band: str | None = None):
    m, a, sc, mode = cfg.medium, cfg.atoms, cfg.solver, cfg.rapidity_mode
    if band is None:
        band = "lower" if H < 0 else "upper"
    band_enum = Band(band)
    string = build_string(H, n, a.beta)
    image = string_image(string, band_enum, m, a, mode, sc)
    nc = check_nc(image)
    residuals = bae_residual(image, a, m) if a.length is not None else [None] * n
    consistency = image_consistency(image, m, a, mode, sc)
    members = Table("members", ["j", "h_re", "h_im", "omega_re", "omega_im", "k_re", "k_im",
                                "nc_ok", "map_residual", "bae_residual"])
    for j in range(n):
        h, w, k = string.rapidities[j], image.frequencies[j], image.momenta[j]
        members.add(j=j + 1, h_re=h.real, h_im=h.imag, omega_re=w.real, omega_im=w.imag,
                    k_re=k.real, k_im=k.imag, nc_ok=nc.ok[j], map_residual=consistency[j],
                    bae_residual=None if residuals[j] is None else abs(residuals[j]))
    summary = Table("summary", ["kind", "n", "H", "band", "mode", "eigenenergy", "eigenenergy_imag",
                                "nc_passed", "max_bae_residual"])
    finite = [abs(r) for r in residuals if r is not None]
    summary.add(kind=image.kind.value, n=n, H=H, band=band_enum.value, mode=mode.value,
                eigenenergy=image.eigenenergy, eigenenergy_imag=image.eigenenergy_imag,
                nc_passed=nc.passed, max_bae_residual=max(finite) if finite else None)
    return [members, summary], (EXIT_OK if nc.passed else EXIT_PHYSICS)


def cmd_ordinary(cfg: RunConfig, n: int) -> list:
    m, a, sc, mode = cfg.medium, cfg.atoms, cfg.solver, cfg.rapidity_mode
    table = Table("ordinary", ["xi", "q", "inv_v", "inv_V", "atomic_fraction", "status"])
    default = list(np.linspace(0.05 * m.omega_perp, 0.95 * m.omega_perp, 50))
    for xi in _grid(cfg, default):
        try:
            p = sol.ordinary_point(xi, n, a, m, mode, sc)
            table.add(xi=xi, q=p.momentum, inv_v=p.inv_v, inv_V=p.inv_V,
                      atomic_fraction=(p.inv_V - p.inv_v) / p.inv_v, status="ok")
        except SpectrumError as exc:
            table.add(xi=xi, status=_status(exc))
    return [table]


def cmd_gap(cfg: RunConfig, l_max: int, H: float) -> list:
    m, a, sc = cfg.medium, cfg.atoms, cfg.solver
    if l_max < 1:
        raise ConfigError("l_max must be >= 1")
    ab = taylor_ab(m, a, sc)
    lmax_ok = sol.max_pairs(ab, a, m, sc)
    bands = Table("bands", ["l", "center", "center_direct", "width", "mass", "bottom", "pair_size",
                            "q", "bracket", "inv_v", "inv_V", "max_pair_residual", "status"])
    pairs = Table("pairs", ["l", "j", "xi0", "xi", "eta", "eta_closed", "residual", "iterations"])
    for l in range(1, l_max + 1):
        try:
            band = sol.gap_band(l, ab, a, m, sc)
        except SpectrumError as exc:
            bands.add(l=l, status=_status(exc))
            continue
        row = dict(l=l, center=band.center, center_direct=band.center_direct, width=band.width,
                   mass=band.mass, bottom=band.bottom, pair_size=sol.band_pair_size(band, m, sc))
        flags = []
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                vr = sol.gap_velocity_ratio(l, H, a, band, m)
                row.update(q=sol.linked_momentum(H, band), bracket=vr.bracket, inv_v=vr.inv_v, inv_V=vr.inv_V)
            except SpectrumError as exc:
                flags.append(_status(exc))
        flags += [w.category.__name__ for w in caught
                  if issubclass(w.category, (SuperluminalWarning, EffectiveMassWarning))]
        worst = 0.0
        for j in range(1, l + 1):
            approx = approx_pair_params(H, l, j, ab, a)
            try:
                p = solve_pair_params(H, l, j, m, a, ab, sc)
            except SpectrumError as exc:
                flags.append(_status(exc))
                pairs.add(l=l, j=j, xi0=approx.xi, eta_closed=approx.eta)
                continue
            worst = max(worst, p.residual)
            pairs.add(l=l, j=j, xi0=approx.xi, xi=p.xi, eta=p.eta, eta_closed=approx.eta,
                      residual=p.residual, iterations=p.iterations)
        row.update(max_pair_residual=worst, status=";".join(flags) or "ok")
        bands.add(**row)
    summary = Table("summary", ["a", "b", "H", "l_max", "max_admissible_l"])
    summary.add(a=ab.a, b=ab.b, H=H, l_max=l_max, max_admissible_l=lmax_ok)
    return [bands, pairs, summary]


def cmd_composite(cfg: RunConfig, H: float, n: int, n_gap_pairs: int) -> list:
    m, a, sc = cfg.medium, cfg.atoms, cfg.solver
    ab = taylor_ab(m, a, sc)
    comp = sol.build_composite(H, n, n_gap_pairs, a, m, ab, sc)
    gap = Table("gap_part", ["j", "target_re", "target_im", "xi", "eta", "xi_closed", "eta_closed",
                             "k_re", "k_im", "q_leading", "residual"])
    for p, k, ql in zip(comp.gap_part, comp.gap_momenta, comp.gap_q_leading):
        gap.add(j=p.j, target_re=p.target.real, target_im=p.target.imag, xi=p.xi, eta=p.eta,
                xi_closed=a.omega12 + p.target.imag / ab.a, eta_closed=abs(H) / ab.a,
                k_re=k.real, k_im=k.imag, q_leading=ql, residual=p.residual)
    ordinary = Table("ordinary_part", ["j", "h_re", "h_im", "omega_re", "omega_im", "k_re", "k_im",
                                       "map_residual"])
    n_gap = len(comp.gap_part)
    for idx in range(n_gap, n - n_gap):
        h, w, k = comp.source.rapidities[idx], comp.image.frequencies[idx], comp.image.momenta[idx]
        ordinary.add(j=idx + 1, h_re=h.real, h_im=h.imag, omega_re=w.real, omega_im=w.imag,
                     k_re=k.real, k_im=k.imag, map_residual=comp.consistency[idx])
    summary = Table("summary", ["H", "n", "n_gap_pairs", "kind", "eigenenergy", "eigenenergy_imag",
                                "nc_passed", "max_map_residual"])
    summary.add(H=H, n=n, n_gap_pairs=n_gap_pairs, kind=comp.image.kind.value,
                eigenenergy=comp.eigenenergy, eigenenergy_imag=comp.image.eigenenergy_imag,
                nc_passed=comp.nc.passed, max_map_residual=max(comp.consistency))
    return [gap, ordinary, summary]


def cmd_vacuum(cfg: RunConfig, n: int) -> list:
    if cfg.rapidity_mode is not RapidityMode.VACUUM:
        raise ConfigError("vacuum: requires rapidity_mode=VACUUM")
    a, c = cfg.atoms, cfg.medium.c
    gamma = a.require_gamma()
    default = [a.omega12 + gamma * n * x for x in np.linspace(-5.0, 5.0, 41)]
    table = Table("vacuum", ["Omega", "Q", "inv_V", "V", "soliton_size", "status"])
    for w in _grid(cfg, default):
        inv_V = sol.vacuum_inverse_velocity(w, n, a, c)
        row = dict(Omega=w, inv_V=inv_V, V=1.0 / inv_V, soliton_size=sol.vacuum_soliton_size(n, a))
        try:
            row["Q"] = sol.vacuum_dispersion(w, w / c, n, a)
            row["status"] = "ok"
        except SpectrumError as exc:
            row["status"] = _status(exc)
        table.add(**row)
    return [table]


# -- entry point ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config field by dotted path, e.g. atoms.rho=0.5")
    common.add_argument("--format", choices=("csv", "json"), help="output format (overrides config)")
    common.add_argument("--out", help="output file (default: standard output)")

    parser = argparse.ArgumentParser(prog="gapsolitons", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("medium", parents=[common], help="permeability, index and wavenumbers on a grid")
    p = sub.add_parser("string", parents=[common], help="image, sign condition and Bethe residuals of one string")
    p.add_argument("--H", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--band", choices=[b.value for b in Band])
    p = sub.add_parser("ordinary", parents=[common], help="ordinary-soliton dispersion on C-")
    p.add_argument("--n", type=int, required=True)
    p = sub.add_parser("gap", parents=[common], help="gap-soliton bands and pair parameters")
    p.add_argument("--l-max", type=int, default=4)
    p.add_argument("--H", type=float, default=-0.01)
    p = sub.add_parser("composite", parents=[common], help="composite soliton from one string")
    p.add_argument("--H", type=float, required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--n-gap-pairs", type=int, default=1)
    p = sub.add_parser("vacuum", parents=[common], help="empty-space SIT dispersion table")
    p.add_argument("--n", type=int, required=True)
    return parser


def run(args) -> tuple[list, int, RunConfig]:
    cfg = load_config(args.config, args.overrides)
    code = EXIT_OK
    if args.command == "medium":
        tables = cmd_medium(cfg)
    elif args.command == "string":
        tables, code = cmd_string(cfg, args.H, args.n, args.band)
    elif args.command == "ordinary":
        tables = cmd_ordinary(cfg, args.n)
    elif args.command == "gap":
        tables = cmd_gap(cfg, args.l_max, args.H)
    elif args.command == "composite":
        tables = cmd_composite(cfg, args.H, args.n, args.n_gap_pairs)
    else:
        tables = cmd_vacuum(cfg, args.n)
    return tables, code, cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tables, code, cfg = run(args)
    except (ConfigError, ValueError) as exc:
        if isinstance(exc, DomainError):
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NCViolation as exc:
        print(f"error: NCViolation: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except (NumericalError, SpectrumError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    fmt = args.format or cfg.output_format
    text = to_json(tables, args.command) if fmt == "json" else to_csv(tables)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
