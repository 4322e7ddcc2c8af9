"""Command-line entry point: ``steklab {mesh,spectrum,verify,convergence,lemmas}``.

Exit codes: 0 all checks pass, 1 an inequality or check is violated,
2 usage or parameter error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import __version__, analytic, fem
from .errors import ParameterError, ParseError, StekError
from .ineq import fuzz_lemmas
from .mesh import (
    Annulus,
    Disk,
    DomainTopology,
    FromFile,
    PerturbedDisk,
    boundary_length,
    generate,
    load,
    mesh_to_dict,
    save,
    topology,
)
from .report import (
    REPORT_COLUMNS,
    dumps,
    envelope,
    inequality_envelope,
    reports_to_csv,
    rows_to_csv,
)
from .spectrum import BOUNDARY_LAPLACIAN, FEM_TOLERANCE, STEKLOV, Spectrum
from .study import ROW_COLUMNS, convergence_study
from .suite import INEQUALITIES, GridPoint, SpectraBundle, default_grid, evaluate, run_all

OUTPUT_DIR_ENV = "STEKLAB_OUTPUT_DIR"
CONFIG_FORMAT = "steklab-config"
DEFAULT_SEED = 42
DEFAULT_COUNT = 64

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

# parameters each inequality accepts from the command line
ACCEPTED = {
    "thm1": ("r", "s", "m", "p", "q", "a", "c"),
    "thm2": ("r", "s", "m", "p", "q", "k", "mu"),
    "yy": ("p", "q"),
    "hps": ("p", "q"),
    "gp": ("genus", "k", "p", "q"),
    "k": ("genus", "k", "p", "q"),
    "hps-trace": ("n",),
    "majorized": ("n",),
    "inverse-trace-2": ("n",),
    "power-q": ("q", "r", "s", "m", "literal_index"),
    "cor1": ("n",),
    "cor2": ("n",),
    "probe-open": ("n",),
}
INTEGER_PQ = {"yy", "hps", "gp", "k"}
# keys never echoed into the output (they do not change results)
NOT_ECHOED = {"command", "config", "out", "format", "no_timestamp"}


# --------------------------------------------------------------------------
# value parsing
# --------------------------------------------------------------------------


def _floats(value, name: str) -> tuple[float, ...]:
    if value is None:
        return ()
    if isinstance(value, (list, tuple)):
        items = value
    else:
        items = [v for v in str(value).split(",") if v.strip()]
    try:
        return tuple(float(v) for v in items)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"--{name}: expected comma-separated numbers, got {value!r}") from exc


def _ints(value, name: str) -> tuple[int, ...]:
    vals = _floats(value, name)
    if any(v != int(v) for v in vals):
        raise ParameterError(f"--{name}: expected integers, got {value!r}")
    return tuple(int(v) for v in vals)


def _integral(x: float):
    return int(x) if float(x).is_integer() else x


@dataclass(frozen=True)
class Source:
    """Where the spectra come from: a closed form or a mesh."""

    label: str
    analytic_domain: object = None
    mesh: object = None

    @property
    def is_analytic(self) -> bool:
        return self.analytic_domain is not None


def parse_analytic(text: str):
    """``disk:R``, ``circle:L`` or ``annulus:a,b``."""
    kind, _, rest = text.partition(":")
    try:
        nums = [float(x) for x in rest.split(",")] if rest else []
    except ValueError as exc:
        raise ParameterError(f"--analytic: bad number in {text!r}") from exc
    if kind == "disk" and len(nums) <= 1:
        r = nums[0] if nums else 1.0
        if not r > 0:
            raise ParameterError(f"disk radius must be positive, got {r}")
        return analytic.DiskDomain(r)
    if kind == "circle" and len(nums) <= 1:
        L = nums[0] if nums else 2 * math.pi
        if not L > 0:
            raise ParameterError(f"circle length must be positive, got {L}")
        return analytic.CircleDomain(L)
    if kind == "annulus" and len(nums) == 2:
        if not 0 < nums[0] < nums[1]:
            raise ParameterError(f"annulus needs 0 < a < b, got {nums}")
        return analytic.AnnulusDomain(*nums)
    raise ParameterError(f"--analytic expects disk:R, circle:L or annulus:a,b, got {text!r}")


def _shape(args):
    if args.shape == "disk":
        return Disk(args.radius)
    if args.shape == "annulus":
        if args.inner is None or args.outer is None:
            raise ParameterError("annulus needs --inner and --outer")
        return Annulus(args.inner, args.outer)
    if args.shape == "perturbed":
        return PerturbedDisk(_floats(args.cos, "cos"), _floats(args.sin, "sin"), args.r0)
    raise ParameterError(f"unknown shape {args.shape!r}")


def _source(args) -> Source:
    chosen = [x for x in (args.analytic, args.mesh, args.shape) if x]
    if len(chosen) != 1:
        raise ParameterError("give exactly one of --analytic, --mesh, --shape")
    if args.analytic:
        return Source(args.analytic, analytic_domain=parse_analytic(args.analytic))
    if args.mesh:
        FromFile(args.mesh).validate()
        return Source(args.mesh, mesh=load(args.mesh))
    shape = _shape(args)
    shape.validate()
    return Source(f"{args.shape}@{args.refinement}", mesh=generate(shape, args.refinement))


def _analytic_geometry(dom) -> tuple[float, DomainTopology]:
    if isinstance(dom, analytic.DiskDomain):
        return 2 * math.pi * dom.radius, DomainTopology(0, 1)
    if isinstance(dom, analytic.AnnulusDomain):
        return 2 * math.pi * (dom.r_inner + dom.r_outer), DomainTopology(0, 2)
    raise ParameterError("a circle has no Steklov spectrum; use disk:R or annulus:a,b")


def _spectrum(src: Source, kind: str, count: int, tol: float) -> Spectrum:
    if src.is_analytic:
        return analytic.spectrum_for(src.analytic_domain, count, kind)
    if kind == STEKLOV:
        return fem.steklov_spectrum(src.mesh, count, tol)
    return fem.boundary_laplacian_spectrum(src.mesh, count, tol)


def _bundle(src: Source, count: int | None, tol: float) -> SpectraBundle:
    if src.is_analytic:
        L, topo = _analytic_geometry(src.analytic_domain)
        n = count or DEFAULT_COUNT
    else:
        L, topo = boundary_length(src.mesh).total, topology(src.mesh)
        n = count or min(DEFAULT_COUNT, len(src.mesh.boundary_vertices))
    return SpectraBundle(_spectrum(src, STEKLOV, n, tol), _spectrum(src, BOUNDARY_LAPLACIAN, n, tol), L, topo)


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------


def _echo(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in NOT_ECHOED or callable(v):
            continue
        out[k] = list(v) if isinstance(v, tuple) else v
    return out


def _write(args, text: str, default_name: str) -> None:
    path = args.out
    if path is None and os.environ.get(OUTPUT_DIR_ENV):
        path = str(Path(os.environ[OUTPUT_DIR_ENV]) / default_name)
    if path is None:
        sys.stdout.write(text)
        return
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text)


def _emit(args, env: dict, csv_text: str) -> None:
    ext = "csv" if args.format == "csv" else "json"
    _write(args, csv_text if ext == "csv" else dumps(env), f"{args.command}.{ext}")


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_mesh(args) -> int:
    shape = _shape(args)
    shape.validate()
    mesh = generate(shape, args.refinement)
    counts = (
        f"vertices={len(mesh.vertices)} triangles={len(mesh.triangles)} "
        f"boundary_loops={len(mesh.boundary_loops)} boundary_vertices={len(mesh.boundary_vertices)}"
    )
    path = args.out
    if path is None and os.environ.get(OUTPUT_DIR_ENV):
        path = str(Path(os.environ[OUTPUT_DIR_ENV]) / f"{args.shape}-r{args.refinement}.mesh.json")
    if path is None:
        sys.stdout.write(json.dumps(mesh_to_dict(mesh)) + "\n")
        print(counts, file=sys.stderr)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        save(mesh, path)
        print(f"{path}: {counts}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    src = _source(args)
    kind = STEKLOV if args.kind == "steklov" else BOUNDARY_LAPLACIAN
    spec = _spectrum(src, kind, args.count, args.spectrum_tol)
    env = envelope("spectrum", _echo(args), [spec.to_dict()], {"total": 1, "passed": 1, "sharp": 0},
                   not args.no_timestamp)
    rows = [[j, v, spec.kind, spec.source, spec.label] for j, v in enumerate(spec.values.tolist(), start=1)]
    _emit(args, env, rows_to_csv(("index", "value", "kind", "source", "label"), rows))
    return EXIT_OK


def _grid_point(args) -> GridPoint:
    name = args.inequality
    prm = {}
    for key in ("n", "p", "q", "r", "s", "m", "k", "mu", "a", "c", "genus", "literal_index"):
        val = getattr(args, key)
        if val is None or val is False:
            continue
        if key not in ACCEPTED[name]:
            raise ParameterError(f"--{key.replace('_', '-')} is not a parameter of {name}")
        if key in ("a", "c"):
            val = list(_floats(val, key))
        elif key == "n":
            val = "inf" if str(val) == "inf" else int(_ints(val, "n")[0])
        elif key in ("p", "q") and name in INTEGER_PQ:
            val = _integral(val)
        prm[key] = val
    return GridPoint(name, prm)


def cmd_verify(args) -> int:
    if args.all == bool(args.inequality):
        raise ParameterError("give exactly one of --inequality NAME or --all")
    src = _source(args)
    bundle = _bundle(src, args.count, args.spectrum_tol)
    if args.all:
        grid = default_grid(bundle.topology)
    else:
        grid = [_grid_point(args)]
    reports = run_all(bundle, grid, args.tol)
    env = inequality_envelope("verify", _echo(args), reports, not args.no_timestamp)
    _emit(args, env, reports_to_csv(reports))
    failed = [r for r in reports if not r.passed and r.name != "probe-open"]
    return EXIT_VIOLATION if failed else EXIT_OK


def cmd_convergence(args) -> int:
    if args.shape not in ("disk", "annulus"):
        raise ParameterError(f"no closed-form reference for shape {args.shape!r}; use disk or annulus")
    levels = _ints(args.levels, "levels")
    table = convergence_study(_shape(args), levels, args.count)
    ok = table.monotone
    env = envelope("convergence", _echo(args), [table.to_dict()],
                   {"total": 1, "passed": int(ok), "sharp": 0}, not args.no_timestamp)
    _emit(args, env, rows_to_csv(ROW_COLUMNS, table.rows()))
    if not ok:
        print("error: relative errors do not decrease monotonically over the levels", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_lemmas(args) -> int:
    results = fuzz_lemmas(args.trials, args.seed)
    dicts = [r.to_dict() for r in results]
    passed = sum(r.violations == 0 for r in results)
    env = envelope("lemmas", _echo(args), dicts, {"total": len(dicts), "passed": passed, "sharp": 0},
                   not args.no_timestamp)
    rows = [[r.name, r.trials, r.violations, r.worst_relative_slack] for r in results]
    _emit(args, env, rows_to_csv(("check", "trials", "violations", "worst_relative_slack"), rows))
    return EXIT_OK if passed == len(dicts) else EXIT_VIOLATION


# --------------------------------------------------------------------------
# parser and configuration
# --------------------------------------------------------------------------


def _positive_int(text) -> int:
    try:
        v = int(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("output")
    g.add_argument("--out", help=f"output file (default: stdout, or ${OUTPUT_DIR_ENV}/<command>.<ext>)")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--config", help="JSON config file; flags take precedence over it")
    g.add_argument("--no-timestamp", action="store_true", help="omit the timestamp for byte-stable output")


def _shape_args(p: argparse.ArgumentParser, required: bool = False) -> None:
    g = p.add_argument_group("domain")
    g.add_argument("--shape", choices=("disk", "annulus", "perturbed"), required=required)
    g.add_argument("--radius", type=float, default=1.0)
    g.add_argument("--inner", type=float)
    g.add_argument("--outer", type=float)
    g.add_argument("--r0", type=float, default=1.0, help="base radius of a perturbed disk")
    g.add_argument("--cos", help="cosine coefficients a1,a2,... of a perturbed disk")
    g.add_argument("--sin", help="sine coefficients b1,b2,... of a perturbed disk")
    g.add_argument("--refinement", type=_positive_int, default=4)


def _source_args(p: argparse.ArgumentParser) -> None:
    _shape_args(p)
    p.add_argument("--analytic", help="closed-form source: disk:R, circle:L or annulus:a,b")
    p.add_argument("--mesh", help="mesh file written by `steklab mesh`")
    p.add_argument("--spectrum-tol", type=float, default=FEM_TOLERANCE,
                   help="tolerance attached to FEM spectra (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="steklab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"steklab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mesh", help="generate and save a mesh")
    _shape_args(p, required=True)
    _common(p)
    p.set_defaults(func=cmd_mesh)

    p = sub.add_parser("spectrum", help="Steklov or boundary-Laplacian eigenvalues")
    _source_args(p)
    p.add_argument("--kind", choices=("steklov", "boundary-laplacian"), default="steklov")
    p.add_argument("--count", type=_positive_int, default=10)
    _common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="evaluate inequalities on a domain")
    _source_args(p)
    p.add_argument("--inequality", choices=INEQUALITIES)
    p.add_argument("--all", action="store_true", help="run the default parameter grid")
    p.add_argument("--count", type=_positive_int, help="eigenvalues to compute")
    p.add_argument("--tol", type=float, help="override the report tolerance")
    g = p.add_argument_group("inequality parameters")
    g.add_argument("--n", help="truncation n (cor1 also accepts 'inf')")
    for name in ("p", "q", "mu"):
        g.add_argument(f"--{name}", type=float)
    for name in ("r", "s", "m", "k", "genus"):
        g.add_argument(f"--{name}", type=int)
    g.add_argument("--a", help="weights a1,...,am (descending, nonnegative)")
    g.add_argument("--c", help="weights c1,...,cm (descending, positive)")
    g.add_argument("--literal-index", action="store_true", default=None,
                   help="power-q: read the second spectrum at b0+r+i")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("convergence", help="refinement study against closed forms")
    _shape_args(p)
    p.set_defaults(shape="disk")
    p.add_argument("--levels", default="3,4,5", help="strictly increasing refinements (default %(default)s)")
    p.add_argument("--count", type=_positive_int, default=7)
    _common(p)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("lemmas", help="randomized checks of the matrix lemmas")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _common(p)
    p.set_defaults(func=cmd_lemmas)
    return parser


def load_config(path: str) -> dict:
    """Config files are ``{"format": "steklab-config", "version": 1, "options": {...}}``."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParameterError(f"cannot read config {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict) or data.get("format") != CONFIG_FORMAT:
        raise ParseError(f"{path}: not a {CONFIG_FORMAT} file")
    if data.get("version") != 1:
        raise ParseError(f"{path}: unsupported config version {data.get('version')!r}")
    opts = data.get("options", {})
    if not isinstance(opts, dict):
        raise ParseError(f"{path}: 'options' must be an object")
    return {k.replace("-", "_"): v for k, v in opts.items()}


def parse(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        opts = load_config(args.config)
        subparser = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in subparser._actions}
        unknown = sorted(set(opts) - known - {"config"})
        if unknown:
            raise ParameterError(f"config options not valid for {args.command}: {unknown}")
        subparser.set_defaults(**opts)
        args = parser.parse_args(argv)
    return args


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parse(argv)
        return args.func(args)
    except StekError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
