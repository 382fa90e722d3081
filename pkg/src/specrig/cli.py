"""Command-line interface: one subcommand per library operation.

Every numeric knob lives in :class:`RunConfig`.  Values come from the
defaults, then ``--config file.json``, then explicit flags, in that order of
precedence.  Results are JSON on stdout (CSV for point lists and length
spectra); ``--out DIR`` also writes ``result.json``, ``grid.pgm`` and
``points.csv`` where they apply.  Exit status is 0 on success, 2 when the
input is rejected and 3 when a computation fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import moduli, spectrum
from .errors import NumericalError, SpecrigError, ValidationError
from .famdyn import diagnostics, family, green, orbits, pcf, renorm
from .ratmap import INF, RationalMap, critical_points, point_to_json

DEFAULT_WINDOW = (-2.5, 1.0, -1.75, 1.75)


@dataclass
class RunConfig:
    precision: str | int = "double"  # "double" or a bit count for multiprecision
    root_tol: float = 1e-10
    cluster_radius: float = 1e-6
    compare_tol: float = 1e-6
    orbit_tol: float = 1e-9
    degree_cap: int = 1024
    seed: int = 0
    output_format: str = "json"
    threads: int | str = "auto"

    def __post_init__(self):
        for name in ("root_tol", "cluster_radius", "compare_tol", "orbit_tol"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")
        if self.precision != "double":
            try:
                bits = int(self.precision)
            except (TypeError, ValueError):
                raise ValidationError(f"precision must be 'double' or a bit count, got {self.precision!r}") from None
            if not 64 <= bits <= 4096:
                raise ValidationError("big-precision bits must lie in [64, 4096]")
            self.precision = bits
        if self.output_format not in ("json", "csv", "pgm"):
            raise ValidationError(f"unknown output format {self.output_format!r}")
        if self.degree_cap < 1:
            raise ValidationError("degree_cap must be >= 1")
        if self.threads != "auto":
            try:
                self.threads = int(self.threads)
            except (TypeError, ValueError):
                raise ValidationError(f"threads must be an integer or 'auto', got {self.threads!r}") from None
            if self.threads < 1:
                raise ValidationError("threads must be >= 1")

    @property
    def bits(self) -> int | None:
        return None if self.precision == "double" else int(self.precision)

    @property
    def workers(self) -> int:
        if self.threads == "auto":
            return os.cpu_count() or 1
        return int(self.threads)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        extra = set(obj) - known
        if extra:
            raise ValidationError(f"unknown config keys: {sorted(extra)}")
        return cls(**obj)


CONFIG_FLAGS = {"precision": "precision", "root_tol": "root_tol", "cluster_radius": "cluster_radius",
                "compare_tol": "compare_tol", "orbit_tol": "orbit_tol", "degree_cap": "degree_cap",
                "seed": "seed", "format": "output_format", "threads": "threads"}


def build_config(args: argparse.Namespace, environ=os.environ) -> RunConfig:
    values: dict[str, Any] = {}
    # some subcommands default to CSV; config and flags still override that
    if getattr(args, "format_default", None):
        values["output_format"] = args.format_default
    env = environ.get("SPECRIG_THREADS")
    if env:
        values["threads"] = env
    if args.config:
        try:
            obj = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}") from None
        values.update(obj)
    for flag, key in CONFIG_FLAGS.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[key] = v
    return RunConfig.from_json(values)


# -- input parsing ------------------------------------------------------------

def _load_json(src: str) -> Any:
    text = src if src.lstrip().startswith(("{", "[")) else None
    if text is None:
        try:
            text = Path(src).read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read {src}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON in {src}: {exc}") from None


def load_map(src: str) -> RationalMap:
    obj = _load_json(src)
    try:
        return RationalMap.from_json(obj)
    except (KeyError, TypeError, IndexError) as exc:
        raise ValidationError(f"malformed map JSON: {exc}") from None


def load_family(src: str | None, d: int) -> family.FamilySpec:
    if src is None or src == "unicritical":
        return family.unicritical_family(d)
    if src == "persistent":
        return family.persistent_fixed_point_family()
    obj = _load_json(src)
    try:
        return family.FamilySpec.from_json(obj)
    except (KeyError, TypeError, IndexError) as exc:
        raise ValidationError(f"malformed family JSON: {exc}") from None


def _complex(vals: Sequence[float] | None, default: complex | None = None) -> complex:
    if vals is None:
        if default is None:
            raise ValidationError("missing complex argument")
        return default
    if len(vals) == 1:
        return complex(vals[0], 0.0)
    if len(vals) == 2:
        z = complex(vals[0], vals[1])
        return INF if not (math.isfinite(vals[0]) and math.isfinite(vals[1])) else z
    raise ValidationError("complex values take one or two numbers: RE [IM]")


# -- output ---------------------------------------------------------------------

def _clean(obj):
    """JSON-safe copy: complex -> [re, im], non-finite reals -> 'inf'/'-inf'/'nan'."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return point_to_json(complex(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isfinite(v):
            return v
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, allow_nan=False) + "\n"


def points_csv(rows: Sequence[tuple[complex, str, int]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["re", "im", "kind", "period"])
    for z, kind, period in rows:
        w.writerow([repr(float(z.real)), repr(float(z.imag)), kind, period])
    return buf.getvalue()


@dataclass
class Output:
    result: dict
    text: str | None = None  # stdout override (CSV) when the format asks for it
    files: dict | None = None  # extra files for --out

    def emit(self, cfg: RunConfig, out_dir: str | None, stdout) -> None:
        body = dumps(self.result)
        if out_dir:
            path = Path(out_dir)
            path.mkdir(parents=True, exist_ok=True)
            (path / "result.json").write_text(body)
            for name, data in (self.files or {}).items():
                mode = "wb" if isinstance(data, bytes) else "w"
                with open(path / name, mode) as fh:
                    fh.write(data)
        if cfg.output_format == "pgm" and self.files and "grid.pgm" in self.files:
            stdout.buffer.write(self.files["grid.pgm"])
        elif cfg.output_format == "csv" and self.text is not None:
            stdout.write(self.text)
        else:
            stdout.write(body)


# -- subcommands ------------------------------------------------------------------

def _fp_kw(cfg: RunConfig) -> dict:
    return {"tol": cfg.root_tol, "bits": cfg.bits, "cap": cfg.degree_cap, "seed": cfg.seed,
            "cluster_radius": cfg.cluster_radius}


def cmd_spectrum(args, cfg):
    table = spectrum.tau(load_map(args.map), args.n, **_fp_kw(cfg))
    return Output(table.to_json(), text=table.lengths_csv())


def cmd_lengths(args, cfg):
    table = spectrum.tau(load_map(args.map), args.n, **_fp_kw(cfg))
    res = {"degree": table.degree, "n_max": table.n_max,
           "lengths": [{"n": p.n, "lengths": L} for p, L in zip(table.periods, table.lengths())]}
    if cfg.output_format == "json":
        return Output(res)
    return Output(res, text=table.lengths_csv())


def cmd_compare(args, cfg):
    kw = _fp_kw(cfg)
    A = spectrum.tau(load_map(args.a), args.n, **kw)
    B = spectrum.tau(load_map(args.b), args.n, **kw)
    dist, equal = spectrum.compare_spectra(A, B, cfg.compare_tol)
    return Output({"equal": equal, "distance": dist, "label": moduli.collision_label(dist, cfg.compare_tol)})


def cmd_fixedpoints(args, cfg):
    return Output(spectrum.fixed_points(load_map(args.map), args.n, **_fp_kw(cfg)).to_json())


def cmd_critical(args, cfg):
    crit = critical_points(load_map(args.map))
    return Output({"critical_points": [{"point": point_to_json(x), "multiplicity": m} for x, m in crit]})


def cmd_conj(args, cfg):
    w = moduli.conjugacy_test(load_map(args.f), load_map(args.g), tol=args.tol)
    return Output({"conjugate": w is not None, "witness": None if w is None else w.to_json()})


def cmd_milnor(args, cfg):
    e1, e2, e3 = moduli.milnor_coordinates(load_map(args.map))
    return Output({"e1": e1, "e2": e2, "e3": e3})


def cmd_lattes(args, cfg):
    f = moduli.flexible_lattes((_complex(args.a), _complex(args.b)))
    return Output(f.to_json())


def cmd_elemtrans(args, cfg):
    f, g = moduli.elementary_transform(load_map(args.h1), load_map(args.h2))
    kw = _fp_kw(cfg)
    dist, equal = spectrum.compare_spectra(spectrum.tau(f, args.n, **kw), spectrum.tau(g, args.n, **kw),
                                           cfg.compare_tol)
    return Output({"f": f.to_json(), "g": g.to_json(), "distance": dist, "equal": equal})


def cmd_semiconj(args, cfg):
    f, g = load_map(args.f), load_map(args.g)
    h = moduli.semiconjugacy_search(f, g, args.deg, starts=args.starts, seed=cfg.seed, tol=args.tol)
    if h is None:
        return Output({"found": False, "h": None, "residual": None})
    return Output({"found": True, "h": h.to_json(), "residual": moduli.semiconjugacy_residual(f, g, h)})


def cmd_pcf(args, cfg):
    ok, classes = orbits.is_pcf(load_map(args.map), args.max_iters, cfg.orbit_tol)
    return Output({"pcf": ok, "critical_orbits": [c.to_json() for c in classes]})


def cmd_hyperbolic(args, cfg):
    return Output({"hyperbolic_disjoint": orbits.is_hyperbolic_disjoint(load_map(args.map), args.max_iters,
                                                                        cfg.orbit_tol)})


def cmd_green(args, cfg):
    F = load_family(args.family, args.d)
    g, err = green.green_value(F, args.marked, _complex(args.t), args.n_iter, with_error=True)
    return Output({"value": g, "error": err})


def _window(args) -> tuple[float, float, float, float]:
    return tuple(float(v) for v in (args.window or DEFAULT_WINDOW))


def cmd_bifgrid(args, cfg):
    F = load_family(args.family, args.d)
    mu = green.mu_bif(F, args.marked or ["c0"], _window(args), args.resolution, args.n_iter, cfg.workers)
    return Output(mu.header(), text=mu.to_csv(), files={"grid.pgm": mu.to_pgm(), "points.csv": mu.to_csv()})


def cmd_centers(args, cfg):
    pts = pcf.pcf_parameters_unicritical(args.d, args.period, args.kind, args.preperiod, seed=cfg.seed)
    rows = [(z, args.kind, args.period) for z in pts]
    text = points_csv(rows)
    res = {"d": args.d, "kind": args.kind, "period": args.period, "preperiod": args.preperiod,
           "count": len(pts), "points": pts}
    if cfg.output_format == "json":
        return Output(res, files={"points.csv": text})
    return Output(res, text=text, files={"points.csv": text})


def cmd_equidist(args, cfg):
    F = family.unicritical_family(args.d)
    mu = green.bifurcation_grid(F, "c0", _window(args), args.resolution, args.n_iter, cfg.workers)
    out = {}
    rows = []
    for n in args.periods:
        pts = pcf.pcf_parameters_unicritical(args.d, n, seed=cfg.seed)
        out[str(n)] = {"count": len(pts), "discrepancy": pcf.equidistribution_discrepancy(pts, mu, args.coarse)}
        rows += [(z, "center", n) for z in pts]
    res = {"d": args.d, "coarse": args.coarse, "grid": mu.header(), "periods": out}
    return Output(res, files={"points.csv": points_csv(rows), "grid.pgm": mu.to_pgm()})


def cmd_similarity(args, cfg):
    F = load_family(args.family, args.d)
    r = renorm.similarity_frames(F, args.marked, _complex(args.t0), args.periods, args.radius, args.samples,
                                 strict=args.strict)
    return Output(r.to_json(with_values=args.values))


def cmd_diagnostics(args, cfg):
    f = load_map(args.map)
    if args.which == "ce":
        est = diagnostics.ce_exponent_estimate(f, _complex(args.c, 0j), args.N, args.n_max)
        return Output({"log_lambda": est, "lambda": math.exp(est)})
    if args.which == "pr":
        return Output({"s": diagnostics.recurrence_exponent_estimate(f, _complex(args.c, 0j), args.n_max)})
    if args.which == "sep":
        fs, avg = diagnostics.separation_statistics(f, _complex(args.a), _complex(args.b), args.n, args.delta,
                                                    bits=cfg.bits)
        return Output({"fs_frequency": fs, "as_average": avg})
    rel = diagnostics.dynamically_related_probe(f, _complex(args.a), _complex(args.b), args.bound, cfg.orbit_tol)
    return Output(rel.to_json())


# -- parser -------------------------------------------------------------------------

def _precision(s: str):
    return s if s == "double" else int(s)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--config", help="JSON file with RunConfig fields (flags override it)")
    g.add_argument("--out", help="directory for result.json / grid.pgm / points.csv")
    g.add_argument("--precision", type=_precision, help="'double' or a bit count in [64, 4096]")
    g.add_argument("--root-tol", dest="root_tol", type=float)
    g.add_argument("--cluster-radius", dest="cluster_radius", type=float)
    g.add_argument("--compare-tol", dest="compare_tol", type=float)
    g.add_argument("--orbit-tol", dest="orbit_tol", type=float)
    g.add_argument("--degree-cap", dest="degree_cap", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--format", choices=["json", "csv", "pgm"])
    g.add_argument("--threads", help="worker count or 'auto' (overrides SPECRIG_THREADS)")

    p = argparse.ArgumentParser(prog="specrig", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(func=func)
        return sp

    cplx = dict(type=float, nargs="+", metavar="X")

    sp = add("spectrum", cmd_spectrum, "multiplier spectra S_1..S_n")
    sp.add_argument("--map", required=True)
    sp.add_argument("--n", type=int, default=spectrum.DEFAULT_N_MAX)
    sp = add("lengths", cmd_lengths, "length spectra (CSV by default)")
    sp.add_argument("--map", required=True)
    sp.add_argument("--n", type=int, default=spectrum.DEFAULT_N_MAX)
    sp.set_defaults(format_default="csv")
    sp = add("compare", cmd_compare, "compare truncated spectra of two maps")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--n", type=int, default=spectrum.DEFAULT_N_MAX)
    sp = add("fixedpoints", cmd_fixedpoints, "fixed points of f^n with multiplicity")
    sp.add_argument("--map", required=True)
    sp.add_argument("--n", type=int, default=1)
    sp = add("critical", cmd_critical, "critical points with multiplicity")
    sp.add_argument("--map", required=True)
    sp = add("conj", cmd_conj, "search for a Mobius conjugacy f -> g")
    sp.add_argument("--f", required=True)
    sp.add_argument("--g", required=True)
    sp.add_argument("--tol", type=float, default=moduli.CONJUGACY_TOL)
    sp = add("milnor", cmd_milnor, "symmetric functions of the fixed-point multipliers (degree 2)")
    sp.add_argument("--map", required=True)
    sp = add("lattes", cmd_lattes, "flexible Lattes map of y^2 = x^3 + a x + b")
    sp.add_argument("--a", required=True, **cplx)
    sp.add_argument("--b", required=True, **cplx)
    sp = add("elemtrans", cmd_elemtrans, "elementary transformation h1 o h2 vs h2 o h1")
    sp.add_argument("--h1", required=True)
    sp.add_argument("--h2", required=True)
    sp.add_argument("--n", type=int, default=2)
    sp = add("semiconj", cmd_semiconj, "search h with f o h = h o g")
    sp.add_argument("--f", required=True)
    sp.add_argument("--g", required=True)
    sp.add_argument("--deg", type=int, required=True)
    sp.add_argument("--starts", type=int, default=40)
    sp.add_argument("--tol", type=float, default=moduli.SEMICONJ_TOL)
    sp = add("pcf", cmd_pcf, "classify critical orbits")
    sp.add_argument("--map", required=True)
    sp.add_argument("--max-iters", dest="max_iters", type=int, default=200)
    sp = add("hyperbolic", cmd_hyperbolic, "hyperbolic-of-disjoint-type test")
    sp.add_argument("--map", required=True)
    sp.add_argument("--max-iters", dest="max_iters", type=int, default=200)

    def fam(sp):
        sp.add_argument("--family", help="family JSON, or 'unicritical' (default) / 'persistent'")
        sp.add_argument("--d", type=int, default=2, help="degree of the unicritical family")

    sp = add("green", cmd_green, "escape-rate potential of a marked point")
    fam(sp)
    sp.add_argument("--marked", default="c0")
    sp.add_argument("--t", required=True, **cplx)
    sp.add_argument("--n-iter", dest="n_iter", type=int, default=200)
    sp = add("bifgrid", cmd_bifgrid, "bifurcation measure on a parameter grid")
    fam(sp)
    sp.add_argument("--marked", action="append", help="marked point name (repeat to sum)")
    sp.add_argument("--window", type=float, nargs=4, metavar=("RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"))
    sp.add_argument("--resolution", type=int, default=256)
    sp.add_argument("--n-iter", dest="n_iter", type=int, default=200)
    sp = add("centers", cmd_centers, "PCF parameters of z^d + t (CSV re, im, kind, period)")
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--period", type=int, required=True)
    sp.add_argument("--kind", choices=["center", "misiurewicz"], default="center")
    sp.add_argument("--preperiod", type=int, default=0)
    sp.set_defaults(format_default="csv")
    sp = add("equidist", cmd_equidist, "discrepancy of centers against the bifurcation grid")
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--periods", type=int, nargs="+", required=True)
    sp.add_argument("--window", type=float, nargs=4, metavar=("RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"))
    sp.add_argument("--resolution", type=int, default=256)
    sp.add_argument("--n-iter", dest="n_iter", type=int, default=200)
    sp.add_argument("--coarse", type=int, default=8)
    sp = add("similarity", cmd_similarity, "rescaled marked-orbit frames near a parameter")
    fam(sp)
    sp.add_argument("--marked", default="c0")
    sp.add_argument("--t0", required=True, **cplx)
    sp.add_argument("--periods", type=int, nargs="+", required=True)
    sp.add_argument("--radius", type=float, default=1.0)
    sp.add_argument("--samples", type=int, default=33)
    sp.add_argument("--strict", action="store_true", help="raise instead of skipping a period")
    sp.add_argument("--values", action="store_true", help="include the frame values")

    sp = add("diagnostics", cmd_diagnostics, "orbit diagnostics: ce, pr, sep, dynrel")
    sp.add_argument("which", choices=["ce", "pr", "sep", "dynrel"])
    sp.add_argument("--map", required=True)
    sp.add_argument("--c", help="orbit start (default 0)", **cplx)
    sp.add_argument("--N", type=int, default=0)
    sp.add_argument("--n-max", dest="n_max", type=int, default=20)
    sp.add_argument("--a", **cplx)
    sp.add_argument("--b", **cplx)
    sp.add_argument("--n", type=int, default=1000)
    sp.add_argument("--delta", type=float, default=0.05)
    sp.add_argument("--bound", type=int, default=30)
    return p


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = build_config(args)
        out = args.func(args, cfg)
        out.emit(cfg, args.out, stdout)
    except SpecrigError as exc:
        print(f"specrig {args.command}: {type(exc).__name__}: {exc}", file=stderr)
        return 2 if isinstance(exc, ValidationError) else 3 if isinstance(exc, NumericalError) else 1
    except (ValueError, KeyError) as exc:
        print(f"specrig {args.command}: invalid input: {exc}", file=stderr)
        return 2
    except ArithmeticError as exc:
        print(f"specrig {args.command}: numerical failure: {exc}", file=stderr)
        return 3
    return 0


run = main

if __name__ == "__main__":
    sys.exit(main())
