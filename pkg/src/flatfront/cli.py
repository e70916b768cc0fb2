"""Command-line interface: ``flatfront <subcommand> ...``.

Errors are reported as a JSON object on stderr with a nonzero exit code.
"""

import argparse
import json
import os
import sys
import warnings

import numpy as np

from . import __version__
from .errors import FlatFrontError, InvalidParameter, ParseError
from .family import caustic, completeness_report, curvature_line, parallel
from .frontal import build_front, periodicity_class, validate_quadruple
from .gallery import GALLERY_NAMES
from .io import (
    build_mesh,
    curvline_csv,
    dumps,
    load_config,
    obj_text,
    parse_config,
    read_json,
    refuse_degenerate_caustic,
    run_report,
    seed_from_env,
    series_to_dict,
    singular_csv,
)
from .singularities import analyze_singularities

EXIT_FAIL = 1
EXIT_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidParameter(f"{self.prog}: {message}")


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _report_for(cfg, q, seed, extra=None, singular_samples=2048):
    validation = validate_quadruple(q, raise_on_failure=False)
    comp = completeness_report(q, strict=False)
    sing = analyze_singularities(q, singular_samples)
    return run_report(
        cfg,
        seed,
        validation={"residuals": validation.residuals, "passed": validation.passed},
        completeness=comp.to_dict(),
        singular=sing.to_dict(),
        periodicity=periodicity_class(q).to_dict(),
        extra=extra,
    )


def _emit_surface(cfg, q, args, extra=None):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        front = build_front(q)
    mesh = build_mesh(front, cfg.grid)
    text = obj_text(mesh)
    report = dumps(_report_for(cfg, q, seed_from_env(), extra))
    os.makedirs(args.out, exist_ok=True)
    obj_path = os.path.join(args.out, args.name + ".obj")
    json_path = os.path.join(args.out, args.name + ".json")
    _write(obj_path, text)
    _write(json_path, report)
    sys.stdout.write(dumps({"obj": obj_path, "report": json_path, "closed": mesh.closed}))
    return 0


def cmd_build(args):
    cfg = load_config(args.config)
    return _emit_surface(cfg, cfg.quadruple, args)


def cmd_check(args):
    cfg = load_config(args.config)
    q = cfg.quadruple
    validation = validate_quadruple(q, raise_on_failure=False)
    comp = completeness_report(q, strict=True)
    verdicts = {
        "duality": validation.passed,
        "period": comp.period_defect_norm <= 1e-8,
        "front": comp.is_front,
        "complete": comp.complete,
    }
    out = {
        "verdicts": verdicts,
        "residuals": validation.residuals,
        "completeness": comp.to_dict(),
        "complete": comp.complete,
        "ends_embedded": comp.ends_embedded,
    }
    sys.stdout.write(dumps(out))
    return 0 if all(verdicts.values()) else EXIT_FAIL


def cmd_singular(args):
    cfg = load_config(args.config)
    report = analyze_singularities(cfg.quadruple, args.samples)
    _write(args.out, singular_csv(report))
    return 0


def cmd_caustic(args):
    cfg = load_config(args.config)
    c = caustic(cfg.quadruple)
    refuse_degenerate_caustic(c)
    return _emit_surface(cfg, c.quadruple, args, {"derived": "caustic", "flags": c.flags})


def cmd_parallel(args):
    cfg = load_config(args.config)
    q = parallel(cfg.quadruple, args.delta)
    return _emit_surface(cfg, q, args, {"derived": "parallel", "delta": args.delta})


def cmd_curvline(args):
    cfg = load_config(args.config)
    line = curvature_line(cfg.quadruple, args.t0, args.v0, args.turns)
    _write(args.out, curvline_csv(line))
    if args.out not in (None, "-"):
        sys.stdout.write(dumps({"closure_defect": line.closure_defect, "closed": line.closed, "path": args.out}))
    return 0


def cmd_gallery(args):
    if args.list:
        sys.stdout.write(dumps({"gallery": list(GALLERY_NAMES)}))
        return 0
    if not args.name:
        raise InvalidParameter("gallery needs --list or --name")
    if args.name not in GALLERY_NAMES:
        raise InvalidParameter(f"unknown gallery entry {args.name!r}")
    try:
        params = json.loads(args.params) if args.params else {}
    except json.JSONDecodeError as exc:
        raise ParseError(f"--params: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(params, dict):
        raise InvalidParameter("--params must be a JSON object")
    config = {"curve": {"kind": "gallery", "name": args.name, "params": params}}
    sys.stdout.write(dumps(config))
    return 0


def cmd_project(args):
    data = read_json(args.config)
    if not isinstance(data, dict):
        raise InvalidParameter("configuration must be a JSON object")
    data = dict(data, project_period=True)
    cfg = parse_config(data)
    out = dict(data)
    out["alpha"] = series_to_dict(cfg.quadruple.a)
    out["project_period"] = False
    _write(args.out, dumps(out))
    return 0


def make_parser():
    p = _Parser(prog="flatfront", description="Flat fronts from generating quadruples.")
    p.add_argument("--version", action="version", version=f"flatfront {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def surface(name, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("config", help="JSON configuration ('-' for stdin)")
        s.add_argument("-o", "--out", default=".", help="output directory")
        s.add_argument("--name", default=name, help="basename of the OBJ/JSON outputs")
        return s

    surface("build", "mesh and report for the configured front").set_defaults(func=cmd_build)

    s = sub.add_parser("check", help="duality, period, front and completeness verdicts")
    s.add_argument("config")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("singular", help="classified singular samples as CSV")
    s.add_argument("config")
    s.add_argument("-o", "--out", default=None)
    s.add_argument("--samples", type=int, default=2048)
    s.set_defaults(func=cmd_singular)

    surface("caustic", "mesh and report of the caustic").set_defaults(func=cmd_caustic)
    s = surface("parallel", "mesh and report of a parallel front")
    s.add_argument("--delta", type=float, required=True)
    s.set_defaults(func=cmd_parallel)

    s = sub.add_parser("curvline", help="curvature line through (t0, v0) as CSV")
    s.add_argument("config")
    s.add_argument("--t0", type=float, default=0.0)
    s.add_argument("--v0", type=float, default=0.0)
    s.add_argument("--turns", type=int, default=1)
    s.add_argument("-o", "--out", default=None)
    s.set_defaults(func=cmd_curvline)

    s = sub.add_parser("gallery", help="list gallery entries or emit a config")
    s.add_argument("--list", action="store_true")
    s.add_argument("--name")
    s.add_argument("--params", help="JSON object of constructor parameters")
    s.set_defaults(func=cmd_gallery)

    s = sub.add_parser("project", help="rewrite alpha so the generator closes")
    s.add_argument("config")
    s.add_argument("-o", "--out", default=None)
    s.set_defaults(func=cmd_project)
    return p


def _error_payload(exc):
    payload = {"error": exc.code, "message": str(exc)}
    for attr in ("key", "residual", "name"):
        val = getattr(exc, attr, None)
        if val is not None:
            payload[attr] = val
    return payload


def main(argv=None):
    try:
        args = make_parser().parse_args(argv)
        with np.errstate(all="ignore"):
            return args.func(args)
    except FlatFrontError as exc:
        sys.stderr.write(json.dumps(_error_payload(exc), sort_keys=True) + "\n")
        return EXIT_ERROR
    except BrokenPipeError:
        sys.stdout = open(os.devnull, "w")
        return 0
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": "IOError", "message": str(exc)}, sort_keys=True) + "\n")
        return EXIT_ERROR


cli_run = main
