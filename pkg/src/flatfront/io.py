"""Configuration loading, mesh/CSV export and run reports."""

import csv
import io as _io
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .curves import DEFAULT_GRID, SphericalCurve, dual_curve
from .errors import DegenerateCausticExport, InvalidParameter, NonFiniteVertex, ParseError, SchemaError
from .frontal import Quadruple, project_period
from .gallery import GALLERY_NAMES, gallery_build
from .series import TrigSeries

REPORT_VERSION = 1
SEED_ENV = "FLATFRONT_SEED"

TOP_KEYS = {"curve", "alpha", "beta", "nu", "grid", "project_period", "n_grid"}
GRID_DEFAULTS = {"nt": 128, "nv": 32, "vmin": -1.0, "vmax": 1.0}


def seed_from_env(default=0):
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise InvalidParameter(f"{SEED_ENV} must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class GridSpec:
    nt: int = GRID_DEFAULTS["nt"]
    nv: int = GRID_DEFAULTS["nv"]
    vmin: float = GRID_DEFAULTS["vmin"]
    vmax: float = GRID_DEFAULTS["vmax"]

    def __post_init__(self):
        if self.nt < 2 or self.nv < 2:
            raise SchemaError("grid", "grid needs nt >= 2 and nv >= 2")
        if not self.vmax > self.vmin:
            raise SchemaError("grid", "grid needs vmax > vmin")

    def to_dict(self):
        return {"nt": self.nt, "nv": self.nv, "vmin": self.vmin, "vmax": self.vmax}


@dataclass(frozen=True, eq=False)
class Config:
    quadruple: Quadruple
    grid: GridSpec
    source: dict
    project_period: bool = False


# parsing --------------------------------------------------------------------


def _number(value, key):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(key, f"{key} must be a number")
    return float(value)


def _vectors(value, key, dim):
    if not isinstance(value, list):
        raise SchemaError(key, f"{key} must be a list")
    arr = np.asarray(value, dtype=float) if value else np.zeros((0,) + ((dim,) if dim else ()))
    if dim and (arr.ndim != 2 or arr.shape[1] != dim):
        raise SchemaError(key, f"{key} must be a list of {dim}-vectors")
    if not dim and arr.ndim != 1:
        raise SchemaError(key, f"{key} must be a list of numbers")
    return arr


def _series(spec, key, dim=None):
    """Series from ``{"const": .., "cos": [c1, c2, ..], "sin": [..]}`` (1-based)."""
    if not isinstance(spec, dict):
        raise SchemaError(key, f"{key} must be an object")
    extra = set(spec) - {"const", "cos", "sin", "kind"}
    if extra:
        raise SchemaError(f"{key}.{sorted(extra)[0]}")
    try:
        if dim:
            const = np.asarray(spec.get("const", [0.0] * dim), dtype=float)
            if const.shape != (dim,):
                raise SchemaError(f"{key}.const", f"{key}.const must be a {dim}-vector")
        else:
            const = _number(spec.get("const", 0.0), f"{key}.const")
        cos = _vectors(spec.get("cos", []), f"{key}.cos", dim)
        sin = _vectors(spec.get("sin", []), f"{key}.sin", dim)
    except (TypeError, ValueError):
        raise SchemaError(key, f"{key} has non-numeric coefficients") from None
    return TrigSeries(const, cos, sin)


def series_to_dict(s, rel_tol=1e-12):
    """Inverse of the coefficient schema for scalar series.

    Coefficients below ``rel_tol`` times the largest one are written as zero
    and trailing zeros are dropped.
    """
    tol = rel_tol * max(1.0, float(np.max(np.abs(np.concatenate([[s.const], s.cos, s.sin])))))

    def clean(arr):
        arr = [float(x) if abs(x) > tol else 0.0 for x in arr]
        while arr and arr[-1] == 0.0:
            arr.pop()
        return arr

    const = float(s.const) if abs(s.const) > tol else 0.0
    return {"const": const, "cos": clean(s.cos), "sin": clean(s.sin)}


def _curve(spec, n_grid):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise SchemaError("curve.kind")
    kind = spec["kind"]
    if kind == "latitude":
        if set(spec) - {"kind", "phi"}:
            raise SchemaError(f"curve.{sorted(set(spec) - {'kind', 'phi'})[0]}")
        if "phi" not in spec:
            raise SchemaError("curve.phi")
        phi = _number(spec["phi"], "curve.phi")
        if not abs(phi) < np.pi / 2:
            raise InvalidParameter(f"latitude phi must satisfy |phi| < pi/2, got {phi}")
        return SphericalCurve.latitude(phi, n_grid), None
    if kind == "fourier":
        return SphericalCurve(_series(spec, "curve", 3), n_grid), None
    if kind == "gallery":
        name = spec.get("name")
        if not isinstance(name, str):
            raise SchemaError("curve.name")
        if name not in GALLERY_NAMES:
            raise SchemaError("curve.name", f"unknown gallery entry {name!r}")
        params = dict(spec.get("params", {}))
        params.setdefault("n_grid", n_grid)
        q = gallery_build(name, **params)
        return q.xi, q
    raise SchemaError("curve.kind", f"unknown curve kind {kind!r}")


def parse_config(data):
    """Build a :class:`Config` from an already-decoded JSON object."""
    if not isinstance(data, dict):
        raise SchemaError("<root>", "configuration must be a JSON object")
    extra = set(data) - TOP_KEYS
    if extra:
        raise SchemaError(sorted(extra)[0], f"unknown key {sorted(extra)[0]!r}")
    if "curve" not in data:
        raise SchemaError("curve")
    n_grid = int(data.get("n_grid", DEFAULT_GRID))
    xi, base = _curve(data["curve"], n_grid)

    if "nu" in data:
        nu = SphericalCurve(_series(data["nu"], "nu", 3), n_grid)
    elif base is not None:
        nu = base.nu
    else:
        nu = dual_curve(xi).curve

    if "alpha" in data:
        a = _series(data["alpha"], "alpha")
    else:
        a = base.a if base is not None else TrigSeries.zero()
    if "beta" in data:
        b = _series(data["beta"], "beta")
    else:
        b = base.b if base is not None else TrigSeries.zero()

    project = data.get("project_period", False)
    if not isinstance(project, bool):
        raise SchemaError("project_period", "project_period must be a boolean")
    if project:
        a = project_period(xi, a, n_grid)

    g = data.get("grid", {})
    if not isinstance(g, dict):
        raise SchemaError("grid", "grid must be an object")
    extra = set(g) - set(GRID_DEFAULTS)
    if extra:
        raise SchemaError(f"grid.{sorted(extra)[0]}")
    try:
        grid = GridSpec(
            int(g.get("nt", GRID_DEFAULTS["nt"])),
            int(g.get("nv", GRID_DEFAULTS["nv"])),
            _number(g.get("vmin", GRID_DEFAULTS["vmin"]), "grid.vmin"),
            _number(g.get("vmax", GRID_DEFAULTS["vmax"]), "grid.vmax"),
        )
    except (TypeError, ValueError):
        raise SchemaError("grid", "grid sizes must be integers") from None
    return Config(Quadruple(a, b, xi, nu, n_grid), grid, data, project)


def read_json(path):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_config(path):
    return parse_config(read_json(path))


# mesh ---------------------------------------------------------------------


@dataclass
class MeshGrid:
    nt: int
    nv: int
    t: np.ndarray
    v: np.ndarray
    vertices: np.ndarray
    normals: np.ndarray
    closed: bool
    singular_points: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))
    singular_chains: list = field(default_factory=list)

    def vertex(self, i, j):
        return self.vertices[i, j]


def _singular_polyline(front, t, v, vmin, vmax, closed):
    """Chains of singular points as (grid index or new point) references."""
    q = front.quadruple
    eps = q.eps
    mu1 = q.mu1(t)
    bvals = q.b(t)
    nt = len(t)
    tol = 1e-12 * max(1.0, abs(vmin), abs(vmax))
    refs = [None] * nt
    extra = []
    for i in range(nt):
        if abs(mu1[i]) <= eps:
            continue
        vs = -bvals[i] / mu1[i]
        if not vmin - tol <= vs <= vmax + tol:
            continue
        hit = np.nonzero(np.abs(v - vs) <= tol)[0]
        if hit.size:
            refs[i] = ("grid", i, int(hit[0]))
        else:
            refs[i] = ("new", len(extra))
            extra.append(front(t[i], vs))
    present = [i for i in range(nt) if refs[i] is not None]
    chains = []
    if closed and len(present) == nt:
        chains.append(refs + [refs[0]])
    else:
        runs, current = [], []
        for i in range(nt):
            if refs[i] is None:
                if current:
                    runs.append(current)
                current = []
            else:
                current.append(refs[i])
        if current:
            runs.append(current)
        if closed and len(runs) > 1 and refs[0] is not None and refs[-1] is not None:
            runs[0] = runs.pop() + runs[0]
        chains.extend(r for r in runs if len(r) > 1)
    # linear rulings: whole segments inside the v-window
    for i in range(nt):
        if abs(mu1[i]) <= eps and abs(bvals[i]) <= eps:
            start = ("new", len(extra))
            extra.append(front(t[i], vmin))
            end = ("new", len(extra))
            extra.append(front(t[i], vmax))
            chains.append([start, end])
    pts = np.asarray(extra, dtype=float).reshape(-1, 3)
    return pts, chains


def build_mesh(front, grid):
    """Sample ``f`` on ``nt x nv`` points (t outer) plus the singular polyline."""
    t = np.arange(grid.nt) * (2 * np.pi / grid.nt)
    v = np.linspace(grid.vmin, grid.vmax, grid.nv)
    verts = front(t[:, None], v[None, :])
    normals = front.normal(t)
    closed = front.closed
    pts, chains = _singular_polyline(front, t, v, grid.vmin, grid.vmax, closed)
    return MeshGrid(grid.nt, grid.nv, t, v, verts, normals, closed, pts, chains)


def _fmt(x):
    return f"{x + 0.0:.9g}"


def obj_text(mesh):
    """OBJ text: vertices (t outer), per-vertex normals, triangles, singular chains."""
    if not np.all(np.isfinite(mesh.vertices)) or not np.all(np.isfinite(mesh.singular_points)):
        raise NonFiniteVertex("mesh has non-finite vertices")
    nt, nv = mesh.nt, mesh.nv
    out = _io.StringIO()
    out.write(f"# flatfront mesh nt={nt} nv={nv} closed={'yes' if mesh.closed else 'no'}\n")
    for i in range(nt):
        for j in range(nv):
            x, y, z = mesh.vertices[i, j]
            out.write(f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}\n")
    for x, y, z in mesh.singular_points:
        out.write(f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}\n")
    for i in range(nt):
        x, y, z = mesh.normals[i]
        out.write(f"vn {_fmt(x)} {_fmt(y)} {_fmt(z)}\n")

    def idx(i, j):
        return (i % nt) * nv + j + 1

    rows = nt if mesh.closed else nt - 1
    for i in range(rows):
        for j in range(nv - 1):
            a, b, c, d = idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)
            na, nb = i % nt + 1, (i + 1) % nt + 1
            out.write(f"f {a}//{na} {b}//{nb} {c}//{nb}\n")
            out.write(f"f {a}//{na} {c}//{nb} {d}//{na}\n")

    def ref(r):
        if r[0] == "grid":
            return idx(r[1], r[2])
        return nt * nv + r[1] + 1

    for chain in mesh.singular_chains:
        out.write("l " + " ".join(str(ref(r)) for r in chain) + "\n")
    return out.getvalue()


def export_obj(mesh, path):
    text = obj_text(mesh)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def refuse_degenerate_caustic(caustic):
    if caustic.degenerate_line:
        raise DegenerateCausticExport(
            "the caustic degenerates to a line (constant ruling direction and b = 0); no surface to mesh"
        )


# CSV and JSON -------------------------------------------------------------

SINGULAR_COLUMNS = ("t", "v", "class", "a", "a_prime", "mu1", "mu2")


def _csv_value(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x + 0.0)
    return str(x)


def singular_csv(report):
    out = _io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(SINGULAR_COLUMNS)
    for s in report.samples:
        d = s.diagnostics
        w.writerow(
            [_csv_value(x) for x in (s.t, s.v, s.kind.value, d.get("a"), d.get("a_prime"), d.get("mu1"), d.get("mu2"))]
        )
    return out.getvalue()


def curvline_csv(line):
    out = _io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(("t", "v"))
    for t, v in zip(line.t, line.v):
        w.writerow((_csv_value(float(t)), _csv_value(float(v))))
    return out.getvalue()


def _clean(obj):
    """Convert numpy scalars/arrays and non-finite floats for strict JSON."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if np.isfinite(x) else None
    return obj


def dumps(obj):
    return json.dumps(_clean(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def run_report(config, seed, *, validation=None, completeness=None, singular=None, periodicity=None, extra=None):
    from . import __version__

    report = {
        "version": __version__,
        "report_version": REPORT_VERSION,
        "seed": seed,
        "config": config.source if isinstance(config, Config) else config,
        "validation": validation,
        "completeness": completeness,
        "singular": singular,
        "periodicity": periodicity,
    }
    if extra:
        report.update(extra)
    return _clean(report)
