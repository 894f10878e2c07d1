"""Configuration-driven command line front end.

``painlab run --config file.json`` executes one scenario and writes a JSON
(or CSV) report plus an optional trajectory CSV.  ``painlab concordance``
prints the formula-to-operation table.  ``painlab report`` recomputes the
report of a trajectory scenario from a CSV written earlier.

Exit codes: 0 all rows pass, 1 a residual row fails, 2 configuration
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from importlib import resources

import numpy as np

from . import linpair, monodromy, parametrize, systems, transforms
from .errors import ConfigError, PainlabError
from .numkit import ComplexPath, IntegratorConfig, flow_derivative, integrate_path

SPEC_VERSION = 1

SCENARIOS = ("integrate", "residuals", "zero-curvature", "parametrize", "similarity", "backlund",
             "okamoto", "monodromy", "reduce")

DEFAULTS = {
    "rel_tol": 1e-12,
    "abs_tol": 1e-14,
    "max_steps": 200000,
    "pole_guard": 1e8,
    "drift": 1e-8,
    "residual": {"integrate": 1e-8, "residuals": 1e-9, "zero-curvature": 1e-11,
                 "parametrize": 1e-8, "similarity": 1e-8, "backlund": 1e-5, "okamoto": 1e-10,
                 "monodromy": 1e-6, "reduce": 1e-10},
    "fd_step": 1e-4,
    "fd_points": 11,
}
"""Every tolerance and limit used by ``run``; overridable under ``tolerances``."""

_PARAM_KIND = {
    "P3": "P3", "P4": "P4", "P5": "P5", "P6": "P6", "symP4": "symP4",
    "C40-P5": "P5", "JM-P5": "P5", "TRUE-JM-P5": "P5", "YZ-P4": "P4", "YZW-P3": "P3",
    "Z-P3": "P3", "P6-Y": "P6",
    "P6-3x3": "P6", "P5-3x3": "P5", "P4-3x3": "P4", "P3-3x3": "P3", "NY": "symP4",
    "P5-2x2": "P5", "P5-2x2-traceless": "P5", "P4-JM": "P4", "P4-JM-printed": "P4",
    "P3-JM": "P3", "NY-2x2": "symP4", "P6-Fuchsian": "P6", "P6-JM": "P6",
}

_PARAM_NAMES = {
    "P5": (("theta0", "theta1", "thetainf"), ("m",)),
    "P4": (("theta0", "thetainf"), ("rho",)),
    "P3": (("theta0", "thetainf", "c1"), ()),
    "P6": (("theta1", "theta2", "theta3", "thetainf"), ()),
    "symP4": (("v1", "v2", "v3"), ()),
}


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def _cplx(v, where):
    if (isinstance(v, list) and len(v) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)):
        return complex(v[0], v[1])
    raise ConfigError(f"field '{where}': expected a complex number as [re, im]")


def _cplx_list(v, where):
    if not isinstance(v, list):
        raise ConfigError(f"field '{where}': expected a list of [re, im] pairs")
    return [_cplx(x, f"{where}[{i}]") for i, x in enumerate(v)]


def _get(cfg, key, where=None):
    if key not in cfg:
        raise ConfigError(f"field '{where or key}': required field missing")
    return cfg[key]


def _enc(z):
    z = complex(z)
    return [z.real, z.imag]


class RunConfig:
    """Validated view of one scenario configuration."""

    def __init__(self, raw):
        if not isinstance(raw, dict):
            raise ConfigError("field '<root>': expected a JSON object")
        ver = raw.get("spec_version", SPEC_VERSION)
        if ver != SPEC_VERSION:
            raise ConfigError(f"field 'spec_version': unsupported value {ver!r}")
        self.raw = raw
        self.scenario = _get(raw, "scenario")
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"field 'scenario': unknown scenario {self.scenario!r}")
        self.kind = _get(raw, "kind")
        if self.kind not in _PARAM_KIND:
            raise ConfigError(f"field 'kind': unknown kind or variant {self.kind!r}")
        self.param_kind = _PARAM_KIND[self.kind]
        self.params = self._params(_get(raw, "parameters"))
        tol = raw.get("tolerances", {})
        if not isinstance(tol, dict):
            raise ConfigError("field 'tolerances': expected an object")
        self.tol = dict(DEFAULTS)
        self.tol["residual"] = DEFAULTS["residual"][self.scenario]
        for k, v in tol.items():
            if k not in self.tol:
                raise ConfigError(f"field 'tolerances.{k}': unknown tolerance")
            if not isinstance(v, (int, float)) or isinstance(v, bool) or v <= 0:
                raise ConfigError(f"field 'tolerances.{k}': expected a positive number")
            self.tol[k] = v
        try:
            self.integrator = IntegratorConfig(rel_tol=self.tol["rel_tol"], abs_tol=self.tol["abs_tol"],
                                               pole_guard=self.tol["pole_guard"],
                                               max_steps=int(self.tol["max_steps"]))
        except ValueError as e:
            raise ConfigError(f"field 'tolerances': {e}") from None
        out = raw.get("output", {})
        if not isinstance(out, dict):
            raise ConfigError("field 'output': expected an object")
        self.format = out.get("format", "json")
        if self.format not in ("json", "csv"):
            raise ConfigError("field 'output.format': expected 'json' or 'csv'")
        self.report_path = out.get("path")
        self.trajectory_path = out.get("trajectory")

    def _params(self, p):
        if not isinstance(p, dict):
            raise ConfigError("field 'parameters': expected an object")
        req, opt = _PARAM_NAMES[self.param_kind]
        vals = {}
        for k in req:
            vals[k] = _cplx(_get(p, k, f"parameters.{k}"), f"parameters.{k}")
        for k in opt:
            if k in p:
                vals[k] = _cplx(p[k], f"parameters.{k}")
        for k in p:
            if k not in req and k not in opt:
                raise ConfigError(f"field 'parameters.{k}': not a parameter of {self.param_kind}")
        ctor = {"P5": systems.FormalMonodromies.p5, "P4": systems.FormalMonodromies.p4,
                "P3": systems.FormalMonodromies.p3, "P6": systems.FormalMonodromies.p6,
                "symP4": systems.FormalMonodromies.sym_p4}[self.param_kind]
        try:
            return ctor(**vals)
        except ValueError as e:
            raise ConfigError(f"field 'parameters': {e}") from None

    def field(self, key, conv=None, default=...):
        if key not in self.raw:
            if default is ...:
                raise ConfigError(f"field '{key}': required for scenario {self.scenario!r}")
            return default
        v = self.raw[key]
        return conv(v, key) if conv else v

    def path(self):
        if "path" in self.raw:
            pts = _cplx_list(self.raw["path"], "path")
        else:
            pts = [self.field("t0", _cplx), self.field("t1", _cplx)]
        try:
            return ComplexPath(pts)
        except ValueError as e:
            raise ConfigError(f"field 'path': {e}") from None

    def parameter_dict(self):
        return {k: _enc(v) for k, v in self.params.as_dict().items()}


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def _row(label, value, tol):
    v = float(abs(value))
    return {"label": label, "value": v, "tolerance": float(tol), "pass": bool(v <= tol)}


def _summary(rows):
    failed = sum(1 for r in rows if not r["pass"])
    return {"rows": len(rows), "failed": failed, "pass": failed == 0}


def _check_dim(values, n, where):
    if len(values) != n:
        raise ConfigError(f"field '{where}': expected {n} components, got {len(values)}")


# trajectory scenarios: samples -> rows are pure functions so that a CSV
# re-read reproduces the report exactly

def _integrate_field(cfg):
    k = cfg.kind
    if k in ("P3", "P4", "P5"):
        return systems.reduced_field(k, cfg.params), 6
    if k == "P6":
        return parametrize.p6_w_field(cfg.params), 6
    if k == "symP4":
        return systems.reduced_field("symP4", cfg.params), 3
    if k in systems.COORD_NAMES:
        return systems.coordinate_field(k, cfg.params), len(systems.COORD_NAMES[k])
    raise ConfigError(f"field 'kind': {k!r} cannot be integrated")


def _rows_integrate(cfg, samples):
    rows = []
    if cfg.kind in ("P3", "P4", "P5"):
        names = systems.conserved_names(cfg.kind)
        a = dict(systems.first_integrals(cfg.kind, list(samples[0][1]), cfg.params))
        b = dict(systems.first_integrals(cfg.kind, list(samples[-1][1]), cfg.params))
        for n in names:
            rows.append(_row(f"drift:{n}", abs(b[n] - a[n]) / max(1.0, abs(a[n])), cfg.tol["drift"]))
    return rows


def _painleve_target(cfg):
    k, p = cfg.kind, cfg.params
    if k in ("C40-P5", "JM-P5"):
        co = systems.painleve_coefficients(p)
        return lambda t, y, y1, y2: systems.painleve_residual("P5", co, t, y, y1, y2)
    if k == "TRUE-JM-P5":
        co = systems.painleve_coefficients(p, "TRUE-JM-P5")
        return lambda t, y, y1, y2: systems.painleve_residual("P5", co, t, y, y1, y2)
    if k == "YZW-P3":
        co = systems.painleve_coefficients(p)
        return lambda t, y, y1, y2: systems.painleve_residual("P3", co, t, y, y1, y2)
    if k == "P6-Y":
        co = systems.painleve_coefficients(p)
        return lambda t, y, y1, y2: systems.painleve_residual("P6", co, t, y, y1, y2)
    if k == "YZ-P4":
        co = systems.painleve_coefficients(p)
        return lambda t, y, y1, y2: systems.painleve_residual(
            "P4", co, *systems.p4_to_canonical(p, t, y, y1, y2))
    raise ConfigError(f"field 'kind': no Painleve residual for {k!r}")


def _rows_residuals(cfg, samples):
    target = _painleve_target(cfg)
    fld = systems.coordinate_field(cfg.kind, cfg.params)
    worst = 0.0
    for t, s in samples:
        y, y1, y2 = flow_derivative(lambda tt, ss: ss[0], t, list(s), fld, order=2)
        worst = max(worst, abs(target(t, y, y1, y2)))
    return [_row(f"painleve-residual:{cfg.kind}", worst, cfg.tol["residual"])]


def _rows_okamoto(cfg, samples):
    tags = cfg.field("transforms", None, ["OKAMOTO"])
    rows = []
    for tag in tags:
        if tag not in ("OKAMOTO", "IDENTITY") + transforms.REFLECTIONS:
            raise ConfigError(f"field 'transforms': unsupported transform {tag!r}")
        rep = transforms.verify_on_trajectory(None if tag == "IDENTITY" else tag, samples,
                                              cfg.params, cfg.tol["residual"])
        rows.append(_row(f"chain-rule:{tag}", rep.max_residual, cfg.tol["residual"]))
    return rows


def _rows_parametrize(cfg, samples):
    fld = parametrize.w_field(cfg.kind, cfg.params)
    worst = 0.0
    for t, s in samples:
        w, dw = parametrize.chain_w_derivative(cfg.kind, cfg.params, t, list(s))
        f = np.asarray(fld(t, w), dtype=complex)
        worst = max(worst, float(np.max(np.abs(np.asarray(dw) - f)) / max(1.0, np.max(np.abs(f)))))
    return [_row(f"w-residual:{cfg.kind}", worst, cfg.tol["residual"])]


_TRAJECTORY_ROWS = {"integrate": _rows_integrate, "residuals": _rows_residuals,
                    "okamoto": _rows_okamoto, "parametrize": _rows_parametrize}


def _trajectory(cfg):
    init = cfg.field("initial", _cplx_list)
    if cfg.scenario == "parametrize":
        if cfg.kind not in ("P3", "P4", "P5", "P6"):
            raise ConfigError("field 'kind': parametrize needs P3, P4, P5 or P6")
        fld, n = parametrize.coords_gauge_field(cfg.kind, cfg.params), 4
    elif cfg.scenario == "okamoto":
        if cfg.kind != "C40-P5":
            raise ConfigError("field 'kind': okamoto acts on C40-P5 coordinates")
        fld, n = systems.coordinate_field("C40-P5", cfg.params), 3
    elif cfg.scenario == "residuals":
        _painleve_target(cfg)
        fld, n = systems.coordinate_field(cfg.kind, cfg.params), len(systems.COORD_NAMES[cfg.kind])
    else:
        fld, n = _integrate_field(cfg)
    _check_dim(init, n, "initial")
    traj = integrate_path(fld, init, cfg.path(), cfg.integrator)
    return [(complex(t), [complex(x) for x in s]) for t, s in traj.samples]


def _scenario_zero_curvature(cfg):
    if cfg.kind not in linpair.VARIANTS:
        raise ConfigError(f"field 'kind': {cfg.kind!r} is not a pair variant")
    state = cfg.field("state", _cplx_list)
    t = cfg.field("t", _cplx)
    if "lambdas" in cfg.raw:
        lams = _cplx_list(cfg.raw["lambdas"], "lambdas")
    else:
        rnd = cfg.field("random", None, {"count": 10, "seed": 0})
        rng = np.random.default_rng(int(rnd.get("seed", 0)))
        lams = [complex(*rng.normal(size=2)) for _ in range(int(rnd.get("count", 10)))]
    rows = []
    for i, lam in enumerate(lams):
        r = linpair.zero_curvature_residual(cfg.kind, state, None, cfg.params, t, lam)
        rows.append(_row(f"zero-curvature[{i}]", r, cfg.tol["residual"]))
    return rows, {}


def _scenario_similarity(cfg):
    if cfg.kind not in ("P3", "P4", "P5", "P6"):
        raise ConfigError("field 'kind': similarity needs P3, P4, P5 or P6")
    init = cfg.field("initial", _cplx_list)
    _check_dim(init, 6, "initial")
    sol = parametrize.WaveSolution(cfg.kind, cfg.params, cfg.field("t0", _cplx), init, cfg.integrator)
    fieldobj = parametrize.similarity_assemble(cfg.kind, sol, cfg.params)
    pts = cfg.field("points")
    if not isinstance(pts, list):
        raise ConfigError("field 'points': expected a list of points")
    rows = []
    for i, p in enumerate(pts):
        x = _cplx_list(p, f"points[{i}]")
        _check_dim(x, 3, f"points[{i}]")
        r, rs = parametrize.pde_residual_3wri(fieldobj, x)
        rows.append(_row(f"3wri[{i}]", max(abs(v) for v in list(r) + list(rs)), cfg.tol["residual"]))
    return rows, {}


def _scenario_backlund(cfg):
    if cfg.kind != "P5":
        raise ConfigError("field 'kind': backlund needs P5")
    init = cfg.field("initial", _cplx_list)
    _check_dim(init, 2, "initial")
    t = cfg.field("t", _cplx)
    br = cfg.field("branches", None, [[1, 1, 1, 1, 1], [1, -1, 1, 1, 1], [-1, 1, 1, 1, 1],
                                      [-1, -1, 1, 1, 1]])
    h = cfg.tol["fd_step"]
    n = int(cfg.tol["fd_points"]) // 2
    co = systems.painleve_coefficients(cfg.params)
    fld = lambda tt, s: [s[1], systems.painleve_rhs("P5", co, tt, s[0], s[1])]
    from .numkit import local_samples
    samples = local_samples(fld, init, t, h, n=max(n, 2))
    rows = []
    for i, b in enumerate(br):
        try:
            choice = transforms.BranchChoice(*b)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"field 'branches[{i}]': {e}") from None
        rep = transforms.verify_on_trajectory(transforms.TransformTag.gromak(choice), samples,
                                              cfg.params, cfg.tol["residual"])
        rows.append(_row(f"gromak{tuple(b)}", rep.max_residual, cfg.tol["residual"]))
    return rows, {}


def _loops(cfg):
    raw = cfg.field("loops")
    if not isinstance(raw, list) or not raw:
        raise ConfigError("field 'loops': expected a non-empty list")
    out = []
    for i, lp in enumerate(raw):
        where = f"loops[{i}]"
        if not isinstance(lp, dict):
            raise ConfigError(f"field '{where}': expected an object")
        c = _cplx(_get(lp, "center", f"{where}.center"), f"{where}.center")
        r = _get(lp, "radius", f"{where}.radius")
        bp = _cplx(lp["base_point"], f"{where}.base_point") if "base_point" in lp else None
        try:
            out.append(monodromy.LoopSpec(c, float(r), bp, int(lp.get("segments", 32))))
        except (TypeError, ValueError) as e:
            raise ConfigError(f"field '{where}': {e}") from None
    return out


def _scenario_monodromy(cfg):
    if cfg.kind not in linpair.VARIANTS:
        raise ConfigError(f"field 'kind': {cfg.kind!r} is not a pair variant")
    state = cfg.field("state", _cplx_list)
    t = cfg.field("t", _cplx)
    loops = _loops(cfg)
    base = cfg.field("base", _cplx, None)
    pair = linpair.build_pair(cfg.kind, state, cfg.params, t)
    if pair.dimension != 2:
        raise ConfigError("field 'kind': monodromy needs a 2x2 pair")
    rows, tables = [], []
    for i, lp in enumerate(loops):
        rep = monodromy.monodromy_matrix(pair, lp, cfg.integrator, base)
        mm = monodromy.eigenvalue_mismatch(rep)
        tables.append({"loop": i, "matrix": [[_enc(z) for z in row] for row in rep.matrix],
                       "trace": _enc(rep.trace), "resonant": rep.resonant})
        if mm is not None:
            rows.append(_row(f"eigenvalues[{i}]", mm, cfg.tol["residual"]))
    if "t1" in cfg.raw:
        d = monodromy.isomonodromy_drift(cfg.kind, state, cfg.params, t, cfg.field("t1", _cplx),
                                         loops, base, cfg.integrator)
        rows.append(_row("trace-drift", d.drift, cfg.tol["residual"]))
    return rows, {"monodromy": tables}


def _scenario_reduce(cfg):
    state = cfg.field("state", _cplx_list)
    t = cfg.field("t", _cplx)
    tol = cfg.tol["residual"]
    if cfg.kind == "P5":
        _check_dim(state, 6, "state")
        d = cfg.field("d_ratio", _cplx, 1.0)
        params = cfg.params
        if cfg.field("constrain", None, True):
            # theta0 and theta1 follow from the state's first integrals
            ints = dict(systems.first_integrals("P5", state, params))
            params = systems.FormalMonodromies.p5(ints["theta0"], ints["theta1"], params.thetainf)
        _, _, _, rep = linpair.p5_alt_reduce(state, params, t, d)
        used = {k: _enc(v) for k, v in params.as_dict().items()}
        return [_row(k, v, tol) for k, v in rep.items()], {"constrained_parameters": used}
    if cfg.kind == "P6":
        _check_dim(state, 6, "state")
        t1 = cfg.field("t1", _cplx, None)
        red = linpair.p6_fuchsian_reduce(state, cfg.params, [t] if t1 is None else [t, t1],
                                         cfg.integrator, tol=np.inf)
        return [_row("invariance", red.invariance_error, tol),
                _row("third-column", red.third_column_max, tol)], {}
    raise ConfigError("field 'kind': reduce needs P5 or P6")


_POINT_SCENARIOS = {"zero-curvature": _scenario_zero_curvature, "similarity": _scenario_similarity,
                    "backlund": _scenario_backlund, "monodromy": _scenario_monodromy,
                    "reduce": _scenario_reduce}


def execute(cfg: RunConfig):
    """Run a scenario; returns ``(report, samples or None)``."""
    samples = None
    extra = {}
    if cfg.scenario in _TRAJECTORY_ROWS:
        samples = _trajectory(cfg)
        rows = _TRAJECTORY_ROWS[cfg.scenario](cfg, samples)
    else:
        rows, extra = _POINT_SCENARIOS[cfg.scenario](cfg)
    report = {"spec_version": SPEC_VERSION, "scenario": cfg.scenario, "kind": cfg.kind,
              "parameters": cfg.parameter_dict(), "rows": rows, "summary": _summary(rows)}
    report.update(extra)
    return report, samples


def report_from_samples(cfg: RunConfig, samples):
    """Report of a trajectory scenario recomputed from given samples."""
    if cfg.scenario not in _TRAJECTORY_ROWS:
        raise ConfigError(f"field 'scenario': {cfg.scenario!r} has no trajectory")
    rows = _TRAJECTORY_ROWS[cfg.scenario](cfg, samples)
    return {"spec_version": SPEC_VERSION, "scenario": cfg.scenario, "kind": cfg.kind,
            "parameters": cfg.parameter_dict(), "rows": rows, "summary": _summary(rows)}


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def trajectory_csv(samples, names=None):
    """Trajectory as CSV text: ``re(t), im(t)`` then re/im pairs per component."""
    n = len(samples[0][1]) if samples else 0
    names = names or [f"s{i}" for i in range(n)]
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    head = ["re(t)", "im(t)"]
    for nm in names:
        head += [f"re({nm})", f"im({nm})"]
    wr.writerow(head)
    for t, s in samples:
        row = [repr(complex(t).real), repr(complex(t).imag)]
        for x in s:
            x = complex(x)
            row += [repr(x.real), repr(x.imag)]
        wr.writerow(row)
    return buf.getvalue()


def read_trajectory_csv(text):
    """Inverse of :func:`trajectory_csv`."""
    rd = csv.reader(io.StringIO(text))
    next(rd)
    out = []
    for row in rd:
        v = [float(x) for x in row]
        t = complex(v[0], v[1])
        out.append((t, [complex(v[i], v[i + 1]) for i in range(2, len(v), 2)]))
    return out


def report_csv(report):
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["label", "value", "tolerance", "pass"])
    for r in report["rows"]:
        wr.writerow([r["label"], repr(r["value"]), repr(r["tolerance"]), str(r["pass"]).lower()])
    return buf.getvalue()


def _component_names(cfg, samples):
    if cfg.scenario == "parametrize":
        return ["y", "y1" if cfg.kind == "P6" else "z", "f", "g"]
    if cfg.kind in systems.COORD_NAMES:
        return list(systems.COORD_NAMES[cfg.kind])
    return None


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(f"field '<file>': cannot read {path}: {e.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"field '<root>': invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    return RunConfig(raw)


def export_concordance():
    """Formula-to-operation table as a JSON-ready dict."""
    data = json.loads(resources.files("painlab").joinpath("data/concordance.json").read_text("utf-8"))
    return data


def _write(path, text, stdout):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def run(config_path, stdout=None, stderr=None):
    """Execute ``run --config``; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg = load_config(config_path)
        report, samples = execute(cfg)
    except ConfigError as e:
        stderr.write(f"config error: {e}\n")
        return 2
    except PainlabError as e:
        stderr.write(f"numerical failure: {type(e).__name__}: {e}\n")
        return 3
    if samples is not None and cfg.trajectory_path:
        _write(cfg.trajectory_path, trajectory_csv(samples, _component_names(cfg, samples)), stdout)
    text = report_csv(report) if cfg.format == "csv" else json.dumps(report, indent=1) + "\n"
    _write(cfg.report_path, text, stdout)
    return 0 if report["summary"]["pass"] else 1


def main(argv=None):
    ap = argparse.ArgumentParser(prog="painlab")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="execute one scenario")
    r.add_argument("--config", required=True)
    sub.add_parser("concordance", help="print the formula-to-operation table")
    rep = sub.add_parser("report", help="recompute a trajectory report from CSV")
    rep.add_argument("--config", required=True)
    rep.add_argument("--trajectory", required=True)
    args = ap.parse_args(argv)
    if args.command == "concordance":
        json.dump(export_concordance(), sys.stdout, indent=1, ensure_ascii=False)
        sys.stdout.write("\n")
        return 0
    if args.command == "report":
        try:
            cfg = load_config(args.config)
            with open(args.trajectory, encoding="utf-8") as fh:
                samples = read_trajectory_csv(fh.read())
            report = report_from_samples(cfg, samples)
        except ConfigError as e:
            sys.stderr.write(f"config error: {e}\n")
            return 2
        except PainlabError as e:
            sys.stderr.write(f"numerical failure: {type(e).__name__}: {e}\n")
            return 3
        sys.stdout.write(json.dumps(report, indent=1) + "\n")
        return 0 if report["summary"]["pass"] else 1
    return run(args.config)


if __name__ == "__main__":
    sys.exit(main())
