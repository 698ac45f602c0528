"""Config-driven command line interface.

One JSON config per run; subcommands pick the computation:

    indefsl m-eval             --config cfg.json --out outdir
    indefsl criterion-scan     ...
    indefsl classify           ...
    indefsl zone-build         ...
    indefsl eigs-find          ...
    indefsl discrete-spectrum  ...
    indefsl discrete-functional ...

Common flags: --config PATH (required), --out DIR (default '.'),
--seed INT (overrides config seed), --threads INT.

Problems are described by piecewise coefficient blocks; callables are
named built-ins (constant, characteristic, power, cosine, rational,
poly) with numeric parameters only, so a config fully determines the
run.  Outputs are CSV tables with fixed column order, formatted at
%.12e, plus a JSON sidecar carrying the config hash, tolerances,
truncation radii and the branch conventions; identical configs produce
bit-identical outputs.  Files are written atomically (temp + rename).

Exit codes: 0 success, 1 numerical failure (a machine-readable
error.json is emitted), 2 configuration error.
"""

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .coeffs import Coefficient
from .criteria import (
    RatioKind,
    ScanRegion,
    classify_pair,
    find_nonreal_eigs,
    necessary_ratio_scan,
    optimize_shift,
    scan_sup,
)
from .discrete import discretize, resolvent_functional, spectrum
from .errors import IndefSLError
from .mcatalog import (
    DecayingABM,
    ExampleA1M,
    ExampleQ0M,
    FiniteZoneM,
    FreeM,
    InfZoneTruncatedM,
    MPair,
    NumericM,
    PeriodicM,
    PowerWeightM,
)
from .periodic import PeriodicData
from .sl_ode import Boundary, FullLineProblem, HalfLineProblem, Side
from .zones import ZoneData, ZoneSequenceData, finitezone_build

_BRANCH_NOTE = ("powers on the cut-plane branch arg in [0, 2pi); periodic "
                "sqrt(dp^2-1) by the stable Floquet multiplier; band sqrt(R) "
                "as the cut-branch product over roots")


class ConfigError(Exception):
    pass


def _fail(path, msg):
    raise ConfigError(f"config error at {path}: {msg}")


def _check_keys(obj, path, required, optional=()):
    if not isinstance(obj, dict):
        _fail(path, f"expected an object, got {type(obj).__name__}")
    for k in obj:
        if k not in required and k not in optional:
            _fail(path, f"unknown key {k!r}")
    for k in required:
        if k not in obj:
            _fail(path, f"missing required key {k!r}")


def _num(obj, path, positive=False):
    if not isinstance(obj, (int, float)) or isinstance(obj, bool):
        _fail(path, "expected a number")
    if positive and not obj > 0:
        _fail(path, "must be positive")
    return float(obj)


# --------------------------------------------------------------------------
# coefficient / problem / evaluator parsing
# --------------------------------------------------------------------------

def _parse_fn(obj, path):
    _check_keys(obj, path, ["type"],
                ["value", "c", "alpha", "amplitude", "omega", "phase",
                 "offset", "a", "b", "p", "coeffs", "x0"])
    t = obj["type"]
    if t == "constant":
        return "const", (_num(obj.get("value", 0.0), path + ".value"),)
    if t == "characteristic":
        # interval carries the support; the fn is its constant height
        return "const", (_num(obj.get("value", 1.0), path + ".value"),)
    if t == "power":
        alpha = _num(obj.get("alpha", 0.0), path + ".alpha")
        if alpha <= -1.0:
            _fail(path + ".alpha", f"violates alpha > -1 (got {alpha})")
        return "power", (_num(obj.get("c", 1.0), path + ".c"), alpha)
    if t == "cosine":
        return "cosine", (_num(obj.get("amplitude", 1.0), path + ".amplitude"),
                          _num(obj.get("omega", 1.0), path + ".omega"),
                          _num(obj.get("phase", 0.0), path + ".phase"),
                          _num(obj.get("offset", 0.0), path + ".offset"))
    if t == "rational":
        return "shifted_power", (_num(obj.get("c", 1.0), path + ".c"),
                                 _num(obj.get("a", 1.0), path + ".a"),
                                 _num(obj.get("b", 1.0), path + ".b"),
                                 _num(obj.get("p", -2.0), path + ".p"))
    if t == "poly":
        coeffs = obj.get("coeffs", [])
        if not isinstance(coeffs, list) or len(coeffs) > 5:
            _fail(path + ".coeffs", "expected a list of <= 5 coefficients")
        c = [0.0] * 5
        for i, v in enumerate(coeffs):
            c[i] = _num(v, f"{path}.coeffs[{i}]")
        return "poly", (*c, _num(obj.get("x0", 0.0), path + ".x0"))
    _fail(path + ".type", f"unknown function type {t!r}")


def _parse_interval(obj, path):
    if not isinstance(obj, list) or len(obj) != 2:
        _fail(path, "expected [lo, hi] (null for +-inf)")
    lo = -math.inf if obj[0] is None else _num(obj[0], path + "[0]")
    hi = math.inf if obj[1] is None else _num(obj[1], path + "[1]")
    if not lo < hi:
        _fail(path, "needs lo < hi")
    return lo, hi


def _parse_coefficient(obj, path, side):
    _check_keys(obj, path, ["pieces"], ["fill"])
    fill = _num(obj.get("fill", 0.0), path + ".fill")
    domain = (0.0, math.inf) if side is Side.PLUS else (-math.inf, 0.0)
    spec = []
    if not isinstance(obj["pieces"], list) or not obj["pieces"]:
        _fail(path + ".pieces", "expected a nonempty list")
    for i, piece in enumerate(obj["pieces"]):
        ppath = f"{path}.pieces[{i}]"
        _check_keys(piece, ppath, ["interval", "fn"])
        lo, hi = _parse_interval(piece["interval"], ppath + ".interval")
        kind, params = _parse_fn(piece["fn"], ppath + ".fn")
        spec.append((lo, hi, kind, params))
    try:
        return Coefficient.pieces(spec, domain=domain, fill=fill)
    except ValueError as exc:
        _fail(path, str(exc))


def _parse_halfline(obj, path):
    _check_keys(obj, path, ["side", "q", "weight"], ["X", "boundary"])
    side = {"plus": Side.PLUS, "minus": Side.MINUS}.get(obj["side"])
    if side is None:
        _fail(path + ".side", "expected 'plus' or 'minus'")
    X = None if obj.get("X") is None else _num(obj["X"], path + ".X", positive=True)
    boundary = {"neumann": Boundary.NEUMANN, "dirichlet": Boundary.DIRICHLET}.get(
        obj.get("boundary", "neumann"))
    if boundary is None:
        _fail(path + ".boundary", "expected 'neumann' or 'dirichlet'")
    q = _parse_coefficient(obj["q"], path + ".q", side)
    w = _parse_coefficient(obj["weight"], path + ".weight", side)
    try:
        return HalfLineProblem(side, q, w, X, boundary)
    except ValueError as exc:
        _fail(path, str(exc))


def _parse_zone_data(obj, path):
    _check_keys(obj, path, ["mu_r0", "bands", "xi", "eps"])
    try:
        return ZoneData(_num(obj["mu_r0"], path + ".mu_r0"),
                        [tuple(b) for b in obj["bands"]], obj["xi"], obj["eps"])
    except (ValueError, TypeError) as exc:
        _fail(path, str(exc))


def _parse_zone_rule(obj, path):
    _check_keys(obj, path, ["family"], ["centers_scale", "gap", "mu_r0"])
    if obj["family"] != "geometric_gaps":
        _fail(path + ".family", f"unknown band family {obj['family']!r}")
    return ZoneSequenceData.geometric_gaps(
        centers_scale=_num(obj.get("centers_scale", 1.0), path, positive=True),
        gap=_num(obj.get("gap", 0.25), path, positive=True),
        mu_r0=_num(obj.get("mu_r0", 0.0), path))


def _parse_evaluator(obj, path, side):
    _check_keys(obj, path, ["kind"],
                ["alpha", "problem", "q", "period", "zone_data", "rule", "N"])
    kind = obj["kind"]
    if kind == "free":
        return FreeM(side)
    if kind == "power_weight":
        alpha = _num(obj.get("alpha", 0.0), path + ".alpha")
        if alpha <= -1.0:
            _fail(path + ".alpha", f"violates alpha > -1 (got {alpha})")
        return PowerWeightM(alpha, side)
    if kind == "example_q0":
        return ExampleQ0M(side)
    if kind == "example_a1":
        return ExampleA1M(side)
    if kind == "numeric":
        if "problem" not in obj:
            _fail(path, "numeric evaluator needs a 'problem' block")
        return NumericM(_parse_halfline(obj["problem"], path + ".problem"))
    if kind == "decaying_ab":
        if "problem" not in obj:
            _fail(path, "decaying_ab evaluator needs a 'problem' block")
        return DecayingABM(_parse_halfline(obj["problem"], path + ".problem"))
    if kind == "periodic":
        if "q" not in obj or "period" not in obj:
            _fail(path, "periodic evaluator needs 'q' and 'period'")
        q = _parse_coefficient(obj["q"], path + ".q", Side.PLUS)
        return PeriodicM(PeriodicData(q, _num(obj["period"], path + ".period",
                                              positive=True)), side)
    if kind == "finite_zone":
        if "zone_data" not in obj:
            _fail(path, "finite_zone evaluator needs 'zone_data'")
        return FiniteZoneM(finitezone_build(
            _parse_zone_data(obj["zone_data"], path + ".zone_data")), side)
    if kind == "infinite_zone":
        if "rule" not in obj:
            _fail(path, "infinite_zone evaluator needs 'rule'")
        n = obj.get("N", 20)
        if not isinstance(n, int) or n < 1:
            _fail(path + ".N", "expected a positive integer")
        return InfZoneTruncatedM(_parse_zone_rule(obj["rule"], path + ".rule"),
                                 n, side)
    _fail(path + ".kind", f"unknown evaluator kind {kind!r}")


def _parse_pair(obj, path):
    _check_keys(obj, path, [], ["plus", "minus", "even_mirror"])
    if "even_mirror" in obj:
        ev = _parse_evaluator(obj["even_mirror"], path + ".even_mirror", Side.PLUS)
        return MPair.mirror_even(ev)
    if "plus" not in obj or "minus" not in obj:
        _fail(path, "needs either 'even_mirror' or both 'plus' and 'minus'")
    return MPair(_parse_evaluator(obj["plus"], path + ".plus", Side.PLUS),
                 _parse_evaluator(obj["minus"], path + ".minus", Side.MINUS))


def _parse_fullline(obj, path):
    _check_keys(obj, path, [], ["plus", "minus", "even_mirror"])
    if "even_mirror" in obj:
        return FullLineProblem.even_mirror(
            _parse_halfline(obj["even_mirror"], path + ".even_mirror"))
    if "plus" not in obj or "minus" not in obj:
        _fail(path, "needs either 'even_mirror' or both 'plus' and 'minus'")
    return FullLineProblem(_parse_halfline(obj["plus"], path + ".plus"),
                           _parse_halfline(obj["minus"], path + ".minus"))


def _parse_lambdas(obj, path):
    _check_keys(obj, path, [], ["points", "log_polar"])
    if "points" in obj:
        pts = obj["points"]
        if not isinstance(pts, list) or not pts:
            _fail(path + ".points", "expected a nonempty list of [re, im]")
        out = []
        for i, p in enumerate(pts):
            if not isinstance(p, list) or len(p) != 2:
                _fail(f"{path}.points[{i}]", "expected [re, im]")
            out.append(complex(_num(p[0], f"{path}.points[{i}][0]"),
                               _num(p[1], f"{path}.points[{i}][1]")))
        return out
    if "log_polar" in obj:
        lp = obj["log_polar"]
        _check_keys(lp, path + ".log_polar", ["abs_min", "abs_max", "n_abs", "n_arg"])
        lo = _num(lp["abs_min"], path, positive=True)
        hi = _num(lp["abs_max"], path, positive=True)
        na, nr = int(lp["n_abs"]), int(lp["n_arg"])
        radii = np.geomspace(lo, hi, na)
        args = math.pi * (np.arange(nr) + 0.5) / nr
        return [complex(r * math.cos(a), r * math.sin(a))
                for r in radii for a in args]
    _fail(path, "needs 'points' or 'log_polar'")


def _parse_region(obj, path):
    _check_keys(obj, path, ["kind"],
                ["R", "rmin", "rmax", "radial_points", "angular_points", "decades"])
    kw = {k: obj[k] for k in ("radial_points", "angular_points") if k in obj}
    try:
        if obj["kind"] == "near_zero":
            return ScanRegion.near_zero(_num(obj.get("R", 1.0), path + ".R",
                                             positive=True),
                                        decades=_num(obj.get("decades", 3.0), path),
                                        **kw)
        if obj["kind"] == "near_infinity":
            return ScanRegion.near_infinity(_num(obj.get("R", 1.0), path + ".R",
                                                 positive=True),
                                            decades=_num(obj.get("decades", 3.0), path),
                                            **kw)
        if obj["kind"] == "upper_half_plane":
            return ScanRegion.upper_half_plane(_num(obj.get("rmin", 0.1), path),
                                               _num(obj.get("rmax", 10.0), path), **kw)
    except ValueError as exc:
        _fail(path, str(exc))
    _fail(path + ".kind", f"unknown region kind {obj['kind']!r}")


# --------------------------------------------------------------------------
# output helpers
# --------------------------------------------------------------------------

def _atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp_indefsl_")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x):
    return f"{x:.12e}"


def _write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v)
                              for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def emit_plotdata(kind, payload, path):
    """Write one of the fixed-format CSV tables.

    kind 'ratio-scan': rows (abs_lambda, arg_lambda, ratio);
    kind 'spectrum':   rows (re, im, kind);
    kind 'functional': rows (eps, value, error_bar);
    kind 'm-values':   rows (re_lambda, im_lambda, re_m, im_m);
    kind 'eigs':       rows (re, im, multiplicity).
    """
    headers = {
        "ratio-scan": ["abs_lambda", "arg_lambda", "ratio"],
        "spectrum": ["re", "im", "kind"],
        "functional": ["eps", "value", "error_bar"],
        "m-values": ["re_lambda", "im_lambda", "re_m", "im_m"],
        "eigs": ["re", "im", "multiplicity"],
    }
    if kind not in headers:
        raise ValueError(f"unknown plotdata kind {kind!r}")
    _write_csv(path, headers[kind], payload)


def _sidecar(out_dir, name, cfg_bytes, command, extra):
    meta = {
        "command": command,
        "config_sha256": hashlib.sha256(cfg_bytes).hexdigest(),
        "package_version": __version__,
        "branch_conventions": _BRANCH_NOTE,
    }
    meta.update(extra)
    _atomic_write(os.path.join(out_dir, name),
                  json.dumps(meta, indent=2, sort_keys=True) + "\n")


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def _cmd_m_eval(cfg, out_dir, cfg_bytes, seed, threads):
    _check_keys(cfg, "$", ["command", "evaluator", "lambdas"],
                ["output", "seed", "tolerances"])
    side = Side.PLUS
    ev = _parse_evaluator(cfg["evaluator"], "$.evaluator", side)
    lambdas = _parse_lambdas(cfg["lambdas"], "$.lambdas")
    rows = []
    for lam in lambdas:
        m = complex(ev.m(lam))
        rows.append((lam.real, lam.imag, m.real, m.imag))
    out = cfg.get("output", {}).get("csv", "m_values.csv")
    emit_plotdata("m-values", rows, os.path.join(out_dir, out))
    _sidecar(out_dir, out.replace(".csv", ".meta.json"), cfg_bytes, "m-eval",
             {"n_points": len(rows), "seed": seed})
    return 0


def _resolve_shift(cfg, pair, region, threads):
    shift = cfg.get("shift", {"mode": "fixed", "C": 0.0})
    _check_keys(shift, "$.shift", ["mode"], ["C"])
    if shift["mode"] == "fixed":
        C = _num(shift.get("C", 0.0), "$.shift.C")
        return C, None
    if shift["mode"] == "optimize":
        C, res = optimize_shift(pair, None, region, threads=threads)
        return C, res
    _fail("$.shift.mode", "expected 'fixed' or 'optimize'")


def _cmd_criterion_scan(cfg, out_dir, cfg_bytes, seed, threads):
    _check_keys(cfg, "$", ["command", "pair", "region"],
                ["shift", "ratio", "output", "seed", "tolerances"])
    pair = _parse_pair(cfg["pair"], "$.pair")
    region = _parse_region(cfg["region"], "$.region")
    kind_name = cfg.get("ratio", "shifted")
    if kind_name not in ("shifted", "necessary"):
        _fail("$.ratio", "expected 'shifted' or 'necessary'")
    if kind_name == "necessary":
        result = necessary_ratio_scan(pair, None, region, threads=threads)
        C = 0.0
    else:
        C, pre = _resolve_shift(cfg, pair, region, threads)
        result = pre if pre is not None else scan_sup(pair, None, region, C=C,
                                                      threads=threads)
    out = cfg.get("output", {})
    csv_name = out.get("csv", "criterion_scan.csv")
    emit_plotdata("ratio-scan", result.samples, os.path.join(out_dir, csv_name))
    summary = {
        "sup_value": result.sup_value,
        "argmax_lambda": [result.argmax_lambda.real, result.argmax_lambda.imag],
        "shift_C": result.shift_C,
        "growth_exponent": result.growth_exponent,
        "fit_residual": result.fit_residual,
        "verdict": result.verdict.value,
        "ratio_kind": kind_name,
        "excluded_points": [[z.real, z.imag] for z in result.excluded],
        "flat_shift_objective": result.flat_shift_objective,
    }
    _atomic_write(os.path.join(out_dir, out.get("summary", "criterion_scan.json")),
                  json.dumps(summary, indent=2, sort_keys=True) + "\n")
    _sidecar(out_dir, csv_name.replace(".csv", ".meta.json"), cfg_bytes,
             "criterion-scan", {"seed": seed})
    return 0


def _cmd_classify(cfg, out_dir, cfg_bytes, seed, threads):
    _check_keys(cfg, "$", ["command", "pair"],
                ["even", "R_zero", "R_inf", "rect", "output", "seed", "tolerances"])
    pair = _parse_pair(cfg["pair"], "$.pair")
    rect = tuple(cfg["rect"]) if "rect" in cfg else None
    report = classify_pair(pair, even="even_mirror" in cfg["pair"] or
                           cfg.get("even", False),
                           R_zero=_num(cfg.get("R_zero", 1e-2), "$.R_zero", True),
                           R_inf=_num(cfg.get("R_inf", 1e2), "$.R_inf", True),
                           eig_rect=rect, seed=seed)
    out = cfg.get("output", {}).get("summary", "classification.json")
    _atomic_write(os.path.join(out_dir, out),
                  json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n")
    _sidecar(out_dir, out.replace(".json", ".meta.json"), cfg_bytes, "classify",
             {"seed": seed})
    return 0


def _cmd_zone_build(cfg, out_dir, cfg_bytes, seed, threads):
    _check_keys(cfg, "$", ["command", "zone_data"], ["output", "seed", "tolerances"])
    zp = finitezone_build(_parse_zone_data(cfg["zone_data"], "$.zone_data"))
    rows = []
    for name, coeffs in (("P", zp.P), ("Q", zp.Q), ("R", zp.R), ("S", zp.S)):
        for i, c in enumerate(coeffs):
            rows.append((name, i, float(c)))
    out = cfg.get("output", {})
    csv_name = out.get("csv", "zone_polynomials.csv")
    lines = ["poly,power,coefficient"]
    for name, i, c in rows:
        lines.append(f"{name},{i},{_fmt(c)}")
    _atomic_write(os.path.join(out_dir, csv_name), "\n".join(lines) + "\n")
    summary = {"residual": zp.residual, "taus": [float(t) for t in zp.taus]}
    _atomic_write(os.path.join(out_dir, out.get("summary", "zone_build.json")),
                  json.dumps(summary, indent=2, sort_keys=True) + "\n")
    _sidecar(out_dir, csv_name.replace(".csv", ".meta.json"), cfg_bytes,
             "zone-build", {"seed": seed})
    return 0


def _cmd_eigs_find(cfg, out_dir, cfg_bytes, seed, threads):
    _check_keys(cfg, "$", ["command", "pair", "rect"],
                ["D", "C", "output", "seed", "tolerances"])
    pair = _parse_pair(cfg["pair"], "$.pair")
    rect = cfg["rect"]
    if not isinstance(rect, list) or len(rect) != 4:
        _fail("$.rect", "expected [re_min, re_max, im_min, im_max]")
    eigs = find_nonreal_eigs(pair, None, tuple(float(v) for v in rect),
                             D=_num(cfg.get("D", 1.0), "$.D"),
                             C=_num(cfg.get("C", 0.0), "$.C"))
    rows = [(z.real, z.imag, k) for z, k in eigs]
    out = cfg.get("output", {}).get("csv", "nonreal_eigs.csv")
    emit_plotdata("eigs", rows, os.path.join(out_dir, out))
    _sidecar(out_dir, out.replace(".csv", ".meta.json"), cfg_bytes, "eigs-find",
             {"seed": seed, "count": len(rows)})
    return 0


def _cmd_discrete_spectrum(cfg, out_dir, cfg_bytes, seed, threads):
    _check_keys(cfg, "$", ["command", "problem", "grid"],
                ["pair_tol", "condition", "output", "seed", "tolerances"])
    fp = _parse_fullline(cfg["problem"], "$.problem")
    grid = cfg["grid"]
    _check_keys(grid, "$.grid", ["X", "n"])
    op = discretize(fp, _num(grid["X"], "$.grid.X", True), int(grid["n"]))
    sp = spectrum(op, pair_tol=_num(cfg.get("pair_tol", 1e-3), "$.pair_tol", True),
                  compute_condition=bool(cfg.get("condition", False)))
    rows = [(float(v), 0.0, "real") for v in sp.real_eigs]
    rows += [(float(z.real), float(z.imag), "pair") for z in sp.complex_pairs]
    out = cfg.get("output", {}).get("csv", "discrete_spectrum.csv")
    emit_plotdata("spectrum", rows, os.path.join(out_dir, out))
    _sidecar(out_dir, out.replace(".csv", ".meta.json"), cfg_bytes,
             "discrete-spectrum",
             {"seed": seed, "n": op.n, "h": op.h,
              "eigvec_condition": sp.eigvec_condition,
              "symmetry_defect": op.weighted_symmetry_defect()})
    return 0


def _cmd_discrete_functional(cfg, out_dir, cfg_bytes, seed, threads):
    _check_keys(cfg, "$", ["command", "problem", "grid", "functional"],
                ["output", "seed", "tolerances"])
    fp = _parse_fullline(cfg["problem"], "$.problem")
    grid = cfg["grid"]
    _check_keys(grid, "$.grid", ["X", "n"])
    op = discretize(fp, _num(grid["X"], "$.grid.X", True), int(grid["n"]))
    fn = cfg["functional"]
    _check_keys(fn, "$.functional", ["eps"], ["trials", "quad_points"])
    eps_list = [(_num(e, "$.functional.eps[*]", True)) for e in fn["eps"]]
    trials = int(fn.get("trials", 8))
    rng = np.random.default_rng(seed)
    F = rng.standard_normal((op.n, trials))
    F /= np.linalg.norm(F, axis=0)
    rows = []
    for eps in eps_list:
        results = resolvent_functional(op, F, eps,
                                       quad_points=int(fn.get("quad_points", 6)))
        worst = max(results, key=lambda r: r.value)
        rows.append((eps, worst.value, worst.error_bar))
    out = cfg.get("output", {}).get("csv", "functional_ladder.csv")
    emit_plotdata("functional", rows, os.path.join(out_dir, out))
    _sidecar(out_dir, out.replace(".csv", ".meta.json"), cfg_bytes,
             "discrete-functional",
             {"seed": seed, "n": op.n, "trials": trials,
              "note": "finite eps ladder with random f: evidence, not a certificate"})
    return 0


_COMMANDS = {
    "m-eval": _cmd_m_eval,
    "criterion-scan": _cmd_criterion_scan,
    "classify": _cmd_classify,
    "zone-build": _cmd_zone_build,
    "eigs-find": _cmd_eigs_find,
    "discrete-spectrum": _cmd_discrete_spectrum,
    "discrete-functional": _cmd_discrete_functional,
}


def run(command, config_path, out_dir=".", seed=None, threads=1):
    """Load + validate the config and execute; returns the exit code."""
    try:
        with open(config_path, "rb") as fh:
            cfg_bytes = fh.read()
        cfg = json.loads(cfg_bytes)
    except OSError as exc:
        print(f"config error: cannot read {config_path}: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"config error: invalid JSON: {exc}", file=sys.stderr)
        return 2
    try:
        if not isinstance(cfg, dict):
            _fail("$", "top level must be an object")
        declared = cfg.get("command")
        if declared is not None and declared != command:
            _fail("$.command", f"config says {declared!r}, invoked as {command!r}")
        cfg.setdefault("command", command)
        if seed is None:
            seed = int(cfg.get("seed", 0))
        os.makedirs(out_dir, exist_ok=True)
        return _COMMANDS[command](cfg, out_dir, cfg_bytes, seed, threads)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except IndefSLError as exc:
        record = {"error": type(exc).__name__, "message": str(exc),
                  "command": command}
        try:
            _atomic_write(os.path.join(out_dir, "error.json"),
                          json.dumps(record, indent=2, sort_keys=True) + "\n")
        except OSError:
            pass
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="indefsl",
        description="m-coefficients and similarity detectors for "
                    "indefinite-weight Sturm-Liouville operators")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default=".")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=1)
    args = parser.parse_args(argv)
    return run(args.command, args.config, args.out, args.seed, args.threads)


if __name__ == "__main__":
    sys.exit(main())
