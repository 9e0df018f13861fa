"""Command line interface: one subcommand per operation, JSON/CSV/SVG output.

Exit status is 0 on success, 2 on domain errors (a JSON error object goes to
stderr) and 1 on anything else.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .errors import ConfigError, ParseError, SrsError

# parsing helpers


def split_top(text, sep=","):
    """Split on sep outside square brackets."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def parse_field_arg(text):
    from .exactnum import parse_field

    return parse_field(text)


def parse_vector(text, field):
    from .exactnum import parse_element

    return [parse_element(p, field) for p in split_top(text)]


def parse_param(text, field, symmetric=False):
    from .core import ParamVector

    coords = parse_vector(text, field)
    if not coords:
        raise ParseError("empty parameter vector")
    return ParamVector(coords, field, Fraction(1, 2) if symmetric else 0)


def parse_ints(text):
    try:
        return [int(p) for p in split_top(text)]
    except ValueError as exc:
        raise ParseError(f"expected integers: {text!r}") from exc


def parse_range(text):
    """'a..b' (inclusive) or a comma list of integers."""
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if m:
        a, b = int(m.group(1)), int(m.group(2))
        return list(range(a, b + 1))
    return parse_ints(text)


def parse_interval(text):
    from .exactnum import parse_rational

    parts = split_top(text.strip().strip("()"))
    if len(parts) != 2:
        raise ParseError(f"expected lo,hi: {text!r}")
    return parse_rational(parts[0]), parse_rational(parts[1])


def parse_hull(text):
    from .exactnum import parse_rational

    verts = []
    for chunk in text.split(";"):
        if chunk.strip():
            verts.append(tuple(parse_rational(c) for c in split_top(chunk)))
    if not verts:
        raise ParseError("empty hull")
    return verts


# output helpers


def header(field_spec, command):
    return {"version": __version__, "command": command, "field": field_spec}


def dump_json(obj):
    return json.dumps(obj, indent=1) + "\n"


def write_output(text, path):
    from .errors import IoError

    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(str(exc)) from exc


def _field_spec(field):
    """Field in the same syntax --field accepts."""
    if field.is_rational:
        return "Q"
    lo, hi = field.root_interval
    return "poly=[" + ",".join(str(c) for c in field.min_poly) + f"];root=({lo},{hi})"


# subcommand handlers: each returns the output text


def cmd_orbit(a):
    from .core import orbit

    field = parse_field_arg(a.field)
    r = parse_param(a.r, field, a.symmetric)
    z = parse_ints(a.z)
    if len(z) != r.d:
        raise ParseError(f"z needs {r.d} entries")
    escape = Fraction(a.escape_norm) if a.escape_norm is not None else None
    res = orbit(r, z, a.max_steps, escape)
    out = header(_field_spec(r.field), "orbit")
    out.update(res.to_json())
    return dump_json(out)


def cmd_decide(a):
    from .witness import decide_finiteness

    field = parse_field_arg(a.field)
    r = parse_param(a.r, field)
    res = decide_finiteness(r, a.max_witness)
    out = header(_field_spec(r.field), "decide")
    out["finiteness"] = res.finite
    if res.cycle is not None:
        out["cycle"] = list(res.cycle.entries)
        out["cycle_points"] = res.cycle.to_json()
    out["witnesses"] = res.witnesses
    return dump_json(out)


def cmd_decide_p(a):
    from .witness import decide_Ddp

    field = parse_field_arg(a.field)
    r = parse_param(a.r, field)
    out = header(_field_spec(r.field), "decide-p")
    out["p"] = a.p
    out["in_Ddp"] = decide_Ddp(r, a.p, a.max_witness)
    return dump_json(out)


def cmd_region(a):
    from .witness import describe_region

    hull = parse_hull(a.hull)
    jobs = int(os.environ.get("SRS_JOBS", a.jobs))
    desc = describe_region(hull, a.max_witness, a.max_cycles, a.depth, jobs)
    out = header("Q", "region")
    out["hull"] = [[str(c) for c in v] for v in hull]
    out.update(desc.to_json())
    return dump_json(out)


def cmd_schur_cohn(a):
    from .regions import schur_cohn_contains

    field = parse_field_arg(a.field)
    r = parse_param(a.r, field)
    out = header(_field_spec(r.field), "schur-cohn")
    out.update(schur_cohn_contains(r).to_json())
    return dump_json(out)


def cmd_odot(a):
    from .exactnum import format_element
    from .regions import odot

    field = parse_field_arg(a.field)
    r = parse_param(a.r, field)
    s = parse_vector(a.s, field) if a.s.strip() else []
    res = odot(r, s)
    out = header(_field_spec(res.field), "odot")
    out["r"] = [format_element(c) for c in res.coords]
    return dump_json(out)


def cmd_boundary_param(a):
    from .exactnum import format_element, parse_element
    from .regions import boundary_parameterization

    field = parse_field_arg(a.field)
    res = boundary_parameterization(a.surface, parse_element(a.s, field), parse_element(a.t, field))
    out = header(_field_spec(res.field), "boundary-param")
    out["surface"] = a.surface
    out["r"] = [format_element(c) for c in res.coords]
    return dump_json(out)


def _beta_system(a):
    from .conjugacy import BetaSystem

    return BetaSystem(parse_ints(a.minpoly), parse_interval(a.root))


def cmd_beta(a):
    from .conjugacy import beta_digits, property_F
    from .exactnum import format_element, parse_element

    bs = _beta_system(a)
    out = header(_field_spec(bs.field), "beta")
    out["r"] = [format_element(c) for c in bs.r.coords]
    out["alphabet"] = list(bs.alphabet)
    if a.gamma is not None:
        gamma = parse_element(a.gamma, bs.field)
        out["gamma"] = format_element(gamma)
        out["digits"] = beta_digits(bs, gamma, a.digits)
    if a.property_f:
        out["property_F"] = property_F(bs, a.max_witness)
    return dump_json(out)


def cmd_cns(a):
    from .conjugacy import CnsSystem, cns_expansion, decide_cns
    from .exactnum import format_element

    cs = CnsSystem(parse_ints(a.poly))
    out = header("Q", "cns")
    out["r"] = [format_element(c) for c in cs.r.coords]
    out["digits_set"] = list(cs.digits)
    if a.element is not None:
        digits, finite = cns_expansion(cs, cs.element(parse_ints(a.element)), a.max_steps)
        out["expansion"] = {"digits": digits, "finite": finite}
    if a.decide:
        out.update(decide_cns(cs, a.max_witness).to_json())
    return dump_json(out)


def cmd_tile(a):
    from .tiles import render, tile_cloud, tile_interval

    field = parse_field_arg(a.field)
    r = parse_param(a.r, field)
    x = parse_ints(a.x)
    if a.interval:
        if r.d != 1 or len(x) != 1:
            raise ParseError("--interval needs d = 1")
        obj = tile_interval(r, x[0], a.depth, a.max_points)
    else:
        obj = tile_cloud(r, x, a.depth, a.max_points)
    if a.format == "json":
        out = header(_field_spec(r.field), "tile")
        out["r"] = [str(c) for c in r.coords]
        out.update(obj.to_json())
        return dump_json(out)
    return render(obj, a.format)


def cmd_tile_transport(a):
    from .tiles import beta_tile_transport, render, self_affine_parameter, self_affine_transport, tile_cloud, v_inverse
    from .linalg import mat_vec

    x = parse_ints(a.x)
    if a.mode == "beta":
        if a.minpoly is None or a.root is None:
            raise ParseError("--mode beta needs --minpoly and --root")
        bs = _beta_system(a)
        cloud = tile_cloud(bs.r, x, a.depth, a.max_points)
        pts = beta_tile_transport(bs, cloud, a.precision)
        lines = ["x" + str(i) for i in range(bs.d)]
        text = ",".join(lines) + "\n" + "".join(",".join(repr(v) for v in p) + "\n" for p in pts)
        if a.format == "json":
            out = header(_field_spec(bs.field), "tile-transport")
            out.update({"mode": "beta", "center": x, "depth": a.depth, "precision": a.precision, "approximate": True,
                        "points": [list(p) for p in pts]})
            return dump_json(out)
        return text
    if a.poly is None:
        raise ParseError("--mode cns needs --poly")
    P = parse_ints(a.poly)
    r = self_affine_parameter(P)
    y = mat_vec(v_inverse(P), x)
    cloud = tile_cloud(r, y, a.depth, a.max_points)
    pts = self_affine_transport(P, cloud)
    from .tiles import TileCloud

    moved = TileCloud(r, tuple(x), a.depth, pts, cloud.hausdorff_bound)
    if a.format == "json":
        out = header("Q", "tile-transport")
        out["mode"] = "cns"
        out.update(moved.to_json())
        return dump_json(out)
    return render(moved, a.format)


def cmd_salem_scan(a):
    from .experiments import records_csv, salem_grid_scan, salem_mismatches

    b1 = parse_range(a.b1)
    b2 = parse_range(a.b2) if a.b2 else list(range(2 * min(b1) - 2, -2 * min(b1) - 1)) if b1 else []
    recs = salem_grid_scan(b1, b2, a.max_steps)
    if a.format == "json":
        out = header("Q", "salem-scan")
        out["records"] = [r.to_json() for r in recs if r.status != "Skipped" or a.keep_skipped]
        out["mismatches"] = len(salem_mismatches(recs))
        return dump_json(out)
    keep = [r for r in recs if r.status != "Skipped" or a.keep_skipped]
    return records_csv(keep)


def cmd_heatmap(a):
    from .experiments import ec_heatmap, grid_values, records_csv

    s_grid = grid_values(-2, 2, a.s_steps, open_ends=True)
    t_grid = grid_values(Fraction(a.t_lo), Fraction(a.t_hi), a.t_steps, open_ends=False)
    recs = ec_heatmap(s_grid, t_grid, a.cap)
    return records_csv(recs)


def cmd_rotation(a):
    from .exactnum import parse_element
    from .experiments import rotation_orbit

    field = parse_field_arg(a.field)
    lam = parse_element(a.lam, field)
    rec = rotation_orbit(lam, parse_ints(a.z), a.max_steps)
    out = header(_field_spec(field), "rotation")
    out.update(rec.to_json())
    return dump_json(out)


def cmd_zeckendorf(a):
    from .experiments import GOLDEN, records_csv, zeckendorf_experiment

    recs = zeckendorf_experiment(parse_range(a.z2), a.max_steps)
    if a.format == "json":
        out = header(_field_spec(GOLDEN), "zeckendorf")
        out["records"] = [r.to_json() for r in recs]
        return dump_json(out)
    return records_csv(recs)


def _job_argv(job):
    if not isinstance(job, dict) or "command" not in job:
        raise ConfigError("each job needs a 'command'")
    argv = [job["command"]]
    for key, value in job.items():
        if key == "command":
            continue
        flag = "--" + key.replace("_", "-")
        if value is True:
            argv.append(flag)
        elif value is False or value is None:
            continue
        elif isinstance(value, list):
            argv.append(f"{flag}=" + ",".join(str(v) for v in value))
        else:
            argv.append(f"{flag}={value}")
    return argv


def _run_job(argv):
    try:
        if argv[0] == "batch":
            raise ConfigError("batch jobs cannot nest")
        args = build_parser().parse_args(argv)
        text = args.handler(args)
        if getattr(args, "out", None) not in (None, "-"):
            write_output(text, args.out)
            return {"exit": 0, "out": args.out}
        try:
            return {"exit": 0, "result": json.loads(text)}
        except json.JSONDecodeError:
            return {"exit": 0, "text": text}
    except SrsError as exc:
        return {"exit": 2, "error": exc.to_json()}
    except SystemExit as exc:
        return {"exit": 2, "error": {"error": "ParseError", "message": f"bad arguments (status {exc.code})"}}
    except Exception as exc:  # reported, not raised: one job must not sink the batch
        return {"exit": 1, "error": {"error": type(exc).__name__, "message": str(exc)}}


def cmd_batch(a):
    try:
        with open(a.config, encoding="utf-8") as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    jobs = config.get("jobs", [])
    if not isinstance(jobs, list):
        raise ConfigError("'jobs' must be a list")
    argvs = [_job_argv(j) for j in jobs]
    workers = int(os.environ.get("SRS_JOBS", config.get("parallelism", a.jobs)))
    if workers < 1:
        raise ConfigError("parallelism must be positive")
    if workers > 1 and len(argvs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_job, argvs))
    else:
        results = [_run_job(v) for v in argvs]
    report = header("Q", "batch")
    report["jobs"] = [{"index": i, "command": argv[0], **res} for i, (argv, res) in enumerate(zip(argvs, results))]
    if a.out is None and config.get("output"):
        a.out = config["output"]
    return dump_json(report)


# parser


def build_parser():
    p = argparse.ArgumentParser(prog="srs", description="Shift radix systems with exact arithmetic.")
    p.add_argument("--version", action="version", version=f"srs {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(handler=handler)
        sp.add_argument("--out", default=None, help="output file (default: stdout)")
        return sp

    def field_arg(sp):
        sp.add_argument("--field", default=None, help='number field, "poly=[c0,...];root=(lo,hi)"')

    sp = add("orbit", cmd_orbit, "iterate tau_r from z")
    field_arg(sp)
    sp.add_argument("--r", required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--max-steps", type=int, default=100_000)
    sp.add_argument("--symmetric", action="store_true")
    sp.add_argument("--escape-norm", default=None)

    sp = add("decide", cmd_decide, "decide the finiteness property")
    field_arg(sp)
    sp.add_argument("--r", required=True)
    sp.add_argument("--max-witness", type=int, default=200_000)

    sp = add("decide-p", cmd_decide_p, "cycle-sum test for p-th roots of unity")
    field_arg(sp)
    sp.add_argument("--r", required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--max-witness", type=int, default=200_000)

    sp = add("region", cmd_region, "describe the finiteness region inside a rational hull")
    sp.add_argument("--hull", required=True, help='vertices "x0,x1;y0,y1;..."')
    sp.add_argument("--max-witness", type=int, default=200_000)
    sp.add_argument("--max-cycles", type=int, default=10_000)
    sp.add_argument("--depth", type=int, default=10)
    sp.add_argument("--jobs", type=int, default=1)

    sp = add("schur-cohn", cmd_schur_cohn, "exact Schur-Cohn membership")
    field_arg(sp)
    sp.add_argument("--r", required=True)

    sp = add("odot", cmd_odot, "parameter with characteristic polynomial chi_r chi_s")
    field_arg(sp)
    sp.add_argument("--r", required=True)
    sp.add_argument("--s", required=True)

    sp = add("boundary-param", cmd_boundary_param, "points of the d = 3 boundary surfaces")
    field_arg(sp)
    sp.add_argument("--surface", required=True, choices=["E1", "Eminus1", "EC"])
    sp.add_argument("--s", required=True)
    sp.add_argument("--t", required=True)

    sp = add("beta", cmd_beta, "beta-expansions and property (F)")
    sp.add_argument("--minpoly", required=True)
    sp.add_argument("--root", required=True)
    sp.add_argument("--gamma", default=None)
    sp.add_argument("--digits", type=int, default=20)
    sp.add_argument("--property-f", action="store_true")
    sp.add_argument("--max-witness", type=int, default=200_000)

    sp = add("cns", cmd_cns, "canonical number systems")
    sp.add_argument("--poly", required=True, help="coefficients p0,p1,...,pd")
    sp.add_argument("--element", default=None)
    sp.add_argument("--decide", action="store_true")
    sp.add_argument("--max-steps", type=int, default=10_000)
    sp.add_argument("--max-witness", type=int, default=200_000)

    sp = add("tile", cmd_tile, "tile point clouds")
    field_arg(sp)
    sp.add_argument("--r", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--format", choices=["json", "csv", "svg"], default="json")
    sp.add_argument("--interval", action="store_true", help="d = 1 endpoint enclosures")
    sp.add_argument("--max-points", type=int, default=1_000_000)

    sp = add("tile-transport", cmd_tile_transport, "beta-tile or self-affine tile images of SRS tiles")
    sp.add_argument("--mode", choices=["beta", "cns"], required=True)
    sp.add_argument("--minpoly", default=None)
    sp.add_argument("--root", default=None)
    sp.add_argument("--poly", default=None)
    sp.add_argument("--x", required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--precision", type=int, default=53)
    sp.add_argument("--format", choices=["json", "csv", "svg"], default="csv")
    sp.add_argument("--max-points", type=int, default=1_000_000)

    sp = add("salem-scan", cmd_salem_scan, "orbit of (1,0,0) for Salem quartics")
    sp.add_argument("--b1", required=True, help="range a..b or list")
    sp.add_argument("--b2", default=None)
    sp.add_argument("--max-steps", type=int, default=100_000)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--keep-skipped", action="store_true")

    sp = add("heatmap", cmd_heatmap, "orbit of (1,0,0) over the surface E_C")
    sp.add_argument("--s-steps", type=int, default=100)
    sp.add_argument("--t-steps", type=int, default=50)
    sp.add_argument("--t-lo", default="0")
    sp.add_argument("--t-hi", default="1")
    sp.add_argument("--cap", type=int, default=1_000_000)

    sp = add("rotation", cmd_rotation, "discretized rotation tau_(1, lambda)")
    field_arg(sp)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--z", required=True)
    sp.add_argument("--max-steps", type=int, default=1_000_000)

    sp = add("zeckendorf", cmd_zeckendorf, "orbits of (0,0,z2) for (1, phi^2, phi^2)")
    sp.add_argument("--z2", required=True)
    sp.add_argument("--max-steps", type=int, default=1_000_000)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")

    sp = add("batch", cmd_batch, "run a JSON job file")
    sp.add_argument("config")
    sp.add_argument("--jobs", type=int, default=1)
    return p


_VALUE_START = re.compile(r"^-[\d.\[/]")


def normalize_argv(argv):
    """Glue values that start with '-' (like -2/3) to their option as --opt=value."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok.startswith("--") and "=" not in tok and i + 1 < len(argv) and _VALUE_START.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(normalize_argv(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = args.handler(args)
        write_output(text, args.out)
        return 0
    except SrsError as exc:
        sys.stderr.write(json.dumps(exc.to_json(), default=str) + "\n")
        return 2
    except Exception as exc:
        sys.stderr.write(json.dumps({"error": "InternalError", "type": type(exc).__name__, "message": str(exc)}) + "\n")
        if os.environ.get("SRS_DEBUG"):
            traceback.print_exc()
        return 1


def main():
    sys.exit(run())
