"""Command-line interface.

Every numeric flag goes through the library's own validation. Output is one
``key value [unit]`` line per result (or a JSON object with ``--format
json``); floats use a fixed number of significant digits so repeated runs
are byte-identical.

Exit status: 0 on success, 1 on usage errors, 2 on domain or convergence
errors (diagnostic on stderr).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import erl_metrics as em
from . import quantum_limits as ql
from . import survey
from . import zeropoint as zp
from .units import CODATA2018, DimensionError, in_hbar

PROG = "energyres"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


class _Out:
    """Collects (key, value, unit) rows and renders them."""

    def __init__(self, args):
        self.rows = []
        self.precision = args.precision
        self.si = args.si
        self.fmt = args.format

    def add(self, key, value, unit=""):
        self.rows.append((key, value, unit))

    def action(self, key, joule_seconds):
        if self.si:
            self.add(key, joule_seconds, "J*s")
        else:
            self.add(key, joule_seconds / CODATA2018.hbar, "hbar")

    def _text(self, v):
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, float):
            return f"{v:.{self.precision}g}"
        return str(v)

    def render(self) -> str:
        if self.fmt == "json":
            obj = {}
            for key, value, unit in self.rows:
                obj[key] = {"value": value, "unit": unit} if unit else value
            return json.dumps(obj, indent=2, sort_keys=True) + "\n"
        return "".join(
            f"{key} {self._text(value)}{' ' + unit if unit else ''}\n"
            for key, value, unit in self.rows
        )


# -- subcommands ------------------------------------------------------------

def _cmd_er(args, out):
    geo = args.geometry
    if geo == "volumetric":
        g = em.Volumetric(_need(args, "volume"))
    elif geo == "planar":
        g = em.Planar(_need(args, "area"))
    elif geo == "point":
        g = em.Point(_need(args, "standoff"))
    elif geo == "linear":
        g = em.Linear(_need(args, "length"))
    else:
        g = em.SquidLoop(_need(args, "inductance"), args.area)

    given = [n for n in ("sb", "sb_asd", "sphi", "smu", "db") if getattr(args, n) is not None]
    if len(given) != 1:
        raise UsageError("er: give exactly one of --sb, --sb-asd, --sphi, --smu, --db")
    kind = given[0]
    if kind == "sb":
        s = em.FieldPsd(args.sb)
    elif kind == "sb_asd":
        s = em.FieldPsd(args.sb_asd ** 2)
    elif kind == "sphi":
        s = em.FluxPsd(args.sphi)
    elif kind == "smu":
        distance = args.distance if args.distance is not None else getattr(g, "standoff", None)
        if distance is None:
            raise UsageError("er: --smu needs --distance")
        s = em.MomentPsd(args.smu, distance)
    else:
        s = em.FieldRms(args.db, _need(args, "duration"))

    if isinstance(g, em.SquidLoop) and g.area is None:
        if not isinstance(s, em.FluxPsd):
            raise UsageError("er: a squid geometry without --area needs --sphi")
        er = em.er_squid(s.s_phi, g.inductance)
        out.add("er_squid_J_s", er.value, "J*s")
        out.add("er_squid_over_hbar", in_hbar(er))
        return

    rec = survey.SensorRecord("cli", "", g, s)
    rep = survey.evaluate_record(rec)
    out.add("l", rep.l, "m")
    out.add("dB_sqrtT", rep.db_sqrt_t, "T*s^0.5")
    out.add("er_J_s", rep.er_over_hbar * CODATA2018.hbar, "J*s")
    out.add("er_over_hbar", rep.er_over_hbar)
    out.add("alpha_threshold", args.alpha * 1.0, "hbar")
    out.add("below_threshold", rep.er_over_hbar < args.alpha)
    if isinstance(g, em.SquidLoop):
        out.add("er_squid_over_hbar", in_hbar(em.er_squid(s.s_phi, g.inductance)))


def _need(args, name):
    v = getattr(args, name)
    if v is None:
        raise UsageError(f"{args.command}: --{name.replace('_', '-')} is required for this geometry")
    return v


def _cmd_limits(args, out):
    which = args.which
    if args.list or which is None:
        if which is not None:
            raise UsageError("limits: --list takes no limit name")
        for b in ql.bound_table():
            out.action(b.bound_name, b.value.value)
        return
    if which == "tc":
        out.action("tc", ql.tc_limit().value)
    elif which == "nvd":
        out.action("nvd", ql.nvd_limit(args.alpha).value)
    elif which == "opm":
        if args.params is None:
            raise UsageError("limits opm: --params FILE is required")
        p = ql.load_species(args.params)
        out.add("label", p.label)
        out.action("opm_serf", ql.opm_serf_limit(p).value)
        if args.volume is not None:
            floor = ql.opm_serf_sb_floor(p, args.volume).value
            out.add("sb_floor", floor, "T^2/Hz")
            out.add("sb_floor_asd", math.sqrt(floor), "T/Hz^0.5")


def _cmd_spn_msi(args, out):
    cfg = ql.SpnMsiConfig(args.gamma)
    b = ql.spn_msi_bound(cfg)
    out.action("bound", b.bound.value)
    out.add("x_opt", b.x_opt.value, "s/m^3")
    out.add("C", cfg.C, "T*s")
    out.add("D", cfg.D, "T*m^3")
    if args.x is not None:
        out.action("er_x", ql.spn_msi_er(args.x, cfg).value)


def _cmd_ml(args, out):
    b = ql.ml_min_field(args.volume, args.time)
    out.add("b_min", b.value, "T")
    out.action("er_form_constant", b.value ** 2 * args.volume * args.time / (2 * CODATA2018.mu0))
    if args.b0 is not None:
        out.add("db_min", ql.ml_perturbative_min(args.b0, args.volume, args.time).value, "T")


def _cmd_bb(args, out):
    b = ql.bb_min_field(args.radius)
    out.add("b_min", b.value, "T")
    out.add("t_m", args.radius / CODATA2018.c, "s")
    if args.beta is not None:
        out.add("increment_over_b_min", ql.bb_resolvable_increment(args.beta, args.prefactor))


def _weighting(spec: str, r_s: float) -> zp.RadialWeighting:
    if spec == "parabolic":
        return zp.Parabolic(r_s)
    if spec == "tophat":
        return zp.TopHat(r_s)
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"zeropoint: weighting must be parabolic, tophat or a JSON file, got {spec!r}")
    data = json.loads(path.read_text(encoding="utf-8"))
    try:
        return zp.Sampled.from_shape(data["u"], data["shape"], r_s)
    except KeyError as exc:
        raise ValueError(f"weighting file lacks {exc.args[0]!r}") from None


def _cmd_zeropoint(args, out):
    w = _weighting(args.weighting, args.rs)
    v = zp.convergence_check(w)
    i_q = zp.quantum_shape_integral(w, workers=args.workers)
    i_t = zp.thermal_shape_integral(w, workers=args.workers)
    var = zp.field_variance(w, args.tb, workers=args.workers)
    er = zp.er_zeropoint(w, args.tb, workers=args.workers)
    out.add("weighting", w.name)
    out.add("tail_exponent", v.tail_exponent_estimate)
    out.add("converges_quantum", v.converges_quantum)
    out.add("converges_thermal", v.converges_thermal)
    out.add("I_Q", i_q)
    out.add("I_T", i_t)
    out.add("variance_quantum", var.quantum.value, "T^2")
    out.add("variance_thermal", var.thermal.value, "T^2")
    out.action("er_quantum", er.quantum.value)
    out.action("er_thermal", er.thermal.value)
    out.action("er_total", er.total.value)


def _cmd_survey(args, out):
    loaded = survey.load_dataset(args.input, fmt=args.in_format)
    reports, eval_errors = survey.evaluate_dataset(loaded.records)
    for e in list(loaded.errors) + list(eval_errors):
        print(f"row {e.row} ({e.name}): {e.message}", file=sys.stderr)
    fmt = args.report_format
    if fmt is None:
        suffix = Path(args.out).suffix.lower().lstrip(".") if args.out not in (None, "-") else ""
        fmt = suffix if suffix in ("csv", "json", "svg") else "csv"
    doc = survey.emit_report(reports, fmt)
    if args.out in (None, "-"):
        sys.stdout.write(doc)
        return
    Path(args.out).write_text(doc, encoding="utf-8")
    out.add("records", len(loaded.records) + len(loaded.errors))
    out.add("evaluated", len(reports))
    out.add("rejected", len(loaded.errors) + len(eval_errors))
    out.add("below_hbar", sum(r.below_hbar for r in reports))
    out.add("report", args.out)


# -- parser -----------------------------------------------------------------

def _precision(text):
    n = int(text)
    if not 1 <= n <= 15:
        raise argparse.ArgumentTypeError("precision must be between 1 and 15")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--precision", type=_precision, default=7, help="significant digits (1-15)")
    common.add_argument("--si", action="store_true", help="print actions in J*s instead of hbar")
    common.add_argument("--stamp", action="store_true", help="append a UTC timestamp")

    p = _Parser(prog=PROG, description="Energy resolution per bandwidth of magnetic sensors and its quantum limits.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    er = sub.add_parser("er", parents=[common], help="energy resolution of one sensor")
    er.add_argument("--geometry", required=True, choices=("point", "linear", "planar", "volumetric", "squid"))
    er.add_argument("--volume", type=float, help="m^3")
    er.add_argument("--area", type=float, help="m^2")
    er.add_argument("--standoff", type=float, help="m")
    er.add_argument("--length", type=float, help="m")
    er.add_argument("--inductance", type=float, help="H")
    er.add_argument("--sb", type=float, help="field PSD S_B(0), T^2/Hz")
    er.add_argument("--sb-asd", type=float, help="field ASD, T/Hz^0.5")
    er.add_argument("--sphi", type=float, help="flux PSD, Wb^2/Hz")
    er.add_argument("--smu", type=float, help="moment PSD, (J/T)^2/Hz")
    er.add_argument("--distance", type=float, help="source distance for --smu, m")
    er.add_argument("--db", type=float, help="rms field error, T")
    er.add_argument("--duration", type=float, help="measurement duration for --db, s")
    er.add_argument("--alpha", type=float, default=1.0, help="threshold in hbar (default 1)")
    er.set_defaults(func=_cmd_er)

    lim = sub.add_parser("limits", parents=[common], help="known and candidate limits")
    lim.add_argument("which", nargs="?", choices=("tc", "nvd", "opm"))
    lim.add_argument("--list", action="store_true", help="table of all limit constants")
    lim.add_argument("--params", help="species JSON file for opm")
    lim.add_argument("--volume", type=float, help="cell volume for the opm S_B floor, m^3")
    lim.add_argument("--alpha", type=float, default=0.5, help="nvd factor (default 0.5)")
    lim.set_defaults(func=_cmd_limits)

    spn = sub.add_parser("spn-msi", parents=[common], help="projection noise + self-interaction bound")
    spn.add_argument("--gamma", type=float, required=True, help="gyromagnetic ratio, 1/(T s)")
    spn.add_argument("--x", type=float, help="T <dJ_y^2> / V, s/m^3")
    spn.set_defaults(func=_cmd_spn_msi)

    ml = sub.add_parser("ml", parents=[common], help="Margolus-Levitin minimum fields")
    ml.add_argument("--volume", type=float, required=True, help="m^3")
    ml.add_argument("--time", type=float, required=True, help="s")
    ml.add_argument("--b0", type=float, help="bias field for the perturbative form, T")
    ml.set_defaults(func=_cmd_ml)

    bb = sub.add_parser("bb", parents=[common], help="Bremermann-Bekenstein minimum fields")
    bb.add_argument("--radius", type=float, required=True, help="m")
    bb.add_argument("--beta", type=float, help="rms field in units of B_min (>= 1)")
    bb.add_argument("--prefactor", type=float, default=1.0)
    bb.set_defaults(func=_cmd_bb)

    z = sub.add_parser("zeropoint", parents=[common], help="zero-point and thermal field noise")
    z.add_argument("--weighting", required=True, help="parabolic, tophat, or JSON file {u, shape}")
    z.add_argument("--rs", type=float, required=True, help="region radius, m")
    z.add_argument("--tb", type=float, default=0.0, help="field temperature, K")
    z.add_argument("--workers", type=int, default=1, help="quadrature threads")
    z.set_defaults(func=_cmd_zeropoint)

    s = sub.add_parser("survey", parents=[common], help="evaluate a sensor dataset")
    s.add_argument("--in", dest="input", required=True, help="JSON/CSV dataset, or - for stdin")
    s.add_argument("--in-format", choices=("json", "csv"))
    s.add_argument("--out", help="report file (.csv, .json, .svg) or - for stdout")
    s.add_argument("--report-format", choices=("csv", "json", "svg"))
    s.set_defaults(func=_cmd_survey)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        out = _Out(args)
        args.func(args, out)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except zp.NonConvergentIntegral as exc:
        print(f"{PROG}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, DimensionError, ArithmeticError, OSError) as exc:
        print(f"{PROG}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.stamp:
        out.add("generated", datetime.now(timezone.utc).isoformat(timespec="seconds"))
    sys.stdout.write(out.render())
    return 0


if __name__ == "__main__":
    sys.exit(main())
