"""Command line front end.

Every subcommand reads a system file, runs one stage of the pipeline and
prints either a plain text table or a single JSON document on stdout.
Diagnostics go to stderr and the exit code encodes the error category.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import IO, Any, Dict, List, Optional, Sequence

from qetale import __version__
from qetale.collins import Region, delineability_probe, parse_region, projection_set, single_poly_strata
from qetale.config import Settings, load_settings, use_settings
from qetale.domains import PolynomialDomain
from qetale.exceptions import PointNotInStratum, PreconditionError, QetaleError, SystemFileError, UsageError
from qetale.exprio import (
    SystemFile,
    format_rational,
    parse_point,
    parse_poly,
    parse_system_file,
    print_poly,
    print_upoly,
    upoly_json,
)
from qetale.logger import get_logger
from qetale.mpoly import MPoly, PolyRing
from qetale.parametric import ExcludedLocus, ParamSystem, QEtaleStratum, Stratum, StratificationReport, stratify
from qetale.ratfun import RatFun
from qetale.realroots import FiberSection, Interval, fiber_at
from qetale.rur import RUR, rur_build
from qetale.subresultant import sres_chain
from qetale.upoly import UPoly
from qetale.zerodim import buchberger

logger = get_logger(__name__)

COMMANDS = ("subres", "rur", "stratify", "fibers", "collins")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _global_flags(parser: argparse.ArgumentParser, default: Any) -> None:
    parser.add_argument("--format", choices=("text", "json"), default=default, help="output format")
    parser.add_argument("--seed", type=int, default=default, help="seed for sample-point probing")
    parser.add_argument("--config", default=default, help="TOML file with a [tool.qetale] table")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qetale", description="Parametric polynomial systems: q-etale strata and real fibers.")
    parser.add_argument("--version", action="version", version=f"qetale {__version__}")
    _global_flags(parser, default=None)
    parser.set_defaults(format="text")
    # the same flags are accepted after the command name
    common = _Parser(add_help=False)
    _global_flags(common, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("subres", parents=[common], help="subresultant chain of the first system polynomial")
    p.add_argument("file")
    p.add_argument("--var", default=None, help="main variable (defaults to the only fiber variable)")
    p.add_argument("--with", dest="other", default=None, help="second polynomial (defaults to the derivative)")

    p = sub.add_parser("rur", parents=[common], help="rational univariate representation of a zero-dimensional fiber")
    p.add_argument("file")
    p.add_argument("--at", default="", help="parameter point, e.g. p=-3,q=2")

    p = sub.add_parser("stratify", parents=[common], help="q-etale stratification of the base")
    p.add_argument("file")
    p.add_argument("--max-depth", type=int, default=None)

    p = sub.add_parser("fibers", parents=[common], help="ordered real fiber sections over a parameter point")
    p.add_argument("file")
    p.add_argument("--at", required=True, help="parameter point, e.g. p=-3,q=2")
    p.add_argument("--width", default=None, help="coordinate enclosure width, e.g. 1/1024")
    p.add_argument("--max-depth", type=int, default=None)

    p = sub.add_parser("collins", parents=[common], help="Collins projection set of the first system polynomial")
    p.add_argument("file")
    p.add_argument("--main-var", default=None)
    p.add_argument("--samples", default=None, help="file with one parameter point per line")
    p.add_argument("--region", default=None, help="conditions such as '4*p^3 + 27*q^2 < 0'")
    return parser


# -- json helpers -------------------------------------------------------------------


def _poly(f: MPoly) -> str:
    return print_poly(f)


def _ratfun(c: RatFun) -> Any:
    if c.den.is_constant():
        return str(c.num)
    return {"numerator": str(c.num), "denominator": str(c.den)}


def _interval(iv: Interval) -> Dict[str, str]:
    return {"lo": format_rational(iv.lo), "hi": format_rational(iv.hi)}


def _point(point: Dict[str, Fraction]) -> Dict[str, str]:
    return {k: format_rational(v) for k, v in point.items()}


def rur_json(rur: RUR) -> Dict[str, Any]:
    return {
        "sigma": _poly(rur.sigma),
        "u": upoly_json(rur.u),
        "g": upoly_json(rur.g),
        "variables": list(rur.variables),
        "numerators": [upoly_json(n) for n in rur.numerators],
    }


def stratum_json(st: Stratum) -> Dict[str, Any]:
    return {
        "equations": [_poly(e) for e in st.equations],
        "nonvanish": _poly(st.nonvanish),
        "rank": st.rank,
        "sigma": None if st.sigma is None else _poly(st.sigma),
        "chi": upoly_json(st.chi),
        "deltas": [_ratfun(d) for d in st.deltas],
        "s": st.s,
        "geo_count": st.geo_count,
        "u": upoly_json(st.u),
        "f": upoly_json(st.f),
        "rur": None if st.rur is None else rur_json(st.rur),
        "depth": st.depth,
        "etale": st.etale,
    }


def report_json(report: StratificationReport) -> Dict[str, Any]:
    index = {id(st): i for i, st in enumerate(report.strata)}

    def merged(q: QEtaleStratum) -> Dict[str, Any]:
        return {
            "equations": [_poly(e) for e in q.equations],
            "nonvanish": _poly(q.nonvanish),
            "geo_count": q.geo_count,
            "charts": [index[id(c)] for c in q.charts],
        }

    def excluded(x: ExcludedLocus) -> Dict[str, Any]:
        return {
            "equations": [_poly(e) for e in x.equations],
            "nonvanish": _poly(x.nonvanish),
            "reason": x.reason,
            "depth": x.depth,
        }

    return {
        "params": list(report.system.params),
        "vars": list(report.system.vars),
        "strata": [stratum_json(st) for st in report.strata],
        "qetale_strata": [merged(q) for q in report.qetale_strata],
        "excluded": [excluded(x) for x in report.excluded],
        "depth": report.depth,
    }


def section_json(section: FiberSection) -> Dict[str, Any]:
    lam: Dict[str, str] = {"lo": format_rational(section.lam.lo), "hi": format_rational(section.lam.hi)}
    if section.lam.root is not None:
        lam["root"] = format_rational(section.lam.root)
    return {
        "index": section.index,
        "lam": lam,
        "coords": {v: _interval(c) for v, c in zip(section.variables, section.coords)},
    }


# -- commands ---------------------------------------------------------------------


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SystemFileError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise SystemFileError(f"{path} is not UTF-8 text: byte {exc.object[exc.start]:#04x} at offset {exc.start}") from exc


def _read_system(path: str) -> SystemFile:
    return parse_system_file(_read_text(path))


def _full_point(sf: SystemFile, text: str) -> Dict[str, Fraction]:
    point = parse_point(text)
    unknown = [k for k in point if k not in sf.params]
    if unknown:
        raise UsageError(f"--at names unknown parameter(s): {', '.join(unknown)}")
    missing = [p for p in sf.params if p not in point]
    if missing:
        raise UsageError(f"--at must assign every parameter; missing {', '.join(missing)}")
    return {p: point[p] for p in sf.params}


def cmd_subres(sf: SystemFile, args: argparse.Namespace) -> Dict[str, Any]:
    var = args.var
    if var is None:
        if len(sf.vars) != 1:
            raise UsageError("--var is required when the system has several fiber variables")
        var = sf.vars[0]
    ring = sf.ring
    if var not in ring.gens:
        raise UsageError(f"unknown variable {var!r}")
    coeff_ring = PolyRing([g for g in ring.gens if g != var])
    dom = PolynomialDomain(coeff_ring)

    def as_upoly(f: MPoly) -> UPoly:
        return UPoly([c.set_ring(coeff_ring) for c in f.to_univariate(var).coeffs], dom)

    f = as_upoly(sf.system[0])
    g = f.derivative() if args.other is None else as_upoly(parse_poly(args.other, ring))
    if g.degree > f.degree:
        f, g = g, f
    if f.degree == g.degree:
        raise PreconditionError("subresultant chain needs polynomials of different degrees")
    chain = sres_chain(f, g)
    return {
        "var": var,
        "f": print_upoly(f, var),
        "g": print_upoly(g, var),
        "polys": [print_upoly(p, var) for p in chain.polys],
        "coeffs": [_poly(c) for c in chain.coeffs],
    }


def cmd_rur(sf: SystemFile, args: argparse.Namespace) -> Dict[str, Any]:
    point = _full_point(sf, args.at)
    var_ring = PolyRing(sf.vars)
    polys = [F.specialize(point).set_ring(var_ring) for F in sf.system]
    rur = rur_build(buchberger(polys, var_ring), polys)
    out = {"point": _point(point)}
    out.update(rur_json(rur))
    return out


def cmd_stratify(sf: SystemFile, args: argparse.Namespace) -> Dict[str, Any]:
    return report_json(stratify(ParamSystem.from_system_file(sf), args.max_depth))


def cmd_fibers(sf: SystemFile, args: argparse.Namespace) -> Dict[str, Any]:
    point = _full_point(sf, args.at)
    report = stratify(ParamSystem.from_system_file(sf), args.max_depth)
    piece = report.locate(point)
    if isinstance(piece, ExcludedLocus):
        raise PointNotInStratum(f"the point lies in an excluded locus ({piece.reason})")
    assert isinstance(piece, Stratum)
    sections = fiber_at(piece, point)
    return {
        "point": _point(point),
        "stratum": report.strata.index(piece),
        "geo_count": piece.geo_count,
        "real_count": len(sections),
        "sections": [section_json(s) for s in sections],
    }


def _read_samples(path: str) -> List[Dict[str, Fraction]]:
    lines = _read_text(path).splitlines()
    points = []
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            points.append(parse_point(line))
    return points


def cmd_collins(sf: SystemFile, args: argparse.Namespace) -> Dict[str, Any]:
    main_var = args.main_var or sf.options.get("main_var")
    if main_var is None:
        if len(sf.vars) != 1:
            raise UsageError("--main-var is required when the system has several fiber variables")
        main_var = sf.vars[0]
    a = sf.system[0]
    if main_var not in a.ring.gens:
        raise UsageError(f"unknown variable {main_var!r}")
    proj = projection_set(a, main_var)
    out: Dict[str, Any] = {
        "main_var": main_var,
        "coefficients": [_poly(c) for c in proj.coefficients],
        "zero_coefficients": list(proj.zero_coefficients),
        "truncations": [print_upoly(b, main_var) for b in proj.truncations],
        "subdiscs": [_poly(c) for c in proj.subdiscs],
        "strata": [
            {
                "index": y.index,
                "equations": [_poly(e) for e in y.equations],
                "nonvanish": _poly(y.nonvanish),
                "degree": y.degree,
                "cylinder": y.cylinder,
                "empty": y.empty,
            }
            for y in single_poly_strata(a, main_var)
        ],
    }
    if args.samples is not None:
        region = Region() if args.region is None else parse_region(args.region, proj.ring)
        report = delineability_probe(a, main_var, region, _read_samples(args.samples), proj)
        out["probe"] = {
            "samples": [_point(p) for p in report.samples],
            "counts": list(report.counts),
            "status": report.status,
            "message": report.message,
        }
    return out


_HANDLERS = {
    "subres": cmd_subres,
    "rur": cmd_rur,
    "stratify": cmd_stratify,
    "fibers": cmd_fibers,
    "collins": cmd_collins,
}


# -- text rendering -------------------------------------------------------------------


def _text_value(value: Any) -> str:
    if isinstance(value, dict) and set(value) == {"numerator", "denominator"}:
        return f"({value['numerator']})/({value['denominator']})"
    if isinstance(value, dict) and {"lo", "hi"} <= set(value):
        return f"[{value['lo']}, {value['hi']}]"
    if isinstance(value, list):
        return "[" + ", ".join(_text_value(v) for v in value) + "]"
    if value is None:
        return "-"
    return str(value)


def render_text(command: str, doc: Dict[str, Any]) -> str:
    lines: List[str] = []
    if command == "stratify":
        for i, st in enumerate(doc["strata"]):
            eqs = ", ".join(st["equations"]) or "-"
            lines.append(
                f"stratum {i}: [{eqs}] and {st['nonvanish']} != 0  rank {st['rank']}  "
                f"geo_count {st['geo_count']}  etale {'yes' if st['etale'] else 'no'}"
            )
            lines.append(f"  u = {_text_value(st['u'])}")
        for j, q in enumerate(doc["qetale_strata"]):
            eqs = ", ".join(q["equations"]) or "-"
            charts = ", ".join(str(c) for c in q["charts"])
            lines.append(f"q-etale stratum {j}: [{eqs}] and {q['nonvanish']} != 0  geo_count {q['geo_count']}  charts {charts}")
        for x in doc["excluded"]:
            eqs = ", ".join(x["equations"]) or "-"
            lines.append(f"excluded: [{eqs}] and {x['nonvanish']} != 0  ({x['reason']})")
        lines.append(f"depth {doc['depth']}")
    elif command == "fibers":
        point = ",".join(f"{k}={v}" for k, v in doc["point"].items())
        lines.append(f"point {point}: stratum {doc['stratum']}, geo_count {doc['geo_count']}, real_count {doc['real_count']}")
        for s in doc["sections"]:
            coords = "  ".join(f"{v} in {_text_value(c)}" for v, c in s["coords"].items())
            lines.append(f"  {s['index']}: lam in {_text_value(s['lam'])}  {coords}")
    else:
        for key, value in doc.items():
            if isinstance(value, list) and value and isinstance(value[0], dict):
                lines.append(f"{key}:")
                for item in value:
                    lines.append("  " + "  ".join(f"{k}={_text_value(v)}" for k, v in item.items()))
            elif isinstance(value, dict) and key == "probe":
                lines.append(f"probe: {value['status']}: {value['message']}")
            else:
                lines.append(f"{key}: {_text_value(value)}")
    return "\n".join(lines) + "\n"


def _settings(args: argparse.Namespace, sf: SystemFile) -> Settings:
    settings = load_settings(args.config)
    known = {k: v for k, v in sf.options.items() if k in Settings.__dataclass_fields__}
    for key in sf.options:
        if key not in known and key != "main_var":
            logger.warning("ignoring unknown option %r", key)
    flags = {"seed": args.seed, "max_depth": getattr(args, "max_depth", None), "width": getattr(args, "width", None)}
    known.update({k: v for k, v in flags.items() if v is not None})
    return settings.with_overrides(**known)


def run(argv: Sequence[str], stdout: Optional[IO[str]] = None, stderr: Optional[IO[str]] = None) -> int:
    """Run one command; returns the exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(list(argv))
        if args.command is None:
            raise UsageError(f"a command is required: {', '.join(COMMANDS)}")
        sf = _read_system(args.file)
        with use_settings(_settings(args, sf)):
            doc = _HANDLERS[args.command](sf, args)
    except QetaleError as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    if args.format == "json":
        stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        stdout.write(render_text(args.command, doc))
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))
