"""Command line interface: ``toricsym <command> [options]``.

Every report is a JSON object carrying ``schema_version``; errors are
reported as ``{"error": {...}}`` with exit status 2 for malformed input,
3 for violated preconditions (e.g. an incomplete fan) and 1 otherwise.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import tempfile
from typing import Optional, Sequence

from .coxring import PresentationKind, cox_presentation
from .exceptions import InputError, PreconditionError
from .fan import Fan, build_exact_sequence, select_sigma1, validate_fan
from .hypertoric import HypertoricProblem, hypertoric_report
from .lattice import as_int_matrix
from .library import example_names, get_example
from .tensors import GeneratorReport, generator_report, graded_dims
from .validation import check_fan, check_rational_vector, dumps

SCHEMA_VERSION = "1.0"
CACHE_ENV = "TORICSYM_CACHE_DIR"

log = logging.getLogger("toricsym")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--fan", metavar="PATH", help="fan JSON file")
    src.add_argument("--example", metavar="NAME", help="built-in fan (see the examples command)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--cache-dir", metavar="PATH", default=None, help=f"generator cache (default ${CACHE_ENV})")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="toricsym", description="Symmetric tensors of smooth complete toric varieties")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("validate", parents=[common], help="check smoothness and completeness")

    c = sub.add_parser("cox", parents=[common], help="print a graded presentation")
    c.add_argument("--presentation", default="R", choices=("R", "Rprime", "Rtilde", "RtildePrime", "both"))

    d = sub.add_parser("dims", parents=[common], help="graded dimensions of S(X)")
    d.add_argument("--p-max", type=int, default=3)
    d.add_argument("--presentation", default="both", choices=("R", "Rprime", "both"))

    g = sub.add_parser("generators", parents=[common], help="minimal invariant generators")
    g.add_argument("--degree-bound", type=int, default=2)
    g.add_argument("--presentation", default="Rprime", choices=("R", "Rprime", "both"))

    a = sub.add_parser("agree", parents=[common], help="compare both presentations")
    a.add_argument("--p-max", type=int, default=3)

    h = sub.add_parser("hypertoric", parents=[common], help="unimodularity, walls and central fiber")
    h.add_argument("--theta", required=True, metavar="CSV")
    h.add_argument("--xi", default=None, metavar="CSV")
    h.add_argument("--weights", default=None, metavar="ROWS",
                   help="weight matrix A as 'a,b,c;d,e,f' (must be compatible with the fan)")
    h.add_argument("--degree-bound", type=int, default=2)

    e = sub.add_parser("examples", parents=[common], help="list or print built-in fans")
    e.add_argument("name", nargs="?", default=None)
    return p


# --------------------------------------------------------------------------
# helpers


def _load_fan(args) -> Fan:
    if args.example:
        return get_example(args.example)
    if not args.fan:
        raise InputError("one of --fan or --example is required")
    if not os.path.isfile(args.fan):
        raise InputError(f"fan file not found: {args.fan}")
    try:
        return check_fan(args.fan)
    except json.JSONDecodeError as exc:
        raise InputError(f"fan file is not valid JSON: {exc}") from None


def _kinds(choice: str) -> list[PresentationKind]:
    if choice == "both":
        return [PresentationKind.R, PresentationKind.Rprime]
    return [PresentationKind.parse(choice)]


def _cache_dir(args) -> Optional[str]:
    return args.cache_dir or os.environ.get(CACHE_ENV) or None


def _cache_key(f: Fan, degree_bound: int, kind: PresentationKind) -> str:
    payload = json.dumps(
        {"rays": f.rays, "max_cones": f.max_cones, "degree_bound": degree_bound,
         "presentation": kind.value, "schema_version": SCHEMA_VERSION},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _cached_generators(f: Fan, degree_bound: int, kind: PresentationKind, cache: Optional[str]) -> dict:
    path = None
    if cache:
        path = os.path.join(cache, f"generators-{_cache_key(f, degree_bound, kind)}.json")
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
            GeneratorReport.from_dict(data)
            log.debug("cache hit %s", path)
            return data
        except (OSError, ValueError, KeyError, TypeError):
            pass
    esd = build_exact_sequence(f)
    data = generator_report(esd, select_sigma1(f), degree_bound, kind, f=f).to_dict()
    if path:
        os.makedirs(cache, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=cache, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(data, fh, sort_keys=True)
        os.replace(tmp, path)
    return data


def _parse_weights(text: str):
    try:
        rows = [[int(x) for x in r.split(",") if x.strip()] for r in text.split(";") if r.strip()]
    except ValueError as exc:
        raise InputError(f"--weights: {exc}") from None
    return as_int_matrix(rows)


# --------------------------------------------------------------------------
# commands


def cmd_validate(args):
    f = _load_fan(args)
    rep = validate_fan(f)
    out = {"fan": f.name, "passed": rep.passed, **rep.to_dict()}
    return out, 0 if rep.passed else 1


def cmd_cox(args):
    f = _load_fan(args)
    kinds = ([PresentationKind.R, PresentationKind.Rprime] if args.presentation == "both"
             else [PresentationKind.parse(args.presentation)])
    esd = build_exact_sequence(f)
    p = select_sigma1(f)
    pres = {k.value: cox_presentation(f, p, k, esd=esd) for k in kinds}
    out = {"fan": f.name, "A": esd.A.tolist(), "presentations": {k: v.to_dict() for k, v in pres.items()}}
    out["_text"] = "\n\n".join(v.to_text() for v in pres.values())
    return out, 0


def cmd_dims(args):
    if args.p_max < 0:
        raise InputError("--p-max must be nonnegative")
    f = _load_fan(args)
    esd = build_exact_sequence(f)
    p = select_sigma1(f)
    table = {k.value: graded_dims(f, k, args.p_max, esd=esd, pairing=p).to_dict() for k in _kinds(args.presentation)}
    out = {"fan": f.name, "p_max": args.p_max, "dims": table}
    if len(table) == 2:
        out["agree"] = table["R"]["dims"] == table["Rprime"]["dims"]
    return out, 0


def cmd_generators(args):
    if args.degree_bound < 1:
        raise InputError("--degree-bound must be at least 1")
    f = _load_fan(args)
    cache = _cache_dir(args)
    reports = {k.value: _cached_generators(f, args.degree_bound, k, cache) for k in _kinds(args.presentation)}
    out = {"fan": f.name, "reports": reports}
    short = [k for k, r in reports.items() if not r["certified_complete"]]
    if short:
        out["warning"] = (
            f"generator list for {', '.join(short)} may be truncated: completeness needs "
            f"degree bound {max(reports[k]['certificate_bound'] for k in short)}"
        )
    return out, 0


def cmd_agree(args):
    if args.p_max < 0:
        raise InputError("--p-max must be nonnegative")
    f = _load_fan(args)
    esd = build_exact_sequence(f)
    p = select_sigma1(f)
    r = graded_dims(f, "R", args.p_max, esd=esd, pairing=p)
    rp = graded_dims(f, "Rprime", args.p_max, esd=esd, pairing=p)
    return {"fan": f.name, "p_max": args.p_max, "agree": r.dims == rp.dims,
            "dims": {"R": list(r.dims), "Rprime": list(rp.dims)}}, 0


def cmd_hypertoric(args):
    f = _load_fan(args)
    esd = build_exact_sequence(f)
    A = esd.A
    if args.weights:
        A = _parse_weights(args.weights)
        if A.shape != esd.A.shape or A.dot(esd.B).any():
            raise InputError("--weights must be an (N-n) x N matrix annihilating the rays of the fan")
    r = A.shape[0]
    theta = check_rational_vector(args.theta, r, "--theta")
    xi = check_rational_vector(args.xi, r, "--xi") if args.xi else None
    h = HypertoricProblem(A, theta, xi)
    rep = hypertoric_report(h, args.degree_bound).to_dict()
    rep["fan"] = f.name
    rep["A"] = A.tolist()
    rep["n_components"] = len(rep["components"])
    return rep, 0


def cmd_examples(args):
    if args.name:
        f = get_example(args.name)
        return {"name": args.name, "fan": f.to_dict()}, 0
    return {"examples": {n: {"dim": get_example(n).dim, "n_rays": get_example(n).n_rays} for n in example_names()}}, 0


COMMANDS = {
    "validate": cmd_validate,
    "cox": cmd_cox,
    "dims": cmd_dims,
    "generators": cmd_generators,
    "agree": cmd_agree,
    "hypertoric": cmd_hypertoric,
    "examples": cmd_examples,
}


def _render_text(out: dict) -> str:
    if "_text" in out:
        return out["_text"] + "\n"
    lines = []

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}.{k}" if prefix else k, obj[k])
        else:
            lines.append(f"{prefix}: {json.dumps(obj)}")

    walk("", out)
    return "\n".join(lines) + "\n"


def _emit(out: dict, fmt: str, stream) -> None:
    if fmt == "text":
        stream.write(_render_text(out))
    else:
        out = {k: v for k, v in out.items() if k != "_text"}
        stream.write(dumps(out))


def _error(kind: str, message: str, status: int, stream) -> int:
    stream.write(dumps({"schema_version": SCHEMA_VERSION, "error": {"type": kind, "message": message}}))
    return status


def main(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        return _error("usage", str(exc), 2, stdout)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        out, status = COMMANDS[args.command](args)
    except InputError as exc:
        return _error("input", str(exc), 2, stdout)
    except PreconditionError as exc:
        return _error("precondition", str(exc), 3, stdout)
    except Exception as exc:  # report, never a bare traceback
        log.debug("internal error", exc_info=True)
        return _error("internal", f"{type(exc).__name__}: {exc}", 1, stdout)
    out = {"schema_version": SCHEMA_VERSION, "command": args.command, **out}
    _emit(out, args.format, stdout)
    return status


if __name__ == "__main__":
    sys.exit(main())
