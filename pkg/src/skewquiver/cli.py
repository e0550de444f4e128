"""Command-line front end; every subcommand emits one JSON report.

Report layout: {"command", "field", "seed", "results": [...], "failures": [...]}.
Exit status is 0 when ``failures`` is empty, 1 otherwise, and the error
class's code when an operation raises.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import List, Optional, Tuple

from . import backend
from .errors import DomainError, ParseError, SkewQuiverError
from .exactfield import FieldSpec
from .kronecker import verify_kronecker_classification
from .quiverrep import (
    QuiverAutomorphism,
    Representation,
    child_seed,
    krull_schmidt,
    load_quiver,
    make_rng,
    minimal_period,
    twist,
)
from .smash import (
    SmashModule,
    classify_induced,
    identify,
    induce_canonical,
    induce_from_path_algebra,
    induce_from_subgroup,
    smash_krull_schmidt,
    validate,
)


def parse_field(text: str) -> FieldSpec:
    """``p``, ``p,e`` or ``p,e,c0,c1,...`` (modulus coefficients, little-endian)."""
    try:
        parts = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"bad --field {text!r}") from None
    if not parts:
        raise ParseError("empty --field")
    p, e = parts[0], parts[1] if len(parts) > 1 else 1
    modulus = tuple(parts[2:]) or None
    try:
        return FieldSpec(p, e, modulus)
    except DomainError as exc:
        raise ParseError(f"bad --field {text!r}: {exc}") from None


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def default_quiver_file() -> dict:
    return json.loads(resources.files("skewquiver").joinpath("data/a3_quiver.json").read_text())


def _sigma_for(obj: dict, args) -> QuiverAutomorphism:
    if "quiver" in obj:
        return load_quiver(obj["quiver"])[1]
    if args.quiver:
        return load_quiver(_read_json(args.quiver))[1]
    return load_quiver(default_quiver_file())[1]


def _load_module(path: str, args) -> Tuple[QuiverAutomorphism, object]:
    """Representation or SmashModule from a file (quiver embedded, --quiver, or A3)."""
    obj = _read_json(path)
    sigma = _sigma_for(obj, args)
    if "sigma" in obj:
        M = SmashModule.from_json(sigma, obj, args.field)
        args.used_field = args.used_field or M.field
        return sigma, M
    if "dims" in obj:
        X = Representation.from_json(sigma.quiver, obj, args.field)
        args.used_field = args.used_field or X.field
        return sigma, X
    raise ParseError(f"{path}: neither a representation nor a smash module")


def _rep_only(path: str, args) -> Tuple[QuiverAutomorphism, Representation]:
    sigma, X = _load_module(path, args)
    if not isinstance(X, Representation):
        raise ParseError(f"{path}: expected a representation file")
    return sigma, X


def _smash_json(M: SmashModule) -> dict:
    out = M.to_json()
    out["violations"] = validate(M)
    return out


# --------------------------------------------------------------- commands
def cmd_validate(args) -> Tuple[list, list]:
    results, failures = [], []
    for path in args.paths:
        row = {"path": path}
        try:
            obj = _read_json(path)
            if "vertices" in obj:
                q, sigma = load_quiver(obj)
                row.update(kind="quiver", order=sigma.n, violations=[])
            else:
                sigma, X = _load_module(path, args)
                if isinstance(X, SmashModule):
                    row.update(kind="smash", violations=validate(X))
                else:
                    row.update(kind="representation", violations=[])
        except SkewQuiverError as exc:
            row.update(kind="unparsed", violations=[str(exc)])
        row["ok"] = not row["violations"]
        results.append(row)
        if not row["ok"]:
            failures.append({"path": path, "violations": row["violations"]})
    return results, failures


def cmd_twist(args):
    sigma, X = _rep_only(args.rep, args)
    return [{"j": args.j, "representation": twist(X, sigma, args.j).to_json()}], []


def cmd_period(args):
    sigma, X = _rep_only(args.rep, args)
    return [{"m": minimal_period(X, sigma, args.seed), "n": sigma.n}], []


def cmd_decompose(args):
    sigma, X = _load_module(args.module, args)
    if isinstance(X, SmashModule):
        parts = smash_krull_schmidt(X, args.seed)
        return [{"summand": _smash_json(s), "certificate": c.to_json()} for s, c in parts], []
    parts = krull_schmidt(X, args.seed)
    return [{"summand": s.to_json(), "certificate": c.to_json()} for s, c in parts], []


def cmd_induce(args):
    sigma, X = _load_module(args.module, args)
    rng = make_rng(args.seed)
    if args.mode == "subgroup":
        if isinstance(X, Representation):
            d = args.d or minimal_period(X, sigma, child_seed(rng))
            X = induce_canonical(X, sigma, d, child_seed(rng))
        M = induce_from_subgroup(X, args.target)
    else:
        if not isinstance(X, Representation):
            raise ParseError(f"mode {args.mode} needs a representation file")
        if args.mode == "canonical":
            d = args.d or minimal_period(X, sigma, child_seed(rng))
            M = induce_canonical(X, sigma, d, child_seed(rng))
        else:
            M = induce_from_path_algebra(X, sigma, args.d or 1)
    out = _smash_json(M)
    failures = [{"violations": out["violations"]}] if out["violations"] else []
    return [{"mode": args.mode, "module": out}], failures


def cmd_classify(args):
    sigma, X = _rep_only(args.rep, args)
    rng = make_rng(args.seed)
    m = minimal_period(X, sigma, child_seed(rng))
    mods = classify_induced(X, sigma, child_seed(rng))
    results = [{"index": i, "module": _smash_json(M)} for i, M in enumerate(mods, start=1)]
    failures = [{"index": r["index"], "violations": r["module"]["violations"]} for r in results if r["module"]["violations"]]
    return [{"m": m, "r": sigma.n // m, "classes": len(mods)}] + results, failures


def cmd_identify(args):
    sigma, M = _load_module(args.smash, args)
    if not isinstance(M, SmashModule):
        raise ParseError(f"{args.smash}: expected a smash module file")
    _, X = _rep_only(args.rep, args)
    return [{"index": identify(M, X, args.seed)}], []


def _lambda_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"bad --lambdas {text!r}") from None


def cmd_kronecker(args):
    field = args.field or FieldSpec(101)
    rep = verify_kronecker_classification(args.l_max, _lambda_list(args.lambdas), field, args.seed)
    failures = rep.pop("failures")
    return [rep], failures


COMMANDS = {
    "validate": cmd_validate,
    "twist": cmd_twist,
    "period": cmd_period,
    "decompose": cmd_decompose,
    "induce": cmd_induce,
    "classify": cmd_classify,
    "identify": cmd_identify,
    "kronecker": cmd_kronecker,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=str, default=None, help="p[,e[,modulus coefficients]]")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="print the full JSON report")
    common.add_argument("--out", type=str, default=None, help="write the report to this file")
    common.add_argument("--quiver", type=str, default=None, help="quiver file (default: the A3 example)")

    parser = argparse.ArgumentParser(prog="skewquiver", description=__doc__.splitlines()[0])
    parser.add_argument("--backend", choices=backend.available(), default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common])
    p.add_argument("paths", nargs="+")
    p = sub.add_parser("twist", parents=[common])
    p.add_argument("rep")
    p.add_argument("--j", type=int, default=1)
    p = sub.add_parser("period", parents=[common])
    p.add_argument("rep")
    p = sub.add_parser("decompose", parents=[common])
    p.add_argument("module")
    p = sub.add_parser("induce", parents=[common])
    p.add_argument("module")
    p.add_argument("--mode", choices=("canonical", "subgroup", "path"), default="canonical")
    p.add_argument("--d", type=int, default=None, help="subgroup power (default: period for canonical, 1 for path)")
    p.add_argument("--target", type=int, default=1, help="target subgroup power for mode=subgroup")
    p = sub.add_parser("classify", parents=[common])
    p.add_argument("rep")
    p = sub.add_parser("identify", parents=[common])
    p.add_argument("smash")
    p.add_argument("rep")
    p = sub.add_parser("kronecker", parents=[common])
    p.add_argument("--l-max", type=int, default=3)
    p.add_argument("--lambdas", type=str, default="2,3")
    return parser


def _summary(report: dict) -> str:
    lines = [f"{report['command']}: {len(report['results'])} result(s), {len(report['failures'])} failure(s)"]
    for f in report["failures"]:
        lines.append(f"  FAIL {json.dumps(f, sort_keys=True)}")
    return "\n".join(lines)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.backend:
        backend.use(args.backend)
    args.used_field = None
    raw_field, args.field = args.field, None
    try:
        args.field = parse_field(raw_field) if raw_field else None
        results, failures = COMMANDS[args.command](args)
        code = 1 if failures else 0
    except SkewQuiverError as exc:
        results, failures = [], [{"error": type(exc).__name__, "message": str(exc)}]
        code = exc.exit_code
    report = {
        "command": args.command,
        "field": (args.field or args.used_field or FieldSpec(101)).to_json(),
        "seed": args.seed,
        "results": results,
        "failures": failures,
    }
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    if args.json or not args.out:
        sys.stdout.write(text if args.json else _summary(report) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
