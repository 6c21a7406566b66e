"""Command-line driver: dimension tables, verification suites, tensor decomposition.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from .curvature import higa_split, kahler_spaces, model_space
from .germs import GermError
from .polyparse import PolynomialSyntaxError
from .report import jsonable
from .space import PseudoHermitianSpace, StructureKind, all_configurations, tensor_inner_product
from .suites import M4_ONLY, SUITES, dimension_table, dims_summary
from .tensor import Tensor
from .twoforms import decompose_two_tensor

FORMATS = ("json", "md", "csv")


class UsageError(Exception):
    pass


def resolve_space(kind: str, sig: str | None, m: int) -> PseudoHermitianSpace:
    if m % 2 or m < 4:
        raise UsageError("even dimension required (m >= 4)")
    try:
        k = StructureKind.parse(kind)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        signs = tuple(int(s) for s in sig.split(",")) if sig else (1,) * (m // 2)
    except ValueError as exc:
        raise UsageError(f"bad --sig {sig!r}: expected comma-separated +-1") from exc
    if len(signs) != m // 2:
        raise UsageError(f"--sig needs {m // 2} entries for m = {m}")
    try:
        candidates = all_configurations(m)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    for sp in candidates:
        if sp.kind is k and tuple(sp.pair_signs) == signs:
            return sp
    admitted = ", ".join(sp.label() for sp in candidates)
    raise UsageError(f"configuration {k.value} {signs} is not admitted; choose one of: {admitted}")


# -- dims --------------------------------------------------------------------------------


def render_dims(space: PseudoHermitianSpace, dims: dict, mode: str, fmt: str) -> str:
    summary = dims_summary(space, dims)
    if fmt == "json":
        return json.dumps({"config": space.config(), "rank_mode": mode, "dims": dims,
                           "summary": summary}, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["space", "dim"])
        for k, v in dims.items():
            w.writerow([k, v])
        w.writerow(["summary", summary])
        return buf.getvalue()
    lines = [f"## dimensions: {space.label()} ({mode})", "", "| space | dim |", "|---|---|"]
    lines += [f"| {k} | {v} |" for k, v in dims.items()]
    lines += ["", summary]
    return "\n".join(lines) + "\n"


def cmd_dims(args) -> tuple[str, int]:
    space = resolve_space(args.kind, args.sig, args.m)
    dims = dimension_table(space, args.rank_mode)
    return render_dims(space, dims, args.rank_mode, args.format), 0


# -- verify -------------------------------------------------------------------------------


def cmd_verify(args) -> tuple[str, int]:
    space = resolve_space(args.kind, args.sig, args.m)
    which = args.suite
    if which in M4_ONLY and space.m != 4:
        raise UsageError(f"suite {which} is defined for m = 4 only")
    kwargs: dict = {}
    if which in ("thm15", "thm25", "thm31"):
        kwargs["seed"] = args.seed
        if args.samples is not None:
            kwargs["samples"] = args.samples
    if which in ("lemma41", "thm31"):
        kwargs["order"] = args.degree
    if which == "lemma41" and args.f is not None:
        kwargs["f"] = args.f
    if args.f is not None and which != "lemma41":
        raise UsageError("--f only applies to the lemma41 suite")
    try:
        report = SUITES[which](space, **kwargs)
    except (PolynomialSyntaxError, GermError) as exc:
        raise UsageError(str(exc)) from exc
    return report.render(args.format), 0 if report.passed else 1


# -- decompose -----------------------------------------------------------------------------


def _share(space, part: Tensor, total_norm) -> str | None:
    if not total_norm:
        return None
    return jsonable(Fraction(tensor_inner_product(space, part, part)) / total_norm)


def decompose_tensor(space: PseudoHermitianSpace, t: Tensor) -> dict:
    """Projections of a rank-2 or rank-4 tensor onto the constructed subspaces."""
    norm = tensor_inner_product(space, t, t)
    parts: dict[str, Tensor] = {}
    if t.rank == 2:
        parts.update(decompose_two_tensor(space, t).parts())
    else:
        W = model_space(space, "W")
        in_w = W.project(t)
        parts["outside_W"] = t - in_w
        r_part, l_part = higa_split(space, in_w)
        parts["R"] = r_part
        parts["L"] = l_part
        if space.m == 4:
            _, KW, KR = kahler_spaces(space)
            kw = KW.project(t)
            kr = KR.project(t)
            parts["K_R"] = kr
            parts["K_W minus K_R"] = kw - kr
            parts["W minus K_W"] = in_w - kw
    total = None
    for name, p in parts.items():
        if name in ("K_R", "K_W minus K_R", "W minus K_W"):
            continue
        total = p if total is None else total + p
    return {
        "config": space.config(),
        "input": {"rank": t.rank, "dim": t.dim, "norm": jsonable(norm)},
        "components": {name: {"tensor": p.to_record(), "share": _share(space, p, norm),
                              "zero": p.is_zero()} for name, p in parts.items()},
        "resolution_residual_zero": (t - total).is_zero(),
    }


def render_decomposition(result: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result, indent=2) + "\n"
    rows = [(name, c["share"], c["zero"]) for name, c in result["components"].items()]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["component", "share", "zero"])
        w.writerows(rows)
        return buf.getvalue()
    lines = [f"## decomposition of a rank-{result['input']['rank']} tensor", "",
             "| component | share | zero |", "|---|---|---|"]
    lines += [f"| {n} | {s} | {z} |" for n, s, z in rows]
    lines += ["", f"resolution of identity exact: {result['resolution_residual_zero']}"]
    return "\n".join(lines) + "\n"


def cmd_decompose(args) -> tuple[str, int]:
    space = resolve_space(args.kind, args.sig, args.m)
    try:
        text = Path(args.input).read_text()
        t = Tensor.from_json(text)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from exc
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"cannot parse tensor: {exc}") from exc
    if t.rank not in (2, 4):
        raise UsageError(f"decompose expects a rank-2 or rank-4 tensor, got rank {t.rank}")
    if t.dim != space.m:
        raise UsageError(f"tensor dimension {t.dim} does not match m = {space.m}")
    result = decompose_tensor(space, t)
    return render_decomposition(result, args.format), 0 if result["resolution_residual_zero"] else 1


# -- entry point ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kind", default="complex", help="complex or para")
    common.add_argument("--sig", default=None, help="pair signs, e.g. 1,-1")
    common.add_argument("--m", type=int, default=4, help="dimension (4 or 6)")
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="kahlerweyl", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dims", parents=[common], help="dimension table of the model spaces")
    d.add_argument("--rank-mode", choices=("exact", "modular"), default="exact")

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--degree", type=int, default=4, help="jet order D (>= 4)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int, default=None)
    v.add_argument("--f", default=None, help="polynomial f(x1, x3) for the lemma41 suite")
    v.add_argument("--rank-mode", choices=("exact", "modular"), default="exact")

    c = sub.add_parser("decompose", parents=[common], help="decompose a tensor from a JSON file")
    c.add_argument("--input", required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "degree", 4) < 4:
            raise UsageError("--degree must be >= 4")
        if getattr(args, "samples", None) is not None and args.samples < 1:
            raise UsageError("--samples must be >= 1")
        handler = {"dims": cmd_dims, "verify": cmd_verify, "decompose": cmd_decompose}[args.command]
        text, code = handler(args)
    except UsageError as exc:
        parser.exit(2, f"{parser.prog}: error: {exc}\n")
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
