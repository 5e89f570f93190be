"""Command-line driver: ``feec-weights {dims,certify,cond,interp,cells}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import random
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from .barypoly import BaryPoint
from .forms import random_form, space_dim
from .geometry import (UNIT_TRIANGLE, CellConstructionError, CellularComplexError, DofComplex, GammaSet,
                       Triangle, build_complex, principal_lattice)
from .interp import DEFAULT_NORM_DENSITY, check_commuting, convergence_experiment, verify_all
from .linalg import cond2
from .svg import DRAWING_TRIANGLE, cells_svg
from .weights import DEFAULT_QUAD_ORDER, vandermonde

log = logging.getLogger("feec_weights")

# basis per column of the conditioning table
TABLE_BASES = {0: "cartesian", 1: "barycentric", 2: "cartesian"}


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def parse_range(text: str) -> list[int]:
    """``"4"`` or ``"2..6"`` (inclusive)."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"malformed range {text!r}; expected N or A..B") from None
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def parse_triangle(text: str) -> Triangle:
    """Three ``x,y`` pairs separated by blanks, each coordinate ``p/q``."""
    parts = text.split()
    if len(parts) != 3:
        raise UsageError("a triangle needs three vertices 'x,y x,y x,y'")
    verts = []
    for p in parts:
        xy = p.split(",")
        if len(xy) != 2:
            raise UsageError(f"malformed vertex {p!r}")
        verts.append(tuple(parse_rational(v) for v in xy))
    try:
        return Triangle(tuple(verts))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def read_gamma_file(path: str, r: int) -> GammaSet:
    """One barycentric point ``l0,l1,l2`` per line; blank lines and ``#`` comments ignored."""
    pts = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        coords = [parse_rational(v) for v in line.replace(" ", "").split(",")]
        if len(coords) != 3:
            raise UsageError(f"gamma point {line!r} needs three barycentric coordinates")
        try:
            pts.append(BaryPoint(tuple(coords)))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return GammaSet(tuple(pts), r)


def seed() -> int:
    return int(os.environ.get("FEEC_WEIGHTS_SEED", "0"))


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def table_text(header: list[str], rows: list[list], kind: str) -> str:
    if kind == "json":
        return json.dumps([dict(zip(header, (_jsonable(v) for v in row))) for row in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, Fraction):
        return fmt(v)
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def emit(args, name: str, header: list[str], rows: list[list]) -> None:
    kind = args.format if args.format in ("csv", "json") else "csv"
    text = table_text(header, rows, kind)
    sys.stdout.write(table_text(header, rows, "csv") if kind == "csv" else text)
    if args.out:
        write_atomic(Path(args.out) / f"{name}.{kind}", text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _complex(args, r: int) -> DofComplex:
    gamma = read_gamma_file(args.gamma_file, r) if args.gamma_file else None
    return build_complex(args.triangle, r, gamma)


def cmd_dims(args) -> int:
    rows, ok = [], True
    for r in args.r:
        if r < 2:
            raise UsageError("cell commands need r >= 2")
        try:
            counts = _complex(args, r).counts
        except (CellularComplexError, CellConstructionError) as exc:
            log.error("r=%d: %s", r, exc)
            rows.append([r, None, None, None] + [space_dim(r, k) for k in range(3)])
            ok = False
            continue
        dims = tuple(space_dim(r, k) for k in range(3))
        ok &= counts == dims
        rows.append([r, *counts, *dims])
    emit(args, "dims", ["r", "F0", "F1", "F2", "dim0", "dim1", "dim2"], rows)
    return 0 if ok else 1


def cmd_certify(args) -> int:
    ok = True
    rng = random.Random(seed())
    for r in args.r:
        if r < 2:
            raise UsageError("cell commands need r >= 2")
        gamma = read_gamma_file(args.gamma_file, r) if args.gamma_file else None
        if gamma is not None and gamma.problems():
            log.warning("r=%d: gamma file: %s", r, "; ".join(gamma.problems()))
        cx = None
        if args.drop_edge is not None:
            try:
                cx = build_complex(args.triangle, r, gamma)
            except (CellularComplexError, CellConstructionError):
                pass
            else:
                if not 0 <= args.drop_edge < len(cx.F1):
                    raise UsageError(f"--drop-edge must lie in 0..{len(cx.F1) - 1}")
                cx = cx.without_edge(args.drop_edge)
        rep = verify_all(r, args.triangle, gamma, cx)
        report = rep.to_dict()
        if rep.ok and args.commuting:
            cx = cx or build_complex(args.triangle, r, gamma)
            report["commuting_checks"] = args.commuting
            report["commuting"] = all(check_commuting(random_form(r, 0, rng, args.triangle), r, cx)
                                      for _ in range(args.commuting))
        r_ok = rep.ok and report.get("commuting", True)
        ok &= r_ok
        print(f"r={r}: ranks={list(rep.ranks)} dims={list(rep.dims)} {'ok' if r_ok else 'FAILED'}")
        for e in rep.errors + rep.cellular_problems:
            print(f"  {e}")
        if args.out:
            text = json.dumps(report, indent=1, default=_jsonable) + "\n"
            write_atomic(Path(args.out) / f"certify_r{r}.json", text)
    return 0 if ok else 1


def _vertex_complex(tri: Triangle) -> DofComplex:
    # degree 1: only the vertex weights exist
    return DofComplex(tri, 1, tuple(principal_lattice(tri, 1)), (), ())


def table_condition(d: int, k: int, tri: Triangle, basis_kind: str) -> float:
    """cond2 of the Vandermonde matrix of ``P_d Lambda^k`` (cells of the degree-(d+k) sequence)."""
    r = d + k
    cx = _vertex_complex(tri) if r == 1 else build_complex(tri, r)
    return vandermonde(cx, r, k, basis_kind).cond2()


def cmd_cond(args) -> int:
    if args.self_test:
        print(repr(cond2(np.eye(3))))
        return 0
    r_max = max(args.r)
    kinds = {"table": TABLE_BASES}.get(args.basis, {k: args.basis for k in range(3)})
    ks = [args.k] if args.k is not None else [0, 1, 2]
    rows = []
    for d in args.r:
        if d < 1:
            raise UsageError("degrees start at 1")
        row = [d]
        for k in range(3):
            row.append(table_condition(d, k, args.triangle, kinds[k]) if k in ks and d + k <= r_max else None)
        rows.append(row)
    name = "conditioning" if args.basis == "table" else f"conditioning_{args.basis}"
    emit(args, name, ["r", "k0", "k1", "k2"], rows)
    return 0


def cmd_interp(args) -> int:
    rows = convergence_experiment(args.r_max, tri=args.triangle, m=args.norm_density, order=args.quad_order)
    long = [[row.r, row.k, row.residual_norm, row.norm_reference] for row in rows]
    emit(args, "convergence", ["r", "k", "residual_norm", "norm_reference"], long)
    if args.out:
        out = Path(args.out)
        kind = args.format if args.format in ("csv", "json") else "csv"
        by = {(row.r, row.k): row.residual_norm for row in rows}
        wide = [[r, by.get((r, 0)), by.get((r, 1))] for r in range(1, args.r_max + 1)]
        write_atomic(out / f"convergence_wide.{kind}", table_text(["r", "k0", "k1"], wide, kind))
        for k in (0, 1):
            pts = [[row.r, math.log10(row.residual_norm)] for row in rows if row.k == k and row.residual_norm > 0]
            write_atomic(out / f"plot_k{k}.{kind}", table_text(["r", "log10_residual"], pts, kind))
    return 0


def cmd_cells(args) -> int:
    tri = args.triangle if args.triangle_given else DRAWING_TRIANGLE
    ok = True
    for r in args.r:
        if r < 2:
            raise UsageError("cell commands need r >= 2")
        try:
            cx = _complex(args, r) if args.gamma_file else build_complex(tri, r)
        except (CellularComplexError, CellConstructionError) as exc:
            log.error("r=%d: %s", r, exc)
            ok = False
            continue
        if args.format == "svg" or not args.format:
            text = cells_svg(cx)
            name = f"cells_r{r}.svg"
        else:
            cells = [{"anchor": str(c.anchor), "polygon": [str(p) for p in c.polygon],
                      "area_fraction": fmt(c.area_fraction)} for c in cx.F2]
            text = json.dumps({"r": r, "cells": cells}, indent=1) + "\n"
            name = f"cells_r{r}.json"
        if args.out:
            write_atomic(Path(args.out) / name, text)
        print(f"r={r}: {len(cx.F2)} cells" + (f" -> {name}" if args.out else ""))
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="feec-weights", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", default="2..6", help="degree or inclusive range A..B")
    common.add_argument("--r-max", type=int, default=6)
    common.add_argument("--k", type=int, choices=(0, 1, 2))
    common.add_argument("--triangle", help='vertices "x,y x,y x,y" as p/q rationals')
    common.add_argument("--gamma-file")
    common.add_argument("--quad-order", type=int, default=DEFAULT_QUAD_ORDER)
    common.add_argument("--norm-density", type=int, default=DEFAULT_NORM_DENSITY)
    common.add_argument("--out", help="output directory (created if missing)")
    common.add_argument("--format", choices=("csv", "json", "svg"))
    common.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("dims", parents=[common], help="cell counts against space dimensions")
    c = sub.add_parser("certify", parents=[common], help="full verification report per degree")
    c.add_argument("--commuting", type=int, default=5, metavar="N",
                   help="random 0-forms for the commuting-diagram check (seeded by FEEC_WEIGHTS_SEED)")
    c.add_argument("--drop-edge", type=int, metavar="J", help="remove the J-th 1-cell (negative control)")
    c = sub.add_parser("cond", parents=[common], help="conditioning table")
    c.add_argument("--self-test", action="store_true", help="print cond2 of the identity")
    c.add_argument("--basis", choices=("table", "barycentric", "cartesian"), default="table")
    sub.add_parser("interp", parents=[common], help="interpolation convergence experiment")
    sub.add_parser("cells", parents=[common], help="cell diagrams")
    return p


COMMANDS = {"dims": cmd_dims, "certify": cmd_certify, "cond": cmd_cond, "interp": cmd_interp, "cells": cmd_cells}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "cond" and args.r == "2..6":
            args.r = "1..6"
        args.r = parse_range(args.r)
        args.triangle_given = args.triangle is not None
        args.triangle = parse_triangle(args.triangle) if args.triangle else UNIT_TRIANGLE
        if args.quad_order < 1 or args.norm_density < 1:
            raise UsageError("--quad-order and --norm-density must be positive")
        if args.command == "interp" and not 1 <= args.r_max <= 6:
            raise UsageError("--r-max must lie in 1..6")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"feec-weights: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"feec-weights: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
