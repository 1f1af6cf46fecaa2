"""Command-line interface.

Exit codes: 0 success, 2 malformed input, 3 numerical failure
(non-convergence, step collapse, resolution failure, ...), 4 search
budget exceeded.
"""

import argparse
import json
import sys

from .config import DEFAULT
from .errors import BudgetExceeded, CurveBraidError, InputError
from .geometry import (
    branch_points,
    bplus_csv,
    bplus_svg,
    region_decomposition,
    trace_bplus,
)
from . import braid as braid_mod
from . import groups as groups_mod
from .pipeline import CurveSpec, StageError, analyze, auto_window, report_json


def _parse_targets(text):
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok.upper().startswith("S"):
            tok = tok[1:]
        try:
            out.append(int(tok))
        except ValueError:
            raise InputError(f"bad homomorphism target {tok!r}") from None
    if not out:
        raise InputError("no homomorphism targets given")
    return tuple(out)


def _load_spec(args):
    cfg = DEFAULT.with_overrides(
        root_residual=args.tol_root,
        cluster=args.tol_cluster,
        grid_step=args.grid_step,
        hom_budget=args.hom_budget,
    )
    spec = CurveSpec.load(args.curve, cfg)
    if getattr(args, "targets", None):
        spec.targets = _parse_targets(args.targets)
    return spec


def _emit(text, out):
    if out and out != "-":
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _need_loop(spec):
    if spec.loop is None:
        raise InputError("this command needs a loop in the curve spec")


def cmd_analyze(args):
    spec = _load_spec(args)
    report, _, _ = analyze(spec)
    _emit(report_json(report), args.out)


def cmd_branch_points(args):
    spec = _load_spec(args)
    branch = branch_points(spec.f, spec.cfg)
    rows = [
        {"re": b.real, "im": b.imag, "simple": bool(s)}
        for b, s in zip(branch.points, branch.simple)
    ]
    _emit(json.dumps(rows, indent=2) + "\n", args.out)


def cmd_bplus(args):
    spec = _load_spec(args)
    branch = branch_points(spec.f, spec.cfg)
    window = auto_window(spec, branch)
    bplus = trace_bplus(spec.f, window, spec.cfg, branch=branch)
    rmap = None
    if args.svg and spec.loop is not None:
        rmap = region_decomposition(bplus, spec.loop, f=spec.f, cfg=spec.cfg)
    if args.svg:
        _emit(bplus_svg(bplus, spec.loop, rmap), args.svg)
    if args.csv:
        _emit(bplus_csv(bplus), args.csv)
    if not args.svg and not args.csv:
        _emit(bplus_csv(bplus), args.out)


def cmd_braid(args):
    spec = _load_spec(args)
    _need_loop(spec)
    word = braid_mod.braid_along_loop(spec.f, spec.loop, spec.cfg)
    out = {
        "strands": word.strands,
        "word": word.to_text(),
        "exponent_sum": braid_mod.exponent_sum(word),
        "closure_components": braid_mod.closure_components(word),
    }
    _emit(json.dumps(out, indent=2) + "\n", args.out)


def cmd_surface(args):
    spec = _load_spec(args)
    _need_loop(spec)
    branch = branch_points(spec.f, spec.cfg)
    chi, components = braid_mod.surface_invariants(
        spec.f, spec.loop, branch, spec.cfg
    )
    out = {
        "chi": chi,
        "components": components,
        "is_disc": chi == 1 and components == 1,
    }
    _emit(json.dumps(out, indent=2) + "\n", args.out)


def _presentations(spec):
    branch = branch_points(spec.f, spec.cfg)
    window = auto_window(spec, branch)
    bplus = trace_bplus(spec.f, window, spec.cfg, branch=branch)
    rmap = region_decomposition(bplus, spec.loop, f=spec.f, cfg=spec.cfg)
    pres = groups_mod.build_presentation(rmap, spec.f.wdeg)
    return pres, groups_mod.tietze_simplify(pres)


def cmd_presentation(args):
    spec = _load_spec(args)
    _need_loop(spec)
    pres, simp = _presentations(spec)
    out = {
        "raw": json.loads(pres.to_json()),
        "simplified": json.loads(simp.to_json()),
        "abelianization": dict(
            zip(("free_rank", "torsion"), groups_mod.abelianization(simp))
        ),
    }
    _emit(json.dumps(out, indent=2) + "\n", args.out)


def cmd_homs(args):
    spec = _load_spec(args)
    _need_loop(spec)
    _, simp = _presentations(spec)
    out = {}
    for m in spec.targets:
        total, surj, witness = groups_mod.count_homs(simp, m, cfg=spec.cfg)
        out[f"S{m}"] = {
            "total": total,
            "surjective": surj,
            "witness": [list(w) for w in witness] if witness else None,
        }
    _emit(json.dumps(out, indent=2) + "\n", args.out)


def cmd_alexander(args):
    spec = _load_spec(args)
    _need_loop(spec)
    word = braid_mod.braid_along_loop(spec.f, spec.loop, spec.cfg)
    delta = braid_mod.alexander_from_braid(word)
    lo, hi = delta.degree_span()
    out = {
        "braid": word.to_text(),
        "coeffs": [delta.coeffs.get(e, 0) for e in range(lo, hi + 1)],
        "text": repr(delta),
    }
    _emit(json.dumps(out, indent=2) + "\n", args.out)


def build_parser():
    p = argparse.ArgumentParser(
        prog="curvebraid",
        description="Braid monodromy and knottedness certificates for "
        "plane-curve pieces over a disc.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("curve", help="curve spec JSON file")
        sp.add_argument("--tol-root", type=float, default=None,
                        help="root residual tolerance")
        sp.add_argument("--tol-cluster", type=float, default=None,
                        help="root clustering tolerance")
        sp.add_argument("--grid-step", type=float, default=None,
                        help="coincidence-graph tracing grid step")
        sp.add_argument("--hom-budget", type=int, default=None,
                        help="homomorphism search node budget")
        sp.add_argument("--targets", "--target", default=None,
                        help="symmetric-group targets, e.g. 'S3,S4'")
        sp.add_argument("--out", default=None, help="output file (default stdout)")

    sp = sub.add_parser("analyze", help="run the full pipeline")
    common(sp)
    sp.set_defaults(fn=cmd_analyze)

    sp = sub.add_parser("branch-points", help="fiber degeneration points")
    common(sp)
    sp.set_defaults(fn=cmd_branch_points)

    sp = sub.add_parser("bplus", help="trace the real-part coincidence graph")
    common(sp)
    sp.add_argument("--svg", default=None, help="write an SVG rendering here")
    sp.add_argument("--csv", default=None, help="write arc points as CSV here")
    sp.set_defaults(fn=cmd_bplus)

    sp = sub.add_parser("braid", help="boundary braid word along the loop")
    common(sp)
    sp.set_defaults(fn=cmd_braid)

    sp = sub.add_parser("surface", help="Euler characteristic / components "
                        "of the curve piece")
    common(sp)
    sp.set_defaults(fn=cmd_surface)

    sp = sub.add_parser("presentation", help="fundamental group presentation")
    common(sp)
    sp.set_defaults(fn=cmd_presentation)

    sp = sub.add_parser("homs", help="count homomorphisms into S_m")
    common(sp)
    sp.set_defaults(fn=cmd_homs)

    sp = sub.add_parser("alexander", help="Alexander polynomial of the "
                        "boundary knot")
    common(sp)
    sp.set_defaults(fn=cmd_alexander)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.fn(args)
    except CurveBraidError as e:
        inner = e.err if isinstance(e, StageError) else e
        sys.stderr.write(f"error [{e.code}]: {e}\n")
        if isinstance(inner, InputError):
            return 2
        if isinstance(inner, BudgetExceeded):
            return 4
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
