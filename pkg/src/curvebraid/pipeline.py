"""End-to-end orchestration: curve spec -> analysis report.

Stages: branch points -> B+ graph -> region decomposition -> boundary
braid + invariants -> meridian presentation -> abelianization and
homomorphism certificates -> verdict.  Every intermediate artifact is
embedded in the report so external tools can re-verify the claim.
"""

import json
from dataclasses import dataclass

from . import braid as braid_mod
from . import groups as groups_mod
from .config import DEFAULT, Tolerances
from .errors import CurveBraidError, InputError
from .geometry import branch_points, region_decomposition, trace_bplus
from .poly import BivariatePoly
from .tracking import PlanePath

SCHEMA_VERSION = 1


@dataclass
class CurveSpec:
    f: BivariatePoly
    loop: PlanePath
    window: tuple
    cfg: Tolerances
    name: str = ""
    targets: tuple = (3,)

    @classmethod
    def from_dict(cls, data, cfg: Tolerances = None):
        if data.get("schema") != SCHEMA_VERSION:
            raise InputError(
                f"unsupported schema {data.get('schema')!r}, expected "
                f"{SCHEMA_VERSION}"
            )
        try:
            terms = [
                (int(t["zdeg"]), int(t["wdeg"]),
                 complex(float(t.get("re", 0.0)), float(t.get("im", 0.0))))
                for t in data["terms"]
            ]
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"bad terms: {e}") from None
        f = BivariatePoly.from_term_list(terms)
        if f.wdeg < 1:
            raise InputError("curve must have w-degree >= 1")
        loop_spec = data.get("loop")
        loop = None
        if loop_spec:
            if "vertices" in loop_spec:
                verts = [complex(x, y) for x, y in loop_spec["vertices"]]
                loop = PlanePath(verts, closed=True)
            elif "circle" in loop_spec:
                c = loop_spec["circle"]
                loop = PlanePath.circle(
                    complex(*c["center"]), float(c["radius"]),
                    int(c.get("samples", 128)), float(c.get("phase", 0.0)),
                )
            else:
                raise InputError("loop needs 'vertices' or 'circle'")
        window = data.get("window")
        tol = dict(data.get("tolerances", {}))
        base = cfg or DEFAULT
        cfg = base.with_overrides(
            root_residual=tol.get("root_residual"),
            cluster=tol.get("cluster"),
            coincidence=tol.get("coincidence"),
            grid_step=tol.get("grid_step"),
            hom_budget=tol.get("hom_budget"),
        )
        return cls(
            f=f,
            loop=loop,
            window=tuple(window) if window else None,
            cfg=cfg,
            name=data.get("name", ""),
            targets=tuple(data.get("targets", (3,))),
        )

    @classmethod
    def load(cls, path, cfg=None):
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise InputError(f"cannot read curve spec {path}: {e}") from None
        return cls.from_dict(data, cfg)


class StageError(CurveBraidError):
    def __init__(self, stage, err):
        super().__init__(f"stage {stage}: {err}")
        self.stage = stage
        self.err = err
        self.code = getattr(err, "code", "error")


def _fmt(x):
    return float(f"{float(x):.12g}")


def _cpt(z):
    return [_fmt(z.real), _fmt(z.imag)]


def auto_window(spec: CurveSpec, branch):
    if spec.window:
        return spec.window
    pts = list(branch.as_array())
    if spec.loop is not None:
        pts.extend(spec.loop.vertices)
    if not pts:
        return (-1.0, 1.0, -1.0, 1.0)
    xs = [p.real for p in pts]
    ys = [p.imag for p in pts]
    pad = 0.25 * max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    return (min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad)


def paper_ordering(rmap):
    """Region order U_1..U_k along the edge chain, when the region
    adjacency graph is a path with the positive edge direction running
    from one end to the other; falls back to the deterministic order."""
    k = len(rmap.regions)
    interior = [e for e in rmap.edges if not e.terminal]
    adj = {i: set() for i in range(k)}
    for e in interior:
        adj[e.from_region].add(e.to_region)
        adj[e.to_region].add(e.from_region)
    ends = [i for i in range(k) if len(adj[i]) == 1]
    if len(ends) != 2 or any(len(v) > 2 for v in adj.values()):
        return list(range(k))
    forward = {e.from_region: e.to_region for e in interior}
    for start in sorted(ends):
        order = [start]
        while order[-1] in forward:
            nxt = forward[order[-1]]
            if nxt in order:
                break
            order.append(nxt)
        if len(order) == k:
            return order
    return list(range(k))


def run_stage(report, stage, fn):
    try:
        return fn()
    except CurveBraidError as e:
        raise StageError(stage, e) from e


def analyze(spec: CurveSpec):
    """Run the full pipeline; returns the analysis report as a dict."""
    f = spec.f
    cfg = spec.cfg
    n = f.wdeg
    report = {
        "schema": SCHEMA_VERSION,
        "name": spec.name,
        "curve": {
            "wdegree": n,
            "terms": [
                {"zdeg": zd, "wdeg": wd, "re": _fmt(c.real), "im": _fmt(c.imag)}
                for (zd, wd), c in sorted(f.terms.items())
            ],
        },
    }

    branch = run_stage(report, "branch-points", lambda: branch_points(f, cfg))
    report["branch_points"] = [
        {"z": _cpt(b), "simple": bool(s)}
        for b, s in zip(branch.points, branch.simple)
    ]

    window = auto_window(spec, branch)
    report["window"] = [_fmt(x) for x in window]
    bplus = run_stage(
        report, "bplus",
        lambda: trace_bplus(f, window, cfg, branch=branch),
    )
    report["bplus"] = {
        "arc_count": len(bplus.arcs),
        "grid_step": _fmt(cfg.grid_step),
        "arcs": [
            {
                "label": a.label,
                "start": _cpt(a.points[0]),
                "end": _cpt(a.points[-1]),
                "points": len(a.points),
                "from_branch": _cpt(a.start_branch)
                if a.start_branch is not None else None,
            }
            for a in bplus.arcs
        ],
    }

    if spec.loop is None:
        report["verdict"] = "inconclusive"
        report["notes"] = ["no loop supplied: stopped after B+ tracing"]
        return report, bplus, None

    rmap = run_stage(
        report, "regions",
        lambda: region_decomposition(bplus, spec.loop, f=f, cfg=cfg),
    )
    order = paper_ordering(rmap)
    report["regions"] = {
        "count": len(rmap.regions),
        "edge_count": len(rmap.edges),
        "terminal_count": len(rmap.branch_terminals),
        "representative_points": [_cpt(p) for p in rmap.rep_points],
        "edges": [
            {"label": e.label, "from": e.from_region, "to": e.to_region,
             "terminal": e.terminal}
            for e in rmap.edges
        ],
        "terminals": [
            {"branch": _cpt(b), "region": r, "label": lab}
            for b, r, lab in rmap.branch_terminals
        ],
        "paper_order": order,
    }

    word = run_stage(
        report, "braid", lambda: braid_mod.braid_along_loop(f, spec.loop, cfg)
    )
    chi, components = run_stage(
        report, "surface",
        lambda: braid_mod.surface_invariants(f, spec.loop, branch, cfg),
    )
    enclosed = n - chi
    closure = braid_mod.closure_components(word)
    braid_rep = {
        "strands": n,
        "word": word.to_text(),
        "length": len(word),
        "exponent_sum": braid_mod.exponent_sum(word),
        "closure_components": closure,
        "enclosed_branch_points": enclosed,
        "chi": chi,
        "surface_components": components,
        "is_disc": chi == 1 and components == 1,
    }
    if closure == 1:
        alex = run_stage(
            report, "alexander", lambda: braid_mod.alexander_from_braid(word)
        )
        span = alex.degree_span()
        braid_rep["alexander"] = {
            "coeffs": [alex.coeffs.get(e, 0) for e in range(span[0], span[1] + 1)],
            "text": repr(alex),
        }
    report["braid"] = braid_rep

    pres = run_stage(
        report, "presentation",
        lambda: groups_mod.build_presentation(rmap, n),
    )
    simp = groups_mod.tietze_simplify(pres)
    rank, torsion = groups_mod.abelianization(simp)

    # human-readable relation list in the renamed region order
    pos = {r: i for i, r in enumerate(order)}
    names = [f"a{i}{pos[j] + 1}" for (i, j) in pres.generators]
    report["presentation"] = {
        "raw": json.loads(pres.to_json()),
        "raw_pretty": pres.pretty(names),
        "generator_count": len(pres.generators),
        "relator_count": len(pres.relators),
        "simplified": json.loads(simp.to_json()),
        "simplified_generator_count": len(simp.generators),
    }
    report["abelianization"] = {"free_rank": rank, "torsion": torsion}

    homs = {}
    cert = None
    for m in spec.targets:
        total, surj, witness = run_stage(
            report, "homs", lambda m=m: groups_mod.count_homs(simp, m, cfg=cfg)
        )
        homs[f"S{m}"] = {"total": total, "surjective": surj}
        if surj > 0 and cert is None:
            cert = (m, witness)
    report["hom_counts"] = homs
    if cert is not None:
        m, witness = cert
        ident = tuple(range(m))
        images = {}
        for g in pres.generators:
            img = groups_mod._eval_word(simp.origin_words[g], list(witness), ident)
            i, j = g
            images[f"a{i}{pos[j] + 1}"] = list(img)
        report["certificate"] = {
            "certified": True,
            "target": f"S{m}",
            "witness_on_simplified": [list(w) for w in witness],
            "witness_on_meridians": images,
        }
    else:
        report["certificate"] = {"certified": False}

    is_disc = braid_rep["is_disc"]
    notes = []
    if not is_disc:
        notes.append("not a disc")
    report["consistency"] = {
        "chi_equals_strands_minus_bands": chi == n - enclosed,
        "knot_iff_H1_is_Z": (closure == 1)
        == (rank == 1 and not torsion and is_disc)
        if is_disc else True,
    }
    report["verdict"] = (
        "knotted-certified" if (is_disc and cert is not None) else "inconclusive"
    )
    report["notes"] = notes
    return report, bplus, rmap


def report_json(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
