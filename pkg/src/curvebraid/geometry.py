"""Discriminant geometry: branch points, the coincidence graph B+, and
region decompositions of a disc.

B+ (the locus where two fiber roots share a real part) has no polynomial
description, so it is traced numerically: fibers are solved on a grid,
adjacent grid nodes are matched strand-to-strand, and a real-part order
inversion across a grid edge flags a coincidence crossing which is then
refined by bisection.  Crossing points are chained cell-by-cell into arcs
(marching-squares style); arcs snap onto the branch point they emanate
from.

Region decomposition of a disc D is delegated to a planar-arrangement
library: the arcs clipped to D plus the boundary of D are polygonized,
and edge sidedness/orientation is recovered by point location plus a
tracked transversal path (the crossing sign of the tracking module is
the orientation calibration).
"""

import concurrent.futures
from dataclasses import dataclass

import numpy as np
from shapely.geometry import LineString, MultiLineString, Point, Polygon
from shapely.ops import polygonize, unary_union

from .config import DEFAULT, Tolerances, thread_cap
from .errors import NonSquarefree, NonTransversal, ResolutionFailure
from .poly import BivariatePoly, discriminant_w
from .roots import root_clusters, roots_batch, roots_univariate
from .tracking import PlanePath, crossings, fiber_at, track_path


@dataclass
class BranchSet:
    points: list          # complex branch points, sorted by (re, im)
    simple: list          # bool per point: one double root, rest simple

    def as_array(self):
        return np.asarray(self.points, dtype=np.complex128)


def branch_points(f: BivariatePoly, cfg: Tolerances = DEFAULT) -> BranchSet:
    """All z where the fiber degenerates: roots of the w-discriminant.

    Each candidate is verified by solving the fiber and checking for a
    root cluster; clusters of discriminant roots are deduplicated.
    """
    disc = discriminant_w(f)
    if disc.size == 0:
        raise NonSquarefree("discriminant vanishes identically")
    if disc.size == 1:
        return BranchSet([], [])
    raw = roots_univariate(disc, cfg=cfg)
    pts = []
    simple = []
    for center, mult in root_clusters(raw, cluster_tol=1e-6):
        clusters = root_clusters(fiber_at(f, center, cfg), cluster_tol=1e-5)
        sizes = sorted(m for _, m in clusters)
        if sizes == [1] * len(sizes):
            # spurious discriminant root (numerical); skip
            continue
        pts.append(center)
        simple.append(sizes.count(2) == 1 and sizes.count(1) == len(sizes) - 1
                      and mult == 1)
    order = np.lexsort((np.imag(pts), np.real(pts))) if pts else []
    return BranchSet([pts[i] for i in order], [simple[i] for i in order])


@dataclass
class Arc:
    points: np.ndarray        # complex polyline along the coincidence curve
    label: int                # 1-based index of the coinciding sorted pair
    start_branch: object      # complex branch point or None
    end_branch: object        # complex branch point or None


@dataclass
class BPlusGraph:
    arcs: list
    window: tuple             # (xmin, xmax, ymin, ymax)
    branch: BranchSet


def _grid_fibers(f, zs, cfg):
    """Sorted fibers over many z values, optionally split across threads."""
    coeffs = f.coeff_matrix(zs)
    lead = np.abs(coeffs[:, -1])
    if np.any(lead < 1e-12 * max(1.0, float(np.abs(coeffs).max()))):
        raise NonSquarefree("leading w-coefficient vanishes inside the window")
    workers = thread_cap()
    if workers == 1 or zs.size < 4 * workers:
        roots = roots_batch(coeffs, cfg=cfg)
    else:
        chunks = np.array_split(np.arange(zs.size), workers)
        roots = np.empty((zs.size, f.wdeg), dtype=np.complex128)
        with concurrent.futures.ThreadPoolExecutor(workers) as ex:
            futs = {
                ex.submit(roots_batch, coeffs[ch], cfg): ch for ch in chunks
            }
            for fut, ch in futs.items():
                roots[ch] = fut.result()
    order = np.lexsort((roots.imag, roots.real), axis=1)
    return np.take_along_axis(roots, order, axis=1)


def _match(a, b):
    """Nearest-neighbor matching from fiber a to fiber b (both (m, n)).

    Returns (perm (m, n) int, valid (m,) bool): perm[k, i] is the index in
    b matched to strand i of a; valid is False when the match is not a
    bijection.
    """
    d = np.abs(a[:, :, None] - b[:, None, :])
    perm = d.argmin(axis=2)
    valid = (np.sort(perm, axis=1) == np.arange(a.shape[1])[None, :]).all(axis=1)
    return perm, valid


def _refine_edges(f, za, zb, pa_idx, fib_a, cfg, iters=40):
    """Bisect coincidence crossings on segments [za, zb].

    pa_idx: (m, 2) indices into fib_a of the inverted pair.  Returns
    (points (m,) complex, labels (m,) int 1-based sorted-pair index).
    """
    m = za.size
    lo, hi = za.copy(), zb.copy()
    wpair = np.stack([fib_a[np.arange(m), pa_idx[:, 0]],
                      fib_a[np.arange(m), pa_idx[:, 1]]], axis=1)
    d_lo = wpair[:, 0].real - wpair[:, 1].real
    labels = np.zeros(m, dtype=int)
    for it in range(iters):
        mid = 0.5 * (lo + hi)
        fib = _grid_fibers(f, mid, cfg)
        # follow the tracked pair by proximity
        idx0 = np.abs(fib - wpair[:, 0][:, None]).argmin(axis=1)
        idx1 = np.abs(fib - wpair[:, 1][:, None]).argmin(axis=1)
        w0 = fib[np.arange(m), idx0]
        w1 = fib[np.arange(m), idx1]
        d_mid = w0.real - w1.real
        left = np.sign(d_mid) == np.sign(d_lo)
        left |= d_mid == 0.0
        lo = np.where(left, mid, lo)
        hi = np.where(left, hi, mid)
        d_lo = np.where(left, d_mid, d_lo)
        wpair = np.stack([w0, w1], axis=1)
        labels = np.minimum(idx0, idx1) + 1
    return 0.5 * (lo + hi), labels


def trace_bplus(f: BivariatePoly, window, cfg: Tolerances = DEFAULT,
                grid_step=None, branch=None) -> BPlusGraph:
    """Trace the real-part coincidence graph inside a rectangular window."""
    xmin, xmax, ymin, ymax = window
    h = grid_step or cfg.grid_step
    if branch is None:
        branch = branch_points(f, cfg)
    bpts = branch.as_array()

    # jitter the grid so nodes miss symmetry axes of the input
    nx = int(np.floor((xmax - xmin) / h)) + 1
    ny = int(np.floor((ymax - ymin) / h)) + 1
    xs = xmin + 0.0037 * h + h * np.arange(nx)
    ys = ymin + 0.0053 * h + h * np.arange(ny)
    Z = (xs[None, :] + 1j * ys[:, None])  # (ny, nx)
    flat = Z.ravel()
    fibers = _grid_fibers(f, flat, cfg).reshape(ny, nx, f.wdeg)

    # distance-to-branch-point mask: edges touching these nodes are skipped
    if bpts.size:
        dmin = np.min(np.abs(flat[:, None] - bpts[None, :]), axis=1).reshape(ny, nx)
    else:
        dmin = np.full((ny, nx), np.inf)
    near = dmin < 1.2 * h

    crossings_on_edge = {}

    def process_edges(a_idx, b_idx, horizontal):
        """a_idx/b_idx: tuples of index arrays for the two edge endpoints."""
        fa = fibers[a_idx].reshape(-1, f.wdeg)
        fb = fibers[b_idx].reshape(-1, f.wdeg)
        za = Z[a_idx].ravel()
        zb = Z[b_idx].ravel()
        skip = (near[a_idx] | near[b_idx]).ravel()
        perm, valid = _match(fa, fb)
        bad = ~valid & ~skip
        if np.any(bad):
            raise ResolutionFailure(
                f"{int(bad.sum())} ambiguous strand matches away from branch "
                f"points at grid step {h}"
            )
        hits = []  # (edge_flat_index, pair_lower_index)
        inv = perm[:, :-1] > perm[:, 1:]  # (m, n-1) order inversions
        inv &= ~skip[:, None] & valid[:, None]
        for i in range(f.wdeg - 1):
            for e in np.flatnonzero(inv[:, i]):
                hits.append((e, i))
        if not hits:
            return
        eidx = np.array([e for e, _ in hits])
        pidx = np.array([[i, i + 1] for _, i in hits])
        pts, labels = _refine_edges(f, za[eidx], zb[eidx], pidx, fa[eidx], cfg)
        for (e, i), pt, lab in zip(hits, pts, labels):
            key = ("h" if horizontal else "v", e)
            crossings_on_edge.setdefault(key, []).append((complex(pt), int(lab)))

    # horizontal edges: (iy, ix) -- (iy, ix+1);  flat index e = iy*(nx-1)+ix
    iy, ix = np.meshgrid(np.arange(ny), np.arange(nx - 1), indexing="ij")
    process_edges((iy, ix), (iy, ix + 1), True)
    # vertical edges: (iy, ix) -- (iy+1, ix)
    iy, ix = np.meshgrid(np.arange(ny - 1), np.arange(nx), indexing="ij")
    process_edges((iy, ix), (iy + 1, ix), False)

    # organize crossing points per cell for chaining
    def edge_cells(kind, e):
        if kind == "h":
            r, c = divmod(e, nx - 1)
            cells = []
            if r > 0:
                cells.append((r - 1, c))
            if r < ny - 1:
                cells.append((r, c))
        else:
            r, c = divmod(e, nx)
            cells = []
            if c > 0:
                cells.append((r, c - 1))
            if c < nx - 1:
                cells.append((r, c))
        return cells

    points = []  # (pt, label, cells)
    for (kind, e), lst in sorted(crossings_on_edge.items()):
        for pt, lab in lst:
            # points inside the branch-point skip zone would fragment the
            # chain; the gap is closed by end snapping instead
            if bpts.size and np.min(np.abs(bpts - pt)) < 1.5 * h:
                continue
            points.append([pt, lab, edge_cells(kind, e)])
    cell_map = {}
    for idx, rec in enumerate(points):
        for cell in rec[2]:
            cell_map.setdefault(cell, []).append(idx)

    # link pairs of points that share a cell
    links = {i: [] for i in range(len(points))}
    for cell, idxs in sorted(cell_map.items()):
        if len(idxs) == 2:
            a, b = idxs
            links[a].append(b)
            links[b].append(a)
        elif len(idxs) > 2:
            cx = xs[cell[1]] + 0.5 * h
            cy = ys[cell[0]] + 0.5 * h
            if bpts.size and np.min(np.abs(bpts - (cx + 1j * cy))) < 2.5 * h:
                continue  # resolved by branch-point snapping below
            raise ResolutionFailure(
                f"{len(idxs)} coincidence points in one cell at grid step {h}"
            )

    # walk chains
    seen = set()
    arcs = []
    order = sorted(range(len(points)),
                   key=lambda i: (points[i][0].real, points[i][0].imag))
    for start in order:
        if start in seen or len(links[start]) > 1:
            continue
        chain = [start]
        seen.add(start)
        cur = start
        while True:
            nxt = [j for j in links[cur] if j not in seen]
            if not nxt:
                break
            cur = nxt[0]
            seen.add(cur)
            chain.append(cur)
        pts = np.array([points[i][0] for i in chain])
        labs = {points[i][1] for i in chain}
        if len(labs) != 1:
            # label changes along the chain: split at changes
            runs = []
            cur_lab = points[chain[0]][1]
            run = [points[chain[0]][0]]
            for i in chain[1:]:
                if points[i][1] == cur_lab:
                    run.append(points[i][0])
                else:
                    runs.append((np.array(run), cur_lab))
                    cur_lab = points[i][1]
                    run = [points[i][0]]
            runs.append((np.array(run), cur_lab))
        else:
            runs = [(pts, labs.pop())]
        for run_pts, lab in runs:
            arcs.append(_finish_arc(run_pts, lab, bpts, h, window))
    # loose points that belong to no open chain start (cycles): rare; chain them
    for start in order:
        if start not in seen:
            raise ResolutionFailure("unchained coincidence points (closed loop "
                                    "component or ambiguous topology)")
    arcs.sort(key=lambda a: (a.points[0].real, a.points[0].imag, a.label))
    return BPlusGraph(arcs, tuple(window), branch)


def _finish_arc(pts, label, bpts, h, window):
    """Snap arc ends onto a nearby branch point or the window boundary."""
    start_b = end_b = None
    if bpts.size:
        d0 = np.abs(bpts - pts[0])
        d1 = np.abs(bpts - pts[-1])
        if d0.min() < 3.0 * h:
            start_b = complex(bpts[d0.argmin()])
            pts = np.concatenate([[start_b], pts])
        if d1.min() < 3.0 * h:
            end_b = complex(bpts[d1.argmin()])
            pts = np.concatenate([pts, [end_b]])
    # orient arcs deterministically: branch-point end first, else lex order
    if end_b is not None and start_b is None:
        pts = pts[::-1]
        start_b, end_b = end_b, None
    elif start_b is None and end_b is None:
        if (pts[-1].real, pts[-1].imag) < (pts[0].real, pts[0].imag):
            pts = pts[::-1]
    return Arc(points=pts, label=int(label), start_branch=start_b,
               end_branch=end_b)


@dataclass
class RegionMap:
    regions: list             # shapely Polygons, deterministic order
    rep_points: list          # complex interior representative per region
    edges: list               # list of EdgeRec
    branch_terminals: list    # (branch point, region index, label)
    disc: Polygon
    bplus: BPlusGraph


@dataclass
class EdgeRec:
    geom: LineString
    label: int
    from_region: int          # crossing positively goes from_region -> to_region
    to_region: int
    terminal: bool = False    # stub ending at a branch point (both sides equal)


def _poly_of_path(path: PlanePath):
    v = path.vertices
    return Polygon([(p.real, p.imag) for p in v])


def _locate(regions, pt):
    for i, r in enumerate(regions):
        if r.contains(Point(pt.real, pt.imag)):
            return i
    return None


def region_decomposition(bplus: BPlusGraph, disc_path: PlanePath,
                         f: BivariatePoly = None,
                         cfg: Tolerances = DEFAULT) -> RegionMap:
    """Planar subdivision of the disc interior by the B+ arcs.

    The tracking module calibrates each interior edge's orientation: the
    positive crossing direction is the one whose tracked crossing event
    has sign +1.
    """
    if not disc_path.closed:
        raise NonTransversal("disc boundary must be a closed path")
    disc = _poly_of_path(disc_path)
    if not disc.is_valid:
        raise NonTransversal("disc boundary is self-intersecting")
    bpts = bplus.branch.as_array()
    if bpts.size:
        if disc_path.min_distance(bpts) < cfg.branch_dist:
            raise NonTransversal("disc boundary passes through a branch point")

    h = cfg.grid_step
    # clip against a slightly grown disc so pass-through arcs genuinely
    # cross the boundary ring (exact-endpoint contacts defeat noding)
    grown = disc.buffer(2 * h)
    pieces = []  # (overshooting piece, clipped-to-disc piece, label, branch)
    for arc in bplus.arcs:
        ls = LineString([(p.real, p.imag) for p in arc.points])
        inter = ls.intersection(grown)
        geoms = []
        if inter.is_empty:
            continue
        if isinstance(inter, LineString):
            geoms = [inter]
        elif isinstance(inter, MultiLineString):
            geoms = list(inter.geoms)
        else:
            geoms = [g for g in getattr(inter, "geoms", [])
                     if isinstance(g, LineString)]
        for g in geoms:
            core = g.intersection(disc)
            if core.is_empty or not isinstance(core, LineString):
                continue
            if core.length < 2 * h:
                raise NonTransversal(
                    "disc boundary nearly tangent to a coincidence arc"
                )
            endb = None
            for b in (arc.start_branch, arc.end_branch):
                if b is None:
                    continue
                if Point(b.real, b.imag).distance(core) < 1e-9 and \
                        disc.contains(Point(b.real, b.imag)):
                    endb = b
            pieces.append((g, core, arc.label, endb))

    interior_pieces = [(core, lab) for g, core, lab, endb in pieces
                       if endb is None]
    terminal_pieces = [(core, lab, endb) for g, core, lab, endb in pieces
                       if endb is not None]

    union = unary_union(
        [disc.exterior] + [g for g, _, _, endb in pieces if endb is None]
    )
    regions = [p for p in polygonize(union)]
    regions = [p for p in regions if disc.contains(p.representative_point())]
    regions.sort(key=lambda p: (round(p.bounds[0], 9), round(p.bounds[1], 9),
                                round(p.representative_point().x, 9)))
    rep_points = [complex(p.representative_point().x, p.representative_point().y)
                  for p in regions]

    edges = []
    for g, lab in sorted(interior_pieces,
                         key=lambda t: (t[0].bounds, t[1])):
        mid = g.interpolate(0.5, normalized=True)
        # local tangent -> normal
        a = g.interpolate(0.45, normalized=True)
        b = g.interpolate(0.55, normalized=True)
        tang = complex(b.x - a.x, b.y - a.y)
        tang /= abs(tang)
        nrm = 1j * tang
        delta = 1.5 * h
        p_neg = complex(mid.x, mid.y) - delta * nrm
        p_pos = complex(mid.x, mid.y) + delta * nrm
        r_neg = _locate(regions, p_neg)
        r_pos = _locate(regions, p_pos)
        if r_neg is None or r_pos is None or r_neg == r_pos:
            raise NonTransversal("could not resolve the two sides of an edge")
        if f is None:
            raise ValueError("region_decomposition needs the curve for "
                             "orientation calibration")
        seg = PlanePath([p_neg, p_pos])
        ev = crossings(track_path(f, seg, cfg), cfg)
        if len(ev) != 1 or ev[0][1] != lab:
            raise NonTransversal(
                f"calibration path saw events {ev}, expected one with "
                f"index {lab}"
            )
        if ev[0][2] > 0:
            edges.append(EdgeRec(g, lab, r_neg, r_pos))
        else:
            edges.append(EdgeRec(g, lab, r_pos, r_neg))

    terminals = []
    for g, lab, endb in sorted(terminal_pieces,
                               key=lambda t: (t[2].real, t[2].imag)):
        reg = _locate(regions, endb + 0.0)
        if reg is None:
            # the branch point sits on no region interior (it is a vertex
            # of the arrangement only when arcs pass through; nudge)
            reg = _locate(regions, endb + 2e-9 + 1e-9j)
        if reg is None:
            raise NonTransversal("cannot locate region of a branch terminal")
        terminals.append((endb, reg, lab))
        edges.append(EdgeRec(g, lab, reg, reg, terminal=True))

    return RegionMap(regions, rep_points, edges, terminals, disc, bplus)


def loop_edge_sequence(rmap: RegionMap, loop: PlanePath):
    """Ordered (edge index, direction) crossings of a closed loop.

    direction +1 means the loop crosses from edge.from_region to
    edge.to_region (the positive direction).
    """
    if not loop.closed:
        raise NonTransversal("loop must be closed")
    v = np.concatenate([loop.vertices, loop.vertices[:1]])
    ls = LineString([(p.real, p.imag) for p in v])
    hits = []
    for ei, e in enumerate(rmap.edges):
        inter = ls.intersection(e.geom)
        pts = []
        if inter.is_empty:
            continue
        if isinstance(inter, Point):
            pts = [inter]
        else:
            pts = [g for g in getattr(inter, "geoms", []) if isinstance(g, Point)]
        for p in pts:
            t = ls.project(p, normalized=True)
            hits.append((t, ei, complex(p.x, p.y)))
    hits.sort()
    out = []
    for t, ei, pt in hits:
        before = ls.interpolate(max(t - 1e-4, 0.0), normalized=True)
        after = ls.interpolate(min(t + 1e-4, 1.0), normalized=True)
        rb = _locate(rmap.regions, complex(before.x, before.y))
        ra = _locate(rmap.regions, complex(after.x, after.y))
        e = rmap.edges[ei]
        if rb == e.from_region and ra == e.to_region:
            out.append((ei, +1))
        elif rb == e.to_region and ra == e.from_region:
            out.append((ei, -1))
        else:
            raise NonTransversal("loop crossing does not separate the two "
                                 "regions of the edge")
    return out


def bplus_csv(bplus: BPlusGraph):
    """CSV rows: arc id, label, point index, x, y."""
    lines = ["arc,label,idx,x,y"]
    for ai, arc in enumerate(bplus.arcs):
        for i, p in enumerate(arc.points):
            lines.append(f"{ai},{arc.label},{i},{p.real:.12g},{p.imag:.12g}")
    return "\n".join(lines) + "\n"


_LABEL_COLORS = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"]


def bplus_svg(bplus: BPlusGraph, disc_path: PlanePath = None,
              rmap: RegionMap = None, size=640):
    """SVG rendering of the B+ diagram: arcs colored by label, branch
    points marked, optional disc boundary and region labels."""
    xmin, xmax, ymin, ymax = bplus.window
    pad = 0.05 * max(xmax - xmin, ymax - ymin)
    xmin -= pad
    xmax += pad
    ymin -= pad
    ymax += pad
    scale = size / max(xmax - xmin, ymax - ymin)

    def XY(p):
        return ((p.real - xmin) * scale, (ymax - p.imag) * scale)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
        f'height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    for ai, arc in enumerate(bplus.arcs):
        col = _LABEL_COLORS[(arc.label - 1) % len(_LABEL_COLORS)]
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(XY, arc.points))
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{col}" '
            f'stroke-width="2"/>'
        )
        mx, my = XY(arc.points[len(arc.points) // 2])
        parts.append(
            f'<text x="{mx+4:.1f}" y="{my-4:.1f}" font-size="14" '
            f'fill="{col}">{arc.label}</text>'
        )
    for b in bplus.branch.points:
        x, y = XY(b)
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="black"/>')
    if disc_path is not None:
        v = np.concatenate([disc_path.vertices, disc_path.vertices[:1]])
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(XY, v))
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="#555" '
            f'stroke-width="1.5" stroke-dasharray="6 4"/>'
        )
    if rmap is not None:
        for i, rp in enumerate(rmap.rep_points):
            x, y = XY(rp)
            parts.append(
                f'<text x="{x:.1f}" y="{y:.1f}" font-size="16" '
                f'fill="#333">U{i+1}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
