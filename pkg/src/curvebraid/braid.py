"""Braid words and closure invariants.

The Alexander polynomial of a braid closure comes from the reduced
(n-1)-dimensional Burau representation with exact integer Laurent
entries; the determinant identity

    det(Burau(beta) - Id) = unit * Delta(t) * (1 - t^n) / (1 - t)

is inverted by exact Laurent division and the result returned in
normalized unit form (lowest exponent 0, lowest coefficient positive).
"""

import json

import numpy as np

from .errors import InputError, NonSimpleTerminal, NotAKnot
from .laurent import LaurentPoly
from .tracking import PlanePath, crossings, track_path


class BraidWord:
    """Sequence of signed Artin generators on n strands."""

    def __init__(self, strands, letters=()):
        self.strands = int(strands)
        self.letters = []
        for i, s in letters:
            if not (1 <= i <= self.strands - 1):
                raise InputError(f"generator index {i} out of range")
            if s not in (1, -1):
                raise InputError("letter sign must be +-1")
            self.letters.append((int(i), int(s)))

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return (
            isinstance(other, BraidWord)
            and self.strands == other.strands
            and self.letters == other.letters
        )

    def __mul__(self, other):
        if self.strands != other.strands:
            raise InputError("strand count mismatch")
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self):
        return BraidWord(self.strands, [(i, -s) for i, s in reversed(self.letters)])

    def to_text(self):
        """Compact text form: "s2 s2 -s1" (sign prefix for inverse letters)."""
        return " ".join(("s" if s > 0 else "-s") + str(i) for i, s in self.letters)

    @classmethod
    def from_text(cls, strands, text):
        letters = []
        for tok in text.split():
            neg = tok.startswith("-")
            body = tok[1:] if neg else tok
            if not body.startswith("s"):
                raise InputError(f"bad braid letter {tok!r}")
            letters.append((int(body[1:]), -1 if neg else 1))
        return cls(strands, letters)

    def to_json(self):
        return json.dumps({"strands": self.strands, "word": self.to_text()})

    def __repr__(self):
        return f"BraidWord({self.strands}, {self.to_text()!r})"


def braid_from_crossings(events, strands):
    """Transcribe time-sorted crossing events into a braid word."""
    return BraidWord(strands, [(i, s) for _, i, s in events])


def braid_along_loop(f, loop: PlanePath, cfg=None):
    from .config import DEFAULT

    cfg = cfg or DEFAULT
    sheet = track_path(f, loop, cfg)
    return braid_from_crossings(crossings(sheet, cfg), f.wdeg)


def permutation(b: BraidWord):
    """Strand permutation: images[i-1] is where strand i ends up (1-based)."""
    images = list(range(1, b.strands + 1))
    for i, _ in b.letters:
        # positions i, i+1 swap; track where each initial strand goes
        for k in range(b.strands):
            if images[k] == i:
                images[k] = i + 1
            elif images[k] == i + 1:
                images[k] = i
    return images


def exponent_sum(b: BraidWord):
    return sum(s for _, s in b.letters)


def closure_components(b: BraidWord):
    """Number of cycles of the strand permutation."""
    images = permutation(b)
    seen = [False] * b.strands
    comps = 0
    for start in range(b.strands):
        if seen[start]:
            continue
        comps += 1
        k = start
        while not seen[k]:
            seen[k] = True
            k = images[k] - 1
    return comps


def band_euler_characteristic(strands, bands):
    """chi of the band surface: n disc sheets joined by k bands."""
    if strands < 1 or bands < 0:
        raise InputError("need strands >= 1 and bands >= 0")
    return strands - bands


def _winding(loop: PlanePath, pt):
    v = np.concatenate([loop.vertices, loop.vertices[:1]]) - pt
    ang = np.angle(v[1:] / v[:-1])
    return int(round(ang.sum() / (2 * np.pi)))


def _route_avoiding(start, target, obstacles, clearance=0.12):
    """Polyline from start to target, detouring around listed obstacle points."""
    pts = [start]
    seg_a, seg_b = start, target
    obs = [o for o in obstacles if abs(o - target) > 1e-12]
    ab = seg_b - seg_a
    L = abs(ab)
    if L > 0:
        u = ab / L
        for o in sorted(obs, key=lambda o: ((o - seg_a) / u).real):
            s = ((o - seg_a) / u).real
            if 0 < s < L:
                perp = (o - (seg_a + s * u))
                d = abs(perp)
                if d < clearance:
                    nrm = 1j * u if d == 0 else -perp / d
                    pts.append(seg_a + s * u + clearance * nrm)
    pts.append(target)
    return pts


def local_monodromies(f, loop: PlanePath, branch_pts, cfg=None):
    """Permutation of the base fiber for a small positive loop around each
    enclosed branch point, connected to the loop's start point."""
    from .config import DEFAULT

    cfg = cfg or DEFAULT
    base = loop.vertices[0]
    all_b = np.asarray(branch_pts, dtype=np.complex128)
    perms = []
    enclosed = [b for b in all_b if _winding(loop, b) != 0]
    for b in enclosed:
        others = [o for o in all_b if o != b]
        radius = 0.05
        if others:
            radius = min(0.05, 0.4 * min(abs(o - b) for o in others))
        radius = max(radius, 2 * cfg.branch_dist)
        if loop.closed:
            # walk along the disc boundary to the vertex nearest the branch
            # point, then dive inward: keeps the connecting path in the disc
            # so the generated subgroup is the one acting on the curve piece
            i = int(np.abs(loop.vertices - b).argmin())
            approach = list(loop.vertices[: i + 1]) + [b]
            if len(approach) < 2:
                approach = [base, b]
        else:
            approach = _route_avoiding(base, b, all_b, clearance=3 * radius)
        # stop the approach on the small circle around b
        direction = (approach[-1] - approach[-2])
        direction /= abs(direction)
        entry = b - radius * direction
        path_pts = approach[:-1] + [entry]
        phase = np.angle(entry - b)
        circle = b + radius * np.exp(
            1j * (phase + 2 * np.pi * np.arange(1, 33) / 32)
        )
        full = path_pts + list(circle) + path_pts[::-1]
        sheet = track_path(f, PlanePath(full), cfg)
        start, end = sheet.strands[0], sheet.strands[-1]
        d = np.abs(end[:, None] - start[None, :])
        images = d.argmin(axis=1)
        if sorted(images) != list(range(f.wdeg)):
            raise NonSimpleTerminal("monodromy matching failed")
        # strand k of the base fiber is carried to strand images.index(k)?
        # end[k] ~= start[images[k]]: the loop maps root images[k] -> slot k
        perm = [0] * f.wdeg
        for k in range(f.wdeg):
            perm[images[k]] = k + 1
        perms.append(perm)
    return enclosed, perms


def surface_invariants(f, loop: PlanePath, branch_set, cfg=None):
    """(chi, components) of the curve piece over the disc bounded by loop."""
    pts = branch_set.as_array()
    enclosed_idx = [k for k, b in enumerate(pts) if _winding(loop, b) != 0]
    for k in enclosed_idx:
        if not branch_set.simple[k]:
            raise NonSimpleTerminal(
                f"branch point {pts[k]} is not a simple tangency"
            )
    n = f.wdeg
    chi = n - len(enclosed_idx)
    _, perms = local_monodromies(f, loop, pts, cfg)
    # orbits of the generated subgroup on {1..n}
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for p in perms:
        for i in range(n):
            if p[i] != i + 1:
                parent[find(i)] = find(p[i] - 1)
    components = len({find(i) for i in range(n)})
    return chi, components


# --- reduced Burau representation ---------------------------------------


def _burau_matrix(n, i, sign):
    """Reduced Burau image of sigma_i^sign on n strands, (n-1)x(n-1)."""
    one = LaurentPoly.const(1)
    t = LaurentPoly.t(1)
    tinv = LaurentPoly.t(-1)
    m = [[LaurentPoly() for _ in range(n - 1)] for _ in range(n - 1)]
    for k in range(n - 1):
        m[k][k] = one
    j = i - 1  # 0-based column of the twisted generator
    if sign > 0:
        m[j][j] = -t
        if j >= 1:
            m[j - 1][j] = t
        if j + 1 <= n - 2:
            m[j + 1][j] = one
    else:
        m[j][j] = -tinv
        if j >= 1:
            m[j - 1][j] = one
        if j + 1 <= n - 2:
            m[j + 1][j] = tinv
    return m


def _mat_mul(a, b):
    k = len(a)
    out = [[LaurentPoly() for _ in range(k)] for _ in range(k)]
    for i in range(k):
        for j in range(k):
            acc = LaurentPoly()
            for l in range(k):
                if a[i][l] and b[l][j]:
                    acc = acc + a[i][l] * b[l][j]
            out[i][j] = acc
    return out


def _mat_det(m):
    k = len(m)
    if k == 0:
        return LaurentPoly.const(1)
    if k == 1:
        return m[0][0]
    det = LaurentPoly()
    for j in range(k):
        if not m[0][j]:
            continue
        minor = [[m[r][c] for c in range(k) if c != j] for r in range(1, k)]
        term = m[0][j] * _mat_det(minor)
        det = det + term if j % 2 == 0 else det - term
    return det


def reduced_burau(b: BraidWord):
    n = b.strands
    m = [[LaurentPoly.const(1 if i == j else 0) for j in range(n - 1)]
         for i in range(n - 1)]
    for i, s in b.letters:
        m = _mat_mul(m, _burau_matrix(n, i, s))
    return m


def alexander_from_braid(b: BraidWord):
    """Normalized Alexander polynomial of the closure (must be a knot)."""
    if closure_components(b) != 1:
        raise NotAKnot("closure has more than one component")
    n = b.strands
    if n == 1:
        return LaurentPoly.const(1)
    m = reduced_burau(b)
    for k in range(n - 1):
        m[k][k] = m[k][k] - 1
    det = _mat_det(m)
    # det = unit * Delta * (1 - t^n)/(1 - t)
    one_minus_t = LaurentPoly({0: 1, 1: -1})
    one_minus_tn = LaurentPoly({0: 1, n: -1})
    delta = (det * one_minus_t).divide_exact(one_minus_tn)
    return delta.normalize()
