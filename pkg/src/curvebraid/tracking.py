"""Numerical continuation of fiber roots along paths in the z-plane.

Strands are continued with a first-order predictor along
dw/dz = -(df/dz)/(df/dw) and a Newton corrector in w at fixed z.  The
step is halved whenever a correction needs more than 5 Newton iterations
or the strand matching becomes ambiguous.  Real-part crossing events are
located by recursive bisection down to the configured time resolution.
"""

import numpy as np
from numpy.polynomial import polynomial as P

from .config import DEFAULT, Tolerances
from .errors import (
    DegenerateLeadingCoeff,
    MatchingAmbiguity,
    NonConvergence,
    StepCollapse,
    TangentialCrossing,
)
from .poly import BivariatePoly
from .roots import polish_double_pairs, roots_batch, sort_roots


class PlanePath:
    """Polyline in the z-plane, parameterized by arc length on [0, 1]."""

    def __init__(self, vertices, closed=False):
        v = np.asarray(vertices, dtype=np.complex128)
        if closed and v.size >= 2 and abs(v[0] - v[-1]) < 1e-14:
            v = v[:-1]
        if v.size < 2 and not (closed and v.size >= 1):
            raise ValueError("need at least 2 vertices")
        self.vertices = v
        self.closed = bool(closed)
        pts = np.concatenate([v, v[:1]]) if closed else v
        self._pts = pts
        seg = np.abs(np.diff(pts))
        self.length = float(seg.sum())
        if self.length == 0.0:
            self._cum = np.zeros(pts.size)
        else:
            self._cum = np.concatenate([[0.0], np.cumsum(seg)]) / self.length

    @classmethod
    def circle(cls, center, radius, samples=128, phase=0.0):
        ang = phase + 2.0 * np.pi * np.arange(samples) / samples
        return cls(center + radius * np.exp(1j * ang), closed=True)

    def point(self, t):
        t = min(max(float(t), 0.0), 1.0)
        if self.length == 0.0:
            return self._pts[0]
        i = int(np.searchsorted(self._cum, t, side="right")) - 1
        i = min(max(i, 0), self._pts.size - 2)
        span = self._cum[i + 1] - self._cum[i]
        frac = 0.0 if span == 0 else (t - self._cum[i]) / span
        return self._pts[i] * (1 - frac) + self._pts[i + 1] * frac

    def reversed(self):
        return PlanePath(self.vertices[::-1], closed=self.closed)

    def min_distance(self, points):
        """Minimum distance from the polyline to any of the given points."""
        pts = np.asarray(points, dtype=np.complex128)
        if pts.size == 0:
            return np.inf
        best = np.inf
        for a, b in zip(self._pts[:-1], self._pts[1:]):
            ab = b - a
            L2 = abs(ab) ** 2
            if L2 == 0:
                d = np.abs(pts - a)
            else:
                s = np.clip(((pts - a) * np.conj(ab)).real / L2, 0.0, 1.0)
                d = np.abs(pts - (a + s * ab))
            best = min(best, float(d.min()))
        return best


def fiber_at(f: BivariatePoly, z, cfg: Tolerances = DEFAULT):
    """Sorted fiber over z: roots of f(z, .) ordered by (Re, Im)."""
    coeffs = f.univariate_in_w(z)
    lead = coeffs[-1]
    scale = max(np.abs(coeffs).max(), 1.0)
    if abs(lead) < 1e-12 * scale or abs(lead) < 1e-300:
        raise DegenerateLeadingCoeff(f"leading w-coefficient vanishes at z={z}")
    r = roots_batch(coeffs[None, :], cfg=cfg)[0]
    return sort_roots(polish_double_pairs(coeffs, r))


def _eval_pd(coeffs, w):
    """Polynomial values, derivative values and magnitude scales at w."""
    p = np.full_like(w, coeffs[-1])
    dp = np.zeros_like(w)
    s = np.full(w.shape, abs(coeffs[-1]))
    aw = np.abs(w)
    for c in coeffs[-2::-1]:
        dp = dp * w + p
        p = p * w + c
        s = s * aw + abs(c)
    return p, dp, s


def _newton(coeffs, w, cfg):
    """Correct all strands at fixed z; returns (w, iterations used)."""
    for it in range(cfg.newton_max_iter):
        p, dp, s = _eval_pd(coeffs, w)
        if np.all(np.abs(p) <= cfg.root_residual * s):
            return w, it
        dp = np.where(np.abs(dp) < 1e-300, 1e-300, dp)
        w = w - p / dp
    p, dp, s = _eval_pd(coeffs, w)
    if np.all(np.abs(p) <= cfg.root_residual * s):
        return w, cfg.newton_max_iter
    return w, -1


def _advance(f, path, w, t0, t1, cfg, record=None, h0=None):
    """Continue strands from parameter t0 to t1 (t1 may be < t0)."""
    if t1 == t0:
        return w
    direction = 1.0 if t1 > t0 else -1.0
    span = abs(t1 - t0)
    hmax = min(0.005, span) if path.length > 0 else span
    h = min(h0 or hmax, hmax)
    fz = f.partial_z()
    fw = f.partial_w()
    t = t0
    w = np.array(w, dtype=np.complex128)
    guard_fail = None
    while direction * (t1 - t) > 1e-15:
        h = min(h, abs(t1 - t))
        z0 = path.point(t)
        tn = t + direction * h
        z1 = path.point(tn)
        dz = z1 - z0
        dwdz = -np.array([fz(z0, wk) for wk in w]) / np.array(
            [fw(z0, wk) for wk in w]
        )
        pred = w + dwdz * dz
        coeffs = f.univariate_in_w(z1)
        cand, iters = _newton(coeffs, pred, cfg)
        ok = iters >= 0 and iters <= 5
        if ok:
            # greedy matching guard: each strand must stay closer to its own
            # predecessor than any other strand comes to it (factor 2)
            disp = np.abs(cand - w)
            dists = np.abs(cand[None, :] - w[:, None])
            np.fill_diagonal(dists, np.inf)
            if np.any(dists.min(axis=1) < 2.0 * disp):
                ok = False
                guard_fail = "match"
            pair = np.abs(cand[None, :] - cand[:, None])
            np.fill_diagonal(pair, np.inf)
            if pair.min() < 1e-12:
                ok = False
                guard_fail = "collision"
        if not ok:
            h *= 0.5
            if h < cfg.step_floor:
                if guard_fail:
                    raise MatchingAmbiguity(
                        f"strand matching ambiguous near t={t:.6g}"
                    )
                raise StepCollapse(f"step collapsed near t={t:.6g}")
            continue
        t = tn
        w = cand
        if record is not None:
            record(t, w.copy())
        if iters <= 2:
            h = min(h * 1.6, hmax)
        guard_fail = None
    return w


class StrandSheet:
    """Continuity-ordered strand trajectories along a path."""

    def __init__(self, f, path, ts, strands, cfg):
        self.f = f
        self.path = path
        self.ts = np.asarray(ts)
        self.strands = np.asarray(strands)  # (samples, n), continuity order
        self.cfg = cfg

    @property
    def n(self):
        return self.strands.shape[1]

    def at(self, t):
        """Strand positions at an arbitrary parameter, by local continuation."""
        i = int(np.searchsorted(self.ts, t, side="right")) - 1
        i = min(max(i, 0), self.ts.size - 1)
        return _advance(self.f, self.path, self.strands[i], self.ts[i], t, self.cfg)


def track_path(f: BivariatePoly, path: PlanePath, cfg: Tolerances = DEFAULT):
    """Track all n strands along the path; first sample is the sorted fiber."""
    w0 = fiber_at(f, path.point(0.0), cfg)
    ts = [0.0]
    ws = [w0]
    if path.length == 0.0:
        return StrandSheet(f, path, ts, ws, cfg)

    def rec(t, w):
        ts.append(t)
        ws.append(w)

    w_end = _advance(f, path, w0, 0.0, 1.0, cfg, record=rec)
    # endpoint consistency: the tracked fiber must match the directly
    # solved fiber as a set
    direct = fiber_at(f, path.point(1.0), cfg)
    d = np.abs(w_end[None, :] - direct[:, None])
    scale = max(1.0, float(np.abs(direct).max()))
    if d.min(axis=1).max() > 1e-6 * scale:
        raise NonConvergence("tracked endpoint fiber does not match direct solve")
    return StrandSheet(f, path, ts, ws, cfg)


def _order(w):
    """Rank of each strand in the (Re, Im)-sorted fiber."""
    idx = np.lexsort((w.imag, w.real))
    rank = np.empty_like(idx)
    rank[idx] = np.arange(idx.size)
    return rank


def crossings(sheet: StrandSheet, cfg: Tolerances = None):
    """Real-part order-swap events: list of (t, i, sign), sorted by t.

    i is the lower of the two sorted positions involved; sign is +1 when
    the strand moving up (position i -> i+1) passes below the other
    strand (smaller imaginary part at the coincidence).
    """
    cfg = cfg or sheet.cfg
    events = []
    ts, ws = sheet.ts, sheet.strands
    if ts.size < 2:
        return events

    def emit(t0, w0, t1, w1):
        r0, r1 = _order(w0), _order(w1)
        moved = np.flatnonzero(r0 != r1)
        if moved.size != 2 or abs(r0[moved[0]] - r0[moved[1]]) != 1:
            raise TangentialCrossing(
                f"cannot isolate a single adjacent swap near t={0.5*(t0+t1):.9f}"
            )
        a, b = moved
        if r1[a] == r0[a] + 1:
            up, down = a, b
        else:
            up, down = b, a
        i = int(min(r0[a], r0[b])) + 1  # 1-based strand index
        im_up = 0.5 * (w0[up].imag + w1[up].imag)
        im_dn = 0.5 * (w0[down].imag + w1[down].imag)
        if abs(im_up - im_dn) < 1e-12:
            raise TangentialCrossing(
                f"imaginary parts coincide at crossing near t={0.5*(t0+t1):.9f}"
            )
        sign = 1 if im_up < im_dn else -1
        events.append((0.5 * (t0 + t1), i, sign))

    def search(t0, w0, t1, w1, depth=0):
        if np.array_equal(_order(w0), _order(w1)):
            return
        if t1 - t0 <= cfg.bisect_tol:
            emit(t0, w0, t1, w1)
            return
        if depth > 60:
            raise TangentialCrossing("bisection depth exceeded")
        tm = 0.5 * (t0 + t1)
        wm = _advance(sheet.f, sheet.path, w0, t0, tm, cfg)
        search(t0, w0, tm, wm, depth + 1)
        search(tm, wm, t1, w1, depth + 1)

    for k in range(ts.size - 1):
        search(float(ts[k]), ws[k], float(ts[k + 1]), ws[k + 1])
    events.sort(key=lambda e: e[0])
    return events
