"""Root solving: backend selection and the public solving interface.

The hot kernel (batched Aberth-Ehrlich iteration) has two interchangeable
implementations: a compiled Cython extension and a numpy fallback.  The
compiled one is used when importable; set CURVEBRAID_PURE=1 to force the
fallback (the benchmark in benchmarks/bench_roots.py compares the two).
"""

import os

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import NonConvergence

if os.environ.get("CURVEBRAID_PURE"):
    from . import _aberth_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _aberth as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from . import _aberth_py as _impl  # type: ignore[no-redef]

        BACKEND = "python"


def trim(coeffs, rel_tol=1e-12):
    """Drop trailing coefficients below rel_tol times the largest magnitude."""
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.size == 0:
        return c
    mags = np.abs(c)
    top = mags.max()
    if top == 0.0:
        return c[:0]
    deg = c.size - 1
    while deg >= 0 and mags[deg] <= rel_tol * top:
        deg -= 1
    return c[: deg + 1]


def roots_batch(coeffs, cfg: Tolerances = DEFAULT, tol=1e-13):
    """Roots of many same-degree polynomials; raises NonConvergence on failure."""
    c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    roots, ok = _impl.aberth_batch(c, maxiter=cfg.max_iterations, tol=tol)
    if not np.all(ok):
        raise NonConvergence(
            f"{int((~np.asarray(ok)).sum())} of {c.shape[0]} fibers did not converge"
        )
    return roots


def roots_univariate(coeffs, tol=None, cfg: Tolerances = DEFAULT):
    """All complex roots (with multiplicity) of one polynomial, sorted.

    coeffs: ascending complex coefficients.  Output is sorted by real part,
    ties broken by imaginary part.  Residuals satisfy |p(root)| <= tol*scale.
    """
    c = trim(coeffs)
    if c.size < 2:
        raise ValueError("need degree >= 1")
    solve_tol = min(1e-13, tol) if tol is not None else 1e-13
    r = roots_batch(c[None, :], cfg=cfg, tol=solve_tol)[0]
    return sort_roots(polish_double_pairs(c, r))


def polish_double_pairs(coeffs, roots):
    """Snap numerically split multiple roots onto the exact critical point.

    The simultaneous iteration resolves a double root only to about
    sqrt(residual); when a close pair's nearby critical point has a
    residual at evaluation-noise level, the pair genuinely is a double
    root and both members are replaced by the polished critical point.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.size < 3:
        return roots
    r = np.array(roots, dtype=np.complex128)
    dc = c[1:] * np.arange(1, c.size)
    d2c = dc[1:] * np.arange(1, dc.size)
    eps = np.finfo(float).eps
    for i in range(r.size):
        for j in range(i + 1, r.size):
            sep = abs(r[i] - r[j])
            if sep == 0.0 or sep > 1e-4:
                continue
            x = 0.5 * (r[i] + r[j])
            for _ in range(60):
                d1 = np.polyval(dc[::-1], x)
                d2 = np.polyval(d2c[::-1], x) if d2c.size else 0.0
                if d2 == 0:
                    break
                step = d1 / d2
                x -= step
                if abs(step) < 1e-16 * (1 + abs(x)):
                    break
            scale = np.polyval(np.abs(c)[::-1], abs(x))
            if abs(np.polyval(c[::-1], x)) <= 20 * eps * scale:
                r[i] = x
                r[j] = x
    return r


def sort_roots(r):
    """Deterministic fiber order: by real part, ties by imaginary part."""
    r = np.asarray(r)
    order = np.lexsort((r.imag, r.real))
    return r[order]


def root_clusters(sorted_roots, cluster_tol=None):
    """Group sorted roots into multiple-root clusters.

    Returns a list of (center, multiplicity).  Roots closer than the cluster
    tolerance (transitively) are reported as one cluster.
    """
    if cluster_tol is None:
        cluster_tol = DEFAULT.cluster
    r = np.asarray(sorted_roots)
    if r.size == 0:
        return []
    # union-find over the full pairwise graph: sorted order can separate
    # conjugate near-duplicates by a large index gap
    parent = list(range(r.size))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(r.size):
        for j in range(i + 1, r.size):
            if abs(r[i] - r[j]) <= cluster_tol:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(r.size):
        groups.setdefault(find(i), []).append(r[i])
    out = [(sum(g) / len(g), len(g)) for g in groups.values()]
    out.sort(key=lambda cm: (cm[0].real, cm[0].imag))
    return out
