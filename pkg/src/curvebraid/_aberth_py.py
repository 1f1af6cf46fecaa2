"""Numpy implementation of the simultaneous (Aberth-Ehrlich) root iteration.

This is the pure-Python fallback for the compiled kernel in ``_aberth.pyx``.
Both implement the same iteration: Cauchy-bound initial circle with a fixed
aperiodic perturbation, Newton corrections coupled through the pairwise
repulsion term, convergence per polynomial when every residual drops below
``tol`` times the evaluation magnitude scale.
"""

import numpy as np

# Fixed angular offsets: break the conjugation symmetry of real-coefficient
# inputs and keep runs deterministic (no RNG state).
_PHASE = 0.4
_SPIRAL = 0.09


def initial_points(coeffs):
    """Starting roots on a perturbed circle, one row per polynomial.

    coeffs: (m, d+1) complex, ascending, leading column nonzero.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    d = c.shape[1] - 1
    lead = np.abs(c[:, -1])
    radius = 1.0 + np.max(np.abs(c[:, :-1]), axis=1) / lead
    k = np.arange(d)
    ang = 2.0 * np.pi * (k + 0.35) / d + _PHASE + _SPIRAL * k
    return radius[:, None] * np.exp(1j * ang)[None, :]


def _horner(c, z):
    """Evaluate polynomials and derivatives at the root matrix z (m, d)."""
    m, dp1 = c.shape
    p = np.broadcast_to(c[:, -1][:, None], z.shape).copy()
    dpdz = np.zeros_like(z)
    for j in range(dp1 - 2, -1, -1):
        dpdz = dpdz * z + p
        p = p * z + c[:, j][:, None]
    return p, dpdz


def _scale(c, z):
    """Magnitude scale sum |c_i| |z|^i, the natural residual normalizer."""
    az = np.abs(z)
    s = np.broadcast_to(np.abs(c[:, -1])[:, None], z.shape).copy()
    for j in range(c.shape[1] - 2, -1, -1):
        s = s * az + np.abs(c[:, j])[:, None]
    return s


def aberth_batch(coeffs, maxiter=200, tol=1e-13):
    """Roots of many same-degree polynomials at once.

    Returns (roots (m, d) complex, converged (m,) bool).
    """
    c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    m, dp1 = c.shape
    d = dp1 - 1
    if d < 1:
        raise ValueError("degree must be >= 1")
    if d == 1:
        roots = (-c[:, 0] / c[:, 1])[:, None]
        return roots, np.ones(m, dtype=bool)

    z = initial_points(c)
    active = np.ones(m, dtype=bool)
    tiny = 1e-300
    for _ in range(maxiter):
        za = z[active]
        ca = c[active]
        p, dp = _horner(ca, za)
        res_ok = np.abs(p) <= tol * _scale(ca, za) + tiny
        done = res_ok.all(axis=1)
        if done.any():
            idx = np.flatnonzero(active)
            active[idx[done]] = False
            if not active.any():
                return z, np.ones(m, dtype=bool)
            za = z[active]
            ca = c[active]
            p, dp = _horner(ca, za)
        dp = np.where(np.abs(dp) < tiny, tiny, dp)
        newton = p / dp
        diff = za[:, :, None] - za[:, None, :]
        np.einsum("kii->ki", diff)[...] = 1.0  # mask the diagonal
        inv = 1.0 / diff
        np.einsum("kii->ki", inv)[...] = 0.0
        s = inv.sum(axis=2)
        denom = 1.0 - newton * s
        denom = np.where(np.abs(denom) < tiny, 1.0, denom)
        z[active] = za - newton / denom
    # final residual check for the rows that never hit the tolerance
    p, _ = _horner(c, z)
    ok = (np.abs(p) <= tol * _scale(c, z) + tiny).all(axis=1)
    ok |= ~active
    return z, ok
