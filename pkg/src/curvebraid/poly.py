"""Complex bivariate polynomials f(z, w) and resultants.

A curve-defining polynomial is stored by monomial coefficients, organized
as w-coefficient polynomials in z:

    f(z, w) = c_n(z) w^n + ... + c_1(z) w + c_0(z)

The resultant in w of two such polynomials is computed by evaluating the
Sylvester determinant at scaled roots of unity and interpolating the
z-polynomial with an inverse FFT; only the zero locus of the result is
contractually meaningful, no classical scaling is attempted.
"""

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import InputError
from .roots import trim


class BivariatePoly:
    """f(z,w) with complex coefficients, w-degree n >= 0."""

    def __init__(self, terms):
        """terms: mapping (zdeg, wdeg) -> complex coefficient."""
        clean = {}
        for (zd, wd), c in terms.items():
            c = complex(c)
            if not (np.isfinite(c.real) and np.isfinite(c.imag)):
                raise InputError("non-finite coefficient")
            if zd < 0 or wd < 0:
                raise InputError("negative exponent")
            if c != 0:
                clean[(int(zd), int(wd))] = clean.get((int(zd), int(wd)), 0) + c
        self.terms = {k: v for k, v in clean.items() if v != 0}
        if not self.terms:
            self.wdeg = 0
            self.zdeg = 0
            self.wcoeffs = [np.zeros(1, dtype=np.complex128)]
            return
        self.wdeg = max(wd for _, wd in self.terms)
        self.zdeg = max(zd for zd, _ in self.terms)
        self.wcoeffs = []
        for wd in range(self.wdeg + 1):
            c = np.zeros(self.zdeg + 1, dtype=np.complex128)
            for (zd, wd2), v in self.terms.items():
                if wd2 == wd:
                    c[zd] = v
            self.wcoeffs.append(trim(c))

    @classmethod
    def from_term_list(cls, triples):
        """triples: iterable of (zdeg, wdeg, coeff)."""
        d = {}
        for zd, wd, c in triples:
            d[(zd, wd)] = d.get((zd, wd), 0) + complex(c)
        return cls(d)

    def __call__(self, z, w):
        """Horner in w of Horner-evaluated z-coefficients."""
        acc = 0.0 + 0.0j
        for c in reversed(self.wcoeffs):
            cz = P.polyval(z, c) if c.size else 0.0
            acc = acc * w + cz
        return acc

    def partial_w(self):
        if self.wdeg < 1:
            raise InputError("w-degree must be >= 1 for d/dw")
        return BivariatePoly(
            {(zd, wd - 1): wd * c for (zd, wd), c in self.terms.items() if wd >= 1}
        )

    def partial_z(self):
        return BivariatePoly(
            {(zd - 1, wd): zd * c for (zd, wd), c in self.terms.items() if zd >= 1}
        )

    def univariate_in_w(self, z):
        """Coefficients (ascending in w) of f(z, .) for a fixed z."""
        return np.array(
            [P.polyval(z, c) if c.size else 0.0 for c in self.wcoeffs],
            dtype=np.complex128,
        )

    def coeff_matrix(self, zs):
        """(len(zs), wdeg+1) matrix of w-coefficients over many z values."""
        zs = np.asarray(zs, dtype=np.complex128)
        out = np.zeros((zs.size, self.wdeg + 1), dtype=np.complex128)
        for wd, c in enumerate(self.wcoeffs):
            if c.size:
                out[:, wd] = P.polyval(zs, c)
        return out

    def leading_wcoeff(self):
        return self.wcoeffs[self.wdeg]

    def __repr__(self):
        parts = [
            f"({c:g})*z^{zd}*w^{wd}"
            for (zd, wd), c in sorted(self.terms.items())
        ]
        return " + ".join(parts) if parts else "0"


def resultant_w(f: BivariatePoly, g: BivariatePoly):
    """Res_w(f, g) as a z-polynomial (ascending numpy coefficients).

    Sample-and-interpolate: the Sylvester determinant is evaluated at
    D+1 scaled roots of unity, where D bounds the z-degree, and the
    coefficients are recovered by inverse FFT.
    """
    n, m = f.wdeg, g.wdeg
    if n < 1 or m < 1:
        raise InputError("both arguments need w-degree >= 1")
    dbound = m * f.zdeg + n * g.zdeg
    M = dbound + 1
    radius = 1.0
    zs = radius * np.exp(2j * np.pi * np.arange(M) / M)
    fc = f.coeff_matrix(zs)  # (M, n+1)
    gc = g.coeff_matrix(zs)  # (M, m+1)
    syl = np.zeros((M, n + m, n + m), dtype=np.complex128)
    # rows of f-coefficients (descending in w), then rows of g-coefficients
    for i in range(m):
        for j in range(n + 1):
            syl[:, i, i + j] = fc[:, n - j]
    for i in range(n):
        for j in range(m + 1):
            syl[:, m + i, i + j] = gc[:, m - j]
    vals = np.linalg.det(syl)
    # samples sit at radius * omega^j, so coefficients come out of a
    # forward DFT divided by M (and un-scaled by the radius powers)
    coeffs = np.fft.fft(vals) / M
    coeffs /= radius ** np.arange(M)
    return trim(coeffs, rel_tol=1e-10)


def discriminant_w(f: BivariatePoly):
    """Res_w(f, df/dw); only its zero set is used downstream."""
    return resultant_w(f, f.partial_w())
