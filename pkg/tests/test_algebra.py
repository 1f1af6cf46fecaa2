"""Polynomial arithmetic, root solving, Smith normal form, Laurent ring."""

import random

import numpy as np
import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from curvebraid.laurent import LaurentPoly
from curvebraid.poly import BivariatePoly, discriminant_w, resultant_w
from curvebraid.roots import (
    BACKEND,
    root_clusters,
    roots_batch,
    roots_univariate,
    sort_roots,
)
from curvebraid.snf import smith_normal_form

FIXTURE_TERMS = [(0, 3, 1.0), (0, 1, -3.0), (4, 0, 2.0)]


def fixture_poly():
    return BivariatePoly.from_term_list(FIXTURE_TERMS)


# --- bivariate polynomials ----------------------------------------------


def test_eval_matches_term_sum():
    rng = random.Random(7)
    for _ in range(50):
        terms = [
            (rng.randrange(4), rng.randrange(4),
             complex(rng.uniform(-2, 2), rng.uniform(-2, 2)))
            for _ in range(5)
        ]
        p = BivariatePoly.from_term_list(terms)
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        w = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        direct = sum(c * z**zd * w**wd for zd, wd, c in terms)
        assert abs(p(z, w) - direct) < 1e-9 * max(1.0, abs(direct))


def test_partials_match_finite_differences():
    f = fixture_poly()
    fz, fw = f.partial_z(), f.partial_w()
    h = 1e-6
    for z, w in [(0.3 + 0.1j, 1.2 - 0.4j), (1.1j, -0.7)]:
        dz = (f(z + h, w) - f(z - h, w)) / (2 * h)
        dw = (f(z, w + h) - f(z, w - h)) / (2 * h)
        assert abs(fz(z, w) - dz) < 1e-5
        assert abs(fw(z, w) - dw) < 1e-5


def test_univariate_in_w_fixture():
    f = fixture_poly()
    np.testing.assert_allclose(
        f.univariate_in_w(0.5), [2 * 0.5**4, -3.0, 0.0, 1.0], atol=1e-14
    )


def test_resultant_matches_sympy():
    zs, ws = sympy.symbols("z w")
    rng = random.Random(11)
    for _ in range(10):
        terms = [
            (rng.randrange(3), rng.randrange(3), float(rng.randrange(-4, 5)))
            for _ in range(4)
        ]
        terms.append((0, 2, 1.0))  # keep w-degree stable
        p = BivariatePoly.from_term_list(terms)
        q = BivariatePoly.from_term_list([(0, 1, 1.0), (1, 0, -1.0)])
        r = resultant_w(p, q)
        ps = sum(sympy.Integer(int(c)) * zs**zd * ws**wd
                 for zd, wd, c in terms)
        qs = ws - zs
        expect = sympy.Poly(sympy.resultant(ps, qs, ws), zs).all_coeffs()[::-1]
        got = list(r) + [0] * (len(expect) - len(r))
        for a, b in zip(got, expect):
            assert abs(complex(a) - complex(b)) < 1e-6 * max(
                1.0, max(abs(complex(x)) for x in expect)
            )


def test_discriminant_fixture_zero_set():
    disc = discriminant_w(fixture_poly())
    # vanishes exactly on the 8th roots of unity
    roots = roots_univariate(disc)
    assert len(roots) == 8
    assert np.allclose(np.abs(np.asarray(roots) ** 8 - 1), 0, atol=1e-8)


# --- root solving --------------------------------------------------------


def test_backend_selected():
    assert BACKEND in ("cython", "python")


def test_roots_batch_residuals():
    rng = np.random.default_rng(3)
    deg = 6
    coeffs = rng.normal(size=(40, deg + 1)) + 1j * rng.normal(size=(40, deg + 1))
    roots = roots_batch(coeffs)
    for row, rts in zip(coeffs, roots):
        vals = np.polyval(row[::-1], rts)
        scale = np.abs(row).max()
        assert np.abs(vals).max() < 1e-8 * scale


def test_roots_univariate_double_root_cluster():
    # w^3 - 3 w + 2 = (w - 1)^2 (w + 2)
    roots = roots_univariate([2.0, -3.0, 0.0, 1.0])
    assert np.allclose(sorted(r.real for r in roots), [-2, 1, 1], atol=1e-7)
    clusters = root_clusters(roots)
    assert sorted(m for _, m in clusters) == [1, 2]


def test_sort_roots_order():
    w = np.array([1 + 1j, -1 + 0j, 1 - 1j, 0 + 0j])
    s = sort_roots(w)
    assert list(s) == [-1 + 0j, 0j, 1 - 1j, 1 + 1j]


# --- Smith normal form ---------------------------------------------------


def test_snf_randomized_against_sympy():
    rng = random.Random(2024)
    for _ in range(1000):
        rows = rng.randrange(1, 5)
        cols = rng.randrange(1, 5)
        m = [[rng.randrange(-9, 10) for _ in range(cols)] for _ in range(rows)]
        got = smith_normal_form([r[:] for r in m])
        sm = sympy.Matrix(m)
        expect = sympy_snf(sm)
        diag = [abs(int(expect[i, i])) for i in range(min(rows, cols))]
        assert got == diag, (m, got, diag)


def test_snf_divisibility_chain():
    rng = random.Random(5)
    for _ in range(200):
        m = [[rng.randrange(-20, 21) for _ in range(4)] for _ in range(3)]
        d = smith_normal_form(m)
        for a, b in zip(d, d[1:]):
            if a != 0:
                assert b % a == 0


# --- Laurent polynomial ring --------------------------------------------


def _rand_laurent(rng):
    return LaurentPoly({
        rng.randrange(-4, 5): rng.randrange(-5, 6) for _ in range(rng.randrange(4))
    })


def test_laurent_ring_axioms_randomized():
    rng = random.Random(99)
    for _ in range(1000):
        a, b, c = (_rand_laurent(rng) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + LaurentPoly() == a
        assert a * LaurentPoly.const(1) == a
        assert a - a == LaurentPoly()


def test_laurent_exact_division_roundtrip():
    rng = random.Random(17)
    for _ in range(300):
        a, b = _rand_laurent(rng), _rand_laurent(rng)
        if not b:
            continue
        prod = a * b
        assert prod.divide_exact(b) == a


def test_laurent_division_rejects_remainder():
    t = LaurentPoly.t(1)
    with pytest.raises(ValueError):
        (t + 1).divide_exact(t - 1)


def test_laurent_normalize_unit_form():
    p = LaurentPoly({-2: -1, 0: -3, 1: -1})
    n = p.normalize()
    lo, _ = n.degree_span()
    assert lo == 0
    assert n.coeffs[0] > 0
