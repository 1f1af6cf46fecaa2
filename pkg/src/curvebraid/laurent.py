"""Integer Laurent polynomials in one variable t.

Exact arithmetic on dicts {exponent: coefficient}; the carrier for
Alexander polynomials.  Normalization multiplies by a unit +-t^k so the
lowest exponent is 0 and the lowest coefficient positive.
"""

from __future__ import annotations


class LaurentPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {int(e): int(c) for e, c in (coeffs or {}).items() if c != 0}

    @classmethod
    def t(cls, exp=1, coeff=1):
        return cls({exp: coeff})

    @classmethod
    def const(cls, c):
        return cls({0: c})

    @classmethod
    def from_list(cls, coeffs, low=0):
        """Ascending coefficient list starting at exponent ``low``."""
        return cls({low + i: c for i, c in enumerate(coeffs)})

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    __radd__ = __add__
    __rmul__ = __mul__

    def shift(self, k):
        return LaurentPoly({e + k: c for e, c in self.coeffs.items()})

    def degree_span(self):
        if not self.coeffs:
            return (0, 0)
        return (min(self.coeffs), max(self.coeffs))

    def __call__(self, t):
        return sum(c * t**e for e, c in self.coeffs.items())

    def normalize(self):
        """Unit form: lowest exponent 0, lowest coefficient positive."""
        if not self.coeffs:
            return LaurentPoly()
        lo = min(self.coeffs)
        sign = 1 if self.coeffs[lo] > 0 else -1
        return LaurentPoly({e - lo: sign * c for e, c in self.coeffs.items()})

    def divide_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact division; raises ValueError when the division has remainder."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if self.is_zero():
            return LaurentPoly()
        rem = dict(self.coeffs)
        dlo, dhi = other.degree_span()
        dlead = other.coeffs[dhi]
        # lowest admissible quotient exponent; going below it means the
        # division is inexact (guards against non-terminating long division)
        qlow = min(self.coeffs) - dlo
        out = {}
        while rem:
            hi = max(rem)
            q, r = divmod(rem[hi], dlead)
            if r != 0:
                raise ValueError("inexact Laurent division")
            e = hi - dhi
            if e < qlow:
                raise ValueError("inexact Laurent division")
            out[e] = q
            for de, dc in other.coeffs.items():
                ee = e + de
                v = rem.get(ee, 0) - q * dc
                if v == 0:
                    rem.pop(ee, None)
                else:
                    rem[ee] = v
        return LaurentPoly(out)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                parts.append(f"{c}")
            elif e == 1:
                parts.append(f"{c}*t" if abs(c) != 1 else ("t" if c > 0 else "-t"))
            else:
                parts.append(
                    f"{c}*t^{e}" if abs(c) != 1 else (f"t^{e}" if c > 0 else f"-t^{e}")
                )
        return " + ".join(parts).replace("+ -", "- ")
