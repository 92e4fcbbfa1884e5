"""Exact bivariate polynomials over the rationals.

Coefficients are :class:`fractions.Fraction`; a polynomial is a sparse map
from exponent pairs ``(i, j)`` (meaning ``x**i * y**j``) to nonzero
coefficients.  Every operation returns a new object.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Optional, Sequence, Tuple, Union

Rational = Fraction
Exp = Tuple[int, int]
Scalar = Union[int, Fraction]

#: degree of the zero polynomial
NEG_INF = -math.inf


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and decimal/fraction strings to an exact Fraction.

    Floats are rejected: they silently carry binary rounding error.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            out = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational: {value!r}") from exc
        return out
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _grlex_key(e: Exp) -> Tuple[int, int]:
    # graded lex, x > y
    return (e[0] + e[1], e[0])


class Poly2:
    """Sparse polynomial in ``x`` and ``y`` with rational coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Exp, Scalar]] = None):
        clean = {}
        if terms:
            for (i, j), c in terms.items():
                if i < 0 or j < 0:
                    raise ValueError(f"negative exponent {(i, j)}")
                c = as_rational(c)
                if c:
                    clean[(int(i), int(j))] = c
        self._terms = clean

    # construction helpers ------------------------------------------------
    @classmethod
    def const(cls, c: Scalar) -> "Poly2":
        return cls({(0, 0): c})

    @classmethod
    def x(cls) -> "Poly2":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "Poly2":
        return cls({(0, 1): 1})

    @classmethod
    def zero(cls) -> "Poly2":
        return cls()

    @classmethod
    def from_univariate(cls, coeffs: Sequence[Scalar]) -> "Poly2":
        """Polynomial in ``x`` from ascending coefficients."""
        return cls({(i, 0): c for i, c in enumerate(coeffs)})

    @classmethod
    def _raw(cls, terms: dict) -> "Poly2":
        p = cls.__new__(cls)
        p._terms = terms
        return p

    # basic queries -------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, i: int, j: int = 0) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(e == (0, 0) for e in self._terms)

    @property
    def degree(self):
        """Total degree; ``NEG_INF`` for the zero polynomial."""
        if not self._terms:
            return NEG_INF
        return max(i + j for i, j in self._terms)

    @property
    def order(self):
        """Lowest total degree present (``math.inf`` for zero)."""
        if not self._terms:
            return math.inf
        return min(i + j for i, j in self._terms)

    def homogeneous_part(self, d: int) -> "Poly2":
        return Poly2._raw({e: c for e, c in self._terms.items() if e[0] + e[1] == d})

    def truncate(self, max_degree: int) -> "Poly2":
        """Drop every term of total degree above ``max_degree``."""
        return Poly2._raw({e: c for e, c in self._terms.items() if e[0] + e[1] <= max_degree})

    def leading(self) -> Tuple[Exp, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms, key=_grlex_key)
        return e, self._terms[e]

    def univariate(self, var: str = "x") -> list:
        """Ascending coefficient list, for a polynomial in one variable only."""
        idx = 0 if var == "x" else 1
        if any(e[1 - idx] for e in self._terms):
            raise ValueError(f"polynomial depends on more than {var}")
        if not self._terms:
            return []
        top = max(e[idx] for e in self._terms)
        out = [Fraction(0)] * (top + 1)
        for e, c in self._terms.items():
            out[e[idx]] = c
        return out

    # arithmetic ----------------------------------------------------------
    def __add__(self, other) -> "Poly2":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly2._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly2":
        return Poly2._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Poly2":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly2":
        return (-self) + other

    def __mul__(self, other) -> "Poly2":
        if isinstance(other, Poly2):
            out: dict = {}
            for (i1, j1), c1 in self._terms.items():
                for (i2, j2), c2 in other._terms.items():
                    e = (i1 + i2, j1 + j2)
                    out[e] = out.get(e, 0) + c1 * c2
            return Poly2._raw({e: c for e, c in out.items() if c})
        try:
            s = as_rational(other)
        except TypeError:
            return NotImplemented
        if not s:
            return Poly2()
        return Poly2._raw({e: c * s for e, c in self._terms.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly2":
        if n < 0:
            raise ValueError("negative power")
        result = Poly2.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"Poly2({self})"

    def __str__(self) -> str:
        return to_string(self)

    # calculus and substitution ------------------------------------------
    def partial(self, var: str) -> "Poly2":
        return partial(self, var)

    def __call__(self, x, y) -> Fraction:
        return evaluate(self, (x, y))

    def substitute(self, xp: "Poly2", yp: "Poly2", max_degree: Optional[int] = None) -> "Poly2":
        """Compose: ``self(xp, yp)``, optionally truncated at ``max_degree``."""
        return substitute(self, xp, yp, max_degree)


def _coerce(value):
    if isinstance(value, Poly2):
        return value
    try:
        return Poly2.const(as_rational(value))
    except TypeError:
        return NotImplemented


def add(a: Poly2, b: Poly2) -> Poly2:
    return a + b


def mul(a: Poly2, b: Poly2) -> Poly2:
    return a * b


def partial(p: Poly2, var: str) -> Poly2:
    """Formal partial derivative with respect to ``"x"`` or ``"y"``."""
    if var == "x":
        return Poly2._raw({(i - 1, j): c * i for (i, j), c in p.items() if i})
    if var == "y":
        return Poly2._raw({(i, j - 1): c * j for (i, j), c in p.items() if j})
    raise ValueError(f"unknown variable {var!r}")


def evaluate(p: Poly2, at) -> Fraction:
    x, y = (as_rational(v) for v in at)
    xpow, ypow = [Fraction(1)], [Fraction(1)]
    total = Fraction(0)
    for (i, j), c in p.items():
        if (i and not x) or (j and not y):
            continue
        while len(xpow) <= i:
            xpow.append(xpow[-1] * x)
        while len(ypow) <= j:
            ypow.append(ypow[-1] * y)
        total += c * xpow[i] * ypow[j]
    return total


def _mul_trunc(a: Poly2, b: Poly2, max_degree: Optional[int]) -> Poly2:
    """Product with every term of total degree above ``max_degree`` dropped."""
    if max_degree is None:
        return a * b
    out: dict = {}
    for (i1, j1), c1 in a.items():
        d1 = i1 + j1
        for (i2, j2), c2 in b.items():
            if d1 + i2 + j2 > max_degree:
                continue
            e = (i1 + i2, j1 + j2)
            out[e] = out.get(e, 0) + c1 * c2
    return Poly2._raw({e: c for e, c in out.items() if c})


def _powers(p: Poly2, n: int, max_degree: Optional[int]) -> list:
    out = [Poly2.const(1)]
    for _ in range(n):
        out.append(_mul_trunc(out[-1], p, max_degree))
    return out


def substitute(p: Poly2, xp: Poly2, yp: Poly2, max_degree: Optional[int] = None) -> Poly2:
    """Polynomial composition ``p(xp(x, y), yp(x, y))``."""
    if p.is_zero():
        return Poly2()
    imax = max(i for i, _ in p.terms)
    jmax = max(j for _, j in p.terms)
    xs = _powers(xp, imax, max_degree)
    ys = _powers(yp, jmax, max_degree)
    acc: dict = {}
    for (i, j), c in p.items():
        for e, v in _mul_trunc(xs[i], ys[j], max_degree).items():
            acc[e] = acc.get(e, 0) + v * c
    return Poly2._raw({e: v for e, v in acc.items() if v})


def compose_affine(p: Poly2, affine) -> Poly2:
    """Substitute ``x -> a1*x + b1*y + g1``, ``y -> a2*x + b2*y + g2``.

    ``affine`` is ``((a1, b1, g1), (a2, b2, g2))``.
    """
    (a1, b1, g1), (a2, b2, g2) = affine
    xp = Poly2({(1, 0): a1, (0, 1): b1, (0, 0): g1})
    yp = Poly2({(1, 0): a2, (0, 1): b2, (0, 0): g2})
    return substitute(p, xp, yp)


def divmod_grlex(num: Poly2, den: Poly2) -> Tuple[Poly2, Poly2]:
    """Multivariate division by a single divisor under grlex (x > y)."""
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    (li, lj), lc = den.leading()
    quot: dict = {}
    rem: dict = {}
    work = num
    while not work.is_zero():
        (i, j), c = work.leading()
        if i >= li and j >= lj:
            e = (i - li, j - lj)
            t = c / lc
            quot[e] = quot.get(e, 0) + t
            work = work - Poly2._raw({e: t}) * den
        else:
            rem[(i, j)] = c
            work = work - Poly2._raw({(i, j): c})
    return Poly2(quot), Poly2(rem)


def divide_exact(num: Poly2, den: Poly2) -> Optional[Poly2]:
    """Return ``q`` with ``num == q * den``, or ``None`` if no such polynomial."""
    q, r = divmod_grlex(num, den)
    return q if r.is_zero() else None


# univariate helpers ------------------------------------------------------

def rational_roots(coeffs: Sequence[Scalar]) -> list:
    """Distinct rational roots of a univariate polynomial (ascending coeffs), sorted."""
    cs = [as_rational(c) for c in coeffs]
    while cs and not cs[-1]:
        cs.pop()
    if not cs:
        raise ValueError("zero polynomial has every number as a root")
    roots = set()
    # factor out x
    while cs and not cs[0]:
        roots.add(Fraction(0))
        cs.pop(0)
    if len(cs) <= 1:
        return sorted(roots)
    lcm = 1
    for c in cs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in cs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    ints = [v // g for v in ints]
    a0, an = abs(ints[0]), abs(ints[-1])
    for pnum in _divisors(a0):
        for qden in _divisors(an):
            for cand in (Fraction(pnum, qden), Fraction(-pnum, qden)):
                if _horner(ints, cand) == 0:
                    roots.add(cand)
    return sorted(roots)


def _horner(coeffs: Sequence, t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _divisors(n: int) -> list:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return out


# text form -----------------------------------------------------------------

def _monomial(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("x" if i == 1 else f"x^{i}")
    if j:
        parts.append("y" if j == 1 else f"y^{j}")
    return "*".join(parts)


def to_string(p: Poly2) -> str:
    """Render as ``"4 - x + y - x*y"``: ascending degree, x before y within a degree."""
    if p.is_zero():
        return "0"
    out = []
    for e in sorted(p.terms, key=lambda e: (e[0] + e[1], -e[0])):
        c = p.coeff(*e)
        mono = _monomial(*e)
        mag = abs(c)
        if not mono:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_rational(mag)}*{mono}"
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(out)


_FACTOR = re.compile(r"^(x|y)(?:\^(\d+))?$")


def parse_poly(text: str) -> Poly2:
    """Inverse of :func:`to_string` (also accepts ``**`` for powers)."""
    s = text.replace("**", "^").strip()
    if not s:
        raise ValueError("empty polynomial text")
    tokens = re.findall(r"[+-]|[^\s+-]+", s)
    terms: dict = {}
    sign = 1
    expect_term = True
    for tok in tokens:
        if tok in "+-":
            if tok == "-":
                sign = -sign
            continue
        coef = Fraction(1)
        i = j = 0
        for factor in tok.split("*"):
            m = _FACTOR.match(factor)
            if m:
                power = int(m.group(2) or 1)
                if m.group(1) == "x":
                    i += power
                else:
                    j += power
            else:
                coef *= as_rational(factor)
        terms[(i, j)] = terms.get((i, j), 0) + sign * coef
        sign = 1
        expect_term = False
    if expect_term:
        raise ValueError(f"no terms in {text!r}")
    return Poly2(terms)


X = Poly2.x()
Y = Poly2.y()


def line(a0: Scalar, a1: Scalar, a2: Scalar) -> Poly2:
    """``a0 + a1*x + a2*y``."""
    return Poly2({(0, 0): a0, (1, 0): a1, (0, 1): a2})


def poly_from_terms(items: Iterable[Tuple[Exp, Scalar]]) -> Poly2:
    out: dict = {}
    for e, c in items:
        out[e] = out.get(e, 0) + as_rational(c)
    return Poly2(out)
