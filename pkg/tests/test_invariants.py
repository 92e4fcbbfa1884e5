import random
from fractions import Fraction

import pytest

from sisport.exactpoly import Poly2, X, Y, line, to_string
from sisport.field import SisParams, VectorField, make_sis_field
from sisport.invariants import (
    InfiniteFamilyError,
    cofactor_of,
    find_invariant_lines,
    lie_derivative,
    verify_invariant_line,
)


def lines_of(field):
    return [(to_string(c.f), to_string(c.cofactor)) for c in find_invariant_lines(field)]


def test_sis_generic():
    assert lines_of(make_sis_field(SisParams(1, 1, 4, 1))) == [
        ("-4 + x + y", "-1"),
        ("y", "-2 + x"),
    ]
    assert lines_of(make_sis_field(SisParams(1, 1, 2, 1))) == [
        ("-2 + x + y", "-1"),
        ("y", "-2 + x"),
    ]


def test_sis_third_line_when_c_equals_bk():
    got = lines_of(make_sis_field(SisParams(1, 4, 4, 1)))
    assert ("-4 + x", "-1 - y") in got
    assert len(got) == 3


def test_verify_examples():
    b, c, k, m = 2, 3, 5, 7
    f = make_sis_field(SisParams(b, c, k, m))
    assert verify_invariant_line(f, Y, b * X - m - c)
    assert verify_invariant_line(f, k - X - Y, Poly2.const(-m))
    assert not verify_invariant_line(f, Y, Poly2())
    g = make_sis_field(SisParams(1, 4, 4, 1))
    assert verify_invariant_line(g, 4 - X, -1 - Y)
    assert not verify_invariant_line(f, k - X, -m - b * Y)


def test_cofactor_of():
    f = make_sis_field(SisParams(1, 1, 4, 1))
    assert cofactor_of(f, Y) == X - 2
    # x is not invariant: P(0, y) = y + 4 is not identically zero
    assert cofactor_of(f, X) is None
    with pytest.raises(ValueError):
        cofactor_of(f, Poly2.const(3))


def test_lie_derivative():
    f = VectorField(Y, -X)
    assert lie_derivative(f, X**2 + Y**2).is_zero()


def test_requires_quadratic():
    with pytest.raises(ValueError):
        find_invariant_lines(VectorField(X, Y))


def test_continuum_raises():
    # every line through the origin is invariant
    with pytest.raises(InfiniteFamilyError):
        find_invariant_lines(VectorField(X**2, X * Y))


def test_radial_quadratic_part_few_lines():
    # quadratic part (x*x, y*x); the lower terms leave only y = 0
    assert lines_of(VectorField(X**2 + 1, X * Y)) == [("y", "x")]


def test_radial_quadratic_part_with_isolated_lines():
    f = VectorField(X**2 + X, X * Y + 2 * Y)
    got = {to_string(c.f) for c in find_invariant_lines(f)}
    assert got == {"x", "y", "1 + x"}


GRID = sorted({Fraction(p, q) for p in range(-4, 5) for q in (1, 2)})


def brute_lines(P, Q):
    """Lines over a small grid whose Lie derivative vanishes at three points of the line."""
    out = set()
    for a1 in (0, 1):
        for a2 in (GRID if a1 else [Fraction(1)]):
            for a0 in GRID:
                if a2 != 0:
                    pts = [(x, -(a0 + a1 * x) / a2) for x in (Fraction(0), Fraction(1), Fraction(-2))]
                else:
                    pts = [(-a0, y) for y in (Fraction(0), Fraction(1), Fraction(-2))]
                if all(a1 * P(x, y) + a2 * Q(x, y) == 0 for x, y in pts):
                    out.add((a0, Fraction(a1), a2))
    return out


def test_search_against_enumeration():
    rng = random.Random(6)
    monos = [(i, j) for i in range(3) for j in range(3) if i + j <= 2]
    seen_lines = 0
    for _ in range(60):
        # Lotka-Volterra-like fields carry invariant lines fairly often
        cp = {e: Fraction(rng.choice([0, 0, 1, -1, 2])) for e in monos}
        cq = {e: Fraction(rng.choice([0, 0, 1, -1, -2])) for e in monos}
        if rng.random() < 0.5:
            cp[(0, 0)] = cp[(0, 1)] = cp[(0, 2)] = Fraction(0)
        Pp, Qp = Poly2(cp), Poly2(cq)
        f = VectorField(Pp, Qp)
        if f.degree != 2:
            continue
        P = lambda x, y, c=cp: sum(v * x**i * y**j for (i, j), v in c.items())  # noqa: E731
        Q = lambda x, y, c=cq: sum(v * x**i * y**j for (i, j), v in c.items())  # noqa: E731
        try:
            found = find_invariant_lines(f)
        except InfiniteFamilyError:
            continue
        for c in found:
            assert verify_invariant_line(f, c.f, c.cofactor)
        got = {(c.f.coeff(0, 0), c.f.coeff(1, 0), c.f.coeff(0, 1)) for c in found}
        in_grid = {t for t in got if t[0] in GRID and (t[1] == 0 or t[2] in GRID)}
        want = brute_lines(P, Q)
        assert in_grid == want
        seen_lines += len(want)
    assert seen_lines > 10


def test_sis_families():
    rng = random.Random(12)
    for _ in range(30):
        b, c, k, m = (Fraction(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(4))
        f = make_sis_field(SisParams(b, c, k, m))
        got = {c_.f for c_ in find_invariant_lines(f)}
        assert Y in got and line(-k, 1, 1) in got
        assert (line(-k, 1, 0) in got) == (c == b * k)
        g = make_sis_field(SisParams(b, b * k, k, m))
        assert line(-k, 1, 0) in {c_.f for c_ in find_invariant_lines(g)}
