"""Invariant algebraic curves: cofactors and a search for invariant lines."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .exactpoly import Poly2, X, divide_exact, line, partial, rational_roots
from .field import VectorField, degree


@dataclass(frozen=True)
class InvariantCurve:
    f: Poly2
    cofactor: Poly2


def lie_derivative(field: VectorField, f: Poly2) -> Poly2:
    """``P*df/dx + Q*df/dy``."""
    return field.P * partial(f, "x") + field.Q * partial(f, "y")


def cofactor_of(field: VectorField, candidate: Poly2) -> Optional[Poly2]:
    if candidate.is_constant():
        raise ValueError("invariant curves must be non-constant")
    return divide_exact(lie_derivative(field, candidate), candidate)


def verify_invariant_line(field: VectorField, candidate: Poly2, cofactor: Poly2) -> bool:
    return (lie_derivative(field, candidate) - cofactor * candidate).is_zero()


class InfiniteFamilyError(ArithmeticError):
    """Raised when a continuum of invariant lines exists."""


def _roots_or_all(coeffs: Sequence[Fraction]):
    if all(c == 0 for c in coeffs):
        raise InfiniteFamilyError("coefficient equations vanish identically; "
                                  "lines are not isolated")
    return rational_roots(coeffs)


def _poly_coeffs_in(t_terms):
    """Collect ascending coefficients from a {power: coeff} dict."""
    if not t_terms:
        return [Fraction(0)]
    top = max(t_terms)
    return [Fraction(t_terms.get(i, 0)) for i in range(top + 1)]


def _lines_with_x(field: VectorField) -> List[InvariantCurve]:
    """Lines ``a0 + x + a2*y``.

    With ``K = k0 + k1*x + k2*y`` the degree-2 part of
    ``P + a2*Q = K*L`` gives ``k1``, ``k2`` and a cubic in ``a2``; the
    remaining equations are linear in ``(k0, a0)`` plus one bilinear one.
    """
    P, Q = field.P, field.Q
    p20, p11, p02 = P.coeff(2, 0), P.coeff(1, 1), P.coeff(0, 2)
    q20, q11, q02 = Q.coeff(2, 0), Q.coeff(1, 1), Q.coeff(0, 2)
    # k1 = p20 + a2 q20 ; k2 = p11 + a2 q11 - k1 a2 ; y^2: p02 + a2 q02 = k2 a2
    cubic = {
        0: p02,
        1: q02 - p11,
        2: -q11 + p20,
        3: q20,
    }
    if all(v == 0 for v in cubic.values()):
        a2_values = _radial_a2_values(field)
    else:
        a2_values = rational_roots(_poly_coeffs_in(cubic))
    out = []
    for a2 in a2_values:
        k1 = p20 + a2 * q20
        k2 = p11 + a2 * q11 - k1 * a2
        out.extend(_finish(field, Fraction(1), a2, k1, k2))
    return out


def _radial_a2_values(field: VectorField) -> List[Fraction]:
    """Candidate ``a2`` when the quadratic part is ``(x*M, y*M)``.

    Then ``k1``, ``k2`` do not depend on ``a2``.  Eliminating ``k0`` and
    ``a0`` from the lower equations leaves one polynomial in ``a2``; the
    root of ``k2 - k1*a2`` (where that elimination divides by zero) is
    added separately.
    """
    P, Q = field.P, field.Q
    k1, k2 = P.coeff(2, 0), P.coeff(1, 1)
    t = X
    rx = P.coeff(1, 0) + t * Q.coeff(1, 0)
    ry = P.coeff(0, 1) + t * Q.coeff(0, 1)
    r0 = P.coeff(0, 0) + t * Q.coeff(0, 0)
    D = k2 - k1 * t
    N = ry - t * rx
    elim = (rx * D - k1 * N) * N - r0 * D * D
    values = _roots_or_all(elim.univariate("x"))
    if k1 != 0 and k2 / k1 not in values:
        values.append(k2 / k1)
    return values


def _lines_with_y(field: VectorField) -> List[InvariantCurve]:
    """Lines ``a0 + y``: degree-2 part ``Q2 = (k1 x + k2 y) y``."""
    Q = field.Q
    if Q.coeff(2, 0) != 0:
        return []
    k1, k2 = Q.coeff(1, 1), Q.coeff(0, 2)
    return _finish(field, Fraction(0), Fraction(1), k1, k2)


def _finish(field: VectorField, a1, a2, k1, k2) -> List[InvariantCurve]:
    """Solve the degree <= 1 equations for ``(k0, a0)``.

    x:     r_x = k0*a1 + k1*a0
    y:     r_y = k0*a2 + k2*a0
    const: r_0 = k0*a0
    """
    P, Q = field.P, field.Q
    rx = a1 * P.coeff(1, 0) + a2 * Q.coeff(1, 0)
    ry = a1 * P.coeff(0, 1) + a2 * Q.coeff(0, 1)
    r0 = a1 * P.coeff(0, 0) + a2 * Q.coeff(0, 0)
    det = a1 * k2 - a2 * k1
    sols = []
    if det != 0:
        k0 = (rx * k2 - ry * k1) / det
        a0 = (a1 * ry - a2 * rx) / det
        if k0 * a0 == r0:
            sols.append((k0, a0))
    else:
        # rows (a1, k1) and (a2, k2) are parallel; (a1, a2) != 0
        if a1 != 0:
            # k0 = (rx - k1 a0) / a1, need consistency of the y row
            if a2 * rx != a1 * ry:
                return []
            # r0 = a0 (rx - k1 a0) / a1  ->  -k1 a0^2 + rx a0 - a1 r0 = 0
            quad = [-a1 * r0, rx, -k1]
            for a0 in _roots_or_all(quad):
                sols.append(((rx - k1 * a0) / a1, a0))
        else:
            # a1 = 0, a2 = 1 and det = 0 force k1 = 0: the x row reads rx = 0
            if rx != 0:
                return []
            quad = [-a2 * r0, ry, -k2]
            for a0 in _roots_or_all(quad):
                sols.append(((ry - k2 * a0) / a2, a0))
    out = []
    for k0, a0 in sols:
        L = line(a0, a1, a2)
        K = line(k0, k1, k2)
        if verify_invariant_line(field, L, K):
            out.append(InvariantCurve(L, K))
    return out


def find_invariant_lines(field: VectorField) -> List[InvariantCurve]:
    """Every rational invariant line with a cofactor of degree at most one.

    Lines are normalised so the first nonzero of ``(a1, a2)`` is 1.  A field
    with a continuum of invariant lines raises :class:`InfiniteFamilyError`.
    """
    if degree(field) != 2:
        raise ValueError("line search is implemented for quadratic fields only")
    found = _lines_with_x(field) + _lines_with_y(field)
    seen = set()
    out = []
    for curve in found:
        if curve.f in seen:
            continue
        seen.add(curve.f)
        out.append(curve)
    out.sort(key=lambda c: (-c.f.coeff(1, 0), -c.f.coeff(0, 1), c.f.coeff(0, 0)))
    return out
