"""Local type of a singular point of a planar polynomial field.

Non-degenerate points are decided from the determinant and trace of the
Jacobian.  Semi-hyperbolic points (zero determinant, nonzero trace) are
brought to the form ``x' = A(x, y)``, ``y' = lam*y + B(x, y)``; the center
manifold ``y = f(x)`` is expanded as a power series and the lowest term
``a*x**alpha`` of ``g(x) = A(x, f(x))`` decides the type.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

from .exactpoly import Poly2, X, Y, format_rational, substitute
from .field import Matrix2, VectorField, jacobian, translate

DEFAULT_ORDER = 10
MAX_ORDER = 40


class Kind(str, Enum):
    SADDLE = "Saddle"
    NODE_STABLE = "NodeStable"
    NODE_UNSTABLE = "NodeUnstable"
    FOCUS_STABLE = "FocusStable"
    FOCUS_UNSTABLE = "FocusUnstable"
    CENTER_OR_WEAK_FOCUS = "CenterOrWeakFocus"
    SADDLE_NODE = "SaddleNode"
    SEMI_HYP_NODE_UNSTABLE = "SemiHypNodeUnstable"
    SEMI_HYP_SADDLE = "SemiHypSaddle"
    DEGENERATE = "Degenerate"

    @property
    def is_node(self) -> bool:
        return self in (Kind.NODE_STABLE, Kind.NODE_UNSTABLE)

    @property
    def is_focus(self) -> bool:
        return self in (Kind.FOCUS_STABLE, Kind.FOCUS_UNSTABLE)


@dataclass(frozen=True)
class SemiHyperbolicEvidence:
    """Data behind a semi-hyperbolic verdict.

    ``change`` has the kernel vector of the Jacobian as its first column and
    the ``lam``-eigenvector as its second: original offsets are
    ``change @ (center, transverse)``.
    """

    lam: Fraction
    alpha: Optional[int]
    a: Optional[Fraction]
    change: Matrix2
    order: int

    @property
    def hyperbolic_side(self) -> Optional[int]:
        """Side (+1/-1 along the kernel vector) holding the hyperbolic sectors.

        Only meaningful for an even ``alpha``.  The center-manifold flow is
        ``a*x**alpha``; the hyperbolic sectors sit on the side where it has
        the opposite character to the transverse eigenvalue.
        """
        if self.alpha is None or self.alpha % 2:
            return None
        return -1 if (self.a > 0) == (self.lam > 0) else 1

    @property
    def normalized_a(self) -> Optional[Fraction]:
        """``a / lam``: the leading coefficient after rescaling time so ``lam = 1``.

        For odd ``alpha`` its sign, not the sign of ``a``, separates a node
        (positive) from a saddle (negative).
        """
        return None if self.a is None else self.a / self.lam

    @property
    def stable_separatrix_side(self) -> Optional[int]:
        if self.alpha is None or self.alpha % 2:
            return None
        return 1 if self.a < 0 else -1


@dataclass(frozen=True)
class Eigen:
    """Floating-point eigendata, used only for drawing."""

    values: Tuple[Tuple[float, float], ...]
    vectors: Optional[Tuple[Tuple[float, float], ...]] = None


@dataclass(frozen=True)
class Classification:
    kind: Kind
    delta: Fraction
    tau: Fraction
    evidence: Optional[SemiHyperbolicEvidence] = None
    eigen: Optional[Eigen] = None
    note: Optional[str] = None

    @property
    def discriminant(self) -> Fraction:
        return self.tau**2 - 4 * self.delta


@dataclass(frozen=True)
class NormalForm:
    lam: Fraction
    A: Poly2
    B: Poly2
    change: Matrix2


def classify_nondegenerate(delta, tau) -> Classification:
    delta, tau = Fraction(delta), Fraction(tau)
    if delta == 0:
        raise ValueError("delta = 0: use the semi-hyperbolic or degenerate path")
    disc = tau * tau - 4 * delta
    if delta < 0:
        kind = Kind.SADDLE
    elif disc >= 0:
        # tau = 0 is impossible here: disc >= 0 with delta > 0 forces tau != 0
        kind = Kind.NODE_STABLE if tau < 0 else Kind.NODE_UNSTABLE
    elif tau != 0:
        kind = Kind.FOCUS_STABLE if tau < 0 else Kind.FOCUS_UNSTABLE
    else:
        kind = Kind.CENTER_OR_WEAK_FOCUS
    return Classification(kind, delta, tau)


def _normalize(vec) -> Tuple[Fraction, Fraction]:
    lead = vec[0] if vec[0] != 0 else vec[1]
    return (vec[0] / lead, vec[1] / lead)


def _kernel(rows) -> Tuple[Fraction, Fraction]:
    """Nonzero vector annihilated by a rank-one 2x2 matrix."""
    for r1, r2 in rows:
        if r1 != 0 or r2 != 0:
            return _normalize((-r2, r1))
    raise ValueError("matrix has rank zero")


def to_normal_form(f: VectorField, J: Optional[Matrix2] = None) -> NormalForm:
    """Linear change putting a semi-hyperbolic origin into ``(A, lam*y + B)`` form.

    ``f`` must have its singular point at the origin.
    """
    if J is None:
        J = jacobian(f, (0, 0))
    if J.det != 0 or J.trace == 0:
        raise ValueError("origin is not semi-hyperbolic (need det J = 0, trace J != 0)")
    lam = J.trace
    k = _kernel(J.rows())
    shifted = ((J.a11 - lam, J.a12), (J.a21, J.a22 - lam))
    e = _kernel(shifted)
    T = Matrix2(k[0], e[0], k[1], e[1])
    xs = T.a11 * X + T.a12 * Y
    ys = T.a21 * X + T.a22 * Y
    P1 = substitute(f.P, xs, ys)
    Q1 = substitute(f.Q, xs, ys)
    Ti = T.inverse()
    U = Ti.a11 * P1 + Ti.a12 * Q1
    V = Ti.a21 * P1 + Ti.a22 * Q1
    A = U
    B = V - lam * Y
    for name, poly in (("A", A), ("B", B)):
        if poly.order < 2:
            raise ArithmeticError(f"normal form {name} kept terms of order < 2: {poly}")
    return NormalForm(lam, A, B, T)


def _series_powers(f: List[Fraction], jmax: int, order: int) -> List[List[Fraction]]:
    """``f**j`` for ``j <= jmax`` as coefficient lists truncated at ``order``."""
    pw = [[Fraction(1)] + [Fraction(0)] * order]
    for _ in range(jmax):
        prev, nxt = pw[-1], [Fraction(0)] * (order + 1)
        for a, ca in enumerate(prev):
            if ca:
                for b in range(order + 1 - a):
                    if f[b]:
                        nxt[a + b] += ca * f[b]
        pw.append(nxt)
    return pw


def _compose_series(p: Poly2, f: List[Fraction], order: int) -> List[Fraction]:
    """Coefficients of ``p(x, f(x))`` up to ``x**order``."""
    out = [Fraction(0)] * (order + 1)
    if p.is_zero():
        return out
    pw = _series_powers(f, max(j for _, j in p.terms), order)
    for (i, j), c in p.items():
        for d in range(order + 1 - i):
            if pw[j][d]:
                out[i + d] += c * pw[j][d]
    return out


def solve_center_manifold(lam, B: Poly2, order: int) -> Poly2:
    """Series ``f(x)`` with ``lam*f + B(x, f) = 0`` modulo ``x**(order+1)``."""
    lam = Fraction(lam)
    if lam == 0:
        raise ValueError("lam must be nonzero")
    if order < 2:
        raise ValueError("order must be at least 2")
    # B has no terms below order 2, so the x**t coefficient of B(x, f) only
    # involves coefficients of f below t: solve one degree at a time
    f = [Fraction(0)] * (order + 1)
    for t in range(2, order + 1):
        f[t] = -_compose_series(B, f, t)[t] / lam
    return Poly2({(d, 0): c for d, c in enumerate(f)})


def classify_semi_hyperbolic(nf: NormalForm, order: int = DEFAULT_ORDER,
                             max_order: int = MAX_ORDER) -> Classification:
    """Type of the origin of ``x' = A``, ``y' = lam*y + B``.

    The verdict follows the rule as usually quoted for this normal form:
    ``alpha`` odd and ``a > 0`` gives an unstable node, ``alpha`` odd and
    ``a < 0`` a saddle, ``alpha`` even a saddle-node.  That reading
    presumes ``lam > 0``; ``lam`` is kept in the evidence so callers can
    reverse time when it is negative.
    """
    lam = nf.lam
    n = order
    while True:
        f = solve_center_manifold(lam, nf.B, n)
        g = _compose_series(nf.A, [f.coeff(d, 0) for d in range(n + 1)], n)
        alpha, a = next(((d, c) for d, c in enumerate(g) if c), (None, None))
        if alpha is not None:
            break
        if n >= max_order:
            ev = SemiHyperbolicEvidence(lam, None, None, nf.change, n)
            return Classification(Kind.DEGENERATE, Fraction(0), lam, ev,
                                  note=f"g vanishes through order {n}: "
                                       "order too low or the point is not isolated")
        n = min(2 * n, max_order)
    ev = SemiHyperbolicEvidence(lam, alpha, a, nf.change, n)
    return Classification(_semi_hyperbolic_kind(alpha, a), Fraction(0), lam, ev)


def _semi_hyperbolic_kind(alpha: int, a: Fraction) -> Kind:
    if alpha % 2 == 0:
        return Kind.SADDLE_NODE
    return Kind.SEMI_HYP_NODE_UNSTABLE if a > 0 else Kind.SEMI_HYP_SADDLE


_REVERSED = {
    Kind.NODE_STABLE: Kind.NODE_UNSTABLE,
    Kind.NODE_UNSTABLE: Kind.NODE_STABLE,
    Kind.FOCUS_STABLE: Kind.FOCUS_UNSTABLE,
    Kind.FOCUS_UNSTABLE: Kind.FOCUS_STABLE,
}


def reverse_time(c: Classification) -> Classification:
    """Classification of the same point for the field ``-F``.

    The Jacobian changes sign, so ``delta`` is kept and ``tau`` flips; the
    semi-hyperbolic data keep their change of basis and center manifold
    while ``lam`` and ``a`` flip, and the same decision rule is reapplied.
    """
    kind = _REVERSED.get(c.kind, c.kind)
    ev = c.evidence
    if ev is not None:
        a = None if ev.a is None else -ev.a
        ev = SemiHyperbolicEvidence(-ev.lam, ev.alpha, a, ev.change, ev.order)
        if ev.alpha is not None:
            kind = _semi_hyperbolic_kind(ev.alpha, a)
    eig = c.eigen
    if eig is not None:
        vals = tuple((-re, -im) for re, im in reversed(eig.values))
        vecs = None if eig.vectors is None else tuple(reversed(eig.vectors))
        eig = Eigen(vals, vecs)
    return Classification(kind, c.delta, -c.tau, ev, eig, c.note)


def eigen_of(J: Matrix2) -> Eigen:
    """Float eigenvalues (and real eigenvectors when they exist)."""
    tr, det = float(J.trace), float(J.det)
    disc = tr * tr - 4.0 * det
    if disc < 0:
        s = cmath.sqrt(disc)
        vals = ((tr / 2, s.imag / 2), (tr / 2, -s.imag / 2))
        return Eigen(vals, None)
    s = math.sqrt(disc)
    lams = ((tr + s) / 2, (tr - s) / 2)
    a11, a12, a21, a22 = (float(v) for v in (J.a11, J.a12, J.a21, J.a22))
    vecs = []
    for lam in lams:
        # pick the better-conditioned row of (J - lam I)
        r1 = (a11 - lam, a12)
        r2 = (a21, a22 - lam)
        r = r1 if math.hypot(*r1) >= math.hypot(*r2) else r2
        if math.hypot(*r) < 1e-300:
            # J = lam I: any direction; take the axes
            v = (1.0, 0.0) if not vecs else (0.0, 1.0)
        else:
            v = (-r[1], r[0])
        nrm = math.hypot(*v)
        vecs.append((v[0] / nrm, v[1] / nrm))
    if disc == 0 and vecs[0] == vecs[1] and a12 == 0 and a21 == 0:
        vecs[1] = (0.0, 1.0) if abs(vecs[0][0]) > 0.5 else (1.0, 0.0)
    return Eigen(tuple((l, 0.0) for l in lams), tuple(vecs))


def classify_point(f: VectorField, at, order: int = DEFAULT_ORDER) -> Classification:
    """Classify the singular point ``at`` of ``f`` exactly."""
    if not f.is_singular(at):
        raise ValueError(f"({', '.join(format_rational(Fraction(v)) for v in at)}) is not a singular point")
    J = jacobian(f, at)
    delta, tau = J.det, J.trace
    eig = eigen_of(J)
    if delta != 0:
        c = classify_nondegenerate(delta, tau)
    elif tau != 0:
        nf = to_normal_form(translate(f, at), J)
        c = classify_semi_hyperbolic(nf, order)
    else:
        c = Classification(Kind.DEGENERATE, delta, tau,
                           note="linear part nilpotent or zero; not analysed")
    return Classification(c.kind, c.delta, c.tau, c.evidence, eig, c.note)
