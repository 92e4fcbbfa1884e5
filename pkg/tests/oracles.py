"""Independent numeric and symbolic cross-checks used by the tests.

Nothing here imports the polynomial or classification code under test.
"""

import math

import numpy as np


def sis_PQ(b, c, k, m):
    b, c, k, m = (float(v) for v in (b, c, k, m))

    def P(x, y):
        return -b * x * y - m * x + c * y + m * k

    def Q(x, y):
        return b * x * y - (m + c) * y

    return P, Q


def fd_jacobian(P, Q, x, y, h=1e-5):
    """Central differences; exact up to rounding for quadratic fields."""
    return np.array([
        [(P(x + h, y) - P(x - h, y)) / (2 * h), (P(x, y + h) - P(x, y - h)) / (2 * h)],
        [(Q(x + h, y) - Q(x - h, y)) / (2 * h), (Q(x, y + h) - Q(x, y - h)) / (2 * h)],
    ])


def eigen_signs(J, guard=1e-9):
    """Signs of the real parts of the eigenvalues, None where |Re| <= guard."""
    vals = np.linalg.eigvals(J)
    return [None if abs(v.real) <= guard else (1 if v.real > 0 else -1) for v in vals]


def sector_structure(F, radius=1e-2, samples=360):
    """Count hyperbolic and parabolic sectors of an isolated singular point at the origin.

    Characteristic directions are the zeros of the angular flow x*y' - y*x' on a
    small circle; between two consecutive ones the sector is hyperbolic when the
    radial flow has opposite signs on its two boundary rays.  Adjacent
    non-hyperbolic pieces merge into one parabolic sector.
    Returns (n_hyperbolic, n_parabolic, boundary_angles_deg, characteristic_angles_deg).
    """
    def ang(th):
        x, y = radius * math.cos(th), radius * math.sin(th)
        fx, fy = F(x, y)
        return x * fy - y * fx

    def rad(th):
        x, y = radius * math.cos(th), radius * math.sin(th)
        fx, fy = F(x, y)
        return x * fx + y * fy

    ths = [2 * math.pi * (i + 0.5) / samples for i in range(samples)]
    vals = [ang(t) for t in ths]
    chars = []
    for i in range(samples):
        a, b = ths[i], ths[(i + 1) % samples] + (2 * math.pi if i == samples - 1 else 0.0)
        fa, fb = vals[i], vals[(i + 1) % samples]
        if (fa > 0) != (fb > 0):
            for _ in range(60):
                mid = 0.5 * (a + b)
                fm = ang(mid)
                if (fm > 0) == (fa > 0):
                    a, fa = mid, fm
                else:
                    b = mid
            chars.append((0.5 * (a + b)) % (2 * math.pi))
    chars.sort()
    if not chars:
        return 0, 0, [], []
    signs = [rad(t) > 0 for t in chars]
    n = len(chars)
    pieces = ["H" if signs[i] != signs[(i + 1) % n] else "P" for i in range(n)]
    boundaries = [chars[(i + 1) % n] for i in range(n)
                  if pieces[i] != "P" or pieces[(i + 1) % n] != "P"]
    # merge cyclic runs of P
    hyper = pieces.count("H")
    if hyper == 0:
        parab = 1
    else:
        parab = 0
        for i in range(n):
            if pieces[i] == "P" and pieces[i - 1] != "P":
                parab += 1
    deg = [math.degrees(t) for t in chars]
    bdeg = sorted({round(math.degrees(t), 9) for t in boundaries})
    return hyper, parab, bdeg, deg


def angle_to_lines(theta_deg, directions):
    """Smallest angle (degrees) between a ray and the lines spanned by ``directions``."""
    best = 180.0
    for dx, dy in directions:
        phi = math.degrees(math.atan2(dy, dx))
        d = (theta_deg - phi) % 180.0
        best = min(best, d, 180.0 - d)
    return best
