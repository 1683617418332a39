"""Independent oracles the tests check the fast paths against.

These stay deliberately naive: the literal two-loop double sum (Kahan
compensated), a brute-force maximal operator, exact rational exponent
algebra via sympy.  None of them share code with the implementations they
check.
"""

from __future__ import annotations

import math

import numpy as np
import sympy as sp


def seminorm_two_loop(values, coords, weights, kexp: float, p: float) -> float:
    """Literal double-loop Gagliardo sum with compensated accumulation.

    Plain Python floats throughout: independent of the tiled/vectorized
    implementation path and fast enough for 10^3-node grids.
    """
    vals = [float(v) for v in np.asarray(values, dtype=float).ravel()]
    pts = [tuple(float(c) for c in row) for row in np.asarray(coords, dtype=float)]
    wts = [float(w) for w in np.asarray(weights, dtype=float).ravel()]
    n = len(vals)
    dim = len(pts[0])
    total = 0.0
    comp = 0.0
    for i in range(n):
        vi = vals[i]
        xi = pts[i]
        wi = wts[i]
        for j in range(n):
            if j == i:
                continue
            diff = abs(vi - vals[j])
            if diff == 0.0:
                continue
            xj = pts[j]
            if dim == 1:
                dist = abs(xi[0] - xj[0])
            else:
                dist = math.hypot(xi[0] - xj[0], xi[1] - xj[1])
            term = diff**p / dist**kexp * wi * wts[j]
            y = term - comp
            t = total + y
            comp = (t - total) - y
            total = t
    return total ** (1.0 / p)


def maximal_brute_force(values, coords, radii) -> np.ndarray:
    """Strict-ball means, max over radii, one node at a time."""
    values = np.abs(np.asarray(values, dtype=float).ravel())
    coords = np.asarray(coords, dtype=float)
    out = np.zeros(values.size)
    for i in range(values.size):
        d = np.sqrt(np.sum((coords - coords[i]) ** 2, axis=1))
        best = 0.0
        for r in radii:
            inside = d * (1.0 + 1e-9) < r
            if inside.any():
                best = max(best, float(values[inside].mean()))
        out[i] = best
    return out


def interpolation_exact(n: int, p, q) -> dict:
    """Remark-style interpolation exponents in exact rational arithmetic."""
    n_, p_, q_ = sp.Integer(n), sp.nsimplify(p), sp.nsimplify(q)
    p_star = n_ * p_ / (n_ - p_)
    theta = 1 - p_star / q_
    p_theta = 1 / (theta / p_ + (1 - theta) / q_)
    r_tilde = (n_ - 1) * q_ / n_
    theta_min = p_ / (p_ * q_ - q_ + p_)
    p_max = 1 / theta_min
    r = 1 + q_ * (1 - 1 / p_)
    return {
        "p_star": float(p_star),
        "theta": float(theta),
        "p_theta": float(p_theta),
        "r_tilde": float(r_tilde),
        "theta_min": float(theta_min),
        "p_max": float(p_max),
        "r": float(r),
    }


def strip_lq_quadrature(a: float, b: float, q: float, panels: int = 20_000) -> float:
    """Midpoint quadrature of the unit-interval |linear|^q integral."""
    theta = (np.arange(panels) + 0.5) / panels
    return float(np.mean(np.abs((1 - theta) * a + theta * b) ** q))


def holomorphic_kernel_dim(degree: int) -> int:
    """Real dimension of {(Re g, -Im g): g holomorphic poly, deg <= d}."""
    return 2 * (degree + 1)
