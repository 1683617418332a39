"""Exponent algebra for the half-space trace problem.

Everything here is scalar arithmetic tying together the integrability
exponents: for 1 < p < n and q > p* = np/(n-p), interior L^q control
improves the boundary integrability from p-bar = p(n-1)/(n-p) up to

    r = 1 + q(1 - 1/p),

with the companion truncation exponent beta = q/p - 1, so that
r = q - beta and (r - 1) p' = q hold identically.  All identities are
exact in exact arithmetic; double precision with a 1e-12 tolerance is
used throughout (any larger violation signals a bug, not rounding).

q = infinity is carried as float('inf'); operations that require a
finite q reject it explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ExponentSet",
    "InterpolationExponents",
    "sobolev_conjugate",
    "trace_exponent",
    "beta_exponent",
    "interpolation_exponents",
]

#: Tolerance for the exact exponent identities (relative).
IDENTITY_RTOL = 1e-12


def sobolev_conjugate(p: float, n: int) -> float:
    """Sobolev conjugate p* = np/(n-p); requires 1 <= p < n."""
    if not 1 <= p < n:
        raise ValueError(f"sobolev conjugate needs 1 <= p < n, got p={p}, n={n}")
    return n * p / (n - p)


def trace_exponent(p: float, q: float) -> float:
    """Boundary integrability exponent r = 1 + q(1 - 1/p).

    Defined for p > 1 and q > p; q may be infinite (then r is too).
    """
    if p <= 1:
        raise ValueError(f"trace exponent needs p > 1, got p={p}")
    if q <= p:
        raise ValueError(f"trace exponent needs q > p, got q={q}, p={p}")
    return 1.0 + q * (1.0 - 1.0 / p)


def beta_exponent(p: float, q: float) -> float:
    """Truncation exponent beta = q/p - 1 (> 0); satisfies q - beta = r."""
    if p <= 1:
        raise ValueError(f"beta exponent needs p > 1, got p={p}")
    if q <= p:
        raise ValueError(f"beta exponent needs q > p, got q={q}, p={p}")
    return q / p - 1.0


@dataclass(frozen=True)
class ExponentSet:
    """The full exponent constellation for one (n, p, q) triple.

    Derived fields: p_star, p_bar, r, beta, s = 1 - 1/p.  q must exceed
    p_star; q = inf is allowed and leaves r, beta infinite (the lifting
    operations reject such a set and route to the mollifier extension).
    """

    n: int
    p: float
    q: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need dimension n >= 2, got {self.n}")
        if not 1 < self.p < self.n:
            raise ValueError(f"need 1 < p < n, got p={self.p}, n={self.n}")
        if not self.q > self.p_star:
            raise ValueError(
                f"need q > p* = {self.p_star}, got q={self.q}"
            )

    @property
    def q_is_infinite(self) -> bool:
        return math.isinf(self.q)

    @property
    def p_star(self) -> float:
        return sobolev_conjugate(self.p, self.n)

    @property
    def p_bar(self) -> float:
        """Limit of r as q decreases to p*: p(n-1)/(n-p)."""
        return self.p * (self.n - 1) / (self.n - self.p)

    @property
    def s(self) -> float:
        """Fractional boundary smoothness 1 - 1/p in (0, 1)."""
        return 1.0 - 1.0 / self.p

    @property
    def r(self) -> float:
        return trace_exponent(self.p, self.q)

    @property
    def beta(self) -> float:
        return beta_exponent(self.p, self.q)

    @property
    def p_prime(self) -> float:
        return self.p / (self.p - 1.0)

    def require_finite_q(self, what: str = "operation"):
        if self.q_is_infinite:
            raise ValueError(f"{what} needs finite q; q = inf uses the mollifier route")

    def identity_residuals(self) -> dict[str, float]:
        """Relative residuals of the exact identities (all ~1e-16 unless buggy).

        Keys: ``r_eq_q_minus_beta``, ``holder_pairing`` ((r-1)p' = q),
        ``q_over_beta`` (q/beta = pq/(q-p)), ``p_beta_plus_one`` (p(beta+1) = q).
        """
        self.require_finite_q("identity check")
        q, p, r, beta = self.q, self.p, self.r, self.beta
        return {
            "r_eq_q_minus_beta": abs(r - (q - beta)) / abs(r),
            "holder_pairing": abs((r - 1.0) * self.p_prime - q) / q,
            "q_over_beta": abs(q / beta - p * q / (q - p)) / (q / beta),
            "p_beta_plus_one": abs(p * (beta + 1.0) - q) / q,
        }


@dataclass(frozen=True)
class InterpolationExponents:
    """Exponents of the two interpolation routes that both miss r.

    theta solves 1/q = (1-theta)/p*, giving the complex-interpolation
    target r_tilde = (n-1)q/n > r; theta_min = p/(pq - q + p) is the
    trace-admissibility threshold of the Gagliardo-Nirenberg route with
    supremum p_max = 1/theta_min, which equals r exactly (the endpoint
    itself is not attained by that route).
    """

    theta: float
    p_theta: float
    r_tilde: float
    theta_min: float
    p_max: float


def interpolation_exponents(n: int, p: float, q: float) -> InterpolationExponents:
    """Compute the interpolation-route exponents for 1 < p < n, p* < q < inf.

    Asserts the two comparison facts: p_max = r (to 1e-12) and
    r_tilde > r strictly when q > p*; q = p* is accepted as the
    degenerate endpoint where theta = 0 and r_tilde = r.
    """
    if math.isinf(q):
        raise ValueError("interpolation exponents need finite q")
    p_star = sobolev_conjugate(p, n)
    if not p_star <= q:
        raise ValueError(f"need q >= p* = {p_star}, got q={q}")
    theta = 1.0 - p_star / q
    p_theta = 1.0 / (theta / p + (1.0 - theta) / q)
    r_tilde = (n - 1) * q / n
    theta_min = p / (p * q - q + p)
    p_max = 1.0 / theta_min
    r = trace_exponent(p, q)
    if abs(p_max - r) > IDENTITY_RTOL * max(1.0, abs(r)):
        raise AssertionError(f"p_max = {p_max} != r = {r}")
    if q > p_star and not r_tilde > r:
        raise AssertionError(f"r_tilde = {r_tilde} not > r = {r} at q = {q} > p*")
    return InterpolationExponents(theta, p_theta, r_tilde, theta_min, p_max)
