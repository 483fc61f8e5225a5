"""Spectrum of the linearized ring system.

Stacking headway perturbations ``y`` over velocity perturbations ``u`` turns
the linearized dynamics into ``z' = M z`` with the 2n x 2n block matrix

    M = [[0, A], [C, B]]

where A is the circulant forward difference, C = diag(alpha_j), and B couples
each vehicle to itself (-beta_j) and its leader (+gamma_j).  Perturbations
live on the subspace where the headway components sum to zero; there the
spectrum of M is its full spectrum minus the structural simple eigenvalue at
zero.  Two independent reformulations are provided for cross-checking: the
characteristic polynomial in product form and the transfer product whose
unit level set characterizes the eigenvalues.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrumError, PoleError
from .linearize import LinearTrio

# |eigenvalue| below EIG_ZERO_RTOL * ||M||_inf marks the structural zero
EIG_ZERO_RTOL = 1e-8

# beyond this many factors, products are accumulated as complex logs
_LOG_PRODUCT_CUTOFF = 64


@dataclass(frozen=True)
class RingSystem:
    """Trios of the n vehicles, ordered as they follow each other on the ring."""

    trios: tuple[LinearTrio, ...]

    def __post_init__(self):
        if len(self.trios) < 1:
            raise ValueError("a ring system needs at least one vehicle")

    @property
    def n(self) -> int:
        return len(self.trios)


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    """Eigenvalues on the zero-sum-headway subspace (2n-1 values, sorted)."""

    eigenvalues: np.ndarray
    abscissa: float
    zero_excluded: bool


def assemble(sys: RingSystem) -> np.ndarray:
    """The 2n x 2n ring matrix; requires n >= 2."""
    n = sys.n
    if n < 2:
        raise ValueError(f"ring matrix needs n >= 2 vehicles, got {n}")
    alpha = np.array([t.alpha for t in sys.trios])
    beta = np.array([t.beta for t in sys.trios])
    gamma = np.array([t.gamma for t in sys.trios])

    a_blk = -np.eye(n)
    b_blk = np.diag(-beta)
    rows = np.arange(n)
    lead = (rows + 1) % n
    a_blk[rows, lead] = 1.0
    b_blk[rows, lead] = gamma

    m = np.zeros((2 * n, 2 * n))
    m[:n, n:] = a_blk
    m[n:, :n] = np.diag(alpha)
    m[n:, n:] = b_blk
    return m


def eigenvalues_on_H(sys: RingSystem) -> SpectrumReport:
    """Spectrum restricted to the zero-sum-headway subspace.

    Computes all 2n eigenvalues densely, removes the one structural zero, and
    reports the spectral abscissa of the remaining 2n-1.  Raises
    :class:`DegenerateSpectrumError` if the zero eigenvalue is not simple at
    tolerance, which signals an admissibility violation upstream.
    """
    m = assemble(sys)
    lam = np.linalg.eigvals(m)
    tol = EIG_ZERO_RTOL * float(np.abs(m).sum(axis=1).max())
    near_zero = np.abs(lam) <= tol
    if int(near_zero.sum()) != 1:
        raise DegenerateSpectrumError(
            f"expected one eigenvalue within {tol} of zero, found {int(near_zero.sum())}"
        )
    kept = np.sort_complex(lam[~near_zero])
    return SpectrumReport(
        eigenvalues=kept,
        abscissa=float(kept.real.max()),
        zero_excluded=True,
    )


def _renorm(p: complex, e: int) -> tuple[complex, int]:
    m = abs(p)
    if m > 2.0**512:
        return p * 2.0**-512, e + 512
    if 0.0 < m < 2.0**-512:
        return p * 2.0**512, e - 512
    return p, e


def _ldexp_sat(x: float, e: int) -> float:
    try:
        return math.ldexp(x, e)
    except OverflowError:
        return math.copysign(math.inf, x)


def char_poly_eval(sys: RingSystem, lam: complex) -> complex:
    """Characteristic polynomial of the ring matrix in product form.

    Evaluates ``prod(lam^2 + beta_j lam + alpha_j) - prod(gamma_j lam + alpha_j)``
    with power-of-two rescaling so intermediate products cannot overflow.
    The value vanishes at every eigenvalue, including the structural zero.
    """
    lam = complex(lam)
    p_quad, e_quad = 1.0 + 0.0j, 0
    p_lin, e_lin = 1.0 + 0.0j, 0
    for t in sys.trios:
        p_quad *= lam * lam + t.beta * lam + t.alpha
        p_lin *= t.gamma * lam + t.alpha
        p_quad, e_quad = _renorm(p_quad, e_quad)
        p_lin, e_lin = _renorm(p_lin, e_lin)
    e = max(e_quad, e_lin)
    diff = p_quad * 2.0 ** (e_quad - e) - p_lin * 2.0 ** (e_lin - e)
    return complex(_ldexp_sat(diff.real, e), _ldexp_sat(diff.imag, e))


def transfer_product(sys: RingSystem, z: complex) -> complex:
    """Product of the per-vehicle transfer factors at ``z``.

    Each factor is ``(gamma_j z + alpha_j) / (z^2 + beta_j z + alpha_j)``;
    eigenvalues of the ring system are exactly the points where the product
    equals one.  For large n the factors are accumulated as complex logs to
    avoid overflow and underflow.  Raises :class:`PoleError` at a pole.
    """
    z = complex(z)
    factors = []
    for t in sys.trios:
        den = z * z + t.beta * z + t.alpha
        if den == 0:
            raise PoleError(f"transfer product evaluated at pole z={z}")
        factors.append((t.gamma * z + t.alpha) / den)
    if len(factors) <= _LOG_PRODUCT_CUTOFF:
        out = 1.0 + 0.0j
        for f in factors:
            out *= f
        return out
    if any(f == 0 for f in factors):
        return 0.0 + 0.0j
    acc = 0.0 + 0.0j
    for f in factors:
        acc += cmath.log(f)
    if acc.real > 700.0:  # would overflow exp; the product is effectively infinite
        return complex(math.inf, math.inf)
    return cmath.exp(acc)
