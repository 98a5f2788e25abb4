"""Doppler null specifications and the induced convolution-subspace algebra.

A null specification asks the range-sidelobe factor F(theta) = sum y_m e^{j theta m}
to vanish to prescribed orders at theta = 0 and at mirror pairs +/-theta_i.
Equivalently, the polynomial y(z) must be divisible by the annihilator

    a(z) = (1 - z)^k0 * prod_i (1 - 2 z cos(theta_i) + z^2)^k_i,

so y = a (x) b for some free coefficient vector b. The convolution matrix A,
its orthonormal column basis A_bar, and the weighted quadratic form
Diag(w) A_bar A_bar^T Diag(w) are what the waveform optimizer consumes.

The convolution matrix can be very ill conditioned at high null orders
(kappa ~ 1e10 at m = 50), which would leave float64-built bases with null
violations near the verification tolerance. The basis is therefore built in
extended precision (numpy longdouble) and rounded to float64 only at the
public surface; the longdouble factors are kept for amplitude recovery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .sequences import WindowTemplate

_LD = np.longdouble


@dataclass(frozen=True)
class NullSpec:
    """Requested Doppler nulls: order k0 at zero plus (theta_i, k_i) pairs.

    theta values must lie strictly inside (0, pi); the mirror null at
    -theta_i is implied because the weights are real.
    """

    k0: int
    nulls: tuple[tuple[float, int], ...] = ()

    def __post_init__(self):
        if self.k0 < 0 or self.k0 != int(self.k0):
            raise ValueError(f"k0 must be a nonnegative integer, got {self.k0}")
        norm = []
        for theta, k in self.nulls:
            theta = float(theta)
            if not 0.0 < theta < math.pi:
                raise ValueError(f"null angle must lie strictly inside (0, pi), got {theta}")
            if k < 1 or k != int(k):
                raise ValueError(f"null order must be a positive integer, got {k}")
            norm.append((theta, int(k)))
        thetas = [t for t, _ in norm]
        if len(set(thetas)) != len(thetas):
            raise ValueError("null angles must be pairwise distinct")
        object.__setattr__(self, "nulls", tuple(norm))

    @property
    def total_order(self) -> int:
        """K = k0 + 2 sum(k_i); each theta null binds a mirror pair."""
        return self.k0 + 2 * sum(k for _, k in self.nulls)

    def validate_for(self, m: int) -> None:
        if self.total_order > m - 1:
            raise ValueError(
                f"total null order K={self.total_order} must satisfy K <= M-1 "
                f"for M={m} pulses"
            )


def annihilator_coeffs(spec: NullSpec, legacy_quadratic: bool = False) -> np.ndarray:
    """Coefficients of the annihilating polynomial, ascending powers.

    The quadratic factor for a null at theta is (1 - 2 z cos(theta) + z^2),
    whose roots are exactly e^{+/- j theta}. With ``legacy_quadratic`` the
    factor (1 - z cos(theta) + z^2) is used instead; its roots sit at
    arccos(cos(theta)/2) rather than theta, so it is kept only for
    compatibility studies.

    Returns a longdouble array of length K+1 (exact integers when there are
    no theta nulls).
    """
    a = np.array([1], dtype=_LD)
    step = np.array([1, -1], dtype=_LD)
    for _ in range(spec.k0):
        a = np.convolve(a, step)
    for theta, k in spec.nulls:
        c = np.cos(_LD(theta))
        factor = np.array([1, -c if legacy_quadratic else -2 * c, 1], dtype=_LD)
        for _ in range(k):
            a = np.convolve(a, factor)
    return a


def _mgs(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Modified Gram-Schmidt with one reorthogonalization pass; A = Q R."""
    m, n = A.shape
    Q = np.zeros((m, n), dtype=A.dtype)
    R = np.zeros((n, n), dtype=A.dtype)
    for j in range(n):
        v = A[:, j].copy()
        for _ in range(2):
            for i in range(j):
                c = Q[:, i] @ v
                R[i, j] += c
                v -= c * Q[:, i]
        nrm = np.sqrt(v @ v)
        if nrm == 0:
            raise ValueError("convolution matrix is numerically rank deficient")
        R[j, j] = nrm
        Q[:, j] = v / nrm
    return Q, R


@dataclass(frozen=True)
class ConstraintBasis:
    """Convolution matrix A, orthonormal basis A_bar for its range, and the
    extended-precision factors used for exact-subspace amplitude recovery."""

    a: np.ndarray
    A: np.ndarray
    a_bar: np.ndarray
    m: int
    a_ld: np.ndarray = field(repr=False)
    q_ld: np.ndarray = field(repr=False)
    r_ld: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        """Total null order K (number of constrained degrees of freedom)."""
        return self.m - self.A.shape[1]


def constraint_basis(a, m: int) -> ConstraintBasis:
    """Build the m x (m-K) convolution matrix for ``a`` and orthonormalize it.

    A b equals the linear convolution a (x) b for every b. Raises when the
    null order K = len(a)-1 exceeds m-1, which would leave no free
    coefficients.
    """
    a_ld = np.asarray(a, dtype=_LD)
    if a_ld.ndim != 1 or a_ld.size == 0:
        raise ValueError("coefficient sequence must be a nonempty 1-D array")
    K = len(a_ld) - 1
    if K >= m:
        raise ValueError(
            f"null order K={K} with m={m} pulses violates K <= M-1; "
            "reduce the requested null orders"
        )
    A_ld = np.zeros((m, m - K), dtype=_LD)
    for j in range(m - K):
        A_ld[j : j + K + 1, j] = a_ld
    q_ld, r_ld = _mgs(A_ld)
    return ConstraintBasis(
        a=a_ld.astype(float),
        A=A_ld.astype(float),
        a_bar=q_ld.astype(float),
        m=m,
        a_ld=a_ld,
        q_ld=q_ld,
        r_ld=r_ld,
    )


@dataclass(frozen=True)
class QuadraticForm:
    """Symmetric PSD matrix Diag(w) A_bar A_bar^T Diag(w) of the two-way
    partitioning objective."""

    a_tilde: np.ndarray

    @property
    def m(self) -> int:
        return self.a_tilde.shape[0]


def quadratic_form(basis: ConstraintBasis, window: WindowTemplate) -> QuadraticForm:
    if window.m != basis.m:
        raise ValueError(f"window length {window.m} does not match pulse count {basis.m}")
    w = window.values
    at = (w[:, None] * basis.a_bar) @ (basis.a_bar.T * w[None, :])
    return QuadraticForm(a_tilde=(at + at.T) / 2.0)


def null_residuals(y, spec: NullSpec) -> np.ndarray:
    """Scaled moment residuals of y against the requested nulls.

    For order p at theta the residual is |sum_m (m/M)^p y_m e^{j theta m}|;
    every entry is zero iff the polynomial y(z) carries the requested nulls.
    The 1/M power scaling keeps all residuals on the common tolerance
    1e-8 * M regardless of p.
    """
    y = np.asarray(y, dtype=float)
    m = len(y)
    mm = np.arange(m, dtype=float) / m
    out = []
    for p in range(spec.k0):
        out.append(abs(float(np.sum(mm**p * y))))
    for theta, k in spec.nulls:
        carrier = np.exp(1j * theta * np.arange(m))
        for p in range(k):
            out.append(abs(complex(np.sum(mm**p * y * carrier))))
    return np.array(out)


def max_null_violation(y, spec: NullSpec) -> float:
    """Worst scaled moment residual; compare against 1e-8 * len(y)."""
    res = null_residuals(y, spec)
    return float(res.max()) if res.size else 0.0


def division_remainder(y, spec: NullSpec, legacy_quadratic: bool = False) -> np.ndarray:
    """Minimum-norm remainder of y modulo the annihilator polynomial.

    Computed as the component of y orthogonal to the annihilator's
    convolution subspace, with the subspace basis built independently in
    extended precision. Naive long division is meaningless here: dividing by
    a polynomial with unit-circle roots of high multiplicity amplifies
    float noise by the inverse-filter growth (1e12 at order 40), so even an
    exactly divisible y would report a garbage remainder.
    """
    y = np.asarray(y, dtype=_LD)
    a = annihilator_coeffs(spec, legacy_quadratic=legacy_quadratic)
    K = len(a) - 1
    m = len(y)
    if K == 0:
        return np.zeros(m)
    if K > m - 1:
        raise ValueError("null order exceeds sequence length budget")
    A_ld = np.zeros((m, m - K), dtype=_LD)
    for j in range(m - K):
        A_ld[j : j + K + 1, j] = a
    q, _ = _mgs(A_ld)
    rem = y - q @ (q.T @ y)
    return rem.astype(float)
