"""Waveform design: randomized rounding, amplitude recovery, and the full
transmit-order / receive-weight pipelines.

The designed object is a length-M vector y whose polynomial carries the
requested Doppler nulls, split as transmit order s = sign(y) and receive
weights w = abs(y). The pipeline is

    nulls -> annihilator -> orthonormal basis -> quadratic form
          -> SDP relaxation -> randomized rounding -> amplitude recovery,

where rounding extracts a sign vector from the relaxation by Gaussian
hyperplane sampling and amplitude recovery projects the windowed sign
vector back onto the null-constrained subspace.

Baselines: alternating order with binomial weights (order M-1 null at zero
Doppler), the Prouhet-Thue-Morse order with unit weights (order log2(M)
null), and the unweighted alternating train.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .nullspec import (
    ConstraintBasis,
    NullSpec,
    QuadraticForm,
    annihilator_coeffs,
    constraint_basis,
    max_null_violation,
    quadratic_form,
)
from .sdp import SdpSolution, SolverFailure, solve_partition_sdp
from .sequences import WindowTemplate, binomial_weights, ptm_order, window_template

_LD = np.longdouble

METHODS = ("nm_drcw", "ptm", "bd", "uniform")


class DesignFailure(RuntimeError):
    """Degenerate configuration: no usable design exists for these inputs."""


def _sign_pm1(x: np.ndarray) -> np.ndarray:
    """Sign with the convention sign(0) = +1, as +/-1 int64."""
    return np.where(np.asarray(x) >= 0, 1, -1).astype(np.int64)


@dataclass(frozen=True)
class RoundedSolution:
    s: np.ndarray
    objective: float
    used_rank1_shortcut: bool
    clamped_eigenvalues: bool


def round_solution(
    solution,
    a_tilde,
    trials: int,
    seed: int,
    mu: float = 1e8,
) -> RoundedSolution:
    """Extract a sign vector from a relaxation solution.

    If the top eigenvalue dominates the rest by the factor ``mu`` the
    solution is treated as rank one and the leading eigenvector's sign
    pattern is returned directly. Otherwise S is factored as V V^T and
    ``trials`` Gaussian vectors r produce candidates sign(V r); the
    candidate with the largest s^T A_tilde s wins, ties broken by lowest
    trial index. Deterministic given (seed, trials).
    """
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    if mu <= 0:
        raise ValueError(f"mu must be positive, got {mu}")
    S = solution.s_matrix if isinstance(solution, SdpSolution) else np.asarray(solution, dtype=float)
    At = a_tilde.a_tilde if isinstance(a_tilde, QuadraticForm) else np.asarray(a_tilde, dtype=float)
    M = S.shape[0]
    lam, vecs = np.linalg.eigh(S)
    lam = lam[::-1]
    vecs = vecs[:, ::-1]

    clamped = bool(lam[-1] < -1e-8 * max(1.0, float(lam[0])))
    tail = float(np.sum(lam[1:]))
    if M == 1 or tail <= 0.0 or float(lam[0]) / tail >= mu:
        s = _sign_pm1(vecs[:, 0])
        obj = float(s @ At @ s)
        return RoundedSolution(s, obj, used_rank1_shortcut=True, clamped_eigenvalues=clamped)

    factor = vecs * np.sqrt(np.maximum(lam, 0.0))
    rng = np.random.default_rng(seed)
    r = rng.standard_normal((trials, M))
    candidates = np.where(r @ factor.T >= 0, 1.0, -1.0)
    objs = np.einsum("bi,ij,bj->b", candidates, At, candidates)
    best = int(np.argmax(objs))  # argmax takes the first maximum: lowest trial index
    s = candidates[best].astype(np.int64)
    return RoundedSolution(
        s=s,
        objective=float(s @ At @ s),
        used_rank1_shortcut=False,
        clamped_eigenvalues=clamped,
    )


def _back_solve(R: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = len(b)
    x = np.zeros(n, dtype=R.dtype)
    for i in range(n - 1, -1, -1):
        x[i] = (b[i] - R[i, i + 1 :] @ x[i + 1 :]) / R[i, i]
    return x


def recover_amplitudes(
    s_hat, basis: ConstraintBasis, window: WindowTemplate
) -> tuple[np.ndarray, np.ndarray]:
    """Optimal in-subspace amplitudes for a fixed sign pattern.

    b_hat = alpha * A_bar^T Diag(w) s with alpha chosen so ||b_hat||^2 = M,
    and y_hat = A_bar b_hat. The result is computed through the extended
    precision factors so y_hat is exactly a convolution of the annihilator
    with a free vector: its null structure holds far below the verification
    tolerance even for ill-conditioned constraint matrices.
    """
    m = basis.m
    if window.m != m:
        raise ValueError(f"window length {window.m} does not match pulse count {m}")
    s = np.asarray(s_hat, dtype=float)
    if s.shape != (m,):
        raise ValueError(f"sign vector must have shape ({m},)")
    t = basis.q_ld.T @ (window.values.astype(_LD) * s.astype(_LD))
    nrm = float(np.sqrt(t @ t))
    if nrm < 1e-12 * math.sqrt(m):
        raise DesignFailure(
            "window is numerically orthogonal to the signed constraint "
            "subspace; no amplitudes can be recovered"
        )
    b_hat = (np.sqrt(_LD(m)) / nrm) * t
    b_free = _back_solve(basis.r_ld, b_hat)
    y = np.convolve(basis.a_ld, b_free)
    y *= np.sqrt(_LD(m)) / np.sqrt(y @ y)
    return b_hat.astype(float), y.astype(float)


@dataclass(frozen=True)
class Provenance:
    seed: int | None
    trials: int | None
    rounded_objective: float | None
    sdp_bound: float | None
    null_spec: NullSpec
    window_kind: str | None
    warnings: tuple[str, ...] = ()
    solver_trace: tuple[tuple[int, float, float, float], ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class DesignResult:
    """Transmit order s, receive weights w, and their product y = s o w."""

    transmit_order: np.ndarray
    weights: np.ndarray
    y: np.ndarray
    method: str
    provenance: Provenance

    @property
    def m(self) -> int:
        return len(self.y)


def design_nm_drcw(
    m: int,
    spec: NullSpec,
    window: WindowTemplate,
    trials: int = 1000,
    seed: int = 0,
    tol: float = 1e-6,
    max_iter: int = 5000,
    legacy_quadratic: bool = False,
    collect_solver_trace: bool = False,
) -> DesignResult:
    """Null-constrained transmit/receive design via relaxation and rounding.

    Chains annihilator -> constraint basis -> quadratic form -> SDP ->
    rounding -> amplitude recovery, then splits y into sign and magnitude.
    Raises SolverFailure when the relaxation does not converge and
    DesignFailure on degenerate amplitude recovery.
    """
    if m < 2:
        raise ValueError(f"pulse count must be >= 2, got {m}")
    spec.validate_for(m)
    if window.m != m:
        raise ValueError(f"window length {window.m} does not match pulse count {m}")

    coeffs = annihilator_coeffs(spec, legacy_quadratic=legacy_quadratic)
    basis = constraint_basis(coeffs, m)
    form = quadratic_form(basis, window)
    solution = solve_partition_sdp(
        form, tol=tol, max_iter=max_iter, collect_trace=collect_solver_trace
    )
    if not solution.converged:
        raise SolverFailure(
            "relaxation did not converge: gap "
            f"{solution.residuals.duality_gap:.3e} after {solution.iterations} iterations"
        )
    rounded = round_solution(solution, form, trials=trials, seed=seed)
    _, y = recover_amplitudes(rounded.s, basis, window)

    warnings = []
    if rounded.clamped_eigenvalues:
        warnings.append("relaxation matrix had eigenvalues clamped to zero for rounding")

    result = DesignResult(
        transmit_order=_sign_pm1(y),
        weights=np.abs(y),
        y=y,
        method="nm_drcw",
        provenance=Provenance(
            seed=seed,
            trials=trials,
            rounded_objective=rounded.objective,
            sdp_bound=solution.objective,
            null_spec=spec,
            window_kind=window.kind,
            warnings=tuple(warnings),
            solver_trace=solution.trace,
        ),
    )
    violation = max_null_violation(y, spec)
    if violation > 1e-8 * m:
        raise DesignFailure(
            f"designed weights violate the null constraints: residual {violation:.3e}"
        )
    return result


def _alternating(m: int) -> np.ndarray:
    s = np.ones(m, dtype=np.int64)
    s[1::2] = -1
    return s


def design_bd(m: int) -> DesignResult:
    """Alternating order with binomial weights: y proportional to the
    coefficients of (1-z)^(M-1), an order-(M-1) null at zero Doppler."""
    if m < 1:
        raise ValueError(f"pulse count must be >= 1, got {m}")
    s = _alternating(m)
    w = binomial_weights(m)
    y = s * w
    return DesignResult(
        transmit_order=s,
        weights=w,
        y=y,
        method="bd",
        provenance=Provenance(
            seed=None,
            trials=None,
            rounded_objective=None,
            sdp_bound=None,
            null_spec=NullSpec(k0=m - 1),
            window_kind=None,
        ),
    )


def design_ptm(m: int) -> DesignResult:
    """Prouhet-Thue-Morse order with unit weights: order log2(M) null."""
    s = ptm_order(m)
    w = np.ones(m)
    return DesignResult(
        transmit_order=s,
        weights=w,
        y=s * w,
        method="ptm",
        provenance=Provenance(
            seed=None,
            trials=None,
            rounded_objective=None,
            sdp_bound=None,
            null_spec=NullSpec(k0=m.bit_length() - 1),
            window_kind=None,
        ),
    )


def design_uniform(m: int) -> DesignResult:
    """Unweighted alternating train; the accumulation-gain reference."""
    if m < 1:
        raise ValueError(f"pulse count must be >= 1, got {m}")
    s = _alternating(m)
    w = np.ones(m)
    return DesignResult(
        transmit_order=s,
        weights=w,
        y=s * w,
        method="uniform",
        provenance=Provenance(
            seed=None,
            trials=None,
            rounded_objective=None,
            sdp_bound=None,
            null_spec=NullSpec(k0=1 if m % 2 == 0 else 0),
            window_kind=None,
        ),
    )


def design_by_method(
    method: str,
    m: int,
    spec: NullSpec | None = None,
    window: WindowTemplate | None = None,
    **kwargs,
) -> DesignResult:
    """Dispatch helper used by the command-line front end."""
    if method == "nm_drcw":
        if spec is None:
            raise ValueError("nm_drcw requires a null specification")
        if window is None:
            window = window_template("rectangular", m)
        return design_nm_drcw(m, spec, window, **kwargs)
    if method == "ptm":
        return design_ptm(m)
    if method == "bd":
        return design_bd(m)
    if method == "uniform":
        return design_uniform(m)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
