"""Solver for the unit-diagonal semidefinite relaxation

    maximize    tr(A_tilde S)
    subject to  diag(S) = 1,  S >= 0 (PSD).

This is the relaxation of two-way partitioning: the binary problem
max s^T A_tilde s over s in {-1,+1}^M replaces s s^T with a PSD matrix of
unit diagonal, so the relaxed optimum upper-bounds every sign vector.

The implementation is a barrier interior-point method on the dual

    minimize    sum(y)
    subject to  Diag(y) - A_tilde >= 0,

whose Newton machinery is tiny for this constraint structure: with
Z = Diag(y) - A_tilde, the barrier gradient is t*1 - diag(Z^{-1}) and the
Hessian is the elementwise square Z^{-1} o Z^{-1}. Each centering step costs
one Cholesky and one M x M solve. The primal iterate X = Z^{-1}/t is
positive definite by construction, and any dual-feasible y certifies the
upper bound sum(y) >= optimum, so the reported duality gap is certified
rather than heuristic. Problems are normalized by the Frobenius norm of
A_tilde internally, making the solve exactly scale equivariant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .nullspec import QuadraticForm


class SolverFailure(RuntimeError):
    """Solver could not reach the requested tolerance within its budget."""


@dataclass(frozen=True)
class SdpResiduals:
    diag_deviation: float
    min_eigenvalue: float
    duality_gap: float


@dataclass(frozen=True)
class SdpSolution:
    """Relaxation solution S with certified optimality information.

    ``objective`` is tr(A_tilde S) for the (feasible) primal matrix S;
    ``dual_bound`` is the certified upper bound sum(y) from the dual
    feasible point, so dual_bound - objective bounds the suboptimality.
    """

    s_matrix: np.ndarray
    objective: float
    dual_bound: float
    residuals: SdpResiduals
    iterations: int
    converged: bool
    trace: tuple[tuple[int, float, float, float], ...] = ()


def _as_matrix(a_tilde) -> np.ndarray:
    if isinstance(a_tilde, QuadraticForm):
        return np.array(a_tilde.a_tilde, dtype=float)
    return np.array(a_tilde, dtype=float)


def solve_partition_sdp(
    a_tilde,
    tol: float = 1e-6,
    max_iter: int = 5000,
    collect_trace: bool = False,
) -> SdpSolution:
    """Solve max tr(A_tilde S) s.t. diag(S) = 1, S PSD.

    Parameters
    ----------
    a_tilde : QuadraticForm or (M, M) array
        Symmetric objective matrix. Symmetry deviation beyond
        1e-8 * ||A_tilde|| is rejected.
    tol : float
        Relative optimality tolerance in (0, 1e-2]. The certified duality
        gap at return is at most tol times the problem scale.
    max_iter : int
        Budget of Newton steps. On exhaustion the best iterate is returned
        with ``converged`` False.

    The returned matrix has exactly unit diagonal (rescaled at the end) and
    is positive definite up to roundoff. Deterministic: identical inputs
    produce identical outputs.
    """
    A = _as_matrix(a_tilde)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"a_tilde must be square, got shape {A.shape}")
    if not 0.0 < tol <= 1e-2:
        raise ValueError(f"tol must lie in (0, 1e-2], got {tol}")
    if max_iter < 1:
        raise ValueError("max_iter must be positive")
    M = A.shape[0]
    norm = float(np.linalg.norm(A))
    if norm > 0 and float(np.max(np.abs(A - A.T))) > 1e-8 * norm:
        raise ValueError("a_tilde is not symmetric")
    A = (A + A.T) / 2.0

    if norm == 0.0:
        s = np.eye(M)
        res = SdpResiduals(diag_deviation=0.0, min_eigenvalue=1.0, duality_gap=0.0)
        return SdpSolution(s, 0.0, 0.0, res, iterations=0, converged=True)

    # normalized problem: exact scale equivariance of the whole solve
    An = A / norm
    lam = np.linalg.eigvalsh(An)
    spectral = float(max(abs(lam[0]), abs(lam[-1])))
    scale = spectral * M  # problem-size proxy, invariant under rescaling
    ones = np.ones(M)

    y = (float(lam[-1]) + 1.0) * ones
    t = 1.0 / spectral
    mu = 20.0
    iterations = 0
    trace_rows: list[tuple[int, float, float, float]] = []
    X = np.eye(M)
    gap = np.inf
    pobj = 0.0
    dobj = float(np.sum(y))

    def primal(Zinv: np.ndarray) -> np.ndarray:
        return Zinv / t

    exhausted = False
    for _stage in range(120):
        # Newton centering at the current t
        for _ in range(80):
            Z = np.diag(y) - An
            Zinv = np.linalg.inv(Z)
            g = t * ones - np.diag(Zinv)
            H = Zinv * Zinv
            try:
                dy = -np.linalg.solve(H, g)
            except np.linalg.LinAlgError:
                dy = -np.linalg.solve(H + 1e-14 * np.eye(M), g)
            decrement2 = float(-g @ dy)
            step = 1.0
            for _bt in range(70):
                try:
                    np.linalg.cholesky(np.diag(y + step * dy) - An)
                    break
                except np.linalg.LinAlgError:
                    step *= 0.5
            else:
                step = 0.0
            y = y + step * dy
            iterations += 1
            if collect_trace or iterations >= max_iter or decrement2 < 1e-9:
                Z = np.diag(y) - An
                Zinv = np.linalg.inv(Z)
                X = primal(Zinv)
                pobj = float(np.sum(An * X))
                dobj = float(np.sum(y))
                gap = dobj - pobj
                if collect_trace:
                    diag_res = float(np.max(np.abs(np.diag(X) - 1.0)))
                    trace_rows.append((iterations, pobj * norm, gap * norm, diag_res))
            if decrement2 < 1e-9 or iterations >= max_iter:
                break
        if gap <= 0.5 * tol * max(scale, abs(pobj)):
            break
        if iterations >= max_iter:
            exhausted = True
            break
        t *= mu

    # exact unit diagonal; a congruence with a positive diagonal matrix
    # preserves positive definiteness
    d = np.diag(X).copy()
    if np.min(d) > 0:
        dm = 1.0 / np.sqrt(d)
        X = X * np.outer(dm, dm)
        np.fill_diagonal(X, 1.0)
        pobj = float(np.sum(An * X))
        gap = dobj - pobj

    objective = pobj * norm
    dual_bound = dobj * norm
    diag_dev = float(np.max(np.abs(np.diag(X) - 1.0)))
    min_eig = float(np.linalg.eigvalsh(X)[0])
    converged = (not exhausted) and gap <= tol * max(scale, abs(pobj))
    res = SdpResiduals(
        diag_deviation=diag_dev,
        min_eigenvalue=min_eig,
        duality_gap=gap * norm,
    )
    return SdpSolution(
        s_matrix=X,
        objective=objective,
        dual_bound=dual_bound,
        residuals=res,
        iterations=iterations,
        converged=converged,
        trace=tuple(trace_rows),
    )
