"""Dense complex linear algebra kernel.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. The
Hermitian eigensolver is a cyclic Jacobi iteration using a round-robin
(parallel) ordering, so each step applies ``n // 2`` disjoint complex
rotations as a single matrix product.
"""

from dataclasses import dataclass

import numpy as np

from ._config import _resolve
from .exceptions import NoConvergence, NotHermitian, NotPSD

__all__ = [
    "EigenDecomposition",
    "as_matrix",
    "opnorm",
    "hermitian_eig",
    "psd_sqrt",
    "numerical_radius",
    "range_basis",
    "pinv_apply",
    "defect",
    "Defect",
]

SWEEP_BUDGET = 30


def as_matrix(A, square=False) -> np.ndarray:
    """Coerce ``A`` to a finite 2-D complex128 array."""
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    if square and A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return A


def opnorm(A) -> float:
    """Spectral (operator 2-) norm; 0 for empty matrices."""
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


@dataclass(frozen=True)
class EigenDecomposition:
    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T

    def residual(self, A) -> float:
        return opnorm(np.asarray(A) - self.reconstruct())

    def orthogonality(self) -> float:
        Q = self.vectors
        return opnorm(Q.conj().T @ Q - np.eye(Q.shape[1]))


def _round_robin(n):
    """Yield rounds of disjoint (p, q) index arrays covering every pair once."""
    m = n + (n % 2)
    order = list(range(m))
    for _ in range(m - 1):
        p, q = [], []
        for i in range(m // 2):
            a, b = order[i], order[m - 1 - i]
            if a < n and b < n:
                p.append(min(a, b))
                q.append(max(a, b))
        yield np.array(p, dtype=int), np.array(q, dtype=int)
        order = [order[0], order[-1]] + order[1:-1]


def _jacobi(A, max_sweeps):
    n = A.shape[0]
    V = np.eye(n, dtype=np.complex128)
    rounds = list(_round_robin(n))
    norm_f = np.linalg.norm(A)
    if n < 2 or norm_f == 0.0:
        return np.real(np.diag(A)).copy(), V
    target = n * np.finfo(float).eps * norm_f
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= target:
            break
        for p, q in rounds:
            b = A[p, q]
            absb = np.abs(b)
            live = absb > 0.0
            if not np.any(live):
                continue
            a_pp = A[p, p].real
            a_qq = A[q, q].real
            safe = np.where(live, absb, 1.0)
            theta = (a_qq - a_pp) / (2.0 * safe)
            t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta**2 + 1.0))
            c = 1.0 / np.sqrt(t**2 + 1.0)
            s = t * c
            phase = np.where(live, np.conj(b) / safe, 1.0)
            c = np.where(live, c, 1.0)
            s = np.where(live, s, 0.0)
            J = np.eye(n, dtype=np.complex128)
            J[p, p] = c
            J[p, q] = s
            J[q, p] = -s * phase
            J[q, q] = c * phase
            A = J.conj().T @ A @ J
            V = V @ J
        A = 0.5 * (A + A.conj().T)
        norm_f = np.linalg.norm(A)
    else:
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off > target:
            raise NoConvergence(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal {off:.3e})"
            )
    return np.real(np.diag(A)).copy(), V


def hermitian_eig(A, eps_lin=None, max_sweeps=SWEEP_BUDGET) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises ``NotHermitian`` when ``||A - A*|| > eps_lin * ||A||`` and
    ``NoConvergence`` when the sweep budget is exhausted.
    """
    A = as_matrix(A, square=True)
    eps_lin = _resolve("eps_lin", eps_lin)
    scale = opnorm(A)
    if opnorm(A - A.conj().T) > eps_lin * scale:
        raise NotHermitian("matrix is not Hermitian within eps_lin")
    A = 0.5 * (A + A.conj().T)
    values, vectors = _jacobi(A, max_sweeps)
    order = np.argsort(values, kind="stable")
    return EigenDecomposition(values[order], vectors[:, order])


def _clamped_sqrt(eig, scale, eps_lin):
    lo = eig.values.min() if eig.values.size else 0.0
    if lo < -eps_lin * scale - eps_lin:
        raise NotPSD(f"minimum eigenvalue {lo:.3e} is below -eps_lin")
    # Eigenvalues below eps_lin are roundoff of a singular direction.
    return np.sqrt(np.where(eig.values < eps_lin, 0.0, eig.values))


def psd_sqrt(A, eps_lin=None) -> np.ndarray:
    """Hermitian PSD square root of ``A``."""
    A = as_matrix(A, square=True)
    eps_lin = _resolve("eps_lin", eps_lin)
    eig = hermitian_eig(A, eps_lin=eps_lin)
    root = _clamped_sqrt(eig, opnorm(A), eps_lin)
    return (eig.vectors * root) @ eig.vectors.conj().T


def _hermitian_part(A, theta):
    rot = np.exp(1j * theta)[:, None, None]
    return 0.5 * (rot * A + np.conj(rot) * A.conj().T)


def numerical_radius(A, grid=256, refine_tol=1e-10) -> float:
    """Numerical radius ``max |<Ax, x>|`` over unit vectors.

    Samples ``max_theta rho(Re(e^{i theta} A))`` on a uniform grid over
    ``[0, pi)`` (the spectral radius covers ``theta + pi``) and refines the
    best cell by golden-section search.
    """
    A = as_matrix(A, square=True)
    if grid < 8:
        raise ValueError("grid must be at least 8")
    if A.size == 0 or not np.any(A):
        return 0.0

    def radius(thetas):
        vals = np.linalg.eigvalsh(_hermitian_part(A, np.atleast_1d(thetas)))
        return np.max(np.abs(vals), axis=-1)

    thetas = np.pi * np.arange(grid) / grid
    samples = radius(thetas)
    k = int(np.argmax(samples))
    best = float(samples[k])
    h = np.pi / grid
    lo, hi = thetas[k] - h, thetas[k] + h
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = radius(x1)[0], radius(x2)[0]
    while hi - lo > refine_tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = radius(x2)[0]
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = radius(x1)[0]
    return float(max(best, f1, f2))


def _range_from_eig(eig, rank_tol):
    top = eig.values.max() if eig.values.size else 0.0
    if top <= 0.0:
        keep = np.zeros(eig.values.shape, dtype=bool)
    else:
        keep = eig.values > rank_tol * top
    return keep


def range_basis(D, rank_tol=None):
    """Orthonormal basis of the range of a PSD matrix and its projector."""
    D = as_matrix(D, square=True)
    rank_tol = _resolve("rank_tol", rank_tol)
    eig = hermitian_eig(D)
    keep = _range_from_eig(eig, rank_tol)
    basis = eig.vectors[:, keep]
    return basis, basis @ basis.conj().T


def pinv_apply(D, M, rank_tol=None) -> np.ndarray:
    """``D^+ M`` for Hermitian PSD ``D``; eigenvalues at or below ``rank_tol * max`` are dropped."""
    D = as_matrix(D, square=True)
    M = as_matrix(M)
    if M.shape[0] != D.shape[0]:
        raise ValueError("M is not conformal with D")
    rank_tol = _resolve("rank_tol", rank_tol)
    eig = hermitian_eig(D)
    keep = _range_from_eig(eig, rank_tol)
    Q = eig.vectors[:, keep]
    return (Q / eig.values[keep]) @ (Q.conj().T @ M)


@dataclass(frozen=True)
class Defect:
    """Defect operator ``(I - T*T)^{1/2}`` with its range data.

    ``values`` are the nonzero eigenvalues of the defect on ``basis``.
    """

    op: np.ndarray
    basis: np.ndarray
    values: np.ndarray

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T


def defect(T, eps_lin=None, rank_tol=None) -> Defect:
    """Defect operator of a contraction ``T`` from a single eigendecomposition."""
    T = as_matrix(T, square=True)
    eps_lin = _resolve("eps_lin", eps_lin)
    rank_tol = _resolve("rank_tol", rank_tol)
    n = T.shape[0]
    A = np.eye(n) - T.conj().T @ T
    eig = hermitian_eig(A, eps_lin=eps_lin)
    root = _clamped_sqrt(eig, opnorm(A), eps_lin)
    op = (eig.vectors * root) @ eig.vectors.conj().T
    root_eig = EigenDecomposition(root, eig.vectors)
    keep = _range_from_eig(root_eig, rank_tol)
    return Defect(op, eig.vectors[:, keep], root[keep])
