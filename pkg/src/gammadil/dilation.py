"""Truncated Gamma-unitary dilation (R, U) of a Gamma-contraction and its checks.

Space layout, in order::

    H | D_P slot 0 .. slot N-1 | D_{P*} slot 0 .. slot N-1

Tail slots hold coordinates in the orthonormal defect-range bases. The first
``n + N*k_P`` coordinates carry the isometric pair (T_F, V). Truncation is a
hard cut: whatever would flow past slot ``N-1`` is dropped. Every operator
here moves tail support by at most one slot, so identities evaluated on
vectors supported in the first ``w`` slots are exact while ``w + 1 <= N``.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

from ._config import _resolve
from .exceptions import (
    DepthTooSmall,
    NotCommuting,
    NotNormal,
    PowersExceedDepth,
    WindowTooDeep,
)
from .gamma import FundamentalSolution, GammaPair
from .linalg import as_matrix, hermitian_eig, opnorm

__all__ = [
    "TruncatedDilation",
    "build_dilation",
    "verify_dilation_identity",
    "gamma_unitary_residuals",
    "verify_gamma_unitary",
    "verify_gamma_isometry",
    "minimality_span",
    "JointSpectrum",
    "joint_spectrum",
    "SemiInvariance",
    "check_semi_invariance",
]


@dataclass(frozen=True, eq=False)
class TruncatedDilation:
    depth: int
    n_h: int
    k_p: int
    k_s: int
    V: np.ndarray
    T_F: np.ndarray
    U: np.ndarray
    R: np.ndarray

    @property
    def dims(self):
        return self.n_h, self.depth * self.k_p, self.depth * self.k_s

    @property
    def dim_isometric(self) -> int:
        return self.n_h + self.depth * self.k_p

    @property
    def dim(self) -> int:
        return self.dim_isometric + self.depth * self.k_s

    @property
    def embed_H(self) -> np.ndarray:
        E = np.zeros((self.dim, self.n_h), dtype=np.complex128)
        E[: self.n_h, : self.n_h] = np.eye(self.n_h)
        return E

    def _window_mask(self, w, with_star_tail):
        if w < 0 or w > self.depth:
            raise WindowTooDeep(f"window {w} outside 0..{self.depth}")
        mask = np.zeros(self.dim if with_star_tail else self.dim_isometric, dtype=bool)
        mask[: self.n_h] = True
        mask[self.n_h : self.n_h + w * self.k_p] = True
        if with_star_tail:
            start = self.dim_isometric
            mask[start : start + w * self.k_s] = True
        return mask

    def window(self, w) -> np.ndarray:
        """Projector onto H plus the first ``w`` slots of both tails."""
        return np.diag(self._window_mask(w, True).astype(np.complex128))

    def window_isometric(self, w) -> np.ndarray:
        """Projector onto H plus the first ``w`` slots of the D_P tail."""
        return np.diag(self._window_mask(w, False).astype(np.complex128))


def build_dilation(
    pair: GammaPair, F: FundamentalSolution, G: FundamentalSolution, depth: int
) -> TruncatedDilation:
    if depth < 2:
        raise DepthTooSmall(f"depth must be at least 2, got {depth}")
    N = int(depth)
    n = pair.n
    S, P = pair.S, pair.P
    Qp, Qs = F.basis, G.basis
    kp, ks = Qp.shape[1], Qs.shape[1]
    Fc, Gc = F.op, G.op
    dt = n + N * kp
    dim = dt + N * ks

    def a(j):
        return slice(n + j * kp, n + (j + 1) * kp)

    def b(j):
        return slice(dt + j * ks, dt + (j + 1) * ks)

    H = slice(0, n)
    DP_coords = Qp.conj().T @ pair.D_P
    Pstar_on_Ds = Qp.conj().T @ P.conj().T @ Qs
    Ds_embed = pair.D_Pstar @ Qs

    U = np.zeros((dim, dim), dtype=np.complex128)
    R = np.zeros((dim, dim), dtype=np.complex128)

    U[H, H] = P
    U[a(0), H] = DP_coords
    R[H, H] = S
    R[a(0), H] = Fc.conj().T @ DP_coords
    for j in range(N):
        R[a(j), a(j)] = Fc
        R[b(j), b(j)] = Gc.conj().T
        if j + 1 < N:
            U[a(j + 1), a(j)] = np.eye(kp)
            R[a(j + 1), a(j)] = Fc.conj().T
            U[b(j), b(j + 1)] = np.eye(ks)
            R[b(j), b(j + 1)] = Gc

    U[H, b(0)] = Ds_embed
    U[a(0), b(0)] = -Pstar_on_Ds
    R[H, b(0)] = Ds_embed @ Gc
    R[a(0), b(0)] = -Pstar_on_Ds @ Gc

    V = U[:dt, :dt].copy()
    T_F = R[:dt, :dt].copy()
    return TruncatedDilation(N, n, kp, ks, V, T_F, U, R)


def verify_dilation_identity(d: TruncatedDilation, pair: GammaPair, m_max, n_max, total_max=None):
    """Max over checked (m, n) of ``||P_H R^m U^n|_H - S^m P^n||``.

    Checks every ``m <= m_max``, ``n <= n_max`` (and ``m + n <= total_max`` if
    given). Each power moves support one slot, so ``m + n <= depth - 1`` keeps
    every compression truncation-exact.
    """
    pairs = [
        (m, k)
        for m, k in product(range(m_max + 1), range(n_max + 1))
        if total_max is None or m + k <= total_max
    ]
    reach = max(m + k for m, k in pairs)
    if reach > d.depth - 1:
        raise PowersExceedDepth(f"m + n = {reach} exceeds depth - 1 = {d.depth - 1}")
    E = d.embed_H
    n = d.n_h
    worst = 0.0
    UnE = E
    Pn = np.eye(n, dtype=np.complex128)
    for k in range(n_max + 1):
        X = UnE
        Sm = np.eye(n, dtype=np.complex128)
        for m in range(m_max + 1):
            if (m, k) in pairs:
                worst = max(worst, opnorm(X[:n] - Sm @ Pn))
            X = d.R @ X
            Sm = pair.S @ Sm
        UnE = d.U @ UnE
        Pn = pair.P @ Pn
    return worst


def gamma_unitary_residuals(R, U, W=None):
    """Residuals of the Gamma-unitary relations, right-multiplied by ``W``."""
    R = as_matrix(R, square=True)
    U = as_matrix(U, square=True)
    if W is None:
        W = np.eye(R.shape[0])
    Rh, Uh = R.conj().T, U.conj().T
    I = np.eye(R.shape[0])
    return {
        "commutation": opnorm((R @ U - U @ R) @ W),
        "normality_RRstarU": opnorm((R - Rh @ U) @ W),
        "U_isometry_windowed": opnorm((Uh @ U - I) @ W),
        "U_coisometry_windowed": opnorm((U @ Uh - I) @ W),
        "R_normal_windowed": opnorm((Rh @ R - R @ Rh) @ W),
        "norm_R": opnorm(R),
    }


def verify_gamma_unitary(d: TruncatedDilation, window: int):
    if window > d.depth - 2:
        raise WindowTooDeep(f"window {window} exceeds depth - 2 = {d.depth - 2}")
    return gamma_unitary_residuals(d.R, d.U, d.window(window))


def verify_gamma_isometry(d: TruncatedDilation, window: int):
    if window > d.depth - 2:
        raise WindowTooDeep(f"window {window} exceeds depth - 2 = {d.depth - 2}")
    W = d.window_isometric(window)
    T, V = d.T_F, d.V
    I = np.eye(V.shape[0])
    return {
        "V_isometry_windowed": opnorm((V.conj().T @ V - I) @ W),
        "TFV_commute_windowed": opnorm((T @ V - V @ T) @ W),
        "TF_eq_TFstarV_windowed": opnorm((T - T.conj().T @ V) @ W),
    }


def _numerical_rank(A, rel_tol):
    if A.size == 0:
        return 0
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rel_tol * sv[0]))


def minimality_span(d: TruncatedDilation, pair: GammaPair = None, rel_tol=1e-8):
    """Rank of ``{U^n h, U*^n h : h in H, 0 <= n <= depth}`` against the full dimension.

    Powers up to ``depth`` are needed for the orbit of H to reach the deepest slot.
    """
    E = d.embed_H
    cols = [E]
    fwd, bwd = E, E
    Uh = d.U.conj().T
    for _ in range(d.depth):
        fwd = d.U @ fwd
        bwd = Uh @ bwd
        cols += [fwd, bwd]
    return _numerical_rank(np.hstack(cols), rel_tol), d.dim


@dataclass(frozen=True)
class JointSpectrum:
    pairs: list
    cluster_tol: float


_MIX = (0.6180339887498949, 0.41421356237309503, 1.7320508075688772)


def _diagonalize_normal(A):
    """Unitary Q with Q* A Q diagonal for normal A, via Hermitian solves of Re + c Im."""
    n = A.shape[0]
    re = 0.5 * (A + A.conj().T)
    im = -0.5j * (A - A.conj().T)
    scale = max(opnorm(A), 1.0)
    best = None
    for c in _MIX:
        Q = hermitian_eig(re + c * im).vectors
        D = Q.conj().T @ A @ Q
        off = opnorm(D - np.diag(np.diag(D)))
        if best is None or off < best[0]:
            best = (off, Q, np.diag(D).copy())
        if off <= 1e3 * n * np.finfo(float).eps * scale:
            break
    return best[1], best[2]


def _clusters(values, tol):
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= tol:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def joint_spectrum(R, U, cluster_tol=1e-8, eps_lin=None, tol_commute=None) -> JointSpectrum:
    """Joint eigenvalues of a commuting normal pair with U unitary."""
    R = as_matrix(R, square=True)
    U = as_matrix(U, square=True)
    eps_lin = _resolve("eps_lin", eps_lin)
    tol_commute = _resolve("tol_commute", tol_commute)
    nR, nU = opnorm(R), opnorm(U)
    if opnorm(R @ U - U @ R) > tol_commute * (nR + 1.0) * (nU + 1.0):
        raise NotCommuting("R and U do not commute")
    I = np.eye(U.shape[0])
    if opnorm(U.conj().T @ U - I) > eps_lin:
        raise NotNormal("U is not unitary")
    if opnorm(R.conj().T @ R - R @ R.conj().T) > eps_lin * max(nR * nR, 1.0):
        raise NotNormal("R is not normal")
    Q, u_vals = _diagonalize_normal(U)
    pairs = []
    for group in _clusters(u_vals, cluster_tol):
        Qc = Q[:, group]
        Z, r_vals = _diagonalize_normal(Qc.conj().T @ R @ Qc)
        QZ = Qc @ Z
        u_in = np.diag(QZ.conj().T @ U @ QZ)
        pairs += [(complex(r), complex(u)) for r, u in zip(r_vals, u_in)]
    return JointSpectrum(pairs, cluster_tol)


@dataclass(frozen=True)
class SemiInvariance:
    semi_invariant: bool
    dilates: bool
    invariance_residual: float
    dilation_residual: float

    @property
    def agree(self) -> bool:
        return self.semi_invariant == self.dilates


def _orth(A, tol, relative=True):
    if A.size == 0:
        return A[:, :0]
    U, sv, _ = np.linalg.svd(A, full_matrices=False)
    cut = tol * sv[0] if relative else tol
    if sv[0] == 0.0:
        return A[:, :0]
    return U[:, sv > cut]


def _monomials(k, degree):
    out = [(0,) * k]
    for deg in range(1, degree + 1):
        out += [alpha for alpha in product(range(deg + 1), repeat=k) if sum(alpha) == deg]
    return out


def _apply_monomials(ops, X, degree):
    """Map exponent tuple -> ops^alpha @ X for all total degrees <= degree."""
    k = len(ops)
    out = {(0,) * k: X}
    for alpha in _monomials(k, degree)[1:]:
        j = next(i for i, e in enumerate(alpha) if e > 0)
        prev = list(alpha)
        prev[j] -= 1
        out[alpha] = ops[j] @ out[tuple(prev)]
    return out


def check_semi_invariance(ops, subspace_basis, powers, tol=1e-8, tol_commute=None):
    """Test both sides of the semi-invariance / compression-dilation equivalence.

    Direction 1 builds ``N`` from monomial images of the subspace of degree
    below ``powers``, sets ``M = N - H`` and asks that every op maps ``M``
    orthogonally to ``H``. Direction 2 compares compressions of all monomials
    of degree ``<= powers`` with the matching products of compressions. The two
    are equivalent degree by degree, so they must agree.
    """
    ops = [as_matrix(A, square=True) for A in ops]
    Q = as_matrix(subspace_basis)
    tol_commute = _resolve("tol_commute", tol_commute)
    norms = [opnorm(A) for A in ops]
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            bound = tol_commute * (norms[i] + 1.0) * (norms[j] + 1.0)
            if opnorm(ops[i] @ ops[j] - ops[j] @ ops[i]) > bound:
                raise NotCommuting(f"ops {i} and {j} do not commute")
    scale = (1.0 + max(norms, default=0.0)) ** max(powers, 1)
    Qh = Q.conj().T
    compressions = [Qh @ A @ Q for A in ops]

    images = _apply_monomials(ops, Q, powers)
    small = _apply_monomials(compressions, np.eye(Q.shape[1], dtype=np.complex128), powers)
    dil_res = max(opnorm(Qh @ images[a] - small[a]) for a in images)

    lower = [images[a] for a in images if sum(a) < powers]
    N = _orth(np.hstack(lower), 1e-10)
    # N has orthonormal columns, so an absolute cut separates M from roundoff.
    M = _orth(N - Q @ (Qh @ N), 1e-8, relative=False)
    inv_res = max((opnorm(Qh @ A @ M) for A in ops), default=0.0) if M.shape[1] else 0.0
    return SemiInvariance(
        semi_invariant=inv_res <= tol * scale,
        dilates=dil_res <= tol * scale,
        invariance_residual=inv_res,
        dilation_residual=dil_res,
    )
