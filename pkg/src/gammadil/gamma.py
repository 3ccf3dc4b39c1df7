"""Symmetrized-bidisk geometry, Gamma-contraction pairs and fundamental operators."""

import cmath
from dataclasses import dataclass, field

import numpy as np

from ._config import _resolve
from .exceptions import NotCommuting, NotContractions, ResidualTooLarge
from .linalg import Defect, as_matrix, defect, numerical_radius, opnorm

__all__ = [
    "quadratic_roots",
    "point_in_gamma",
    "point_in_bgamma",
    "BivariatePolynomial",
    "power_sum",
    "probe_polynomials",
    "GammaPair",
    "symmetrize",
    "check_von_neumann",
    "FundamentalSolution",
    "solve_fundamental",
    "solve_fundamental_adjoint",
    "identity_suite",
]


def quadratic_roots(s, p):
    """Roots of ``z**2 - s*z + p``; the larger one is computed without cancellation."""
    s = complex(s)
    p = complex(p)
    disc = cmath.sqrt(s * s - 4.0 * p)
    plus, minus = s + disc, s - disc
    big = plus if abs(plus) >= abs(minus) else minus
    z1 = big / 2.0
    z2 = p / z1 if z1 != 0 else 0j
    return z1, z2


def point_in_gamma(s, p, tol=1e-12) -> bool:
    z1, z2 = quadratic_roots(s, p)
    return abs(z1) <= 1.0 + tol and abs(z2) <= 1.0 + tol


def point_in_bgamma(s, p, tol=1e-12) -> bool:
    """Membership in the symmetrized torus.

    Uses ``|p| = 1``, ``s = conj(s) p``, ``|s| <= 2``, which is equivalent to both
    roots being unimodular but stays well conditioned at double roots, where the
    roots themselves are only determined to about ``sqrt(eps)``.
    """
    s = complex(s)
    p = complex(p)
    return (
        abs(abs(p) - 1.0) <= tol
        and abs(s - s.conjugate() * p) <= tol
        and abs(s) <= 2.0 + tol
    )


@dataclass(frozen=True)
class BivariatePolynomial:
    """Finite sum ``sum c[m, n] * s**m * p**n``."""

    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (m, n), c in self.coeffs.items():
            m, n = int(m), int(n)
            if m < 0 or n < 0:
                raise ValueError("exponents must be non-negative")
            c = complex(c)
            if not cmath.isfinite(c):
                raise ValueError("coefficients must be finite")
            if c != 0:
                clean[(m, n)] = clean.get((m, n), 0j) + c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def constant(cls, c=1.0):
        return cls({(0, 0): c})

    @property
    def degree(self) -> int:
        return max((m + n for m, n in self.coeffs), default=0)

    def __add__(self, other):
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0j) + c
        return BivariatePolynomial(out)

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def __mul__(self, other):
        if not isinstance(other, BivariatePolynomial):
            return self.scale(other)
        out = {}
        for (m1, n1), c1 in self.coeffs.items():
            for (m2, n2), c2 in other.coeffs.items():
                key = (m1 + m2, n1 + n2)
                out[key] = out.get(key, 0j) + c1 * c2
        return BivariatePolynomial(out)

    def scale(self, alpha):
        return BivariatePolynomial({k: alpha * c for k, c in self.coeffs.items()})

    def __call__(self, s, p):
        s = np.asarray(s, dtype=np.complex128)
        p = np.asarray(p, dtype=np.complex128)
        out = np.zeros(np.broadcast(s, p).shape, dtype=np.complex128)
        for (m, n), c in self.coeffs.items():
            out = out + c * s**m * p**n
        return out

    def on_matrices(self, S, P) -> np.ndarray:
        S = as_matrix(S, square=True)
        P = as_matrix(P, square=True)
        n = S.shape[0]
        s_pows = [np.eye(n, dtype=np.complex128)]
        p_pows = [np.eye(n, dtype=np.complex128)]
        out = np.zeros((n, n), dtype=np.complex128)
        for (m, k), c in self.coeffs.items():
            while len(s_pows) <= m:
                s_pows.append(s_pows[-1] @ S)
            while len(p_pows) <= k:
                p_pows.append(p_pows[-1] @ P)
            out += c * (s_pows[m] @ p_pows[k])
        return out


_S = BivariatePolynomial({(1, 0): 1.0})
_P = BivariatePolynomial({(0, 1): 1.0})


def power_sum(k: int) -> BivariatePolynomial:
    """``z1**k + z2**k`` written in ``s = z1 + z2``, ``p = z1*z2`` (Newton's recursion)."""
    prev, cur = BivariatePolynomial.constant(2.0), _S
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, _S * cur - _P * prev
    return cur


def probe_polynomials(max_power=16):
    """Fixed family used for sampled von Neumann checks.

    Power sums detect any root of ``z**2 - s z + p`` outside the closed disk once
    the power is large enough.
    """
    polys = [BivariatePolynomial.constant(), _S, _P, _S * _S - _P.scale(4.0)]
    polys += [power_sum(k) for k in range(2, max_power + 1)]
    return polys


@dataclass(frozen=True, eq=False)
class GammaPair:
    """Commuting pair (S, P) with cached defect data.

    Construction never raises on a non-Gamma input; ``validate`` does.
    """

    S: np.ndarray
    P: np.ndarray
    eps_lin: float = None
    rank_tol: float = None
    tol_commute: float = None

    def __post_init__(self):
        S = as_matrix(self.S, square=True)
        P = as_matrix(self.P, square=True)
        if S.shape != P.shape:
            raise ValueError(f"S and P have different shapes {S.shape} and {P.shape}")
        eps_lin = _resolve("eps_lin", self.eps_lin)
        rank_tol = _resolve("rank_tol", self.rank_tol)
        tol_commute = _resolve("tol_commute", self.tol_commute)
        set_ = object.__setattr__
        set_(self, "S", S)
        set_(self, "P", P)
        set_(self, "eps_lin", eps_lin)
        set_(self, "rank_tol", rank_tol)
        set_(self, "tol_commute", tol_commute)
        set_(self, "norm_S", opnorm(S))
        set_(self, "norm_P", opnorm(P))
        set_(self, "commutation_residual", opnorm(S @ P - P @ S))
        set_(self, "_defects", None)

    @property
    def n(self) -> int:
        return self.S.shape[0]

    @property
    def commute_threshold(self) -> float:
        return self.tol_commute * (self.norm_S + 1.0) * (self.norm_P + 1.0)

    def violations(self):
        out = []
        if self.commutation_residual > self.commute_threshold:
            out.append(f"||SP - PS|| = {self.commutation_residual:.3e} exceeds tolerance")
        if self.norm_P > 1.0 + self.eps_lin:
            out.append(f"||P|| = {self.norm_P:.6g} > 1")
        if self.norm_S > 2.0 + self.eps_lin:
            out.append(f"||S|| = {self.norm_S:.6g} > 2")
        return out

    @property
    def is_valid(self) -> bool:
        return not self.violations()

    def validate(self):
        if self.commutation_residual > self.commute_threshold:
            raise NotCommuting(self.violations()[0])
        problems = self.violations()
        if problems:
            raise NotContractions("; ".join(problems))
        return self

    def _defect_pair(self):
        if self._defects is None:
            dp = defect(self.P, eps_lin=self.eps_lin, rank_tol=self.rank_tol)
            dps = defect(self.P.conj().T, eps_lin=self.eps_lin, rank_tol=self.rank_tol)
            object.__setattr__(self, "_defects", (dp, dps))
        return self._defects

    @property
    def defect_P(self) -> Defect:
        return self._defect_pair()[0]

    @property
    def defect_Pstar(self) -> Defect:
        return self._defect_pair()[1]

    @property
    def D_P(self) -> np.ndarray:
        return self.defect_P.op

    @property
    def D_Pstar(self) -> np.ndarray:
        return self.defect_Pstar.op

    def adjoint(self) -> "GammaPair":
        return GammaPair(
            self.S.conj().T,
            self.P.conj().T,
            eps_lin=self.eps_lin,
            rank_tol=self.rank_tol,
            tol_commute=self.tol_commute,
        )


def symmetrize(T1, T2, eps_lin=None, tol_commute=None) -> GammaPair:
    """(T1 + T2, T1 T2) for commuting contractions T1, T2."""
    T1 = as_matrix(T1, square=True)
    T2 = as_matrix(T2, square=True)
    if T1.shape != T2.shape:
        raise ValueError("T1 and T2 must have the same shape")
    eps_lin = _resolve("eps_lin", eps_lin)
    tol_commute = _resolve("tol_commute", tol_commute)
    n1, n2 = opnorm(T1), opnorm(T2)
    if opnorm(T1 @ T2 - T2 @ T1) > tol_commute * (n1 + 1.0) * (n2 + 1.0):
        raise NotCommuting("T1 and T2 do not commute")
    if n1 > 1.0 + eps_lin or n2 > 1.0 + eps_lin:
        raise NotContractions(f"norms {n1:.6g}, {n2:.6g} exceed 1")
    return GammaPair(T1 + T2, T1 @ T2, eps_lin=eps_lin, tol_commute=tol_commute)


def check_von_neumann(pair: GammaPair, polys, torus_grid=64, tol_vn=None):
    """Sampled spectral-set inequality ``||f(S, P)|| <= sup_Gamma |f|``.

    The supremum is estimated on a uniform ``torus_grid x torus_grid`` grid of
    the torus. A failing entry certifies that the pair is not a
    Gamma-contraction; passing entries are only evidence.
    """
    if torus_grid < 16:
        raise ValueError("torus_grid must be at least 16")
    tol_vn = _resolve("tol_vn", tol_vn)
    z = np.exp(2j * np.pi * np.arange(torus_grid) / torus_grid)
    z1, z2 = np.meshgrid(z, z, indexing="ij")
    s, p = z1 + z2, z1 * z2
    report = []
    for f in polys:
        lhs = opnorm(f.on_matrices(pair.S, pair.P))
        sup = float(np.max(np.abs(f(s, p))))
        report.append({"lhs": lhs, "sup": sup, "pass": lhs <= sup * (1.0 + tol_vn) + tol_vn})
    return report


@dataclass(frozen=True, eq=False)
class FundamentalSolution:
    """Fundamental operator in the orthonormal basis of a defect range."""

    op: np.ndarray
    basis: np.ndarray
    residual: float
    numerical_radius: float

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @property
    def lifted(self) -> np.ndarray:
        """The operator as a full matrix, zero on the defect kernel."""
        return self.basis @ self.op @ self.basis.conj().T


def _solve(S, P, dfc: Defect, strict, tol_fund, grid):
    M = S - S.conj().T @ P
    Q = dfc.basis
    lam = dfc.values
    op = (Q.conj().T @ M @ Q) / np.outer(lam, lam) if Q.shape[1] else np.zeros((0, 0), complex)
    lifted = Q @ op @ Q.conj().T
    residual = opnorm(M - dfc.op @ lifted @ dfc.op)
    w = numerical_radius(op, grid=grid) if op.size else 0.0
    if strict and residual > tol_fund:
        raise ResidualTooLarge(
            f"fundamental equation residual {residual:.3e} exceeds {tol_fund:.1e}"
        )
    return FundamentalSolution(op, Q, residual, w)


def solve_fundamental(pair: GammaPair, strict=False, tol_fund=None, grid=256):
    """Solve ``S - S*P = D_P F D_P`` for F on the range of ``D_P``.

    Always returns the pseudoinverse candidate; with ``strict=True`` a residual
    above ``tol_fund`` raises ``ResidualTooLarge``.
    """
    tol_fund = _resolve("tol_fund", tol_fund)
    return _solve(pair.S, pair.P, pair.defect_P, strict, tol_fund, grid)


def solve_fundamental_adjoint(pair: GammaPair, strict=False, tol_fund=None, grid=256):
    """Solve ``S* - S P* = D_{P*} G D_{P*}`` for G on the range of ``D_{P*}``."""
    tol_fund = _resolve("tol_fund", tol_fund)
    return _solve(pair.S.conj().T, pair.P.conj().T, pair.defect_Pstar, strict, tol_fund, grid)


IDENTITY_NAMES = (
    "P_DP",
    "DP_Pstar",
    "DP_S",
    "DPs_Sstar",
    "Pstar_G",
    "P_F",
    "S_DP",
    "Sstar_DPs",
    "F_G_cross",
)


def identity_suite(pair: GammaPair, F: FundamentalSolution, G: FundamentalSolution):
    """Operator-norm residuals of the nine defect/fundamental-operator identities.

    Restrictions to a defect space are right-multiplication by its projector.
    """
    S, P = pair.S, pair.P
    Sh, Ph = S.conj().T, P.conj().T
    Dp, Ds = pair.D_P, pair.D_Pstar
    Pi_p, Pi_s = pair.defect_P.projector, pair.defect_Pstar.projector
    Fl, Gl = F.lifted, G.lifted
    Fh, Gh = Fl.conj().T, Gl.conj().T
    terms = {
        "P_DP": P @ Dp - Ds @ P,
        "DP_Pstar": Dp @ Ph - Ph @ Ds,
        "DP_S": Dp @ S - Fl @ Dp - Fh @ Dp @ P,
        "DPs_Sstar": Ds @ Sh - Gl @ Ds - Gh @ Ds @ Ph,
        "Pstar_G": (Ph @ Gl - Fh @ Ph) @ Pi_s,
        "P_F": (P @ Fl - Gh @ P) @ Pi_p,
        "S_DP": (S @ Dp - Ds @ Gl @ P - Dp @ Fl) @ Pi_p,
        "Sstar_DPs": (Sh @ Ds - Dp @ Fl @ Ph - Ds @ Gl) @ Pi_s,
        "F_G_cross": (Fh @ Dp @ Ds - Fl @ Ph - Dp @ Ds @ Gl + Ph @ Gh) @ Pi_s,
    }
    return {name: opnorm(terms[name]) for name in IDENTITY_NAMES}
