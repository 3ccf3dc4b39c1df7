"""Closed-form models on truncated coefficient grids of H^2 of the bidisk.

A function ``sum a[i, j] z1**i z2**j`` is stored as the ``d x d`` array ``a``;
monomials are orthonormal. ``S`` is multiplication by ``z1 + z2`` and ``P`` by
``z1 z2``; anything shifted past index ``d - 1`` is dropped. The defect space
of ``P*`` consists of "hook" grids supported on the first row and column, and
:class:`DefectVector` stores only those ``2d - 1`` entries.

Verifiers sweep monomial basis grids whose support cannot reach the grid edge
under the operators involved, so every identity is checked as an exact
equality.
"""

from dataclasses import dataclass

import numpy as np

from ._config import _resolve
from .exceptions import SymmetryViolated
from .gamma import GammaPair, solve_fundamental_adjoint
from .linalg import opnorm

__all__ = [
    "CoeffGrid",
    "SymGrid",
    "AntiGrid",
    "DefectVector",
    "monomial",
    "apply_S",
    "apply_P",
    "apply_S_star",
    "apply_P_star",
    "defect_projector_Pstar",
    "apply_B",
    "apply_B_star",
    "apply_B_plus",
    "apply_B_plus_star",
    "apply_B_minus",
    "apply_B_minus_star",
    "hardy_unitary",
    "interior_monomials",
    "sym_basis",
    "anti_basis",
    "verify_fundamental_B",
    "verify_fundamental_B_plus",
    "verify_fundamental_B_minus",
    "verify_hardy_unitary",
    "grid_operator_matrix",
    "crosscheck_with_generic_solver",
]


@dataclass(frozen=True, eq=False)
class CoeffGrid:
    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"coefficient grid must be square, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("coefficient grid has non-finite entries")
        object.__setattr__(self, "a", a)
        self._check()

    def _check(self):
        pass

    @property
    def d(self) -> int:
        return self.a.shape[0]

    @classmethod
    def zeros(cls, d):
        return cls(np.zeros((d, d), dtype=np.complex128))

    def norm(self) -> float:
        return float(np.linalg.norm(self.a))

    def inner(self, other) -> complex:
        return complex(np.sum(self.a * np.conj(other.a)))

    def __add__(self, other):
        return CoeffGrid(self.a + other.a)

    def __sub__(self, other):
        return CoeffGrid(self.a - other.a)

    def __mul__(self, alpha):
        return type(self)(alpha * self.a)

    __rmul__ = __mul__

    def symmetric_part(self) -> "SymGrid":
        return SymGrid(0.5 * (self.a + self.a.T))

    def antisymmetric_part(self) -> "AntiGrid":
        return AntiGrid(0.5 * (self.a - self.a.T))

    def flat(self) -> np.ndarray:
        return self.a.reshape(-1)


class SymGrid(CoeffGrid):
    """Grid of a symmetric function, ``a[i, j] == a[j, i]``."""

    def _check(self):
        if not np.array_equal(self.a, self.a.T):
            raise SymmetryViolated("grid is not symmetric")


class AntiGrid(CoeffGrid):
    """Grid of an antisymmetric function, ``a[i, j] == -a[j, i]``."""

    def _check(self):
        if not np.array_equal(self.a, -self.a.T):
            raise SymmetryViolated("grid is not antisymmetric")


def monomial(d, i, j) -> CoeffGrid:
    a = np.zeros((d, d), dtype=np.complex128)
    a[i, j] = 1.0
    return CoeffGrid(a)


def apply_S(g: CoeffGrid) -> CoeffGrid:
    a = g.a
    out = np.zeros_like(a)
    out[1:, :] += a[:-1, :]
    out[:, 1:] += a[:, :-1]
    return CoeffGrid(out)


def apply_P(g: CoeffGrid) -> CoeffGrid:
    a = g.a
    out = np.zeros_like(a)
    out[1:, 1:] = a[:-1, :-1]
    return CoeffGrid(out)


def apply_S_star(g: CoeffGrid) -> CoeffGrid:
    a = g.a
    out = np.zeros_like(a)
    out[:-1, :] += a[1:, :]
    out[:, :-1] += a[:, 1:]
    return CoeffGrid(out)


def apply_P_star(g: CoeffGrid) -> CoeffGrid:
    a = g.a
    out = np.zeros_like(a)
    out[:-1, :-1] = a[1:, 1:]
    return CoeffGrid(out)


@dataclass(frozen=True, eq=False)
class DefectVector:
    """Hook entries ``a00``, first row ``a[0, 1:]`` and first column ``a[1:, 0]``."""

    a00: complex
    row: np.ndarray
    col: np.ndarray

    def __post_init__(self):
        row = np.asarray(self.row, dtype=np.complex128).reshape(-1)
        col = np.asarray(self.col, dtype=np.complex128).reshape(-1)
        if row.shape != col.shape:
            raise ValueError("hook row and column must have the same length")
        object.__setattr__(self, "a00", complex(self.a00))
        object.__setattr__(self, "row", row)
        object.__setattr__(self, "col", col)

    @property
    def d(self) -> int:
        return self.row.size + 1

    @classmethod
    def zeros(cls, d):
        return cls(0j, np.zeros(d - 1), np.zeros(d - 1))

    def to_grid(self) -> CoeffGrid:
        a = np.zeros((self.d, self.d), dtype=np.complex128)
        a[0, 0] = self.a00
        a[0, 1:] = self.row
        a[1:, 0] = self.col
        return CoeffGrid(a)

    def norm_squared(self) -> float:
        return abs(self.a00) ** 2 + float(np.sum(np.abs(self.row) ** 2 + np.abs(self.col) ** 2))

    def distance(self, other) -> float:
        diff = abs(self.a00 - other.a00) ** 2
        diff += np.sum(np.abs(self.row - other.row) ** 2 + np.abs(self.col - other.col) ** 2)
        return float(np.sqrt(diff))

    def __add__(self, other):
        return DefectVector(self.a00 + other.a00, self.row + other.row, self.col + other.col)

    def is_symmetric(self) -> bool:
        return np.array_equal(self.row, self.col)

    def is_antisymmetric(self) -> bool:
        return self.a00 == 0 and np.array_equal(self.row, -self.col)


def defect_projector_Pstar(g: CoeffGrid) -> DefectVector:
    """Orthogonal projection onto the hook (the complement of the range of P)."""
    return DefectVector(g.a[0, 0], g.a[0, 1:], g.a[1:, 0])


def apply_B(v: DefectVector) -> DefectVector:
    row = np.zeros_like(v.row)
    col = np.zeros_like(v.col)
    row[:-1] = v.row[1:]
    col[:-1] = v.col[1:]
    a00 = (v.col[0] + v.row[0]) if v.row.size else 0j
    return DefectVector(a00, row, col)


def apply_B_star(v: DefectVector) -> DefectVector:
    row = np.zeros_like(v.row)
    col = np.zeros_like(v.col)
    if v.row.size:
        row[0] = v.a00
        col[0] = v.a00
        row[1:] = v.row[:-1]
        col[1:] = v.col[:-1]
    return DefectVector(0j, row, col)


def _require_sym(v):
    if not v.is_symmetric():
        raise SymmetryViolated("defect vector is not symmetric")


def _require_anti(v):
    if not v.is_antisymmetric():
        raise SymmetryViolated("defect vector is not antisymmetric")


def apply_B_plus(v: DefectVector) -> DefectVector:
    """B on symmetric hooks: first entry becomes ``2 a01``, the rest shift."""
    _require_sym(v)
    row = np.zeros_like(v.row)
    row[:-1] = v.row[1:]
    a00 = 2.0 * v.row[0] if v.row.size else 0j
    return DefectVector(a00, row, row.copy())


def apply_B_plus_star(v: DefectVector) -> DefectVector:
    _require_sym(v)
    return apply_B_star(v)


def apply_B_minus(v: DefectVector) -> DefectVector:
    """B on antisymmetric hooks: a pure shift, ``a00`` stays zero."""
    _require_anti(v)
    row = np.zeros_like(v.row)
    row[:-1] = v.row[1:]
    return DefectVector(0j, row, -row)


def apply_B_minus_star(v: DefectVector) -> DefectVector:
    _require_anti(v)
    return apply_B_star(v)


def hardy_unitary(f: CoeffGrid, n_terms=None):
    """Taylor coefficients ``g_k = D_{P*} P*^k f`` of ``D_{P*} (I - z P*)^{-1} f``.

    ``g_k`` is the hook of ``f`` anchored at ``(k, k)``.
    """
    d = f.d
    if n_terms is None:
        n_terms = d
    if n_terms > d:
        raise ValueError(f"n_terms={n_terms} exceeds the grid size {d}")
    out = []
    for k in range(n_terms):
        row = np.zeros(d - 1, dtype=np.complex128)
        col = np.zeros(d - 1, dtype=np.complex128)
        row[: d - 1 - k] = f.a[k, k + 1 :]
        col[: d - 1 - k] = f.a[k + 1 :, k]
        out.append(DefectVector(f.a[k, k], row, col))
    return out


def interior_monomials(d, margin):
    """Index pairs ``(i, j)`` with ``i + j <= d - 1 - margin``."""
    return [(i, j) for i in range(d) for j in range(d) if i + j <= d - 1 - margin]


def sym_basis(d, margin=None):
    """Orthonormal symmetric basis grids ``e_ii`` and ``(e_ij + e_ji)/sqrt 2``."""
    out = []
    for i in range(d):
        for j in range(i, d):
            if margin is not None and i + j > d - 1 - margin:
                continue
            a = np.zeros((d, d), dtype=np.complex128)
            if i == j:
                a[i, i] = 1.0
            else:
                a[i, j] = a[j, i] = 1.0 / np.sqrt(2.0)
            out.append(SymGrid(a))
    return out


def anti_basis(d, margin=None):
    """Orthonormal antisymmetric basis grids ``(e_ij - e_ji)/sqrt 2``, ``i < j``."""
    out = []
    for i in range(d):
        for j in range(i + 1, d):
            if margin is not None and i + j > d - 1 - margin:
                continue
            a = np.zeros((d, d), dtype=np.complex128)
            a[i, j] = 1.0 / np.sqrt(2.0)
            a[j, i] = -1.0 / np.sqrt(2.0)
            out.append(AntiGrid(a))
    return out


def _fundamental_residual(g, B):
    lhs = apply_S_star(g) - apply_S(apply_P_star(g))
    rhs = B(defect_projector_Pstar(g)).to_grid()
    return (lhs - rhs).norm()


def _sweep(grids, B):
    return max((_fundamental_residual(g, B) for g in grids), default=0.0)


def _check_d(d, least):
    if d < least:
        raise ValueError(f"grid size d={d} too small; need d >= {least}")


def verify_fundamental_B(d):
    """Residual of ``S* - S P* = D_{P*} B D_{P*}`` on monomial grids.

    ``interior`` sweeps ``i + j <= d - 2``; ``full`` sweeps the whole grid.
    """
    _check_d(d, 3)
    inner = [monomial(d, i, j) for i, j in interior_monomials(d, 1)]
    full = [monomial(d, i, j) for i in range(d) for j in range(d)]
    return {"interior": _sweep(inner, apply_B), "full": _sweep(full, apply_B)}


def verify_fundamental_B_plus(d):
    """Same equation on symmetric grids with B replaced by B_+."""
    _check_d(d, 3)
    return {
        "interior": _sweep(sym_basis(d, margin=1), apply_B_plus),
        "full": _sweep(sym_basis(d), apply_B_plus),
    }


def verify_fundamental_B_minus(d):
    """Same equation on antisymmetric grids with B replaced by B_-."""
    _check_d(d, 3)
    return {
        "interior": _sweep(anti_basis(d, margin=1), apply_B_minus),
        "full": _sweep(anti_basis(d), apply_B_minus),
    }


_SUBSPACES = {
    "full": (lambda d, m: [monomial(d, i, j) for i, j in interior_monomials(d, m)],
             apply_B, apply_B_star),
    "sym": (lambda d, m: sym_basis(d, margin=m), apply_B_plus, apply_B_plus_star),
    "anti": (lambda d, m: anti_basis(d, margin=m), apply_B_minus, apply_B_minus_star),
}


def verify_hardy_unitary(d, n_terms=None, subspace="full"):
    """Exact checks of the unitary onto vector-valued H^2 of the disk.

    For every interior basis grid f (``i + j <= d - 3``): the isometry defect
    ``|sum ||g_k||^2 - ||f||^2|``; ``U(P f)`` against the z-shift of ``U f``;
    and ``U(S f)_k`` against ``B* g_k + B g_{k-1}``. ``subspace`` selects the
    whole grid or the symmetric / antisymmetric part with B_+ / B_-.
    """
    _check_d(d, 4)
    n_terms = d if n_terms is None else n_terms
    basis, B, Bstar = _SUBSPACES[subspace]
    iso = p_res = s_res = 0.0
    zero = DefectVector.zeros(d)
    for f in basis(d, 2):
        g = hardy_unitary(f)
        iso = max(iso, abs(sum(v.norm_squared() for v in g) - f.norm() ** 2))
        gp = hardy_unitary(apply_P(f), n_terms)
        gs = hardy_unitary(apply_S(f), n_terms)
        for k in range(n_terms):
            prev = g[k - 1] if k > 0 else zero
            p_res = max(p_res, gp[k].distance(prev))
            expected = Bstar(g[k])
            if k > 0:
                expected = expected + B(prev)
            s_res = max(s_res, gs[k].distance(expected))
    return {"isometry_defect": iso, "P_intertwine": p_res, "S_intertwine": s_res}


def grid_operator_matrix(op, d) -> np.ndarray:
    """Matrix of a grid map in the row-major monomial basis (index ``i*d + j``)."""
    cols = []
    for i in range(d):
        for j in range(d):
            cols.append(op(monomial(d, i, j)).flat())
    return np.stack(cols, axis=1)


def _subspace_basis(d, subspace):
    if subspace == "full":
        return np.eye(d * d, dtype=np.complex128)
    grids = sym_basis(d) if subspace == "sym" else anti_basis(d)
    return np.stack([g.flat() for g in grids], axis=1)


def _hook_indices(d, max_index):
    out = [0]
    for j in range(1, max_index + 1):
        out += [j, j * d]
    return out


def crosscheck_with_generic_solver(d, subspace="full", tol_fund=None):
    """Compare the generic adjoint fundamental-operator solve with the closed-form B.

    S and P are materialized on the truncated grid (restricted to the symmetric
    or antisymmetric part if requested) and handed to
    :func:`solve_fundamental_adjoint`. The recovered operator is compared with
    ``B D_{P*}`` on hook vectors of index ``<= d - 2``.
    """
    _check_d(d, 3)
    tol_fund = _resolve("tol_fund", tol_fund)
    Q = _subspace_basis(d, subspace)
    Qh = Q.conj().T
    S = Qh @ grid_operator_matrix(apply_S, d) @ Q
    P = Qh @ grid_operator_matrix(apply_P, d) @ Q
    pair = GammaPair(S, P)
    G = solve_fundamental_adjoint(pair)

    def B_hook(g):
        return apply_B(defect_projector_Pstar(g)).to_grid()

    B = Qh @ grid_operator_matrix(B_hook, d) @ Q
    hooks = np.zeros((d * d, d * d))
    idx = _hook_indices(d, d - 2)
    hooks[idx, idx] = 1.0
    C = Qh @ hooks @ Q
    interior = opnorm((G.lifted - B) @ C)
    return {
        "interior": interior,
        "full": opnorm(G.lifted - B),
        "solver_residual": G.residual,
        "defect_rank": G.rank,
        "pass": interior <= tol_fund,
    }
