"""Seeded test-instance generators.

All randomness goes through :class:`~gammadil.rng.XorShiftStar`, so an
instance is a pure function of ``(seed, n)``.
"""

import numpy as np

from .gamma import BivariatePolynomial, GammaPair, symmetrize
from .linalg import opnorm
from .rng import XorShiftStar

__all__ = [
    "random_contraction",
    "commuting_contractions",
    "symmetrized_instance",
    "diagonal_gamma_unitary",
    "random_unitary",
    "seeded_polynomials",
]


def _as_rng(seed_or_rng):
    if isinstance(seed_or_rng, XorShiftStar):
        return seed_or_rng
    return XorShiftStar(seed_or_rng)


def random_contraction(rng, n, norm=0.95):
    T = rng.complex_array((n, n))
    scale = opnorm(T)
    if scale == 0.0:
        return T
    return T * (norm / scale)


def _poly_of(T, coeffs):
    n = T.shape[0]
    out = np.zeros((n, n), dtype=np.complex128)
    power = np.eye(n, dtype=np.complex128)
    for c in coeffs:
        out += c * power
        power = power @ T
    return out


def commuting_contractions(seed_or_rng, n, degree=3):
    """Two commuting strict contractions ``q1(T), q2(T)`` of a seeded contraction T.

    Each ``q_i(T)`` is rescaled to a norm drawn from ``[0.5, 0.95]``, which keeps
    the defect operators well conditioned.
    """
    rng = _as_rng(seed_or_rng)
    T = random_contraction(rng, n)
    out = []
    for _ in range(2):
        coeffs = rng.complex_array((degree + 1,))
        Q = _poly_of(T, coeffs)
        target = 0.5 + 0.45 * rng.uniform()
        scale = opnorm(Q)
        if scale < 1e-12:
            Q, scale = T, opnorm(T)
        out.append(Q * (target / scale) if scale > 0 else Q)
    return out[0], out[1]


def symmetrized_instance(seed_or_rng, n, degree=3) -> GammaPair:
    T1, T2 = commuting_contractions(seed_or_rng, n, degree=degree)
    return symmetrize(T1, T2)


def random_unitary(rng, n):
    """Unitary factor of a QR factorization of a seeded complex matrix."""
    Q, R = np.linalg.qr(rng.complex_array((n, n)))
    d = np.diag(R)
    phases = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
    return Q * phases


def diagonal_gamma_unitary(seed_or_rng, n, repeats=False, rotate=True):
    """``(W1 + W2, W1 W2)`` for seeded diagonal unitaries, optionally conjugated.

    With ``repeats`` the phases come from a small pool so that ``W1 W2`` has
    repeated eigenvalues. Returns ``(R, U, points)`` where ``points`` are the
    exact joint eigenvalue pairs.
    """
    rng = _as_rng(seed_or_rng)
    if repeats:
        pool = rng.unimodular(max(2, n // 3))
        w1 = np.array([pool[rng.randint(0, len(pool) - 1)] for _ in range(n)])
        w2 = np.array([pool[rng.randint(0, len(pool) - 1)] for _ in range(n)])
    else:
        w1 = rng.unimodular(n)
        w2 = rng.unimodular(n)
    r, u = w1 + w2, w1 * w2
    R, U = np.diag(r), np.diag(u)
    if rotate:
        W = random_unitary(rng, n)
        R = W @ R @ W.conj().T
        U = W @ U @ W.conj().T
    return R, U, list(zip(r, u))



def seeded_polynomials(seed_or_rng, count=20, degree=4):
    """``count`` polynomials in (s, p) with all monomials of total degree <= ``degree``.

    Coefficients have real and imaginary parts uniform in [-1, 1).
    """
    rng = _as_rng(seed_or_rng)
    keys = [(m, n) for m in range(degree + 1) for n in range(degree + 1 - m)]
    out = []
    for _ in range(count):
        coeffs = rng.complex_array((len(keys),))
        out.append(BivariatePolynomial(dict(zip(keys, coeffs))))
    return out
