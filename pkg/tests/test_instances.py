import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from gammadil.gamma import check_von_neumann, point_in_gamma, probe_polynomials
from gammadil.instances import (
    commuting_contractions,
    diagonal_gamma_unitary,
    random_unitary,
    seeded_polynomials,
    symmetrized_instance,
)
from gammadil.linalg import opnorm
from gammadil.rng import XorShiftStar


def test_deterministic():
    a, b = symmetrized_instance(1, 4), symmetrized_instance(1, 4)
    assert np.array_equal(a.S, b.S) and np.array_equal(a.P, b.P)


def test_scalar_instance_in_gamma():
    for seed in range(10):
        pair = symmetrized_instance(seed, 1)
        assert point_in_gamma(pair.S[0, 0], pair.P[0, 0])


@given(seed=st.integers(0, 2**64 - 1), n=st.integers(1, 8))
def test_commuting_strict_contractions(seed, n):
    T1, T2 = commuting_contractions(seed, n)
    assert opnorm(T1) <= 0.95 + 1e-12 and opnorm(T2) <= 0.95 + 1e-12
    assert opnorm(T1 @ T2 - T2 @ T1) <= 1e-12
    assert symmetrized_instance(seed, n).is_valid


@given(seed=st.integers(0, 2**32))
def test_generated_pairs_pass_seeded_von_neumann(seed):
    pair = symmetrized_instance(seed, 4)
    polys = seeded_polynomials(seed + 1) + probe_polynomials()
    assert all(r["pass"] for r in check_von_neumann(pair, polys))


def test_random_unitary():
    Q = random_unitary(XorShiftStar(3), 5)
    assert opnorm(Q.conj().T @ Q - np.eye(5)) <= 1e-13


def test_diagonal_gamma_unitary_points():
    R, U, pts = diagonal_gamma_unitary(4, 6, repeats=True)
    assert len(pts) == 6
    for r, u in pts:
        assert abs(abs(u) - 1) <= 1e-14
    assert opnorm(R @ U - U @ R) <= 1e-13
