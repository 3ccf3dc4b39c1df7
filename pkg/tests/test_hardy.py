import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gammadil.exceptions import SymmetryViolated
from gammadil.hardy import (
    AntiGrid,
    CoeffGrid,
    DefectVector,
    SymGrid,
    anti_basis,
    apply_B,
    apply_B_minus,
    apply_B_plus,
    apply_B_star,
    apply_P,
    apply_P_star,
    apply_S,
    apply_S_star,
    crosscheck_with_generic_solver,
    defect_projector_Pstar,
    grid_operator_matrix,
    hardy_unitary,
    monomial,
    sym_basis,
    verify_fundamental_B,
    verify_fundamental_B_minus,
    verify_fundamental_B_plus,
    verify_hardy_unitary,
)
from gammadil.rng import XorShiftStar

e = monomial


def hook(d, a00=0, row=(), col=()):
    r = np.zeros(d - 1, complex)
    c = np.zeros(d - 1, complex)
    r[: len(row)] = row
    c[: len(col)] = col
    return DefectVector(a00, r, c)


def same(a, b):
    return np.array_equal(a.a, b.a)


def same_hook(u, v):
    return u.distance(v) == 0.0


def seeded_grid(seed, d):
    return CoeffGrid(XorShiftStar(seed).complex_array((d, d)))


grids = st.builds(seeded_grid, st.integers(0, 2**32), st.integers(2, 7))


class TestGridOperators:
    def test_multiplication_on_constant(self):
        assert same(apply_S(e(4, 0, 0)), e(4, 1, 0) + e(4, 0, 1))
        assert same(apply_P(e(4, 0, 0)), e(4, 1, 1))

    def test_zero(self):
        z = CoeffGrid.zeros(4)
        for op in (apply_S, apply_P, apply_S_star, apply_P_star):
            assert op(z).norm() == 0.0

    def test_S_on_z1z2(self):
        assert same(apply_S(e(4, 1, 1)), e(4, 2, 1) + e(4, 1, 2))

    def test_adjoint_actions(self):
        assert same(apply_S_star(e(4, 1, 0)), e(4, 0, 0))
        assert apply_P_star(e(4, 1, 0)).norm() == 0.0
        assert apply_S_star(e(4, 0, 0)).norm() == 0.0
        assert apply_P_star(e(4, 0, 0)).norm() == 0.0

    def test_adjointness_brute_force(self):
        d = 5
        for op, adj in ((apply_S, apply_S_star), (apply_P, apply_P_star)):
            M = grid_operator_matrix(op, d)
            Ms = grid_operator_matrix(adj, d)
            assert np.array_equal(M.conj().T, Ms)

    def test_P_isometric_on_interior(self):
        d = 5
        for i in range(d - 1):
            for j in range(d - 1):
                assert apply_P(e(d, i, j)).norm() == 1.0

    def test_commute_exactly(self):
        d = 5
        S, P = grid_operator_matrix(apply_S, d), grid_operator_matrix(apply_P, d)
        assert np.array_equal(S @ P, P @ S)

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            CoeffGrid(np.zeros((2, 3)))

    @given(g=grids)
    def test_reducing_decomposition(self, g):
        sym, anti = g.symmetric_part(), g.antisymmetric_part()
        assert np.allclose((sym + anti).a, g.a, atol=1e-15)
        assert abs(sym.inner(anti)) <= 1e-12
        for op in (apply_S, apply_P, apply_S_star, apply_P_star):
            SymGrid(op(sym).a)
            AntiGrid(op(anti).a)

    def test_symmetry_invariants(self):
        with pytest.raises(SymmetryViolated):
            SymGrid(e(3, 0, 1).a)
        with pytest.raises(SymmetryViolated):
            AntiGrid(e(3, 1, 1).a)


class TestDefectProjection:
    def test_constant(self):
        assert same_hook(defect_projector_Pstar(e(4, 0, 0)), hook(4, 1))

    def test_interior_zeroed(self):
        assert defect_projector_Pstar(e(4, 1, 1)).norm_squared() == 0.0

    @given(g=grids)
    def test_idempotent_and_complement_of_range_of_P(self, g):
        h = defect_projector_Pstar(g)
        assert same_hook(defect_projector_Pstar(h.to_grid()), h)
        rest = g - h.to_grid()
        assert same(apply_P(apply_P_star(rest)), rest)


class TestB:
    def test_examples(self):
        d = 5
        assert same_hook(apply_B(hook(d, row=[1])), hook(d, 1))
        assert same_hook(apply_B(hook(d, col=[1])), hook(d, 1))
        assert same_hook(apply_B(hook(d, 1)), hook(d))
        assert same_hook(apply_B_star(hook(d, 1)), hook(d, row=[1], col=[1]))

    def test_B_shift_pattern(self):
        v = hook(5, 7, row=[1, 2, 3, 4], col=[5, 6, 8, 9])
        assert same_hook(apply_B(v), hook(5, 6, row=[2, 3, 4], col=[6, 8, 9]))

    def test_B_star_is_adjoint_on_interior_hooks(self):
        d = 6
        basis = [hook(d, 1)] + [hook(d, row=np.eye(d - 1)[k]) for k in range(d - 1)]
        basis += [hook(d, col=np.eye(d - 1)[k]) for k in range(d - 1)]
        vecs = lambda v: v.to_grid().flat()
        B = np.stack([vecs(apply_B(v)) for v in basis], 1)
        Bs = np.stack([vecs(apply_B_star(v)) for v in basis], 1)
        E = np.stack([vecs(v) for v in basis], 1)
        Bm, Bsm = E.T @ B, E.T @ Bs
        # the last row/column entries fall off the grid under B*
        keep = [0] + list(range(1, d - 1)) + list(range(d, 2 * d - 2))
        assert np.array_equal(Bm.conj().T[np.ix_(keep, keep)], Bsm[np.ix_(keep, keep)])

    def test_B_plus_first_entry(self):
        v = hook(5, 0, row=[1], col=[1])
        assert same_hook(apply_B_plus(v), hook(5, 2))
        w = hook(5, 3, row=[0.5, 4, 1], col=[0.5, 4, 1])
        assert same_hook(apply_B_plus(w), hook(5, 1.0, row=[4, 1], col=[4, 1]))

    def test_B_minus(self):
        z1_minus_z2 = hook(5, 0, row=[-1], col=[1])
        assert same_hook(apply_B_minus(z1_minus_z2), hook(5))
        squares = hook(5, 0, row=[0, -1], col=[0, 1])
        assert same_hook(apply_B_minus(squares), z1_minus_z2)

    def test_symmetry_required(self):
        with pytest.raises(SymmetryViolated):
            apply_B_plus(hook(4, 0, row=[1]))
        with pytest.raises(SymmetryViolated):
            apply_B_minus(hook(4, 1, row=[1], col=[-1]))

    def test_B_plus_minus_agree_with_B(self):
        d = 6
        for g in sym_basis(d):
            v = defect_projector_Pstar(g)
            assert same_hook(apply_B_plus(v), apply_B(v))
        for g in anti_basis(d):
            v = defect_projector_Pstar(g)
            assert same_hook(apply_B_minus(v), apply_B(v))


class TestFundamentalEquations:
    def test_hand_cases(self):
        d = 5
        for g in (e(d, 1, 0), e(d, 1, 1)):
            lhs = apply_S_star(g) - apply_S(apply_P_star(g))
            rhs = apply_B(defect_projector_Pstar(g)).to_grid()
            assert same(lhs, rhs)
        assert same(apply_S_star(e(d, 1, 0)), e(d, 0, 0))

    @pytest.mark.parametrize("d", [3, 4, 6, 9])
    def test_sweeps_exact(self, d):
        for fn in (verify_fundamental_B, verify_fundamental_B_plus, verify_fundamental_B_minus):
            assert fn(d)["interior"] == 0.0

    def test_small_d_rejected(self):
        with pytest.raises(ValueError):
            verify_fundamental_B(2)


class TestHardyUnitary:
    def test_examples(self):
        d = 5
        g = hardy_unitary(e(d, 0, 0))
        assert same_hook(g[0], hook(d, 1)) and all(v.norm_squared() == 0 for v in g[1:])
        g = hardy_unitary(e(d, 1, 1))
        assert g[0].norm_squared() == 0 and same_hook(g[1], hook(d, 1))
        g = hardy_unitary(e(d, 1, 0) + e(d, 0, 1))
        assert same_hook(g[0], hook(d, row=[1], col=[1]))

    def test_S_intertwine_on_constant(self):
        d = 5
        g = hardy_unitary(e(d, 0, 0))
        gs = hardy_unitary(apply_S(e(d, 0, 0)))
        assert same_hook(gs[0], apply_B_star(g[0]))
        assert same_hook(gs[1], apply_B_star(g[1]) + apply_B(g[0]))

    @given(g=grids)
    def test_norm_preserved(self, g):
        total = sum(v.norm_squared() for v in hardy_unitary(g))
        assert abs(total - g.norm() ** 2) <= 1e-12 * max(1.0, total)

    def test_too_many_terms(self):
        with pytest.raises(ValueError):
            hardy_unitary(e(3, 0, 0), 4)

    @pytest.mark.parametrize("subspace", ["full", "sym", "anti"])
    @pytest.mark.parametrize("d", [4, 6, 8])
    def test_model_exact(self, d, subspace):
        res = verify_hardy_unitary(d, 4, subspace)
        assert max(res.values()) == 0.0

    def test_small_d_rejected(self):
        with pytest.raises(ValueError):
            verify_hardy_unitary(3)


class TestCrossCheck:
    @pytest.mark.parametrize("d,subspace", [(3, "full"), (4, "sym"), (4, "anti"), (6, "full")])
    def test_solver_recovers_B(self, d, subspace):
        res = crosscheck_with_generic_solver(d, subspace)
        assert res["pass"] and res["interior"] <= 1e-8
        assert res["solver_residual"] <= 1e-12

    def test_defect_rank_is_hook_size(self):
        assert crosscheck_with_generic_solver(5)["defect_rank"] == 9
