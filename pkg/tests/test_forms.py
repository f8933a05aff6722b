"""Tests for structured forms: data containers, staircases, Lagrangian
subspaces, Hamiltonian Schur forms, and imaginary-axis decoupling."""

import numpy as np
import pytest

import helpers
from hamriccati import (
    CONTROL_FIRST,
    OBSERVE_FIRST,
    HamiltonianMatrix,
    LagrangianConditionError,
    LinalgError,
    RiccatiData,
    StateSpace,
    assemble_hamiltonian,
    decouple_imaginary,
    from_state_space,
    hamiltonian_schur,
    is_controllable,
    is_observable,
    j_matrix,
    lagrangian_subspace,
    staircase,
)
from hamriccati.forms import _staircase_pair


def _norm(a):
    return np.linalg.norm(a)


# ---------------------------------------------------------------------------
# containers


class TestRiccatiData:
    def test_lab_roundtrip(self, lab_fgk):
        f, g, k = lab_fgk
        data = RiccatiData(f, g, k)
        assert data.n == 2
        np.testing.assert_allclose(data.f, f)
        np.testing.assert_allclose(data.g, g)
        np.testing.assert_allclose(data.k, k)

    def test_symmetrizes_dust(self):
        g = np.array([[1.0, 1e-12], [0.0, 1.0]])
        data = RiccatiData(np.zeros((2, 2)), g, np.zeros((2, 2)))
        np.testing.assert_allclose(data.g, data.g.conj().T)

    def test_rejects_indefinite_k(self):
        with pytest.raises(ValueError, match="positive semidefinite"):
            RiccatiData(np.zeros((2, 2)), np.eye(2), np.diag([1.0, -1.0]))

    def test_rejects_non_hermitian_g(self):
        g = np.array([[1.0, 1.0], [0.0, 1.0]])
        with pytest.raises(ValueError, match="Hermitian"):
            RiccatiData(np.zeros((2, 2)), g, np.zeros((2, 2)))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            RiccatiData(np.zeros((2, 2)), np.eye(3), np.zeros((2, 2)))


class TestStateSpace:
    def test_accepts_valid(self):
        ss = StateSpace(-np.eye(2), np.ones((2, 1)), np.ones((1, 2)), [[1.0]])
        assert ss.n == 2 and ss.m == 1

    def test_rejects_bad_b_shape(self):
        with pytest.raises(ValueError, match="b must have shape"):
            StateSpace(-np.eye(2), np.ones((3, 1)), np.ones((1, 2)), [[1.0]])

    def test_rejects_singular_d_part(self):
        with pytest.raises(ValueError, match="positive definite"):
            StateSpace(-np.eye(1), [[1.0]], [[1.0]], [[1e-12]])


class TestHamiltonian:
    def test_j_matrix(self):
        j = j_matrix(2)
        np.testing.assert_allclose(j @ j, -np.eye(4))
        np.testing.assert_allclose(j.conj().T, -j)

    def test_block_layout(self, lab_fgk):
        f, g, k = lab_fgk
        h = assemble_hamiltonian(RiccatiData(f, g, k))
        full = h.full
        np.testing.assert_allclose(full[:2, :2], f)
        np.testing.assert_allclose(full[:2, 2:], g)
        np.testing.assert_allclose(full[2:, :2], -k)
        np.testing.assert_allclose(full[2:, 2:], -f.conj().T)

    def test_structure_identity(self, rng):
        f, g, k = helpers.rand_stable_triple(rng, 4)
        h = HamiltonianMatrix.from_triple(f, g, k).full
        jh = j_matrix(4) @ h
        np.testing.assert_allclose(jh, jh.conj().T, atol=1e-14)

    def test_spectrum_symmetry(self, rng):
        f, g, k = helpers.rand_stable_triple(rng, 4)
        eigs = np.linalg.eigvals(HamiltonianMatrix.from_triple(f, g, k).full)
        reflected = -eigs.conj()
        # match multisets
        for lam in eigs:
            assert np.min(np.abs(reflected - lam)) < 1e-8


# ---------------------------------------------------------------------------
# state-space reduction


class TestFromStateSpace:
    def _random_system(self, rng, n=4, m=2):
        a = helpers.rand_complex(rng, n, n)
        b = helpers.rand_complex(rng, n, m)
        c = helpers.rand_complex(rng, m, n)
        d = helpers.rand_complex(rng, m, m) + 5.0 * np.eye(m)
        return StateSpace(a, b, c, d)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_matches_direct_formulas(self, seed):
        rng = helpers.make_rng(seed)
        ss = self._random_system(rng)
        data = from_state_space(ss)
        s = ss.d + ss.d.conj().T
        s_inv = np.linalg.inv(s)
        np.testing.assert_allclose(data.f, ss.a - ss.b @ s_inv @ ss.c, atol=1e-12)
        np.testing.assert_allclose(data.g, ss.b @ s_inv @ ss.b.conj().T, atol=1e-12)
        np.testing.assert_allclose(data.k, ss.c.conj().T @ s_inv @ ss.c, atol=1e-12)

    @pytest.mark.parametrize("seed", [3, 4])
    def test_residual_equals_dissipation_schur_complement(self, seed):
        # For any Hermitian x, the Riccati residual of the reduced triple
        # equals the Schur complement of the dissipation block form:
        #   a^H x + x a + (x b - c^H) s^{-1} (b^H x - c).
        rng = helpers.make_rng(seed)
        ss = self._random_system(rng)
        data = from_state_space(ss)
        x = helpers.rand_hermitian(rng, ss.n)
        s = ss.d + ss.d.conj().T
        edge = x @ ss.b - ss.c.conj().T
        direct = (
            ss.a.conj().T @ x
            + x @ ss.a
            + edge @ np.linalg.solve(s, edge.conj().T)
        )
        via_triple = helpers.riccati_residual(data.f, data.g, data.k, x)
        np.testing.assert_allclose(via_triple, direct, atol=1e-10 * (1 + _norm(direct)))


# ---------------------------------------------------------------------------
# staircase forms


def _control_first_example():
    f = np.array([[-1.0, 0.0, 2.0], [1.0, -2.0, 1.0], [0.0, 0.0, -3.0]])
    g = np.array([[1.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 0.0]])
    k = np.array([[2.0, 0.0, 1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 3.0]])
    return f, g, k


class TestStaircasePair:
    def test_jordan_chain_partial(self):
        a = np.array([[0.0, 1.0], [0.0, 0.0]])
        _, _, nc = _staircase_pair(a, np.array([[1.0], [0.0]]))
        assert nc == 1
        _, _, nc = _staircase_pair(a, np.array([[0.0], [1.0]]))
        assert nc == 2

    def test_zero_input(self):
        a = np.eye(3)
        u, sizes, nc = _staircase_pair(a, np.zeros((3, 1)))
        assert nc == 0 and sizes == []
        np.testing.assert_allclose(u, np.eye(3))

    @pytest.mark.parametrize("seed,g_rank", [(0, 1), (1, 2), (2, 4)])
    def test_dimension_matches_reachability_oracle(self, seed, g_rank):
        rng = helpers.make_rng(seed)
        n = 4
        f = helpers.rand_stable(rng, n)
        b = helpers.rand_complex(rng, n, g_rank)
        u, _, nc = _staircase_pair(f, b)
        assert nc == helpers.krylov_rank(f, b)
        # leading nc columns must be invariant for f up to the input range:
        ft = u.conj().T @ f @ u
        assert _norm(ft[nc:, :nc]) < 1e-10 * (1 + _norm(f))


class TestControllabilityObservability:
    def test_lab_pair(self, lab_fgk):
        f, g, k = lab_fgk
        assert is_controllable(f, g)
        assert is_observable(f, k)
        assert not is_controllable(f, np.zeros((2, 2)))

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_matches_rank_oracles(self, seed):
        rng = helpers.make_rng(seed)
        n = 5
        f = helpers.rand_complex(rng, n, n)
        g = helpers.rand_psd(rng, n, rank=int(rng.integers(0, n + 1)))
        k = helpers.rand_psd(rng, n, rank=int(rng.integers(0, n + 1)))
        assert is_controllable(f, g) == (helpers.krylov_rank(f, g) == n)
        assert is_observable(f, k) == (helpers.obs_rank(f, k) == n)


class TestStaircase:
    def test_control_first_identity_fast_path(self):
        f, g, k = _control_first_example()
        form = staircase(RiccatiData(f, g, k), CONTROL_FIRST)
        assert (form.n1, form.n2, form.n3) == (1, 1, 1)
        np.testing.assert_array_equal(form.u, np.eye(3))
        np.testing.assert_array_equal(form.f, f.astype(complex))
        np.testing.assert_array_equal(form.g, g.astype(complex))
        np.testing.assert_array_equal(form.k, k.astype(complex))

    def test_observe_first_identity_fast_path(self, reducible_fgk):
        f, g, k = reducible_fgk
        form = staircase(RiccatiData(f, g, k), OBSERVE_FIRST)
        assert (form.n1, form.n2, form.n3) == (1, 1, 1)
        np.testing.assert_array_equal(form.u, np.eye(3))
        np.testing.assert_array_equal(form.f, f.astype(complex))
        # literal inner blocks survive: core (f11, g11, k11) and couplings
        assert form.block(form.f, 1, 1)[0, 0] == -2.0
        assert form.block(form.k, 2, 2)[0, 0] == 1.0

    def test_rotated_control_first_recovers_sizes(self, rng):
        f, g, k = _control_first_example()
        v = helpers.rand_unitary(rng, 3)
        data = RiccatiData(v @ f @ v.conj().T, v @ g @ v.conj().T, v @ k @ v.conj().T)
        form = staircase(data, CONTROL_FIRST)
        assert (form.n1, form.n2, form.n3) == (1, 1, 1)
        # not the identity transform, but a consistent one
        scale = 1 + _norm(data.f)
        np.testing.assert_allclose(
            form.u.conj().T @ form.u, np.eye(3), atol=1e-12
        )
        np.testing.assert_allclose(
            form.u.conj().T @ data.f @ form.u, form.f, atol=1e-10 * scale
        )
        # spectrum preserved
        got = np.sort_complex(np.linalg.eigvals(form.f))
        want = np.sort_complex(np.linalg.eigvals(f))
        np.testing.assert_allclose(got, want, atol=1e-8)

    @pytest.mark.parametrize("variant", [CONTROL_FIRST, OBSERVE_FIRST])
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_random_patterns_and_idempotence(self, variant, seed):
        rng = helpers.make_rng(100 + seed)
        n = 5
        f = helpers.rand_complex(rng, n, n)
        g = helpers.rand_psd(rng, n, rank=2)
        k = helpers.rand_psd(rng, n, rank=2)
        form = staircase(RiccatiData(f, g, k), variant)
        n1, n12 = form.n1, form.n12
        scale_g = 1 + _norm(g)
        scale_k = 1 + _norm(k)
        scale_f = 1 + _norm(f)
        if variant == CONTROL_FIRST:
            assert n12 == helpers.krylov_rank(f, g)
            assert _norm(form.f[n12:, :n12]) < 1e-9 * scale_f
            assert _norm(form.f[:n1, n1:n12]) < 1e-9 * scale_f
            assert _norm(form.g[n12:, :]) < 1e-9 * scale_g
            assert _norm(form.k[n1:n12, :]) < 1e-9 * scale_k
        else:
            assert n12 == helpers.obs_rank(f, k)
            assert _norm(form.f[:n12, n12:]) < 1e-9 * scale_f
            assert _norm(form.f[n1:n12, :n1]) < 1e-9 * scale_f
            assert _norm(form.g[n1:n12, :]) < 1e-9 * scale_g
            assert _norm(form.k[n12:, :]) < 1e-9 * scale_k
        # core block is minimal: controllable and observable
        core_f = form.f[:n1, :n1]
        assert is_controllable(core_f, form.g[:n1, :n1])
        assert is_observable(core_f, form.k[:n1, :n1])
        # applying the staircase to its own output is the identity
        again = staircase(RiccatiData(form.f, form.g, form.k), variant)
        np.testing.assert_allclose(again.u, np.eye(n), atol=1e-14)
        assert (again.n1, again.n2, again.n3) == (form.n1, form.n2, form.n3)

    def test_fully_minimal_triple(self, rng):
        f, g, k = helpers.rand_stable_triple(rng, 3)
        for variant in (CONTROL_FIRST, OBSERVE_FIRST):
            form = staircase(RiccatiData(f, g, k), variant)
            assert (form.n1, form.n2, form.n3) == (3, 0, 0)
            np.testing.assert_array_equal(form.u, np.eye(3))

    def test_zero_g_zero_k(self):
        f = np.array([[-1.0, 2.0], [0.0, -4.0]])
        z = np.zeros((2, 2))
        form_c = staircase(RiccatiData(f, z, z), CONTROL_FIRST)
        assert (form_c.n1, form_c.n2, form_c.n3) == (0, 0, 2)
        form_o = staircase(RiccatiData(f, z, z), OBSERVE_FIRST)
        assert (form_o.n1, form_o.n2, form_o.n3) == (0, 0, 2)
        np.testing.assert_array_equal(form_o.u, np.eye(2))

    def test_unknown_variant_rejected(self, lab_fgk):
        with pytest.raises(ValueError, match="variant"):
            staircase(RiccatiData(*lab_fgk), "sideways")


# ---------------------------------------------------------------------------
# Lagrangian subspaces and Hamiltonian Schur form


def _vertex_triple():
    """All four closed-loop eigenvalues collide at zero for this triple."""
    f = np.array([[-3.0, -1.0], [-1.0, -5.0]])
    g = np.eye(2)
    k = np.array([[10.0, 8.0], [8.0, 26.0]])
    return f, g, k


class TestLagrangianSubspace:
    def test_lab_stable_subspace(self, lab_fgk):
        h = HamiltonianMatrix.from_triple(*lab_fgk)
        ls = lagrangian_subspace(h, "stable")
        assert ls.defect < 1e-12
        np.testing.assert_allclose(
            np.sort(ls.selected_spectrum.real), [-3.0, -2.0], atol=1e-10
        )
        assert np.max(np.abs(ls.selected_spectrum.imag)) < 1e-10
        # invariance: H w = w t11
        res = h.full @ ls.w - ls.w @ ls.t11
        assert _norm(res) < 1e-10 * (1 + _norm(h.full))
        x = ls.w2 @ np.linalg.inv(ls.w1)
        np.testing.assert_allclose(x, [[1.0, 1.0], [1.0, 2.0]], atol=1e-8)

    def test_lab_antistable_subspace(self, lab_fgk):
        h = HamiltonianMatrix.from_triple(*lab_fgk)
        ls = lagrangian_subspace(h, "antistable")
        np.testing.assert_allclose(
            np.sort(ls.selected_spectrum.real), [2.0, 3.0], atol=1e-10
        )
        x = ls.w2 @ np.linalg.inv(ls.w1)
        np.testing.assert_allclose(x, [[5.0, 1.0], [1.0, 8.0]], atol=1e-8)

    def test_predicate_matches_mode(self, lab_fgk):
        h = HamiltonianMatrix.from_triple(*lab_fgk)
        by_mode = lagrangian_subspace(h, "antistable")
        by_pred = lagrangian_subspace(h, lambda lam: lam.real > 0)
        p1 = by_mode.w @ by_mode.w.conj().T
        p2 = by_pred.w @ by_pred.w.conj().T
        np.testing.assert_allclose(p1, p2, atol=1e-10)

    def test_predicate_wrong_count_rejected(self, lab_fgk):
        h = HamiltonianMatrix.from_triple(*lab_fgk)
        with pytest.raises(ValueError, match="exactly"):
            lagrangian_subspace(h, lambda lam: True)

    def test_raw_array_accepted(self, lab_fgk):
        h = HamiltonianMatrix.from_triple(*lab_fgk)
        ls = lagrangian_subspace(np.array(h.full), "stable")
        assert ls.defect < 1e-12

    def test_non_hamiltonian_array_rejected(self):
        with pytest.raises(ValueError, match="not Hamiltonian"):
            lagrangian_subspace(np.diag([1.0, 2.0, 3.0, 4.0]), "stable")

    def test_definite_axis_cluster_has_no_subspace(self):
        # x^2 + 1 = 0 has no Hermitian solution; both axis eigenvalues
        # carry definite forms and the failure reports them.
        h = HamiltonianMatrix.from_triple([[0.0]], [[1.0]], [[1.0]])
        with pytest.raises(LagrangianConditionError, match="definite form") as ei:
            lagrangian_subspace(h, "stable")
        err = ei.value
        assert err.defect > 1e-2
        assert any(e["definite"] for e in err.inertia_evidence)

    def test_vertex_jordan_cluster(self):
        # Fourfold eigenvalue collision at zero; the kernel still spans an
        # isotropic invariant subspace and the solution it encodes is -f.
        f, g, k = _vertex_triple()
        h = HamiltonianMatrix.from_triple(f, g, k)
        assert np.max(np.abs(np.linalg.eigvals(h.full))) < 1e-6
        ls = lagrangian_subspace(h, "stable")
        assert ls.defect < 1e-6
        x = ls.w2 @ np.linalg.inv(ls.w1)
        np.testing.assert_allclose(x, [[3.0, 1.0], [1.0, 5.0]], atol=1e-5)

    def test_boundary_mixed_axis_and_stable(self):
        # One strict pair (+-3) plus a double eigenvalue at zero.
        f = np.array([[-3.0, -1.0], [-1.0, -5.0]])
        k = np.array([[10.0, 8.0], [8.0, 17.0]])
        h = HamiltonianMatrix.from_triple(f, np.eye(2), k)
        ls = lagrangian_subspace(h, "stable")
        assert ls.defect < 1e-6
        x = ls.w2 @ np.linalg.inv(ls.w1)
        np.testing.assert_allclose(x, [[3.0, 1.0], [1.0, 2.0]], atol=1e-5)


class TestHamiltonianSchur:
    def test_lab_factorization(self, lab_fgk):
        h = HamiltonianMatrix.from_triple(*lab_fgk)
        hs = hamiltonian_schur(h, "stable")
        n = 2
        assert hs.orth_defect < 1e-10
        assert hs.symplectic_defect < 1e-10
        assert hs.lower_left_residual < 1e-10
        np.testing.assert_allclose(
            np.sort(np.linalg.eigvals(hs.t11).real), [-3.0, -2.0], atol=1e-8
        )
        # t12 Hermitian; (2,2) block equals -t11^H; full reconstruction
        np.testing.assert_allclose(hs.t12, hs.t12.conj().T, atol=1e-10)
        t_full = hs.q.conj().T @ h.full @ hs.q
        np.testing.assert_allclose(t_full[n:, n:], -hs.t11.conj().T, atol=1e-10)
        rebuilt = np.block(
            [[hs.t11, hs.t12], [np.zeros((n, n)), -hs.t11.conj().T]]
        )
        np.testing.assert_allclose(
            hs.q @ rebuilt @ hs.q.conj().T, h.full, atol=1e-9 * (1 + _norm(h.full))
        )

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_random_weakly_loaded_triples(self, seed):
        # Small k keeps the spectrum away from the axis, so the stable
        # selection is unambiguous and the factorization is crisp.
        rng = helpers.make_rng(200 + seed)
        n = 4
        f = helpers.rand_stable(rng, n, margin=0.5)
        g = helpers.rand_psd(rng, n, rank=n)
        g = g / np.linalg.norm(g)
        k = helpers.rand_psd(rng, n, rank=n)
        k = 1e-3 * k / np.linalg.norm(k)
        h = HamiltonianMatrix.from_triple(f, g, k)
        hs = hamiltonian_schur(h, "stable")
        assert hs.orth_defect < 1e-10
        assert hs.symplectic_defect < 1e-10
        assert hs.lower_left_residual < 1e-10
        assert np.all(np.linalg.eigvals(hs.t11).real < 0)


# ---------------------------------------------------------------------------
# imaginary-axis decoupling


class TestDecoupleImaginary:
    def test_all_off_axis(self):
        f_closed = np.diag([-2.0, -3.0])
        dec = decouple_imaginary(f_closed, np.eye(2))
        assert dec.n_offaxis == 2 and dec.n_axis == 0
        j = j_matrix(2)
        np.testing.assert_allclose(
            dec.s.conj().T @ j @ dec.s, j, atol=1e-10
        )

    def test_mixed_spectrum_split(self):
        f_closed = np.zeros((3, 3))
        f_closed[0, 0] = -2.0
        f_closed[1, 2] = 1.0
        f_closed[2, 1] = -1.0
        g = np.eye(3)
        dec = decouple_imaginary(f_closed, g)
        assert dec.n_offaxis == 1 and dec.n_axis == 2
        np.testing.assert_allclose(np.linalg.eigvals(dec.t1), [-2.0], atol=1e-10)
        np.testing.assert_allclose(
            np.sort(np.linalg.eigvals(dec.t2).imag), [-1.0, 1.0], atol=1e-10
        )
        # the doubled transform is symplectic and block-decouples
        n = 3
        j = j_matrix(n)
        np.testing.assert_allclose(dec.s.conj().T @ j @ dec.s, j, atol=1e-10)
        h_cl = np.block(
            [[f_closed, g], [np.zeros((n, n)), -f_closed.conj().T]]
        )
        t = np.linalg.solve(dec.s, h_cl @ dec.s)
        n_re = dec.n_offaxis
        perm = np.r_[0:n_re, n : n + n_re, n_re:n, n + n_re : 2 * n]
        t = t[np.ix_(perm, perm)]
        k = 2 * n_re
        assert _norm(t[k:, :k]) < 1e-9
        assert _norm(t[:k, k:]) < 1e-9
        # diagonal sub-blocks carry (t1, g11) and (t2, g22)
        np.testing.assert_allclose(t[:n_re, :n_re], dec.t1, atol=1e-9)
        np.testing.assert_allclose(t[:n_re, n_re:k], dec.g11, atol=1e-9)
        np.testing.assert_allclose(t[k : k + dec.n_axis, k : k + dec.n_axis], dec.t2, atol=1e-9)

    def test_straddling_eigenvalue_rejected(self):
        with pytest.raises(LinalgError, match="straddle"):
            decouple_imaginary(np.array([[5e-8]]), np.array([[1.0]]))

    def test_non_hermitian_g_rejected(self):
        with pytest.raises(ValueError, match="Hermitian"):
            decouple_imaginary(-np.eye(2), np.array([[0.0, 1.0], [0.0, 0.0]]))
