import numpy as np
import pytest

from amplitude_lab import (
    DomainError,
    Functional,
    HermitianForm,
    PositiveForm,
    ShapeError,
    evaluate,
    geometric_mean,
    interpolated_form,
    is_dominated,
    left_form,
    make_algebra,
    matrix_units,
    operator_coordinates,
    pair_representation,
    right_form,
)
from amplitude_lab.sampling import random_psd, random_state

from helpers import min_eigval, spd_mean_closed_form


def brute_force_left_gram(phi):
    units = list(matrix_units(phi.algebra))
    d = len(units)
    g = np.zeros((d, d), dtype=complex)
    for a, u in enumerate(units):
        for b, v in enumerate(units):
            g[a, b] = evaluate(phi, u.adjoint() @ v)
    return g


def brute_force_right_gram(phi):
    units = list(matrix_units(phi.algebra))
    d = len(units)
    g = np.zeros((d, d), dtype=complex)
    for a, u in enumerate(units):
        for b, v in enumerate(units):
            g[a, b] = evaluate(phi, v @ u.adjoint())
    return g


class TestLeftRightForms:
    def test_tracial_state(self):
        alg = make_algebra([2])
        tau = Functional(alg, (np.eye(2, dtype=complex) / 2,))
        assert np.allclose(left_form(tau).gram, np.eye(4) / 2)
        assert np.allclose(right_form(tau).gram, np.eye(4) / 2)

    def test_pure_state_brute_force(self):
        # oracle: evaluate phi(e_ij^* e_kl) on all 16 unit pairs; in the
        # row-major unit order e11,e12,e21,e22 the diagonal comes out
        # (1, 0, 1, 0)
        alg = make_algebra([2])
        phi = Functional(alg, (np.diag([1.0, 0.0]).astype(complex),))
        g = left_form(phi).gram
        assert np.allclose(g, brute_force_left_gram(phi))
        assert np.allclose(np.diag(g), [1.0, 0.0, 1.0, 0.0])

    def test_commutative_block(self):
        alg = make_algebra([1, 1])
        p = 0.3
        phi = Functional(alg, (np.array([[p]]), np.array([[1 - p]])))
        assert np.allclose(left_form(phi).gram, np.diag([p, 1 - p]))

    def test_right_form_brute_force(self):
        rng = np.random.default_rng(0)
        alg = make_algebra([2, 2])
        phi = random_state(rng, alg, rank_deficient=True)
        assert np.allclose(right_form(phi).gram, brute_force_right_gram(phi))
        assert np.allclose(left_form(phi).gram, brute_force_left_gram(phi))

    def test_coordinates_match_evaluation(self):
        rng = np.random.default_rng(1)
        alg = make_algebra([2, 3])
        phi = random_state(rng, alg)
        form = left_form(phi)
        from amplitude_lab.sampling import random_operator

        x = random_operator(rng, alg)
        y = random_operator(rng, alg)
        direct = evaluate(phi, x.adjoint() @ y)
        via_gram = form(operator_coordinates(x), operator_coordinates(y))
        assert direct == pytest.approx(via_gram)


class TestPairRepresentation:
    def test_identity_pair(self):
        alpha = PositiveForm(np.eye(3))
        rep = pair_representation(alpha, alpha)
        assert rep.rank == 3
        assert np.allclose(rep.a_op, np.eye(3) / 2)
        assert np.allclose(rep.b_op, np.eye(3) / 2)

    def test_orthogonal_supports(self):
        alpha = PositiveForm(np.diag([1.0, 0.0]))
        beta = PositiveForm(np.diag([0.0, 1.0]))
        rep = pair_representation(alpha, beta)
        assert rep.rank == 2
        assert np.allclose(sorted(np.linalg.eigvalsh(rep.a_op)), [0.0, 1.0])

    def test_zero_pair(self):
        zero = PositiveForm(np.zeros((3, 3)))
        rep = pair_representation(zero, zero)
        assert rep.rank == 0
        assert rep.jmat.shape == (0, 3)

    def test_invariants(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            d = int(rng.integers(2, 7))
            alpha = PositiveForm(random_psd(rng, d, rank=int(rng.integers(1, d + 1))))
            beta = PositiveForm(random_psd(rng, d))
            rep = pair_representation(alpha, beta)
            comm = rep.a_op @ rep.b_op - rep.b_op @ rep.a_op
            assert np.max(np.abs(comm)) <= 1e-8
            w = np.linalg.eigvalsh(rep.a_op)
            assert w[0] >= -1e-10 and w[-1] <= 1 + 1e-10
            j = rep.jmat
            assert np.max(np.abs(j.conj().T @ rep.a_op @ j - alpha.gram)) <= 1e-8
            assert np.max(np.abs(j.conj().T @ rep.b_op @ j - beta.gram)) <= 1e-8

    def test_dim_mismatch(self):
        with pytest.raises(ShapeError):
            pair_representation(PositiveForm(np.eye(2)), PositiveForm(np.eye(3)))


class TestGeometricMean:
    def test_commuting_diagonal(self):
        alpha = PositiveForm(np.diag([4.0, 1.0]))
        beta = PositiveForm(np.diag([1.0, 9.0]))
        assert np.allclose(geometric_mean(alpha, beta).gram, np.diag([2.0, 3.0]))

    def test_mean_with_identity_is_sqrt(self):
        alpha = PositiveForm(np.array([[2.0, 1.0], [1.0, 1.0]]))
        mean = geometric_mean(alpha, PositiveForm(np.eye(2)))
        expect = np.array([[3.0, 1.0], [1.0, 2.0]]) / np.sqrt(5.0)
        assert np.allclose(mean.gram, expect)

    def test_orthogonal_supports_vanish(self):
        alpha = PositiveForm(np.diag([1.0, 0.0]))
        beta = PositiveForm(np.diag([0.0, 1.0]))
        assert np.max(np.abs(geometric_mean(alpha, beta).gram)) <= 1e-12

    def test_symmetry(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            d = int(rng.integers(2, 7))
            alpha = PositiveForm(random_psd(rng, d, rank=int(rng.integers(1, d + 1))))
            beta = PositiveForm(random_psd(rng, d, rank=int(rng.integers(1, d + 1))))
            gap = geometric_mean(alpha, beta).gram - geometric_mean(beta, alpha).gram
            assert np.max(np.abs(gap)) <= 1e-9

    def test_closed_form_oracle(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            d = int(rng.integers(2, 9))
            a = random_psd(rng, d) + 0.1 * np.eye(d)
            b = random_psd(rng, d) + 0.1 * np.eye(d)
            mean = geometric_mean(PositiveForm(a), PositiveForm(b))
            assert np.max(np.abs(mean.gram - spd_mean_closed_form(a, b))) <= 1e-9

    def test_scaling(self):
        rng = np.random.default_rng(5)
        a = random_psd(rng, 4)
        b = random_psd(rng, 4)
        base = geometric_mean(PositiveForm(a), PositiveForm(b)).gram
        scaled = geometric_mean(PositiveForm(3.0 * a), PositiveForm(0.5 * b)).gram
        assert np.allclose(scaled, np.sqrt(1.5) * base)

    def test_monotonicity(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            d = 4
            ga = random_psd(rng, d)
            gb = random_psd(rng, d)
            # shrink each argument by a PSD amount while staying PSD
            wa = random_psd(rng, d)
            wb = random_psd(rng, d)
            for _ in range(60):
                if min_eigval(ga - wa) >= 0:
                    break
                wa = 0.5 * wa
            for _ in range(60):
                if min_eigval(gb - wb) >= 0:
                    break
                wb = 0.5 * wb
            big = geometric_mean(PositiveForm(ga), PositiveForm(gb)).gram
            small = geometric_mean(PositiveForm(ga - wa), PositiveForm(gb - wb)).gram
            assert min_eigval(big - small) >= -1e-9

    def test_superadditivity(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            d = 4
            a1, a2 = random_psd(rng, d), random_psd(rng, d)
            b1, b2 = random_psd(rng, d), random_psd(rng, d)
            whole = geometric_mean(PositiveForm(a1 + a2), PositiveForm(b1 + b2)).gram
            parts = (
                geometric_mean(PositiveForm(a1), PositiveForm(b1)).gram
                + geometric_mean(PositiveForm(a2), PositiveForm(b2)).gram
            )
            assert min_eigval(whole - parts) >= -1e-9


class TestDomination:
    def test_self_domination(self):
        rng = np.random.default_rng(8)
        alpha = PositiveForm(random_psd(rng, 3))
        assert is_dominated(alpha, alpha, alpha)

    def test_doubled_form_fails(self):
        rng = np.random.default_rng(9)
        alpha = PositiveForm(random_psd(rng, 3))
        assert not is_dominated(2.0 * alpha, alpha, alpha)

    def test_mean_is_dominated(self):
        rng = np.random.default_rng(10)
        for _ in range(10):
            d = int(rng.integers(2, 6))
            alpha = PositiveForm(random_psd(rng, d))
            beta = PositiveForm(random_psd(rng, d, rank=max(1, d - 1)))
            assert is_dominated(geometric_mean(alpha, beta), alpha, beta)

    def test_variational_maximality(self):
        # certified dominated forms never exceed the mean
        rng = np.random.default_rng(11)
        from amplitude_lab.linalg import psd_sqrt as root

        for _ in range(25):
            d = int(rng.integers(2, 6))
            ga = random_psd(rng, d) + 0.05 * np.eye(d)
            gb = random_psd(rng, d) + 0.05 * np.eye(d)
            alpha, beta = PositiveForm(ga), PositiveForm(gb)
            mean = geometric_mean(alpha, beta)
            k = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            k /= max(np.linalg.norm(k, 2), 1.0)
            gamma = root(ga) @ k @ root(gb)
            gamma = 0.5 * (gamma + gamma.conj().T)
            for _ in range(80):
                if is_dominated(HermitianForm(gamma), alpha, beta):
                    break
                gamma = 0.5 * gamma
            assert is_dominated(HermitianForm(gamma), alpha, beta)
            assert min_eigval(mean.gram - gamma) >= -1e-9


class TestInterpolatedForm:
    def test_left_endpoint(self):
        rng = np.random.default_rng(12)
        alg = make_algebra([2, 2])
        phi = random_state(rng, alg, rank_deficient=True)
        psi = random_state(rng, alg, rank_deficient=True)
        assert np.allclose(interpolated_form(phi, psi, 0.0).gram, left_form(phi).gram)

    def test_right_endpoint(self):
        rng = np.random.default_rng(13)
        alg = make_algebra([3])
        phi = random_state(rng, alg)
        psi = random_state(rng, alg, rank_deficient=True)
        assert np.allclose(interpolated_form(phi, psi, 1.0).gram, right_form(psi).gram)

    def test_midpoint_is_geometric_mean(self):
        rng = np.random.default_rng(14)
        for alg in (make_algebra([2]), make_algebra([2, 2])):
            phi = random_state(rng, alg)
            psi = random_state(rng, alg)
            mid = interpolated_form(phi, psi, 0.5).gram
            mean = geometric_mean(left_form(phi), right_form(psi)).gram
            assert np.max(np.abs(mid - mean)) <= 1e-9

    def test_domain(self):
        rng = np.random.default_rng(15)
        alg = make_algebra([2])
        phi = random_state(rng, alg)
        with pytest.raises(DomainError):
            interpolated_form(phi, phi, 1.5)
