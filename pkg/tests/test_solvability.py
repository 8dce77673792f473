import numpy as np
import pytest

from matmom import (
    MomentSequence,
    ValidationError,
    build_gamma,
    check,
    check_cdfk,
    check_even,
    check_l0,
    check_odd,
    gen_random_measure,
    measure_from_atoms,
    moments_of,
)

from helpers import random_hermitian, random_unitary


def scalar_seq(a, b, values):
    return MomentSequence(a, b, tuple(np.array([[v]], dtype=complex) for v in values))


def gauss_unit_interval_measure():
    # two-point quadrature reproducing the first four Lebesgue moments on [0, 1]
    off = 1.0 / (2.0 * np.sqrt(3.0))
    return measure_from_atoms(0, 1, [0.5 - off, 0.5 + off],
                              [0.5 * np.eye(1), 0.5 * np.eye(1)])


class TestCheckOdd:
    def test_symmetric_example_solvable(self):
        rep = check_odd(scalar_seq(-1, 1, [1, 0, 1]))
        assert rep.solvable and rep.case == "odd"
        assert rep.criteria_agreement

    def test_second_moment_too_large(self):
        rep = check_odd(scalar_seq(-1, 1, [1, 0, 3]))
        assert not rep.solvable
        assert rep.failed_conditions == ("GammaTilde PSD",)
        assert rep.details["GammaTilde PSD"] == pytest.approx(-2.0)

    def test_lebesgue_moments_solvable(self):
        # realized by an explicit quadrature measure, so necessity forces yes
        mu = gauss_unit_interval_measure()
        seq = moments_of(mu, 2)
        assert np.allclose([s[0, 0] for s in seq.moments], [1.0, 0.5, 1 / 3])
        assert check_odd(seq).solvable

    def test_kernel_inclusion_failure(self):
        # zero mass but nonzero second moment: the shifted Hankel does not
        # annihilate the kernel (the interval-weighted matrix fails too, as
        # the two criteria are equivalent)
        rep = check_odd(scalar_seq(-1, 1, [0, 0, 1]))
        assert not rep.solvable
        assert "kernel inclusion" in rep.failed_conditions

    def test_parity_errors(self):
        with pytest.raises(ValidationError):
            check_odd(scalar_seq(-1, 1, [1, 0]))
        with pytest.raises(ValidationError):
            check_odd(scalar_seq(-1, 1, [1]))


class TestCheckEven:
    def test_interval_for_two_moments(self):
        rep = check_even(scalar_seq(0, 1, [1, 0.5]))
        assert rep.solvable
        assert rep.even_case.S_min == pytest.approx(np.array([[0.25]]))
        assert rep.even_case.S_max == pytest.approx(np.array([[0.5]]))
        assert rep.even_case.Y.shape == (0, 1)

    def test_mean_outside_interval(self):
        rep = check_even(scalar_seq(0, 1, [1, 2]))
        assert not rep.solvable
        assert "S interval nonempty" in rep.failed_conditions

    def test_d_zero_conventions(self):
        # the second system is empty, so S_max = -ab S_0 + (a+b) S_1
        rep = check_even(scalar_seq(-2, 3, [1, 0.5]))
        assert rep.even_case.S_max == pytest.approx(np.array([[6.0 + 0.5]]))

    def test_higher_order_even(self):
        mu = gen_random_measure(11, 2, 3, 0.0, 1.0)
        seq = moments_of(mu, 5)
        rep = check_even(seq)
        assert rep.solvable
        assert rep.even_case.X.shape == (6, 2)
        assert rep.even_case.Y.shape == (4, 2)
        # the reported solutions reproduce their right-hand sides
        gamma = build_gamma(seq, 2).matrix
        rhs = np.vstack([seq.moments[3 + i] for i in range(3)])
        residual = np.linalg.norm(gamma @ rep.even_case.X - rhs)
        assert residual <= 1e-8 * np.linalg.norm(rhs)

    def test_parity_error(self):
        with pytest.raises(ValidationError):
            check_even(scalar_seq(0, 1, [1, 0.5, 1 / 3]))


class TestCheckL0:
    def test_identity(self):
        assert check_l0(np.eye(2)).solvable

    def test_indefinite(self):
        rep = check_l0(np.array([[1.0, 2.0], [2.0, 1.0]]))
        assert not rep.solvable
        assert rep.failed_conditions == ("S0 PSD",)

    def test_zero_matrix(self):
        assert check_l0(np.zeros((2, 2))).solvable

    def test_no_cross_check(self):
        assert check_l0(np.eye(1)).criteria_agreement is None


class TestCheckCdfk:
    def test_examples(self):
        assert not check_cdfk(scalar_seq(0, 1, [1, 2]))
        assert check_cdfk(scalar_seq(0, 1, [1, 0.5]))
        assert check_cdfk(scalar_seq(-1, 1, [1, 0, 1]))

    def test_requires_l_at_least_one(self):
        with pytest.raises(ValidationError):
            check_cdfk(scalar_seq(0, 1, [1]))


class TestNecessity:
    """Moments of an actual measure are always solvable, under both criteria."""

    @pytest.mark.parametrize("seed", range(500))
    def test_random_measures(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 4))
        atoms = int(rng.integers(1, 5))
        d = int(rng.integers(1, 4))
        a, b = sorted(rng.uniform(-3, 3, size=2))
        if b - a < 0.1:
            b = a + 0.1
        mu = gen_random_measure(seed, n, atoms, a, b)

        rep_odd = check_odd(moments_of(mu, 2 * d))
        assert rep_odd.solvable, (seed, rep_odd.failed_conditions)
        assert rep_odd.cdfk_solvable
        assert rep_odd.criteria_agreement

        rep_even = check_even(moments_of(mu, 2 * d + 1))
        assert rep_even.solvable, (seed, rep_even.failed_conditions)
        assert rep_even.cdfk_solvable
        assert rep_even.criteria_agreement


class TestCriteriaAgreement:
    @pytest.mark.parametrize("seed", range(60))
    def test_perturbed_instances_agree(self, seed):
        # Hermitian perturbations of magnitude 1e-2 push many instances off
        # the solvable set; the two criteria must still agree (hard sense).
        rng = np.random.default_rng(10_000 + seed)
        n = int(rng.integers(1, 3))
        mu = gen_random_measure(seed, n, int(rng.integers(1, 4)), -1.0, 1.0)
        l = int(rng.integers(2, 6))
        seq = moments_of(mu, l)
        perturbed = MomentSequence(seq.a, seq.b, tuple(
            s + 1e-2 * random_hermitian(rng, n) for s in seq.moments
        ))
        rep = check(perturbed)
        assert rep.criteria_agreement, (seed, rep.solvable, rep.cdfk_solvable)


class TestEvenOddConsistency:
    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_appending_inside_interval_stays_solvable(self, seed):
        from matmom import sqrt_psd
        from matmom.linalg import herm_part

        rng = np.random.default_rng(20_000 + seed)
        n = int(rng.integers(1, 3))
        mu = gen_random_measure(seed, n, 3, 0.0, 1.0)
        d = int(rng.integers(0, 3))
        seq = moments_of(mu, 2 * d + 1)
        rep = check_even(seq)
        assert rep.solvable
        data = rep.even_case
        width_half = sqrt_psd(herm_part(data.S_max - data.S_min))
        interior = []
        for _ in range(3):
            t = random_hermitian(rng, n)
            w = np.linalg.eigvalsh(t)
            t = (t - w.min() * np.eye(n)) / max(w.max() - w.min(), 1.0)
            interior.append(herm_part(data.S_min + width_half @ t @ width_half))
        for s_next in (data.S_min, data.S_max,
                       0.5 * (data.S_min + data.S_max), *interior):
            assert check_odd(seq.extended(s_next)).solvable

    def test_appending_outside_interval_fails(self):
        seq = scalar_seq(0, 1, [1, 0.5])
        data = check_even(seq).even_case
        eps = 1e-6 * np.eye(1)
        assert not check_odd(seq.extended(data.S_min - eps)).solvable
        assert not check_odd(seq.extended(data.S_max + eps)).solvable


class TestUnitaryInvariance:
    @pytest.mark.parametrize("seed", range(8))
    def test_odd_verdict_invariant_under_congruence(self, seed):
        rng = np.random.default_rng(30_000 + seed)
        n = 2
        if seed % 2 == 0:
            seq = moments_of(gen_random_measure(seed, n, 3, -1.0, 1.0), 4)
        else:
            # decisively unsolvable: too-large top moment
            mu = gen_random_measure(seed, n, 3, -1.0, 1.0)
            seq = moments_of(mu, 4)
            seq = MomentSequence(seq.a, seq.b, seq.moments[:-1]
                                 + (seq.moments[-1] + 10 * np.eye(n),))
        u = random_unitary(rng, n)
        rotated = MomentSequence(seq.a, seq.b, tuple(
            u.conj().T @ s @ u for s in seq.moments
        ))
        assert check_odd(seq).solvable == check_odd(rotated).solvable


def test_dispatch():
    assert check(scalar_seq(0, 1, [1])).case == "l0"
    assert check(scalar_seq(0, 1, [1, 0.5])).case == "even"
    assert check(scalar_seq(-1, 1, [1, 0, 1])).case == "odd"
