import numpy as np
import pytest

from matmom import (
    MomentSequence,
    OperatorIllDefined,
    ValidationError,
    build_gamma,
    build_gamma_tilde,
    build_gram_space,
    build_operators,
    gen_random_measure,
    moments_of,
)


def scalar_seq(a, b, values):
    return MomentSequence(a, b, tuple(np.array([[v]], dtype=complex) for v in values))


def gram_matrix(space):
    # Gram entry (n, m) in the fixed convention sum_i u_i conj(v_i)
    x = space.vectors
    return x.T @ x.conj()


class TestGramSpace:
    def test_orthonormal_case(self):
        space = build_gram_space(scalar_seq(-1, 1, [1, 0, 1]))
        assert space.rank == 2
        g = gram_matrix(space)
        assert np.allclose(g, np.eye(2), atol=1e-12)

    def test_rank_one_case(self):
        space = build_gram_space(scalar_seq(-1, 1, [1, 1, 1]))
        assert space.rank == 1
        assert np.abs(space.vectors[:, 0] - space.vectors[:, 1]).max() <= 1e-10

    @pytest.mark.parametrize("seed", range(10))
    def test_gram_identity_random(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 4))
        mu = gen_random_measure(seed, n, int(rng.integers(1, 5)), -2.0, 3.0)
        seq = moments_of(mu, 2 * int(rng.integers(1, 4)))
        space = build_gram_space(seq)
        gamma = space.gram
        scale = max(1.0, np.linalg.norm(gamma, 2))
        assert np.abs(gram_matrix(space) - gamma).max() <= 1e-9 * scale
        # the vectors span the whole r-dimensional space
        assert np.linalg.matrix_rank(space.vectors, tol=1e-10) == space.rank

    def test_refuses_non_psd(self):
        with pytest.raises(ValidationError):
            build_gram_space(scalar_seq(-1, 1, [1, 0, -1]))

    def test_requires_odd_case(self):
        with pytest.raises(ValidationError):
            build_gram_space(scalar_seq(-1, 1, [1, 0]))


class TestBuildOperators:
    def test_defect_line_example(self):
        # orthonormal x_0, x_1 and the shift maps x_0 to x_1
        model = build_operators(build_gram_space(scalar_seq(-1, 1, [1, 0, 1])))
        assert model.dom_dim == 1 and model.def_dim == 1
        assert np.allclose(model.P, [[0.0]], atol=1e-14)
        assert np.allclose(model.Q, [[1.0]], atol=1e-14)

    def test_point_mass_no_defect(self):
        model = build_operators(build_gram_space(scalar_seq(-1, 1, [1, 1, 1])))
        assert model.space.rank == 1
        assert model.no_defect
        assert np.allclose(model.P, [[1.0]], atol=1e-12)

    def test_ill_defined_shift(self):
        # zero mass with nonzero second moment: the domain vector vanishes
        # while the shifted vector does not
        space = build_gram_space(scalar_seq(-1, 1, [0, 0, 1]))
        with pytest.raises(OperatorIllDefined):
            build_operators(space)

    @pytest.mark.parametrize("seed", range(10))
    def test_contraction_column(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 4))
        mu = gen_random_measure(1000 + seed, n, int(rng.integers(1, 5)), 0.0, 1.0)
        model = build_operators(build_gram_space(moments_of(mu, 4)))
        assert np.linalg.norm(model.column(), 2) <= 1.0 + 1e-10
        assert np.allclose(model.P, model.P.conj().T, atol=1e-12)
        u = np.hstack([model.dom_basis, model.def_basis])
        assert np.allclose(u.conj().T @ u, np.eye(model.space.rank), atol=1e-12)


class TestOperatorIdentities:
    @pytest.mark.parametrize("seed", range(8))
    def test_contraction_defect_matches_weighted_form(self, seed):
        # |u|^2 - |Bu|^2 equals 4/(b-a)^2 times the interval-weighted
        # quadratic form of the coefficient vector
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 3))
        d = int(rng.integers(1, 4))
        a, b = -0.5, 2.0
        mu = gen_random_measure(2000 + seed, n, int(rng.integers(1, 5)), a, b)
        seq = moments_of(mu, 2 * d)
        space = build_gram_space(seq)
        g_dom = space.vectors[:, : d * n]
        g_shift = space.vectors[:, n : n + d * n]
        gtilde = build_gamma_tilde(seq, d).matrix
        scale = max(1.0, np.linalg.norm(space.gram, 2))
        for _ in range(10):
            alpha = rng.standard_normal(d * n) + 1j * rng.standard_normal(d * n)
            u = g_dom @ alpha
            bu = (2.0 / (b - a)) * (g_shift @ alpha) - ((a + b) / (b - a)) * u
            lhs = np.vdot(u, u).real - np.vdot(bu, bu).real
            # quadratic form sum_{k,j} alpha_k conj(alpha_j) M[k, j] in the
            # package's inner-product convention
            rhs = (4.0 / (b - a) ** 2) * np.real(
                alpha @ (gtilde @ alpha.conj())
            )
            assert abs(lhs - rhs) <= 1e-9 * scale * max(1.0, np.abs(alpha).max() ** 2)
            assert lhs >= -1e-9 * scale * max(1.0, np.abs(alpha).max() ** 2)

    @pytest.mark.parametrize("seed", range(6))
    def test_hermitian_on_domain(self, seed):
        rng = np.random.default_rng(seed)
        mu = gen_random_measure(3000 + seed, 2, 3, -1.0, 1.0)
        seq = moments_of(mu, 4)
        space = build_gram_space(seq)
        model = build_operators(space)
        # <B u, v> = <u, B v> for domain vectors u, v
        p, q = model.dom_dim, model.def_dim
        b_on_dom = np.vstack([model.P, model.Q])
        u_all = np.hstack([model.dom_basis, model.def_basis])
        for _ in range(5):
            cu = rng.standard_normal(p) + 1j * rng.standard_normal(p)
            cv = rng.standard_normal(p) + 1j * rng.standard_normal(p)
            bu = u_all @ (b_on_dom @ cu)
            bv = u_all @ (b_on_dom @ cv)
            u = model.dom_basis @ cu
            v = model.dom_basis @ cv
            assert abs(np.vdot(v, bu) - np.vdot(bv, u)) <= 1e-9 * max(
                1.0, np.abs(cu).max() * np.abs(cv).max()
            )

    @pytest.mark.parametrize("seed", range(6))
    def test_shift_power_identity(self, seed):
        # applying the shift r times to x_j lands on x_{rN+j}
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 3))
        d = int(rng.integers(1, 4))
        mu = gen_random_measure(4000 + seed, n, 4, -1.0, 1.5)
        seq = moments_of(mu, 2 * d)
        space = build_gram_space(seq)
        g_dom = space.vectors[:, : d * n]
        g_shift = space.vectors[:, n : n + d * n]
        pinv_dom = np.linalg.pinv(g_dom, rcond=1e-10)
        shift_apply = lambda vec: g_shift @ (pinv_dom @ vec)
        scale = max(1.0, np.abs(space.vectors).max())
        for j in range(n):
            vec = space.vectors[:, j]
            for r in range(1, d + 1):
                vec = shift_apply(vec)
                assert np.abs(vec - space.vectors[:, r * n + j]).max() <= 1e-8 * scale


def test_gram_entries_match_moment_blocks():
    # gram[r*N + j, t*N + m] = S_{r+t}[j, m] by construction
    mu = gen_random_measure(9, 2, 3, 0.0, 1.0)
    seq = moments_of(mu, 4)
    gamma = build_gamma(seq, 2).matrix
    space = build_gram_space(seq)
    assert np.array_equal(space.gram, gamma)
