"""Tests for the PD <-> bicone maps, Moebius matrices and isometries."""

import numpy as np
import pytest

from vpm_hilbert.domains import random_orthonormal, sample_vpm
from vpm_hilbert.exceptions import (
    BoundaryError,
    DimensionMismatchError,
    DomainError,
    NotOrthonormalError,
    NotPositiveDefiniteError,
)
from vpm_hilbert.metrics import hilbert_vpm
from vpm_hilbert.models import GaussianParams, SquareMat, SymMat, VpmPoint
from vpm_hilbert.transforms import (
    calvo_oller,
    complement,
    congruence,
    conjugate,
    covariance_from_vpm,
    d_iota,
    d_iota_inv,
    iota,
    iota_inv,
    mobius,
    mobius_eigenvalues,
    precision_from_vpm,
    t1_covariance,
    t2_precision,
    vpm_isometry,
)


def _sym(rng: np.random.Generator, n: int) -> SymMat:
    g = rng.standard_normal((n, n))
    return SymMat(entries=g + g.T)


class TestIota:
    """Tests for iota and its inverse."""

    def test_identity(self) -> None:
        """Test iota(I) = I/2."""
        np.testing.assert_allclose(iota(SymMat.identity(2)).entries, 0.5 * np.eye(2), atol=1e-15)

    def test_diagonal(self) -> None:
        """Test iota(diag(1, 3)) = diag(1/2, 3/4)."""
        np.testing.assert_allclose(iota(SymMat.diag([1.0, 3.0])).entries, np.diag([0.5, 0.75]), atol=1e-15)

    def test_inverse_of_half_identity(self) -> None:
        """Test iota^{-1}(I/2) = I."""
        np.testing.assert_allclose(iota_inv(SymMat.identity(3) * 0.5).entries, np.eye(3), atol=1e-14)

    def test_round_trips(self) -> None:
        """Test iota(iota^{-1}(A)) = A and iota^{-1}(iota(X)) = X."""
        for seed in range(20):
            a = sample_vpm(3, seed, 0.1)
            x = iota_inv(a)
            np.testing.assert_allclose(iota(x).entries, a.entries, atol=1e-10)
            np.testing.assert_allclose(iota_inv(iota(x)).entries, x.entries, atol=1e-10)

    def test_complement_pullback(self) -> None:
        """Test iota(X^{-1}) = I - iota(X)."""
        x = iota_inv(sample_vpm(3, 4, 0.1))
        x_inv = SymMat(entries=np.linalg.inv(x.entries))
        np.testing.assert_allclose(iota(x_inv).entries, complement(iota(x).mat).entries, atol=1e-10)

    def test_conjugation_equivariance(self, rng: np.random.Generator) -> None:
        """Test iota(U^T X U) = U^T iota(X) U."""
        x = iota_inv(sample_vpm(3, 5, 0.1))
        u = SquareMat(entries=random_orthonormal(3, rng))
        lhs = iota(conjugate(x, u)).entries
        rhs = conjugate(iota(x).mat, u).entries
        np.testing.assert_allclose(lhs, rhs, atol=1e-10)

    def test_rejects_non_pd(self) -> None:
        """Test iota needs a positive-definite argument."""
        with pytest.raises(NotPositiveDefiniteError):
            iota(SymMat.diag([1.0, -0.5]))

    def test_extreme_spectrum(self) -> None:
        """Test PD input with eigenvalues 1e-13 and 1e13 maps inside the bicone."""
        small = iota(SymMat.diag([1e-13, 1.0]))
        assert 0.0 < small.margin <= 1e-13
        np.testing.assert_allclose(np.diag(small.entries), [1e-13 / (1.0 + 1e-13), 0.5], rtol=1e-12)
        large = iota(SymMat.diag([1.0, 1e13]))
        assert 0.0 < large.margin < 1e-12
        assert float(large.entries[1, 1]) < 1.0

    def test_extreme_spectrum_distance_needs_margin(self) -> None:
        """Test the distance floor still rejects images that are too close to the boundary."""
        a = iota(SymMat.diag([1e-13, 1.0]))
        b = iota(SymMat.identity(2))
        with pytest.raises(BoundaryError, match="margin"):
            hilbert_vpm(a, b)

    def test_image_on_boundary_rejected(self) -> None:
        """Test an image that rounds onto the boundary raises BoundaryError."""
        with pytest.raises(BoundaryError):
            iota(SymMat.diag([1.0, 1e17]))

    def test_inverse_rejects_boundary(self) -> None:
        """Test iota^{-1} needs a point strictly inside the bicone."""
        with pytest.raises(BoundaryError):
            iota_inv(SymMat.diag([0.5, 1.0]))


class TestDifferentials:
    """Tests for d_iota and d_iota_inv."""

    def test_at_identity(self) -> None:
        """Test d_iota(I)[H] = H/4."""
        h = SymMat(entries=[[1.0, 2.0], [2.0, -3.0]])
        np.testing.assert_allclose(d_iota(SymMat.identity(2), h).entries, h.entries / 4.0, atol=1e-15)

    def test_linear_in_direction(self, rng: np.random.Generator) -> None:
        """Test d_iota(X)[aH + bK] = a d_iota(X)[H] + b d_iota(X)[K]."""
        x = iota_inv(sample_vpm(3, 6, 0.1))
        h, k = _sym(rng, 3), _sym(rng, 3)
        combined = d_iota(x, h * 2.0 - k * 0.5).entries
        expected = 2.0 * d_iota(x, h).entries - 0.5 * d_iota(x, k).entries
        np.testing.assert_allclose(combined, expected, atol=1e-12)

    def test_central_differences(self, rng: np.random.Generator) -> None:
        """Test both differentials against central differences on unit-norm directions."""
        step = 1e-6
        for seed in range(5):
            a = sample_vpm(3, seed, 0.1)
            x = iota_inv(a)
            h = _sym(rng, 3)
            h = h / float(np.max(np.abs(np.linalg.eigvalsh(h.entries))))
            fd = (iota(x + h * step).entries - iota(x - h * step).entries) / (2 * step)
            np.testing.assert_allclose(d_iota(x, h).entries, fd, atol=1e-5)
            fd_inv = (iota_inv(a.mat + h * step).entries - iota_inv(a.mat - h * step).entries) / (2 * step)
            np.testing.assert_allclose(d_iota_inv(a, h).entries, fd_inv, atol=1e-5)

    def test_chain_rule(self, rng: np.random.Generator) -> None:
        """Test d_iota_inv(iota(X)) inverts d_iota(X)."""
        x = iota_inv(sample_vpm(2, 7, 0.1))
        h = _sym(rng, 2)
        back = d_iota_inv(iota(x), d_iota(x, h))
        np.testing.assert_allclose(back.entries, h.entries, atol=1e-10)

    def test_dimension_mismatch(self) -> None:
        """Test a direction of the wrong size is rejected."""
        with pytest.raises(DimensionMismatchError):
            d_iota(SymMat.identity(2), SymMat.identity(3))


class TestParameterReadings:
    """Tests for the covariance and precision readings."""

    def test_duality(self) -> None:
        """Test T2(Sigma^{-1}) = T1(Sigma)."""
        sigma = SymMat(entries=[[2.0, 0.4], [0.4, 1.5]])
        p = SymMat(entries=np.linalg.inv(sigma.entries))
        np.testing.assert_allclose(t2_precision(p).entries, t1_covariance(sigma).entries, atol=1e-12)

    def test_reciprocity(self) -> None:
        """Test T1(Sigma) + T2(Sigma) = I."""
        sigma = SymMat(entries=[[2.0, 0.4], [0.4, 1.5]])
        total = t1_covariance(sigma).entries + t2_precision(sigma).entries
        np.testing.assert_allclose(total, np.eye(2), atol=1e-12)

    def test_recovery(self) -> None:
        """Test Sigma(L) and P(L) recover the parameters of T1 and T2."""
        sigma = SymMat.diag([0.5, 2.0, 4.0])
        np.testing.assert_allclose(covariance_from_vpm(t1_covariance(sigma)).entries, sigma.entries, atol=1e-12)
        np.testing.assert_allclose(precision_from_vpm(t2_precision(sigma)).entries, sigma.entries, atol=1e-12)

    def test_precision_examples(self) -> None:
        """Test T2(I) = I/2 and T2(diag(1, 3)) = diag(1/2, 1/4)."""
        np.testing.assert_allclose(t2_precision(SymMat.identity(2)).entries, 0.5 * np.eye(2), atol=1e-15)
        np.testing.assert_allclose(t2_precision(SymMat.diag([1.0, 3.0])).entries, np.diag([0.5, 0.25]), atol=1e-15)

    def test_precision_rejects_non_pd(self) -> None:
        """Test T2 needs a positive-definite precision."""
        with pytest.raises(NotPositiveDefiniteError, match="P must be positive definite"):
            t2_precision(SymMat.diag([0.0, 1.0]))

    def test_precision_extreme_spectrum(self) -> None:
        """Test precisions with eigenvalues 1e-13 and 1e13 map inside the bicone."""
        p = t2_precision(SymMat.diag([1e-13, 1e13]))
        assert 0.0 < p.margin < 1e-12
        lam = np.diag(p.entries)
        assert 0.0 < lam[1] < lam[0] < 1.0


class TestMobius:
    """Tests for the matrix Moebius transformation."""

    def test_equal_arguments(self) -> None:
        """Test Mob(A, A) = I."""
        a = sample_vpm(3, 8, 0.1).mat
        np.testing.assert_allclose(mobius(a, a).entries, np.eye(3), atol=1e-12)

    def test_zero_first_argument(self) -> None:
        """Test Mob(0, B) = I - B."""
        b = sample_vpm(2, 9, 0.1).mat
        zero = SymMat(entries=np.zeros((2, 2)))
        np.testing.assert_allclose(mobius(zero, b).entries, np.eye(2) - b.entries, atol=1e-14)

    def test_scalar_example(self) -> None:
        """Test Mob(1/2, 5/6) = 1/3."""
        out = mobius(SymMat(entries=0.5), SymMat(entries=5.0 / 6.0))
        assert float(out.entries[0, 0]) == pytest.approx(1.0 / 3.0)

    def test_nonsymmetric_result(self) -> None:
        """Test the product is returned without symmetrization."""
        a = SymMat(entries=[[0.5, 0.2], [0.2, 0.3]])
        b = SymMat.diag([0.1, 0.6])
        expected = np.linalg.solve(np.eye(2) - a.entries, np.eye(2) - b.entries)
        np.testing.assert_allclose(mobius(a, b).entries, expected, atol=1e-14)

    def test_singular_complement(self) -> None:
        """Test A with eigenvalue 1 is rejected."""
        with pytest.raises(DomainError):
            mobius(SymMat.identity(2), SymMat.identity(2) * 0.5)

    def test_eigenvalues_match_product(self, vpm_pair: tuple[VpmPoint, VpmPoint]) -> None:
        """Test the pencil spectrum equals the spectrum of the explicit product."""
        a, b = vpm_pair
        direct = np.sort(np.linalg.eigvals(mobius(a.mat, b.mat).entries).real)
        np.testing.assert_allclose(mobius_eigenvalues(a.mat, b.mat), direct, atol=1e-10)


class TestIsometries:
    """Tests for complement, conjugation, congruence and vpm_isometry."""

    def test_complement(self) -> None:
        """Test I - X."""
        np.testing.assert_allclose(complement(SymMat.diag([0.2, 0.7])).entries, np.diag([0.8, 0.3]))

    def test_complement_fixed_point_and_involution(self) -> None:
        """Test I/2 is fixed and applying the complement twice is the identity."""
        half = SymMat.identity(3) * 0.5
        assert complement(half) == half
        x = sample_vpm(3, 10, 0.1).mat
        np.testing.assert_allclose(complement(complement(x)).entries, x.entries, atol=1e-15)

    def test_conjugate_requires_orthonormal(self) -> None:
        """Test a non-orthonormal U is rejected."""
        with pytest.raises(NotOrthonormalError):
            conjugate(SymMat.identity(2) * 0.5, SquareMat(entries=2.0 * np.eye(2)))

    def test_congruence_requires_invertible(self) -> None:
        """Test a singular M is rejected."""
        with pytest.raises(DomainError, match="invertible"):
            congruence(SymMat.identity(2) * 0.5, SquareMat(entries=[[1.0, 1.0], [1.0, 1.0]]))

    def test_vpm_isometry_preserves_distance(
        self, vpm_pair: tuple[VpmPoint, VpmPoint], rng: np.random.Generator
    ) -> None:
        """Test every composition of complement and conjugation preserves d."""
        a, b = vpm_pair
        d = hilbert_vpm(a, b).value
        u = SquareMat(entries=random_orthonormal(3, rng))
        for flip in (False, True):
            for ortho in (None, u):
                moved = hilbert_vpm(vpm_isometry(a, ortho, flip), vpm_isometry(b, ortho, flip)).value
                assert moved == pytest.approx(d, abs=1e-10)

    def test_vpm_isometry_flip(self) -> None:
        """Test flip maps X to I - X."""
        p = VpmPoint(mat=SymMat.diag([0.2, 0.6]), margin=0.1)
        np.testing.assert_allclose(vpm_isometry(p, flip=True).entries, np.diag([0.8, 0.4]), atol=1e-15)


class TestCalvoOller:
    """Tests for the Gaussian embedding."""

    def test_scalar_gaussian(self) -> None:
        """Test N(1, 2) embeds as [[3, 1], [1, 1]]."""
        g = GaussianParams(mean=[1.0], covariance=SymMat(entries=2.0))
        np.testing.assert_allclose(calvo_oller(g).entries, [[3.0, 1.0], [1.0, 1.0]])

    def test_zero_mean(self) -> None:
        """Test a centred Gaussian embeds block-diagonally."""
        sigma = SymMat(entries=[[2.0, 0.3], [0.3, 1.0]])
        g = GaussianParams(mean=[0.0, 0.0], covariance=sigma)
        expected = np.eye(3)
        expected[:2, :2] = sigma.entries
        np.testing.assert_allclose(calvo_oller(g).entries, expected)

    def test_embedding_is_pd(self) -> None:
        """Test the embedded matrix is positive definite with determinant det(Sigma)."""
        sigma = SymMat(entries=[[2.0, 0.3], [0.3, 1.0]])
        g = GaussianParams(mean=[3.0, -1.0], covariance=sigma)
        out = calvo_oller(g).entries
        assert np.all(np.linalg.eigvalsh(out) > 0)
        assert np.linalg.det(out) == pytest.approx(np.linalg.det(sigma.entries))
