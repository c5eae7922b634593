"""Channel primitive tests: unitary conjugation, nonselective measurement,
rank-1 families, and the family diagnostics."""

import numpy as np
import pytest

from zenolab.channels import (
    apply_projection_channel,
    apply_unitary_channel,
    rank1_family,
    validate_projection_family,
)
from zenolab.errors import ValidationError
from zenolab.linalg import seeded_cons, seeded_hermitian, unitary_exponential
from zenolab.states import DensityMatrix, von_neumann_entropy

from conftest import PAULI_X


def plus_state():
    return DensityMatrix.pure([1.0, 1.0])


class TestUnitaryChannel:
    def test_identity_fixes_state(self):
        rho = DensityMatrix.diagonal([0.7, 0.3])
        out = apply_unitary_channel(np.eye(2, dtype=complex), rho)
        np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-14)

    def test_spin_flip_swaps_populations(self):
        rho = DensityMatrix.diagonal([0.7, 0.3])
        out = apply_unitary_channel(-1j * PAULI_X, rho)
        np.testing.assert_allclose(out.matrix, np.diag([0.3, 0.7]), atol=1e-12)

    @pytest.mark.parametrize("seed", range(4))
    def test_spectrum_preserved(self, seed):
        dim = 6
        rho = DensityMatrix.seeded_random(dim, seed)
        u = unitary_exponential(seeded_hermitian(dim, seed + 7), 1.1)
        out = apply_unitary_channel(u, rho)
        before = np.linalg.eigvalsh(rho.matrix)
        after = np.linalg.eigvalsh(out.matrix)
        np.testing.assert_allclose(after, before, atol=1e-9)
        assert abs(von_neumann_entropy(out) - von_neumann_entropy(rho)) <= 1e-9

    def test_rejects_non_unitary(self):
        with pytest.raises(ValidationError, match="unitary"):
            apply_unitary_channel(np.diag([1.0, 0.5]).astype(complex), DensityMatrix.maximally_mixed(2))


class TestProjectionChannel:
    def test_eigenbasis_family_fixes_state(self):
        rho = DensityMatrix.seeded_random(4, 3)
        basis = np.linalg.eigh(rho.matrix)[1]
        out = apply_projection_channel(rank1_family(basis), rho)
        np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-12)

    def test_standard_family_decoheres_plus_state(self):
        out = apply_projection_channel(rank1_family(np.eye(2, dtype=complex)), plus_state())
        np.testing.assert_allclose(out.matrix, np.eye(2) / 2, atol=1e-12)

    def test_single_identity_projector(self):
        from zenolab.channels import ProjectionFamily

        rho = plus_state()
        fam = ProjectionFamily(projectors=(np.eye(2, dtype=complex),))
        out = apply_projection_channel(fam, rho)
        np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-14)

    @pytest.mark.parametrize("seed", range(4))
    def test_trace_positivity_entropy(self, seed):
        rng = np.random.default_rng(seed)
        dim = int(rng.integers(2, 9))
        rho = DensityMatrix.seeded_random(dim, seed)
        fam = rank1_family(seeded_cons(dim, seed + 31))
        out = apply_projection_channel(fam, rho)
        assert abs(np.trace(out.matrix).real - 1.0) <= 1e-10
        assert np.min(np.linalg.eigvalsh(out.matrix)) >= -1e-10
        assert von_neumann_entropy(out) >= von_neumann_entropy(rho) - 1e-9

    def test_block_diagonal_and_idempotent(self):
        rho = DensityMatrix.seeded_random(5, 9)
        fam = rank1_family(seeded_cons(5, 17))
        out = apply_projection_channel(fam, rho)
        for i, p in enumerate(fam.projectors):
            for j, q in enumerate(fam.projectors):
                if i != j:
                    assert np.max(np.abs(p @ out.matrix @ q)) <= 1e-9
        again = apply_projection_channel(fam, out)
        np.testing.assert_allclose(again.matrix, out.matrix, atol=1e-12)

    def test_explicit_projector_path_matches_fast_path(self):
        from zenolab.channels import ProjectionFamily

        rho = DensityMatrix.seeded_random(4, 21)
        basis = seeded_cons(4, 22)
        fast = apply_projection_channel(rank1_family(basis), rho)
        slow_family = ProjectionFamily(
            projectors=tuple(np.outer(basis[:, n], basis[:, n].conj()) for n in range(4))
        )
        slow = apply_projection_channel(slow_family, rho)
        np.testing.assert_allclose(fast.matrix, slow.matrix, atol=1e-12)


class TestRank1Family:
    def test_standard_basis(self):
        fam = rank1_family(np.eye(2, dtype=complex))
        np.testing.assert_allclose(fam.projectors[0], np.diag([1.0, 0.0]), atol=1e-14)
        np.testing.assert_allclose(fam.projectors[1], np.diag([0.0, 1.0]), atol=1e-14)

    def test_hadamard_pair_sums_to_identity(self):
        basis = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
        fam = rank1_family(basis)
        np.testing.assert_allclose(sum(fam.projectors), np.eye(2), atol=1e-10)

    def test_seeded_completeness(self):
        fam = rank1_family(seeded_cons(5, 4))
        np.testing.assert_allclose(sum(fam.projectors), np.eye(5), atol=1e-10)

    def test_rejects_non_orthonormal(self):
        with pytest.raises(ValidationError, match="orthonormal"):
            rank1_family(np.array([[1, 1], [0, 0]], dtype=complex))


class TestFamilyDiagnostics:
    def test_valid_family_has_tiny_residuals(self):
        fam = rank1_family(seeded_cons(4, 8))
        diag = validate_projection_family(fam.projectors)
        assert diag.ok
        assert max(diag.hermiticity, diag.idempotence, diag.orthogonality, diag.completeness) <= 1e-10

    def test_duplicated_projector_breaks_orthogonality(self):
        p = np.diag([1.0, 0.0]).astype(complex)
        diag = validate_projection_family([p, p])
        assert not diag.ok
        assert diag.orthogonality == pytest.approx(1.0, abs=1e-12)

    def test_missing_projector_breaks_completeness(self):
        fam = rank1_family(np.eye(3, dtype=complex))
        diag = validate_projection_family(fam.projectors[:-1])
        assert not diag.ok
        # Residual equals the norm of the dropped projector.
        assert diag.completeness == pytest.approx(1.0, abs=1e-12)

    def test_constructor_rejects_invalid_family(self):
        from zenolab.channels import ProjectionFamily

        p = np.diag([1.0, 0.0]).astype(complex)
        with pytest.raises(ValidationError, match="invalid projector family"):
            ProjectionFamily(projectors=(p, p))
