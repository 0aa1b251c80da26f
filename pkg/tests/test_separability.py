"""Tests for criteria, verdicts, line searches, and the finer relation."""

import numpy as np
import pytest

from conftest import random_density, random_unitary, rng
from sepstruct.errors import (
    IncomparableError,
    InputNotEntangledError,
    OracleUndecidedError,
)
from sepstruct.linalg import partial_transpose, tensor_product
from sepstruct.separability import (
    Outcome,
    Ternary,
    ccnr_crossings,
    ccnr_norm,
    common_witness_exists,
    finer_decomposition,
    min_separable_weight,
    ppt_min_eig,
    product_basis_certificate,
    verdict,
)
from sepstruct.states import (
    BipartiteDims,
    DensityMatrix,
    FamilyLine,
    PureState,
    bell_basis,
    horodecki_family,
    horodecki_sigma,
    horodecki_sigma_plus,
    max_entangled,
    max_mixed,
    varrho_q_plus,
    werner,
)


def test_ppt_min_eig_werner_formula():
    for p in (0.0, 0.2, 1 / 3, 0.5, 0.9, 1.0):
        assert ppt_min_eig(werner(p)) == pytest.approx((1 - 3 * p) / 4, abs=1e-12)


def test_ppt_min_eig_bell():
    assert ppt_min_eig(max_entangled(2).to_density()) == pytest.approx(-0.5, abs=1e-12)


def test_ppt_min_eig_diagonal_separable():
    rho = DensityMatrix(np.diag([0.4, 0.3, 0.2, 0.1]), BipartiteDims(2, 2))
    assert ppt_min_eig(rho) >= 0.0


def _ccnr_reference(rho):
    # independent realignment construction + LAPACK svd
    d_a, d_b = rho.dims.pair
    m = rho.matrix
    out = np.zeros((d_a * d_a, d_b * d_b), dtype=complex)
    for i in range(d_a):
        for j in range(d_a):
            for k in range(d_b):
                for ell in range(d_b):
                    out[i * d_a + j, k * d_b + ell] = m[i * d_b + k, j * d_b + ell]
    return float(np.linalg.svd(out, compute_uv=False).sum())


def test_ccnr_norm_at_first_boundary_root():
    rho = horodecki_family(3.0, 2.0 / 7.0)
    assert ccnr_norm(rho) == pytest.approx(1.0, abs=1e-6)
    assert ccnr_norm(rho) == pytest.approx(_ccnr_reference(rho), abs=1e-9)


def test_ccnr_norm_at_second_boundary_root_exceeds_one():
    # the second algebraic boundary root is not on the unit level set
    rho = horodecki_family(3.0, 3.0 / 8.0)
    assert ccnr_norm(rho) == pytest.approx(7.0 / 6.0, abs=1e-9)
    assert ccnr_norm(rho) == pytest.approx(_ccnr_reference(rho), abs=1e-9)


def test_ccnr_norm_white_noise():
    assert ccnr_norm(max_mixed((2, 2))) == pytest.approx(0.5, abs=1e-10)


def test_verdict_werner_entangled():
    v = verdict(werner(0.5))
    assert v.outcome is Outcome.ENTANGLED
    assert v.certificate == "ppt_violation"


def test_verdict_werner_separable():
    v = verdict(werner(0.2))
    assert v.outcome is Outcome.SEPARABLE
    assert v.certificate == "exact_low_dim"


def test_verdict_boundary_state_counts_separable():
    assert verdict(werner(1 / 3)).outcome is Outcome.SEPARABLE


def test_verdict_bound_entangled_via_ccnr():
    rho = horodecki_sigma(3.5)
    assert ppt_min_eig(rho) >= -1e-9
    v = verdict(rho)
    assert v.outcome is Outcome.ENTANGLED
    assert v.certificate == "ccnr_violation"
    assert v.value > 1.0


def test_verdict_product_basis_in_nine_dims():
    v = verdict(varrho_q_plus(0.5))
    assert v.outcome is Outcome.SEPARABLE
    assert v.certificate == "product_basis_diagonal"


def test_verdict_undecided_on_boundary_family_member():
    # separable per its construction, but no criterion certifies it
    assert verdict(horodecki_sigma(3.0)).outcome is Outcome.UNDECIDED


def test_product_basis_certificate_white_noise():
    cert = product_basis_certificate(max_mixed((2, 2)))
    assert cert is not None and len(cert) == 4
    assert all(w == pytest.approx(0.25) for w, _ in cert)


def test_product_basis_certificate_flat_five_level_state():
    m = np.zeros((9, 9), dtype=complex)
    for idx in (1, 2, 3, 5, 7):
        m[idx, idx] = 0.2
    cert = product_basis_certificate(DensityMatrix(m, BipartiteDims(3, 3)))
    assert cert is not None and len(cert) == 5


def test_product_basis_certificate_none_for_bell():
    assert product_basis_certificate(max_entangled(2).to_density()) is None


def test_product_basis_certificate_reconstructs():
    rho = varrho_q_plus(0.25)
    cert = product_basis_certificate(rho)
    recon = sum(w * np.outer(v, v.conj()) for w, v in cert)
    assert np.abs(recon - rho.matrix).max() < 1e-9
    for _, v in cert:
        s = np.linalg.svd(v.reshape(3, 3), compute_uv=False)
        assert np.sum(s > 1e-9) == 1


def test_min_separable_weight_bell_pair_collapses():
    _, _, psi2, psi3 = bell_basis()
    line = FamilyLine(pe=psi2.to_density(), ps=psi3.to_density())
    lo, hi = min_separable_weight(line, criterion="ppt")
    assert lo == pytest.approx(0.5, abs=1e-8)
    assert hi == pytest.approx(0.5, abs=1e-8)


def test_min_separable_weight_werner_line():
    line = FamilyLine(pe=max_entangled(2).to_density(), ps=max_mixed((2, 2)))
    lo, hi = min_separable_weight(line, criterion="exact")
    assert lo == 0.0
    assert hi == pytest.approx(1 / 3, abs=1e-9)


def test_min_separable_weight_sigma_plus_line_only_endpoint():
    line = FamilyLine(pe=max_entangled(3).to_density(), ps=horodecki_sigma_plus())
    lo, hi = min_separable_weight(line, criterion="ppt")
    assert lo == pytest.approx(0.0, abs=1e-9)
    assert hi == pytest.approx(0.0, abs=1e-9)


def test_min_separable_weight_exact_undecided_above_six():
    line = FamilyLine(pe=max_entangled(3).to_density(), ps=max_mixed((3, 3)))
    with pytest.raises(OracleUndecidedError):
        min_separable_weight(line, criterion="exact")


def test_min_separable_weight_empty_for_opposite_bells():
    psi = max_entangled(2).to_density()
    # line from bell projector to itself never leaves the entangled set
    line = FamilyLine(pe=psi, ps=psi)
    assert min_separable_weight(line, criterion="ppt") is None


def test_ccnr_crossings_werner_line():
    line = FamilyLine(pe=max_entangled(2).to_density(), ps=max_mixed((2, 2)))
    crossings = ccnr_crossings(line, grid=256)
    assert len(crossings) == 1
    assert crossings[0] == pytest.approx(1 / 3, abs=1e-9)


def test_common_witness_bell_pair_none():
    _, _, psi2, psi3 = bell_basis()
    assert common_witness_exists([psi2, psi3]) is Ternary.NO


def test_common_witness_singleton():
    assert common_witness_exists([max_entangled(2)]) is Ternary.YES


def test_common_witness_rejects_separable_input():
    with pytest.raises(InputNotEntangledError):
        common_witness_exists([max_entangled(2), max_mixed((2, 2))])


def _brute_force_pair_scan(a, b, k=400):
    dims = a.dims.pair
    for i in range(k + 1):
        t = i / k
        mixed = t * a.matrix + (1 - t) * b.matrix
        if np.linalg.eigvalsh(partial_transpose(mixed, dims)).min() >= -1e-9:
            return Ternary.NO  # some mixture separable (2x2: ppt decisive)
    return Ternary.YES


def test_common_witness_rotated_bell_matches_brute_force():
    gen = rng(21)
    bell = max_entangled(2)
    for _ in range(5):
        u = tensor_product(random_unitary(2, gen), random_unitary(2, gen))
        rotated = PureState(u @ bell.amplitudes, BipartiteDims(2, 2))
        expected = _brute_force_pair_scan(bell.to_density(), rotated.to_density())
        assert common_witness_exists([bell, rotated]) is expected


def test_common_witness_three_bells():
    _, _, b2, b3 = bell_basis()
    # b2 and b3 mix to a separable state, so no witness covers all three
    psi_y = PureState((b2.amplitudes + 1j * b3.amplitudes) / np.sqrt(2), BipartiteDims(2, 2))
    assert common_witness_exists([b2, b3, psi_y]) is Ternary.NO


def test_finer_decomposition_werner_vs_noise():
    cert = finer_decomposition(werner(0.2), max_mixed((2, 2)))
    assert cert.epsilon == pytest.approx(0.2, abs=1e-9)
    assert np.abs(cert.omega.matrix - max_entangled(2).projector()).max() < 1e-7
    assert cert.omega_verdict.outcome is Outcome.ENTANGLED


def test_finer_decomposition_identical_states():
    cert = finer_decomposition(werner(0.4), werner(0.4))
    assert cert.epsilon == 0.0
    assert cert.omega is None


def test_finer_decomposition_entangled_remainder():
    cert = finer_decomposition(werner(0.5), max_mixed((2, 2)))
    assert cert.epsilon == pytest.approx(0.5, abs=1e-9)
    assert cert.omega_verdict.outcome is Outcome.ENTANGLED


def test_finer_decomposition_reconstruction():
    gen = rng(22)
    for _ in range(10):
        base = DensityMatrix(random_density(4, gen), BipartiteDims(2, 2))
        tail = DensityMatrix(random_density(4, gen), BipartiteDims(2, 2))
        u = float(gen.uniform(0.1, 0.9))
        mixed = DensityMatrix(
            (1 - u) * base.matrix + u * tail.matrix, BipartiteDims(2, 2)
        )
        cert = finer_decomposition(mixed, base)
        recon = (1 - cert.epsilon) * base.matrix + cert.epsilon * cert.omega.matrix
        assert np.abs(recon - mixed.matrix).max() < 1e-9
        assert np.linalg.eigvalsh(cert.omega.matrix).min() > -1e-9


def test_finer_decomposition_incomparable():
    pure = max_entangled(2).to_density()
    with pytest.raises(IncomparableError):
        finer_decomposition(pure, max_mixed((2, 2)))


def test_verdict_decisive_in_low_dims():
    gen = rng(23)
    for dims in ((2, 2), (2, 3)):
        n = dims[0] * dims[1]
        for _ in range(25):
            rho = DensityMatrix(random_density(n, gen), BipartiteDims(*dims))
            assert verdict(rho).outcome is not Outcome.UNDECIDED
