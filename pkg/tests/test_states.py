"""Tests for state types, canonical families, and serialization."""

import numpy as np
import pytest

from conftest import rng
from sepstruct.errors import (
    NotNormalizedError,
    OutOfRangeError,
    ParseError,
    ValidationError,
)
from sepstruct.states import (
    BipartiteDims,
    DensityMatrix,
    FamilyLine,
    PureState,
    bell_basis,
    horodecki_family,
    horodecki_omega,
    horodecki_sigma,
    horodecki_sigma_minus,
    horodecki_sigma_plus,
    load_state,
    max_entangled,
    max_mixed,
    product_ket,
    rho_m,
    save_state,
    varrho,
    varrho_family,
    varrho_q_plus,
    werner,
)


def varrho_printed(a):
    m = np.zeros((9, 9), dtype=complex)
    for i in (0, 1, 2, 3, 4, 5, 7):
        m[i, i] = a
    m[6, 6] = (1 + a) / 2
    m[8, 8] = (1 + a) / 2
    for i, j in ((0, 4), (0, 8), (4, 8)):
        m[i, j] = m[j, i] = a
    m[6, 8] = m[8, 6] = np.sqrt(1 - a * a) / 2
    return m / (8 * a + 1)


def test_bipartite_dims_rejects_trivial_factors():
    with pytest.raises(ValidationError):
        BipartiteDims(1, 4)


def test_density_matrix_validation_errors():
    with pytest.raises(ValidationError) as err:
        DensityMatrix(np.eye(4) / 2, BipartiteDims(2, 2))
    assert err.value.invariant == "trace"
    with pytest.raises(ValidationError) as err:
        DensityMatrix(np.diag([1.5, -0.5, 0.0, 0.0]), BipartiteDims(2, 2))
    assert err.value.invariant == "psd"
    bad = np.eye(4, dtype=complex) / 4
    bad[0, 1] = 0.2
    with pytest.raises(ValidationError) as err:
        DensityMatrix(bad, BipartiteDims(2, 2))
    assert err.value.invariant == "hermitian"
    with pytest.raises(ValidationError) as err:
        DensityMatrix(np.full((4, 4), np.nan), BipartiteDims(2, 2))
    assert err.value.invariant == "finite"


def test_pure_state_requires_unit_norm():
    with pytest.raises(NotNormalizedError):
        PureState(np.array([1.0, 1.0, 0.0, 0.0]), BipartiteDims(2, 2))


def test_werner_endpoints():
    assert np.allclose(werner(0.0).matrix, np.eye(4) / 4)
    assert np.allclose(werner(1.0).matrix, max_entangled(2).projector())
    with pytest.raises(OutOfRangeError):
        werner(1.2)


def test_werner_eigenvalues_midpoint():
    eigs = np.sort(np.linalg.eigvalsh(werner(0.5).matrix))[::-1]
    assert np.allclose(eigs, [0.625, 0.125, 0.125, 0.125])


def test_sigma_plus_minus_structure():
    sp = horodecki_sigma_plus().matrix
    sm = horodecki_sigma_minus().matrix
    for i, j in ((0, 1), (1, 2), (2, 0)):
        k = product_ket((3, 3), i, j)
        assert np.real(k.conj() @ sp @ k) == pytest.approx(1 / 3)
        assert np.real(k.conj() @ sm @ k) == pytest.approx(0.0)
    assert np.trace(sp) == pytest.approx(1.0)
    assert np.trace(sm) == pytest.approx(1.0)


def test_horodecki_sigma_weights():
    sigma = horodecki_sigma(2.5)
    bell3 = max_entangled(3).projector()
    expected = 2 / 7 * bell3 + 2.5 / 7 * horodecki_sigma_plus().matrix \
        + 2.5 / 7 * horodecki_sigma_minus().matrix
    assert np.abs(sigma.matrix - expected).max() < 1e-14
    assert np.trace(sigma.matrix) == pytest.approx(1.0, abs=1e-12)


def test_horodecki_family_matches_sigma_at_two_sevenths():
    for alpha in (0.0, 1.0, 2.5, 3.0, 4.0, 5.0):
        fam = horodecki_family(alpha, 2.0 / 7.0)
        sig = horodecki_sigma(alpha)
        assert np.abs(fam.matrix - sig.matrix).max() < 1e-12


def test_horodecki_family_endpoints():
    fam0 = horodecki_family(3.0, 0.0)
    assert np.count_nonzero(fam0.matrix - np.diag(np.diag(fam0.matrix))) == 0
    fam5 = horodecki_family(5.0, 0.3)
    expected = 0.3 * max_entangled(3).projector() + 0.7 * horodecki_sigma_plus().matrix
    assert np.abs(fam5.matrix - expected).max() < 1e-14
    assert np.abs(horodecki_omega(3.0).matrix - horodecki_family(3.0, 0.0).matrix).max() < 1e-14


def test_varrho_reconstructs_printed_matrix():
    for a in (0.25, 0.5, 1.0):
        assert np.abs(varrho(a).matrix - varrho_printed(a)).max() < 1e-12


def test_varrho_family_zero_weight_is_separable_endpoint():
    a = 0.5
    fam = varrho_family(a, 0.0)
    assert np.abs(fam.matrix - varrho_q_plus(a).matrix).max() == 0.0
    # diagonal except for the single product-projector block
    off = fam.matrix - np.diag(np.diag(fam.matrix))
    nz = {(i, j) for i, j in zip(*np.nonzero(off))}
    assert nz == {(6, 8), (8, 6)}


def test_varrho_family_traces():
    gen = rng(11)
    for _ in range(5):
        a = float(gen.uniform(0.05, 1.0))
        t = float(gen.uniform(0.0, 1.0))
        assert np.trace(varrho_family(a, t).matrix).real == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(OutOfRangeError):
        varrho_family(0.0, 0.5)


def test_rho_m_identity_with_eigen_form():
    dims = (2, 2)
    phi_e = (product_ket(dims, 0, 0) + product_ket(dims, 1, 0) + 2 * product_ket(dims, 1, 1)) / np.sqrt(6)
    phi_p = (-product_ket(dims, 0, 0) + product_ket(dims, 1, 0)) / np.sqrt(2)
    alt = 0.75 * np.outer(phi_e, phi_e.conj()) + 0.25 * np.outer(phi_p, phi_p.conj())
    assert np.abs(rho_m().matrix - alt).max() < 1e-12


def test_bell_basis_order():
    b0, b1, b2, b3 = bell_basis()
    assert np.allclose(b0.amplitudes, [0, 0, 1, 0])
    assert np.allclose(b1.amplitudes, [0, 1, 0, 0])
    s2 = 1 / np.sqrt(2)
    assert np.allclose(b2.amplitudes, [s2, 0, 0, -s2])
    assert np.allclose(b3.amplitudes, [s2, 0, 0, s2])


def test_max_entangled_and_mixed():
    assert np.allclose(max_entangled(2).amplitudes, [1, 0, 0, 1] / np.sqrt(2))
    psi3 = max_entangled(3).amplitudes
    assert psi3[0] == pytest.approx(1 / np.sqrt(3))
    assert psi3[4] == pytest.approx(1 / np.sqrt(3))
    assert psi3[8] == pytest.approx(1 / np.sqrt(3))
    assert np.allclose(max_mixed((2, 2)).matrix, np.eye(4) / 4)


def test_family_line_mixture_validity():
    line = FamilyLine(pe=max_entangled(2).to_density(), ps=max_mixed((2, 2)))
    for t in (0.0, 0.3, 1.0):
        state = line.state_at(t)
        assert np.trace(state.matrix).real == pytest.approx(1.0)
    with pytest.raises(OutOfRangeError):
        line.state_at(1.5)


def test_save_load_round_trip():
    rho = werner(0.3)
    again = load_state(save_state(rho))
    assert np.array_equal(again.matrix, rho.matrix)
    assert again.dims.pair == (2, 2)


def test_load_state_rejects_bad_trace():
    rho = werner(0.3)
    text = save_state(rho).replace('"matrix"', '"matrix"')
    import json

    payload = json.loads(text)
    payload["matrix"][0][0][0] = payload["matrix"][0][0][0] - 0.1
    with pytest.raises(ValidationError) as err:
        load_state(json.dumps(payload))
    assert err.value.invariant in ("trace", "psd", "hermitian")


def test_load_state_accepts_rectangular_dims():
    m = np.eye(6, dtype=complex) / 6
    entries = [[[float(x.real), float(x.imag)] for x in row] for row in m]
    import json

    text = json.dumps({"dims": [2, 3], "matrix": entries})
    rho = load_state(text)
    assert rho.dims.pair == (2, 3)


def test_load_state_parse_errors():
    with pytest.raises(ParseError):
        load_state("not json")
    with pytest.raises(ParseError):
        load_state('{"dims": [2, 2]}')
    with pytest.raises(ParseError):
        load_state('{"dims": [2, 2], "matrix": [[1, 2], [3, 4]]}')


def test_swapped_relabels_subsystems():
    rho = rho_m()
    swapped = rho.swapped()
    k01 = product_ket((2, 2), 0, 1)
    k10 = product_ket((2, 2), 1, 0)
    assert np.real(k01.conj() @ swapped.matrix @ k01) == pytest.approx(
        float(np.real(k10.conj() @ rho.matrix @ k10))
    )
    assert np.abs(swapped.swapped().matrix - rho.matrix).max() == 0.0
