"""Decomposition of a state into purely entangled and purely separable parts.

The pipeline: split the eigen-ensemble into product and entangled
eigenvectors (choosing, inside each degenerate eigenspace, a basis with as
many mutually orthogonal product vectors as the subspace search finds);
group entangled eigenvectors that admit no common witness; consume each
group pairwise at the minimal separable mixing weight; aggregate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OracleUndecidedError, OutOfRangeError
from .linalg import fix_phase, group_eigenspaces, hermitian_eig, schmidt_rank_of_vector
from .product_vectors import _orthonormalize, product_vectors_in_subspace
from .separability import (
    Outcome,
    Ternary,
    Verdict,
    common_witness_exists,
    min_separable_weight,
    product_basis_certificate,
    verdict,
)
from .states import BipartiteDims, DensityMatrix, FamilyLine, PureState

SUPPORT_TOL = 1e-12

SEPARABLE_TAG = "separable"
ENTANGLED_TAG = "entangled"


@dataclass(frozen=True)
class EigenGroup:
    """One (possibly degenerate) eigenspace with its chosen tagged basis."""

    eigenvalue: float
    vectors: np.ndarray  # columns
    tags: tuple[str, ...]


@dataclass(frozen=True)
class EigenEnsemble:
    dims: BipartiteDims
    groups: tuple[EigenGroup, ...]

    def tagged_vectors(self) -> list[tuple[float, np.ndarray, str]]:
        out = []
        for g in self.groups:
            for k, tag in enumerate(g.tags):
                out.append((g.eigenvalue, g.vectors[:, k], tag))
        return out

    def reconstruct(self) -> np.ndarray:
        n = self.dims.total
        m = np.zeros((n, n), dtype=complex)
        for w, v, _ in self.tagged_vectors():
            m += w * np.outer(v, v.conj())
        return m


@dataclass(frozen=True)
class StructureDecomposition:
    """rho = separable_weight * separable_part + (1 - separable_weight) * entangled_part.

    ``separable_certificate`` lists weighted product vectors decomposing the
    separable part when such an orthogonal decomposition was found;
    ``entangled_note`` records the product-subtraction evidence for the
    entangled part.
    """

    separable_weight: float
    separable_part: DensityMatrix | None
    entangled_part: DensityMatrix | None
    separable_certificate: tuple[tuple[float, np.ndarray], ...] | None
    entangled_note: str
    entangled_verdict: Verdict | None


def eigen_split(rho: DensityMatrix) -> EigenEnsemble:
    """Tag an eigenbasis of rho by Schmidt rank, preferring product vectors.

    Within each degenerate eigenspace the basis is rebuilt: first the
    mutually orthogonal product vectors located by the subspace search, then
    an orthonormal completion of the remainder.  Eigenvalues at or below
    1e-12 (outside the support) are dropped.
    """
    dims = rho.dims
    es = hermitian_eig(rho.matrix, tol=max(rho.tol, 1e-9))
    groups = []
    for value, block in group_eigenspaces(es):
        if value <= SUPPORT_TOL:
            continue
        prods = product_vectors_in_subspace(block, dims.pair)
        chosen = list(prods)
        if len(chosen) < block.shape[1]:
            remainder = block.copy()
            for v in chosen:
                remainder = remainder - np.outer(v, v.conj() @ remainder)
            completion = _orthonormalize(remainder)
            chosen.extend(fix_phase(completion[:, k]) for k in range(completion.shape[1]))
        tags = tuple(
            SEPARABLE_TAG if schmidt_rank_of_vector(v, dims.pair) == 1 else ENTANGLED_TAG
            for v in chosen
        )
        groups.append(EigenGroup(value, np.column_stack(chosen), tags))
    return EigenEnsemble(dims=dims, groups=tuple(groups))


def consume_pair(
    w1: float,
    psi1: np.ndarray,
    w2: float,
    psi2: np.ndarray,
    t0: float,
) -> tuple[list[tuple[float, np.ndarray]], list[tuple[float, np.ndarray]]]:
    """Split w1 P1 + w2 P2 into purely entangled and purely separable parts.

    ``t0`` is the minimal weight for which t0 P1 + (1-t0) P2 is separable.
    Whichever vector is over-weighted relative to the ratio t0/(1-t0) keeps
    the excess as the purely entangled part; the boundary-ratio mixture is
    the purely separable part.  The two parts sum to the input exactly.
    """
    if not 0.0 < t0 < 1.0:
        raise OutOfRangeError(f"t0 = {t0!r} must lie strictly inside (0, 1)")
    ratio = t0 / (1.0 - t0)
    scale = max(abs(w1), abs(w2), 1e-30)
    if abs(w1 - ratio * w2) <= 1e-12 * scale:
        return [], [(w1, psi1), (w2, psi2)]
    if w1 > ratio * w2:
        pe = [(w1 - ratio * w2, psi1)]
        ps = [(ratio * w2, psi1), (w2, psi2)]
    else:
        inv = (1.0 - t0) / t0
        pe = [(w2 - inv * w1, psi2)]
        ps = [(w1, psi1), (inv * w1, psi2)]
    return pe, ps


def _pair_separable_onset(
    v1: np.ndarray, v2: np.ndarray, dims: BipartiteDims
) -> float | None:
    """Minimal t with t P1 + (1-t) P2 separable along the pure-pair line."""
    line = FamilyLine(
        pe=PureState(v1, dims).to_density(),
        ps=PureState(v2, dims).to_density(),
    )
    criterion = "exact" if dims.total <= 6 else "ppt"
    interval = min_separable_weight(line, criterion=criterion)
    if interval is None:
        return None
    return interval[0]


def _max_subtractable_product_weight(
    mat: np.ndarray, dims: BipartiteDims
) -> tuple[float, int]:
    """Largest product-projector weight subtractable from mat while staying psd.

    Scans the product vectors found in the support of mat; for a support
    vector v the maximal weight is 1/<v|pinv(mat)|v>.
    """
    es = hermitian_eig(mat / max(float(np.real(np.trace(mat))), 1e-300), tol=1e-8)
    support = es.eigenvectors[:, es.eigenvalues > 1e-10]
    if support.shape[1] == 0:
        return 0.0, 0
    candidates = product_vectors_in_subspace(support, dims.pair)
    if not candidates:
        return 0.0, 0
    pinv = np.linalg.pinv(mat, rcond=1e-10, hermitian=True)
    best = 0.0
    for v in candidates:
        denom = float(np.real(v.conj() @ pinv @ v))
        if denom > 1e-300:
            best = max(best, 1.0 / denom)
    return best, len(candidates)


def purely_decompose(rho: DensityMatrix) -> StructureDecomposition:
    """Unique split of rho into purely separable and purely entangled parts.

    Certified output needs every pairwise common-witness question along the
    way to be decidable; otherwise OracleUndecidedError is raised with the
    partial ensemble attached.
    """
    dims = rho.dims
    ensemble = eigen_split(rho)
    sep_terms: list[tuple[float, np.ndarray]] = []
    ent_terms: list[tuple[float, np.ndarray]] = []
    for w, v, tag in ensemble.tagged_vectors():
        (sep_terms if tag == SEPARABLE_TAG else ent_terms).append((w, v))

    pe_terms: list[tuple[float, np.ndarray]] = []
    if ent_terms:
        # adjacency: an edge means the two eigenvectors share no common witness
        n = len(ent_terms)
        edges = np.zeros((n, n), dtype=bool)
        for i in range(n):
            for j in range(i + 1, n):
                answer = common_witness_exists(
                    [PureState(ent_terms[i][1], dims), PureState(ent_terms[j][1], dims)]
                )
                if answer is Ternary.UNDECIDED:
                    raise OracleUndecidedError(
                        "common-witness question undecidable for an entangled eigenvector pair",
                        partial=ensemble,
                    )
                edges[i, j] = edges[j, i] = answer is Ternary.NO

        unassigned = set(range(n))
        components: list[list[int]] = []
        while unassigned:
            seed = min(unassigned)
            comp, frontier = {seed}, [seed]
            while frontier:
                k = frontier.pop()
                for m in range(n):
                    if m not in comp and edges[k, m]:
                        comp.add(m)
                        frontier.append(m)
            unassigned -= comp
            components.append(sorted(comp))

        for comp in components:
            items = [list(ent_terms[k]) + [k] for k in comp]
            while len(items) >= 2:
                linked = [
                    (i, j)
                    for i in range(len(items))
                    for j in range(i + 1, len(items))
                    if edges[items[i][2], items[j][2]]
                ]
                if not linked:
                    break
                linked.sort(key=lambda ij: -(items[ij[0]][0] + items[ij[1]][0]))
                i, j = linked[0]
                (w1, v1, k1), (w2, v2, k2) = items[i], items[j]
                t0 = _pair_separable_onset(v1, v2, dims)
                if t0 is None or not 0.0 < t0 < 1.0:
                    raise OracleUndecidedError(
                        "no separable point found on a no-common-witness pair line",
                        partial=ensemble,
                    )
                pe_part, ps_part = consume_pair(w1, v1, w2, v2, t0)
                sep_terms.extend(ps_part)
                for idx in sorted((i, j), reverse=True):
                    del items[idx]
                for w, v in pe_part:
                    origin = k1 if v is v1 else k2
                    items.append([w, v, origin])
            pe_terms.extend((w, v) for w, v, _ in items)

    n_tot = dims.total
    ps_mat = np.zeros((n_tot, n_tot), dtype=complex)
    for w, v in sep_terms:
        ps_mat += w * np.outer(v, v.conj())
    pe_mat = np.zeros((n_tot, n_tot), dtype=complex)
    for w, v in pe_terms:
        pe_mat += w * np.outer(v, v.conj())

    lam = float(np.real(np.trace(ps_mat)))
    lam = min(max(lam, 0.0), 1.0)

    separable_part = None
    separable_certificate = None
    if lam > SUPPORT_TOL:
        separable_part = DensityMatrix(ps_mat / lam, dims, tol=1e-8)
        separable_certificate = product_basis_certificate(separable_part)

    entangled_part = None
    entangled_verdict = None
    note = "no entangled part"
    if 1.0 - lam > SUPPORT_TOL:
        entangled_part = DensityMatrix(pe_mat / (1.0 - lam), dims, tol=1e-8)
        entangled_verdict = verdict(entangled_part)
        delta, n_cand = _max_subtractable_product_weight(pe_mat, dims)
        if n_cand == 0:
            note = "no product vector lies in the support of the entangled part"
        else:
            note = (
                f"max subtractable product-projector weight {delta:.3e} "
                f"over {n_cand} support product vectors"
            )
    return StructureDecomposition(
        separable_weight=lam,
        separable_part=separable_part,
        entangled_part=entangled_part,
        separable_certificate=separable_certificate,
        entangled_note=note,
        entangled_verdict=entangled_verdict,
    )
