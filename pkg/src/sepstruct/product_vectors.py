"""Search for mutually orthogonal product vectors inside a subspace.

The search is greedy with deflation: once a product vector is found, the
working subspace is restricted to its orthogonal complement and the search
repeats.  Three mechanisms feed it, in fixed order:

  1. computational product kets already contained in the span;
  2. for two-qubit systems and 2-dimensional spans, the exact roots of the
     determinant polynomial det(x*M1 + y*M2) = 0 (2x2 reshapes of the span
     basis), which enumerates every product direction in the span;
  3. otherwise, alternating local-vector maximization of the overlap with
     the span from a fixed number of seeded random starts.

All choices (root order, candidate order, random seed) are deterministic.
"""

from __future__ import annotations

import numpy as np

from .linalg import fix_phase, schmidt_rank_of_vector

SEARCH_SEED = 0xB5A
OVERLAP_TOL = 1e-9
MAX_STARTS = 32


def _orthonormalize(cols: np.ndarray, keep_tol: float = 1e-9) -> np.ndarray:
    """Gram-Schmidt with deterministic phases; drops near-null columns."""
    out = []
    for j in range(cols.shape[1]):
        v = cols[:, j].astype(complex)
        for u in out:
            v = v - u * np.vdot(u, v)
        nrm = np.linalg.norm(v)
        if nrm > keep_tol:
            out.append(fix_phase(v / nrm))
    if not out:
        return np.zeros((cols.shape[0], 0), dtype=complex)
    return np.column_stack(out)


def _deflate(span: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the span intersected with the complement of v."""
    reduced = span - np.outer(v, v.conj() @ span)
    return _orthonormalize(reduced)


def _canonical_key(v: np.ndarray) -> tuple:
    w = fix_phase(v)
    return tuple((round(float(x.real), 9), round(float(x.imag), 9)) for x in w)


def _product_roots_two_qubit(v1: np.ndarray, v2: np.ndarray, tol: float = 1e-12) -> list[np.ndarray]:
    """Distinct product directions in span{v1, v2} for a 2x2 system.

    det(x*M1 + y*M2) = c x^2 + b xy + a y^2; each projective root (x:y)
    yields one product direction.  A vanishing polynomial means every
    vector in the span is product.
    """
    m1 = v1.reshape(2, 2)
    m2 = v2.reshape(2, 2)
    a = m2[0, 0] * m2[1, 1] - m2[0, 1] * m2[1, 0]
    c = m1[0, 0] * m1[1, 1] - m1[0, 1] * m1[1, 0]
    b = (
        m1[0, 0] * m2[1, 1]
        + m2[0, 0] * m1[1, 1]
        - m1[0, 1] * m2[1, 0]
        - m2[0, 1] * m1[1, 0]
    )
    scale = max(abs(a), abs(b), abs(c))
    if scale < tol:
        return [fix_phase(v1), fix_phase(v2)]
    roots: list[np.ndarray] = []
    if abs(c) < tol * scale:
        # (x:y) = (1:0) is a root
        roots.append(v1)
        if abs(b) >= tol * scale:
            roots.append(-a * v1 + b * v2)
    else:
        disc = np.sqrt(b * b - 4.0 * a * c + 0j)
        for r in ((-b + disc) / (2.0 * c), (-b - disc) / (2.0 * c)):
            roots.append(r * v1 + v2)
    out: list[np.ndarray] = []
    for w in roots:
        nrm = np.linalg.norm(w)
        if nrm < 1e-12:
            continue
        w = fix_phase(w / nrm)
        if schmidt_rank_of_vector(w, (2, 2)) != 1:
            continue
        if all(abs(np.vdot(w, u)) < 1.0 - 1e-9 for u in out):
            out.append(w)
    out.sort(key=_canonical_key)
    return out


def _alternating_maximization(
    span: np.ndarray, dims: tuple[int, int], rng: np.random.Generator
) -> np.ndarray | None:
    """Best product vector inside the span from seeded random starts, or None."""
    d_a, d_b = dims
    p4 = (span @ span.conj().T).reshape(d_a, d_b, d_a, d_b)
    candidates: list[np.ndarray] = []
    for _ in range(MAX_STARTS):
        b = rng.normal(size=d_b) + 1j * rng.normal(size=d_b)
        b /= np.linalg.norm(b)
        q_prev = -1.0
        for _ in range(200):
            a_op = np.einsum("ijkl,j,l->ik", p4, b.conj(), b)
            w, v = np.linalg.eigh((a_op + a_op.conj().T) / 2)
            a = v[:, -1]
            b_op = np.einsum("ijkl,i,k->jl", p4, a.conj(), a)
            w, v = np.linalg.eigh((b_op + b_op.conj().T) / 2)
            b = v[:, -1]
            q = float(w[-1].real)
            if q - q_prev < 1e-13:
                break
            q_prev = q
        if q >= 1.0 - OVERLAP_TOL:
            candidates.append(fix_phase(np.kron(a, b)))
    if not candidates:
        return None
    deduped: list[np.ndarray] = []
    for w in candidates:
        if all(abs(np.vdot(w, u)) < 1.0 - 1e-9 for u in deduped):
            deduped.append(w)
    deduped.sort(key=_canonical_key)
    return deduped[0]


def product_vectors_in_subspace(
    basis: np.ndarray, dims: tuple[int, int], seed: int = SEARCH_SEED
) -> list[np.ndarray]:
    """Mutually orthogonal product vectors in the span of the given columns.

    Returns unit vectors of Schmidt rank one, pairwise orthogonal, each lying
    in the span within 1e-9.  The list is maximal for the greedy/deflation
    strategy described in the module docstring, not provably maximum.
    """
    d_a, d_b = int(dims[0]), int(dims[1])
    span = _orthonormalize(np.asarray(basis, dtype=complex).reshape(d_a * d_b, -1))
    rng = np.random.default_rng(seed)
    found: list[np.ndarray] = []
    while span.shape[1] > 0:
        if span.shape[1] == 1:
            v = fix_phase(span[:, 0])
            if schmidt_rank_of_vector(v, (d_a, d_b)) == 1:
                found.append(v)
            break
        # computational kets inside the span
        grams = span.conj().T  # rows: <u_k| e_j> as columns of span†
        weights = np.abs(grams) ** 2  # |<u_k|e_j>|^2
        in_span = weights.sum(axis=0)  # |P e_j|^2 per computational index j
        hit = np.flatnonzero(in_span >= 1.0 - OVERLAP_TOL)
        if hit.size:
            j = int(hit[0])
            v = np.zeros(d_a * d_b, dtype=complex)
            v[j] = 1.0
            found.append(v)
            span = _deflate(span, v)
            continue
        if (d_a, d_b) == (2, 2) and span.shape[1] == 2:
            roots = _product_roots_two_qubit(span[:, 0], span[:, 1])
            if not roots:
                break
            v = roots[0]
            found.append(v)
            span = _deflate(span, v)
            continue
        v = _alternating_maximization(span, (d_a, d_b), rng)
        if v is None:
            break
        found.append(v)
        span = _deflate(span, v)
    return found
