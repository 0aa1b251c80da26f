"""Dense complex linear algebra for bipartite operators.

All functions operate on plain ``numpy`` arrays; bipartite dimensions are
passed as ``(d_a, d_b)`` pairs.  Outputs are deterministic for identical
inputs: eigenvalues and singular values are sorted descending, and every
returned vector carries a fixed phase convention (first component of
magnitude above 1e-12 made real positive).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NotHermitianError, NotNormalizedError

PHASE_TOL = 1e-12
SV_CLAMP = 1e-14


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two matrices."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def fix_phase(v: np.ndarray, tol: float = PHASE_TOL) -> np.ndarray:
    """Rotate a vector so its first component of magnitude > tol is real positive."""
    for x in v:
        if abs(x) > tol:
            return v * (x.conjugate() / abs(x))
    return v


@dataclass(frozen=True)
class EigenSystem:
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are sorted descending; column ``i`` of ``eigenvectors``
    pairs with ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T


def hermitian_eig(m: np.ndarray, tol: float = 1e-9) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix, deterministic ordering and phases.

    Raises NotHermitianError if ``max|m - m†| > tol``.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise NotHermitianError("matrix contains NaN or Inf entries")
    dev = np.abs(m - m.conj().T).max()
    if dev > tol:
        raise NotHermitianError(f"max |m - m†| = {dev:.3e} exceeds tol {tol:.1e}")
    w, v = np.linalg.eigh(m)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    for i in range(v.shape[1]):
        v[:, i] = fix_phase(v[:, i])
    w.setflags(write=False)
    v.setflags(write=False)
    return EigenSystem(eigenvalues=w, eigenvectors=v)


def group_eigenspaces(es: EigenSystem, rel_gap: float = 1e-9) -> list[tuple[float, np.ndarray]]:
    """Group eigenvectors whose eigenvalues agree within a relative gap.

    Returns ``(value, block)`` pairs where ``block`` columns span the
    (possibly degenerate) eigenspace; ``value`` is the mean eigenvalue.
    """
    w = es.eigenvalues
    if len(w) == 0:
        return []
    scale = max(1.0, float(abs(w[0])))
    groups: list[tuple[float, np.ndarray]] = []
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i - 1] - w[i] > rel_gap * scale:
            groups.append((float(np.mean(w[start:i])), es.eigenvectors[:, start:i]))
            start = i
    return groups


def singular_values(m: np.ndarray) -> np.ndarray:
    """Singular values, descending, via the eigenvalues of m†m.

    Eigenvalues of m†m in [-1e-14, 0) are clamped to zero before the square
    root.
    """
    m = np.asarray(m, dtype=complex)
    w = np.linalg.eigvalsh(m.conj().T @ m)
    w = np.where(w < 0.0, np.where(w >= -SV_CLAMP, 0.0, w), w)
    w = np.clip(w, 0.0, None)
    return np.sqrt(w)[::-1]


def trace_norm(m: np.ndarray) -> float:
    """Sum of singular values."""
    return float(singular_values(m).sum())


def _check_bipartite(rho: np.ndarray, dims: tuple[int, int]) -> tuple[int, int]:
    d_a, d_b = int(dims[0]), int(dims[1])
    n = d_a * d_b
    if rho.ndim != 2 or rho.shape != (n, n):
        raise DimensionMismatchError(
            f"matrix shape {rho.shape} does not match dims ({d_a},{d_b})"
        )
    return d_a, d_b


def partial_transpose(rho: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    """Partial transpose on the second subsystem.

    Entry ((i,k),(j,l)) of the result equals entry ((i,l),(j,k)) of the
    input.  An involution; preserves Hermiticity and trace.
    """
    rho = np.asarray(rho, dtype=complex)
    d_a, d_b = _check_bipartite(rho, dims)
    n = d_a * d_b
    return rho.reshape(d_a, d_b, d_a, d_b).transpose(0, 3, 2, 1).reshape(n, n)


def realign(rho: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    """Realignment map used by the cross-norm criterion.

    Returns the d_a² x d_b² matrix with entry ((i,j),(k,l)) = rho_((i,k),(j,l)).
    For a product operator A⊗B the result is rank one.
    """
    rho = np.asarray(rho, dtype=complex)
    d_a, d_b = _check_bipartite(rho, dims)
    return rho.reshape(d_a, d_b, d_a, d_b).transpose(0, 2, 1, 3).reshape(d_a * d_a, d_b * d_b)


@dataclass(frozen=True)
class SchmidtForm:
    """Schmidt decomposition of a bipartite pure state.

    ``coefficients`` are non-negative, descending, with squares summing to
    one.  Column ``k`` of ``left_basis`` (length d_a) pairs with column ``k``
    of ``right_basis`` (length d_b).
    """

    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray

    def rank(self, tol: float = 1e-9) -> int:
        return int(np.sum(self.coefficients > tol))

    def reconstruct(self) -> np.ndarray:
        out = np.zeros(self.left_basis.shape[0] * self.right_basis.shape[0], dtype=complex)
        for k, c in enumerate(self.coefficients):
            out += c * np.kron(self.left_basis[:, k], self.right_basis[:, k])
        return out


def schmidt(psi: np.ndarray, dims: tuple[int, int], norm_tol: float = 1e-10) -> SchmidtForm:
    """Schmidt decomposition of a unit vector on a bipartite space."""
    psi = np.asarray(psi, dtype=complex).ravel()
    d_a, d_b = int(dims[0]), int(dims[1])
    if psi.size != d_a * d_b:
        raise DimensionMismatchError(
            f"vector length {psi.size} does not match dims ({d_a},{d_b})"
        )
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > norm_tol:
        raise NotNormalizedError(f"|psi| = {nrm!r}, expected 1 within {norm_tol:.1e}")
    u, s, vh = np.linalg.svd(psi.reshape(d_a, d_b))
    k = min(d_a, d_b)
    left = np.array(u[:, :k])
    right = vh[:k, :].T.copy()  # column k holds the right Schmidt vector
    for i in range(k):
        col = left[:, i]
        for x in col:
            if abs(x) > PHASE_TOL:
                ph = x.conjugate() / abs(x)
                left[:, i] = col * ph
                right[:, i] = right[:, i] * ph.conjugate()
                break
    s = np.array(s[:k])
    for arr in (s, left, right):
        arr.setflags(write=False)
    return SchmidtForm(coefficients=s, left_basis=left, right_basis=right)


def schmidt_rank_of_vector(psi: np.ndarray, dims: tuple[int, int], tol: float = 1e-9) -> int:
    """Number of Schmidt coefficients above tol (no normalization required)."""
    psi = np.asarray(psi, dtype=complex).ravel()
    d_a, d_b = int(dims[0]), int(dims[1])
    s = np.linalg.svd(psi.reshape(d_a, d_b), compute_uv=False)
    scale = s[0] if len(s) and s[0] > 0 else 1.0
    return int(np.sum(s > tol * scale))
