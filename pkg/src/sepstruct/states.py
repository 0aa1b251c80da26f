"""Semantic state types, canonical state families, and JSON serialization.

Basis convention: the computational product basis |i>_A |j>_B is flattened
to index i*d_b + j (row-major over the A index).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    NotNormalizedError,
    OutOfRangeError,
    ParseError,
    ValidationError,
)

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class BipartiteDims:
    """Local dimensions of a bipartite system."""

    d_a: int
    d_b: int

    def __post_init__(self):
        if self.d_a < 2 or self.d_b < 2:
            raise ValidationError("dims", f"local dimensions must be >= 2, got {self}")

    @property
    def total(self) -> int:
        return self.d_a * self.d_b

    @property
    def pair(self) -> tuple[int, int]:
        return (self.d_a, self.d_b)

    def __iter__(self):
        return iter((self.d_a, self.d_b))

    def swapped(self) -> "BipartiteDims":
        return BipartiteDims(self.d_b, self.d_a)


def _as_dims(dims) -> BipartiteDims:
    if isinstance(dims, BipartiteDims):
        return dims
    d_a, d_b = dims
    return BipartiteDims(int(d_a), int(d_b))


@dataclass(frozen=True)
class DensityMatrix:
    """Validated bipartite density matrix.

    Construction checks finiteness, shape against ``dims``, Hermiticity,
    positive semidefiniteness (min eigenvalue >= -tol) and unit trace,
    each within ``tol``.
    """

    matrix: np.ndarray
    dims: BipartiteDims
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", _as_dims(self.dims))
        if not np.all(np.isfinite(m.view(float))):
            raise ValidationError("finite", "matrix contains NaN or Inf entries")
        n = self.dims.total
        if m.shape != (n, n):
            raise ValidationError(
                "dims", f"matrix shape {m.shape} does not match dims {self.dims.pair}"
            )
        if np.abs(m - m.conj().T).max() > self.tol:
            raise ValidationError("hermitian", "matrix is not Hermitian within tol")
        tr = m.trace()
        if abs(tr - 1.0) > self.tol:
            raise ValidationError("trace", f"trace = {tr.real!r}, expected 1 within tol")
        lam_min = float(np.linalg.eigvalsh((m + m.conj().T) / 2).min())
        if lam_min < -self.tol:
            raise ValidationError("psd", f"min eigenvalue = {lam_min!r} below -tol")
        m.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.dims.total

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def swapped(self) -> "DensityMatrix":
        """The same state with the two subsystems relabeled."""
        d_a, d_b = self.dims
        perm = self.matrix.reshape(d_a, d_b, d_a, d_b).transpose(1, 0, 3, 2)
        return DensityMatrix(perm.reshape(self.dim, self.dim), self.dims.swapped(), self.tol)


@dataclass(frozen=True)
class PureState:
    """Unit vector on a bipartite space."""

    amplitudes: np.ndarray
    dims: BipartiteDims

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=complex).ravel()
        object.__setattr__(self, "amplitudes", v)
        object.__setattr__(self, "dims", _as_dims(self.dims))
        if v.size != self.dims.total:
            raise DimensionMismatchError(
                f"amplitude count {v.size} does not match dims {self.dims.pair}"
            )
        nrm = np.linalg.norm(v)
        if abs(nrm - 1.0) > 1e-10:
            raise NotNormalizedError(f"|psi| = {nrm!r}, expected 1")
        v.setflags(write=False)

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def to_density(self, tol: float = DEFAULT_TOL) -> DensityMatrix:
        return DensityMatrix(self.projector(), self.dims, tol)


@dataclass(frozen=True)
class FamilyLine:
    """Affine family t*pe + (1-t)*ps between two states with shared dims."""

    pe: DensityMatrix
    ps: DensityMatrix

    def __post_init__(self):
        if self.pe.dims != self.ps.dims:
            raise DimensionMismatchError(
                f"endpoint dims differ: {self.pe.dims.pair} vs {self.ps.dims.pair}"
            )

    @property
    def dims(self) -> BipartiteDims:
        return self.pe.dims

    def matrix_at(self, t: float) -> np.ndarray:
        """Raw mixture matrix; no validation, suitable for tight loops."""
        return t * self.pe.matrix + (1.0 - t) * self.ps.matrix

    def state_at(self, t: float) -> DensityMatrix:
        if not 0.0 <= t <= 1.0:
            raise OutOfRangeError(f"t = {t!r} outside [0, 1]")
        return DensityMatrix(self.matrix_at(t), self.dims, self.pe.tol)


def basis_ket(d: int, i: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


def product_ket(dims, i: int, j: int) -> np.ndarray:
    d_a, d_b = dims
    return np.kron(basis_ket(d_a, i), basis_ket(d_b, j))


def max_entangled(d: int) -> PureState:
    """(1/sqrt(d)) sum_i |ii> on a d x d system."""
    v = np.zeros(d * d, dtype=complex)
    for i in range(d):
        v[i * d + i] = 1.0
    return PureState(v / np.sqrt(d), BipartiteDims(d, d))


def max_mixed(dims) -> DensityMatrix:
    dims = _as_dims(dims)
    n = dims.total
    return DensityMatrix(np.eye(n, dtype=complex) / n, dims)


def bell_basis() -> tuple[PureState, PureState, PureState, PureState]:
    """The four two-qubit Bell-type vectors |10>, |01>, (|00>-|11>)/sqrt2, (|00>+|11>)/sqrt2."""
    dims = BipartiteDims(2, 2)
    s2 = np.sqrt(2.0)
    return (
        PureState(product_ket(dims, 1, 0), dims),
        PureState(product_ket(dims, 0, 1), dims),
        PureState((product_ket(dims, 0, 0) - product_ket(dims, 1, 1)) / s2, dims),
        PureState((product_ket(dims, 0, 0) + product_ket(dims, 1, 1)) / s2, dims),
    )


def werner(p: float) -> DensityMatrix:
    """Two-qubit mixture p |psi+><psi+| + (1-p) I/4."""
    if not 0.0 <= p <= 1.0:
        raise OutOfRangeError(f"p = {p!r} outside [0, 1]")
    bell = max_entangled(2)
    m = p * bell.projector() + (1.0 - p) * np.eye(4, dtype=complex) / 4.0
    return DensityMatrix(m, BipartiteDims(2, 2))


def _cyclic_product_mixture(shift: int) -> np.ndarray:
    """(1/3) sum_i |i, i+shift><i, i+shift| on 3x3 (indices mod 3)."""
    m = np.zeros((9, 9), dtype=complex)
    for i in range(3):
        k = product_ket((3, 3), i, (i + shift) % 3)
        m += np.outer(k, k.conj()) / 3.0
    return m


def horodecki_sigma_plus() -> DensityMatrix:
    """(1/3)(|01><01| + |12><12| + |20><20|)."""
    return DensityMatrix(_cyclic_product_mixture(1), BipartiteDims(3, 3))


def horodecki_sigma_minus() -> DensityMatrix:
    """(1/3)(|10><10| + |21><21| + |02><02|)."""
    return DensityMatrix(_cyclic_product_mixture(2), BipartiteDims(3, 3))


def _horodecki_omega(alpha: float) -> np.ndarray:
    return (alpha / 5.0) * _cyclic_product_mixture(1) + ((5.0 - alpha) / 5.0) * _cyclic_product_mixture(2)


def horodecki_omega(alpha: float) -> DensityMatrix:
    """Separable endpoint of the 3x3 family line: (alpha/5) sigma+ + ((5-alpha)/5) sigma-."""
    if not 0.0 <= alpha <= 5.0:
        raise OutOfRangeError(f"alpha = {alpha!r} outside [0, 5]")
    return DensityMatrix(_horodecki_omega(alpha), BipartiteDims(3, 3))


def horodecki_sigma(alpha: float) -> DensityMatrix:
    """3x3 family (2/7)|Psi+><Psi+| + (alpha/7) sigma+ + ((5-alpha)/7) sigma-."""
    if not 0.0 <= alpha <= 5.0:
        raise OutOfRangeError(f"alpha = {alpha!r} outside [0, 5]")
    p = max_entangled(3).projector()
    m = (2.0 / 7.0) * p + (5.0 / 7.0) * _horodecki_omega(alpha)
    return DensityMatrix(m, BipartiteDims(3, 3))


def horodecki_family(alpha: float, t: float) -> DensityMatrix:
    """One-parameter line t |Psi+><Psi+| + (1-t) Omega_alpha through the 3x3 family."""
    if not 0.0 <= alpha <= 5.0:
        raise OutOfRangeError(f"alpha = {alpha!r} outside [0, 5]")
    if not 0.0 <= t <= 1.0:
        raise OutOfRangeError(f"t = {t!r} outside [0, 1]")
    m = t * max_entangled(3).projector() + (1.0 - t) * _horodecki_omega(alpha)
    return DensityMatrix(m, BipartiteDims(3, 3))


def _q_flat_part() -> np.ndarray:
    """Projector onto span{|01>,|02>,|10>,|12>,|21>} (trace 5), as a matrix."""
    m = np.zeros((9, 9), dtype=complex)
    for i, j in [(0, 1), (0, 2), (1, 0), (1, 2), (2, 1)]:
        k = product_ket((3, 3), i, j)
        m += np.outer(k, k.conj())
    return m


def _phi_a(a: float) -> np.ndarray:
    """Product vector |2> (sqrt((1+a)/2)|0> + sqrt((1-a)/2)|2>)."""
    local = np.sqrt((1.0 + a) / 2.0) * basis_ket(3, 0) + np.sqrt((1.0 - a) / 2.0) * basis_ket(3, 2)
    return np.kron(basis_ket(3, 2), local)


def varrho_q_plus(a: float) -> DensityMatrix:
    """Separable endpoint of the 3x3 varrho family: (a*Q + P_phi)/(5a+1)."""
    if not 0.0 < a <= 1.0:
        raise OutOfRangeError(f"a = {a!r} outside (0, 1]")
    phi = _phi_a(a)
    m = (a * _q_flat_part() + np.outer(phi, phi.conj())) / (5.0 * a + 1.0)
    return DensityMatrix(m, BipartiteDims(3, 3))


def varrho_family(a: float, t: float) -> DensityMatrix:
    """Line t |Psi+><Psi+| + (1-t) Q+_a; at t = 3a/(8a+1) this is the 3x3
    bound-entangled matrix parameterized by a."""
    if not 0.0 < a <= 1.0:
        raise OutOfRangeError(f"a = {a!r} outside (0, 1]")
    if not 0.0 <= t <= 1.0:
        raise OutOfRangeError(f"t = {t!r} outside [0, 1]")
    m = t * max_entangled(3).projector() + (1.0 - t) * varrho_q_plus(a).matrix
    return DensityMatrix(m, BipartiteDims(3, 3))


def varrho(a: float) -> DensityMatrix:
    """The varrho family member at its construction weight t = 3a/(8a+1)."""
    return varrho_family(a, 3.0 * a / (8.0 * a + 1.0))


def rho_m() -> DensityMatrix:
    """Equal mixture of |psi+> with the product state (|10>+|11>)/sqrt2."""
    dims = BipartiteDims(2, 2)
    bell = max_entangled(2).amplitudes
    phi = (product_ket(dims, 1, 0) + product_ket(dims, 1, 1)) / np.sqrt(2.0)
    m = 0.5 * np.outer(bell, bell.conj()) + 0.5 * np.outer(phi, phi.conj())
    return DensityMatrix(m, dims)


def save_state(rho: DensityMatrix) -> str:
    """Serialize to the interchange JSON schema."""
    entries = [
        [[float(x.real), float(x.imag)] for x in row]
        for row in rho.matrix
    ]
    return json.dumps({"dims": [rho.dims.d_a, rho.dims.d_b], "matrix": entries})


def load_state(text: str, tol: float = DEFAULT_TOL) -> DensityMatrix:
    """Parse the interchange JSON schema and validate the state.

    Raises ParseError on malformed input and ValidationError when the
    parsed matrix fails a density-matrix invariant.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or "dims" not in data or "matrix" not in data:
        raise ParseError('expected an object with "dims" and "matrix" keys')
    dims = data["dims"]
    if not (isinstance(dims, list) and len(dims) == 2 and all(isinstance(d, int) for d in dims)):
        raise ParseError('"dims" must be a pair of integers')
    rows = data["matrix"]
    n = dims[0] * dims[1]
    try:
        m = np.array(
            [[complex(cell[0], cell[1]) for cell in row] for row in rows],
            dtype=complex,
        )
    except (TypeError, IndexError, ValueError) as exc:
        raise ParseError(f'"matrix" must be rows of [re, im] pairs: {exc}') from exc
    if m.shape != (n, n):
        raise ParseError(f"matrix shape {m.shape} does not match dims {dims}")
    return DensityMatrix(m, BipartiteDims(*dims), tol)
