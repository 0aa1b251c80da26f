"""Separability criteria, certified three-valued verdicts, and line searches.

The two workhorse criteria are the positivity of the partial transpose
(exact for total dimension <= 6) and the realignment trace norm.  Both
indicator functions behave well along affine families of states: the
minimum eigenvalue of the partial transpose is concave in the mixing
weight, and the realignment norm is convex, so criterion-satisfying
regions along a line are intervals.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np
from scipy.optimize import brentq

from .errors import DimensionMismatchError, IncomparableError, InputNotEntangledError, OracleUndecidedError
from .linalg import (
    group_eigenspaces,
    hermitian_eig,
    partial_transpose,
    realign,
    schmidt_rank_of_vector,
    trace_norm,
)
from .product_vectors import product_vectors_in_subspace
from .states import DensityMatrix, FamilyLine, PureState

PSD_SLACK = 1e-9  # min eigenvalue >= -PSD_SLACK counts as positive semidefinite
ROOT_TOL = 1e-12
CCNR_GRID = 512


class Outcome(str, Enum):
    SEPARABLE = "separable"
    ENTANGLED = "entangled"
    UNDECIDED = "undecided"


class Ternary(str, Enum):
    YES = "yes"
    NO = "no"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class Verdict:
    """Outcome of the separability test battery with its certificate.

    ``certificate`` is one of "ppt_violation", "ccnr_violation",
    "schmidt_rank", "exact_low_dim", "product_basis_diagonal",
    "schmidt_rank_one", "none"; ``value`` carries the violated indicator
    (min PT eigenvalue, realignment norm, or Schmidt rank) when relevant.
    """

    outcome: Outcome
    certificate: str
    value: float | None = None
    product_terms: tuple[tuple[float, np.ndarray], ...] | None = None


@dataclass(frozen=True)
class FinerCertificate:
    """Witnessed decomposition sigma1 = (1-epsilon) sigma2 + epsilon omega."""

    epsilon: float
    omega: DensityMatrix | None
    omega_verdict: Verdict | None


def _pt_min_eig(mat: np.ndarray, dims: tuple[int, int]) -> float:
    return float(np.linalg.eigvalsh(partial_transpose(mat, dims)).min())


def _ccnr(mat: np.ndarray, dims: tuple[int, int]) -> float:
    return trace_norm(realign(mat, dims))


def ppt_min_eig(rho: DensityMatrix) -> float:
    """Minimum eigenvalue of the partial transpose; >= 0 means PPT."""
    return _pt_min_eig(rho.matrix, rho.dims.pair)


def ccnr_norm(rho: DensityMatrix) -> float:
    """Trace norm of the realigned matrix; > 1 certifies entanglement."""
    return _ccnr(rho.matrix, rho.dims.pair)


def _pure_vector(rho: DensityMatrix) -> np.ndarray | None:
    if rho.purity() < 1.0 - 1e-9:
        return None
    es = hermitian_eig(rho.matrix, tol=max(rho.tol, 1e-9))
    return es.eigenvectors[:, 0]


def product_basis_certificate(
    rho: DensityMatrix, tol: float = 1e-9
) -> tuple[tuple[float, np.ndarray], ...] | None:
    """Explicit mixture of orthogonal product projectors equal to rho, if found.

    Succeeds when every support eigenspace admits a full orthogonal product
    basis (found by the subspace product-vector search).  The returned
    weighted vectors reconstruct rho within 1e-9.
    """
    m = rho.matrix
    dims = rho.dims.pair
    terms: list[tuple[float, np.ndarray]] = []
    if np.abs(m - np.diag(np.diag(m))).max() <= 1e-12:
        for j in range(m.shape[0]):
            w = float(m[j, j].real)
            if w > 1e-12:
                v = np.zeros(m.shape[0], dtype=complex)
                v[j] = 1.0
                terms.append((w, v))
        return tuple(terms)
    es = hermitian_eig(m, tol=max(rho.tol, tol))
    for value, block in group_eigenspaces(es):
        if value <= 1e-12:
            continue
        prods = product_vectors_in_subspace(block, dims)
        if len(prods) < block.shape[1]:
            return None
        terms.extend((value, v) for v in prods)
    recon = np.zeros_like(m)
    for w, v in terms:
        recon = recon + w * np.outer(v, v.conj())
    if np.abs(recon - m).max() > tol:
        return None
    return tuple(terms)


def verdict(rho: DensityMatrix, tol: float = PSD_SLACK) -> Verdict:
    """Three-valued separability verdict with a machine-checkable certificate."""
    p = ppt_min_eig(rho)
    if p < -tol:
        return Verdict(Outcome.ENTANGLED, "ppt_violation", value=p)
    c = ccnr_norm(rho)
    if c > 1.0 + tol:
        return Verdict(Outcome.ENTANGLED, "ccnr_violation", value=c)
    if rho.dim <= 6:
        return Verdict(Outcome.SEPARABLE, "exact_low_dim", value=p)
    cert = product_basis_certificate(rho)
    if cert is not None:
        return Verdict(Outcome.SEPARABLE, "product_basis_diagonal", product_terms=cert)
    vec = _pure_vector(rho)
    if vec is not None:
        rank = schmidt_rank_of_vector(vec, rho.dims.pair)
        if rank == 1:
            return Verdict(Outcome.SEPARABLE, "schmidt_rank_one")
        return Verdict(Outcome.ENTANGLED, "schmidt_rank", value=float(rank))
    return Verdict(Outcome.UNDECIDED, "none")


def golden_section_max(f, a: float, b: float, xtol: float = 1e-10) -> tuple[float, float]:
    """Maximizer and value of a unimodal function on [a, b]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a0, fa0 = a, f(a)
    b0, fb0 = b, f(b)
    c = b - (b - a) * invphi
    d = a + (b - a) * invphi
    fc, fd = f(c), f(d)
    while d - c > xtol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - (b - a) * invphi
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) * invphi
            fd = f(d)
    best_x, best_f = 0.5 * (a + b), f(0.5 * (a + b))
    if fa0 > best_f:
        best_x, best_f = a0, fa0
    if fb0 > best_f:
        best_x, best_f = b0, fb0
    return best_x, best_f


def _concave_superlevel_interval(f, slack: float, xtol: float = ROOT_TOL):
    """Interval where a concave f on [0, 1] satisfies f >= -slack, or None.

    Collapses to a single point when the maximum sits within slack of zero.
    """
    f0, f1 = f(0.0), f(1.0)
    t_star, f_star = golden_section_max(f, 0.0, 1.0)
    if f_star < -slack:
        return None
    if f_star <= slack:
        return (t_star, t_star)
    lo = 0.0 if f0 >= 0.0 else brentq(f, 0.0, t_star, xtol=xtol)
    hi = 1.0 if f1 >= 0.0 else brentq(f, t_star, 1.0, xtol=xtol)
    return (float(lo), float(hi))


def _ppt_indicator(line: FamilyLine):
    dims = line.dims.pair
    return lambda t: _pt_min_eig(line.matrix_at(t), dims)


def _ccnr_margin(line: FamilyLine):
    """1 - realignment norm along the line; concave in t."""
    dims = line.dims.pair
    r_pe = realign(line.pe.matrix, dims)
    r_ps = realign(line.ps.matrix, dims)
    return lambda t: 1.0 - trace_norm(t * r_pe + (1.0 - t) * r_ps)


def ppt_crossings(line: FamilyLine, xtol: float = ROOT_TOL) -> list[float]:
    """Boundary weights of the PPT-satisfying interval along the line.

    Reports interval endpoints interior to (0, 1), where the criterion
    status actually changes, and tangency points where the interval
    collapses.
    """
    interval = _concave_superlevel_interval(_ppt_indicator(line), PSD_SLACK, xtol)
    if interval is None:
        return []
    lo, hi = interval
    if lo == hi:
        return [float(lo)]
    out = []
    if lo > 0.0:
        out.append(float(lo))
    if hi < 1.0:
        out.append(float(hi))
    return out


def ccnr_crossings(line: FamilyLine, grid: int = CCNR_GRID, xtol: float = ROOT_TOL) -> list[float]:
    """Zeros of (realignment norm - 1) along the line.

    Dense grid scan followed by local root polishing; every sign change is
    reported.  Tangency points (norm touching 1 without a sign change) are
    caught by refining around the grid minimum of the norm.
    """
    dims = line.dims.pair
    r_pe = realign(line.pe.matrix, dims)
    r_ps = realign(line.ps.matrix, dims)

    def g(t: float) -> float:
        return trace_norm(t * r_pe + (1.0 - t) * r_ps) - 1.0

    ts = np.linspace(0.0, 1.0, grid + 1)
    vals = np.array([g(t) for t in ts])
    crossings: list[float] = []
    for i in range(grid + 1):
        if abs(vals[i]) > 1e-12:
            continue
        # grid point sitting on the boundary: report it when the criterion
        # status actually changes (some non-tiny neighbor is violated)
        neighbors = [vals[j] for j in (i - 1, i + 1) if 0 <= j <= grid and abs(vals[j]) > 1e-12]
        if any(v > 0.0 for v in neighbors):
            crossings.append(float(ts[i]))
    for i in range(grid):
        a, b = vals[i], vals[i + 1]
        if abs(a) > 1e-12 and abs(b) > 1e-12 and a * b < 0.0:
            crossings.append(float(brentq(g, ts[i], ts[i + 1], xtol=xtol)))
    if not crossings:
        # convex norm may touch the boundary between grid points
        i_min = int(np.argmin(vals))
        lo = ts[max(0, i_min - 1)]
        hi = ts[min(grid, i_min + 1)]
        t_min, neg_min = golden_section_max(lambda t: -g(t), lo, hi)
        if abs(neg_min) <= 1e-9:
            crossings.append(float(t_min))
    return sorted(set(round(c, 12) for c in crossings))


def min_separable_weight(
    line: FamilyLine, criterion: str = "ppt", grid: int = CCNR_GRID, xtol: float = ROOT_TOL
) -> tuple[float, float] | None:
    """Criterion-satisfying interval of weights along the line, or None.

    For "ppt" this is {t : min eig PT >= 0}, for "ccnr" {t : realignment
    norm <= 1}; "exact" requires total dimension <= 6 and uses the PT
    criterion, which is decisive there.  Endpoints are located to xtol.
    """
    if criterion == "exact":
        if line.dims.total > 6:
            raise OracleUndecidedError(
                f"no exact separability oracle for total dimension {line.dims.total}"
            )
        criterion = "ppt"
    if criterion == "ppt":
        return _concave_superlevel_interval(_ppt_indicator(line), PSD_SLACK, xtol)
    if criterion == "ccnr":
        g = _ccnr_margin(line)
        crossings = ccnr_crossings(line, grid=grid, xtol=xtol)
        sat0 = g(0.0) >= -PSD_SLACK
        sat1 = g(1.0) >= -PSD_SLACK
        if sat0 and sat1:
            return (0.0, 1.0)
        if sat0:
            return (0.0, crossings[0]) if crossings else (0.0, 1.0)
        if sat1:
            return (crossings[-1], 1.0) if crossings else (0.0, 1.0)
        if len(crossings) >= 2:
            return (crossings[0], crossings[-1])
        if len(crossings) == 1:
            return (crossings[0], crossings[0])
        return None
    raise ValueError(f"unknown criterion {criterion!r}")


def _as_density(state: DensityMatrix | PureState) -> DensityMatrix:
    if isinstance(state, PureState):
        return state.to_density()
    return state


def _pair_common_witness(a: DensityMatrix, b: DensityMatrix, grid: int) -> Ternary:
    line = FamilyLine(pe=a, ps=b)
    f = _ppt_indicator(line)
    t_star, f_star = golden_section_max(f, 0.0, 1.0)
    if f_star < -PSD_SLACK:
        # every mixture has a negative partial transpose, hence is entangled
        return Ternary.YES
    candidates = [t_star] + [k / grid for k in range(1, grid)]
    undecided = False
    for t in candidates:
        v = verdict(line.state_at(t))
        if v.outcome is Outcome.SEPARABLE:
            return Ternary.NO
        if v.outcome is Outcome.UNDECIDED:
            undecided = True
    return Ternary.UNDECIDED if undecided else Ternary.NO


def _simplex_grid(n: int, resolution: int):
    """Interior rational weight vectors k/resolution with all k >= 1."""
    if n == 1:
        yield (1.0,)
        return

    def rec(prefix, remaining, slots):
        if slots == 1:
            yield prefix + (remaining,)
            return
        for k in range(1, remaining - slots + 2):
            yield from rec(prefix + (k,), remaining - k, slots - 1)

    for combo in rec((), resolution, n):
        yield tuple(k / resolution for k in combo)


def common_witness_exists(
    states: Sequence[DensityMatrix | PureState], grid: int = 64, simplex_resolution: int = 8
) -> Ternary:
    """Whether one entanglement witness detects every input state.

    NO as soon as some convex mixture of the inputs is certified separable;
    YES when every mixture is provably entangled (for pairs this is decided
    rigorously through the concavity of the minimum PT eigenvalue, since an
    everywhere-negative partial transpose certifies entanglement in any
    dimension); UNDECIDED otherwise.
    """
    mats = [_as_density(s) for s in states]
    if not mats:
        raise InputNotEntangledError("empty input")
    for i, rho in enumerate(mats):
        v = verdict(rho)
        if v.outcome is not Outcome.ENTANGLED:
            raise InputNotEntangledError(f"input {i} is not certified entangled ({v.outcome.value})")
    if len(mats) == 1:
        return Ternary.YES
    if len(mats) == 2:
        return _pair_common_witness(mats[0], mats[1], grid)
    results = [_pair_common_witness(a, b, grid) for a, b in combinations(mats, 2)]
    if any(r is Ternary.NO for r in results):
        return Ternary.NO
    undecided = any(r is Ternary.UNDECIDED for r in results)
    dims = mats[0].dims
    for weights in _simplex_grid(len(mats), simplex_resolution):
        mix = sum(w * rho.matrix for w, rho in zip(weights, mats))
        v = verdict(DensityMatrix(mix, dims))
        if v.outcome is Outcome.SEPARABLE:
            return Ternary.NO
        if v.outcome is Outcome.UNDECIDED:
            undecided = True
    if not undecided and dims.total <= 6:
        return Ternary.YES
    return Ternary.UNDECIDED


def finer_decomposition(
    sigma1: DensityMatrix, sigma2: DensityMatrix, xtol: float = 1e-13
) -> FinerCertificate:
    """Largest-weight extraction of sigma2 from sigma1.

    Computes c* = max{c in [0,1] : sigma1 - c*sigma2 psd} by bisection on
    the (monotone) minimum eigenvalue, and returns epsilon = 1 - c* with
    the normalized remainder Omega = (sigma1 - c* sigma2)/epsilon.  Raises
    IncomparableError when c* is zero (sigma2's support is not contained
    in sigma1's).
    """
    if sigma1.dims != sigma2.dims:
        raise DimensionMismatchError(
            f"dims differ: {sigma1.dims.pair} vs {sigma2.dims.pair}"
        )
    if np.abs(sigma1.matrix - sigma2.matrix).max() <= 1e-12:
        return FinerCertificate(0.0, None, None)

    def lam_min(c: float) -> float:
        return float(np.linalg.eigvalsh(sigma1.matrix - c * sigma2.matrix).min())

    psd_eps = 1e-13
    lo, hi = 0.0, 1.0
    if lam_min(1.0) >= -psd_eps:
        # psd difference with zero trace forces equality; treated above
        return FinerCertificate(0.0, None, None)
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if lam_min(mid) >= -psd_eps:
            lo = mid
        else:
            hi = mid
    c_star = lo
    if c_star < 1e-9:
        raise IncomparableError(
            "no positive weight of sigma2 can be subtracted from sigma1"
        )
    eps = 1.0 - c_star
    omega_mat = (sigma1.matrix - c_star * sigma2.matrix) / eps
    omega = DensityMatrix(omega_mat, sigma1.dims, tol=1e-8)
    return FinerCertificate(float(eps), omega, verdict(omega))
