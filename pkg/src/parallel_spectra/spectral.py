"""Dense eigendecomposition, spectrum matching and PT diagnostics."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DegenerateGaugeError, GaugeError, SolverError
from .lattice import HamiltonianTriple, ParityOperator

log = logging.getLogger(__name__)

__all__ = [
    "Tolerances",
    "EigenSystem",
    "SpectralMatch",
    "CoalescenceReport",
    "eig_general",
    "triple_eigensystems",
    "real_eigen_subset",
    "match_eigensystems",
    "match_spectra",
    "pt_gauge_fix",
    "biorthogonal_overlap",
    "detect_coalescence",
    "cluster_sizes",
    "default_cluster_radius",
    "cluster_eigenvector",
    "DEFAULT_TOL",
]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Tolerances:
    tolEig: float = 1e-10
    tolReal: float = 1e-8
    tolMatch: float = 1e-8
    tolNorm: float = 1e-12
    tolEP: float = 1e-6

    def __post_init__(self):
        for name, value in vars(self).items():
            if not value > 0:
                raise ValueError(f"tolerance {name} must be strictly positive, got {value!r}")


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Eigenpairs of one matrix, sorted by (Re, Im).

    ``vectors[:, k]`` is the unit right eigenvector for ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray = field(repr=False)
    residuals: np.ndarray = field(repr=False)
    matrix_norm: float
    source: str = ""

    def __len__(self):
        return len(self.eigenvalues)

    def vector(self, k: int) -> np.ndarray:
        return self.vectors[:, k]


@dataclass(frozen=True)
class SpectralMatch:
    energy: float
    idxH: int
    idxN: int
    idxNdag: int
    matchResidual: float


def eig_general(M: np.ndarray, tol: Tolerances = DEFAULT_TOL, source: str = "") -> EigenSystem:
    """Full eigendecomposition of a square complex matrix with residual certificates.

    Raises
    ------
    SolverError
        If LAPACK fails or any pair has ``||M v - lam v|| > tolEig * ||M||``.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    try:
        w, v = scipy.linalg.eig(M, check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SolverError(f"eigensolver did not converge: {exc}") from exc
    order = np.lexsort((w.imag, w.real))
    w, v = w[order], v[:, order]
    v = v / np.linalg.norm(v, axis=0)
    norm = float(np.linalg.norm(M, 2)) if M.size else 0.0
    residuals = np.linalg.norm(M @ v - v * w, axis=0)
    bound = tol.tolEig * max(norm, _EPS)
    if np.any(residuals > bound):
        raise SolverError(f"eigenpair residual {residuals.max():.3e} exceeds {bound:.3e}", residuals)
    for a in (w, v, residuals):
        a.setflags(write=False)
    return EigenSystem(w, v, residuals, norm, source)


def triple_eigensystems(triple: HamiltonianTriple, tol: Tolerances = DEFAULT_TOL):
    """Eigensystems of ``(H, Hn, HnDag)``."""
    return tuple(eig_general(triple.member(s), tol, source=s) for s in ("H", "N", "NDAG"))


def real_eigen_subset(es: EigenSystem, tol: Tolerances = DEFAULT_TOL) -> list[int]:
    """Indices with ``|Im lam| <= tolReal`` in ascending real part."""
    idx = np.flatnonzero(np.abs(es.eigenvalues.imag) <= tol.tolReal)
    order = np.argsort(es.eigenvalues.real[idx], kind="stable")
    return [int(k) for k in idx[order]]


def _nearest_free(values: np.ndarray, used: np.ndarray, target: float, radius: float):
    lo = np.searchsorted(values, target - radius, side="left")
    hi = np.searchsorted(values, target + radius, side="right")
    best, best_d = None, None
    for j in range(lo, hi):
        if used[j]:
            continue
        d = abs(values[j] - target)
        if best is None or d < best_d:
            best, best_d = j, d
    return best, best_d


def match_eigensystems(esH: EigenSystem, esN: EigenSystem, esNdag: EigenSystem,
                       tol: Tolerances = DEFAULT_TOL) -> list[SpectralMatch]:
    """Greedy one-to-one matching of real eigenvalues across three systems.

    Eigenvalues of ``H`` are visited in ascending order; each takes the
    closest unused real eigenvalue of ``Hn`` and of ``HnDag`` within
    ``tolMatch``.  Ties go to the smaller index.  Only complete triples are
    returned.
    """
    def prepared(es):
        idx = np.array(real_eigen_subset(es, tol), dtype=np.intp)
        # sort by (value, index) so ties resolve to the smallest index
        vals = es.eigenvalues.real[idx]
        order = np.lexsort((idx, vals))
        return vals[order], idx[order]

    vH, iH = prepared(esH)
    vN, iN = prepared(esN)
    vD, iD = prepared(esNdag)
    usedN = np.zeros(len(vN), bool)
    usedD = np.zeros(len(vD), bool)
    matches = []
    for e, k in zip(vH, iH):
        jn, dn = _nearest_free(vN, usedN, e, tol.tolMatch)
        if jn is None:
            continue
        jd, dd = _nearest_free(vD, usedD, e, tol.tolMatch)
        if jd is None:
            continue
        usedN[jn] = usedD[jd] = True
        spread = max(dn, dd, abs(vN[jn] - vD[jd]))
        matches.append(SpectralMatch(float(e), int(k), int(iN[jn]), int(iD[jd]), float(spread)))
    return matches


def match_spectra(triple: HamiltonianTriple, tol: Tolerances = DEFAULT_TOL,
                  systems=None) -> list[SpectralMatch]:
    """Common real spectrum of the triple.  ``systems`` reuses precomputed eigensystems."""
    esH, esN, esD = systems if systems is not None else triple_eigensystems(triple, tol)
    return match_eigensystems(esH, esN, esD, tol)


def pt_gauge_fix(v: np.ndarray, P: ParityOperator, tol: Tolerances = DEFAULT_TOL,
                 parity: int = 1, threshold: float | None = None) -> np.ndarray:
    """Rotate the phase of ``v`` so that ``P conj(v') = parity * v'``.

    With ``parity=+1`` the real part of the result is mirror-even and the
    imaginary part mirror-odd; ``parity=-1`` swaps the roles.  The overall
    sign makes the largest-magnitude entry of ``Re v'`` positive.

    ``threshold`` bounds ``||P conj(v) - e^{i chi} v|| / ||v||`` (default
    ``sqrt(tolMatch)``, since eigenvectors carry error of order the
    eigenvalue separation times machine precision).
    """
    if parity not in (1, -1):
        raise ValueError("parity must be +1 or -1")
    v = np.asarray(v, dtype=complex)
    nv = np.linalg.norm(v)
    if nv == 0:
        raise DegenerateGaugeError("zero vector has no gauge")
    w = P.apply(v.conj())
    overlap = np.vdot(v, w)
    if abs(overlap) == 0:
        raise GaugeError("vector is orthogonal to its PT image (broken PT phase)")
    phase = overlap / abs(overlap)
    if threshold is None:
        threshold = np.sqrt(tol.tolMatch)
    mismatch = np.linalg.norm(w - phase * v) / nv
    if mismatch > threshold:
        raise GaugeError(f"no PT gauge: ||PT v - e^(i chi) v|| = {mismatch:.3e}")
    if parity == -1:
        phase = -phase
    out = v * np.sqrt(phase)
    re = out.real
    k = int(np.argmax(np.abs(re)))
    if abs(re[k]) <= tol.tolNorm * nv:
        raise DegenerateGaugeError("real part of the gauge-fixed vector vanishes")
    if re[k] < 0:
        out = -out
    return out


def biorthogonal_overlap(u: np.ndarray, w: np.ndarray) -> complex:
    """Dirac inner product ``<u|w>`` (``u`` conjugated)."""
    u = np.asarray(u)
    w = np.asarray(w)
    if u.shape != w.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {w.shape}")
    return complex(np.vdot(u, w))


@dataclass(frozen=True)
class CoalescenceReport:
    center: complex
    size: int
    indices: tuple
    min_overlap: float
    span_rank: int
    is_ep: bool


def _clusters(values: np.ndarray, radius: float) -> list[list[int]]:
    """Single-linkage clusters of complex values within ``radius``."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    order = np.argsort(values.real, kind="stable")
    for p, i in enumerate(order):
        for j in order[p + 1:]:
            if values.real[j] - values.real[i] > radius:
                break
            if abs(values[j] - values[i]) <= radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: (values[g[0]].real, values[g[0]].imag))


def cluster_sizes(es: EigenSystem, radius: float) -> np.ndarray:
    """Size of the eigenvalue cluster each index belongs to."""
    sizes = np.ones(len(es), dtype=int)
    for group in _clusters(np.asarray(es.eigenvalues), radius):
        sizes[group] = len(group)
    return sizes


def default_cluster_radius(es: EigenSystem, tol: Tolerances = DEFAULT_TOL) -> float:
    # a k-fold Jordan block splits by ~ (eps ||M||)^(1/k); cover k <= 3
    return max(tol.tolMatch, 10.0 * (_EPS * max(es.matrix_norm, 1.0)) ** (1.0 / 3.0))


def detect_coalescence(es: EigenSystem, leftEs: EigenSystem, tol: Tolerances = DEFAULT_TOL,
                       radius: float | None = None, rank_tol: float = 1e-3) -> list[CoalescenceReport]:
    """Report eigenvalue clusters of size >= 2 and flag exceptional points.

    ``leftEs`` is the eigensystem of the conjugate-transpose matrix; its
    vectors at ``conj(lam)`` are the left eigenvectors.  For each cluster
    the report carries the smallest, over right vectors, of the largest
    ``|<l|r>|`` against left vectors in the cluster, and the numerical rank
    of the right vectors (relative singular-value cut ``rank_tol``).  A
    cluster is an EP when that overlap is below ``tolEP`` or the span is
    rank deficient.
    """
    if radius is None:
        radius = default_cluster_radius(es, tol)
    lam = np.asarray(es.eigenvalues)
    left_lam = np.conj(np.asarray(leftEs.eigenvalues))
    reports = []
    for group in _clusters(lam, radius):
        if len(group) < 2:
            continue
        center = complex(lam[group].mean())
        lidx = [j for j in range(len(left_lam)) if abs(left_lam[j] - center) <= radius * len(group)]
        R = es.vectors[:, group]
        if lidx:
            L = leftEs.vectors[:, lidx]
            G = np.abs(L.conj().T @ R)
            min_overlap = float(G.max(axis=0).min())
        else:
            min_overlap = 0.0
        sv = np.linalg.svd(R, compute_uv=False)
        rank = int(np.sum(sv > rank_tol * sv[0]))
        is_ep = min_overlap <= tol.tolEP or rank < len(group)
        reports.append(CoalescenceReport(center, len(group), tuple(int(g) for g in group),
                                         min_overlap, rank, bool(is_ep)))
    return reports


def cluster_eigenvector(M: np.ndarray, center: complex) -> np.ndarray:
    """Unit null vector of ``M - center I`` from the smallest singular triplet.

    At a k-fold exceptional point the individual eigenvectors returned by a
    dense solver carry errors of order ``eps^(1/k)``, while the cluster mean
    is accurate to ``O(eps)``; the singular-vector route recovers the single
    coalesced eigenvector to working precision.  The phase makes the
    largest entry real and positive.
    """
    M = np.asarray(M, dtype=complex)
    _, _, vh = np.linalg.svd(M - center * np.eye(M.shape[0]))
    v = vh[-1].conj()
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])
