"""Superposition of Hn and HnDag eigenstates into eigenstates of H.

For a real energy ``eps`` shared by the three members, ``psi = phi + phi~``
is an eigenvector of ``H`` exactly when the two endpoint conditions

    V psi_A + k psi_B + i gamma (phi_A - phi~_A) = 0
    V psi_B + k psi_A - i gamma (phi_B - phi~_B) = 0

hold, where ``k`` is the A-B matrix element of ``H``.  With
``phi~ = conj(phi)`` they reduce to a real 2x2 system in ``(V, k)``.

Throughout this module ``kappa`` means that matrix element; for the SSH
chain it is ``-params.kappa`` (see ``HamiltonianTriple.kappa_sign``).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    CorrespondenceViolation,
    DegenerateGaugeError,
    GaugeError,
    NullSuperpositionError,
)
from .lattice import HamiltonianTriple, ParityOperator
from .spectral import (
    DEFAULT_TOL,
    SpectralMatch,
    Tolerances,
    cluster_sizes,
    match_eigensystems,
    pt_gauge_fix,
    triple_eigensystems,
)

log = logging.getLogger(__name__)

__all__ = [
    "EndpointAmplitudes",
    "ParamConstraint",
    "CorrespondenceReport",
    "Triplet",
    "endpoint_condition_residual",
    "solve_hermitian_params",
    "weighted_hermitian_params",
    "build_correspondence",
    "verify_superposition",
    "correspondence_reports",
]


@dataclass(frozen=True)
class EndpointAmplitudes:
    phiA: complex
    phiB: complex

    @classmethod
    def from_vector(cls, v, site_a: int, site_b: int) -> "EndpointAmplitudes":
        return cls(complex(v[site_a]), complex(v[site_b]))

    @property
    def reA(self) -> float:
        return self.phiA.real

    @property
    def reB(self) -> float:
        return self.phiB.real

    @property
    def imA(self) -> float:
        return self.phiA.imag

    @property
    def imB(self) -> float:
        return self.phiB.imag


@dataclass(frozen=True)
class ParamConstraint:
    """Admissible ``(V, kappa)`` for one state.

    ``kind`` is ``"unique"``, ``"line"``, ``"any"`` or ``"infeasible"``.  A
    line is ``base + t * direction`` and, when it conserves ``V + kappa`` or
    ``V - kappa``, ``combination`` names it and ``value`` gives the constant.
    """

    kind: str
    V: float | None = None
    kappa: float | None = None
    base: tuple | None = None
    direction: tuple | None = None
    combination: str | None = None
    value: float | None = None
    residual: float = 0.0

    def point(self, t: float = 0.0) -> tuple[float, float]:
        """A representative ``(V, kappa)``; ``t`` moves along a line."""
        if self.kind == "unique":
            return self.V, self.kappa
        if self.kind == "line":
            return (self.base[0] + t * self.direction[0], self.base[1] + t * self.direction[1])
        if self.kind == "any":
            return 0.0, 0.0
        raise ValueError("infeasible constraint has no point")

    def contains(self, V: float, kappa: float, tol: float = 1e-8) -> bool:
        if self.kind == "any":
            return True
        if self.kind == "infeasible":
            return False
        if self.kind == "unique":
            return abs(V - self.V) <= tol and abs(kappa - self.kappa) <= tol
        dv, dk = V - self.base[0], kappa - self.base[1]
        # distance from the line
        return abs(dv * self.direction[1] - dk * self.direction[0]) <= tol

    def as_dict(self) -> dict:
        out = {"kind": self.kind, "residual": self.residual}
        if self.kind == "unique":
            out.update(V=self.V, kappa=self.kappa)
        if self.kind == "line":
            out.update(base=list(self.base), direction=list(self.direction),
                       combination=self.combination, value=self.value)
        return out


def _line(combination: str, c: float, residual: float = 0.0) -> ParamConstraint:
    h = 1 / math.sqrt(2)
    if combination == "V+kappa":
        return ParamConstraint("line", base=(c / 2, c / 2), direction=(h, -h),
                               combination=combination, value=c, residual=residual)
    return ParamConstraint("line", base=(c / 2, -c / 2), direction=(h, h),
                           combination=combination, value=c, residual=residual)


def _flip_kappa(c: ParamConstraint) -> ParamConstraint:
    """Re-express a constraint on the A-B matrix element as one on ``-kappa``."""
    swap = {"V+kappa": "V-kappa", "V-kappa": "V+kappa"}
    if c.kind == "unique":
        return replace(c, kappa=-c.kappa)
    if c.kind == "line":
        return replace(c, base=(c.base[0], -c.base[1]), direction=(c.direction[0], -c.direction[1]),
                       combination=swap.get(c.combination, c.combination))
    return c


def endpoint_condition_residual(psi, phi, phi_tilde, V: float, kappa: float, gamma: float,
                                site_a: int, site_b: int) -> tuple[float, float]:
    """Moduli of the two endpoint conditions for ``psi = phi + phi_tilde``."""
    a, b = site_a, site_b
    r1 = V * psi[a] + kappa * psi[b] + 1j * gamma * (phi[a] - phi_tilde[a])
    r2 = V * psi[b] + kappa * psi[a] - 1j * gamma * (phi[b] - phi_tilde[b])
    return float(abs(r1)), float(abs(r2))


def solve_hermitian_params(amp: EndpointAmplitudes, gamma: float, tol: float = 1e-8) -> ParamConstraint:
    """Solve ``V Re a + k Re b = g Im a`` and ``k Re a + V Re b = -g Im b``.

    The determinant is ``Re a^2 - Re b^2``.  When it vanishes a consistent
    system fixes only ``V + k`` (``Re a = Re b``) or ``V - k``
    (``Re a = -Re b``) at ``g Im a / Re a``.
    """
    ra, rb, ia, ib = amp.reA, amp.reB, amp.imA, amp.imB
    scale = max(abs(ra), abs(rb), abs(ia), abs(ib))
    if scale == 0:
        return ParamConstraint("any")
    rhs1, rhs2 = gamma * ia, -gamma * ib
    det = ra * ra - rb * rb
    if abs(det) > tol * scale * scale:
        V = (ra * rhs1 - rb * rhs2) / det
        k = (ra * rhs2 - rb * rhs1) / det
        res = math.hypot(V * ra + k * rb - rhs1, k * ra + V * rb - rhs2)
        return ParamConstraint("unique", V=V, kappa=k, residual=res)
    if max(abs(ra), abs(rb)) <= tol * scale:
        # both real parts vanish: 0 = gamma Im a and 0 = gamma Im b
        res = math.hypot(rhs1, rhs2)
        return ParamConstraint("any" if res <= tol * scale * max(1.0, abs(gamma)) else "infeasible",
                               residual=res)
    combination = "V+kappa" if abs(ra - rb) <= abs(ra + rb) else "V-kappa"
    # each equation alone fixes the combination; they must agree
    c1, c2 = rhs1 / ra, rhs2 / rb
    res = abs(c1 - c2)
    if res > tol * max(1.0, abs(c1)):
        return ParamConstraint("infeasible", residual=res)
    return _line(combination, c1, res)


def weighted_hermitian_params(phi, phi_tilde, alpha: float, beta: float, gamma: float,
                              site_a: int, site_b: int, tol: float = 1e-8) -> ParamConstraint:
    """``(V, kappa)`` making ``alpha phi + beta phi_tilde`` an eigenvector of ``H``.

    Solves the four real equations of the weighted endpoint conditions by
    least squares and classifies the solution set by rank.
    """
    a, b = site_a, site_b
    pa = alpha * phi[a] + beta * phi_tilde[a]
    pb = alpha * phi[b] + beta * phi_tilde[b]
    r1 = -1j * gamma * (alpha * phi[a] - beta * phi_tilde[a])
    r2 = 1j * gamma * (alpha * phi[b] - beta * phi_tilde[b])
    A = np.array([[pa.real, pb.real], [pa.imag, pb.imag], [pb.real, pa.real], [pb.imag, pa.imag]])
    y = np.array([r1.real, r1.imag, r2.real, r2.imag])
    scale = max(np.abs(A).max(), np.abs(y).max(), 1e-300)
    U, s, Vt = np.linalg.svd(A)
    rank = int(np.sum(s > tol * scale))
    x, *_ = np.linalg.lstsq(A, y, rcond=tol)
    res = float(np.linalg.norm(A @ x - y))
    if res > tol * scale * 10:
        return ParamConstraint("infeasible", residual=res)
    if rank == 2:
        return ParamConstraint("unique", V=float(x[0]), kappa=float(x[1]), residual=res)
    if rank == 0:
        return ParamConstraint("any", residual=res)
    d = Vt[1]
    if d[0] < 0:
        d = -d
    h = 1 / math.sqrt(2)
    if abs(d[0] - h) < 1e-8 and abs(d[1] + h) < 1e-8:
        return _line("V+kappa", float(x[0] + x[1]), res)
    if abs(d[0] - h) < 1e-8 and abs(d[1] - h) < 1e-8:
        return _line("V-kappa", float(x[0] - x[1]), res)
    return ParamConstraint("line", base=(float(x[0]), float(x[1])), direction=(float(d[0]), float(d[1])),
                           combination="general", residual=res)


@dataclass(frozen=True)
class CorrespondenceReport:
    energy: float
    constraint: ParamConstraint | None
    proportionality: complex | None
    superpositionResidual: float
    gaugeNote: str = ""
    verified: bool = False
    referenceDefect: float | None = None
    extra: dict = field(default_factory=dict)


def verify_superposition(phi, phi_tilde, H, energy: float, tol: Tolerances = DEFAULT_TOL,
                         reference=None, constraint: ParamConstraint | None = None,
                         gauge_note: str = "") -> CorrespondenceReport:
    """Check that ``s = phi + phi_tilde`` is an eigenvector of ``H`` at ``energy``.

    With a ``reference`` vector the least-squares constant ``c`` in
    ``s ~ c * reference`` and the remaining defect are reported too.
    """
    s = np.asarray(phi) + np.asarray(phi_tilde)
    ns = np.linalg.norm(s)
    if ns <= tol.tolNorm * max(np.linalg.norm(phi), 1.0):
        raise NullSuperpositionError("phi + phi_tilde vanishes")
    res = float(np.linalg.norm(H @ s - energy * s) / ns)
    c = defect = None
    if reference is not None:
        ref = np.asarray(reference)
        c = complex(np.vdot(ref, s) / np.vdot(ref, ref))
        defect = float(np.linalg.norm(s - c * ref))
    bound = tol.tolEig * max(np.linalg.norm(H, 2), 1.0)
    return CorrespondenceReport(float(energy), constraint, c, res, gauge_note, res <= bound, defect)


@dataclass(frozen=True, eq=False)
class Triplet:
    """``psi = phi + phi_tilde`` at one common energy.

    ``psi`` has unit Dirac norm and ``phi_tilde = conj(phi)``.  ``parity``
    is the PT gauge sign used: ``P conj(phi) = parity * phi``.
    """

    energy: float
    psi: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    phi_tilde: np.ndarray = field(repr=False)
    match: SpectralMatch
    parity: int
    residuals: dict
    unit_phi: np.ndarray = field(repr=False, default=None)


def _residual(M, v, e):
    return float(np.linalg.norm(M @ v - e * v))


def _triplet(triple, match, esN, esNdag, P, tol, norms):
    H, Hn, Hd = triple.H, triple.Hn, triple.HnDag
    eps = match.energy
    eN = float(esN.eigenvalues[match.idxN].real)
    eD = float(esNdag.eigenvalues[match.idxNdag].real)
    v = esN.vector(match.idxN)
    best = None
    for parity in (1, -1):
        try:
            w = pt_gauge_fix(v, P, tol, parity)
        except DegenerateGaugeError:
            continue
        psi = 2 * w.real
        n = np.linalg.norm(psi)
        r = _residual(H, psi, eps) / n
        if best is None or r < best[0]:
            best = (r, parity, w, n)
    r, parity, w, n = best
    phi = w / n
    phi_t = phi.conj()
    psi = phi + phi_t
    res = {
        "H": _residual(H, psi, eps),
        "N": _residual(Hn, phi, eN),
        "NDAG": _residual(Hd, phi_t, eD),
    }
    for key, M in (("H", H), ("N", Hn), ("NDAG", Hd)):
        vec = psi if key == "H" else phi
        bound = tol.tolEig * norms[key] * max(np.linalg.norm(vec), 1.0)
        if res[key] > bound:
            raise CorrespondenceViolation(
                f"eps={eps:.12g}: {key} residual {res[key]:.3e} exceeds {bound:.3e}", res[key])
    return Triplet(eps, psi, phi, phi_t, match, parity, res, w)


def build_correspondence(triple: HamiltonianTriple, matches: list[SpectralMatch], P: ParityOperator,
                         tol: Tolerances = DEFAULT_TOL, systems=None,
                         on_degenerate: str = "skip") -> list[Triplet]:
    """Gauge-fixed triplets ``(psi_n, phi_n, phi~_n)`` for every match.

    Each ``Hn`` eigenvector is put in the PT gauge whose real part is an
    eigenvector of ``H`` (mirror-even or mirror-odd, whichever has the
    smaller residual), ``phi~ = conj(phi)``, and both are scaled by the same
    real factor so that ``psi = phi + phi~`` is a unit vector.  Matches whose
    ``Hn`` eigenvalue is degenerate are skipped (or raise with
    ``on_degenerate="raise"``).

    Raises
    ------
    GaugeError
        If an ``Hn`` eigenvector has no PT gauge.
    CorrespondenceViolation
        If any of the three residuals exceeds ``tolEig * ||M||``.
    """
    esH, esN, esD = systems if systems is not None else triple_eigensystems(triple, tol)
    norms = {"H": esH.matrix_norm, "N": esN.matrix_norm, "NDAG": esD.matrix_norm}
    sizes = cluster_sizes(esN, tol.tolMatch)
    out = []
    for m in matches:
        if sizes[m.idxN] > 1:
            if on_degenerate == "raise":
                raise DegenerateGaugeError(f"degenerate eigenvalue {m.energy:.12g} of Hn")
            log.info("skipping degenerate match at %.12g", m.energy)
            continue
        out.append(_triplet(triple, m, esN, esD, P, tol, norms))
    return out


def correspondence_reports(triple: HamiltonianTriple, P: ParityOperator,
                           tol: Tolerances = DEFAULT_TOL, systems=None) -> list[CorrespondenceReport]:
    """One report per common energy, failures included rather than raised.

    ``proportionality`` is measured with a unit-norm ``phi`` against the
    unit eigenvector of ``H`` (largest entry positive) when that eigenvalue
    is nondegenerate, so the Hermitian limit gives exactly 2.
    """
    systems = systems if systems is not None else triple_eigensystems(triple, tol)
    esH, esN, esD = systems
    norms = {"H": esH.matrix_norm, "N": esN.matrix_norm, "NDAG": esD.matrix_norm}
    matches = match_eigensystems(esH, esN, esD, tol)
    sizesN = cluster_sizes(esN, tol.tolMatch)
    sizesH = cluster_sizes(esH, tol.tolMatch)
    gamma = triple.params.gamma
    reports = []
    for m in matches:
        extra = {"idxH": m.idxH, "idxN": m.idxN, "idxNdag": m.idxNdag, "matchResidual": m.matchResidual}
        if sizesN[m.idxN] > 1:
            reports.append(CorrespondenceReport(m.energy, None, None, float("nan"),
                                                "degenerate eigenvalue of Hn; excluded", False,
                                                extra=dict(extra, status="skipped")))
            continue
        try:
            t = _triplet(triple, m, esN, esD, P, tol, norms)
        except (GaugeError, CorrespondenceViolation) as exc:
            reports.append(CorrespondenceReport(m.energy, None, None, float("nan"), str(exc), False,
                                                extra=dict(extra, status="failed")))
            continue
        unit = t.unit_phi / np.linalg.norm(t.unit_phi)
        amp = EndpointAmplitudes.from_vector(t.phi, triple.site_a, triple.site_b)
        constraint = solve_hermitian_params(amp, gamma)
        if triple.kappa_sign < 0:
            constraint = _flip_kappa(constraint)
        ref = None
        if sizesH[m.idxH] == 1:
            ref = esH.vector(m.idxH).copy()
            k = int(np.argmax(np.abs(ref)))
            ref = ref * (abs(ref[k]) / ref[k])
        note = "PT-even gauge" if t.parity == 1 else "PT-odd gauge"
        rep = verify_superposition(unit, unit.conj(), triple.H, m.energy, tol, reference=ref,
                                   constraint=constraint, gauge_note=note)
        er = endpoint_condition_residual(t.psi, t.phi, t.phi_tilde, triple.potential_entry,
                                         triple.kappa_entry, gamma, triple.site_a, triple.site_b)
        extra.update(status="verified" if rep.verified else "failed", parity=t.parity,
                     residuals=t.residuals, endpointResiduals=list(er))
        reports.append(CorrespondenceReport(rep.energy, constraint, rep.proportionality,
                                            rep.superpositionResidual, note, rep.verified,
                                            rep.referenceDefect, extra))
    return reports
