"""Time evolution under the triple and the Dirac-probability audit."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import RangeError, SubspaceLeakError
from .lattice import HamiltonianTriple, ParityOperator

__all__ = [
    "Propagator",
    "EvolutionTrace",
    "ExpansionCoefficients",
    "AuditReport",
    "matrix_exponential",
    "propagator",
    "evolve_states",
    "evolve",
    "expand_in_common_subspace",
    "parallel_evolve",
    "probability_audit",
    "centroid",
]

# beyond this ||M t|| the squaring phase loses all accuracy
_MAX_ARG = 1e6


def matrix_exponential(M: np.ndarray, t: float) -> np.ndarray:
    """``exp(-i M t)`` by scaling and squaring with a Pade approximant.

    Works for defective ``M`` (no eigendecomposition involved).
    """
    M = np.asarray(M, dtype=complex)
    arg = abs(t) * np.linalg.norm(M, 1)
    if not np.isfinite(arg) or arg > _MAX_ARG:
        raise RangeError(f"||M t||_1 = {arg:.3e} is out of range")
    return scipy.linalg.expm(-1j * t * M)


@dataclass(frozen=True, eq=False)
class Propagator:
    matrix: np.ndarray = field(repr=False)
    generator: str
    dt: float


def propagator(M: np.ndarray, dt: float, generator: str = "") -> Propagator:
    return Propagator(matrix_exponential(M, dt), generator, dt)


def evolve_states(state: np.ndarray, M: np.ndarray, times: Sequence[float]) -> np.ndarray:
    """States at each time, shape ``(len(times), n)``.

    ``times`` must be increasing.  A uniform grid reuses one propagator;
    otherwise each step gets its own exponential.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) == 0:
        raise ValueError("times must be a non-empty 1-d sequence")
    steps = np.diff(times)
    if np.any(steps < 0):
        raise ValueError("times must be increasing")
    out = np.empty((len(times), len(state)), dtype=complex)
    psi = np.asarray(state, dtype=complex)
    if times[0] != 0:
        psi = matrix_exponential(M, times[0]) @ psi
    out[0] = psi
    if len(steps) == 0:
        return out
    uniform = np.allclose(steps, steps[0], rtol=1e-12, atol=0)
    U = matrix_exponential(M, steps[0]) if uniform else None
    for k, dt in enumerate(steps, start=1):
        step = U if uniform else matrix_exponential(M, dt)
        psi = step @ psi
        out[k] = psi
    return out


@dataclass(frozen=True, eq=False)
class EvolutionTrace:
    """Per-site Dirac probabilities and global bookkeeping over a time grid.

    ``probabilities[name]`` has shape ``(len(times), n)``; ``states`` keeps
    the amplitudes.  For parallel runs the tracked names are ``phi``,
    ``phi_tilde`` and ``psi``.
    """

    times: np.ndarray
    states: dict = field(repr=False)

    @property
    def probabilities(self) -> dict:
        return {k: np.abs(v) ** 2 for k, v in self.states.items()}

    def norms(self, name: str) -> np.ndarray:
        return np.sum(np.abs(self.states[name]) ** 2, axis=1)

    @property
    def overlap(self) -> np.ndarray:
        """``<phi(t)|phi_tilde(t)>`` per time."""
        return np.einsum("ti,ti->t", self.states["phi"].conj(), self.states["phi_tilde"])

    @property
    def defect(self) -> np.ndarray:
        """``||psi(t) - phi(t) - phi_tilde(t)||`` per time."""
        d = self.states["psi"] - self.states["phi"] - self.states["phi_tilde"]
        return np.linalg.norm(d, axis=1)


def evolve(state: np.ndarray, M: np.ndarray, times: Sequence[float], name: str = "state") -> EvolutionTrace:
    times = np.asarray(times, dtype=float)
    return EvolutionTrace(times, {name: evolve_states(state, M, times)})


@dataclass(frozen=True, eq=False)
class ExpansionCoefficients:
    c: np.ndarray
    matches: list
    truncationResidual: float
    phi0: np.ndarray = field(repr=False)
    phi_tilde0: np.ndarray = field(repr=False)
    psi0: np.ndarray = field(repr=False)


def expand_in_common_subspace(psi0: np.ndarray, family: Sequence, max_leak: float | None = None
                              ) -> ExpansionCoefficients:
    """Project ``psi0`` onto the common-subspace ``psi_n`` and build partners.

    ``c_n = <psi_n|psi0>``, ``phi(0) = sum c_n phi_n`` and likewise for
    ``phi_tilde(0)``; ``psi0`` in the result is the projected state
    ``sum c_n psi_n``.  ``truncationResidual`` is the norm of what is left
    out.  With ``max_leak`` set, a larger residual raises SubspaceLeakError.
    """
    if not family:
        raise ValueError("empty correspondence family")
    Psi = np.stack([t.psi for t in family], axis=1)
    Phi = np.stack([t.phi for t in family], axis=1)
    Phit = np.stack([t.phi_tilde for t in family], axis=1)
    psi0 = np.asarray(psi0, dtype=complex)
    c = Psi.conj().T @ psi0
    projected = Psi @ c
    leak = float(np.linalg.norm(psi0 - projected))
    if max_leak is not None and leak > max_leak:
        raise SubspaceLeakError(f"{leak:.3e} of the state lies outside the common subspace", leak)
    return ExpansionCoefficients(c, [t.match for t in family], leak, Phi @ c, Phit @ c, projected)


def parallel_evolve(triple: HamiltonianTriple, phi0, phi_tilde0, psi0, times) -> EvolutionTrace:
    """Evolve ``phi`` under ``Hn``, ``phi_tilde`` under ``HnDag`` and ``psi`` under ``H``."""
    times = np.asarray(times, dtype=float)
    states = {
        "phi": evolve_states(phi0, triple.Hn, times),
        "phi_tilde": evolve_states(phi_tilde0, triple.HnDag, times),
        "psi": evolve_states(psi0, triple.H, times),
    }
    return EvolutionTrace(times, states)


@dataclass(frozen=True)
class AuditReport:
    """Maximum-over-time deviations of the conservation statements.

    psi_norm      : ``| ||psi||^2 - 1 |``
    phi_norm      : ``| ||phi||^2 - ||phi(0)||^2 |``
    phi_tilde_norm: same for ``phi_tilde``
    overlap       : ``| <phi|phi~> - theta |`` with ``theta`` the t=0 overlap
    norm_identity : ``| ||psi||^2 - ||phi||^2 - ||phi~||^2 - 2 Re theta |``
    norm_balance  : ``| ||phi||^2 - ||phi~||^2 |``
    """

    psi_norm: float
    phi_norm: float
    phi_tilde_norm: float
    overlap: float
    norm_identity: float
    norm_balance: float
    theta: complex
    defect: float
    parity: float | None = None

    def deviations(self) -> dict:
        return {
            "psi_norm": self.psi_norm,
            "phi_norm": self.phi_norm,
            "phi_tilde_norm": self.phi_tilde_norm,
            "overlap": self.overlap,
            "norm_identity": self.norm_identity,
            "norm_balance": self.norm_balance,
        }

    def passed(self, threshold: float = 1e-8) -> bool:
        vals = list(self.deviations().values()) + [self.defect]
        if self.parity is not None:
            vals.append(self.parity)
        return all(v <= threshold for v in vals)


def probability_audit(trace: EvolutionTrace, P: ParityOperator | None = None) -> AuditReport:
    """Audit a parallel trace.  With ``P`` also report ``max ||phi~ - P phi||``."""
    n_psi = trace.norms("psi")
    n_phi = trace.norms("phi")
    n_phit = trace.norms("phi_tilde")
    ov = trace.overlap
    theta = complex(ov[0])
    parity = None
    if P is not None:
        diff = trace.states["phi_tilde"] - P.apply(trace.states["phi"])
        parity = float(np.max(np.linalg.norm(diff, axis=1)))
    return AuditReport(
        psi_norm=float(np.max(np.abs(n_psi - 1.0))),
        phi_norm=float(np.max(np.abs(n_phi - n_phi[0]))),
        phi_tilde_norm=float(np.max(np.abs(n_phit - n_phit[0]))),
        overlap=float(np.max(np.abs(ov - theta))),
        norm_identity=float(np.max(np.abs(n_psi - n_phi - n_phit - 2 * theta.real))),
        norm_balance=float(np.max(np.abs(n_phi - n_phit))),
        theta=theta,
        defect=float(np.max(trace.defect)),
        parity=parity,
    )


def centroid(prob: np.ndarray) -> np.ndarray:
    """Probability-weighted mean site label (1-based) per row."""
    prob = np.atleast_2d(prob)
    sites = np.arange(1, prob.shape[1] + 1)
    return prob @ sites / prob.sum(axis=1)
