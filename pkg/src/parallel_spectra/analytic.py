"""Closed-form eigenstates used as oracles for the numerical stack.

Every constructor re-checks its state against the corresponding matrix and
refuses to return anything whose relative residual exceeds ``ORACLE_TOL``.
Printed formulas are therefore claims that get verified, never trusted
constants.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import CertificationError, ConstraintError, DomainError, NullStateError
from .lattice import (
    CouplingParams,
    ParityOperator,
    build_ssh_triple,
    build_uniform_triple,
)

__all__ = [
    "ORACLE_TOL",
    "ClosedFormState",
    "UniformZeroModes",
    "SSHZeroModes",
    "n2_nonhermitian_eigensystem",
    "n2_hermitian_even_odd_spectrum",
    "zero_mode_order",
    "uniform_zero_modes",
    "ssh_critical_coupling",
    "ssh_zero_modes",
    "uniform_band_edge_state",
    "gaussian_packet",
    "symmetrize_state",
]

ORACLE_TOL = 1e-12
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class ClosedFormState:
    """An analytic eigenstate together with its residual certificate.

    ``vector`` keeps the normalization of the closed form (not necessarily
    unit); ``residual`` is ``||M v - E v|| / (||M|| ||v||)``.
    """

    vector: np.ndarray = field(repr=False)
    energy: complex
    source: str
    requires: dict = field(default_factory=dict)
    residual: float = 0.0

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def normalized(self) -> np.ndarray:
        return self.vector / self.norm


def _certify(M, v, energy, source, requires=None, tol=ORACLE_TOL) -> ClosedFormState:
    v = np.asarray(v, dtype=complex)
    scale = max(np.linalg.norm(M, 2), 1.0) * np.linalg.norm(v)
    res = float(np.linalg.norm(M @ v - energy * v) / scale)
    if not res <= tol:
        raise CertificationError(f"{source}: relative residual {res:.3e} exceeds {tol:.0e}", res)
    v.setflags(write=False)
    return ClosedFormState(v, complex(energy), source, dict(requires or {}), res)


def n2_nonhermitian_eigensystem(gamma: float, J: float = 1.0,
                                radical_branch: bool = True) -> list[ClosedFormState]:
    """The four eigenstates of the two-site uniform ``Hn`` on ``[A, 1, 2, B]``.

    Returned in the order ``phi_1, phi_2, phi_3, phi_4`` with energies
    ``+J sqrt(4 - g^2), -J sqrt(4 - g^2), -J, +J`` where ``g = gamma / J``.
    The first two need ``g^2 <= 4``; pass ``radical_branch=False`` to get
    only the ``+-J`` pair outside that range.
    """
    g = gamma / J
    Hn = build_uniform_triple(2, J, CouplingParams(gamma=gamma)).Hn
    states = []
    if radical_branch:
        if g * g > 4:
            raise DomainError(f"eps = +-J sqrt(4 - g^2) is not real for gamma/J = {g}")
        root = math.sqrt(4 - g * g)
        for label, eps in (("phi_1", root), ("phi_2", -root)):
            a = SQRT2 * (1j * g - eps) ** -0.5
            ac = np.conj(a)
            v = [ac**3, SQRT2 * ac, SQRT2 * a, a**3]
            states.append(_certify(Hn, v, eps * J, f"n2:{label}", {"gamma^2": "<= 4 J^2"}))
    h = SQRT2 / 2
    phi3 = [-1, h * (1j * g - 1), h * (1j * g + 1), 1]
    phi4 = [1, -h * (1j * g + 1), h * (1j * g - 1), 1]
    states.append(_certify(Hn, phi3, -J, "n2:phi_3"))
    states.append(_certify(Hn, phi4, J, "n2:phi_4"))
    return states


def n2_hermitian_even_odd_spectrum(V: float, kappa: float, J: float = 1.0) -> dict[str, ClosedFormState]:
    """Eigenstates of the two-site uniform ``H`` by mirror-sector reduction.

    The even sector ``(x, y, y, x)`` reduces to ``[[V+k, -sqrt2 J], [-sqrt2 J, -J]]``
    and the odd sector ``(x, y, -y, -x)`` to ``[[V-k, -sqrt2 J], [-sqrt2 J, J]]``.
    Vectors carry interior amplitude ``y = 1/sqrt2``.  Keys: ``psi_1+`` /
    ``psi_2+`` are the lower / upper even states, ``psi_1-`` / ``psi_2-``
    the odd ones.
    """
    H = build_uniform_triple(2, J, CouplingParams(kappa=kappa, V=V)).H
    y = SQRT2 / 2
    out = {}
    s = V + kappa
    d = V - kappa
    even_root = math.sqrt((s + J) ** 2 + 8 * J * J)
    odd_root = math.sqrt((d - J) ** 2 + 8 * J * J)
    for lam, sign in ((1, -1), (2, 1)):
        e = 0.5 * ((s - J) + sign * even_root)
        x = -(e + J) * y / (SQRT2 * J)
        out[f"psi_{lam}+"] = _certify(H, [x, y, y, x], e, f"n2:psi_{lam}+", {"sector": "even"})
        e = 0.5 * ((d + J) + sign * odd_root)
        x = (J - e) * y / (SQRT2 * J)
        out[f"psi_{lam}-"] = _certify(H, [x, y, -y, -x], e, f"n2:psi_{lam}-", {"sector": "odd"})
    return out


def zero_mode_order(total_sites: int) -> int:
    """``m`` such that ``total_sites = 4 m + 3``; DomainError otherwise."""
    if total_sites < 3 or total_sites % 4 != 3:
        raise DomainError(f"coalescing zero modes need N = 4m + 3 sites, got {total_sites}")
    return (total_sites - 3) // 4


@dataclass(frozen=True, eq=False)
class UniformZeroModes:
    phi_minus: ClosedFormState
    phi_plus: ClosedFormState
    psi: ClosedFormState
    proportionality: float
    proportionality_defect: float
    biorthogonal_overlap: complex
    gamma: float


def uniform_zero_modes(m: int, J: float = 1.0, V: float = 0.0) -> UniformZeroModes:
    """Coalescing zero modes of the uniform chain with ``N = 4m + 3`` sites.

    ``Phi_-`` is annihilated by ``Hn`` at ``gamma = -2J`` (the sign for which
    the closed form holds), ``Phi_+ = conj(Phi_-)`` by ``HnDag``.  ``Psi``
    is the unit kernel vector of ``H`` with ``kappa = V``, extracted
    numerically and oriented so its first entry is positive, then compared
    with the standing wave ``(1/sqrt2, sin(pi j/2) ..., -1/sqrt2)``.
    The relation ``Phi_+ + Phi_- = c Psi`` is certified and ``c`` reported.
    """
    if int(m) != m or m < 0:
        raise DomainError(f"m must be a non-negative integer, got {m!r}")
    N = 4 * int(m) + 3
    gamma = -2.0 * J
    triple = build_uniform_triple(N - 2, J, CouplingParams(gamma=gamma, kappa=V, V=V))
    labels = np.arange(1, N + 1)
    # site labels 1..N with A = 1 and B = N
    phi = np.zeros(N, dtype=complex)
    phi[0] = 1.0
    phi[N - 1] = -(1j ** (N + 1))
    interior = labels[1:N - 1]
    phi[1:N - 1] = -SQRT2 * 1j ** (interior + 1)
    phi /= math.sqrt(2 * (N - 1))
    req = {"gamma": "-2J", "kappa": "V", "N": "4m+3"}
    phi_minus = _certify(triple.Hn, phi, 0.0, "uniform:Phi_-", req)
    phi_plus = _certify(triple.HnDag, phi.conj(), 0.0, "uniform:Phi_+", req)

    w, vecs = np.linalg.eigh(triple.H)
    k = int(np.argmin(np.abs(w)))
    kernel = vecs[:, k].astype(complex)
    if kernel[0].real < 0:
        kernel = -kernel
    standing = np.zeros(N)
    standing[1:N - 1] = np.sin(np.pi * interior / 2)
    standing[0], standing[N - 1] = 1 / SQRT2, -1 / SQRT2
    standing /= np.linalg.norm(standing)
    if np.linalg.norm(kernel - standing) > 1e-10:
        raise CertificationError("kernel of H does not match the standing wave")
    psi = _certify(triple.H, standing, 0.0, "uniform:Psi", req)

    s = phi_minus.vector + phi_plus.vector
    c = np.vdot(psi.vector, s)
    defect = float(np.linalg.norm(s - c * psi.vector))
    return UniformZeroModes(phi_minus, phi_plus, psi, float(c.real), defect,
                            complex(np.vdot(phi_plus.vector, phi_minus.vector)), gamma)


def ssh_critical_coupling(N: int, J: float, delta: float) -> float:
    """``kappa_c = gamma_c = (-1)^(N/2) J (1 + delta) Delta^(N/2)``.

    The sign factor is 1 whenever ``N`` is a multiple of 4.
    """
    Delta = (1 - delta) / (1 + delta)
    return (-1) ** (N // 2) * J * (1 + delta) * Delta ** (N // 2)


@dataclass(frozen=True, eq=False)
class SSHZeroModes:
    kappa_c: float
    Delta: float
    norm: float
    psi_1: ClosedFormState
    psi_2: ClosedFormState
    psi_plus: ClosedFormState
    psi_minus: ClosedFormState
    phi_zm: ClosedFormState
    eta_zm: ClosedFormState

    @property
    def gamma_c(self) -> float:
        return self.kappa_c


def ssh_zero_modes(N: int, J: float = 1.0, delta: float = 0.1) -> SSHZeroModes:
    """Zero modes of the SSH triple at ``kappa = gamma = kappa_c``.

    ``psi_1`` lives on odd sites with profile ``(-Delta)^(j-1)``, ``psi_2`` on
    even sites with ``(-Delta)^(N/2-j)``; ``phi_zm = (psi_1 + i psi_2)/sqrt2``
    and ``eta_zm = conj(phi_zm)``.  All states are unit vectors.
    """
    if delta == 0:
        raise DomainError("zero modes need nonzero dimerization")
    if int(N) != N or N < 2 or N % 2:
        raise DomainError(f"SSH chain needs an even number of sites, got {N!r}")
    N = int(N)
    Delta = (1 - delta) / (1 + delta)
    kc = ssh_critical_coupling(N, J, delta)
    norm = math.sqrt(2 * delta * J * J / (J * J * (1 + delta) ** 2 - kc * kc))
    half = N // 2
    j = np.arange(1, half + 1)
    odd = np.zeros(N)
    even = np.zeros(N)
    odd[0::2] = (-Delta) ** (j - 1)
    even[1::2] = (-Delta) ** (half - j)
    params = CouplingParams(gamma=kc, kappa=kc)
    triple = build_ssh_triple(N, J, delta, params)
    req = {"kappa": "kappa_c", "gamma": "gamma_c"}
    H, Hn, HnDag = triple.H, triple.Hn, triple.HnDag
    psi1 = _certify(H, SQRT2 * norm * odd, 0.0, "ssh:psi_1", req)
    psi2 = _certify(H, SQRT2 * norm * even, 0.0, "ssh:psi_2", req)
    psip = _certify(H, norm * (odd + even), 0.0, "ssh:psi_+", req)
    psim = _certify(H, norm * (odd - even), 0.0, "ssh:psi_-", req)
    phi = norm * (odd + 1j * even)
    phi_zm = _certify(Hn, phi, 0.0, "ssh:phi_zm", req)
    eta_zm = _certify(HnDag, phi.conj(), 0.0, "ssh:eta_zm", req)
    return SSHZeroModes(kc, Delta, norm, psi1, psi2, psip, psim, phi_zm, eta_zm)


def uniform_band_edge_state(total_sites: int, J: float = 1.0,
                            params: CouplingParams | None = None) -> ClosedFormState:
    """Uniform state ``(1, sqrt2, ..., sqrt2, 1) / sqrt(2(N-1))`` at energy ``-2J``.

    It is an eigenstate of ``H`` only when ``V + kappa = 0``.
    """
    if params is None:
        params = CouplingParams(kappa=-1.0, V=1.0)
    if abs(params.V + params.kappa) > 1e-14 * max(1.0, abs(params.V)):
        raise ConstraintError(f"band-edge state needs V + kappa = 0, got V={params.V}, kappa={params.kappa}")
    if total_sites < 3:
        raise DomainError("need at least one interior site")
    v = np.full(total_sites, SQRT2)
    v[0] = v[-1] = 1.0
    v /= math.sqrt(2 * (total_sites - 1))
    H = build_uniform_triple(total_sites - 2, J, params).H
    return _certify(H, v, -2.0 * J, "uniform:psi_0", {"V+kappa": 0})


def gaussian_packet(total_sites: int, center: float, k: float, alpha: float) -> np.ndarray:
    """Gaussian packet ``exp(-alpha^2 (j - center)^2) exp(i k j)`` on sites ``j = 1..N``.

    Normalized exactly on the lattice.  Warns when the probability FWHM
    ``sqrt(2 ln 2)/alpha`` is not small against ``N/2``.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    width = math.sqrt(2 * math.log(2)) / alpha
    if width >= total_sites / 2:
        warnings.warn(f"packet width {width:.3g} is not small against N/2 = {total_sites / 2}",
                      stacklevel=2)
    j = np.arange(1, total_sites + 1)
    omega = math.sqrt(math.pi / 2) / alpha
    v = omega**-0.5 * np.exp(-(alpha**2) * (j - center) ** 2) * np.exp(1j * k * j)
    return v / np.linalg.norm(v)


def symmetrize_state(v: np.ndarray, P: ParityOperator) -> np.ndarray:
    """Mirror-even part of ``v``, renormalized; exactly invariant under ``P``."""
    v = np.asarray(v, dtype=complex)
    s = v + P.apply(v)
    n = np.linalg.norm(s)
    if n <= 1e-14 * max(np.linalg.norm(v), 1e-300):
        raise NullStateError("state is mirror-odd; symmetric part vanishes")
    # v[i] + v[p(i)] is computed identically at i and p(i): exact symmetry
    return s / n
