"""Lattice models and the Hamiltonian triple {H, Hn, Hn^dagger}.

All three matrices share a Hermitian sub-graph ``H_sub`` and differ only on
the two endpoint sites A and B:

* ``Hn``  adds ``-i*gamma`` on A and ``+i*gamma`` on B,
* ``HnDag`` is its conjugate transpose,
* ``H`` adds a real hopping ``kappa`` between A and B and a real potential
  ``V`` on both.

Site numbering
--------------
Matrix index ``i`` always corresponds to site label ``i + 1``.  For the
uniform chain the basis is ``[A, 1, ..., n, B]`` so A carries label 1, the
interior site ``l`` carries label ``l + 1`` and B carries label ``n + 2``;
this is the "relabeled" 1..N_total view in which a 300-site chain has 298
interior sites.  Custom graphs use the same layout, with the sub-graph sites
given 1-based labels in between A and B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence, Union

import numpy as np

from .errors import InvalidSpecError, SymmetryError

__all__ = [
    "UniformChain",
    "SSHChain",
    "CustomGraph",
    "ModelSpec",
    "CouplingParams",
    "HamiltonianTriple",
    "ParityOperator",
    "build_uniform_triple",
    "build_ssh_triple",
    "build_custom_triple",
    "build_triple",
    "parity_operator",
    "pt_symmetry_residual",
]

SQRT2 = math.sqrt(2.0)


def _finite(name, value):
    if not math.isfinite(value):
        raise InvalidSpecError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class UniformChain:
    """Uniform chain of ``chain_length`` interior sites with hopping ``-J``.

    The endpoint couplings A-1 and B-n are fixed at ``-sqrt(2) J``.
    """

    chain_length: int
    J: float = 1.0

    @classmethod
    def from_total_sites(cls, total_sites: int, J: float = 1.0) -> "UniformChain":
        return cls(chain_length=total_sites - 2, J=J)

    @property
    def total_sites(self) -> int:
        return self.chain_length + 2


@dataclass(frozen=True)
class SSHChain:
    """Dimerized chain of ``sites`` sites, bonds ``-J(1-delta)``, ``-J(1+delta)``."""

    sites: int
    J: float = 1.0
    delta: float = 0.0

    @property
    def total_sites(self) -> int:
        return self.sites


@dataclass(frozen=True)
class CustomGraph:
    """Arbitrary Hermitian sub-graph with endpoint sites attached at ``a`` and ``b``.

    ``edges`` holds ``(i, j, amplitude)`` with 1-based sub-graph labels, each
    undirected bond listed once; ``i == j`` denotes an on-site energy.
    ``mirror`` optionally maps label ``i`` to ``mirror[i - 1]``.
    """

    sites: int
    edges: tuple = ()
    a: int = 1
    b: int = 1
    g: float = 1.0
    mirror: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if self.mirror is not None:
            object.__setattr__(self, "mirror", tuple(int(m) for m in self.mirror))

    @property
    def total_sites(self) -> int:
        return self.sites + 2


ModelSpec = Union[UniformChain, SSHChain, CustomGraph]


@dataclass(frozen=True)
class CouplingParams:
    """Endpoint parameters: gain/loss ``gamma``, A-B hopping ``kappa``, potential ``V``."""

    gamma: float = 0.0
    kappa: float = 0.0
    V: float = 0.0

    def __post_init__(self):
        for name in ("gamma", "kappa", "V"):
            _finite(name, float(getattr(self, name)))


def _frozen(m: np.ndarray) -> np.ndarray:
    m = np.ascontiguousarray(m, dtype=complex)
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class HamiltonianTriple:
    """The matrices ``H``, ``Hn`` and ``HnDag`` together with their inputs.

    ``kappa_sign`` records how ``params.kappa`` enters the A-B matrix element
    of ``H``: ``+1`` for uniform and custom models, ``-1`` for the SSH chain.
    """

    H: np.ndarray
    Hn: np.ndarray
    HnDag: np.ndarray
    spec: ModelSpec
    params: CouplingParams
    site_a: int
    site_b: int
    kappa_sign: int = 1

    @property
    def dimension(self) -> int:
        return self.H.shape[0]

    @property
    def skeleton(self) -> np.ndarray:
        """The gamma-, kappa- and V-free part shared by all three members."""
        return (self.Hn + self.HnDag) / 2

    @property
    def kappa_entry(self) -> float:
        """The A-B matrix element of ``H``."""
        return self.kappa_sign * self.params.kappa

    @property
    def potential_entry(self) -> float:
        """The on-site energy ``H`` adds on A and B (zero for SSH)."""
        return 0.0 if isinstance(self.spec, SSHChain) else self.params.V

    def member(self, name: str) -> np.ndarray:
        """Look up a member by tag ``"H"``, ``"N"`` or ``"NDAG"``."""
        return {"H": self.H, "N": self.Hn, "NDAG": self.HnDag}[name]

    def with_params(self, params: CouplingParams) -> "HamiltonianTriple":
        return build_triple(self.spec, params)

    def hermitian_with(self, V: float, kappa: float) -> np.ndarray:
        """``H`` rebuilt for another ``(V, kappa)`` with the same skeleton."""
        return self.with_params(replace(self.params, V=V, kappa=kappa)).H

    @staticmethod
    def site_label(index: int) -> int:
        return index + 1

    @staticmethod
    def index_of(label: int) -> int:
        return label - 1


def _assemble(skeleton, a, b, params, kappa_entry, potential):
    Hn = skeleton.copy()
    Hn[a, a] += -1j * params.gamma
    Hn[b, b] += 1j * params.gamma
    H = skeleton.copy()
    H[a, b] += kappa_entry
    H[b, a] += kappa_entry
    H[a, a] += potential
    H[b, b] += potential
    return _frozen(H), _frozen(Hn), _frozen(Hn.conj().T)


def build_uniform_triple(chain_length: int, J: float, params: CouplingParams) -> HamiltonianTriple:
    """Uniform chain with endpoint sites attached through ``-sqrt(2) J`` bonds.

    Basis ordering is ``[A, 1, ..., chain_length, B]``.
    """
    if int(chain_length) != chain_length or chain_length < 1:
        raise InvalidSpecError(f"chain_length must be a positive integer, got {chain_length!r}")
    _finite("J", J)
    if J == 0:
        raise InvalidSpecError("J must be nonzero")
    spec = UniformChain(chain_length=int(chain_length), J=float(J))
    edges = tuple((l, l + 1, -J) for l in range(1, chain_length))
    graph = CustomGraph(sites=spec.chain_length, edges=edges, a=1, b=spec.chain_length, g=-SQRT2 * J)
    skeleton = _custom_skeleton(graph, allow_single=True)
    d = skeleton.shape[0]
    H, Hn, HnDag = _assemble(skeleton, 0, d - 1, params, params.kappa, params.V)
    return HamiltonianTriple(H, Hn, HnDag, spec, params, 0, d - 1, 1)


def build_ssh_triple(N: int, J: float, delta: float, params: CouplingParams) -> HamiltonianTriple:
    """SSH chain on sites ``1..N`` with gain/loss on the two ends.

    ``H`` couples the ends with matrix element ``-kappa``; ``params.V`` is
    not used by this model.
    """
    if int(N) != N or N < 2 or N % 2:
        raise InvalidSpecError(f"SSH chain needs an even number of sites >= 2, got {N!r}")
    _finite("J", J)
    _finite("delta", delta)
    if not -1 < delta < 1:
        raise InvalidSpecError(f"dimerization must satisfy |delta| < 1, got {delta!r}")
    if J == 0:
        raise InvalidSpecError("J must be nonzero")
    N = int(N)
    skeleton = np.zeros((N, N), dtype=complex)
    for i in range(N - 1):
        # bond (2j-1, 2j) is weak for delta > 0, bond (2j, 2j+1) is strong
        t = -(J - J * delta) if i % 2 == 0 else -(J + J * delta)
        skeleton[i, i + 1] = skeleton[i + 1, i] = t
    spec = SSHChain(sites=N, J=float(J), delta=float(delta))
    H, Hn, HnDag = _assemble(skeleton, 0, N - 1, params, -params.kappa, 0.0)
    return HamiltonianTriple(H, Hn, HnDag, spec, params, 0, N - 1, -1)


def _custom_skeleton(graph: CustomGraph, allow_single: bool = False) -> np.ndarray:
    n = graph.sites
    if int(n) != n or n < 1:
        raise InvalidSpecError(f"sub-graph needs at least one site, got {n!r}")
    for name in ("a", "b"):
        v = getattr(graph, name)
        if not 1 <= v <= n:
            raise InvalidSpecError(f"attachment site {name}={v} outside 1..{n}")
    if graph.a == graph.b and not allow_single:
        raise InvalidSpecError("attachment sites a and b must differ")
    _finite("g", graph.g)
    d = n + 2
    m = np.zeros((d, d), dtype=complex)
    seen = set()
    for edge in graph.edges:
        if len(edge) != 3:
            raise InvalidSpecError(f"edge must be (site, site, amplitude), got {edge!r}")
        i, j, t = edge
        if not (1 <= i <= n and 1 <= j <= n):
            raise InvalidSpecError(f"dangling edge {edge!r}")
        t = float(t)
        _finite("edge amplitude", t)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise InvalidSpecError(f"edge {key} listed more than once")
        seen.add(key)
        if i == j:
            m[i, i] += t
        else:
            m[i, j] += t
            m[j, i] += t
    m[0, graph.a] = m[graph.a, 0] = graph.g
    m[d - 1, graph.b] = m[graph.b, d - 1] = graph.g
    return m


def build_custom_triple(spec: CustomGraph, params: CouplingParams) -> HamiltonianTriple:
    """Attach endpoint sites A (index 0) and B (last index) to an arbitrary graph."""
    skeleton = _custom_skeleton(spec)
    d = skeleton.shape[0]
    H, Hn, HnDag = _assemble(skeleton, 0, d - 1, params, params.kappa, params.V)
    return HamiltonianTriple(H, Hn, HnDag, spec, params, 0, d - 1, 1)


def build_triple(spec: ModelSpec, params: CouplingParams) -> HamiltonianTriple:
    if isinstance(spec, UniformChain):
        return build_uniform_triple(spec.chain_length, spec.J, params)
    if isinstance(spec, SSHChain):
        return build_ssh_triple(spec.sites, spec.J, spec.delta, params)
    if isinstance(spec, CustomGraph):
        return build_custom_triple(spec, params)
    raise InvalidSpecError(f"unknown model spec {spec!r}")


@dataclass(frozen=True, eq=False)
class ParityOperator:
    """Site mirror as a permutation: ``(P v)[i] = v[permutation[i]]``."""

    permutation: np.ndarray = field(repr=False)

    def __post_init__(self):
        perm = np.asarray(self.permutation, dtype=np.intp)
        perm.setflags(write=False)
        object.__setattr__(self, "permutation", perm)

    @property
    def matrix(self) -> np.ndarray:
        n = len(self.permutation)
        P = np.zeros((n, n))
        P[np.arange(n), self.permutation] = 1.0
        return P

    def apply(self, v: np.ndarray) -> np.ndarray:
        return np.asarray(v)[..., self.permutation]

    def conjugate(self, M: np.ndarray) -> np.ndarray:
        """``P M P`` (P is an involution)."""
        return M[np.ix_(self.permutation, self.permutation)]


def parity_operator(triple: HamiltonianTriple, mirror: Sequence[int] | None = None,
                    check: bool = True) -> ParityOperator:
    """Mirror operator for a triple.

    Chains are always mirrored end to end.  Custom graphs take ``mirror``
    (1-based sub-graph labels) or fall back to ``spec.mirror``; with
    ``check`` the map must leave ``H`` invariant and swap ``a`` with ``b``.
    """
    n = triple.dimension
    spec = triple.spec
    if isinstance(spec, CustomGraph):
        mirror = spec.mirror if mirror is None else tuple(mirror)
        if mirror is None:
            raise SymmetryError("custom graph needs an explicit mirror map")
        if sorted(mirror) != list(range(1, spec.sites + 1)):
            raise SymmetryError(f"mirror map {mirror!r} is not a permutation of 1..{spec.sites}")
        perm = np.empty(n, dtype=np.intp)
        perm[0], perm[n - 1] = n - 1, 0
        perm[1:n - 1] = mirror
        if check:
            if mirror[spec.a - 1] != spec.b:
                raise SymmetryError("mirror map must exchange the attachment sites")
            if np.any(perm[perm] != np.arange(n)):
                raise SymmetryError("mirror map is not an involution")
    else:
        perm = np.arange(n)[::-1].copy()
    P = ParityOperator(perm)
    if check and not np.array_equal(P.conjugate(triple.H), triple.H):
        raise SymmetryError("mirror map does not commute with H")
    return P


def pt_symmetry_residual(triple: HamiltonianTriple, P: ParityOperator) -> float:
    """Max-abs entry of ``P conj(M) P - M`` over ``Hn`` and ``HnDag``."""
    res = 0.0
    for M in (triple.Hn, triple.HnDag):
        res = max(res, float(np.max(np.abs(P.conjugate(M.conj()) - M))))
    return res
