import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from parallel_spectra import (
    CouplingParams,
    build_correspondence,
    match_spectra,
    RangeError,
    SubspaceLeakError,
    build_uniform_triple,
    centroid,
    evolve,
    evolve_states,
    expand_in_common_subspace,
    gaussian_packet,
    matrix_exponential,
    n2_nonhermitian_eigensystem,
    parallel_evolve,
    parity_operator,
    probability_audit,
    propagator,
    symmetrize_state,
    uniform_band_edge_state,
    uniform_zero_modes,
)


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (A + A.conj().T) / 2


def test_expm_zero_is_identity():
    np.testing.assert_array_equal(matrix_exponential(np.zeros((3, 3)), 2.5), np.eye(3))


@given(seed=st.integers(0, 10_000), t=st.floats(-5, 5))
def test_expm_hermitian_unitary(seed, t):
    U = matrix_exponential(random_hermitian(6, seed), t)
    assert np.linalg.norm(U.conj().T @ U - np.eye(6)) <= 1e-12


@pytest.mark.parametrize("t", [0.3, 1.0, 7.0])
def test_expm_jordan_block(t):
    U = matrix_exponential(np.array([[0, 1], [0, 0]]), t)
    np.testing.assert_allclose(U, [[1, -1j * t], [0, 1]], atol=1e-15)


def test_expm_range_error():
    with pytest.raises(RangeError):
        matrix_exponential(np.eye(2) * 1e8, 1.0)
    with pytest.raises(RangeError):
        matrix_exponential(np.eye(2), math.inf)


def test_propagator_metadata():
    p = propagator(np.eye(2), 0.5, "H")
    assert p.generator == "H" and p.dt == 0.5
    np.testing.assert_allclose(p.matrix, np.exp(-0.5j) * np.eye(2))


def test_evolve_rejects_decreasing_times():
    with pytest.raises(ValueError):
        evolve_states(np.ones(2), np.eye(2), [0, 1, 0.5])
    with pytest.raises(ValueError):
        evolve_states(np.ones(2), np.eye(2), [])


def test_nonuniform_grid_matches_uniform():
    H = random_hermitian(5, 3)
    v = np.arange(5, dtype=complex) / np.linalg.norm(np.arange(5))
    a = evolve_states(v, H, [0.0, 0.2, 0.7, 1.5])
    b = np.stack([matrix_exponential(H, t) @ v for t in (0.0, 0.2, 0.7, 1.5)])
    np.testing.assert_allclose(a, b, atol=1e-12)
    c = evolve_states(v, H, [0.5, 1.0])
    np.testing.assert_allclose(c[0], matrix_exponential(H, 0.5) @ v, atol=1e-13)


def test_stationary_eigenstate():
    g = 1.2
    s = n2_nonhermitian_eigensystem(g)[0]
    Hn = build_uniform_triple(2, 1.0, CouplingParams(gamma=g)).Hn
    tr = evolve(s.vector, Hn, np.linspace(0, 10, 41), "phi")
    p = tr.probabilities["phi"]
    assert np.max(np.abs(p - p[0])) <= 1e-12


def test_coalescing_state_stationary():
    z = uniform_zero_modes(1)
    Hn = build_uniform_triple(5, 1.0, CouplingParams(gamma=-2.0)).Hn
    tr = evolve(z.phi_minus.vector, Hn, np.linspace(0, 50, 101))
    np.testing.assert_allclose(tr.states["state"], np.tile(z.phi_minus.vector, (101, 1)), atol=1e-12)


def test_group_velocity():
    n = 300
    H = build_uniform_triple(n - 2, 1.0, CouplingParams()).H
    v = gaussian_packet(n, 100, math.pi / 2, 0.2)
    times = np.linspace(0, 20, 41)
    c = centroid(evolve(v, H, times).probabilities["state"])
    slope = np.polyfit(times, c, 1)[0]
    assert slope == pytest.approx(2.0, rel=0.05)


def test_centroid_of_delta():
    p = np.zeros((2, 5))
    p[0, 2] = 1
    p[1, [0, 4]] = 0.5
    np.testing.assert_allclose(centroid(p), [3, 3])


def test_norm_drift_over_many_steps():
    H = build_uniform_triple(38, 1.0, CouplingParams(kappa=-1.0, V=1.0)).H
    v = gaussian_packet(40, 13, 1.0, 0.3)
    tr = evolve(v, H, 0.1 * np.arange(10_001))
    assert np.max(np.abs(tr.norms("state") - 1)) <= 1e-10


def test_grid_invariance():
    t = build_uniform_triple(20, 1.0, CouplingParams(0.6, -1.0, 1.0))
    v = gaussian_packet(22, 8, 1.0, 0.4)
    for M in (t.H, t.Hn):
        one = evolve_states(v, M, [0, 5.0])[-1]
        many = evolve_states(v, M, np.linspace(0, 5.0, 101))[-1]
        assert np.linalg.norm(one - many) <= 1e-9


def test_expansion_of_single_state(section4_small):
    fam = section4_small.family
    ex = expand_in_common_subspace(fam[7].psi, fam)
    e = np.zeros(len(fam))
    e[7] = 1
    np.testing.assert_allclose(ex.c, e, atol=1e-12)
    assert ex.truncationResidual <= 1e-12
    np.testing.assert_allclose(ex.phi0, fam[7].phi, atol=1e-12)
    assert len(ex.matches) == len(fam)


def test_expansion_of_band_edge_state(section4_small):
    fam = section4_small.family
    psi0 = uniform_band_edge_state(60).vector
    ex = expand_in_common_subspace(psi0, fam)
    assert ex.truncationResidual == pytest.approx(1, abs=1e-10)
    with pytest.raises(SubspaceLeakError) as err:
        expand_in_common_subspace(psi0, fam, max_leak=1e-6)
    assert err.value.residual == pytest.approx(1, abs=1e-10)
    with pytest.raises(ValueError):
        expand_in_common_subspace(psi0, [])


def test_section4_truncation(section4):
    P = section4.P
    psi0 = symmetrize_state(gaussian_packet(300, 100, math.pi / 2, 0.2), P)
    ex = expand_in_common_subspace(psi0, section4.family)
    assert ex.truncationResidual <= 1e-6
    assert np.sum(np.abs(ex.c) ** 2) <= 1 + 1e-12


def _parallel(sec, T=40.0, dt=0.5):
    P = sec.P
    n = sec.triple.dimension
    psi0 = symmetrize_state(gaussian_packet(n, n / 3, math.pi / 2, 0.2), P)
    ex = expand_in_common_subspace(psi0, sec.family)
    times = dt * np.arange(int(round(T / dt)) + 1)
    return ex, parallel_evolve(sec.triple, ex.phi0, ex.phi_tilde0, ex.psi0, times)


def test_parallel_identity_small(section4_small):
    ex, tr = _parallel(section4_small)
    a = probability_audit(tr, section4_small.P)
    assert a.defect <= 1e-8 and a.parity <= 1e-8
    assert max(a.deviations().values()) <= 1e-8
    assert a.overlap <= 1e-10
    assert a.passed()


def test_parallel_identity_section4(section4):
    ex, tr = _parallel(section4, T=200.0)
    a = probability_audit(tr, section4.P)
    assert a.passed(1e-8), a
    # psi stays mirror-even at every time
    psi = tr.states["psi"]
    assert np.max(np.abs(psi - section4.P.apply(psi))) <= 1e-8


def test_fig5_profiles(section4):
    ex, tr = _parallel(section4, T=200.0)
    pr = tr.probabilities
    psi0 = pr["psi"][0]
    # two mirror-symmetric humps at t=0
    left, right = int(np.argmax(psi0[:150])), 150 + int(np.argmax(psi0[150:]))
    assert left + right == 299
    assert psi0[left] == pytest.approx(psi0[right], rel=1e-10)
    assert psi0[150] < 1e-6 * psi0[left]
    # phi is lopsided once the packets meet the ends
    k = int(np.argmin(np.abs(tr.times - 150)))
    phi = pr["phi"][k]
    assert abs(phi[:150].sum() - phi[150:].sum()) > 1e-3 * phi.sum()
    assert np.max(np.abs(pr["psi"] - pr["psi"][:, ::-1])) <= 1e-8


def test_hermitian_limit_parallel():
    t = build_uniform_triple(28, 1.0, CouplingParams(0.0, -1.0, 1.0))
    P = parity_operator(t)
    fam = build_correspondence(t, match_spectra(t), P)
    psi0 = symmetrize_state(gaussian_packet(30, 10, math.pi / 2, 0.4), P)
    ex = expand_in_common_subspace(psi0, fam)
    tr = parallel_evolve(t, ex.phi0, ex.phi_tilde0, ex.psi0, np.linspace(0, 10, 21))
    np.testing.assert_allclose(tr.states["phi"], tr.states["psi"] / 2, atol=1e-13)
    np.testing.assert_allclose(tr.states["phi_tilde"], tr.states["psi"] / 2, atol=1e-13)
    a = probability_audit(tr)
    n0 = np.linalg.norm(ex.psi0) ** 2
    assert a.theta == pytest.approx(n0 / 4, abs=1e-14)
    assert max(a.deviations().values()) <= 1e-12
    assert a.parity is None


def test_generic_state_violates_norm_conservation():
    t = build_uniform_triple(18, 1.0, CouplingParams(0.5, -1.0, 1.0))
    P = parity_operator(t)
    phi0 = gaussian_packet(20, 6, math.pi / 2, 0.5) / 2
    tr = parallel_evolve(t, phi0, P.apply(phi0), 2 * phi0, np.linspace(0, 30, 61))
    a = probability_audit(tr)
    assert a.phi_norm > 1e-2


def test_overlap_constant_for_any_inputs():
    t = build_uniform_triple(10, 1.0, CouplingParams(0.8, 0.3, -0.2))
    rng = np.random.default_rng(5)
    a0, b0 = rng.normal(size=(2, 12)) + 1j * rng.normal(size=(2, 12))
    tr = parallel_evolve(t, a0, b0, a0 + b0, np.linspace(0, 20, 81))
    assert np.max(np.abs(tr.overlap - tr.overlap[0])) <= 1e-10 * abs(tr.overlap[0]) + 1e-12
