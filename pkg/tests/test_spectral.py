import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from parallel_spectra import (
    CouplingParams,
    DegenerateGaugeError,
    EigenSystem,
    GaugeError,
    SolverError,
    Tolerances,
    biorthogonal_overlap,
    build_ssh_triple,
    build_uniform_triple,
    cluster_sizes,
    detect_coalescence,
    eig_general,
    match_eigensystems,
    match_spectra,
    parity_operator,
    pt_gauge_fix,
    real_eigen_subset,
    triple_eigensystems,
)

TOL = Tolerances()


def n2(gamma, kappa=0.0, V=0.0):
    return build_uniform_triple(2, 1.0, CouplingParams(gamma, kappa, V))


@pytest.mark.parametrize("bad", [0.0, -1e-3])
def test_tolerances_must_be_positive(bad):
    with pytest.raises(ValueError):
        Tolerances(tolEP=bad)


def test_eig_two_site_gamma_one():
    es = eig_general(n2(1.0).Hn)
    r3 = math.sqrt(3)
    np.testing.assert_allclose(es.eigenvalues, [-r3, -1, 1, r3], atol=1e-10)
    assert np.all(es.residuals <= TOL.tolEig * es.matrix_norm)
    np.testing.assert_allclose(np.linalg.norm(es.vectors, axis=0), 1, atol=TOL.tolNorm)


def test_eig_diagonal():
    es = eig_general(np.diag([2.0, -1j]))
    np.testing.assert_array_equal(es.eigenvalues, [-1j, 2])
    # -i sorts first, so its eigenvector is e_2
    np.testing.assert_allclose(np.abs(es.vectors), [[0, 1], [1, 0]])


def test_eig_sorted_by_real_then_imag():
    es = eig_general(np.diag([1 + 1j, 1 - 1j, -2, 1]))
    np.testing.assert_array_equal(es.eigenvalues, [-2, 1 - 1j, 1, 1 + 1j])


def test_eig_rejects_bad_input():
    with pytest.raises(ValueError):
        eig_general(np.ones((2, 3)))
    with pytest.raises(ValueError):
        eig_general(np.array([[np.nan, 0], [0, 1]]))


def test_eig_residual_certificate_enforced():
    # an absurdly strict bound makes the certificate fail
    with pytest.raises(SolverError) as info:
        eig_general(np.random.default_rng(0).normal(size=(30, 30)), Tolerances(tolEig=1e-30))
    assert info.value.residuals is not None


@pytest.mark.parametrize("m", [1, 2])
def test_triple_zero_at_ep(m):
    N = 4 * m + 3
    t = build_uniform_triple(N - 2, 1.0, CouplingParams(gamma=-2.0, kappa=0.3, V=0.3))
    es = eig_general(t.Hn)
    near = np.abs(es.eigenvalues) < 1e-3
    assert near.sum() == 3


def test_real_subset_unbroken_and_broken():
    assert real_eigen_subset(eig_general(n2(1.0).Hn)) == [0, 1, 2, 3]
    idx = real_eigen_subset(eig_general(n2(3.0).Hn))
    es = eig_general(n2(3.0).Hn)
    assert len(idx) == 2
    np.testing.assert_allclose(sorted(es.eigenvalues[idx].real), [-1, 1], atol=1e-12)


def test_real_subset_hermitian_all():
    es = eig_general(n2(0.4, 0.3, 0.2).H)
    assert len(real_eigen_subset(es)) == 4


def test_match_section4_count(section4):
    assert len(section4.matches) == 149


def test_match_hermitian_limit_all():
    t = build_uniform_triple(10, 1.0, CouplingParams())
    assert len(match_spectra(t)) == 12


def test_match_finds_minus_root3():
    ms = match_spectra(n2(1.0, kappa=1.0, V=0.0))
    assert any(abs(m.energy + math.sqrt(3)) < 1e-10 for m in ms)
    for m in ms:
        assert m.matchResidual <= TOL.tolMatch


def _shuffled(es, rng):
    p = rng.permutation(len(es))
    return EigenSystem(es.eigenvalues[p], es.vectors[:, p], es.residuals[p], es.matrix_norm, es.source), p


def test_match_invariant_under_input_order():
    t = build_uniform_triple(20, 1.0, CouplingParams(0.75, -1.0, 1.0))
    systems = triple_eigensystems(t)
    ref = [(m.energy, m.idxH, m.idxN, m.idxNdag) for m in match_eigensystems(*systems)]
    rng = np.random.default_rng(7)
    for _ in range(5):
        shuffled, perms = zip(*(_shuffled(es, rng) for es in systems))
        got = match_eigensystems(*shuffled)
        mapped = [(m.energy, perms[0][m.idxH], perms[1][m.idxN], perms[2][m.idxNdag]) for m in got]
        assert mapped == ref


def test_match_tie_takes_smallest_index():
    # duplicate eigenvalue in Hn: the H eigenvalue must take the lower index
    es = EigenSystem(np.array([0.0, 1.0, 1.0], complex), np.eye(3, dtype=complex), np.zeros(3), 1.0)
    esH = EigenSystem(np.array([1.0 + 0j]), np.eye(1, dtype=complex), np.zeros(1), 1.0)
    m = match_eigensystems(esH, es, es)
    assert (m[0].idxN, m[0].idxNdag) == (1, 1)


def test_gauge_fix_fixed_point_and_phase_removal():
    t = n2(1.0)
    P = parity_operator(t)
    v = eig_general(t.Hn).vector(0)
    g = pt_gauge_fix(v, P)
    np.testing.assert_allclose(P.apply(g.conj()), g, atol=1e-12)
    np.testing.assert_allclose(pt_gauge_fix(g, P), g, atol=1e-12)
    np.testing.assert_allclose(pt_gauge_fix(np.exp(0.3j) * g, P), g, atol=1e-12)
    np.testing.assert_allclose(pt_gauge_fix(-g, P), g, atol=1e-12)


def test_gauge_fix_odd_parity():
    t = n2(1.0)
    P = parity_operator(t)
    es = eig_general(t.Hn)
    k = int(np.argmin(np.abs(es.eigenvalues + 1)))
    g = pt_gauge_fix(es.vector(k), P, parity=-1)
    np.testing.assert_allclose(P.apply(g.conj()), -g, atol=1e-12)


def test_gauge_fix_broken_phase_raises():
    t = n2(3.0)
    es = eig_general(t.Hn)
    k = int(np.argmax(np.abs(es.eigenvalues.imag)))
    with pytest.raises(GaugeError):
        pt_gauge_fix(es.vector(k), parity_operator(t))


def test_gauge_fix_zero_real_part():
    P = parity_operator(n2(0.0))
    v = np.array([1, 1, -1, -1], complex) / 2  # real, mirror-odd
    with pytest.raises(DegenerateGaugeError):
        pt_gauge_fix(v, P, parity=1)
    with pytest.raises(DegenerateGaugeError):
        pt_gauge_fix(np.zeros(4), P)
    with pytest.raises(ValueError):
        pt_gauge_fix(v, P, parity=2)


def test_biorthogonal_overlap_basic():
    v = np.array([0.6, 0.8])
    assert biorthogonal_overlap(v, v) == pytest.approx(1)
    w, V = np.linalg.eigh(np.array([[2.0, 1.0], [1.0, -1.0]]))
    assert abs(biorthogonal_overlap(V[:, 0], V[:, 1])) < 1e-14
    assert biorthogonal_overlap([1j, 0], [1, 0]) == -1j
    with pytest.raises(ValueError):
        biorthogonal_overlap(np.ones(2), np.ones(3))


@pytest.mark.parametrize("m", [1, 2])
def test_coalescence_uniform_ep(m):
    N = 4 * m + 3
    t = build_uniform_triple(N - 2, 1.0, CouplingParams(gamma=-2.0))
    reps = detect_coalescence(eig_general(t.Hn), eig_general(t.HnDag))
    eps = [r for r in reps if r.is_ep]
    assert len(eps) == 1
    r = eps[0]
    assert r.size == 3 and abs(r.center) < 1e-4
    assert r.min_overlap <= TOL.tolEP


def test_coalescence_ssh():
    kc = 1.1 * (0.9 / 1.1) ** 10
    t = build_ssh_triple(20, 1.0, 0.1, CouplingParams(gamma=kc, kappa=kc))
    eps = [r for r in detect_coalescence(eig_general(t.Hn), eig_general(t.HnDag)) if r.is_ep]
    assert len(eps) == 1 and eps[0].size == 2 and abs(eps[0].center) < 1e-6


def test_coalescence_none_for_hermitian():
    t = build_uniform_triple(9, 1.0, CouplingParams(kappa=0.4, V=0.2))
    es = eig_general(t.H)
    assert not any(r.is_ep for r in detect_coalescence(es, es))


def test_cluster_sizes():
    es = eig_general(np.diag([0.0, 1e-12, 1.0]))
    np.testing.assert_array_equal(cluster_sizes(es, 1e-8), [2, 2, 1])


@given(gamma=st.floats(0.0, 1.9), n=st.integers(1, 8))
def test_dagger_spectrum_is_conjugate(gamma, n):
    t = build_uniform_triple(n, 1.0, CouplingParams(gamma=gamma))
    a = np.sort_complex(eig_general(t.Hn).eigenvalues)
    b = np.sort_complex(np.conj(eig_general(t.HnDag).eigenvalues))
    # the multisets coincide; compare after a common sort on rounded keys
    key = lambda z: (round(z.real, 6), round(z.imag, 6))
    a = sorted(a, key=key)
    b = sorted(b, key=key)
    assert np.max(np.abs(np.array(a) - np.array(b))) <= 1e-6


@given(gamma=st.floats(0.05, 1.9))
def test_gauged_vector_maps_to_dagger_eigenvector(gamma):
    t = build_uniform_triple(4, 1.0, CouplingParams(gamma=gamma))
    P = parity_operator(t)
    es = eig_general(t.Hn)
    for k in real_eigen_subset(es):
        lam = es.eigenvalues[k].real
        v = pt_gauge_fix(es.vector(k), P)
        c = v.conj()
        assert np.linalg.norm(t.HnDag @ c - lam * c) <= TOL.tolEig * es.matrix_norm
        np.testing.assert_allclose(c, P.apply(v), atol=1e-8)
        np.testing.assert_allclose(pt_gauge_fix(v, P), v, atol=1e-12)
