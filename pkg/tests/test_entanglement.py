import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from superfock import dynamics as dyn
from superfock import entanglement as ent
from superfock import fock
from superfock.fock import ConfigError, ModeConfig

LN2 = np.log(2)
SINGLE = ModeConfig(1, 1, 9)


def test_reduce_examples():
    v = (fock.basis_vector(SINGLE, (1,), (0,)) + fock.basis_vector(SINGLE, (0,), (1,))) / np.sqrt(2)
    rho = ent.reduce(v, SINGLE, "fermions")
    np.testing.assert_allclose(rho, np.eye(2) / 2, atol=1e-15)
    assert np.isclose(ent.entropy(rho), LN2)
    prod = fock.basis_vector(SINGLE, (1,), (3,))
    for keep in ("fermions", "bosons", ("boson", 0), [1]):
        r = ent.reduce(prod, SINGLE, keep)
        assert np.isclose(np.trace(r), 1)
        assert abs(ent.entropy(r)) < 1e-14
    with pytest.raises(ValueError):
        ent.reduce(2 * prod, SINGLE, "fermions")


def test_entropy_values():
    assert ent.entropy(np.diag([1.0, 0.0])) == 0
    assert np.isclose(ent.entropy(np.eye(2) / 2), LN2)
    assert np.isclose(ent.entropy(np.diag([0.5, 0.25, 0.25, 0.0])), 1.5 * LN2)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31 - 1))
def test_reduced_state_is_density_matrix(seed):
    rng = np.random.default_rng(seed)
    config = ModeConfig(2, 1, 3)
    psi = rng.normal(size=config.dim) + 1j * rng.normal(size=config.dim)
    psi /= np.linalg.norm(psi)
    for keep in ("fermions", "bosons", ("fermion", 1)):
        rho = ent.reduce(psi, config, keep)
        w = np.linalg.eigvalsh(rho)
        assert abs(np.trace(rho) - 1) < 1e-12 and w.min() > -1e-12
        assert np.trace(rho @ rho).real <= 1 + 1e-12
        assert 0 <= ent.entropy(rho) <= np.log(rho.shape[0]) + 1e-12
    # Schmidt symmetry
    assert abs(ent.entropy(ent.reduce(psi, config, "fermions")) - ent.entropy(ent.reduce(psi, config, "bosons"))) < 1e-10


@pytest.mark.parametrize("n", range(1, 9))
def test_single_mode_lemma(n):
    G = dyn.build_G(dyn.SuperchargeSpec(SINGLE))
    U = dyn.SpectralEvolution(G).unitary(0.6)
    for v, sign in zip(ent.single_mode_eigenvectors(SINGLE, n), (1, -1)):
        np.testing.assert_allclose(G @ v, sign * np.sqrt(n) * v, atol=1e-12)
        np.testing.assert_allclose(U @ v, np.exp(sign * 0.6j * np.sqrt(n)) * v, atol=1e-12)
        assert abs(ent.entropy(ent.reduce(v, SINGLE, "fermions")) - LN2) < 1e-10
        assert abs(ent.entropy(ent.reduce(v, SINGLE, "bosons")) - LN2) < 1e-10


def test_single_mode_edge_cases():
    vac, _ = ent.single_mode_eigenvectors(SINGLE, 0)
    assert ent.entropy(ent.reduce(vac, SINGLE, "fermions")) == 0
    with pytest.raises(ConfigError):
        ent.single_mode_eigenvectors(SINGLE, 10)


def test_unitary_equivalence_preserves_entanglement():
    GA = dyn._dense(dyn.build_GA(SINGLE))
    W = expm(0.5j * np.pi * dyn._dense(fock.number_ops(SINGLE).N_f))
    for n in (1, 4):
        for v in ent.single_mode_eigenvectors(SINGLE, n):
            w = W @ v
            lam = (w.conj() @ GA @ w).real
            np.testing.assert_allclose(GA @ w, lam * w, atol=1e-12)
            assert abs(ent.entropy(ent.reduce(w, SINGLE, "fermions")) - ent.entropy(ent.reduce(v, SINGLE, "fermions"))) < 1e-12


@pytest.mark.parametrize("n1,n2,k", [(0, 0, 1.0), (1, 2, 0.7), (3, 0, 1.4)])
@pytest.mark.parametrize("sign", [+1, -1])
def test_two_mode_eigenbasis(n1, n2, k, sign):
    p = ent.TwoModeParams(n1, n2, k)
    config = p.config()
    basis = ent.two_mode_eigenbasis(p, sign)
    M = np.array(basis.psi)
    np.testing.assert_allclose(M.conj() @ M.T, np.eye(4), atol=1e-14)
    G = dyn.build_G(dyn.SuperchargeSpec(config))
    H = dyn.build_H(dyn.SuperchargeSpec(config))
    E = 1 + n1 + k**2 * (1 + n2)
    assert np.isclose(basis.eigenvalue, sign * np.sqrt(E))
    for Phi in (basis.Phi1, basis.Phi2):
        assert abs(np.linalg.norm(Phi) - 1) < 1e-14
        assert np.max(np.abs(G @ Phi - basis.eigenvalue * Phi)) < 1e-10
        assert np.max(np.abs(H @ Phi - E * Phi)) < 1e-10
    assert abs(basis.Phi1.conj() @ basis.Phi2) < 1e-14


def test_two_mode_cutoff_guard():
    p = ent.TwoModeParams(3, 0, 1.0)
    with pytest.raises(ConfigError):
        ent.two_mode_eigenbasis(p, config=ModeConfig(2, 2, 3, (1.0, 1.0)))


def test_degeneracy_structure():
    config = ModeConfig(2, 2, 3, (1.0, 0.6))
    G = dyn._dense(dyn.build_G(dyn.SuperchargeSpec(config)))
    safe = np.real(np.diag(fock.safe_projector(config, 1))) > 0
    Hs = (G @ G)[np.ix_(safe, safe)]
    levels = dyn.degeneracy_report(np.linalg.eigvalsh(Hs), atol=1e-9)
    assert levels[0] == (0.0, 1)
    assert levels[1][1] == 2 and np.isclose(levels[1][0], 0.36)


def test_density_eigenvalue_examples():
    A = 1j / np.sqrt(2)
    B = 1 / np.sqrt(2)
    for kb in ent.KBAR_GRID:
        np.testing.assert_allclose(ent.density_eigenvalues_closed_form(A, B, kb), [0.25] * 4, atol=1e-15)
    np.testing.assert_allclose(ent.density_eigenvalues_closed_form(0, 1, 1.0), [0, 0.25, 0.25, 0.5])
    assert np.isclose(ent.entropy_from_eigenvalues(ent.density_eigenvalues_closed_form(0, 1, 1.0)), 1.5 * LN2)
    lam0 = ent.density_eigenvalues_closed_form(0, 1, 0.0)
    state, config = ent.susino_state(ent.TwoModeParams(0, 0, 0.0, 0, 1))
    bf = np.linalg.eigvalsh(ent.reduce(state, config, "fermions"))
    np.testing.assert_allclose(np.sort(lam0), np.sort(bf), atol=1e-12)
    assert np.isclose(ent.entropy_from_eigenvalues(lam0), LN2)
    with pytest.raises(ValueError):
        ent.density_eigenvalues_closed_form(1, 1, 0.5)


@settings(max_examples=100, deadline=None)
@given(
    re_a=st.floats(-1, 1), im_a=st.floats(-1, 1), re_b=st.floats(-1, 1), im_b=st.floats(-1, 1),
    n1=st.integers(0, 3), n2=st.integers(0, 3), k=st.floats(0, 3),
)
def test_closed_form_matches_partial_trace(re_a, im_a, re_b, im_b, n1, n2, k):
    A, B = complex(re_a, im_a), complex(re_b, im_b)
    r = np.hypot(abs(A), abs(B))
    if r < 1e-3:
        return
    p = ent.TwoModeParams(n1, n2, k, A / r, B / r)
    lam = ent.density_eigenvalues_closed_form(p.A, p.B, p.kbar)
    assert abs(lam.sum() - 1) < 1e-12
    state, config = ent.susino_state(p)
    bf = np.linalg.eigvalsh(ent.reduce(state, config, "fermions"))
    np.testing.assert_allclose(np.sort(lam), np.sort(bf), atol=1e-10)


def test_surface():
    rows, worst = ent.entanglement_surface(phis=ent.phi_grid(64))
    assert worst < 1e-10
    assert len(rows) == 5 * 65
    E = np.array(rows)
    mins = [E[E[:, 0] == kb, 2].min() for kb in ent.KBAR_GRID]
    assert np.all(np.diff(mins) > 0)
    assert np.isclose(mins[0], LN2) and np.isclose(mins[-1], 1.5 * LN2)
    assert E[:, 2].max() <= 2 * LN2 + 1e-12


def test_max_entropy_along_imaginary_mixing():
    for kb in ent.KBAR_GRID:
        p = ent.TwoModeParams.from_mixing(kb, np.pi / 4, np.pi / 2)
        assert abs(ent.brute_force_entropy(p) - 2 * LN2) < 1e-10


def test_real_mixing_maximum():
    # with real A, B the value 2 ln 2 is reached only for kbar = 0
    phis = ent.phi_grid(4096)
    assert np.isclose(ent.mixing_entropy(0.0, phis).max(), 2 * LN2)
    assert ent.mixing_entropy(0.5, phis).max() < 2 * LN2 - 0.1


def test_minima():
    phis = ent.phi_grid(4096)
    assert abs(ent.mixing_entropy(0.0, phis).min() - LN2) < 1e-6
    assert abs(ent.mixing_entropy(1.0, phis).min() - 1.5 * LN2) < 1e-6


@pytest.mark.parametrize("kbar", ent.KBAR_GRID)
def test_extremum_roots_are_stationary(kbar):
    res = ent.extremum_solve(kbar)
    assert res.bracketed
    assert all(0 < r < np.pi for r in res.roots)
    assert max(abs(d) for d in res.derivative) < 1e-6


def test_extremum_examples():
    r0 = ent.extremum_solve(0.0).roots
    assert any(abs(r - np.pi / 4) < 1e-8 for r in r0)
    # pi/4 is the maximum at kbar = 0
    assert np.isclose(ent.mixing_entropy(0.0, np.pi / 4), 2 * LN2)
    r1 = np.array(ent.extremum_solve(1.0).roots)
    np.testing.assert_allclose(np.sort(np.pi - r1), np.sort(r1), atol=1e-8)
    with pytest.raises(ValueError):
        ent.extremum_solve(-1)


def test_literal_prefactor_roots_not_stationary():
    res = ent.extremum_solve(0.5, literal=True)
    assert max(abs(ent.central_derivative(0.5, r)) for r in res.roots) > 0.1


def test_per_fermion():
    phis = ent.phi_grid(256)
    rows = np.array(ent.per_fermion_entropy(0.0, phis))
    E1, E2 = rows[:, 2], rows[:, 3]
    # the coupled fermion stays maximally entangled, the decoupled one vanishes twice per period
    np.testing.assert_allclose(E1, LN2, atol=1e-12)
    assert E2.min() < 1e-8
    assert ent.zero_clusters(E2[:-1]) == 2
    assert E2[0] < 1e-12
    for kb in (0.5, 1.0):
        r = np.array(ent.per_fermion_entropy(kb, ent.phi_grid(32)))
        assert r[:, 2:].max() <= LN2 + 1e-12


def test_zero_clusters():
    assert ent.zero_clusters([0, 0, 1, 1, 0, 1, 0]) == 3
    assert ent.zero_clusters([1, 1]) == 0
