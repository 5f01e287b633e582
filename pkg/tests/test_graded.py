import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from superfock import fock
from superfock.dynamics import SuperchargeSpec, build_G
from superfock.fock import ModeConfig, anticomm, comm, dag
from superfock.graded import (
    GradedAlgebra,
    GradedElement,
    distance,
    generator_theta,
    theta_matrix_model,
)

CONFIG = ModeConfig(1, 1, 5)
ALG = GradedAlgebra(CONFIG)
G = build_G(SuperchargeSpec(CONFIG))
a = fock.annihilator(CONFIG, "fermion", 0)
b = fock.annihilator(CONFIG, "boson", 0)
P1 = fock.safe_projector(CONFIG, 1)


def random_element(seed: int) -> GradedElement:
    rng = np.random.default_rng(seed)
    d = CONFIG.dim

    def m():
        return rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))

    return GradedElement(m(), m())


def close(x, y, tol=1e-10):
    return distance(x, y) <= tol


def test_parity_twist():
    assert np.allclose(ALG.parity_twist(a), -a)
    assert np.allclose(ALG.parity_twist(dag(b) @ b), dag(b) @ b)
    assert np.allclose(ALG.parity_twist(G), -G)
    x = random_element(0).body
    assert np.allclose(ALG.parity_twist(ALG.parity_twist(x)), x)


def test_gmul_examples():
    y = random_element(1)
    assert close(ALG.gmul(ALG.one(), y), y)
    soul = ALG.element(soul=random_element(2).body)
    assert close(ALG.gmul(soul, ALG.element(soul=y.soul)), ALG.element())
    # a theta = -theta a
    assert close(ALG.gmul(ALG.element(a), ALG.theta()), ALG.element(soul=-a))
    assert close(ALG.gmul(ALG.theta(), ALG.theta()), ALG.element())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10_000), st.integers(0, 10_000))
def test_gmul_associative(i, j, k):
    x, y, z = random_element(i), random_element(j), random_element(k)
    lhs = ALG.gmul(ALG.gmul(x, y), z)
    rhs = ALG.gmul(x, ALG.gmul(y, z))
    scale = max(fock.max_abs(lhs.body), fock.max_abs(lhs.soul))
    assert distance(lhs, rhs) <= 1e-12 * scale


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_soul_is_two_sided_ideal(i, j):
    x = random_element(i)
    s = ALG.element(soul=random_element(j).soul)
    assert ALG.gmul(x, s).is_soul() and ALG.gmul(s, x).is_soul()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_gstar_involutive_antimultiplicative(i, j):
    x, y = random_element(i), random_element(j)
    assert close(ALG.gstar(ALG.gstar(x)), x)
    lhs = ALG.gstar(ALG.gmul(x, y))
    rhs = ALG.gmul(ALG.gstar(y), ALG.gstar(x))
    assert distance(lhs, rhs) <= 1e-12 * max(1.0, fock.max_abs(lhs.body), fock.max_abs(lhs.soul))


def test_gstar_examples():
    assert close(ALG.gstar(ALG.element(a)), ALG.element(dag(a)))
    assert close(ALG.gstar(ALG.element(soul=G)), ALG.element(soul=-G))
    Gt = generator_theta(G, ALG)
    assert close(ALG.gstar(Gt), Gt)


def test_grassmann_unitary():
    assert close(ALG.grassmann_unitary(G, 0.0), ALG.one())
    U = ALG.grassmann_unitary(G, 0.7)
    assert close(ALG.gmul(ALG.gstar(U), U), ALG.one())
    assert close(ALG.gmul(U, ALG.gstar(U)), ALG.one())
    # U is exactly 1 + i s G_theta
    Gt = generator_theta(G, ALG)
    assert close(U, ALG.one() + Gt.scale(1j * 0.7))
    for s in (0.0, 1.0, 3.2):
        assert np.array_equal(ALG.body_projection(ALG.grassmann_unitary(G, s)), np.eye(CONFIG.dim))


def test_grassmann_flow_on_generators():
    s = 0.83
    expected = {
        "a": (a, s * b),
        "ad": (dag(a), s * dag(b)),
        "b": (b, -s * a),
        "bd": (dag(b), s * dag(a)),
    }
    for name, X in zip(expected, (a, dag(a), b, dag(b))):
        f = ALG.grassmann_flow(ALG.element(X), G, s)
        assert distance(f, ALG.element(*expected[name]), P1) < 1e-12
    th = ALG.grassmann_flow(ALG.theta(), G, s)
    assert close(th, ALG.theta(), 1e-14)


def test_grassmann_flow_is_star_automorphism():
    s = 0.4
    x, y = random_element(5), random_element(6)

    def flow(z):
        return ALG.grassmann_flow(z, G, s)

    lhs = flow(ALG.gmul(x, y))
    rhs = ALG.gmul(flow(x), flow(y))
    assert distance(lhs, rhs) <= 1e-10 * fock.max_abs(lhs.body)
    assert distance(flow(ALG.gstar(x)), ALG.gstar(flow(x))) <= 1e-10 * fock.max_abs(x.body)


def test_body_projection():
    assert np.allclose(ALG.body_projection(ALG.element(a, 17 * b)), a)
    assert np.allclose(ALG.body_projection(ALG.element(soul=b)), 0)


def test_zero_norm_of_soul_vectors():
    x = random_element(9)
    tx = ALG.gmul(ALG.theta(), x)
    n = ALG.gmul(ALG.gstar(tx), tx)
    # only the body can carry a norm, and it is exactly zero
    assert fock.max_abs(n.body) == 0


def test_theta_matrix_model():
    theta, embed = theta_matrix_model(CONFIG)
    assert fock.max_abs(theta @ theta) == 0
    assert fock.max_abs(anticomm(theta, embed(a))) == 0
    assert fock.max_abs(comm(theta, embed(b))) == 0
    assert fock.max_abs(dag(theta) @ theta) > 0.5
