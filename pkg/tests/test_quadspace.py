import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from kmtheta.errors import DegenerateFormError, InputError, NullVectorError
from kmtheta.quadspace import (InnerProductSpace, delta, delta_gram, inner, normalize, perp_component, sgn,
                               signature)

G22 = np.diag([1.0, 1.0, -1.0, -1.0])
vec4 = arrays(float, 4, elements=st.floats(-5, 5))


@pytest.fixture
def V():
    return InnerProductSpace(G22)


def negative_vector(rng, V):
    while True:
        c = rng.uniform(-3, 3, 4)
        if inner(c, c, V) < -0.5:
            return c


def test_inner_basis_vector(V):
    e3 = np.eye(4)[2]
    assert inner(e3, e3, V) == -1


def test_inner_zero(V, rng):
    assert inner(np.zeros(4), rng.normal(size=4), V) == 0


def test_inner_dimension_mismatch(V):
    with pytest.raises(InputError):
        inner(np.ones(3), np.ones(4), V)


@settings(max_examples=200, deadline=None)
@given(vec4, vec4, vec4, st.floats(-3, 3))
def test_inner_bilinear_symmetric(x, y, z, a):
    V = InnerProductSpace(G22)
    scale = 1 + np.linalg.norm(x) * (np.linalg.norm(y) + np.linalg.norm(z)) * (1 + abs(a))
    assert abs(inner(x, y, V) - inner(y, x, V)) <= 1e-13 * scale
    assert abs(inner(x, a * y + z, V) - (a * inner(x, y, V) + inner(x, z, V))) <= 1e-13 * scale


def test_signature_examples():
    assert signature(InnerProductSpace(G22)) == (2, 2)
    assert signature(InnerProductSpace(np.eye(3))) == (3, 0)


def test_signature_sylvester(rng):
    for _ in range(20):
        A = rng.normal(size=(4, 4))
        if abs(np.linalg.det(A)) < 0.1:
            continue
        W = A.T @ G22 @ A
        w = np.linalg.eigvalsh(W)
        expected = (int(np.sum(w > 0)), int(np.sum(w < 0)))
        assert expected == (2, 2)
        assert signature(InnerProductSpace(W)) == expected


def test_signature_degenerate():
    with pytest.raises(DegenerateFormError):
        signature(InnerProductSpace(np.diag([1.0, 0.0, -1.0])))


def test_asymmetric_gram_rejected():
    with pytest.raises(InputError):
        InnerProductSpace([[1.0, 2.0], [0.0, -1.0]])


def test_delta_examples(V):
    c = np.array([0, 0, 1.0, 0])
    assert delta(c, c, V).value == 0
    assert not delta(c, c, V).positive
    assert delta(c, np.array([0, 0, 0, 1.0]), V).value == 1
    # direct 2x2 determinant: (C,C) = -1, (C',C') = -2, (C,C') = -1
    assert delta(c, np.array([0, 0, 1.0, 1.0]), V).value == pytest.approx((-1) * (-2) - 1)


@settings(max_examples=100, deadline=None)
@given(vec4, vec4, st.floats(0.1, 4), st.floats(-4, -0.1))
def test_delta_scaling(C, Cp, lam, mu):
    V = InnerProductSpace(G22)
    d = delta(C, Cp, V).value
    scaled = delta(lam * C, mu * Cp, V).value
    scale = 1 + (np.linalg.norm(C) * np.linalg.norm(Cp)) ** 2
    assert abs(scaled - lam ** 2 * mu ** 2 * d) <= 1e-12 * lam ** 2 * mu ** 2 * scale


def test_delta_gram_examples(V, rng):
    c = rng.normal(size=4)
    assert delta_gram([c], V) == pytest.approx(inner(c, c, V))
    assert delta_gram([c, c], V) == pytest.approx(0, abs=1e-12)
    E = np.eye(4)
    assert delta_gram([E[2], E[3], E[0], E[1]], V) == pytest.approx(1)


def test_perp_component_examples(V):
    C0 = np.array([0, 0, 1.0, 0])
    C = np.array([1.0, 0, 0, 1])
    assert np.array_equal(perp_component(C, C0, V), C)
    assert np.allclose(perp_component(C0, C0, V), 0)
    with pytest.raises(NullVectorError):
        perp_component(C, np.array([1.0, 0, 1, 0]), V)


def test_perp_component_negative(V, rng):
    for _ in range(200):
        C, C0 = negative_vector(rng, V), negative_vector(rng, V)
        d = delta(C, C0, V)
        if not d.positive:
            continue
        P = perp_component(C, C0, V)
        assert abs(inner(P, C0, V)) <= 1e-12 * np.linalg.norm(C) * np.linalg.norm(C0) * 10
        assert inner(P, P, V) == pytest.approx(d.value / inner(C0, C0, V), rel=1e-10)
        assert inner(P, P, V) < 0


def test_normalize_examples(V):
    C = np.array([0, 0, 2.0, 0])
    assert np.array_equal(normalize(C, V), C / 2)
    u = np.array([0, 0, 0, 1.0])
    assert np.array_equal(normalize(u, V), u)
    with pytest.raises(NullVectorError):
        normalize(np.array([1.0, 0, 1, 0]), V)


@settings(max_examples=100, deadline=None)
@given(vec4, st.floats(0.01, 100))
def test_normalize_unit_and_scale_invariant(C, lam):
    V = InnerProductSpace(G22)
    c = inner(C, C, V)
    if abs(c) < 1e-3:
        return
    u = normalize(C, V)
    assert inner(u, u, V) == pytest.approx(np.sign(c), abs=1e-12)
    assert np.allclose(normalize(lam * C, V), u, rtol=1e-12, atol=1e-14)


def test_sgn_zero():
    assert sgn(0.0) == 0
    assert list(sgn(np.array([-2.0, 0.0, 3.0]))) == [-1, 0, 1]
